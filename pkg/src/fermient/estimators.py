"""scikit-learn style wrappers so the measure composes with pipelines."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .fock import enumerate_sector, mode_count_of
from .measure import geometric_entanglement, von_neumann
from .optimize import OptConfig, OptProblem, maximize_entanglement
from .partition import Partition, parse_partition
from .validation import check_state_batch


class GeometricEntanglement(TransformerMixin, BaseEstimator):
    """Map a batch of pure states (rows) to their entanglement features.

    Parameters
    ----------
    partition : str
        Partition in ``"1,2|3,4"`` form, modes 1-based.
    normalize : bool
        Rescale rows to unit norm instead of rejecting them.
    entropy : bool
        Append the von Neumann entropy column (bipartitions only).

    Output columns are ``tensor_norm, sep_norm, E`` (and ``S_vn``).
    """

    def __init__(self, partition: str = "1|2|3|4", normalize: bool = False, entropy: bool = False):
        self.partition = partition
        self.normalize = normalize
        self.entropy = entropy

    def fit(self, X, y=None):
        X = check_state_batch(X, self.normalize)
        self.mode_count_ = mode_count_of(X[0])
        self.partition_: Partition = parse_partition(self.partition, self.mode_count_)
        if self.entropy and self.partition_.m != 2:
            raise ValueError("entropy=True needs a bipartition")
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "partition_")
        X = check_state_batch(X, self.normalize)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} amplitudes per row, got {X.shape[1]}")
        rows = []
        for vec in X:
            res = geometric_entanglement(vec, self.partition_)
            row = [res.tensor_norm, res.sep_norm, res.entanglement]
            if self.entropy:
                row.append(von_neumann(vec, self.partition_))
            rows.append(row)
        return np.asarray(rows)

    def get_feature_names_out(self, input_features=None):
        names = ["tensor_norm", "sep_norm", "E"]
        if self.entropy:
            names.append("S_vn")
        return np.asarray(names, dtype=object)


class EntanglementMaximizer(BaseEstimator):
    """Search a particle sector for the most entangled state of a partition.

    ``fit`` takes no data; it runs the multi-start search and stores
    ``best_value_``, ``best_state_`` (full vector), ``best_coeffs_`` and
    ``records_``.
    """

    def __init__(
        self,
        mode_count: int = 4,
        particle_number: int = 2,
        partition: str = "1,2|3,4",
        restarts: int = 200,
        max_iter: int = 2000,
        tol: float = 1e-10,
        random_state: int = 0,
    ):
        self.mode_count = mode_count
        self.particle_number = particle_number
        self.partition = partition
        self.restarts = restarts
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def fit(self, X=None, y=None):
        problem = OptProblem(
            enumerate_sector(self.mode_count, self.particle_number),
            parse_partition(self.partition, self.mode_count),
        )
        config = OptConfig(self.restarts, self.max_iter, self.tol, int(self.random_state))
        result = maximize_entanglement(problem, config)
        self.best_value_ = result.value
        self.best_state_ = result.state
        self.best_coeffs_ = result.coeffs
        self.records_ = result.records
        return self

    def score(self, X=None, y=None) -> float:
        check_is_fitted(self, "best_value_")
        return self.best_value_
