"""Bloch correlation tensors and the geometric entanglement measure."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .partition import Partition, PartitionError, group_state, reduced_density
from .sugen import generators

NORMALIZATION_TOL = 1e-9
IMAG_TOL = 1e-10
ENTROPY_CUTOFF = 1e-14


class NormalizationError(ValueError):
    pass


class ConsistencyError(ArithmeticError):
    """Internal numerical inconsistency, e.g. complex expectation of a Hermitian operator."""


@dataclass(frozen=True)
class MeasureResult:
    tensor_norm: float
    sep_norm: float
    entanglement: float

    @property
    def E(self) -> float:
        return self.entanglement

    def as_dict(self) -> dict:
        return {
            "tensor_norm": self.tensor_norm,
            "sep_norm": self.sep_norm,
            "E": self.entanglement,
        }


def _check_normalized(vec):
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > NORMALIZATION_TOL:
        raise NormalizationError(f"state norm is {norm:.12g}, expected 1")


def _generator_expectations(grouped: np.ndarray, axes) -> np.ndarray:
    """``Tr[rho_S (g_{a1} x ... x g_{aK})]`` over the listed subset axes.

    The reduced state on the listed subsets is contracted with one
    generator stack at a time, so no operator on the joint space is formed.
    """
    K = len(axes)
    dims = [grouped.shape[a] for a in axes]
    r = reduced_density(grouped, [a + 1 for a in axes]).reshape(dims * 2)
    for idx, d in enumerate(dims):
        # Tr[rho g] = sum_ij rho_ij g_ji: ket index meets the generator column
        r = np.tensordot(r, generators(d), axes=([0, K - idx], [2, 1]))
    return r


def _real_or_raise(values: np.ndarray) -> np.ndarray:
    if values.size and np.max(np.abs(values.imag)) > IMAG_TOL:
        raise ConsistencyError(
            f"imaginary residue {np.max(np.abs(values.imag)):.3g} in correlation tensor"
        )
    return np.ascontiguousarray(values.real)


def subset_tensor(vec, partition: Partition, positions) -> np.ndarray:
    """Order-K Bloch tensor for the subsets at 1-based ``positions``.

    Entries are ``prod(d_k / 2) * <psi| g_{a_1} x ... x g_{a_K} |psi>``; a
    single position gives that subset's Bloch vector.
    """
    vec = np.asarray(vec, dtype=complex)
    _check_normalized(vec)
    grouped = group_state(vec, partition)
    axes = [int(k) - 1 for k in positions]
    if not axes or any(not 0 <= a < partition.m for a in axes):
        raise PartitionError(f"positions {list(positions)} invalid for {partition.m} subsets")
    pref = np.prod([partition.dims[a] / 2.0 for a in axes])
    return pref * _real_or_raise(_generator_expectations(grouped, axes))


def correlation_tensor(vec, partition: Partition) -> np.ndarray:
    """Full-weight correlation tensor with shape ``(d_1**2-1, ..., d_m**2-1)``."""
    return subset_tensor(vec, partition, range(1, partition.m + 1))


def bloch_vector(vec, partition: Partition, position: int) -> np.ndarray:
    return subset_tensor(vec, partition, [position])


def sep_norm(partition: Partition) -> float:
    """Tensor norm attained by any product state of the partition."""
    return float(np.prod([np.sqrt(d * (d - 1) / 2.0) for d in partition.dims]))


def geometric_entanglement(vec, partition: Partition) -> MeasureResult:
    """``E = ||t|| - ||t||_sep``; reported raw, never clamped."""
    tnorm = float(np.linalg.norm(correlation_tensor(vec, partition)))
    snorm = sep_norm(partition)
    return MeasureResult(tnorm, snorm, tnorm - snorm)


def entanglement(vec, partition: Partition) -> float:
    return geometric_entanglement(vec, partition).entanglement


def entropy(rho) -> float:
    evals = np.linalg.eigvalsh(rho)
    evals = evals[evals > ENTROPY_CUTOFF]
    return 0.0 - float(np.sum(evals * np.log2(evals)))


def von_neumann(vec, partition: Partition) -> float:
    """Entropy (base 2) of the first subset of a bipartition."""
    if partition.m != 2:
        raise PartitionError(f"von Neumann entropy needs a bipartition, got {partition.m} subsets")
    vec = np.asarray(vec, dtype=complex)
    _check_normalized(vec)
    return entropy(reduced_density(group_state(vec, partition), [1]))


def reconstruct_density(vec, partition: Partition) -> np.ndarray:
    """Rebuild ``rho`` from its full Bloch expansion (all ``2**m`` terms).

    Rows and columns use the grouped ordering of ``partition``; for a
    contiguous partition that is the ordinary label ordering.
    """
    dims = partition.dims
    m = partition.m
    total = int(np.prod(dims))
    rho = np.eye(total, dtype=complex).reshape(dims * 2)
    for order in range(1, m + 1):
        for subset in combinations(range(m), order):
            term = subset_tensor(vec, partition, [a + 1 for a in subset]).astype(complex)
            for a in subset:
                term = np.tensordot(term, generators(dims[a]), axes=([0], [0]))
            rest = [a for a in range(m) if a not in subset]
            for a in rest:
                term = np.multiply.outer(term, np.eye(dims[a]))
            # axes are (ket, bra) pairs in `subset + rest` order
            placed = list(subset) + rest
            kets = [2 * placed.index(a) for a in range(m)]
            rho = rho + term.transpose(kets + [k + 1 for k in kets])
    return rho.reshape(total, total) / total


class SectorMeasure:
    """Correlation-tensor evaluator compiled for one sector and partition.

    Every tensor entry is a matrix element of a product of generators between
    sector states; number conservation makes that operator list sparse, so
    the full tensor is one sparse product with ``conj(c) c^T``.  Used as the
    objective inside optimisation loops where the same sector and partition
    are evaluated many times.
    """

    def __init__(self, basis, partition: Partition):
        if basis.mode_count != partition.mode_count:
            raise PartitionError(
                f"sector has {basis.mode_count} modes but partition covers {partition.mode_count}"
            )
        self.basis = basis
        self.partition = partition
        n = basis.dim
        labels = basis.index
        M = partition.mode_count
        factors = []
        for subset in partition.subsets:
            local = np.zeros(n, dtype=np.int64)
            for i in subset:
                local = (local << 1) | ((labels >> (M - i)) & 1)
            gens = generators(2 ** len(subset))
            factors.append(gens[:, local[:, None], local[None, :]])
        dense = factors[0]
        for fac in factors[1:]:
            dense = (dense[:, None] * fac[None]).reshape(-1, n, n)
        self.shape = tuple(d * d - 1 for d in partition.dims)
        self.prefactor = float(np.prod([d / 2.0 for d in partition.dims]))
        self._ops = sp.csr_matrix(dense.reshape(dense.shape[0], n * n))
        self.sep_norm = sep_norm(partition)

    def tensor(self, coeffs) -> np.ndarray:
        c = np.asarray(coeffs, dtype=complex)
        vals = self._ops @ np.outer(c.conj(), c).reshape(-1)
        return self.prefactor * vals.real.reshape(self.shape)

    def entanglement(self, coeffs) -> float:
        """``E`` for sector coefficients; the caller is responsible for normalisation."""
        c = np.asarray(coeffs, dtype=complex)
        vals = self._ops @ np.outer(c.conj(), c).reshape(-1)
        return self.prefactor * float(np.linalg.norm(vals.real)) - self.sep_norm
