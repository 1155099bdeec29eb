"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

import numpy as np

from .fock import mode_count_of
from .measure import NORMALIZATION_TOL, NormalizationError


def check_state_vector(vec, normalize: bool = False, tol: float = NORMALIZATION_TOL) -> np.ndarray:
    """Return ``vec`` as a 1-d complex array of length ``2**M``.

    Raises ``NormalizationError`` for a state whose norm is off by more than
    ``tol`` unless ``normalize`` is set, in which case it is rescaled.
    """
    arr = np.asarray(vec)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d state vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("state vector contains NaN or infinity")
    mode_count_of(arr)
    arr = arr.astype(complex)
    norm = np.linalg.norm(arr)
    if norm == 0:
        raise NormalizationError("state vector is zero")
    if normalize:
        return arr / norm
    if abs(norm - 1.0) > tol:
        raise NormalizationError(f"state norm is {norm:.12g}; pass normalize=True to rescale")
    return arr


def check_state_batch(X, normalize: bool = False, tol: float = NORMALIZATION_TOL) -> np.ndarray:
    """2-d batch of states, one per row."""
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d array of states, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError("empty batch")
    return np.stack([check_state_vector(row, normalize, tol) for row in arr])


def check_mode_count(mode_count: int) -> int:
    if int(mode_count) != mode_count or mode_count < 1:
        raise ValueError(f"mode count must be a positive integer, got {mode_count}")
    return int(mode_count)
