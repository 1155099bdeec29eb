"""Generators of SU(d) in the defining representation."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def generators(d: int) -> np.ndarray:
    """Return the ``d**2 - 1`` generators as a read-only ``(d**2-1, d, d)`` array.

    Order: symmetric ``u_jk`` for ``j < k`` in lexicographic order, then the
    antisymmetric ``v_jk`` in the same order, then the diagonal ``w_1 ... w_{d-1}``.
    Normalisation is ``Tr(g_a g_b) = 2 delta_ab``; for ``d = 2`` these are the
    Pauli matrices x, y, z.
    """
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d}")
    d = int(d)
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    out = np.zeros((d * d - 1, d, d), dtype=complex)
    n = len(pairs)
    for a, (j, k) in enumerate(pairs):
        out[a, j, k] = out[a, k, j] = 1.0
        out[n + a, j, k] = -1j
        out[n + a, k, j] = 1j
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        out[2 * n + l - 1] = np.diag(diag * np.sqrt(2.0 / (l * (l + 1))))
    out.setflags(write=False)
    return out


def generator_labels(d: int) -> list[str]:
    pairs = [(j, k) for j in range(1, d + 1) for k in range(j + 1, d + 1)]
    return (
        [f"u{j},{k}" for j, k in pairs]
        + [f"v{j},{k}" for j, k in pairs]
        + [f"w{l}" for l in range(1, d)]
    )


def decompose(h) -> tuple[complex, np.ndarray]:
    """Coefficients of ``h = c0 * I + sum_a c_a g_a``."""
    h = np.asarray(h, dtype=complex)
    d = h.shape[0]
    gens = generators(d)
    c0 = np.trace(h) / d
    coeffs = np.einsum("aij,ji->a", gens, h) / 2.0
    return c0, coeffs
