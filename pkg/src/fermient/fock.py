"""Occupation-number basis and ladder operators on the mapped qubit space.

A state of ``M = 2L`` fermionic modes is stored as a dense complex vector of
length ``2**M``.  Entry ``k`` is the amplitude of the occupation state whose
bits, read with mode 1 as the most significant bit, spell ``k``.  Modes are
1-based everywhere in the public API.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np
import scipy.sparse as sp

ANNIHILATE = "annihilate"
CREATE = "create"

NORM_TOL = 1e-12


class NotParityEigenstateError(ValueError):
    """Raised when a state mixes even and odd particle numbers."""


def label_to_bits(label: int, mode_count: int) -> tuple[int, ...]:
    """Occupation bits ``(n_1, ..., n_M)`` of basis label ``label``."""
    if mode_count < 1:
        raise ValueError(f"mode_count must be positive, got {mode_count}")
    if not 0 <= label < 2**mode_count:
        raise ValueError(f"label {label} out of range for {mode_count} modes")
    return tuple((label >> (mode_count - 1 - j)) & 1 for j in range(mode_count))


def bits_to_label(bits) -> int:
    label = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"occupation numbers must be 0 or 1, got {b}")
        label = (label << 1) | int(b)
    return label


def bitstring(label: int, mode_count: int) -> str:
    return "".join(str(b) for b in label_to_bits(label, mode_count))


def parse_bitstring(text: str) -> int:
    return bits_to_label(int(ch) for ch in text.strip())


def popcount(labels):
    """Vectorised number of set bits."""
    labels = np.asarray(labels, dtype=np.int64)
    count = np.zeros_like(labels)
    work = labels.copy()
    while np.any(work):
        count += work & 1
        work >>= 1
    return count


def mode_count_of(vec) -> int:
    """Infer ``M`` from a dense vector of length ``2**M``."""
    size = np.shape(vec)[0]
    M = int(size).bit_length() - 1
    if size < 2 or 2**M != size:
        raise ValueError(f"state length {size} is not a power of two >= 2")
    return M


@dataclass(frozen=True)
class SectorBasis:
    """Fixed particle-number sector, labels in ascending order."""

    mode_count: int
    particle_number: int
    labels: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def index(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=np.int64)

    def states(self) -> list[tuple[int, ...]]:
        return [label_to_bits(k, self.mode_count) for k in self.labels]

    def embed(self, coeffs) -> np.ndarray:
        """Place sector coefficients into a full ``2**M`` vector."""
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} coefficients, got shape {coeffs.shape}")
        vec = np.zeros(2**self.mode_count, dtype=complex)
        vec[self.index] = coeffs
        return vec

    def restrict(self, vec) -> np.ndarray:
        return np.asarray(vec, dtype=complex)[self.index]

    def project(self, op) -> np.ndarray:
        """Dense block of a full-space operator on this sector."""
        idx = self.index
        if sp.issparse(op):
            op = op.tocsr()
            return op[idx][:, idx].toarray()
        return np.asarray(op)[np.ix_(idx, idx)]


def enumerate_sector(mode_count: int, particle_number: int) -> SectorBasis:
    """All ``binomial(M, N)`` occupation states with ``N`` particles."""
    if mode_count < 1:
        raise ValueError(f"mode_count must be positive, got {mode_count}")
    if not 0 <= particle_number <= mode_count:
        raise ValueError(
            f"particle number {particle_number} outside [0, {mode_count}]"
        )
    labels = []
    for occupied in combinations(range(mode_count), particle_number):
        labels.append(sum(1 << (mode_count - 1 - j) for j in occupied))
    labels.sort()
    assert len(labels) == comb(mode_count, particle_number)
    return SectorBasis(mode_count, particle_number, tuple(labels))


def basis_state(label: int, mode_count: int) -> np.ndarray:
    label_to_bits(label, mode_count)
    vec = np.zeros(2**mode_count, dtype=complex)
    vec[label] = 1.0
    return vec


def fock_state(bits) -> np.ndarray:
    """Basis vector for an occupation tuple or bitstring like ``"1100"``."""
    if isinstance(bits, str):
        bits = [int(ch) for ch in bits]
    bits = list(bits)
    return basis_state(bits_to_label(bits), len(bits))


@lru_cache(maxsize=None)
def _ladder_table(mode_count: int, mode: int, kind: str):
    """Source labels, target labels and signs for one ladder operator.

    The sign is ``(-1)**(n_{i+1} + ... + n_M)`` taken on the source state.
    """
    if kind not in (ANNIHILATE, CREATE):
        raise ValueError(f"unknown ladder kind {kind!r}")
    if not 1 <= mode <= mode_count:
        raise ValueError(f"mode {mode} outside 1..{mode_count}")
    labels = np.arange(2**mode_count, dtype=np.int64)
    shift = mode_count - mode
    occupied = (labels >> shift) & 1
    src = labels[occupied == (1 if kind == ANNIHILATE else 0)]
    dst = src ^ (1 << shift)
    # bits to the right of mode i are the modes j > i
    tail = src & ((1 << shift) - 1)
    signs = 1 - 2 * (popcount(tail) & 1)
    for arr in (src, dst, signs):
        arr.setflags(write=False)
    return src, dst, signs.astype(float)


def apply_ladder(mode: int, kind: str, vec) -> np.ndarray:
    """Apply ``a_i`` or ``a_i^dagger`` to a dense state vector."""
    vec = np.asarray(vec, dtype=complex)
    src, dst, signs = _ladder_table(mode_count_of(vec), mode, kind)
    out = np.zeros_like(vec)
    out[dst] = signs * vec[src]
    return out


def annihilate(mode: int, vec) -> np.ndarray:
    return apply_ladder(mode, ANNIHILATE, vec)


def create(mode: int, vec) -> np.ndarray:
    return apply_ladder(mode, CREATE, vec)


def ladder_matrix(mode: int, kind: str, mode_count: int) -> sp.csr_matrix:
    """Sparse full-space matrix of a ladder operator, same table as ``apply_ladder``."""
    src, dst, signs = _ladder_table(mode_count, mode, kind)
    size = 2**mode_count
    return sp.csr_matrix((signs, (dst, src)), shape=(size, size))


def number_matrix(mode: int, mode_count: int) -> sp.csr_matrix:
    return ladder_matrix(mode, CREATE, mode_count) @ ladder_matrix(mode, ANNIHILATE, mode_count)


def hopping_matrix(i: int, j: int, mode_count: int) -> sp.csr_matrix:
    """``a_i^dagger a_j`` as a sparse matrix."""
    return ladder_matrix(i, CREATE, mode_count) @ ladder_matrix(j, ANNIHILATE, mode_count)


def parity(vec, tol: float = NORM_TOL) -> int:
    """Eigenvalue ``(-1)**N`` of the parity operator, or raise if mixed."""
    vec = np.asarray(vec, dtype=complex)
    support = np.flatnonzero(np.abs(vec) > tol)
    if support.size == 0:
        raise ValueError("parity of the zero vector is undefined")
    odd = popcount(support) & 1
    if np.all(odd == odd[0]):
        return -1 if odd[0] else 1
    raise NotParityEigenstateError("not a parity eigenstate")


def particle_numbers(vec, tol: float = NORM_TOL) -> set[int]:
    vec = np.asarray(vec)
    return set(int(n) for n in popcount(np.flatnonzero(np.abs(vec) > tol)))


def is_normalized(vec, tol: float = NORM_TOL) -> bool:
    return abs(np.linalg.norm(vec) - 1.0) <= tol
