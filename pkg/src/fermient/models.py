"""Hubbard dimer and trimer on fixed-N sectors.

Modes are ordered site by site with spin up first:
``(A up, A down, B up, B down, ...)``, i.e. mode ``2*s + 1`` is site ``s``
spin up and ``2*s + 2`` is site ``s`` spin down (sites 0-based).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fock import (
    SectorBasis,
    enumerate_sector,
    hopping_matrix,
    number_matrix,
    parse_bitstring,
)
from .measure import entanglement, von_neumann
from .partition import parse_partition


@dataclass(frozen=True)
class DimerParams:
    t: float = 1.0
    U: float = 0.0

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"hopping t must be positive, got {self.t}")
        if self.U < 0:
            raise ValueError(f"U must be non-negative, got {self.U}")

    @property
    def x(self) -> float:
        return self.U / (4.0 * self.t)

    @property
    def alpha(self) -> float:
        return self.x + np.sqrt(1.0 + self.x**2)

    @classmethod
    def from_alpha(cls, alpha: float, t: float = 1.0) -> "DimerParams":
        """Inverse of ``alpha(x) = x + sqrt(1 + x^2)``: ``x = (alpha - 1/alpha) / 2``."""
        if alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {alpha}")
        x = 0.5 * (alpha - 1.0 / alpha)
        return cls(t=t, U=4.0 * t * x)


@dataclass(frozen=True)
class TrimerParams:
    t: float = 1.0
    beta: float = 0.0

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"hopping t must be positive, got {self.t}")
        if self.beta < 0:
            raise ValueError(f"beta must be non-negative, got {self.beta}")

    @property
    def U(self) -> float:
        return self.beta * self.t


@dataclass(frozen=True)
class HamiltonianMatrix:
    basis: SectorBasis
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.dim


@dataclass(frozen=True)
class EigenSolution:
    energies: np.ndarray
    vectors: np.ndarray  # columns, sector coordinates
    degeneracy: int

    @property
    def ground_energy(self) -> float:
        return float(self.energies[0])

    @property
    def ground_vector(self) -> np.ndarray:
        return self.vectors[:, 0]

    @property
    def ground_space(self) -> np.ndarray:
        return self.vectors[:, : self.degeneracy]


def up(site: int) -> int:
    return 2 * site + 1


def down(site: int) -> int:
    return 2 * site + 2


def hubbard_operator(n_sites: int, t: float, U: float, bonds) -> sp.csr_matrix:
    """``-t sum_{bond, spin} (c_i^+ c_j + h.c.) + U sum_s n_up n_dn`` on the full space."""
    M = 2 * n_sites
    H = sp.csr_matrix((2**M, 2**M))
    for i, j in bonds:
        for mode in (up, down):
            a, b = mode(i), mode(j)
            H = H - t * (hopping_matrix(a, b, M) + hopping_matrix(b, a, M))
    for s in range(n_sites):
        H = H + U * (number_matrix(up(s), M) @ number_matrix(down(s), M))
    return H


def hubbard_hamiltonian(n_sites, t, U, bonds, n_particles) -> HamiltonianMatrix:
    basis = enumerate_sector(2 * n_sites, n_particles)
    op = hubbard_operator(n_sites, t, U, bonds)
    return HamiltonianMatrix(basis, basis.project(op).real.astype(float))


def dimer_hamiltonian(params: DimerParams) -> HamiltonianMatrix:
    """6x6 dimer Hamiltonian on the two-particle sector of four modes."""
    return hubbard_hamiltonian(2, params.t, params.U, [(0, 1)], 2)


def trimer_hamiltonian(params: TrimerParams) -> HamiltonianMatrix:
    """20x20 periodic trimer Hamiltonian on the three-particle sector of six modes."""
    return hubbard_hamiltonian(3, params.t, params.U, [(0, 1), (1, 2), (2, 0)], 3)


def dimer_ground_state_analytic(params_or_alpha) -> np.ndarray:
    """Closed-form dimer ground state as a full 16-component vector."""
    alpha = (
        params_or_alpha.alpha
        if isinstance(params_or_alpha, DimerParams)
        else float(params_or_alpha)
    )
    vec = np.zeros(16, dtype=complex)
    for bits, c in (("1100", 1.0), ("0011", 1.0), ("1001", alpha), ("0110", -alpha)):
        vec[parse_bitstring(bits)] = c
    return -vec / np.sqrt(2.0 * (1.0 + alpha**2))


def dimer_ground_energy(params: DimerParams) -> float:
    return params.U / 2.0 - np.sqrt((params.U / 2.0) ** 2 + 4.0 * params.t**2)


def dimer_curves(alpha: float) -> dict:
    """Closed-form four-partite, site and von Neumann entanglement of the dimer."""
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    a2 = alpha * alpha
    E_g = 3.0 / (1.0 + a2) * np.sqrt(1.0 + 2.0 * a2 / 9.0 + a2 * a2) - 1.0
    E_s = 2.0 / (1.0 + a2) * np.sqrt(13.0 * a2 * a2 + 34.0 * a2 + 13.0) - 6.0
    E_vn = (
        np.log2(2.0 * (1.0 + a2)) - a2 * np.log2(a2 / (2.0 * (1.0 + a2)))
    ) / (1.0 + a2)
    return {"E_g": float(E_g), "E_s": float(E_s), "E_vn": float(E_vn)}


def _gauge_fix(vec, tol=1e-10):
    """Make the first non-negligible amplitude real and positive."""
    scale = np.max(np.abs(vec))
    idx = np.flatnonzero(np.abs(vec) > tol * max(scale, 1.0))[0]
    return vec * (abs(vec[idx]) / vec[idx])


def _canonical_basis(space: np.ndarray, tol=1e-8) -> np.ndarray:
    """Deterministic orthonormal basis of the column span of ``space``.

    Row-reduce so the first vector has the lowest possible leading label and
    vanishes on the other pivots, then orthonormalise in pivot order.
    """
    rows = space.T.copy()
    g, n = rows.shape
    r = 0
    for col in range(n):
        if r == g:
            break
        p = r + int(np.argmax(np.abs(rows[r:, col])))
        if abs(rows[p, col]) < tol:
            continue
        rows[[r, p]] = rows[[p, r]]
        rows[r] /= rows[r, col]
        for q in range(g):
            if q != r:
                rows[q] -= rows[q, col] * rows[r]
        r += 1
    q, _ = np.linalg.qr(rows.T)
    out = np.empty_like(q)
    for k in range(q.shape[1]):
        out[:, k] = _gauge_fix(q[:, k])
    return out


def diagonalize(H, degeneracy_tol: float = 1e-8) -> EigenSolution:
    """Full ascending spectrum with gauge-fixed eigenvectors.

    ``degeneracy_tol`` is relative to the spectral range.  The ground
    multiplet is replaced by a canonical basis (see ``_canonical_basis``) so
    the representative returned first does not depend on LAPACK internals.
    """
    mat = H.matrix if isinstance(H, HamiltonianMatrix) else np.asarray(H)
    if np.max(np.abs(mat - mat.conj().T), initial=0.0) > 1e-10:
        raise ValueError("matrix is not Hermitian")
    energies, vectors = np.linalg.eigh(mat)
    vectors = vectors.astype(complex)
    span = max(energies[-1] - energies[0], 1.0)
    tol = degeneracy_tol * span
    deg = int(np.sum(energies - energies[0] <= tol))
    vectors[:, :deg] = _canonical_basis(vectors[:, :deg])
    for k in range(deg, vectors.shape[1]):
        vectors[:, k] = _gauge_fix(vectors[:, k])
    return EigenSolution(energies, vectors, deg)


def total_spin_ops(mode_count: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Full-space ``(S^2, S_z)`` for site-paired modes ``(up, down)``."""
    if mode_count % 2:
        raise ValueError(f"spin operators need an even mode count, got {mode_count}")
    n_sites = mode_count // 2
    M = mode_count
    Sz = sp.csr_matrix((2**M, 2**M))
    Sp = sp.csr_matrix((2**M, 2**M))
    for s in range(n_sites):
        Sz = Sz + 0.5 * (number_matrix(up(s), M) - number_matrix(down(s), M))
        Sp = Sp + hopping_matrix(up(s), down(s), M)
    Sm = Sp.T.conj()
    S2 = Sm @ Sp + Sz @ Sz + Sz
    return S2.tocsr(), Sz.tocsr()


def translation_operator(n_sites: int) -> sp.csr_matrix:
    """Cyclic shift of sites ``s -> s + 1`` acting on fermion operators.

    Built as the product of site-swap operators so fermionic signs follow
    from the ladder algebra.
    """
    M = 2 * n_sites
    size = 2**M
    T = sp.identity(size, format="csr", dtype=complex)
    for s in range(n_sites - 1):
        T = _site_swap(s, s + 1, M) @ T
    return T


def _mode_swap(i: int, j: int, M: int) -> sp.csr_matrix:
    """Unitary exchanging modes i and j: ``1 - n_i - n_j + c_i^+ c_j + c_j^+ c_i``."""
    ident = sp.identity(2**M, format="csr")
    return (
        ident
        - number_matrix(i, M)
        - number_matrix(j, M)
        + hopping_matrix(i, j, M)
        + hopping_matrix(j, i, M)
    ).tocsr()


def _site_swap(a: int, b: int, M: int) -> sp.csr_matrix:
    return _mode_swap(up(a), up(b), M) @ _mode_swap(down(a), down(b), M)


def sz_block(basis: SectorBasis, sz: float) -> np.ndarray:
    """Indices of sector states with the given total ``S_z``."""
    out = []
    for pos, bits in enumerate(basis.states()):
        value = 0.5 * (sum(bits[0::2]) - sum(bits[1::2]))
        if abs(value - sz) < 1e-12:
            out.append(pos)
    return np.asarray(out, dtype=int)


def trimer_ground_space(params: TrimerParams, sz: float = 0.5, degeneracy_tol: float = 1e-8):
    """Ground energy and the degenerate ground multiplet of one ``S_z`` block.

    The multiplet is returned as columns of full 64-component vectors.
    """
    H = trimer_hamiltonian(params)
    block = sz_block(H.basis, sz)
    if block.size == 0:
        raise ValueError(f"no trimer states with S_z = {sz}")
    sol = diagonalize(H.matrix[np.ix_(block, block)], degeneracy_tol)
    space = np.zeros((H.dim, sol.degeneracy), dtype=complex)
    space[block] = sol.ground_space
    full = np.stack([H.basis.embed(space[:, k]) for k in range(space.shape[1])], axis=1)
    return sol.ground_energy, full


def _symmetry_basis(space: np.ndarray, op, hermitian: bool) -> tuple[np.ndarray, list]:
    small = space.conj().T @ (op @ space)
    if hermitian:
        evals, rot = np.linalg.eigh(0.5 * (small + small.conj().T))
    else:
        evals, rot = np.linalg.eig(small)
    return evals, [_gauge_fix(space @ rot[:, k] / np.linalg.norm(space @ rot[:, k])) for k in range(len(evals))]


def trimer_ground_states(
    params: TrimerParams, sz: float = 0.5, kind: str = "reflection", degeneracy_tol: float = 1e-8
):
    """The two degenerate trimer ground states of an ``S_z`` block.

    ``kind="reflection"`` resolves the pair by the B<->C site swap (the
    reflection through the median at site A) and returns ``[odd, even]``.
    ``kind="chiral"`` resolves it by the cyclic translation and returns the
    two chiral states, which are complex conjugates of each other.
    Returns ``(energy, states)``.
    """
    energy, space = trimer_ground_space(params, sz, degeneracy_tol)
    if space.shape[1] != 2:
        raise ValueError(f"expected a two-fold ground level, found {space.shape[1]}")
    if kind == "reflection":
        evals, states = _symmetry_basis(space, _site_swap(1, 2, 6), hermitian=True)
        order = np.argsort(evals.real)
    elif kind == "chiral":
        evals, states = _symmetry_basis(space, translation_operator(3), hermitian=False)
        order = np.argsort(-np.angle(evals))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return energy, [states[k] for k in order]


def trimer_representative(params: TrimerParams, sz: float = 0.5) -> np.ndarray:
    """Ground state used for the trimer curves: odd under the B<->C swap."""
    return trimer_ground_states(params, sz, "reflection")[1][0]


TRIMER_PARTITIONS = {
    "E_6": "1|2|3|4|5|6",
    "E_site3": "1,2|3,4|5,6",
    "E_bi_A_BC": "1,2|3,4,5,6",
}


def trimer_entanglement(state) -> dict:
    out = {name: entanglement(state, parse_partition(spec, 6)) for name, spec in TRIMER_PARTITIONS.items()}
    out["E_vn_A_BC"] = von_neumann(state, parse_partition(TRIMER_PARTITIONS["E_bi_A_BC"], 6))
    return out


def beta_grid(start: float = 0.0, stop: float = 20.0, points: int = 81) -> np.ndarray:
    return np.linspace(start, stop, points)
