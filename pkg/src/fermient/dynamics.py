"""Four-mode test state, the perturbation Hamiltonian and locality checks."""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np
from scipy.linalg import expm

from .fock import enumerate_sector, hopping_matrix, number_matrix, parse_bitstring
from .measure import entanglement
from .models import HamiltonianMatrix


@dataclass(frozen=True)
class PerturbationParams:
    f: float = 0.0  # inter-site hop between modes 1 and 4
    q: float = 0.0  # n_1 n_2
    Gamma: float = 0.0  # n_1
    gamma: float = 0.0  # n_3
    eta: float = 0.0  # intra-site hop between modes 1 and 2

    @classmethod
    def only(cls, name: str, value: float = 1.0) -> "PerturbationParams":
        return cls(**{name: value})

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


@dataclass(frozen=True)
class TestStateParams:
    alpha: float = 1.0
    beta: float = 1.0

    __test__ = False

    def __post_init__(self):
        if abs(self.alpha**2 + self.beta**2 - 2.0) > 1e-12:
            raise ValueError(
                f"alpha^2 + beta^2 must equal 2, got {self.alpha**2 + self.beta**2:.15g}"
            )


def test_state(params: TestStateParams = TestStateParams()) -> np.ndarray:
    """``(i a|1100> + |1001> + |0110> + |0011> + b|0101> + |1010>) / sqrt(6)``."""
    vec = np.zeros(16, dtype=complex)
    terms = (
        ("1100", 1j * params.alpha),
        ("1001", 1.0),
        ("0110", 1.0),
        ("0011", 1.0),
        ("0101", params.beta),
        ("1010", 1.0),
    )
    for bits, c in terms:
        vec[parse_bitstring(bits)] = c
    return vec / np.sqrt(6.0)


test_state.__test__ = False


def perturbation_operator(params: PerturbationParams):
    M = 4
    return (
        params.f * (hopping_matrix(1, 4, M) + hopping_matrix(4, 1, M))
        + params.q * (number_matrix(1, M) @ number_matrix(2, M))
        + params.Gamma * number_matrix(1, M)
        + params.gamma * number_matrix(3, M)
        + params.eta * (hopping_matrix(1, 2, M) + hopping_matrix(2, 1, M))
    )


def perturbation_hamiltonian(params: PerturbationParams) -> HamiltonianMatrix:
    """Perturbation Hamiltonian on the two-particle sector of four modes."""
    basis = enumerate_sector(4, 2)
    mat = basis.project(perturbation_operator(params)).astype(complex)
    return HamiltonianMatrix(basis, mat)


def _sector_vector(vec, H: HamiltonianMatrix) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex)
    outside = np.delete(vec, H.basis.index)
    if outside.size and np.max(np.abs(outside)) > 1e-12:
        raise ValueError("state has weight outside the Hamiltonian's sector")
    return H.basis.restrict(vec)


def first_order_evolve(vec, H: HamiltonianMatrix, eps: float) -> np.ndarray:
    """``psi - i eps H psi``, renormalised."""
    if eps < 0:
        raise ValueError(f"eps must be non-negative, got {eps}")
    c = _sector_vector(vec, H)
    c = c - 1j * eps * (H.matrix @ c)
    return H.basis.embed(c / np.linalg.norm(c))


def evolve(vec, H: HamiltonianMatrix, eps: float) -> np.ndarray:
    """Exact ``exp(-i eps H) psi`` within the sector."""
    c = _sector_vector(vec, H)
    return H.basis.embed(expm(-1j * eps * H.matrix) @ c)


def entanglement_derivative(vec, H: HamiltonianMatrix, partition, step: float = 1e-4) -> float:
    """Central difference of ``E(exp(-i eps H) psi)`` at ``eps = 0``."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    plus = entanglement(evolve(vec, H, step), partition)
    minus = entanglement(evolve(vec, H, -step), partition)
    return (plus - minus) / (2.0 * step)


def parameter_sensitivities(state, partition, base: PerturbationParams, step: float = 1e-4) -> dict:
    """``d/dp (dE/deps)`` for each Hamiltonian parameter.

    dE/deps is linear in the parameters (H is), so the partial derivative is
    the derivative under that term alone.
    """
    out = {}
    for name in PerturbationParams.names():
        H = perturbation_hamiltonian(PerturbationParams.only(name, 1.0))
        out[name] = entanglement_derivative(state, H, partition, step)
    return out


def _radicand_g(a, b):
    return 88 + 64 * a**2 + 32 * b + 64 * b**2 + 10 * a**2 * b**2 + b**4


def _radicand_s(a, b):
    return 208 + 136 * a**2 + 9 * a**4 - 32 * b + 104 * b**2 + 34 * a**2 * b**2 + 9 * b**4


def expansion_oracle_Eg(state: TestStateParams, params: PerturbationParams, eps: float) -> float:
    """Reference first-order expansion of the four-mode entanglement, kept verbatim.

    Its radicand omits an ``alpha**4`` term, so it differs from the exact
    value (about 5e-3 at alpha = beta = 1); it is a comparison target only.
    """
    a, b = state.alpha, state.beta
    p = params
    denom = -6 + np.sqrt(_radicand_g(a, b))
    slope = -4 * (
        4 * p.f * a - 2 * p.q * a * (1 + b) + p.f * a * b * (a**2 - b**2) + 4 * a * p.eta * (1 + b)
    ) / denom
    return float(denom / 6 + slope * eps)


def expansion_oracle_Es(state: TestStateParams, params: PerturbationParams, eps: float) -> float:
    """Reference first-order expansion of the site-partition entanglement."""
    a, b = state.alpha, state.beta
    p = params
    root = np.sqrt(_radicand_s(a, b))
    slope = -16 * (-p.f * a + p.f * a * b * (a**2 - b**2 - 2)) / (3 * root)
    return float((-18 + root) / 3 + slope * eps)
