"""Multi-start maximisation of the geometric measure over a particle sector."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .fock import SectorBasis, enumerate_sector
from .measure import ConsistencyError, SectorMeasure, geometric_entanglement
from .partition import Partition, PartitionError, parse_partition

logger = logging.getLogger(__name__)

RECHECK_TOL = 1e-10


@dataclass(frozen=True)
class OptProblem:
    basis: SectorBasis
    partition: Partition

    def __post_init__(self):
        if self.basis.mode_count != self.partition.mode_count:
            raise PartitionError(
                f"sector has {self.basis.mode_count} modes, partition has {self.partition.mode_count}"
            )

    @classmethod
    def from_spec(cls, mode_count: int, particle_number: int, partition: str) -> "OptProblem":
        return cls(enumerate_sector(mode_count, particle_number), parse_partition(partition, mode_count))


@dataclass(frozen=True)
class OptConfig:
    restarts: int = 200
    max_iter: int = 2000
    tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass(frozen=True)
class RestartRecord:
    index: int
    value: float
    iterations: int
    evaluations: int
    converged: bool


@dataclass
class OptResult:
    value: float
    coeffs: np.ndarray
    state: np.ndarray
    records: list[RestartRecord] = field(default_factory=list)

    @property
    def best_so_far(self) -> np.ndarray:
        return np.maximum.accumulate([r.value for r in self.records])

    @property
    def n_converged(self) -> int:
        return sum(r.converged for r in self.records)


def _to_coeffs(x: np.ndarray, n: int) -> np.ndarray:
    c = x[:n] + 1j * x[n:]
    return c / np.linalg.norm(c)


def pin_phase(coeffs: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude coefficient is real positive."""
    k = int(np.argmax(np.abs(coeffs)))
    return coeffs * (abs(coeffs[k]) / coeffs[k])


def gauge_fix(coeffs: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Rotate the global phase so the first non-negligible coefficient is real positive."""
    k = int(np.flatnonzero(np.abs(coeffs) > tol)[0])
    return coeffs * (abs(coeffs[k]) / coeffs[k])


def restart_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for one restart; depends only on ``(seed, index)``."""
    return np.random.default_rng([int(seed), int(index)])


def maximize_entanglement(problem: OptProblem, config: OptConfig = OptConfig()) -> OptResult:
    """Maximise ``E`` over normalised sector states by multi-start Nelder-Mead.

    The ``2 * dim`` real variables are the real and imaginary parts of the
    sector coefficients; each evaluation projects them back onto the unit
    sphere, and each restart's endpoint is phase-pinned before it is kept.
    Restarts are seeded from ``(config.seed, restart index)``.
    """
    n = problem.basis.dim
    objective = SectorMeasure(problem.basis, problem.partition)

    def negative(x):
        return -objective.entanglement(_to_coeffs(x, n))

    records = []
    best_value, best_coeffs = -np.inf, None
    for index in range(config.restarts):
        x0 = restart_rng(config.seed, index).normal(size=2 * n)
        res = minimize(
            negative,
            x0,
            method="Nelder-Mead",
            options={
                "adaptive": True,
                "maxiter": config.max_iter,
                "maxfev": 50 * config.max_iter,
                "xatol": 1e-9,
                "fatol": config.tol,
            },
        )
        coeffs = pin_phase(_to_coeffs(res.x, n))
        value = objective.entanglement(coeffs)
        records.append(RestartRecord(index, value, int(res.nit), int(res.nfev), bool(res.success)))
        if value > best_value:
            best_value, best_coeffs = value, coeffs
        logger.debug("restart %d: E=%.10f nit=%d", index, value, res.nit)

    coeffs = gauge_fix(best_coeffs)
    state = problem.basis.embed(coeffs)
    checked = geometric_entanglement(state, problem.partition).entanglement
    if abs(checked - best_value) > RECHECK_TOL:
        raise ConsistencyError(
            f"optimum {best_value:.12g} does not re-evaluate ({checked:.12g})"
        )
    return OptResult(checked, coeffs, state, records)
