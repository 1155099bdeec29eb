"""Geometric multipartite entanglement of fermions in the mode (qubit) picture."""

from .dynamics import (
    PerturbationParams,
    TestStateParams,
    entanglement_derivative,
    first_order_evolve,
    perturbation_hamiltonian,
    test_state,
)
from .estimators import EntanglementMaximizer, GeometricEntanglement
from .fock import (
    SectorBasis,
    annihilate,
    apply_ladder,
    bits_to_label,
    create,
    enumerate_sector,
    fock_state,
    label_to_bits,
    parity,
)
from .measure import (
    MeasureResult,
    correlation_tensor,
    geometric_entanglement,
    reconstruct_density,
    sep_norm,
    von_neumann,
)
from .models import (
    DimerParams,
    TrimerParams,
    diagonalize,
    dimer_curves,
    dimer_ground_state_analytic,
    dimer_hamiltonian,
    total_spin_ops,
    trimer_ground_states,
    trimer_hamiltonian,
)
from .optimize import OptConfig, OptProblem, OptResult, maximize_entanglement
from .partition import Partition, group_state, make_partition, parse_partition, reduced_density
from .sugen import generators

__version__ = "0.1.0"
