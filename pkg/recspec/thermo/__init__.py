from recspec.thermo.operators import build_transfer_graph, dominant_eigen, transfer_matrix
from recspec.thermo.pressure import (
    equilibrium_state,
    gibbs_constant,
    hole_eigenvalue_schedule,
    hole_measure_decay,
    kac_check,
    normalize,
    pressure,
    pressure_with_holes,
    spectral_gap,
)
from recspec.thermo.schemas import EquilibriumState, KacReport, Potential, TransferGraph

__all__ = [
    "EquilibriumState",
    "KacReport",
    "Potential",
    "TransferGraph",
    "build_transfer_graph",
    "dominant_eigen",
    "equilibrium_state",
    "gibbs_constant",
    "hole_eigenvalue_schedule",
    "hole_measure_decay",
    "kac_check",
    "normalize",
    "pressure",
    "pressure_with_holes",
    "spectral_gap",
    "transfer_matrix",
]
