from recspec.spectrum.construction import (
    construct_E_point,
    estimate_recurrence_rate,
    perturbation_bound_check,
    symbolic_rate_profile,
)
from recspec.spectrum.experiments import ae_rate_experiment, dimension_ladder, grid_experiment
from recspec.spectrum.schemas import ConstructionResult, RecurrenceEstimate, SourceConfig
from recspec.spectrum.source import build_source, sample_source_point

__all__ = [
    "ConstructionResult",
    "RecurrenceEstimate",
    "SourceConfig",
    "ae_rate_experiment",
    "build_source",
    "construct_E_point",
    "dimension_ladder",
    "estimate_recurrence_rate",
    "grid_experiment",
    "perturbation_bound_check",
    "sample_source_point",
    "symbolic_rate_profile",
]
