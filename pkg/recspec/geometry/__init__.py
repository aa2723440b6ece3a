from recspec.geometry.coding import (
    birkhoff_sum,
    code,
    decode,
    orbit,
    orbit_from_word,
    periodic_point,
    point_of,
)
from recspec.geometry.families import (
    NAMED_MAPS,
    cantor3,
    doubling,
    golden_map,
    linear_map,
    load_map,
    map_from_spec,
    sine_map,
    two_slope_map,
)
from recspec.geometry.potentials import log_derivative, potential_from_map
from recspec.geometry.recurrence import (
    ball_cylinder_sandwich_check,
    distortion_constants,
    radius_grid,
    recurrence_sandwich_check,
    return_times,
    tau_r,
)
from recspec.geometry.schemas import Branch, DistortionData, MapSpec, MarkovExpandingMap

__all__ = [
    "NAMED_MAPS",
    "Branch",
    "DistortionData",
    "MapSpec",
    "MarkovExpandingMap",
    "ball_cylinder_sandwich_check",
    "birkhoff_sum",
    "cantor3",
    "code",
    "decode",
    "distortion_constants",
    "doubling",
    "golden_map",
    "linear_map",
    "load_map",
    "log_derivative",
    "map_from_spec",
    "orbit",
    "orbit_from_word",
    "periodic_point",
    "point_of",
    "potential_from_map",
    "radius_grid",
    "recurrence_sandwich_check",
    "return_times",
    "sine_map",
    "tau_r",
    "two_slope_map",
]
