"""Distinguishing unitary channels: diamond distances, query lower bounds, constructions."""

from .discrimination import (
    SpectralReport,
    advantage_upper_bound,
    diamond_distance,
    hull_distance,
    min_phase_opnorm,
    one_shot_success,
    origin_in_hull,
    phase_align,
    query_lower_bound,
    relative_eigenphases,
    spectral_arc_length,
    spectral_report,
)
from .errors import UnitdiscError

__all__ = [
    "SpectralReport",
    "UnitdiscError",
    "advantage_upper_bound",
    "diamond_distance",
    "hull_distance",
    "min_phase_opnorm",
    "one_shot_success",
    "origin_in_hull",
    "phase_align",
    "query_lower_bound",
    "relative_eigenphases",
    "spectral_arc_length",
    "spectral_report",
]
