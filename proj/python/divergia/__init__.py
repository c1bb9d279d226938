"""Divergence sets of monotone function families."""

from ._core import (
    arrow,
    box_dimension,
    cantor_levels,
    cli,
    divergence_estimate,
    family_value,
    max_family_check,
    moran_dimension,
    power_mean,
    qa_mean,
    ratio_condition,
)

__all__ = [
    "arrow",
    "box_dimension",
    "cantor_levels",
    "cli",
    "divergence_estimate",
    "family_value",
    "max_family_check",
    "moran_dimension",
    "power_mean",
    "qa_mean",
    "ratio_condition",
]
