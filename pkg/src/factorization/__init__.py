from .colors import rgb_map
from .indicators import DataOperator, IndicatorResult, SamplingGrid, admissible_points, indicator_field
from .scans import (
    HullEstimate,
    ScanVariant,
    TestDomain,
    coefficient_scan,
    convex_hull_estimate,
    disk_grid_family,
    domain_scan,
    radial_family,
)
from .sharp import SharpEigensystem, picard, picard_many, sharp

__all__ = [
    "rgb_map",
    "DataOperator", "IndicatorResult", "SamplingGrid", "admissible_points", "indicator_field",
    "HullEstimate", "ScanVariant", "TestDomain", "coefficient_scan", "convex_hull_estimate",
    "disk_grid_family", "domain_scan", "radial_family",
    "SharpEigensystem", "picard", "picard_many", "sharp",
]
