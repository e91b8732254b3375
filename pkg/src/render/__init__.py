from .images import write_heatmap, write_png, write_ppm
from .manifest import Manifest
from .svg import SvgCanvas
from .tables import write_indicator_csv

__all__ = [
    "write_heatmap",
    "write_png",
    "write_ppm",
    "Manifest",
    "SvgCanvas",
    "write_indicator_csv",
]
