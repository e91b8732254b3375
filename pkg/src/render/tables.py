"""
指标结果 → CSV

列：index + 坐标轴（x,y / tau,kappa / center_x,center_y,radius）+ value, log_value, masked
浮点统一 %.17g，保证重复运行逐字节一致。
"""

from __future__ import annotations

import logging
import os

from src.factorization.indicators import IndicatorResult
from src.utils.errors import StorageError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def write_indicator_csv(result: IndicatorResult, path: str) -> str:
    frame = result.to_frame()
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        raise StorageError(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path
