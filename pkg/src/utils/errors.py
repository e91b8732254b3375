"""
异常定义

所有模块抛出的错误都继承自 OneWaveError，CLI 根据类别映射退出码：
  ConfigError → 2，NumericalError → 3，StorageError → 4。
"""

from __future__ import annotations


class OneWaveError(Exception):
    """工具包内所有异常的基类"""

    exit_code = 1


# ── 配置 / 输入 ──

class ConfigError(OneWaveError):
    exit_code = 2

    def __init__(self, message: str, field_path: str = ""):
        self.field_path = field_path
        prefix = f"{field_path}: " if field_path else ""
        super().__init__(f"{prefix}{message}")


class DomainError(OneWaveError, ValueError):
    """参数超出函数定义域"""
    exit_code = 2


class GeometryOverlap(OneWaveError, ValueError):
    exit_code = 2


class TooClose(OneWaveError, ValueError):
    exit_code = 2


class DimensionMismatch(OneWaveError, ValueError):
    exit_code = 2


# ── 数值失败 ──

class NumericalError(OneWaveError):
    exit_code = 3


class SingularMatrix(NumericalError):

    def __init__(self, pivot_index: int, pivot: float, threshold: float):
        self.pivot_index = pivot_index
        self.pivot = pivot
        self.threshold = threshold
        super().__init__(
            f"pivot {pivot_index} has magnitude {pivot:.3e} below threshold {threshold:.3e}"
        )


class NotHermitian(NumericalError):

    def __init__(self, deviation: float, tolerance: float):
        self.deviation = deviation
        self.tolerance = tolerance
        super().__init__(f"‖A − A*‖_max = {deviation:.3e} exceeds {tolerance:.3e}")


class IllConditioned(NumericalError):

    def __init__(self, condition: float, limit: float, context: str = ""):
        self.condition = condition
        self.limit = limit
        where = f" ({context})" if context else ""
        super().__init__(
            f"condition estimate {condition:.3e} exceeds {limit:.1e}{where}; "
            f"k² is close to an eigenvalue of the boundary value problem"
        )


class NearDiskEigenvalue(NumericalError):

    def __init__(self, order: int, proximity: float, k: complex, radius: float):
        self.order = order
        self.proximity = proximity
        self.k = k
        self.radius = radius
        super().__init__(
            f"k={k} R={radius}: J_{order}(kR) is near a zero (proximity {proximity:.2e})"
        )


class DegenerateOperator(NumericalError):
    pass


class DegenerateRange(NumericalError):
    pass


class NoAcceptedDomains(NumericalError):
    pass


# ── 文件读写 ──

class StorageError(OneWaveError):
    exit_code = 4
