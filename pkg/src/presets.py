"""
内置运行预设

数据关系：Preset → 一组 RunConfig（每个 run 是一份完整的运行配置）→ 子命令
同一例子的多个面板（不同 P、k 或 r）拆成同一预设下的多个 run。
"""

from __future__ import annotations

from dataclasses import dataclass, field

from src.schemas import RunConfig, parse_run_config
from src.utils.errors import ConfigError

OUTER_RADIUS = 5.0
N_MODES = 128
KNOTS = [1.0, 0.0, 2.0, 0.0]

# 凸多边形 D（逆时针）
TRUE_POLYGON = [[0.25, -0.75], [1.5, -0.5], [1.5, 0.5], [0.5, 0.5]]

# ℧̃ 的折射率 (3 − 4i)²
AUXILIARY_MEDIUM_INDEX = [-7.0, -24.0]

OBSTACLE_SWEEP = [((-1.5, 0.0), 0.5), ((-0.5, 0.0), 1.0), ((0.0, 0.0), 2.0), ((0.5, 0.0), 4.0), ((1.5, 0.0), 8.0)]
MEDIUM_SWEEP = [((-1.5, 0.0), 0.5), ((-0.5, 0.0), 1.0), ((0.0, 0.0), 2.0), ((0.5, 0.0), 4.0), ((1.5, 0.0), 6.0)]
GRID_RADII = [1.0, 0.5, 0.25, 0.125]


@dataclass
class Preset:
    id: str
    example: str
    command: str
    description: str
    runs: list[dict] = field(default_factory=list)

    def configs(self) -> list[RunConfig]:
        return [parse_run_config(run) for run in self.runs]


PRESETS: dict[str, Preset] = {}


def _register(preset: Preset):
    PRESETS[preset.id] = preset
    return preset


def get_preset(preset_id: str) -> Preset:
    if preset_id not in PRESETS:
        raise ConfigError(f"unknown preset {preset_id!r}; available: {', '.join(sorted(PRESETS))}", "preset")
    return PRESETS[preset_id]


def presets_for_example(example: str) -> list[Preset]:
    return [p for p in PRESETS.values() if p.example == example]


# ── 构造辅助 ──

def _polygon_object() -> dict:
    return {"kind": "dirichlet", "curve": {"kind": "polygon", "vertices": TRUE_POLYGON}}


def _disk(center, radius) -> dict:
    return {"center": list(center), "radius": radius}


def _run(name: str, scenario: dict, pipeline: dict | None = None, **extra) -> dict:
    run = {
        "name": name,
        "scenario": {"outer_radius": OUTER_RADIUS, **scenario},
        "boundary_data": {"knots": KNOTS, "n_modes": N_MODES},
        "pipeline": pipeline or {},
    }
    run.update(extra)
    return run


def _imaging(name: str, obj: dict, reference: dict, aux_center, aux_radius, aux_index=None) -> dict:
    image = {
        "grid": {"x_min": -4.0, "x_max": 4.0, "y_min": -4.0, "y_max": 4.0, "nx": 81, "ny": 81},
        "reference_object": reference,
        "auxiliary_disk": _disk(aux_center, aux_radius),
    }
    if aux_index is not None:
        image["auxiliary_index"] = aux_index
    return _run(name, {"wavenumber": 1.0, "object": obj}, {"variant": "tilde", "image": image})


def _impedance_disk(center, radius, k: float = 1.0) -> dict:
    # η = −ik
    return {"kind": "impedance", "curve": {"kind": "circle", **_disk(center, radius)}, "eta": [0.0, -k]}


def _medium_disk(center, radius, index) -> dict:
    return {"kind": "medium", "curve": {"kind": "circle", **_disk(center, radius)}, "index": index}


def _coefficients(name: str, kind: str) -> dict:
    return _run(
        name,
        {"sigma": 1.0, "q": 4.0, "object": _polygon_object()},
        {
            "variant": "tilde",
            "coefficients": {
                "test_domain": {
                    "kind": kind,
                    "outer": _disk((0.0, 0.0), 4.0),
                    "inner": _disk((-0.5, 0.0), 0.25),
                },
                "tau_grid": [j / 20 + 0.5 for j in range(21)],
                "kappa_grid": [l / 20 + 1.5 for l in range(21)],
            },
        },
    )


def _radial(name: str, center, k: float, kind: str) -> dict:
    return _run(
        name,
        {"sigma": 1.0, "q": k * k, "object": _polygon_object()},
        {"variant": "tilde", "polygon": {"family": {"type": "radial", "kind": kind, "center": list(center)}}},
    )


def _disk_grid(name: str, r: float, kind: str) -> dict:
    return _run(
        name,
        {"sigma": 1.0, "q": 4.0, "object": _polygon_object()},
        {"variant": "tilde", "polygon": {"family": {"type": "disk_grid", "kind": kind, "r": r}}},
    )


# =============================================================
# 成像：k = 1，128 模态
# =============================================================

_register(Preset(
    id="ex1-kite",
    example="ex1",
    command="image",
    description="Dirichlet kite; reference impedance disk with eta = -ik",
    runs=[_imaging(
        "ex1-kite",
        {"kind": "dirichlet", "curve": {"kind": "kite", "center": [0.0, 0.0], "scale": 1.0}},
        _impedance_disk((0.0, 0.0), 0.4),
        (0.0, 0.0), 0.2,
    )],
))

_register(Preset(
    id="ex1-polygon",
    example="ex1",
    command="image",
    description="Dirichlet convex polygon",
    runs=[_imaging(
        "ex1-polygon",
        _polygon_object(),
        _impedance_disk((0.95, 0.0), 0.25),
        (0.95, 0.0), 0.125,
    )],
))

_register(Preset(
    id="ex1-peanut",
    example="ex1",
    command="image",
    description="Neumann peanut",
    runs=[_imaging(
        "ex1-peanut",
        {"kind": "neumann", "curve": {"kind": "peanut", "center": [0.0, 0.0], "scale": 1.5}},
        _impedance_disk((0.0, 0.0), 0.3),
        (0.0, 0.0), 0.15,
    )],
))

_register(Preset(
    id="ex1-medium-quarter",
    example="ex1",
    command="image",
    description="Medium disk with refractive index 1/4; auxiliary index 0.1",
    runs=[_imaging(
        "ex1-medium-quarter",
        _medium_disk((0.0, 0.0), 1.0, 0.25),
        _medium_disk((0.0, 0.0), 0.3, AUXILIARY_MEDIUM_INDEX),
        (0.0, 0.0), 0.15, aux_index=0.1,
    )],
))

_register(Preset(
    id="ex1-medium-four",
    example="ex1",
    command="image",
    description="Medium disk with refractive index 4; auxiliary index 2",
    runs=[_imaging(
        "ex1-medium-four",
        _medium_disk((0.0, 0.0), 1.0, 4.0),
        _medium_disk((0.0, 0.0), 0.3, AUXILIARY_MEDIUM_INDEX),
        (0.0, 0.0), 0.15, aux_index=2.0,
    )],
))

# =============================================================
# 系数：σ = 1，q = 4，21 × 21 网格
# =============================================================

_register(Preset(
    id="ex2",
    example="ex2",
    command="coeffs",
    description="Recover (sigma, k) = (1, 2) with an impedance test disk of radius 4",
    runs=[_coefficients("ex2", "impedance")],
))

_register(Preset(
    id="ex2-medium",
    example="ex2",
    command="coeffs",
    description="Recover (sigma, k) = (1, 2) with a medium test disk of radius 4",
    runs=[_coefficients("ex2-medium", "medium")],
))

_register(Preset(
    id="ex2-truth",
    example="ex2",
    command="synthesize",
    description="Cauchy data of the Dirichlet polygon at sigma = 1, q = 4",
    runs=[_run("ex2-truth", {"sigma": 1.0, "q": 4.0, "object": _polygon_object()})],
))

# =============================================================
# 区域扫描
# =============================================================

_register(Preset(
    id="ex3",
    example="ex3",
    command="polygon",
    description="Radial families l/10, l = 5..30, swept over (P, k) for impedance and medium disks",
    runs=[
        _radial(f"ex3-impedance-P{center[0]:+g}-k{k:g}", center, k, "impedance")
        for center, k in OBSTACLE_SWEEP
    ] + [
        _radial(f"ex3-medium-P{center[0]:+g}-k{k:g}", center, k, "medium")
        for center, k in MEDIUM_SWEEP
    ],
))

_register(Preset(
    id="ex3-centered",
    example="ex3",
    command="polygon",
    description="Radial family centered at the origin, k = 2",
    runs=[_radial("ex3-centered", (0.0, 0.0), 2.0, "impedance")],
))

_register(Preset(
    id="ex4",
    example="ex4",
    command="polygon",
    description="Disk grids of radius r centered at (2r j1 - 2, 2r j2 - 2), k = 2",
    runs=[_disk_grid(f"ex4-impedance-r{r:g}", r, "impedance") for r in GRID_RADII]
    + [_disk_grid(f"ex4-medium-r{r:g}", r, "medium") for r in GRID_RADII],
))

# =============================================================
# 空圆盘
# =============================================================

_register(Preset(
    id="empty-disk",
    example="",
    command="synthesize",
    description="No interior object: g = A0 f at k = 2",
    runs=[_run("empty-disk", {"sigma": 1.0, "q": 4.0})],
))
