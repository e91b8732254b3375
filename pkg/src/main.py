"""
One-Wave Factorization - 命令行入口

完整流程：
  Scenario → Cauchy 数据 (f, σ∂_ν u) → DtN 差算子 → sharp 分解 → Picard 指标 → CSV / PPM / SVG / manifest

使用方式：
  python -m src.main synthesize --preset ex2-truth
  python -m src.main image --preset ex1-kite --variant classical
  python -m src.main coeffs --preset ex2 --data output/ex2-truth/cauchy.json
  python -m src.main polygon --preset ex3-centered
  python -m src.main reproduce ex2
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

# 将项目根目录加入 sys.path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.factorization import (
    DataOperator,
    IndicatorResult,
    coefficient_scan,
    convex_hull_estimate,
    domain_scan,
    indicator_field,
    rgb_map,
)
from src.forward import (
    CauchyData,
    DiskGreenTraces,
    DtnMatrix,
    InteriorObject,
    Resolution,
    Scenario,
    assemble_dtn,
    dtn_empty_disk,
    load_cauchy_data,
    load_dtn_matrix,
    save_cauchy_data,
    save_dtn_matrix,
    synthesize_cauchy_data,
    tilde_green_function,
    tilde_prime_green_function,
)
from src.factorization.indicators import TraceProvider
from src.forward.disk import EIGENVALUE_THRESHOLD
from src.geometry import Circle
from src.presets import PRESETS, get_preset, presets_for_example
from src.render import Manifest, SvgCanvas, write_heatmap, write_indicator_csv, write_ppm
from src.schemas import RunConfig, load_run_config
from src.utils.errors import ConfigError, DegenerateRange, NoAcceptedDomains, OneWaveError
from src.utils.helpers import load_config, setup_logging

logger = logging.getLogger(__name__)
console = Console()

COMMANDS = ("synthesize", "image", "coeffs", "polygon")
EXAMPLES = ("ex1", "ex2", "ex3", "ex4")


# ─────────────────────────────────────────────
# 公共部分
# ─────────────────────────────────────────────

def _resolution(settings: dict) -> Resolution:
    return Resolution.from_config(settings)


def _refinement(settings: dict) -> int:
    return int(settings.get("numerics", {}).get("refinement", 2))


def _threshold(settings: dict) -> float:
    return float(settings.get("numerics", {}).get("eigenvalue_threshold", EIGENVALUE_THRESHOLD))


def _run_dir(run: RunConfig, out_dir: str | None = None) -> str:
    return os.path.join(out_dir or run.output.dir, run.name)


def _geometry_canvas(run: RunConfig, scenario: Scenario) -> SvgCanvas:
    canvas = SvgCanvas(extent=scenario.outer_radius * 1.1)
    canvas.circle((0.0, 0.0), scenario.outer_radius, color=(1.0, 0.0, 0.0))
    canvas.knots(scenario.outer_radius, run.boundary_data.knots)
    if scenario.obj.curve is not None:
        canvas.curve(scenario.obj.curve)
    return canvas


def _scales(run: RunConfig) -> list[tuple[bool, str]]:
    """I 和 ln I 都输出；--log-scale 决定哪一个用主文件名"""
    if run.output.log_scale:
        return [(True, ""), (False, "_linear")]
    return [(False, ""), (True, "_log")]


def _write_indicator(
    result: IndicatorResult,
    stem: str,
    run: RunConfig,
    manifest: Manifest,
    heatmap: bool = True,
) -> None:
    formats = run.output.formats
    if "csv" in formats:
        manifest.add_outputs(write_indicator_csv(result, f"{stem}.csv"))
    if not heatmap:
        return
    for log_scale, suffix in _scales(run):
        try:
            manifest.add_outputs(*write_heatmap(result, f"{stem}{suffix}", formats, log_scale))
        except DegenerateRange as e:
            note = f"{os.path.basename(stem)}{suffix}: {e}"
            manifest.notes.append(note)
            logger.warning(f"Skipping heatmap {note}")


def _measured_data(
    run: RunConfig,
    settings: dict,
    data_path: str | None,
    run_dir: str,
    manifest: Manifest,
) -> CauchyData:
    if data_path:
        manifest.add_input("cauchy", data_path)
        return load_cauchy_data(data_path)
    data = _synthesize(run, settings)
    manifest.add_outputs(save_cauchy_data(data, os.path.join(run_dir, "cauchy.json")))
    return data


def _synthesize(run: RunConfig, settings: dict) -> CauchyData:
    scenario = run.build_scenario()
    f = run.build_boundary_data()
    return synthesize_cauchy_data(
        scenario,
        run.scenario.sigma,
        f,
        _refinement(settings),
        _resolution(settings),
        settings,
        knots=run.boundary_data.knots,
    )


def _summary_table(title: str, result: IndicatorResult) -> Table:
    summary = result.summary()
    table = Table(title=title)
    table.add_column("Field", style="cyan")
    table.add_column("Value")
    table.add_row("shape", " x ".join(str(s) for s in summary["shape"]))
    table.add_row("valid", str(summary["valid"]))
    if summary["argmax"] is not None:
        coords = ", ".join(f"{k}={v:.6g}" for k, v in summary["argmax_coordinates"].items())
        table.add_row("argmax", coords)
        table.add_row("I_min / I_max", f"{summary['min']:.4e} / {summary['max']:.4e}")
    for note in summary["notes"][:5]:
        table.add_row("note", note)
    return table


# ─────────────────────────────────────────────
# 子命令
# ─────────────────────────────────────────────

def cmd_synthesize(run: RunConfig, settings: dict, out_dir: str | None = None) -> Manifest:
    """合成 Cauchy 数据并写 JSON"""
    run_dir = _run_dir(run, out_dir)
    manifest = Manifest(run_dir, "synthesize", {"run": run.model_dump(mode="json")})

    scenario = run.build_scenario()
    data = _synthesize(run, settings)
    manifest.add_outputs(save_cauchy_data(data, os.path.join(run_dir, "cauchy.json")))
    if "svg" in run.output.formats:
        manifest.add_outputs(_geometry_canvas(run, scenario).save(os.path.join(run_dir, "geometry.svg")))
    manifest.parameters["scenario_hash"] = data.meta["scenario_hash"]
    console.print(f"  [green]✓ Cauchy data[/green] {data.n_modes} modes, |g| = {data.g.norm():.6g}")
    manifest.write()
    return manifest


def imaging_problem(
    run: RunConfig,
    settings: dict,
    data: DtnMatrix,
) -> tuple[DataOperator, TraceProvider, InteriorObject | None]:
    """数据算子 F、测试迹和参考物体（classical 变体没有参考物体）"""
    stage = run.pipeline.image
    if stage is None:
        raise ConfigError("image pipeline settings are missing", "pipeline.image")
    variant = run.pipeline.variant
    k, radius, n_modes = run.scenario.k, run.scenario.outer_radius, run.boundary_data.n_modes
    resolution = _resolution(settings)

    ref_obj = None
    if variant == "classical":
        reference = dtn_empty_disk(k, radius, n_modes, _threshold(settings))
        traces = DiskGreenTraces(k, radius, n_modes, _threshold(settings))
    else:
        if stage.reference_object is None or stage.auxiliary_disk is None:
            raise ConfigError("tilde imaging needs reference_object and auxiliary_disk", "pipeline.image")
        ref_obj = stage.reference_object.build()
        reference = assemble_dtn(Scenario(radius, k, ref_obj), n_modes, resolution, settings)
        disk = stage.auxiliary_disk.build()
        if stage.auxiliary_index is not None:
            traces = tilde_prime_green_function(
                k, radius, disk, stage.auxiliary_index, n_modes, resolution, settings
            )
        else:
            traces = tilde_green_function(k, radius, disk, n_modes, resolution, settings)

    operator = DataOperator.difference(data, reference, label=f"{run.name}-{variant}")
    return operator, traces, ref_obj


def cmd_image(run: RunConfig, settings: dict, out_dir: str | None = None, data_path: str | None = None) -> Manifest:
    """indicator_field 成像：F = A(k², T) − A_ref"""
    stage = run.pipeline.image
    if stage is None:
        raise ConfigError("image pipeline settings are missing", "pipeline.image")
    variant = run.pipeline.variant
    run_dir = _run_dir(run, out_dir)
    manifest = Manifest(run_dir, "image", {"run": run.model_dump(mode="json"), "variant": variant})

    scenario = run.build_scenario()
    radius, n_modes = scenario.outer_radius, run.boundary_data.n_modes
    resolution = _resolution(settings)

    if data_path:
        manifest.add_input("dtn", data_path)
        data = load_dtn_matrix(data_path)
    else:
        # 数据算子在加密网格上装配
        data = assemble_dtn(scenario, n_modes, resolution.refined(_refinement(settings)), settings)
        manifest.add_outputs(save_dtn_matrix(data, os.path.join(run_dir, "dtn.bin")))

    operator, traces, ref_obj = imaging_problem(run, settings, data)
    canvas = _geometry_canvas(run, scenario)
    if ref_obj is not None:
        canvas.curve(ref_obj.curve, color=(0.0, 0.0, 1.0))
    excluded = getattr(traces, "excluded", None)
    if isinstance(excluded, Circle):
        canvas.circle(excluded.center, excluded.radius, dashed=True)

    result = indicator_field(operator, traces, stage.grid.build(), radius, settings)
    manifest.notes.extend(result.notes)
    manifest.parameters["summary"] = result.summary()

    _write_indicator(result, os.path.join(run_dir, "indicator"), run, manifest)
    if "svg" in run.output.formats:
        manifest.add_outputs(canvas.save(os.path.join(run_dir, "geometry.svg")))
    console.print(_summary_table(f"Imaging: {run.name} ({variant})", result))
    manifest.write()
    return manifest


def cmd_coeffs(run: RunConfig, settings: dict, out_dir: str | None = None, data_path: str | None = None) -> Manifest:
    """(τ, κ) 网格上的 I₁ / Ĩ₁"""
    stage = run.pipeline.coefficients
    if stage is None:
        raise ConfigError("coefficient pipeline settings are missing", "pipeline.coefficients")
    variant = run.pipeline.variant
    run_dir = _run_dir(run, out_dir)
    manifest = Manifest(run_dir, "coeffs", {"run": run.model_dump(mode="json"), "variant": variant})

    measured = _measured_data(run, settings, data_path, run_dir, manifest)
    domain = stage.test_domain.build()
    result = coefficient_scan(
        measured, domain, stage.tau_grid, stage.kappa_grid, variant, _resolution(settings), settings
    )
    manifest.notes.extend(result.notes)
    summary = result.summary()
    manifest.parameters["summary"] = summary
    if summary["argmax_coordinates"] is not None:
        manifest.parameters["estimate"] = {
            "sigma": summary["argmax_coordinates"]["tau"],
            "k": summary["argmax_coordinates"]["kappa"],
            "q": summary["argmax_coordinates"]["tau"] * summary["argmax_coordinates"]["kappa"] ** 2,
        }

    _write_indicator(result, os.path.join(run_dir, "coefficients"), run, manifest)
    if "svg" in run.output.formats:
        canvas = _geometry_canvas(run, run.build_scenario())
        canvas.circle(domain.outer.center, domain.outer.radius, color=(1.0, 0.0, 0.0))
        if domain.inner is not None:
            canvas.circle(domain.inner.center, domain.inner.radius, color=(0.0, 0.0, 1.0))
        manifest.add_outputs(canvas.save(os.path.join(run_dir, "geometry.svg")))
    console.print(_summary_table(f"Coefficients: {run.name} ({variant})", result))
    manifest.write()
    return manifest


def cmd_polygon(run: RunConfig, settings: dict, out_dir: str | None = None, data_path: str | None = None) -> Manifest:
    """测试区域族上的 I₂ / Ĩ₂，彩色圆 + 凸包栅格"""
    stage = run.pipeline.polygon
    if stage is None:
        raise ConfigError("polygon pipeline settings are missing", "pipeline.polygon")
    variant = run.pipeline.variant
    run_dir = _run_dir(run, out_dir)
    manifest = Manifest(run_dir, "polygon", {"run": run.model_dump(mode="json"), "variant": variant})

    measured = _measured_data(run, settings, data_path, run_dir, manifest)
    sigma = stage.sigma if stage.sigma is not None else run.scenario.sigma
    q = stage.q if stage.q is not None else run.scenario.q_value
    family = stage.family.build()
    result = domain_scan(measured, family, sigma, q, variant, _resolution(settings), settings)
    manifest.notes.extend(result.notes)
    manifest.parameters["summary"] = result.summary()
    _write_indicator(result, os.path.join(run_dir, "domains"), run, manifest, heatmap=False)

    if "svg" in run.output.formats:
        for log_scale, suffix in _scales(run):
            canvas = _geometry_canvas(run, run.build_scenario())
            try:
                colors = rgb_map(result, log_scale)
            except DegenerateRange as e:
                manifest.notes.append(f"circles{suffix}: {e}")
                colors = None
            for i, domain in enumerate(family):
                color = colors[i] if colors is not None else (0.5, 0.5, 0.5)
                canvas.circle(domain.outer.center, domain.outer.radius, color=color)
            manifest.add_outputs(canvas.save(os.path.join(run_dir, f"circles{suffix}.svg")))

    try:
        hull = convex_hull_estimate(family, result, stage.hull_grid.build(), stage.hull_quantile)
    except NoAcceptedDomains as e:
        manifest.notes.append(f"hull: {e}")
        logger.warning(f"No hull estimate: {e}")
    else:
        manifest.parameters["hull"] = {
            "accepted": hull.accepted,
            "threshold": hull.threshold,
            "area": hull.area,
        }
        if "ppm" in run.output.formats:
            gray = hull.mask[..., None].astype(float).repeat(3, axis=2)
            manifest.add_outputs(write_ppm(gray, os.path.join(run_dir, "hull.ppm"), scale=4))

    console.print(_summary_table(f"Domains: {run.name} ({variant})", result))
    manifest.write()
    return manifest


COMMAND_HANDLERS = {
    "synthesize": cmd_synthesize,
    "image": cmd_image,
    "coeffs": cmd_coeffs,
    "polygon": cmd_polygon,
}


def cmd_reproduce(
    example: str,
    settings: dict,
    out_dir: str = "output",
    variants=("classical", "tilde"),
    modes: int | None = None,
    log_scale: bool = False,
) -> Manifest:
    """按预设跑完一个例子的所有面板，两种变体各一份；modes / log_scale 作用于每个面板"""
    if example not in EXAMPLES:
        raise ConfigError(f"unknown example {example!r}; choose from {', '.join(EXAMPLES)}", "example")
    root = os.path.join(out_dir, example)
    manifest = Manifest(
        root,
        "reproduce",
        {"example": example, "variants": list(variants), "modes": modes, "log_scale": log_scale},
    )

    jobs = []
    for preset in presets_for_example(example):
        for run in preset.configs():
            run = _override_run(run, settings, modes, log_scale=log_scale)
            if preset.command == "synthesize":
                jobs.append((preset, run, None))
            else:
                for variant in variants:
                    jobs.append((preset, run, variant))

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
    ) as progress:
        for preset, run, variant in jobs:
            task = progress.add_task(f"{preset.command} {run.name} {variant or ''}", total=None)
            handler = COMMAND_HANDLERS[preset.command]
            if variant is None:
                sub = handler(run, settings, root)
            else:
                run = run.model_copy(update={"pipeline": run.pipeline.model_copy(update={"variant": variant})})
                sub = handler(run, settings, os.path.join(root, variant))
            manifest.add_outputs(os.path.join(sub.out_dir, "manifest.json"))
            manifest.parameters.setdefault("runs", []).append(
                {"preset": preset.id, "run": run.name, "variant": variant, "summary": sub.parameters.get("summary")}
            )
            progress.update(task, description=f"[green]✓ {preset.command} {run.name} {variant or ''}")

    manifest.write()
    console.print(f"\n[green bold]✓ Reproduced {example}: {len(jobs)} runs[/green bold]")
    console.print(f"  Output directory: {os.path.abspath(root)}")
    return manifest


# ─────────────────────────────────────────────
# 参数解析
# ─────────────────────────────────────────────

def _override_run(
    run: RunConfig,
    settings: dict,
    modes: int | None = None,
    variant: str | None = None,
    log_scale: bool = False,
    out_dir: str | None = None,
) -> RunConfig:
    """命令行 > 运行文件 > config.yaml"""
    updates = {}
    modes = modes or settings.get("numerics", {}).get("n_modes")
    if modes:
        updates["boundary_data"] = run.boundary_data.model_copy(update={"n_modes": int(modes)})
    if variant:
        updates["pipeline"] = run.pipeline.model_copy(update={"variant": variant})
    output = {}
    if log_scale:
        output["log_scale"] = True
    settings_dir = settings.get("output", {}).get("dir")
    if out_dir:
        output["dir"] = out_dir
    elif settings_dir and "dir" not in run.output.model_fields_set:
        output["dir"] = settings_dir
    if output:
        updates["output"] = run.output.model_copy(update=output)
    return run.model_copy(update=updates) if updates else run


def _apply_overrides(run: RunConfig, args, settings: dict) -> RunConfig:
    return _override_run(
        run, settings, args.modes, getattr(args, "variant", None), args.log_scale, args.out
    )


def _apply_settings(args, settings: dict) -> dict:
    if args.quadrature:
        settings.setdefault("numerics", {})["outer_nodes"] = int(args.quadrature)
    if args.cutoff:
        settings.setdefault("factorization", {})["cutoff"] = float(args.cutoff)
    return settings


def _load_runs(args, settings: dict) -> list[RunConfig]:
    if args.config and args.preset:
        raise ConfigError("give either --config or --preset, not both", "config")
    if args.config:
        runs = [load_run_config(args.config)]
    elif args.preset:
        preset = get_preset(args.preset)
        # 任何预设都可以只合成数据
        if args.command not in (preset.command, "synthesize"):
            raise ConfigError(
                f"preset {preset.id} is meant for '{preset.command}', not '{args.command}'", "preset"
            )
        runs = preset.configs()
    else:
        raise ConfigError("a run file (--config) or a preset (--preset) is required", "config")
    return [_apply_overrides(run, args, settings) for run in runs]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="One-Wave Factorization - 单对 Cauchy 数据的系数与形状重建"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--settings", "-s", default=None, help="Numerical defaults (config.yaml)")
    common.add_argument("--out", "-o", default=None, help="Output directory")
    common.add_argument("--modes", type=int, default=None, help="Fourier modes N (even)")
    common.add_argument("--quadrature", type=int, default=None, help="Quadrature nodes on the measurement circle")
    common.add_argument("--cutoff", type=float, default=None, help="Relative spectral cutoff of the Picard series")
    common.add_argument("--log-scale", action="store_true", help="Color circle plots by ln I")
    common.add_argument("--log-level", default=None, help="Logging level (DEBUG, INFO, WARNING, ERROR)")

    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--config", "-c", default=None, help="Run file (YAML)")
        p.add_argument("--preset", "-p", default=None, help=f"Built-in preset: {', '.join(PRESETS)}")
        if name != "synthesize":
            p.add_argument("--data", "-d", default=None, help="Cauchy data JSON (or DtN matrix for image)")
            p.add_argument("--variant", choices=("classical", "tilde"), default=None)
    rep = sub.add_parser("reproduce", parents=[common])
    rep.add_argument("example", choices=EXAMPLES)
    rep.add_argument("--variant", choices=("classical", "tilde"), default=None, help="Only one variant")
    return parser


def run_command(args) -> int:
    settings = _apply_settings(args, load_config(args.settings))
    setup_logging(args.log_level or settings.get("logging", {}).get("level", "INFO"))

    console.print("[bold blue]═══ One-Wave Factorization ═══[/bold blue]\n")
    if args.command == "reproduce":
        variants = (args.variant,) if args.variant else ("classical", "tilde")
        out = args.out or settings.get("output", {}).get("dir", "output")
        cmd_reproduce(args.example, settings, out, variants, modes=args.modes, log_scale=args.log_scale)
        return 0

    handler = COMMAND_HANDLERS[args.command]
    for run in _load_runs(args, settings):
        console.print(f"\n[bold magenta]▶ {args.command}: {run.name}[/bold magenta]")
        if run.description:
            console.print(f"  {run.description}")
        if args.command == "synthesize":
            manifest = handler(run, settings)
        else:
            manifest = handler(run, settings, None, args.data)
        console.print(f"  Output directory: {os.path.abspath(manifest.out_dir)}")
    console.print("\n[bold green]═══ Done! ═══[/bold green]")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run_command(args)
    except OneWaveError as e:
        console.print(f"[red]✗ {type(e).__name__}: {e}[/red]")
        logger.debug("Command failed", exc_info=True)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
