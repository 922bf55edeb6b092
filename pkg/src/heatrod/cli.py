"""Command-line interface.

Subcommands
-----------
simulate     explicit finite-difference temperature run, CSVs + figures
sensitivity  diffusivity-sensitivity lattice alongside the temperature run
estimate     least-squares diffusivity fit from measured or synthetic data
identify     rank catalog materials against an estimated diffusivity
stability    report the mesh ratio; optional bounded blow-up demonstration

Exit codes: 0 success, 2 configuration or input error, 3 stability
rejection.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import (
    ConfigError,
    build_grid,
    build_problem,
    build_series_control,
    load_catalog,
    parse_config,
    resolve_alpha2,
    resolve_path,
    serialize_config,
)
from .estimator import (
    estimate_diffusivity,
    forward_values,
    identify_material,
    rank_materials,
    simulate_measurements,
    MeasurementSet,
)
from .fdsolver import (
    StabilityError,
    demo_blowup,
    sample_field,
    solve_sensitivity,
    solve_temperature,
    stability_report,
)
from .output import (
    human_report,
    machine_report,
    read_measurements_csv,
    write_field_csv,
    write_fit_curve_csv,
    write_measurements_csv,
    write_probe_csv,
)

_FIT_CURVE_POINTS = 401


def _add_common(sub: argparse.ArgumentParser, with_outputs: bool = True) -> None:
    sub.add_argument("--config", required=True, help="path to a key=value config file")
    if with_outputs:
        sub.add_argument("-o", "--outdir", default=".",
                         help="directory for generated files (default: current)")
        sub.add_argument("--no-figures", action="store_true",
                         help="skip figure rendering, write only delimited output")


def _outdir(args) -> Path:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str) -> None:
    path.write_text(text)
    print(f"wrote {path}")


def _probe_positions(length: float) -> list[float]:
    return [length * k / 4.0 for k in (1, 2, 3)]


def _emit_field_outputs(args, field, stem: str, title: str) -> None:
    out = _outdir(args)
    path = out / f"{stem}_field.csv"
    write_field_csv(path, field)
    print(f"wrote {path}")
    probe_series = []
    for x in _probe_positions(field.grid.length):
        ppath = out / f"{stem}_probe_{x:g}.csv"
        vals = write_probe_csv(ppath, field, x)
        print(f"wrote {ppath}")
        probe_series.append((f"x = {x:g} m", vals))
    if not args.no_figures:
        # matplotlib import stays lazy so --no-figures runs never pay for it
        from .figures import save_field_figure, save_probe_figure

        ppng = out / f"{stem}_probes.png"
        save_probe_figure(ppng, field.grid.t_nodes(), probe_series, field.kind, title)
        print(f"wrote {ppng}")
        fpng = out / f"{stem}_field.png"
        save_field_figure(fpng, field, title)
        print(f"wrote {fpng}")


def cmd_simulate(args) -> int:
    cfg = parse_config(args.config)
    spec = build_problem(cfg)
    grid = build_grid(cfg)
    alpha2, source = resolve_alpha2(cfg)
    report = stability_report(alpha2, grid)
    print(report.describe())
    field = solve_temperature(spec, alpha2, grid)
    _emit_field_outputs(args, field, "temperature",
                        f"rod temperature ({source} = {alpha2:g} m^2/s)")
    _write(_outdir(args) / "effective_config.txt", serialize_config(cfg))
    return 0


def cmd_sensitivity(args) -> int:
    cfg = parse_config(args.config)
    spec = build_problem(cfg)
    grid = build_grid(cfg)
    alpha2, source = resolve_alpha2(cfg)
    report = stability_report(alpha2, grid)
    print(report.describe())
    temperature = solve_temperature(spec, alpha2, grid)
    field = solve_sensitivity(spec, alpha2, grid, temperature=temperature)
    _emit_field_outputs(args, field, "sensitivity",
                        f"diffusivity sensitivity ({source} = {alpha2:g} m^2/s)")
    _write(_outdir(args) / "effective_config.txt", serialize_config(cfg))
    return 0


def _load_or_synthesize(cfg, spec, grid, ctl):
    """Measurement set plus the true diffusivity when one is known."""
    if cfg.measurements_file is not None:
        times, values = read_measurements_csv(resolve_path(cfg, "measurements_file"))
        if cfg.x0_m is None:
            raise ConfigError("missing required key(s): x0_m")
        m = MeasurementSet(x0=cfg.x0_m, times=times, values=values)
        return m, None, "loaded from file"
    if cfg.x0_m is None or cfg.times_s is None:
        raise ConfigError("missing required key(s): x0_m, times_s")
    alpha2_true, source = resolve_alpha2(cfg)
    m = simulate_measurements(
        spec, alpha2_true, cfg.x0_m, cfg.times_s, sigma=cfg.sigma_C,
        seed=cfg.seed, forward=cfg.forward, grid=grid, ctl=ctl,
    )
    label = f"synthetic ({source} = {alpha2_true:g} m^2/s, sigma = {cfg.sigma_C:g} C)"
    return m, alpha2_true, label


def cmd_estimate(args) -> int:
    cfg = parse_config(args.config)
    spec = build_problem(cfg)
    ctl = build_series_control(cfg)
    grid = None
    if cfg.forward == "fd":
        grid = build_grid(cfg)
        # eps grows with alpha2, so gate on the largest value the search
        # (or the synthesis) will ever hand the solver
        worst = cfg.bracket_hi
        if cfg.measurements_file is None:
            worst = max(worst, resolve_alpha2(cfg)[0])
        report = stability_report(worst, grid)
        print(report.describe())
        if not report.stable:
            raise StabilityError(report)
    m, alpha2_true, source_label = _load_or_synthesize(cfg, spec, grid, ctl)
    result = estimate_diffusivity(
        spec, m, bracket=(cfg.bracket_lo, cfg.bracket_hi), rel_tol=cfg.rel_tol,
        forward=cfg.forward, grid=grid, ctl=ctl, alpha2_true=alpha2_true,
    )
    match = None
    if cfg.catalog_file is not None:
        match = identify_material(result.alpha2_hat,
                                  load_catalog(resolve_path(cfg, "catalog_file")))

    out = _outdir(args)
    write_measurements_csv(out / "measurements.csv", m)
    print(f"wrote {out / 'measurements.csv'}")
    t_dense = np.linspace(0.0, float(m.times[-1]), _FIT_CURVE_POINTS)
    curve = forward_values(spec, result.alpha2_hat, m.x0, t_dense,
                           cfg.forward, grid, ctl)
    write_fit_curve_csv(out / "fit_curve.csv", t_dense, curve)
    print(f"wrote {out / 'fit_curve.csv'}")
    report_text = human_report(result, source_label, match=match)
    _write(out / "estimate_report.txt", report_text)
    _write(out / "estimate_report.kv", machine_report(cfg, result))
    _write(out / "effective_config.txt", serialize_config(cfg))
    if not args.no_figures:
        from .figures import save_fit_figure

        fpng = out / "estimate_fit.png"
        save_fit_figure(fpng, m.times, m.values, t_dense, curve, result.alpha2_hat)
        print(f"wrote {fpng}")
    print()
    print(report_text, end="")
    return 0


def cmd_identify(args) -> int:
    cfg = parse_config(args.config)
    if cfg.catalog_file is None:
        raise ConfigError("missing required key(s): catalog_file")
    catalog = load_catalog(resolve_path(cfg, "catalog_file"))
    ranked = rank_materials(args.alpha2_hat, catalog)
    best = identify_material(args.alpha2_hat, catalog)
    print(f"estimated alpha2 = {args.alpha2_hat:g} m^2/s")
    print()
    print(f"{'rank':>4}  {'material':<20} {'alpha2_m2s':>12}  {'rel_distance':>12}")
    for rank, row in enumerate(ranked, start=1):
        print(f"{rank:>4}  {row.name:<20} {row.alpha2:>12g}  {row.relative_distance:>12.4%}")
    print()
    print(f"best match: {best.name}")
    if best.tied_with:
        print(f"tie with {', '.join(best.tied_with)}; "
              "reporting the smaller alpha2")
    return 0


def cmd_stability(args) -> int:
    cfg = parse_config(args.config)
    spec = build_problem(cfg)
    grid = build_grid(cfg)
    alpha2, _ = resolve_alpha2(cfg)
    report = stability_report(alpha2, grid)
    print(report.describe())
    if args.demo_steps is not None:
        peak = demo_blowup(spec, alpha2, grid, n_steps=args.demo_steps)
        lo = min(spec.hot_end, spec.cold_end, *_initial_range(spec, grid))
        hi = max(spec.hot_end, spec.cold_end, *_initial_range(spec, grid))
        print(f"after {args.demo_steps} unguarded steps: max |u| = {peak:.6g} C "
              f"(initial/boundary range [{lo:g}, {hi:g}] C)")
        if peak > max(abs(lo), abs(hi)):
            print("lattice values left the physical range: unstable growth")
        else:
            print("lattice values stayed within the physical range")
    return 0


def _initial_range(spec, grid):
    vals = np.asarray(spec.initial(grid.x_nodes()), dtype=float)
    return float(np.min(vals)), float(np.max(vals))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heatrod",
        description="1D rod heat conduction: simulation, sensitivity, "
        "diffusivity estimation, material identification",
    )
    parser.add_argument("--version", action="version", version=f"heatrod {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("simulate", help="finite-difference temperature run")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = subs.add_parser("sensitivity", help="finite-difference sensitivity run")
    _add_common(p)
    p.set_defaults(func=cmd_sensitivity)

    p = subs.add_parser("estimate", help="least-squares diffusivity fit")
    _add_common(p)
    p.set_defaults(func=cmd_estimate)

    p = subs.add_parser("identify", help="rank catalog materials against an estimate")
    _add_common(p, with_outputs=False)
    p.add_argument("alpha2_hat", type=float, help="estimated diffusivity in m^2/s")
    p.set_defaults(func=cmd_identify)

    p = subs.add_parser("stability", help="mesh-ratio check for the explicit scheme")
    _add_common(p, with_outputs=False)
    p.add_argument("--demo-steps", type=int, default=None, metavar="N",
                   help="run N unguarded steps and report the peak |u|")
    p.set_defaults(func=cmd_stability)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StabilityError as exc:
        print(f"stability rejection: {exc}", file=sys.stderr)
        return 3
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
