"""Delimited output and report rendering.

All CSVs are comma separated with Unix line endings and carry values
formatted with %.12g, so re-reading recovers them to better than nine
significant digits.  Field files are row-major in x (all times for node 0,
then node 1, ...).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .config import RunConfig, serialize_config
from .estimator import EstimationResult, MeasurementSet
from .fdsolver import SENSITIVITY, Field, sample_field

__all__ = [
    "machine_report",
    "human_report",
    "read_measurements_csv",
    "write_field_csv",
    "write_fit_curve_csv",
    "write_measurements_csv",
    "write_probe_csv",
]

_FMT = "%.12g"


def _value_column(kind: str) -> str:
    return "S_C_per_m2s" if kind == SENSITIVITY else "u_C"


def write_field_csv(path: Path | str, field: Field) -> None:
    """Full lattice as x_m,t_s,<value> rows, x outer loop, t inner."""
    g = field.grid
    xs = np.repeat(g.x_nodes(), g.n_time + 1)
    ts = np.tile(g.t_nodes(), g.n_space + 1)
    data = np.column_stack([xs, ts, field.values.ravel()])
    header = f"x_m,t_s,{_value_column(field.kind)}"
    np.savetxt(path, data, fmt=_FMT, delimiter=",", newline="\n",
               header=header, comments="")


def write_probe_csv(path: Path | str, field: Field, x: float) -> np.ndarray:
    """History at a fixed position as t_s,<value> rows; returns the values."""
    ts = field.grid.t_nodes()
    vals = np.array([sample_field(field, x, t) for t in ts])
    data = np.column_stack([ts, vals])
    header = f"t_s,{_value_column(field.kind)}"
    np.savetxt(path, data, fmt=_FMT, delimiter=",", newline="\n",
               header=header, comments="")
    return vals


def write_measurements_csv(path: Path | str, m: MeasurementSet) -> None:
    """Probe record as t_s,u_C rows."""
    data = np.column_stack([m.times, m.values])
    np.savetxt(path, data, fmt=_FMT, delimiter=",", newline="\n",
               header="t_s,u_C", comments="")


def read_measurements_csv(path: Path | str):
    """Read a t_s,u_C file back into (times, values) arrays."""
    p = Path(path)
    lines = p.read_text().splitlines()
    if not lines or lines[0].strip() != "t_s,u_C":
        raise ValueError(f"measurement file {p}: first line must be 't_s,u_C'")
    times, values = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != 2:
            raise ValueError(f"measurement file {p} line {lineno}: expected two columns")
        try:
            times.append(float(cells[0]))
            values.append(float(cells[1]))
        except ValueError:
            raise ValueError(f"measurement file {p} line {lineno}: non-numeric cell") from None
    if not times:
        raise ValueError(f"measurement file {p}: no data rows")
    return np.array(times), np.array(values)


def write_fit_curve_csv(path: Path | str, times, values) -> None:
    """Fitted forward model on a dense time grid as t_s,u_model_C rows."""
    data = np.column_stack([np.asarray(times), np.asarray(values)])
    np.savetxt(path, data, fmt=_FMT, delimiter=",", newline="\n",
               header="t_s,u_model_C", comments="")


def machine_report(cfg: RunConfig, result: EstimationResult) -> str:
    """Effective config plus fit results, one ``key = value`` per line."""
    lines = [serialize_config(cfg).rstrip("\n")]
    lines.append(f"alpha2_hat_m2s = {result.alpha2_hat!r}")
    lines.append(f"objective_C2 = {result.objective!r}")
    lines.append(f"iterations = {result.iterations}")
    lines.append(f"well_conditioned = {'true' if result.well_conditioned else 'false'}")
    if result.relative_error is not None:
        lines.append(f"relative_error = {result.relative_error!r}")
    return "\n".join(lines) + "\n"


def human_report(result: EstimationResult, alpha2_source: str,
                 match=None) -> str:
    """Short prose summary of a diffusivity fit."""
    lo, hi = result.bracket
    lines = [
        "Diffusivity estimate",
        "====================",
        f"alpha2_hat      : {result.alpha2_hat:.6g} m^2/s",
        f"objective       : {result.objective:.6g} C^2",
        f"iterations      : {result.iterations}",
        f"search bracket  : [{lo:.6g}, {hi:.6g}] m^2/s",
        f"well conditioned: {'yes' if result.well_conditioned else 'no'}",
        f"measurements    : {alpha2_source}",
    ]
    if result.relative_error is not None:
        lines.append(f"relative error  : {result.relative_error:.3%} vs known alpha2")
    if not result.well_conditioned:
        lines.append("")
        lines.append("warning: the objective is numerically flat over the bracket;")
        lines.append("the estimate is not informative for these measurement times.")
    if match is not None:
        lines.append("")
        lines.append(f"closest material: {match.name} "
                     f"(alpha2 = {match.alpha2:g} m^2/s, "
                     f"relative distance {match.relative_distance:.3%})")
        if match.tied_with:
            lines.append(f"tie with: {', '.join(match.tied_with)} "
                         "(smaller alpha2 reported)")
    return "\n".join(lines) + "\n"
