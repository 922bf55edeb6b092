"""Explicit finite-difference solvers for the rod problem.

Forward-time, centered-space updates on a uniform lattice for temperature
and for the diffusivity sensitivity.  Both march with the same mesh ratio
eps = alpha2 * dt / dx^2, which must satisfy eps < 1/2 for stability; the
solvers refuse to step otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ProblemSpec, steady_state

__all__ = [
    "Field",
    "GridSpec",
    "StabilityError",
    "StabilityReport",
    "demo_blowup",
    "sample_field",
    "solve_sensitivity",
    "solve_temperature",
    "stability_report",
    "steady_profile_on_grid",
]

TEMPERATURE = "temperature"
SENSITIVITY = "sensitivity"

# Tolerance for deciding that length/dx and t_final/dt are whole numbers.
_DIVISIBILITY_RTOL = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Uniform space-time lattice for the explicit schemes.

    Parameters
    ----------
    length : float
        Rod length in m; must be an integer multiple of dx.
    dx : float
        Node spacing in m, > 0.
    dt : float
        Time step in s, > 0; t_final must be an integer multiple of dt.
    t_final : float
        End of the simulated window in s, >= dt.
    """

    length: float
    dx: float
    dt: float
    t_final: float

    def __post_init__(self) -> None:
        if not (self.length > 0.0 and self.dx > 0.0 and self.dt > 0.0):
            raise ValueError("length, dx, and dt must be positive")
        if self.t_final < self.dt:
            raise ValueError("t_final must be at least one time step")
        for label, total, step in (
            ("length/dx", self.length, self.dx),
            ("t_final/dt", self.t_final, self.dt),
        ):
            ratio = total / step
            if abs(ratio - round(ratio)) > _DIVISIBILITY_RTOL * ratio:
                raise ValueError(f"{label} = {ratio} is not a whole number of steps")

    @property
    def n_space(self) -> int:
        """Number of space intervals; nodes are 0..n_space."""
        return round(self.length / self.dx)

    @property
    def n_time(self) -> int:
        """Number of time steps; levels are 0..n_time."""
        return round(self.t_final / self.dt)

    def x_nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.n_space + 1)

    def t_nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.t_final, self.n_time + 1)


@dataclass(frozen=True)
class StabilityReport:
    """Mesh-ratio stability verdict for a (diffusivity, grid) pair."""

    alpha2: float
    dx: float
    dt: float
    eps: float
    stable: bool
    limit: float = 0.5

    def describe(self) -> str:
        verdict = "stable" if self.stable else "UNSTABLE"
        return (
            f"eps = alpha2*dt/dx^2 = {self.eps:.6g} "
            f"(alpha2={self.alpha2:g} m^2/s, dx={self.dx:g} m, dt={self.dt:g} s); "
            f"requirement eps < {self.limit:g}: {verdict}"
        )


class StabilityError(ValueError):
    """Raised when a solver is asked to march an unstable lattice."""

    def __init__(self, report: StabilityReport):
        super().__init__(report.describe())
        self.report = report


def stability_report(alpha2: float, grid: GridSpec) -> StabilityReport:
    """Evaluate the explicit-scheme mesh ratio for this diffusivity and grid."""
    if not (alpha2 > 0.0):
        raise ValueError("alpha2 must be positive")
    eps = alpha2 * grid.dt / grid.dx**2
    return StabilityReport(alpha2=alpha2, dx=grid.dx, dt=grid.dt, eps=eps, stable=eps < 0.5)


@dataclass(frozen=True)
class Field:
    """Lattice solution produced by a solver.

    ``values`` has shape (n_space + 1, n_time + 1), indexed [space, time],
    and is marked read-only after construction.
    """

    grid: GridSpec
    kind: str
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.kind not in (TEMPERATURE, SENSITIVITY):
            raise ValueError(f"unknown field kind {self.kind!r}")
        expected = (self.grid.n_space + 1, self.grid.n_time + 1)
        if self.values.shape != expected:
            raise ValueError(f"values shape {self.values.shape} != {expected}")
        self.values.setflags(write=False)


def _require_stable(alpha2: float, grid: GridSpec) -> float:
    report = stability_report(alpha2, grid)
    if not report.stable:
        raise StabilityError(report)
    return report.eps


def _check_grid(spec: ProblemSpec, grid: GridSpec) -> None:
    if not math.isclose(spec.length, grid.length, rel_tol=1e-12):
        raise ValueError("grid length does not match the problem length")


def solve_temperature(spec: ProblemSpec, alpha2: float, grid: GridSpec) -> Field:
    """March the explicit temperature scheme over the full lattice.

    Interior update: u[i,j+1] = eps*(u[i+1,j] + u[i-1,j]) + (1-2*eps)*u[i,j].
    Row j = 0 carries the initial profile sampled at the nodes; the end
    columns are pinned to the fixed end temperatures for j >= 1.

    Raises
    ------
    StabilityError
        If eps >= 1/2; no time steps are taken in that case.
    """
    _check_grid(spec, grid)
    eps = _require_stable(alpha2, grid)
    xs = grid.x_nodes()
    work = np.empty((grid.n_time + 1, grid.n_space + 1))
    work[0] = spec.initial(xs)
    for j in range(grid.n_time):
        cur = work[j]
        nxt = work[j + 1]
        nxt[1:-1] = eps * (cur[2:] + cur[:-2]) + (1.0 - 2.0 * eps) * cur[1:-1]
        nxt[0] = spec.hot_end
        nxt[-1] = spec.cold_end
    return Field(grid=grid, kind=TEMPERATURE, values=np.ascontiguousarray(work.T))


def solve_sensitivity(spec: ProblemSpec, alpha2: float, grid: GridSpec,
                      temperature: Field | None = None) -> Field:
    """March the sensitivity scheme alongside the temperature lattice.

    The update is the alpha2-derivative of the temperature update: the
    temperature stencil applied to S plus (eps/alpha2) times the discrete
    curvature of u.  S starts at zero and keeps zero end columns.

    Parameters
    ----------
    temperature : Field, optional
        Previously computed temperature on the same grid; recomputed here
        when omitted.  Must have kind "temperature" and an identical grid.
    """
    _check_grid(spec, grid)
    eps = _require_stable(alpha2, grid)
    if temperature is None:
        temperature = solve_temperature(spec, alpha2, grid)
    if temperature.kind != TEMPERATURE:
        raise ValueError("temperature argument must be a temperature field")
    if temperature.grid != grid:
        raise ValueError("temperature field grid does not match")
    u = temperature.values
    work = np.zeros((grid.n_time + 1, grid.n_space + 1))
    coef = eps / alpha2
    for j in range(grid.n_time):
        cur = work[j]
        nxt = work[j + 1]
        ucur = u[:, j]
        nxt[1:-1] = (
            eps * (cur[2:] + cur[:-2])
            + (1.0 - 2.0 * eps) * cur[1:-1]
            + coef * (ucur[2:] - 2.0 * ucur[1:-1] + ucur[:-2])
        )
        nxt[0] = 0.0
        nxt[-1] = 0.0
    return Field(grid=grid, kind=SENSITIVITY, values=np.ascontiguousarray(work.T))


def _axis_weights(value: float, step: float, count: int, label: str):
    """Map a coordinate to lattice index weights for linear interpolation."""
    pos = value / step
    if pos < -1e-9 or pos > count + 1e-9:
        raise ValueError(f"{label} out of the lattice range")
    near = round(pos)
    if abs(pos - near) < 1e-9:
        idx = min(max(int(near), 0), count)
        return idx, idx, 0.0
    lo = int(math.floor(pos))
    return lo, lo + 1, pos - lo

def sample_field(field: Field, x: float, t: float) -> float:
    """Bilinear sample of a lattice field at (x, t).

    Coordinates within 1e-9 steps of a node snap to it, so node reads
    reproduce stored values exactly.
    """
    g = field.grid
    i0, i1, wx = _axis_weights(x, g.dx, g.n_space, "x")
    j0, j1, wt = _axis_weights(t, g.dt, g.n_time, "t")
    v = field.values
    v0 = v[i0, j0] * (1.0 - wx) + v[i1, j0] * wx
    v1 = v[i0, j1] * (1.0 - wx) + v[i1, j1] * wx
    if j0 == j1:
        return float(v0)
    return float(v0 * (1.0 - wt) + v1 * wt)


def demo_blowup(spec: ProblemSpec, alpha2: float, grid: GridSpec, n_steps: int = 200) -> float:
    """Run the temperature update without the stability gate, bounded steps.

    Intended for demonstrating divergence of an unstable configuration:
    returns the largest |u| seen over ``n_steps`` updates.  For a stable
    configuration this stays within the initial/boundary range.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    eps = alpha2 * grid.dt / grid.dx**2
    cur = np.asarray(spec.initial(grid.x_nodes()), dtype=float).copy()
    peak = float(np.max(np.abs(cur)))
    for _ in range(n_steps):
        nxt = np.empty_like(cur)
        nxt[1:-1] = eps * (cur[2:] + cur[:-2]) + (1.0 - 2.0 * eps) * cur[1:-1]
        nxt[0] = spec.hot_end
        nxt[-1] = spec.cold_end
        cur = nxt
        peak = max(peak, float(np.max(np.abs(cur))))
    return peak


def steady_profile_on_grid(spec: ProblemSpec, grid: GridSpec) -> np.ndarray:
    """Steady linear profile sampled at the lattice nodes."""
    _check_grid(spec, grid)
    return steady_state(spec, grid.x_nodes())
