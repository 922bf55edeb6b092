"""Diffusivity estimation from probe temperature histories.

A single probe at x0 records temperatures at a handful of times; the scalar
diffusivity alpha2 is recovered by least squares against a forward model
(analytic series or finite differences), minimized by golden-section search
on ln(alpha2).  A ranked comparison against a material catalog turns the
estimate into a material identification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fdsolver import GridSpec, sample_field, solve_temperature
from .model import ProblemSpec, SeriesControl, analytic_temperature

__all__ = [
    "EstimationResult",
    "MaterialMatch",
    "MeasurementSet",
    "estimate_diffusivity",
    "forward_values",
    "identify_material",
    "objective",
    "rank_materials",
    "simulate_measurements",
]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_MAX_GOLDEN_ITERS = 200

# Probe count for the bracket conditioning sweep and the flatness threshold
# scale: total variation of the objective below 1e-9 * (1 + max u_k^2) marks
# the problem ill-conditioned over that bracket.
_CONDITIONING_PROBES = 10
_CONDITIONING_RTOL = 1e-9


@dataclass
class MeasurementSet:
    """Probe temperature record used by the inverse problem.

    Parameters
    ----------
    x0 : float
        Probe position in m.
    times : ndarray
        Sample times in s, nonnegative and strictly increasing.
    values : ndarray
        Measured temperatures in deg C, same length as times.
    sigma : float
        Noise standard deviation that produced the values (0 for clean).
    seed : int or None
        RNG seed used when the values were synthesized, if any.
    """

    x0: float
    times: np.ndarray
    values: np.ndarray
    sigma: float = 0.0
    seed: int | None = None

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.ndim != 1 or self.times.size == 0:
            raise ValueError("times must be a nonempty 1-D array")
        if self.values.shape != self.times.shape:
            raise ValueError("values must match times in shape")
        if np.any(self.times < 0.0):
            raise ValueError("times must be nonnegative")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("times must be strictly increasing")
        if self.sigma < 0.0:
            raise ValueError("sigma must be nonnegative")


def forward_values(spec, alpha2, x0, times, forward="analytic",
                   grid: GridSpec | None = None,
                   ctl: SeriesControl | None = None) -> np.ndarray:
    """Forward model temperatures at (x0, times) for one diffusivity.

    ``forward`` picks the route: "analytic" evaluates the series,
    "fd" marches the explicit scheme on ``grid`` and samples it.
    """
    if forward == "analytic":
        return np.array([analytic_temperature(spec, alpha2, x0, t, ctl) for t in times])
    if forward == "fd":
        if grid is None:
            raise ValueError("fd forward model needs a GridSpec")
        if times[-1] > grid.t_final * (1.0 + 1e-12):
            raise ValueError("measurement times extend past the grid horizon")
        fld = solve_temperature(spec, alpha2, grid)
        return np.array([sample_field(fld, x0, t) for t in times])
    raise ValueError(f"unknown forward model {forward!r}")


def simulate_measurements(spec, alpha2, x0, times, sigma=0.0, seed=None,
                          forward="analytic", grid: GridSpec | None = None,
                          ctl: SeriesControl | None = None) -> MeasurementSet:
    """Synthesize a probe record at the given diffusivity.

    Gaussian noise of standard deviation ``sigma`` is drawn once with
    numpy's default_rng(seed) and added to the forward values; with
    sigma = 0 the values are exactly the forward model output.

    Returns
    -------
    MeasurementSet
    """
    times = np.asarray(times, dtype=float)
    clean = forward_values(spec, alpha2, x0, times, forward, grid, ctl)
    if sigma < 0.0:
        raise ValueError("sigma must be nonnegative")
    if sigma > 0.0:
        rng = np.random.default_rng(seed)
        clean = clean + sigma * rng.standard_normal(times.shape)
    return MeasurementSet(x0=x0, times=times, values=clean, sigma=sigma, seed=seed)


def objective(spec, m: MeasurementSet, alpha2, forward="analytic",
              grid: GridSpec | None = None, ctl: SeriesControl | None = None) -> float:
    """Sum of squared residuals between the forward model and a record."""
    model = forward_values(spec, alpha2, m.x0, m.times, forward, grid, ctl)
    r = model - m.values
    return float(np.dot(r, r))


@dataclass
class EstimationResult:
    """Outcome of a diffusivity fit.

    ``well_conditioned`` is False when the objective is numerically flat
    over the search bracket, in which case ``alpha2_hat`` is still the
    search result but carries little information.  ``relative_error`` is
    populated only when the true diffusivity was supplied.
    """

    alpha2_hat: float
    objective: float
    iterations: int
    bracket: tuple[float, float]
    well_conditioned: bool
    relative_error: float | None = None
    probes: np.ndarray | None = field(repr=False, default=None)
    probe_objectives: np.ndarray | None = field(repr=False, default=None)


def estimate_diffusivity(spec, m: MeasurementSet, bracket=(1e-7, 1e-3),
                         rel_tol=1e-6, forward="analytic",
                         grid: GridSpec | None = None,
                         ctl: SeriesControl | None = None,
                         alpha2_true: float | None = None) -> EstimationResult:
    """Least-squares fit of alpha2 by golden-section search on ln(alpha2).

    Parameters
    ----------
    bracket : (float, float)
        Positive search interval (lo, hi) with lo < hi.
    rel_tol : float
        Relative width of the final bracket; the search stops once the
        log-bracket is narrower than ln(1 + rel_tol).
    forward : {"analytic", "fd"}
    grid : GridSpec, required for the fd forward model.
    alpha2_true : float, optional
        When given, the result carries |alpha2_hat - alpha2_true| /
        alpha2_true as a diagnostic.

    Returns
    -------
    EstimationResult
    """
    lo, hi = bracket
    if not (0.0 < lo < hi):
        raise ValueError("bracket must satisfy 0 < lo < hi")
    if not (rel_tol > 0.0):
        raise ValueError("rel_tol must be positive")

    def f(log_a):
        return objective(spec, m, math.exp(log_a), forward, grid, ctl)

    # Conditioning sweep across the bracket before committing to a search.
    probes = np.geomspace(lo, hi, _CONDITIONING_PROBES)
    probe_j = np.array([objective(spec, m, a, forward, grid, ctl) for a in probes])
    variation = float(np.sum(np.abs(np.diff(probe_j))))
    flat = variation < _CONDITIONING_RTOL * (1.0 + float(np.max(m.values**2)))

    a, b = math.log(lo), math.log(hi)
    width_goal = math.log1p(rel_tol)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    iterations = 0
    while (b - a) > width_goal and iterations < _MAX_GOLDEN_ITERS:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
        iterations += 1
    alpha2_hat = math.exp(0.5 * (a + b))
    rel_err = None
    if alpha2_true is not None:
        rel_err = abs(alpha2_hat - alpha2_true) / alpha2_true
    return EstimationResult(
        alpha2_hat=alpha2_hat,
        objective=objective(spec, m, alpha2_hat, forward, grid, ctl),
        iterations=iterations,
        bracket=(lo, hi),
        well_conditioned=not flat,
        relative_error=rel_err,
        probes=probes,
        probe_objectives=probe_j,
    )


@dataclass(frozen=True)
class MaterialMatch:
    """One catalog entry compared against an estimate."""

    name: str
    alpha2: float
    relative_distance: float
    tied_with: tuple[str, ...] = ()


def rank_materials(alpha2_hat: float, catalog: dict[str, float]) -> list[MaterialMatch]:
    """All catalog entries ordered by relative distance to the estimate.

    Distance is |alpha2_hat - alpha2| / alpha2 per entry; ties order by
    smaller alpha2.
    """
    if not catalog:
        raise ValueError("material catalog is empty")
    if not (alpha2_hat > 0.0):
        raise ValueError("alpha2_hat must be positive")
    rows = [
        MaterialMatch(name=name, alpha2=a2, relative_distance=abs(alpha2_hat - a2) / a2)
        for name, a2 in catalog.items()
    ]
    rows.sort(key=lambda r: (r.relative_distance, r.alpha2))
    return rows


def identify_material(alpha2_hat: float, catalog: dict[str, float]) -> MaterialMatch:
    """Closest catalog entry by relative distance.

    Exact distance ties resolve to the smaller alpha2 and are reported in
    ``tied_with`` on the winner.
    """
    ranked = rank_materials(alpha2_hat, catalog)
    best = ranked[0]
    ties = tuple(
        r.name for r in ranked[1:] if r.relative_distance == best.relative_distance
    )
    if ties:
        best = MaterialMatch(
            name=best.name,
            alpha2=best.alpha2,
            relative_distance=best.relative_distance,
            tied_with=ties,
        )
    return best
