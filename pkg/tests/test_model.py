"""Tests for the analytic series module.

Reference values were computed independently with 50-digit mpmath
arithmetic (steady profile + sine series summed until terms vanished) and
are frozen here to their double-precision representations.
"""

import math
import warnings

import numpy as np
import pytest

from heatrod.model import (
    InitialProfile,
    ProblemSpec,
    SeriesControl,
    SeriesTruncationWarning,
    analytic_sensitivity,
    analytic_temperature,
    fourier_coefficients,
    steady_state,
    _sensitivity_space_curvature,
    _sensitivity_time_derivative,
    _temperature_space_curvature,
)

ALPHA2 = 1.0e-4

# mode-1 decay time l^2 / (pi^2 alpha2) at the reference constants
TSTAR = 0.4**2 / (math.pi**2 * ALPHA2)


@pytest.fixture
def rod():
    return ProblemSpec(length=0.4, hot_end=100.0, cold_end=0.0,
                       initial=InitialProfile.uniform(25.0))


def test_steady_state_endpoints_and_midpoint(rod):
    assert steady_state(rod, 0.0) == 100.0
    assert steady_state(rod, 0.4) == 0.0
    assert steady_state(rod, 0.2) == pytest.approx(50.0, abs=1e-12)
    assert steady_state(rod, 0.1) == pytest.approx(75.0, abs=1e-12)


def test_steady_state_is_linear(rod):
    rng = np.random.default_rng(7)
    xs = rng.uniform(0.0, 0.4, size=50)
    vals = steady_state(rod, xs)
    # linear in x: second differences of sorted samples vanish
    assert vals == pytest.approx(100.0 * (1.0 - xs / 0.4), abs=1e-12)


def test_steady_state_rejects_out_of_range(rod):
    with pytest.raises(ValueError):
        steady_state(rod, -0.01)
    with pytest.raises(ValueError):
        steady_state(rod, 0.41)


def test_closed_form_coefficients_frozen(rod):
    a = fourier_coefficients(rod, 3, method="closed_form")
    assert a[0] == pytest.approx(-31.830988618379067, rel=1e-15)
    assert a[1] == pytest.approx(-31.830988618379067, rel=1e-15)
    assert a[2] == pytest.approx(-10.610329539459689, rel=1e-15)
    # odd modes carry -100/(n pi), even modes -200/(n pi)
    a50 = fourier_coefficients(rod, 50, method="closed_form")
    n = np.arange(1, 51)
    expect = np.where(n % 2 == 1, -100.0 / (n * math.pi), -200.0 / (n * math.pi))
    assert a50 == pytest.approx(expect, rel=1e-14)


def test_fourier_coefficients_validates(rod):
    with pytest.raises(ValueError):
        fourier_coefficients(rod, 0)
    with pytest.raises(ValueError):
        fourier_coefficients(rod, 5, method="nope")
    tab = ProblemSpec(length=0.4, hot_end=100.0, cold_end=0.0,
                      initial=InitialProfile.tabulated([(0.0, 100.0), (0.4, 0.0)]))
    with pytest.raises(ValueError):
        fourier_coefficients(tab, 5, method="closed_form")


def test_quadrature_matches_closed_form(rod):
    closed = fourier_coefficients(rod, 50, method="closed_form")
    quad = fourier_coefficients(rod, 50, method="quadrature")
    assert np.max(np.abs(quad / closed - 1.0)) < 1e-9


def test_quadrature_matches_segment_exact_integrals():
    # independent oracle: exact integral of (a + b x) sin(n pi x / l) per
    # tabulation segment, by parts
    table = [(0.0, 100.0), (0.1, 55.0), (0.2, 30.0), (0.3, 12.0), (0.4, 0.0)]
    spec = ProblemSpec(length=0.4, hot_end=100.0, cold_end=0.0,
                       initial=InitialProfile.tabulated(table))
    length = 0.4

    def exact(n):
        w = n * math.pi / length
        total = 0.0
        for (xa, fa), (xb, fb) in zip(table, table[1:]):
            # residual against steady is linear on the segment: c0 + c1 x
            sa = 100.0 * (1.0 - xa / length)
            sb = 100.0 * (1.0 - xb / length)
            c1 = ((fb - sb) - (fa - sa)) / (xb - xa)
            c0 = (fa - sa) - c1 * xa

            def anti(x):
                return (-(c0 + c1 * x) * math.cos(w * x) / w
                        + c1 * math.sin(w * x) / w**2)

            total += anti(xb) - anti(xa)
        return 2.0 / length * total

    got = fourier_coefficients(spec, 30, method="quadrature")
    want = np.array([exact(n) for n in range(1, 31)])
    assert got == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_temperature_initial_instant(rod):
    assert analytic_temperature(rod, ALPHA2, 0.13, 0.0) == 25.0
    xs = np.array([0.0, 0.1, 0.25])
    assert np.array_equal(analytic_temperature(rod, ALPHA2, xs, 0.0),
                          np.array([25.0, 25.0, 25.0]))


def test_temperature_frozen_midtransient(rod):
    assert analytic_temperature(rod, ALPHA2, 0.2, 100.0) == pytest.approx(
        32.863855827741200, rel=1e-12)
    assert analytic_temperature(rod, ALPHA2, 0.1, 100.0) == pytest.approx(
        60.125255908708496, rel=1e-12)


def test_temperature_frozen_near_steady(rod):
    assert analytic_temperature(rod, ALPHA2, 0.2, 4000.0) == pytest.approx(
        49.999999999387560, rel=1e-12)
    assert analytic_temperature(rod, ALPHA2, 0.1, 4000.0) == pytest.approx(
        74.999999999566940, rel=1e-12)
    assert analytic_temperature(rod, ALPHA2, 0.3, 4000.0) == pytest.approx(
        24.999999999566940, rel=1e-12)


def test_temperature_boundary_values_hold(rod):
    for t in (0.5, 5.0, 50.0, 1000.0):
        assert analytic_temperature(rod, ALPHA2, 0.0, t) == pytest.approx(100.0, abs=1e-6)
        assert analytic_temperature(rod, ALPHA2, 0.4, t) == pytest.approx(0.0, abs=1e-6)


def test_temperature_approaches_steady(rod):
    xs = np.linspace(0.0, 0.4, 41)
    target = steady_state(rod, xs)
    # the slowest mode leaves a ~1.4e-3 C residue at 10 decay times and
    # ~4.8e-7 C at 18, so the sub-1e-6 regime starts past 18 of them
    gap10 = np.max(np.abs(analytic_temperature(rod, ALPHA2, xs, 10.0 * TSTAR) - target))
    assert gap10 < 1.5e-3
    gap18 = np.max(np.abs(analytic_temperature(rod, ALPHA2, xs, 18.0 * TSTAR) - target))
    assert gap18 < 1e-6


def test_temperature_tabulated_profile_time_zero():
    table = [(0.0, 100.0), (0.1, 55.0), (0.4, 0.0)]
    spec = ProblemSpec(length=0.4, hot_end=100.0, cold_end=0.0,
                       initial=InitialProfile.tabulated(table))
    assert analytic_temperature(spec, ALPHA2, 0.05, 0.0) == pytest.approx(77.5)
    # and the series limit t -> 0+ approaches the same profile
    assert analytic_temperature(spec, ALPHA2, 0.05, 1.0) == pytest.approx(77.5, abs=0.5)


def test_temperature_argument_errors(rod):
    with pytest.raises(ValueError):
        analytic_temperature(rod, -1e-4, 0.2, 10.0)
    with pytest.raises(ValueError):
        analytic_temperature(rod, ALPHA2, 0.2, -1.0)
    with pytest.raises(ValueError):
        analytic_temperature(rod, ALPHA2, 0.5, 10.0)


def test_sensitivity_frozen_values(rod):
    assert analytic_sensitivity(rod, ALPHA2, 0.2, 100.0) == pytest.approx(
        103672.43458577720, rel=1e-12)
    assert analytic_sensitivity(rod, ALPHA2, 0.2, 500.0) == pytest.approx(
        44928.978148215965, rel=1e-12)
    assert analytic_sensitivity(rod, ALPHA2, 0.1, 100.0) == pytest.approx(
        143145.93445182746, rel=1e-12)


def test_sensitivity_exact_zeros(rod):
    assert analytic_sensitivity(rod, ALPHA2, 0.17, 0.0) == 0.0
    assert analytic_sensitivity(rod, ALPHA2, 0.0, 321.0) == 0.0
    assert analytic_sensitivity(rod, ALPHA2, 0.4, 321.0) == 0.0
    arr = analytic_sensitivity(rod, ALPHA2, np.array([0.0, 0.2, 0.4]), 321.0)
    assert arr[0] == 0.0 and arr[2] == 0.0 and arr[1] != 0.0


def test_sensitivity_taylor_consistency(rod):
    # u(x, t; a(1+h)) - u(x, t; a) = S * a h + C h^2 with C stable in h
    for x, t in ((0.2, 100.0), (0.1, 300.0)):
        base = analytic_temperature(rod, ALPHA2, x, t)
        s = analytic_sensitivity(rod, ALPHA2, x, t)
        cs = []
        for h in (1e-3, 1e-4):
            bumped = analytic_temperature(rod, ALPHA2 * (1.0 + h), x, t)
            cs.append((bumped - base - s * ALPHA2 * h) / h**2)
        assert cs[0] == pytest.approx(cs[1], rel=0.25)


def test_sensitivity_satisfies_forced_heat_equation(rod):
    # dS/dt = alpha2 * d2S/dx2 + d2u/dx2, termwise-differentiated series
    ctl = SeriesControl()
    rng = np.random.default_rng(11)
    for _ in range(20):
        x = float(rng.uniform(0.02, 0.38))
        t = float(rng.uniform(10.0, 2000.0))
        st = _sensitivity_time_derivative(rod, ALPHA2, x, t, ctl)
        sxx = _sensitivity_space_curvature(rod, ALPHA2, x, t, ctl)
        uxx = _temperature_space_curvature(rod, ALPHA2, x, t, ctl)
        scale = max(abs(st), abs(ALPHA2 * sxx), abs(uxx), 1.0)
        assert abs(st - ALPHA2 * sxx - uxx) < 1e-6 * scale


def test_sensitivity_peak_height_scales_inversely(rod):
    # peak of |S| at the midpoint sits within 1.5% of |A1| / (e alpha2)
    a1 = abs(fourier_coefficients(rod, 1)[0])
    for alpha2 in (2.0e-5, 1.0e-4):
        tstar = 0.4**2 / (math.pi**2 * alpha2)
        ts = np.linspace(0.3 * tstar, 4.0 * tstar, 2000)
        peak = max(abs(analytic_sensitivity(rod, alpha2, 0.2, t)) for t in ts)
        bound = a1 / (math.e * alpha2)
        assert abs(peak / bound - 1.0) < 0.015


def test_sensitivity_long_time_decay(rod):
    peak = abs(analytic_sensitivity(rod, ALPHA2, 0.2, TSTAR))
    ts = np.geomspace(2.0 * TSTAR, 25.0 * TSTAR, 20)
    vals = [abs(analytic_sensitivity(rod, ALPHA2, 0.2, t)) for t in ts]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-3 * peak


def test_truncation_warning_on_max_terms(rod):
    ctl = SeriesControl(abs_term_tol=1e-30, min_terms=1, max_terms=5)
    with pytest.warns(SeriesTruncationWarning):
        analytic_temperature(rod, ALPHA2, 0.2, 1.0, ctl)


def test_no_truncation_warning_in_normal_regime(rod):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        analytic_temperature(rod, ALPHA2, 0.2, 100.0)
        analytic_sensitivity(rod, ALPHA2, 0.2, 100.0)


def test_series_control_validation():
    with pytest.raises(ValueError):
        SeriesControl(abs_term_tol=0.0)
    with pytest.raises(ValueError):
        SeriesControl(min_terms=0)
    with pytest.raises(ValueError):
        SeriesControl(min_terms=10, max_terms=5)


def test_initial_profile_validation():
    with pytest.raises(ValueError):
        InitialProfile()
    with pytest.raises(ValueError):
        InitialProfile(constant=25.0, table=((0.0, 1.0), (1.0, 2.0)))
    with pytest.raises(ValueError):
        InitialProfile.tabulated([(0.0, 1.0)])
    with pytest.raises(ValueError):
        InitialProfile.tabulated([(0.0, 1.0), (0.0, 2.0)])
    with pytest.raises(ValueError):
        # must span exactly [0, length]
        ProblemSpec(length=0.4, hot_end=1.0, cold_end=0.0,
                    initial=InitialProfile.tabulated([(0.0, 1.0), (0.3, 0.0)]))


def test_problem_spec_validation():
    with pytest.raises(ValueError):
        ProblemSpec(length=0.0, hot_end=1.0, cold_end=0.0,
                    initial=InitialProfile.uniform(0.5))
