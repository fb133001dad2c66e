"""Acceptance suite: the exit criteria, one pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
Every tolerance is pinned here, none deferred.
"""

import json
import time

import numpy as np
import pytest

from bivquant import (
    ALL_DIRECTIONS,
    BivariateModel,
    Exponential,
    FGMCopula,
    IndependenceCopula,
    InfiniteMeanError,
    LOWER_LOWER,
    Pareto,
    UPPER_UPPER,
    Uniform01,
    Weibull,
    component_from_model,
    conditional_quantile,
    curve_from_conditional,
    curve_points,
    empirical_curve,
    empirical_mrl_first,
    hazard_mrl_identity_residual,
    level_residuals,
    marginal_quantile,
    quantile_from_hazard,
    quantile_from_mrl,
    quantile_from_reversed_hazard,
    quantile_from_reversed_mrl,
    sample,
)
from bivquant import reliability as rel
from bivquant.cli import main
from bivquant.reconstruction import ComponentFunction

ROUND_TRIP_TOL = 1e-4
IDENTITY_TOL = 1e-6
REDUCTION_TOL = 1e-9
CURVE_TOL = 1e-6

MAIN_GRID = np.linspace(0.01, 0.95, 33)
REV_GRID = np.linspace(0.05, 0.99, 33)
GRID33 = np.arange(1, 34) / 34.0

# Six built-in configurations with zero-origin supports, so hazard-type
# reconstructions recover the quantile itself.
ZERO_ORIGIN_CONFIGS = [
    BivariateModel(Uniform01(), Uniform01(), IndependenceCopula()),
    BivariateModel(Exponential(1.0), Exponential(0.5), IndependenceCopula()),
    BivariateModel(Weibull(1.0, 2.0), Exponential(1.0), IndependenceCopula()),
    BivariateModel(Uniform01(), Uniform01(), FGMCopula(1.0)),
    BivariateModel(Exponential(1.0), Uniform01(), FGMCopula(-1.0)),
    BivariateModel(Weibull(1.0, 1.5), Weibull(2.0, 0.8), FGMCopula(0.5)),
]

# Finite-mean configurations (Pareto included; the MRL map is offset-exact).
FINITE_MEAN_CONFIGS = [
    BivariateModel(Uniform01(), Uniform01(), IndependenceCopula()),
    BivariateModel(Exponential(1.0), Exponential(0.5), IndependenceCopula()),
    BivariateModel(Pareto(1.0, 2.0), Exponential(1.0), IndependenceCopula()),
    BivariateModel(Uniform01(), Uniform01(), FGMCopula(1.0)),
    BivariateModel(Exponential(1.0), Uniform01(), FGMCopula(-1.0)),
    BivariateModel(Weibull(1.0, 1.5), Pareto(1.0, 3.0), FGMCopula(0.5)),
]


def report(number, text, elapsed=None):
    suffix = f" [{elapsed:.2f}s]" if elapsed is not None else ""
    print(f"PASS criterion {number}: {text}{suffix}")


def test_criterion_1_pareto_curve_law():
    start = time.time()
    worst = 0.0
    for alpha in (1.0, 2.0):
        model = BivariateModel(Pareto(1.0, alpha), Pareto(1.0, alpha), IndependenceCopula())
        for p in (0.1, 0.25, 0.5):
            curve = curve_points(model, p, UPPER_UPPER, 200)
            target = p ** (-1.0 / alpha)
            worst = max(worst, float(np.max(np.abs(curve.x * curve.y - target))))
    elapsed = time.time() - start
    assert worst <= 1e-6, worst
    assert elapsed < 1.0
    report(1, f"independent Pareto ++ curves satisfy xy = p^(-1/alpha), max |dev| = {worst:.2e}",
           elapsed)


def test_criterion_2_level_set_property():
    start = time.time()
    worst = 0.0
    for theta in (-1.0, 0.5, 1.0):
        for mx, my in [(Exponential(1.0), Uniform01()), (Uniform01(), Exponential(1.0))]:
            model = BivariateModel(mx, my, FGMCopula(theta))
            for direction in ALL_DIRECTIONS:
                for p in (0.1, 0.25, 0.5):
                    curve = curve_points(model, p, direction, 200)
                    worst = max(worst, float(level_residuals(model, curve).max()))
    elapsed = time.time() - start
    assert worst <= CURVE_TOL, worst
    assert elapsed < 5.0
    report(2, f"orthant-probability residual over all directions/levels = {worst:.2e}", elapsed)


def test_criterion_3_hazard_round_trip():
    start = time.time()
    worst = 0.0
    for model in ZERO_ORIGIN_CONFIGS:
        first = component_from_model(model, "hazard1")
        second = component_from_model(model, "hazard2", 0.5)
        for t in MAIN_GRID:
            worst = max(
                worst,
                abs(quantile_from_hazard(first, t) - marginal_quantile(model, "x", t)),
                abs(quantile_from_hazard(second, t) - conditional_quantile(model, "le", 0.5, t)),
            )
    elapsed = time.time() - start
    assert worst <= ROUND_TRIP_TOL, worst
    assert elapsed < 10.0
    report(3, f"hazard round trip sup error over 6 configurations = {worst:.2e}", elapsed)


def test_criterion_4_mrl_round_trip_and_infinite_mean():
    start = time.time()
    worst = 0.0
    for model in FINITE_MEAN_CONFIGS:
        first = component_from_model(model, "mrl1")
        second = component_from_model(model, "mrl2", 0.5)
        for t in MAIN_GRID:
            worst = max(
                worst,
                abs(quantile_from_mrl(first, t) - marginal_quantile(model, "x", t)),
                abs(quantile_from_mrl(second, t) - conditional_quantile(model, "le", 0.5, t)),
            )
    assert worst <= ROUND_TRIP_TOL, worst
    heavy = BivariateModel(Pareto(1.0, 0.5), Exponential(1.0), IndependenceCopula())
    with pytest.raises(InfiniteMeanError, match="infinite mean"):
        component_from_model(heavy, "mrl1")
    with pytest.raises(InfiniteMeanError, match="infinite mean"):
        rel.mrl_first(heavy, 0.5)
    report(4, f"MRL round trip sup error = {worst:.2e}; Pareto 0.5 raises the named "
              "infinite-mean error", time.time() - start)


def test_criterion_5_reversed_round_trips_and_mean_freedom():
    start = time.time()
    worst = 0.0
    for model in ZERO_ORIGIN_CONFIGS:
        pieces = [
            ("rev_hazard1", quantile_from_reversed_hazard,
             lambda t, m=model: marginal_quantile(m, "x", t)),
            ("rev_hazard2", quantile_from_reversed_hazard,
             lambda t, m=model: conditional_quantile(m, "le", 0.5, t)),
            ("rev_mrl1", quantile_from_reversed_mrl,
             lambda t, m=model: marginal_quantile(m, "x", t)),
            ("rev_mrl2", quantile_from_reversed_mrl,
             lambda t, m=model: conditional_quantile(m, "le", 0.5, t)),
        ]
        for kind, inverse, reference in pieces:
            comp = component_from_model(model, kind, 0.5)
            for t in REV_GRID:
                worst = max(worst, abs(inverse(comp, t) - reference(t)))
    assert worst <= ROUND_TRIP_TOL, worst
    # reversed-MRL reconstruction consumes no mean: identical with/without one
    model = ZERO_ORIGIN_CONFIGS[1]
    bare = component_from_model(model, "rev_mrl1")
    hinted = ComponentFunction("rev_mrl1", bare.eval, mean_hint=7.25)
    assert all(
        quantile_from_reversed_mrl(bare, t) == quantile_from_reversed_mrl(hinted, t)
        for t in REV_GRID
    )
    report(5, f"reversed-time round trip sup error = {worst:.2e}; mean hint is ignored",
           time.time() - start)


def test_criterion_6_hazard_mrl_identity():
    start = time.time()
    worst = 0.0
    for model in FINITE_MEAN_CONFIGS:
        for component in ("first", "second"):
            for t in GRID33:
                worst = max(worst, abs(hazard_mrl_identity_residual(model, component, 0.5, t)))
    assert worst <= IDENTITY_TOL, worst
    report(6, f"(1-t) m(t) = int_t^1 dz/h(z): max |residual| = {worst:.2e}",
           time.time() - start)


def test_criterion_7_independence_reduction():
    start = time.time()
    cases = [
        (Uniform01(), {
            "hazard": lambda p: 1 / (1 - p),
            "mrl": lambda p: (1 - p) / 2,
            "rev_hazard": lambda p: 1 / p,
            "rev_mrl": lambda p: p / 2,
        }),
        (Exponential(2.0), {
            "hazard": lambda p: 2.0,
            "mrl": lambda p: 0.5,
            "rev_hazard": lambda p: 2.0 * (1 - p) / p,
            "rev_mrl": lambda p: (-np.log(1 - p) - ((1 - p) * np.log(1 - p) + p) / p) / 2.0,
        }),
        (Pareto(1.0, 3.0), {
            "hazard": lambda p: 3.0 * (1 - p) ** (1 / 3.0),
            "mrl": lambda p: (1 - p) ** (-1 / 3.0) / 2.0,
            "rev_hazard": lambda p: 3.0 * (1 - p) ** (4 / 3.0) / p,
            "rev_mrl": lambda p: (1 - p) ** (-1 / 3.0) - 1.5 * (1 - (1 - p) ** (2 / 3.0)) / p,
        }),
    ]
    ops = {
        "hazard": rel.hazard_second,
        "mrl": rel.mrl_second,
        "rev_hazard": rel.reversed_hazard_second,
        "rev_mrl": rel.reversed_mrl_second,
    }
    worst = 0.0
    for fam, formulas in cases:
        model = BivariateModel(Exponential(1.0), fam, IndependenceCopula())
        for name, op in ops.items():
            for p in GRID33:
                got = float(op(model, 0.5, p))
                worst = max(worst, abs(got - formulas[name](p)))
    assert worst <= REDUCTION_TOL, worst
    report(7, f"independent second components match marginal formulas, max |dev| = {worst:.2e}",
           time.time() - start)


def test_criterion_8_exponential_invariance():
    start = time.time()
    worst = 0.0
    for lam in (0.5, 1.0, 2.0):
        model = BivariateModel(Exponential(lam), Uniform01(), IndependenceCopula())
        for u in GRID33:
            worst = max(
                worst,
                abs(float(rel.hazard_first(model, u)) - lam),
                abs(float(rel.mrl_first(model, u)) - 1.0 / lam),
            )
    assert worst <= REDUCTION_TOL, worst
    report(8, f"h1 = rate and m1 = 1/rate across the grid, max |dev| = {worst:.2e}",
           time.time() - start)


def test_criterion_9_monte_carlo_consistency():
    start = time.time()
    model = BivariateModel(Uniform01(), Uniform01(), FGMCopula(1.0))
    draws = sample(model, 100_000, seed=1)
    grid = np.linspace(0.3, 0.9, 9)
    emp = empirical_curve(draws, 0.25, LOWER_LOWER, grid)
    ana = np.array([curve_from_conditional(model, 0.25, LOWER_LOWER, u) for u in grid])
    sup = max(np.abs(emp.x - ana[:, 0]).max(), np.abs(emp.y - ana[:, 1]).max())
    assert sup <= 0.02, sup

    analytic_mrl = float(rel.mrl_first(model, 0.5))
    estimate = empirical_mrl_first(draws, 0.5)
    xs = np.sort(draws.x)
    x_hat = xs[int(np.ceil(0.5 * len(xs))) - 1]
    exceed = draws.x[draws.x > x_hat] - x_hat
    std_err = exceed.std(ddof=1) / np.sqrt(len(exceed))
    assert abs(estimate - analytic_mrl) <= 3.0 * std_err
    elapsed = time.time() - start
    assert elapsed < 30.0
    report(9, f"empirical curve sup distance = {sup:.4f} (<= 0.02); "
              f"m1 estimate within {abs(estimate - analytic_mrl) / std_err:.2f} SE", elapsed)


def test_criterion_10_cli_contract(tmp_path, capsys):
    start = time.time()
    exp_spec = tmp_path / "exp.json"
    exp_spec.write_text(json.dumps({
        "marginal_x": {"kind": "Exponential", "rate": 1.0},
        "marginal_y": {"kind": "Exponential", "rate": 1.0},
        "copula": {"kind": "Independence"},
    }))
    heavy_spec = tmp_path / "heavy.json"
    heavy_spec.write_text(json.dumps({
        "marginal_x": {"kind": "Pareto", "scale": 1.0, "shape": 0.5},
        "marginal_y": {"kind": "Exponential", "rate": 1.0},
        "copula": {"kind": "Independence"},
    }))

    # exit 0: verify on the independent-exponential model
    assert main(["verify", "--model", str(exp_spec)]) == 0
    # exit 1: verification failure (infinite mean on the MRL checks)
    assert main(["verify", "--model", str(heavy_spec)]) == 1
    # exit 2: usage error
    assert main(["curve", "--model", str(exp_spec), "-p", "1.5", "--dir", "++",
                 "--out", str(tmp_path / "x.csv")]) == 2
    # exit 3: model-spec / I/O error
    assert main(["curve", "--model", str(tmp_path / "missing.json"), "-p", "0.5",
                 "--dir", "++", "--out", str(tmp_path / "x.csv")]) == 3
    capsys.readouterr()

    # byte-identical re-runs
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert main(["curve", "--model", str(exp_spec), "-p", "0.25", "--dir", "++",
                     "-n", "64", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    report(10, "exit codes 0/1/2/3 honoured; outputs byte-identical across re-runs",
           time.time() - start)
