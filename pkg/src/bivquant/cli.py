"""Batch command-line surface.

Subcommands: ``curve``, ``field``, ``reconstruct``, ``verify``, ``sample``.
Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O or
model-specification error.  All outputs (CSV, JSON, SVG, reports) are
byte-identical across re-runs for identical inputs; numbers are
serialized with 9 significant digits in CSV.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from . import curves, estimation, models, reconstruction, reliability
from .errors import (
    BivquantError,
    BoundaryError,
    ConfigError,
    DegenerateConditioningError,
    DegenerateLevelError,
    DomainError,
    InfiniteMeanError,
    ModelSpecError,
)
from .numerics import NumericConfig

ROUND_TRIP_TOL = 1e-4
IDENTITY_TOL = 1e-6
VERIFY_CONDITIONING_U = 0.5

_USAGE_ERRORS = (
    DomainError,
    DegenerateLevelError,
    DegenerateConditioningError,
    BoundaryError,
    InfiniteMeanError,
)
_SPEC_ERRORS = (ModelSpecError, ConfigError, OSError)


def _fmt(x) -> str:
    return format(float(x), ".9g")


# ---------------------------------------------------------------------------
# Input loading
# ---------------------------------------------------------------------------


def load_model(path: str) -> models.BivariateModel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelSpecError(f"model file {path!r} is not valid JSON: {exc}") from exc
    return models.model_from_dict(payload)


def load_numeric_config(
    path: str | None, base: NumericConfig | None = None
) -> NumericConfig | None:
    """Apply a strict {"numerics": {...}} override file onto ``base`` defaults."""
    if path is None:
        return None
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(payload) - {"numerics"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    overrides = payload.get("numerics", {})
    if not isinstance(overrides, dict):
        raise ConfigError("'numerics' must be an object")
    allowed = {f.name for f in fields(NumericConfig)}
    bad = set(overrides) - allowed
    if bad:
        raise ConfigError(f"unknown numerics keys: {sorted(bad)}")
    return replace(base if base is not None else NumericConfig(), **overrides)


@dataclass(frozen=True)
class RunConfig:
    """One run's validated inputs: model, numerics overrides, output routing."""

    model: models.BivariateModel
    numerics: NumericConfig | None
    format: str
    out_path: str | None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            model=load_model(args.model),
            numerics=load_numeric_config(args.config),
            format=args.format,
            out_path=args.out,
        )


def load_sample_csv(path: str, model_tag: str = "") -> estimation.SampleSet:
    """Read an 'x,y' sample CSV back into a SampleSet (seed unknown: -1)."""
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        if isinstance(exc, OSError):
            raise
        raise ModelSpecError(f"sample file {path!r} is not a two-column CSV: {exc}") from exc
    if data.shape[1] != 2:
        raise ModelSpecError(f"sample file {path!r} must have exactly two columns (x,y)")
    return estimation.SampleSet(pairs=data, seed=-1, n=data.shape[0], model_tag=model_tag)


def _write_text(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _csv(header: str, rows) -> str:
    return "\n".join([header, *rows]) + "\n"


# ---------------------------------------------------------------------------
# SVG rendering (hand-emitted polyline plot; no plotting dependency)
# ---------------------------------------------------------------------------


def render_curve_svg(curve: curves.QuantileCurve, width: int = 800, height: int = 600) -> str:
    xs, ys = curve.x, curve.y
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    x_pad = 0.05 * (x_hi - x_lo) or 0.5
    y_pad = 0.05 * (y_hi - y_lo) or 0.5
    x_lo, x_hi = x_lo - x_pad, x_hi + x_pad
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

    ml, mr, mt, mb = 60.0, 20.0, 20.0, 45.0
    pw, ph = width - ml - mr, height - mt - mb

    def sx(x):
        return ml + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        return mt + (y_hi - y) / (y_hi - y_lo) * ph

    pts = " ".join(f"{_fmt(sx(a))},{_fmt(sy(b))}" for a, b in zip(xs, ys))
    legend = f"p={_fmt(curve.p)}, direction={curve.direction}"
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{_fmt(ml)}" y1="{_fmt(mt)}" x2="{_fmt(ml)}" y2="{_fmt(height - mb)}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{_fmt(ml)}" y1="{_fmt(height - mb)}" x2="{_fmt(width - mr)}" '
        f'y2="{_fmt(height - mb)}" stroke="black" stroke-width="1"/>',
        f'<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{pts}"/>',
        f'<text x="{_fmt(ml + pw / 2)}" y="{_fmt(height - 8)}" text-anchor="middle" '
        f'font-size="14">x</text>',
        f'<text x="{_fmt(18.0)}" y="{_fmt(mt + ph / 2)}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 18 {_fmt(mt + ph / 2)})">y</text>',
        f'<text x="{_fmt(ml)}" y="{_fmt(height - mb + 16)}" text-anchor="middle" '
        f'font-size="11">{_fmt(x_lo)}</text>',
        f'<text x="{_fmt(width - mr)}" y="{_fmt(height - mb + 16)}" text-anchor="middle" '
        f'font-size="11">{_fmt(x_hi)}</text>',
        f'<text x="{_fmt(ml - 6)}" y="{_fmt(height - mb)}" text-anchor="end" '
        f'font-size="11">{_fmt(y_lo)}</text>',
        f'<text x="{_fmt(ml - 6)}" y="{_fmt(mt + 10)}" text-anchor="end" '
        f'font-size="11">{_fmt(y_hi)}</text>',
        f'<text x="{_fmt(width - mr)}" y="{_fmt(mt + 14)}" text-anchor="end" '
        f'font-size="13">{legend}</text>',
        "</svg>",
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_curve(args) -> int:
    run = RunConfig.from_args(args)
    direction = models.Direction.from_string(args.dir)
    if args.sample:
        draws = load_sample_csv(args.sample, run.model.describe())
        lo, hi = curves.admissible_interval(args.level, direction)
        grid = np.linspace(lo, hi, args.points)
        curve = estimation.empirical_curve(draws, args.level, direction, grid)
    else:
        curve = curves.curve_points(run.model, args.level, direction, args.points, run.numerics)
    residuals = curves.level_residuals(run.model, curve)
    if run.format == "csv":
        rows = (
            f"{_fmt(u)},{_fmt(x)},{_fmt(y)},{_fmt(r)}"
            for (u, x, y), r in zip(curve.points, residuals)
        )
        _write_text(run.out_path, _csv("u,x,y,orthant_prob_residual", rows))
    else:
        _write_text(run.out_path, json.dumps(curve.to_dict(), sort_keys=True, indent=2) + "\n")
    if args.svg:
        _write_text(args.svg, render_curve_svg(curve))
    return 0


_FIELD_KINDS = {
    "hazard": (reliability.hazard_first, reliability.hazard_second),
    "mrl": (reliability.mrl_first, reliability.mrl_second),
    "rev-hazard": (reliability.reversed_hazard_first, reliability.reversed_hazard_second),
    "rev-mrl": (reliability.reversed_mrl_first, reliability.reversed_mrl_second),
}


def cmd_field(args) -> int:
    run = RunConfig.from_args(args)
    model, cfg = run.model, run.numerics
    first_fn, second_fn = _FIELD_KINDS[args.kind]
    g = args.grid
    if g < 1:
        raise DomainError(f"grid must be >= 1, got {g}")
    probs = np.arange(1, g + 1) / (g + 1.0)
    rows = []
    for u in probs:
        first = float(first_fn(model, u, cfg))
        seconds = np.atleast_1d(second_fn(model, u, probs, cfg))
        rows.extend(
            f"{_fmt(u)},{_fmt(p)},{_fmt(first)},{_fmt(s)},{args.kind}"
            for p, s in zip(probs, seconds)
        )
    _write_text(run.out_path, _csv("u,p_cond,first,second,kind", rows))
    return 0


_RECON_KINDS = {
    ("hazard", "first"): ("hazard1", reconstruction.quantile_from_hazard),
    ("hazard", "second"): ("hazard2", reconstruction.quantile_from_hazard),
    ("mrl", "first"): ("mrl1", reconstruction.quantile_from_mrl),
    ("mrl", "second"): ("mrl2", reconstruction.quantile_from_mrl),
    ("rev-hazard", "first"): ("rev_hazard1", reconstruction.quantile_from_reversed_hazard),
    ("rev-hazard", "second"): ("rev_hazard2", reconstruction.quantile_from_reversed_hazard),
    ("rev-mrl", "first"): ("rev_mrl1", reconstruction.quantile_from_reversed_mrl),
    ("rev-mrl", "second"): ("rev_mrl2", reconstruction.quantile_from_reversed_mrl),
}


def _true_quantile(model, component: str, kind: str, conditioning_u: float, t: float, cfg) -> float:
    """Reference value for a reconstruction.

    Hazard-type maps are invariant to a support shift and recover the
    quantile relative to its value at probability 0; the MRL map carries
    the absolute location through the mean.
    """
    if component == "first":
        value = models.marginal_quantile(model, "x", t, cfg)
        origin = model.marginal_x.support[0]
    else:
        value = models.conditional_quantile(model, "le", conditioning_u, t, cfg)
        origin = model.marginal_y.support[0]
    if kind in ("mrl1", "mrl2"):
        return value
    return value - origin


def cmd_reconstruct(args) -> int:
    # overrides land on the tight-clip reconstruction defaults, not the
    # package-wide ones, so bumping quad_points does not loosen the clip
    run = RunConfig.from_args(args)
    model = run.model
    cfg = load_numeric_config(args.config, base=reconstruction.RECON_CONFIG)
    kind, inverse_map = _RECON_KINDS[(args.kind, args.component)]
    comp = reconstruction.component_from_model(model, kind, args.conditioning_u, cfg)
    lo, hi = (0.05, 0.99) if args.kind.startswith("rev-") else (0.01, 0.95)
    ts = np.linspace(lo, hi, args.grid)
    rows = []
    for t in ts:
        rec = inverse_map(comp, float(t), cfg)
        ref = _true_quantile(model, args.component, kind, args.conditioning_u, float(t), cfg)
        rows.append(f"{_fmt(t)},{_fmt(rec)},{_fmt(ref)},{_fmt(abs(rec - ref))}")
    _write_text(run.out_path, _csv("t,reconstructed,reference,abs_error", rows))
    if kind.startswith("rev_hazard"):
        bias = reconstruction.reversed_hazard_clip_bias(comp, cfg)
        sys.stdout.write(f"reversed-hazard lower-clip bias estimate: {_fmt(bias)}\n")
    return 0


def _verification_checks(model, cfg):
    """Round trips plus the hazard/MRL identity; one result row per check."""
    u0 = VERIFY_CONDITIONING_U
    ts_main = np.linspace(0.01, 0.95, 17)
    ts_rev = np.linspace(0.05, 0.99, 17)
    ts_identity = np.arange(1, 34) / 34.0
    specs = [
        ("hazard-roundtrip-first", "hazard1", reconstruction.quantile_from_hazard, ts_main),
        ("hazard-roundtrip-second", "hazard2", reconstruction.quantile_from_hazard, ts_main),
        ("mrl-roundtrip-first", "mrl1", reconstruction.quantile_from_mrl, ts_main),
        ("mrl-roundtrip-second", "mrl2", reconstruction.quantile_from_mrl, ts_main),
        ("rev-hazard-roundtrip-first", "rev_hazard1", reconstruction.quantile_from_reversed_hazard, ts_rev),
        ("rev-hazard-roundtrip-second", "rev_hazard2", reconstruction.quantile_from_reversed_hazard, ts_rev),
        ("rev-mrl-roundtrip-first", "rev_mrl1", reconstruction.quantile_from_reversed_mrl, ts_rev),
        ("rev-mrl-roundtrip-second", "rev_mrl2", reconstruction.quantile_from_reversed_mrl, ts_rev),
    ]
    results = []
    for name, kind, inverse_map, ts in specs:
        component = "first" if kind.endswith("1") else "second"
        try:
            comp = reconstruction.component_from_model(model, kind, u0, cfg)
            errs = [
                abs(
                    inverse_map(comp, float(t), cfg)
                    - _true_quantile(model, component, kind, u0, float(t), cfg)
                )
                for t in ts
            ]
            max_res = max(errs)
            results.append((name, max_res, ROUND_TRIP_TOL, max_res <= ROUND_TRIP_TOL, "", None))
        except InfiniteMeanError as exc:
            results.append((name, None, ROUND_TRIP_TOL, False, str(exc), None))
    for component in ("first", "second"):
        name = f"identity-{component}"
        try:
            residuals = [
                (float(t), reconstruction.hazard_mrl_identity_residual(model, component, u0, float(t), cfg))
                for t in ts_identity
            ]
            max_res = max(abs(r) for _, r in residuals)
            results.append((name, max_res, IDENTITY_TOL, max_res <= IDENTITY_TOL, "", residuals))
        except InfiniteMeanError as exc:
            results.append((name, None, IDENTITY_TOL, False, str(exc), None))
    return results


def cmd_verify(args) -> int:
    run = RunConfig.from_args(args)
    cfg = load_numeric_config(args.config, base=reconstruction.RECON_CONFIG)
    results = _verification_checks(run.model, cfg)
    for name, max_res, tol, passed, note, _ in results:
        if max_res is None:
            sys.stdout.write(f"{name}: FAIL ({note})\n")
        else:
            status = "PASS" if passed else "FAIL"
            sys.stdout.write(f"{name}: max_residual={_fmt(max_res)} tol={_fmt(tol)} {status}\n")
    all_pass = all(passed for _, _, _, passed, _, _ in results)
    worst = max((r for _, r, _, _, _, _ in results if r is not None), default=float("nan"))
    sys.stdout.write(f"max residual over all checks: {_fmt(worst)}\n")
    sys.stdout.write(f"verify: {'PASS' if all_pass else 'FAIL'}\n")
    if run.out_path:
        rows = []
        for name, _, _, _, _, residuals in results:
            if residuals is not None:
                rows.extend(f"{name},{_fmt(t)},{_fmt(r)}" for t, r in residuals)
        _write_text(run.out_path, _csv("check,t,residual", rows))
    return 0 if all_pass else 1


def cmd_sample(args) -> int:
    run = RunConfig.from_args(args)
    sample_set = estimation.sample(run.model, args.n, args.seed, run.numerics)
    rows = (f"{_fmt(x)},{_fmt(y)}" for x, y in sample_set.pairs)
    _write_text(run.out_path, _csv("x,y", rows))
    return 0


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bivquant",
        description="Bivariate quantile curves and quantile-curve reliability analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", required=True, help="model specification JSON file")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--config", default=None, help="numerics override JSON file")

    p_curve = sub.add_parser("curve", parents=[common], help="emit one quantile curve")
    p_curve.add_argument("-p", "--level", type=float, required=True)
    p_curve.add_argument("--dir", choices=("--", "+-", "-+", "++", "mm", "pm", "mp", "pp"),
                         required=True,
                         help="orthant direction; mm/pm/mp/pp spell the sign pairs for "
                              "values the shell or argparse would eat ('--', '-+')")
    p_curve.add_argument("-n", "--points", type=int, default=200)
    p_curve.add_argument("--svg", default=None, help="also write an SVG polyline plot")
    p_curve.add_argument("--sample", default=None,
                         help="sample CSV (x,y header): emit the empirical curve instead")

    p_field = sub.add_parser("field", parents=[common], help="emit a reliability field grid")
    p_field.add_argument("--kind", choices=tuple(_FIELD_KINDS), required=True)
    p_field.add_argument("--grid", type=int, default=9)

    p_recon = sub.add_parser("reconstruct", parents=[common],
                             help="rebuild a quantile function from a reliability component")
    p_recon.add_argument("--kind", choices=tuple(_FIELD_KINDS), required=True)
    p_recon.add_argument("--component", choices=("first", "second"), default="first")
    p_recon.add_argument("--conditioning-u", type=float, default=0.5)
    p_recon.add_argument("--grid", type=int, default=33)

    sub.add_parser("verify", parents=[common],
                   help="run all round trips and the hazard/MRL identity")

    p_sample = sub.add_parser("sample", parents=[common], help="draw a seeded sample CSV")
    p_sample.add_argument("--n", type=int, required=True)
    p_sample.add_argument("--seed", type=int, default=0)

    return parser


_COMMANDS = {
    "curve": cmd_curve,
    "field": cmd_field,
    "reconstruct": cmd_reconstruct,
    "verify": cmd_verify,
    "sample": cmd_sample,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return _COMMANDS[args.command](args)
    except _USAGE_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except _SPEC_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except BivquantError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
