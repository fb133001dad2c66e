"""Level-p quantile curves in the four orthant directions.

A curve is the set of points (x, y) whose orthant probability equals p.
It is materialized by sweeping the marginal probability u of the first
component and inverting the matching conditional distribution of the
second:

    eps = (-,-):  y = Q_{Y | X <= Q_X(u)}(p / u),        u > p
    eps = (+,-):  y = Q_{Y | X >= Q_X(u)}(p / (1-u)),    u < 1 - p
    eps = (-,+):  y = Q_{Y | X <= Q_X(u)}(1 - p / u),    u > p
    eps = (+,+):  y = Q_{Y | X >= Q_X(u)}(1 - p / (1-u)), u < 1 - p

Every emitted point is checked against the defining level-set property
|orthant_prob(eps, x, y) - p| <= CURVE_TOL by the test-suite and the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import models
from .errors import DegenerateLevelError, DomainError
from .numerics import NumericConfig

#: Tolerance of the level-set invariant; far above the root tolerance so the
#: check is meaningful instead of tautological.
CURVE_TOL = 1e-6

#: Default distance kept from the open ends of the admissible u-interval.
EDGE_MARGIN = 1e-4


@dataclass(frozen=True)
class QuantileCurve:
    """Ordered (u, x, y) triples of one level-p, direction-eps curve."""

    p: float
    direction: models.Direction
    points: np.ndarray  # shape (n, 3), u strictly increasing

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise DomainError(f"points must have shape (n, 3), got {pts.shape}")
        if pts.shape[0] >= 2 and not np.all(np.diff(pts[:, 0]) > 0):
            raise DomainError("curve parameters u must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @property
    def u(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def x(self) -> np.ndarray:
        return self.points[:, 1]

    @property
    def y(self) -> np.ndarray:
        return self.points[:, 2]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "direction": str(self.direction),
            "points": [[float(a), float(b), float(c)] for a, b, c in self.points],
        }


def _require_level(p) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0,1), got {p}")
    return p


def admissible_interval(p: float, direction: models.Direction, margin: float = EDGE_MARGIN):
    """Clipped u-interval on which the direction's parametrization is defined."""
    p = _require_level(p)
    if direction.eps1 < 0:
        lo, hi = p + margin, 1.0 - margin
    else:
        lo, hi = margin, 1.0 - p - margin
    if lo >= hi:
        raise DegenerateLevelError(
            f"admissible u-interval for p = {p}, direction {direction} is empty after "
            f"clipping by {margin}"
        )
    return lo, hi


def conditional_args(p: float, direction: models.Direction, u):
    """Map (p, direction, u) to the conditioning sense and probability argument."""
    u = np.asarray(u, dtype=float)
    if direction.eps1 < 0:
        sense, base = "le", p / u
    else:
        sense, base = "ge", p / (1.0 - u)
    q = base if direction.eps2 < 0 else 1.0 - base
    return sense, q


def curve_from_conditional(
    model: models.BivariateModel,
    p,
    direction: models.Direction,
    u,
    cfg: NumericConfig | None = None,
) -> tuple[float, float]:
    """Single curve point at parameter u; consistent with :func:`curve_points`."""
    p = _require_level(p)
    u = float(u)
    if direction.eps1 < 0 and not (p < u < 1.0):
        raise DomainError(f"direction {direction} requires u > p (and u < 1), got u = {u}, p = {p}")
    if direction.eps1 > 0 and not (0.0 < u < 1.0 - p):
        raise DomainError(f"direction {direction} requires u < 1 - p (and u > 0), got u = {u}, p = {p}")
    x = models.marginal_quantile(model, "x", u, cfg)
    sense, q = conditional_args(p, direction, u)
    y = models.conditional_quantile(model, sense, u, float(q), cfg)
    return x, y


def curve_points(
    model: models.BivariateModel,
    p,
    direction: models.Direction,
    n_points: int,
    cfg: NumericConfig | None = None,
    margin: float = EDGE_MARGIN,
) -> QuantileCurve:
    """Materialize the curve on a uniform u-grid over the admissible interval."""
    p = _require_level(p)
    if int(n_points) != n_points or n_points < 2:
        raise DomainError(f"n_points must be an integer >= 2, got {n_points!r}")
    lo, hi = admissible_interval(p, direction, margin)
    us = np.linspace(lo, hi, int(n_points))
    xs = models.marginal_quantile(model, "x", us, cfg)
    sense, qs = conditional_args(p, direction, us)
    ys = models.conditional_quantile(model, sense, us, qs, cfg)
    return QuantileCurve(p=p, direction=direction, points=np.column_stack([us, xs, ys]))


def level_residuals(model: models.BivariateModel, curve: QuantileCurve) -> np.ndarray:
    """|orthant_prob(direction, x, y) - p| per curve point (the defining check)."""
    probs = models.orthant_prob(model, curve.direction, curve.x, curve.y)
    return np.abs(np.asarray(probs, dtype=float) - curve.p)
