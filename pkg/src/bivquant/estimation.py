"""Seeded sampling and empirical counterparts of the analytic quantities.

Sampling draws (U, W) uniforms, inverts the conditional-on-U copula
distribution (quadratic, closed form) to get V, and pushes both through
the marginal quantiles.  The stream is fully determined by the seed, so
regenerating a :class:`SampleSet` is byte-identical.

Empirical quantiles are the inf-type (lower) sample quantiles, matching
the definition the analytic quantile function uses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import models
from .curves import QuantileCurve, conditional_args
from .errors import DomainError, InsufficientMassError
from .numerics import NumericConfig, clip_prob

#: Smallest conditioning subsample accepted by the empirical estimators.
MIN_COND_N = 30


@dataclass(frozen=True, eq=False)
class SampleSet:
    """n pairs drawn from a model, with the provenance needed to regenerate them."""

    pairs: np.ndarray  # shape (n, 2)
    seed: int
    n: int
    model_tag: str

    @property
    def x(self) -> np.ndarray:
        return self.pairs[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.pairs[:, 1]


def sample(
    model: models.BivariateModel, n: int, seed: int, cfg: NumericConfig | None = None
) -> SampleSet:
    """Draw n pairs; identical (model, n, seed) yields bit-identical output."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    rng = np.random.default_rng(int(seed))
    u = rng.random(int(n))
    w = rng.random(int(n))
    v = model.copula.cond_quantile("eq", u, w)
    xs = model.marginal_x.quantile(clip_prob(u, cfg))
    ys = model.marginal_y.quantile(clip_prob(v, cfg))
    return SampleSet(
        pairs=np.column_stack([xs, ys]),
        seed=int(seed),
        n=int(n),
        model_tag=model.describe(),
    )


def empirical_quantile(sorted_values: np.ndarray, q: float) -> float:
    """Inf-type sample quantile: smallest value with empirical CDF >= q."""
    n = len(sorted_values)
    idx = int(np.ceil(q * n)) - 1
    return float(sorted_values[min(max(idx, 0), n - 1)])


def empirical_curve(
    sample_set: SampleSet,
    p: float,
    direction: models.Direction,
    u_grid,
    min_cond_n: int = MIN_COND_N,
) -> QuantileCurve:
    """Empirical curve: sample quantiles replace Q_X and the conditional quantile."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0,1), got {p}")
    us = np.asarray(u_grid, dtype=float)
    if us.ndim != 1 or len(us) == 0 or not np.all(np.diff(us) > 0):
        raise DomainError("u_grid must be a nonempty strictly increasing 1-d sequence")
    if direction.eps1 < 0 and us[0] <= p:
        raise DomainError(f"direction {direction} requires u > p, got u = {us[0]}, p = {p}")
    if direction.eps1 > 0 and us[-1] >= 1.0 - p:
        raise DomainError(f"direction {direction} requires u < 1 - p, got u = {us[-1]}, p = {p}")

    xs = sample_set.x
    ys = sample_set.y
    order = np.argsort(xs, kind="stable")
    xs_sorted = xs[order]

    points = np.empty((len(us), 3))
    for i, u in enumerate(us):
        x_hat = empirical_quantile(xs_sorted, u)
        mask = xs <= x_hat if direction.eps1 < 0 else xs > x_hat
        sub = ys[mask]
        if len(sub) < min_cond_n:
            raise InsufficientMassError(
                f"conditioning subsample at u = {u} has {len(sub)} points "
                f"(< min_cond_n = {min_cond_n})"
            )
        _, q = conditional_args(p, direction, u)
        y_hat = empirical_quantile(np.sort(sub), float(q))
        points[i] = (u, x_hat, y_hat)
    return QuantileCurve(p=p, direction=direction, points=points)


def empirical_mrl_first(sample_set: SampleSet, u: float, min_cond_n: int = MIN_COND_N) -> float:
    """Mean exceedance over the empirical u-quantile of the first component."""
    u = float(u)
    if not 0.0 < u < 1.0:
        raise DomainError(f"u must lie in (0,1), got {u}")
    xs_sorted = np.sort(sample_set.x)
    x_hat = empirical_quantile(xs_sorted, u)
    exceed = sample_set.x[sample_set.x > x_hat]
    if len(exceed) < min_cond_n:
        raise InsufficientMassError(
            f"only {len(exceed)} exceedances above the u = {u} quantile "
            f"(< min_cond_n = {min_cond_n})"
        )
    return float(np.mean(exceed) - x_hat)
