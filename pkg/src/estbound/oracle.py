"""Brute-force lower bound on the worst-case estimation error.

Sampling the error function can only ever underestimate its maximum, so the
sampled maximum is a certified lower bound. Comparing it against the
branch-and-bound upper bound falsifies soundness bugs: a sampled error above
the reported bound is proof of one. The oracle never claims tightness.

Random sampling uses numpy's PCG64 generator so that a (seed, sample count)
pair reproduces the exact same sample sequence, and a longer run with the
same seed extends the shorter one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .framework import ErrorObjective

__all__ = ["OracleConfig", "OracleResult", "sample_max_error", "certify"]


@dataclass(frozen=True)
class OracleConfig:
    samples: int = 100_000
    seed: int = 0
    mode: str = "random"

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.mode not in ("random", "grid"):
            raise ValueError(f"mode must be 'random' or 'grid', got {self.mode!r}")


@dataclass(frozen=True)
class OracleResult:
    """Largest sampled error and where it occurred. max_observed is a lower
    bound on the true worst-case error."""

    max_observed: float
    argmax_x: tuple[float, ...]
    argmax_e: tuple[float, ...]
    samples_used: int


def _grid_points(lows, highs, dim, budget):
    # All corners first (worst cases often sit there), then a regular grid
    # sized to the remaining budget.
    corners = itertools.product(*[(lo, hi) for lo, hi in zip(lows, highs)])
    yield from corners
    k = int(budget ** (1.0 / dim)) if budget >= 1 else 0
    if k >= 2:
        axes = [np.linspace(lo, hi, k) for lo, hi in zip(lows, highs)]
        yield from itertools.product(*axes)


def sample_max_error(obj: ErrorObjective, cfg: OracleConfig) -> OracleResult:
    """Evaluate the error at sampled (parameter, noise) points and return
    the maximum. Random mode draws uniformly over the search box; grid mode
    evaluates every corner of the box plus a regular interior grid."""
    n = obj.n_params
    box = obj.initial_box()
    lows = [c.lb for c in box]
    highs = [c.ub for c in box]

    if cfg.mode == "random":
        rng = np.random.Generator(np.random.PCG64(cfg.seed))
        points = rng.uniform(lows, highs, size=(cfg.samples, box.dim))
        iterator = (tuple(row) for row in points.tolist())
    else:
        iterator = _grid_points(lows, highs, box.dim, cfg.samples)

    best = -math.inf
    best_x: tuple[float, ...] = ()
    best_e: tuple[float, ...] = ()
    used = 0
    for p in iterator:
        x = p[:n]
        e = p[n:]
        value = obj.error_point(x, e)
        used += 1
        if value > best:
            best = value
            best_x = tuple(x)
            best_e = tuple(e)
    return OracleResult(
        max_observed=best,
        argmax_x=best_x,
        argmax_e=best_e,
        samples_used=used,
    )


def certify(report_upper: float, oracle: OracleResult) -> bool:
    """True iff the sampled maximum does not exceed the reported upper bound
    (one ulp of slack for the comparison itself). False means the upper
    bound is provably wrong and must fail the build."""
    return oracle.max_observed <= math.nextafter(report_upper, math.inf)
