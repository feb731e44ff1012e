"""Concrete observation models and estimators.

Range-based localization (distances to fixed landmarks) is the main
observation model; estimators include the identity and constant baselines
used in tests, an iterative least-squares estimator, and a deliberately
broken stub for exercising certification failure paths. The neural-network
estimator lives in `mlp`.
"""

from __future__ import annotations

import math
from typing import Sequence

from .framework import EstimatorModel, ObservationModel, Vector
from .interval import (
    Interval,
    IntervalBox,
    _make,
    _mul_scalar,
    iadd,
    imul,
    ineg,
    isqr,
    isqrt,
    isub,
)

__all__ = [
    "IdentityObservation",
    "TrilaterationModel",
    "IdentityEstimator",
    "ConstantEstimator",
    "GradientDescentEstimator",
    "UnsoundStubEstimator",
]


class IdentityObservation(ObservationModel):
    """Observation model g(x) = x."""

    def __init__(self, dim: int) -> None:
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.n_params = dim
        self.n_obs = dim

    def eval_point(self, x: Sequence[float]) -> Vector:
        self._check_point(x)
        return tuple(float(v) for v in x)

    def eval_box(self, box: IntervalBox) -> IntervalBox:
        self._check_box(box)
        return box

    def deviation_box(self, box: IntervalBox) -> IntervalBox:
        # g(x) - x is identically zero; exact, no interval subtraction.
        self._check_box(box)
        zero = Interval.point(0.0)
        return IntervalBox(zero for _ in range(self.n_params))


class TrilaterationModel(ObservationModel):
    """Distances from a 2-D position to fixed landmarks."""

    def __init__(self, landmarks: Sequence[Sequence[float]]) -> None:
        pts = tuple((float(a), float(b)) for a, b in landmarks)
        if len(pts) < 3:
            raise ValueError(
                f"need at least 3 landmarks for a well-posed estimate, got {len(pts)}"
            )
        if len(set(pts)) != len(pts):
            raise ValueError("landmarks must be pairwise distinct")
        for p in pts:
            if not all(math.isfinite(v) for v in p):
                raise ValueError(f"landmark is not finite: {p!r}")
        self.landmarks = pts
        self.n_params = 2
        self.n_obs = len(pts)
        self._landmark_ivs = tuple(
            (Interval.point(ax), Interval.point(ay)) for ax, ay in pts
        )

    def eval_point(self, x: Sequence[float]) -> Vector:
        self._check_point(x)
        x0, x1 = float(x[0]), float(x[1])
        out = []
        for ax, ay in self.landmarks:
            dx = ax - x0
            dy = ay - x1
            out.append(math.sqrt(dx * dx + dy * dy))
        return tuple(out)

    def eval_box(self, box: IntervalBox) -> IntervalBox:
        self._check_box(box)
        x0, x1 = box[0], box[1]
        comps = []
        for ax_iv, ay_iv in self._landmark_ivs:
            dx = isub(ax_iv, x0)
            dy = isub(ay_iv, x1)
            comps.append(isqrt(iadd(isqr(dx), isqr(dy))))
        return IntervalBox(comps)


class IdentityEstimator(EstimatorModel):
    """Estimator that returns the observation unchanged."""

    def __init__(self, dim: int) -> None:
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.n_obs = dim
        self.n_params = dim

    def eval_point(self, y: Sequence[float]) -> Vector:
        self._check_point(y)
        return tuple(float(v) for v in y)

    def eval_box(self, box: IntervalBox) -> IntervalBox:
        self._check_box(box)
        return box

    def error_vector_box(
        self,
        observation: ObservationModel,
        param_box: IntervalBox,
        noise_box: IntervalBox,
    ) -> IntervalBox:
        # x - estimate = -((g(x) - x) + e). Composing through the
        # observation's deviation enclosure avoids subtracting the parameter
        # box from itself, which would double-count its width. The point
        # evaluation rounds at the magnitude of x, which this composition
        # never sees, so pad each component by a few ulps of the larger
        # operand scale to keep the floating-point error values inside.
        dev = observation.deviation_box(param_box)
        total = dev + noise_box
        out = []
        for c, x in zip(total, param_box):
            scale = max(abs(x.lb), abs(x.ub), abs(c.lb), abs(c.ub), 1.0)
            pad = 4.0 * math.ulp(scale)
            out.append(ineg(_make(c.lb - pad, c.ub + pad)))
        return IntervalBox(out)


class ConstantEstimator(EstimatorModel):
    """Estimator that ignores the observation and returns a fixed point."""

    def __init__(self, value: Sequence[float], n_obs: int) -> None:
        self.value = tuple(float(v) for v in value)
        if not self.value:
            raise ValueError("constant value must be non-empty")
        if n_obs < 1:
            raise ValueError("n_obs must be >= 1")
        self.n_obs = n_obs
        self.n_params = len(self.value)

    def eval_point(self, y: Sequence[float]) -> Vector:
        self._check_point(y)
        return self.value

    def eval_box(self, box: IntervalBox) -> IntervalBox:
        self._check_box(box)
        return IntervalBox.point(self.value)


# Direction components of (x - a)/||x - a|| lie in [-1, 1]; the clamp below
# leaves a little headroom so the point path's last-ulp rounding stays inside.
_UNIT_BOUND = 1.0 + 1e-9


def _div(a: Interval, b: Interval) -> Interval:
    # Quotient for a strictly positive divisor, outward-rounded.
    q0 = a.lb / b.lb
    q1 = a.lb / b.ub
    q2 = a.ub / b.lb
    q3 = a.ub / b.ub
    lo = math.nextafter(min(q0, q1, q2, q3), -math.inf)
    hi = math.nextafter(max(q0, q1, q2, q3), math.inf)
    return _make(lo, hi)


def _unit_direction(num: Interval, dist: Interval) -> Interval:
    """Enclosure of num/dist for a distance interval, clamped to the unit
    range. A distance lower bound of zero (landmark inside or touching the
    box) falls back to the full unit range, which also covers the point
    evaluator's rule of dropping the term exactly at a landmark."""
    if dist.lb <= 0.0:
        return _make(-_UNIT_BOUND, _UNIT_BOUND)
    q = _div(num, dist)
    lo = q.lb if q.lb > -_UNIT_BOUND else -_UNIT_BOUND
    hi = q.ub if q.ub < _UNIT_BOUND else _UNIT_BOUND
    if lo > hi:
        return _make(-_UNIT_BOUND, _UNIT_BOUND)
    return _make(lo, hi)


class GradientDescentEstimator(EstimatorModel):
    """Fixed-step, fixed-iteration-count descent on the range residual.

    Minimizes c(x) = sum_i (||x - a_i|| - y_i)^2 by running exactly
    `iterations` steps of x <- x - step * grad c(x) from `init`. The fixed
    iteration count makes the estimator a deterministic composition of
    elementary operations, so it extends directly to interval inputs: the
    box evaluator replays the same steps in interval arithmetic. Output
    widths grow with the iteration count; that is inherent to iterating the
    interval map, not a defect.

    At a point exactly on a landmark the gradient direction is undefined;
    that term contributes nothing for that step.
    """

    def __init__(
        self,
        observation: TrilaterationModel,
        iterations: int = 50,
        step: float = 0.01,
        init: Sequence[float] = (15.0, 15.0),
    ) -> None:
        if iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {iterations}")
        if not step > 0.0:
            raise ValueError(f"step must be positive, got {step!r}")
        self.observation = observation
        self.iterations = iterations
        self.step = float(step)
        self.init = (float(init[0]), float(init[1]))
        if not all(math.isfinite(v) for v in self.init):
            raise ValueError(f"init must be finite, got {self.init!r}")
        self.n_obs = observation.n_obs
        self.n_params = 2

    def residual(self, x: Sequence[float], y: Sequence[float]) -> float:
        """The cost c(x) = sum_i (||x - a_i|| - y_i)^2."""
        acc = 0.0
        for (ax, ay), yi in zip(self.observation.landmarks, y):
            dx = x[0] - ax
            dy = x[1] - ay
            r = math.sqrt(dx * dx + dy * dy) - yi
            acc += r * r
        return acc

    def eval_point(self, y: Sequence[float]) -> Vector:
        self._check_point(y)
        x0, x1 = self.init
        step = self.step
        landmarks = self.observation.landmarks
        for _ in range(self.iterations):
            gx = 0.0
            gy = 0.0
            for (ax, ay), yi in zip(landmarks, y):
                dx = x0 - ax
                dy = x1 - ay
                d = math.sqrt(dx * dx + dy * dy)
                if d == 0.0:
                    continue
                r = d - yi
                ux = dx / d
                uy = dy / d
                t = 2.0 * r
                gx += t * ux
                gy += t * uy
            x0 = x0 - step * gx
            x1 = x1 - step * gy
        return (x0, x1)

    def eval_box(self, box: IntervalBox) -> IntervalBox:
        self._check_box(box)
        x0 = Interval.point(self.init[0])
        x1 = Interval.point(self.init[1])
        step = self.step
        zero = Interval.point(0.0)
        for _ in range(self.iterations):
            gx = zero
            gy = zero
            for (ax_iv, ay_iv), y_iv in zip(
                self.observation._landmark_ivs, box
            ):
                dx = isub(x0, ax_iv)
                dy = isub(x1, ay_iv)
                d = isqrt(iadd(isqr(dx), isqr(dy)))
                r = isub(d, y_iv)
                ux = _unit_direction(dx, d)
                uy = _unit_direction(dy, d)
                t = _mul_scalar(2.0, r)
                gx = iadd(gx, imul(t, ux))
                gy = iadd(gy, imul(t, uy))
            x0 = isub(x0, _mul_scalar(step, gx))
            x1 = isub(x1, _mul_scalar(step, gy))
        return IntervalBox([x0, x1])


class UnsoundStubEstimator(EstimatorModel):
    """Test-only estimator whose box evaluator lies.

    The point evaluator shifts every component by a fixed offset while the
    box evaluator claims to be the identity, so its interval results do not
    contain its point results. Exists solely to exercise certification
    failure paths; never use it for real validation.
    """

    def __init__(self, dim: int, offset: float = 10.0) -> None:
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.n_obs = dim
        self.n_params = dim
        self.offset = float(offset)

    def eval_point(self, y: Sequence[float]) -> Vector:
        self._check_point(y)
        return tuple(float(v) + self.offset for v in y)

    def eval_box(self, box: IntervalBox) -> IntervalBox:
        self._check_box(box)
        return box
