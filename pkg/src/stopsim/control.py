"""Per-agent control layer: constraint tightening and contingency invocation.

Each tick the controller clamps the guidance command into strategy-dependent
acceleration bounds, simulates one ideal-model tick under the clamped
command, and rebuilds its stopping region at the predicted state. If that
region would leave no stopping path clear of the other agents' regions, the
nominal command is overridden by the contingency: full peak braking.

The tightening strategy additionally shrinks the upper (throttle) bound as
the free gap toward the nearest foreign stopping region closes, scaled by
the agent's own current stopping distance. Only the upper bound tightens;
braking authority is never reduced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import AgentState, ModelParams, predict_model, stopping_distance
from .geom import PolylinePath, chains_disjoint, sweep
from .safety import SafetyParams, disjointness, stopping_region

GAP_BISECT_ITERS = 52

KIND_TIGHTENING = "tightening"
KIND_CONSERVATIVE = "conservative"
KIND_NONE = "none"
STRATEGY_KINDS = (KIND_TIGHTENING, KIND_CONSERVATIVE, KIND_NONE)


@dataclass(frozen=True)
class ConstraintSet:
    a_lo: float  # m/s^2, most negative allowed
    a_hi: float  # m/s^2, most positive allowed

    def __post_init__(self):
        if self.a_lo > self.a_hi:
            raise ValueError("a_lo must not exceed a_hi")

    def clamp(self, a: float) -> float:
        return min(max(a, self.a_lo), self.a_hi)


@dataclass(frozen=True)
class Strategy:
    """Mitigation strategy selector.

    The conservative strategy plans with 80% of peak deceleration, the
    others with 90%. beta and epsilon shape the tightening ramp and are
    ignored by the other kinds.
    """

    kind: str
    beta: float = 1.0  # dimensionless margin scale
    epsilon: float = 1.0  # m, regularizer

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind: {self.kind!r}")
        if self.beta < 0.0 or self.epsilon <= 0.0:
            raise ValueError("beta must be >= 0 and epsilon > 0")

    @property
    def brake_fraction(self) -> float:
        return 0.8 if self.kind == KIND_CONSERVATIVE else 0.9


@dataclass(frozen=True)
class Command:
    a_cmd: float
    contingency_active: bool
    bounds_used: ConstraintSet
    margin: float  # m, gap minus required stopping distance; may be negative


@dataclass(frozen=True)
class DanceReport:
    toggle_count: int
    dance_detected: bool
    window: tuple[float, float]  # s


@dataclass(frozen=True)
class ControllerContext:
    """Everything a single agent's controller needs besides its state."""

    paths: tuple[PolylinePath, ...]
    chosen_path: int
    radius: float
    model: ModelParams
    safety: SafetyParams
    strategy: Strategy
    dt: float


def gap_to_region(ego: AgentState, chosen_path: PolylinePath, others,
                  params: SafetyParams, radius: float) -> float:
    """Free arclength ego can sweep before touching any foreign region.

    Bisects on the sweep length: the swept-footprint-intersects predicate is
    monotone in the sweep span. Returns math.inf when no foreign region is
    reachable within the path horizon, 0.0 when already touching.
    """
    others = [o for o in others if o.members]
    if not others:
        return math.inf
    r = radius + params.inflation_margin
    horizon = max(0.0, chosen_path.total_length - ego.s)

    def touches(g: float) -> bool:
        chain = sweep(chosen_path, ego.s, ego.s + g, r, extend=True)
        for region in others:
            for member in region.members:
                if not chains_disjoint(chain, member.footprint):
                    return True
        return False

    if touches(0.0):
        return 0.0
    if not touches(horizon):
        return math.inf
    lo, hi = 0.0, horizon
    for _ in range(GAP_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if touches(mid):
            hi = mid
        else:
            lo = mid
    return lo


def tightened_bounds(ego: AgentState, g: float, strategy: Strategy,
                     model: ModelParams) -> ConstraintSet:
    """Strategy-dependent acceleration bounds for the current tick.

    None and conservative keep the nominal box. Tightening interpolates the
    throttle bound from nominal down to the model braking bound as the free
    gap g closes on the current stopping distance d:

        lam = clamp((g - d) / (beta * d + epsilon), 0, 1)
        a_hi = -decel + lam * (a_max + decel)

    lam hits the clamp exactly, so an open road reproduces the nominal
    bound bit-for-bit.
    """
    decel = model.decel_mag
    if strategy.kind != KIND_TIGHTENING:
        return ConstraintSet(-decel, model.a_max)
    if math.isinf(g):
        return ConstraintSet(-decel, model.a_max)
    d = stopping_distance(ego.v, decel)
    lam = (g - d) / (strategy.beta * d + strategy.epsilon)
    lam = min(1.0, max(0.0, lam))
    if lam == 1.0:
        a_hi = model.a_max
    elif lam == 0.0:
        a_hi = -decel
    else:
        a_hi = -decel + lam * (model.a_max + decel)
    return ConstraintSet(-decel, a_hi)


def select_command(ego: AgentState, guidance_accel: float,
                   bounds: ConstraintSet, ctx: ControllerContext,
                   others_next, gap: float = math.inf) -> Command:
    """Clamp guidance, look one tick ahead, invoke the contingency if needed.

    others_next are the other agents' one-tick worst-case region envelopes,
    against which the predicted ego region must keep a clear stopping path.
    On override the command is full peak braking: the model plans with a
    fraction of peak precisely so the plant brakes harder than planned.
    """
    if not math.isfinite(guidance_accel):
        raise ValueError("guidance acceleration must be finite")
    candidate = bounds.clamp(guidance_accel)

    predicted = predict_model(ego, candidate, ctx.dt)
    predicted_region = stopping_region(predicted, ctx.paths, ctx.safety,
                                       ctx.radius, agent_id="ego")
    report = disjointness(predicted_region, others_next)

    required = stopping_distance(ego.v, ctx.safety.contingency_decel_mag)
    margin = math.inf if math.isinf(gap) else gap - required
    if report.holds:
        return Command(candidate, False, bounds, margin)
    brake = ctx.model.a_brake_peak
    return Command(-brake, True, ConstraintSet(-brake, -brake), margin)


def detect_dance(flags, toggle_threshold: int = 6,
                 window_s: float = 10.0) -> DanceReport:
    """Count contingency on/off transitions within the trailing window.

    flags is a sequence of (t, contingency_active) pairs in tick order; the
    window is the final window_s of it. Identical inputs always yield
    identical reports.
    """
    flags = list(flags)
    if not flags:
        return DanceReport(0, False, (0.0, 0.0))
    t1 = flags[-1][0]
    t0 = t1 - window_s
    toggles = 0
    prev = None
    for t, active in flags:
        if t < t0:
            prev = active
            continue
        if prev is not None and active != prev:
            toggles += 1
        prev = active
    return DanceReport(toggles, toggles >= toggle_threshold, (max(t0, flags[0][0]), t1))
