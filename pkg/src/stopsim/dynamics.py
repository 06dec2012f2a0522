"""Longitudinal motion along a path, in two regimes.

The safety layer plans with an ideal constant-acceleration model. The
simulated vehicle ("plant") instead realizes commands through a first-order
actuator lag, so braking force builds up over a time constant and the plant
genuinely stops later than the model predicts. That optimistic-model error
is the whole point: it is what lets the benchmark scenarios reproduce a
collision despite a sound-looking safety layer.

Braking saturates exactly at v = 0 (agents never reverse) and acceleration
saturates exactly at the plant's top speed. A tick that ends pinned at
either saturation records zero realized acceleration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class AgentState:
    """Arclength position, speed and realized acceleration at one instant."""

    s: float  # m, arclength on the bound path
    v: float  # m/s, always >= 0
    a_applied: float = 0.0  # m/s^2, acceleration currently realized
    t: float = 0.0  # s


@dataclass(frozen=True)
class ModelParams:
    """Constant-acceleration model the safety layer plans with."""

    a_max: float  # m/s^2, max forward acceleration
    a_brake_peak: float  # m/s^2, peak achievable deceleration magnitude
    brake_fraction: float  # fraction of peak the model assumes when braking

    def __post_init__(self):
        if self.a_brake_peak <= 0.0:
            raise ValueError("a_brake_peak must be positive")
        if not 0.0 < self.brake_fraction <= 1.0:
            raise ValueError("brake_fraction must be in (0, 1]")

    @property
    def decel_mag(self) -> float:
        """Model braking magnitude: brake_fraction * a_brake_peak."""
        return self.brake_fraction * self.a_brake_peak


@dataclass(frozen=True)
class PlantParams:
    """Lagged actuator: realized acceleration chases the command.

    actuation_lag_tau = 0 reduces the plant to the ideal model. v_top is
    the plant's top speed (full throttle cannot push past it); it is a
    scenario parameter, not part of the safety model.
    """

    actuation_lag_tau: float  # s, >= 0
    a_brake_peak: float  # m/s^2, plant can realize up to the full peak
    v_top: float = math.inf  # m/s

    def __post_init__(self):
        if self.actuation_lag_tau < 0.0:
            raise ValueError("actuation_lag_tau must be >= 0")


def stopping_distance(v: float, decel_mag: float) -> float:
    """Distance to brake from speed v to rest at constant deceleration."""
    if decel_mag <= 0.0:
        raise ValueError("decel_mag must be positive")
    if v < 0.0:
        raise ValueError("speed must be >= 0")
    return v * v / (2.0 * decel_mag)


def _advance(s: float, v: float, a: float, dt: float, v_top: float):
    """Exact constant-acceleration update with rest and top-speed saturation.

    Returns (s, v, realized); realized is 0.0 when the tick ends held at
    v = 0 or v = v_top, since no acceleration is physically expressed there.
    """
    if a < 0.0:
        if v <= 0.0:
            return s, 0.0, 0.0
        t_stop = v / -a
        if t_stop < dt:
            return s + 0.5 * v * t_stop, 0.0, 0.0
        return s + v * dt + 0.5 * a * dt * dt, v + a * dt, a
    if a > 0.0:
        if v >= v_top:
            return s + v_top * dt, v_top, 0.0
        t_cap = (v_top - v) / a
        if t_cap < dt:
            s_cap = s + v * t_cap + 0.5 * a * t_cap * t_cap
            return s_cap + v_top * (dt - t_cap), v_top, 0.0
        return s + v * dt + 0.5 * a * dt * dt, v + a * dt, a
    return s + v * dt, v, 0.0


def predict_model(state: AgentState, a: float, dt: float) -> AgentState:
    """One ideal model tick: constant acceleration with braking saturation.

    If braking would cross v = 0 within dt the agent stops exactly at the
    zero crossing (position advances by v^2 / 2|a| from the sub-step start)
    and holds for the rest of the tick.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    s, v, realized = _advance(state.s, state.v, a, dt, math.inf)
    return AgentState(s=s, v=v, a_applied=realized, t=state.t + dt)


def step_plant(state: AgentState, a_cmd: float, dt: float,
               plant: PlantParams) -> AgentState:
    """One plant tick: lag the command, then integrate the realized value.

    The lag ODE is advanced with its exact exponential solution and the
    resulting acceleration is held constant over the tick, so the update is
    deterministic and stiffness-free. tau = 0 makes the realized value equal
    the command and the step identical to predict_model.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    tau = plant.actuation_lag_tau
    if tau == 0.0:
        a_real = a_cmd
    else:
        a_real = a_cmd + (state.a_applied - a_cmd) * math.exp(-dt / tau)
    s, v, realized = _advance(state.s, state.v, a_real, dt, plant.v_top)
    return AgentState(s=s, v=v, a_applied=realized, t=state.t + dt)


def at_rest(state: AgentState) -> bool:
    return state.v == 0.0


def with_time(state: AgentState, t: float) -> AgentState:
    return replace(state, t=t)
