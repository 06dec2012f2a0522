"""Stopping paths, stopping regions and the disjointness check.

A stopping path is the minimum space an agent sweeps while braking to rest
along one of its followable paths, computed from the constant-acceleration
model. A stopping region is the tagged union of stopping paths over all of
the agent's followable paths. The safety property evaluated here is that an
agent keeps at least one stopping path disjoint from every other agent's
stopping region.

Footprints are inflated by a margin so the computed region conservatively
bounds true occupancy; collisions elsewhere are judged on physical radii.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dynamics import AgentState, ModelParams, predict_model, stopping_distance
from .geom import CapsuleChain, PolylinePath, chains_disjoint, sweep

PATH_END_BLOCKER = "path-end"


@dataclass(frozen=True)
class SafetyParams:
    """Conservatism knobs for region construction.

    contingency_decel_mag must equal brake_fraction * a_brake_peak of the
    owning agent's model. closed_path_ends marks overrunning the declared
    path end as blocking (a virtual wall); ends are open by default.
    """

    inflation_margin: float  # m, added to footprint radius
    contingency_decel_mag: float  # m/s^2
    closed_path_ends: bool = False

    def __post_init__(self):
        if self.inflation_margin < 0.0:
            raise ValueError("inflation_margin must be >= 0")
        if self.contingency_decel_mag <= 0.0:
            raise ValueError("contingency_decel_mag must be positive")

    @classmethod
    def for_model(cls, model: ModelParams, inflation_margin: float,
                  closed_path_ends: bool = False) -> "SafetyParams":
        return cls(inflation_margin, model.decel_mag, closed_path_ends)


@dataclass(frozen=True)
class StoppingPath:
    """Swept braking footprint of one agent along one followable path."""

    agent_id: str
    path_index: int
    span: tuple[float, float]  # [s, s + d_stop] arclengths, m
    footprint: CapsuleChain
    d_stop: float  # m
    overrun: float = 0.0  # m past the declared path end
    end_blocked: bool = False


@dataclass(frozen=True)
class StoppingRegion:
    """One stopping path per followable path, keyed by path index."""

    agent_id: str
    members: tuple[StoppingPath, ...]


@dataclass(frozen=True)
class DisjointnessReport:
    holds: bool
    safe_path_indices: tuple[int, ...]
    blocking_pairs: tuple[tuple[str, int], ...] = field(default_factory=tuple)


def stopping_path(state: AgentState, path: PolylinePath, params: SafetyParams,
                  radius: float, agent_id: str = "",
                  path_index: int = 0) -> StoppingPath:
    """Stopping path from the agent's current state along one path.

    The span runs from the current position to the model stopping point;
    open path ends extrapolate the final segment, closed ends mark the
    overrun as blocked.
    """
    d_stop = stopping_distance(state.v, params.contingency_decel_mag)
    s_end = state.s + d_stop
    footprint = sweep(path, state.s, s_end, radius + params.inflation_margin,
                      extend=True)
    overrun = max(0.0, s_end - path.total_length)
    return StoppingPath(
        agent_id=agent_id,
        path_index=path_index,
        span=(state.s, s_end),
        footprint=footprint,
        d_stop=d_stop,
        overrun=overrun,
        end_blocked=params.closed_path_ends and overrun > 0.0,
    )


def stopping_region(state: AgentState, paths, params: SafetyParams,
                    radius: float, agent_id: str = "") -> StoppingRegion:
    """One stopping path per followable path, all from the same state."""
    paths = tuple(paths)
    if not paths:
        raise ValueError("agent needs at least one followable path")
    members = tuple(
        stopping_path(state, p, params, radius, agent_id, i)
        for i, p in enumerate(paths)
    )
    return StoppingRegion(agent_id=agent_id, members=members)


def reachable_region(state: AgentState, paths, params: SafetyParams,
                     radius: float, model: ModelParams, dt: float,
                     agent_id: str = "") -> StoppingRegion:
    """Worst-case stopping region one control tick ahead.

    Covers every command the agent may choose during the next tick: the
    span start stays at the current position (positions only advance) and
    the span end grows to the stopping point of the max-acceleration
    predicted state. Used as the other-agent envelope in one-step lookahead
    so that simultaneous decisions cannot invalidate each other.
    """
    paths = tuple(paths)
    if not paths:
        raise ValueError("agent needs at least one followable path")
    pred = predict_model(state, model.a_max, dt)
    end = pred.s + stopping_distance(pred.v, params.contingency_decel_mag)
    members = []
    for i, p in enumerate(paths):
        s_end = max(end, state.s)
        footprint = sweep(p, state.s, s_end,
                          radius + params.inflation_margin, extend=True)
        overrun = max(0.0, s_end - p.total_length)
        members.append(StoppingPath(
            agent_id=agent_id, path_index=i, span=(state.s, s_end),
            footprint=footprint, d_stop=s_end - state.s, overrun=overrun,
            end_blocked=params.closed_path_ends and overrun > 0.0,
        ))
    return StoppingRegion(agent_id=agent_id, members=tuple(members))


def disjointness(ego: StoppingRegion, others) -> DisjointnessReport:
    """Evaluate which of ego's stopping paths are clear of all other regions.

    Holds iff at least one member is disjoint from every member of every
    other agent's region (and not blocked by a closed path end).
    """
    safe = []
    blocking: list[tuple[str, int]] = []
    for member in ego.members:
        clear = True
        if member.end_blocked:
            clear = False
            blocking.append((PATH_END_BLOCKER, member.path_index))
        for other in others:
            for theirs in other.members:
                if not chains_disjoint(member.footprint, theirs.footprint):
                    clear = False
                    blocking.append((other.agent_id, member.path_index))
        if clear:
            safe.append(member.path_index)
    return DisjointnessReport(
        holds=bool(safe),
        safe_path_indices=tuple(safe),
        blocking_pairs=tuple(blocking),
    )
