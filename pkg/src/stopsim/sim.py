"""Deterministic discrete-time trial engine and the canned scenarios.

Tick order: snapshot every agent's stopping region (and its one-tick
worst-case envelope), let every controller decide from that same snapshot,
then step all plants simultaneously and run the physical collision check.
Identical configs produce byte-identical logs; agent declaration order does
not matter because decisions only read the snapshot.

The cyclist-approach scenario constants below were frozen by a calibration
sweep against a brute-force single-lane integrator: the lag constant is the
smallest value on the 0.1..0.5 grid at which the unmitigated strategy hits
the cyclist while the conservative strategy stops short.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace

from .control import (Command, ControllerContext, DanceReport, Strategy,
                      detect_dance, gap_to_region, select_command,
                      tightened_bounds)
from .dynamics import AgentState, ModelParams, PlantParams, step_plant
from .geom import PolylinePath
from .safety import (SafetyParams, disjointness, reachable_region,
                     stopping_region)
from .scenario import (AgentSpec, GuidanceSpec, ScenarioConfig, ScenarioError,
                       validate)

# Calibrated cyclist-approach defaults (see module docstring).
CYCLIST_POSITION = 225.0  # m
CYCLIST_RADIUS = 0.5  # m
EGO_RADIUS = 1.0  # m
EGO_A_MAX = 3.5  # m/s^2
BRAKE_PEAK = 8.0  # m/s^2
CALIBRATED_TAU = 0.3  # s
TOP_SPEED = 20.0  # m/s
INFLATION = 0.25  # m
TIGHTENING_BETA = 2.0
TIGHTENING_EPSILON = 1.0  # m
DEFAULT_DT = 0.05  # s
DEFAULT_DURATION = 60.0  # s


@dataclass(frozen=True)
class TickRecord:
    """Post-step state of one agent plus the decision that produced it."""

    t: float
    agent_id: str
    s: float
    v: float
    a_cmd: float
    a_applied: float
    contingency: bool
    a_hi_eff: float
    gap: float
    disjoint: bool


@dataclass(frozen=True)
class CollisionEvent:
    t: float
    agent_a: str
    agent_b: str
    penetration: float  # m


@dataclass
class TrialLog:
    config: ScenarioConfig
    records: list[TickRecord] = field(default_factory=list)
    events: list[CollisionEvent] = field(default_factory=list)
    dance_reports: dict[str, DanceReport] = field(default_factory=dict)
    terminated_early: bool = False
    termination: str = "duration"

    @property
    def collided(self) -> bool:
        return bool(self.events)

    def agent_records(self, agent_id: str) -> list[TickRecord]:
        return [r for r in self.records if r.agent_id == agent_id]


def guidance_accel(spec: GuidanceSpec, state: AgentState, model: ModelParams,
                   dt: float) -> float:
    """Scripted guidance command for one tick."""
    if spec.kind == "full_throttle":
        return model.a_max
    if spec.kind == "stationary":
        return 0.0
    # cruise_to: exact tracking within the nominal box
    want = (spec.target_speed - state.v) / dt
    return min(max(want, -model.decel_mag), model.a_max)


def collision_check(positions: dict[str, tuple[float, float]],
                    radii: dict[str, float], t: float) -> list[CollisionEvent]:
    """Pairwise physical-disc overlap at the agents' current points."""
    events = []
    ids = sorted(positions)
    for i, a in enumerate(ids):
        ax, ay = positions[a]
        for b in ids[i + 1:]:
            bx, by = positions[b]
            dist = math.hypot(bx - ax, by - ay)
            rsum = radii[a] + radii[b]
            if dist < rsum:
                events.append(CollisionEvent(t, a, b, rsum - dist))
    return events


def run_trial(config: ScenarioConfig) -> TrialLog:
    """Run one deterministic trial to completion or first collision."""
    validate(config)
    log = TrialLog(config=config)
    order = sorted(a.agent_id for a in config.agents)
    specs = {a.agent_id: a for a in config.agents}
    contexts = {
        aid: ControllerContext(
            paths=specs[aid].paths,
            chosen_path=specs[aid].chosen_path,
            radius=specs[aid].radius,
            model=specs[aid].model,
            safety=specs[aid].safety,
            strategy=specs[aid].strategy,
            dt=config.dt,
        )
        for aid in order
    }
    states = {
        aid: AgentState(s=specs[aid].s0, v=specs[aid].v0, a_applied=0.0, t=0.0)
        for aid in order
    }
    flags: dict[str, list[tuple[float, bool]]] = {aid: [] for aid in order}

    n_ticks = int(math.floor(config.duration / config.dt))
    for tick in range(1, n_ticks + 1):
        regions_now = {
            aid: stopping_region(states[aid], specs[aid].paths,
                                 specs[aid].safety, specs[aid].radius, aid)
            for aid in order
        }
        regions_next = {
            aid: reachable_region(states[aid], specs[aid].paths,
                                  specs[aid].safety, specs[aid].radius,
                                  specs[aid].model, config.dt, aid)
            for aid in order
        }

        commands: dict[str, Command] = {}
        gaps: dict[str, float] = {}
        holds: dict[str, bool] = {}
        for aid in order:
            ctx = contexts[aid]
            state = states[aid]
            others_now = [regions_now[o] for o in order if o != aid]
            others_next = [regions_next[o] for o in order if o != aid]
            holds[aid] = disjointness(regions_now[aid], others_now).holds
            g = gap_to_region(state, ctx.paths[ctx.chosen_path], others_now,
                              ctx.safety, ctx.radius)
            gaps[aid] = g
            guidance = guidance_accel(specs[aid].guidance, state, ctx.model,
                                      config.dt)
            bounds = tightened_bounds(state, g, ctx.strategy, ctx.model)
            commands[aid] = select_command(state, guidance, bounds, ctx,
                                           others_next, g)

        t = tick * config.dt
        for aid in order:
            stepped = step_plant(states[aid], commands[aid].a_cmd, config.dt,
                                 specs[aid].plant)
            states[aid] = replace(stepped, t=t)

        positions = {
            aid: specs[aid].paths[specs[aid].chosen_path].point_at_extended(
                states[aid].s)
            for aid in order
        }
        radii = {aid: specs[aid].radius for aid in order}
        new_events = collision_check(positions, radii, t)

        for aid in order:
            cmd = commands[aid]
            state = states[aid]
            log.records.append(TickRecord(
                t=t, agent_id=aid, s=state.s, v=state.v, a_cmd=cmd.a_cmd,
                a_applied=state.a_applied,
                contingency=cmd.contingency_active,
                a_hi_eff=cmd.bounds_used.a_hi, gap=gaps[aid],
                disjoint=holds[aid],
            ))
            flags[aid].append((t, cmd.contingency_active))

        if new_events:
            log.events.extend(new_events)
            log.terminated_early = True
            log.termination = "collision"
            break

    for aid in order:
        log.dance_reports[aid] = detect_dance(flags[aid],
                                              window_s=config.duration)
    return log


def _agent(agent_id: str, paths, s0: float, v0: float, radius: float,
           strategy: Strategy, guidance: GuidanceSpec, tau: float,
           v_top: float, inflation: float, a_max: float = EGO_A_MAX,
           brake_peak: float = BRAKE_PEAK) -> AgentSpec:
    model = ModelParams(a_max=a_max, a_brake_peak=brake_peak,
                        brake_fraction=strategy.brake_fraction)
    return AgentSpec(
        agent_id=agent_id,
        paths=tuple(paths),
        s0=s0,
        v0=v0,
        radius=radius,
        model=model,
        plant=PlantParams(actuation_lag_tau=tau, a_brake_peak=brake_peak,
                          v_top=v_top),
        safety=SafetyParams.for_model(model, inflation),
        strategy=strategy,
        guidance=guidance,
    )


def _as_strategy(strategy: Strategy | str) -> Strategy:
    if isinstance(strategy, Strategy):
        return strategy
    kind = strategy.lower()
    if kind == "tightening":
        return Strategy(kind, beta=TIGHTENING_BETA, epsilon=TIGHTENING_EPSILON)
    return Strategy(kind)


def cyclist_scenario(strategy: Strategy | str) -> ScenarioConfig:
    """Full-throttle approach toward a stopped cyclist at 225 m.

    The three mitigation strategies share guidance, plant and geometry; the
    configs differ only in the strategy field (and the model brake fraction
    it dictates).
    """
    strat = _as_strategy(strategy)
    lane = PolylinePath.from_points([(0.0, 0.0), (300.0, 0.0)])
    spot = PolylinePath.from_points([(CYCLIST_POSITION, 0.0)])
    ego = _agent("ego", [lane], 0.0, 0.0, EGO_RADIUS, strat,
                 GuidanceSpec("full_throttle"), CALIBRATED_TAU, TOP_SPEED,
                 INFLATION)
    cyclist = _agent("cyclist", [spot], 0.0, 0.0, CYCLIST_RADIUS,
                     Strategy("none"), GuidanceSpec("stationary"),
                     CALIBRATED_TAU, TOP_SPEED, INFLATION, a_max=0.0)
    return ScenarioConfig(
        dt=DEFAULT_DT,
        duration=DEFAULT_DURATION,
        agents=(ego, cyclist),
        metadata={
            "name": "cyclist-approach",
            "strategy": strat.kind,
            "calibrated_tau": CALIBRATED_TAU,
            "calibration": "smallest tau in {0.1,0.2,0.3,0.4,0.5} where the "
                           "unmitigated strategy collides and the "
                           "conservative one does not",
        },
    )


def corridor_scenario() -> ScenarioConfig:
    """Two identical agents driven head-on at each other in a corridor.

    Lag-free plants and symmetric parameters: both controllers brake and
    release in lockstep, producing the oscillating mutual-contingency
    deadlock without any collision.
    """
    east = PolylinePath.from_points([(0.0, 0.0), (200.0, 0.0)])
    west = PolylinePath.from_points([(200.0, 0.0), (0.0, 0.0)])
    kwargs = dict(s0=0.0, v0=0.0, radius=EGO_RADIUS,
                  strategy=Strategy("none"),
                  guidance=GuidanceSpec("full_throttle"), tau=0.0,
                  v_top=TOP_SPEED, inflation=INFLATION)
    return ScenarioConfig(
        dt=DEFAULT_DT,
        duration=DEFAULT_DURATION,
        agents=(_agent("east", [east], **kwargs),
                _agent("west", [west], **kwargs)),
        metadata={"name": "corridor-head-on"},
    )


def random_lane_scenario(rng: random.Random,
                         duration: float = 12.0) -> ScenarioConfig:
    """Randomized single-lane scenario with lag-free plants.

    Used by the safety property suite: agents get random speeds, strategies
    and obstacle layouts, but plants are exact and inflation is at least
    0.1 m, and configurations are resampled until every agent starts with a
    clear stopping path.
    """
    lane = PolylinePath.from_points([(0.0, 0.0), (400.0, 0.0)])
    back = PolylinePath.from_points([(400.0, 0.0), (0.0, 0.0)])

    def mover(aid, path, s0, v0, guidance):
        strat = _as_strategy(rng.choice(("tightening", "conservative", "none")))
        inflation = rng.uniform(0.1, 0.5)
        return _agent(aid, [path], s0, v0, 1.0, strat, guidance, 0.0,
                      40.0, inflation)

    for _ in range(200):
        pattern = rng.choice(("obstacle", "head_on", "follow"))
        agents: list[AgentSpec] = []
        if pattern == "obstacle":
            agents.append(mover("mover", lane, rng.uniform(0.0, 40.0),
                                rng.uniform(0.0, 30.0),
                                GuidanceSpec("full_throttle")))
            for i in range(rng.randint(1, 2)):
                x = rng.uniform(150.0, 380.0)
                spot = PolylinePath.from_points([(x, 0.0)])
                agents.append(_agent(f"obstacle{i}", [spot], 0.0, 0.0, 0.5,
                                     Strategy("none"),
                                     GuidanceSpec("stationary"), 0.0, 40.0,
                                     rng.uniform(0.1, 0.5), a_max=0.0))
        elif pattern == "head_on":
            agents.append(mover("east", lane, rng.uniform(0.0, 80.0),
                                rng.uniform(0.0, 30.0),
                                GuidanceSpec("full_throttle")))
            agents.append(mover("west", back, rng.uniform(0.0, 80.0),
                                rng.uniform(0.0, 30.0),
                                GuidanceSpec("full_throttle")))
        else:
            lead_v = rng.uniform(0.0, 15.0)
            agents.append(mover("leader", lane, rng.uniform(180.0, 280.0),
                                lead_v, GuidanceSpec("cruise_to", lead_v)))
            agents.append(mover("follower", lane, rng.uniform(0.0, 60.0),
                                rng.uniform(0.0, 30.0),
                                GuidanceSpec("full_throttle")))

        config = ScenarioConfig(dt=0.05, duration=duration,
                                agents=tuple(agents),
                                metadata={"name": f"random-{pattern}"})
        regions = {
            a.agent_id: stopping_region(
                AgentState(a.s0, a.v0), a.paths, a.safety, a.radius,
                a.agent_id)
            for a in agents
        }
        ok = all(
            disjointness(regions[a.agent_id],
                         [regions[o.agent_id] for o in agents
                          if o.agent_id != a.agent_id]).holds
            for a in agents
        )
        if ok:
            return config
    raise ScenarioError("metadata: could not sample an initially "
                        "disjoint scenario")
