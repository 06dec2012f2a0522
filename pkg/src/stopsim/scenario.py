"""Scenario configuration: declarative trial setup plus strict JSON I/O.

A scenario file is a single JSON document mirroring ScenarioConfig field
for field. Parsing is strict: unknown keys, missing keys and out-of-domain
values are rejected with an error naming the offending field.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

from .control import STRATEGY_KINDS, Strategy
from .dynamics import ModelParams, PlantParams
from .geom import PolylinePath
from .safety import SafetyParams

GUIDANCE_KINDS = ("full_throttle", "cruise_to", "stationary")


class ScenarioError(ValueError):
    """Raised when a scenario document fails validation."""


@dataclass(frozen=True)
class GuidanceSpec:
    """Scripted guidance: full throttle, cruise toward a speed, or hold."""

    kind: str
    target_speed: float | None = None  # m/s, cruise_to only

    def __post_init__(self):
        if self.kind not in GUIDANCE_KINDS:
            raise ScenarioError(f"guidance.kind: unknown kind {self.kind!r}")
        if self.kind == "cruise_to" and (self.target_speed is None
                                         or self.target_speed < 0.0):
            raise ScenarioError("guidance.target_speed: required and >= 0")


@dataclass(frozen=True)
class AgentSpec:
    agent_id: str
    paths: tuple[PolylinePath, ...]
    s0: float
    v0: float
    radius: float
    model: ModelParams
    plant: PlantParams
    safety: SafetyParams
    strategy: Strategy
    guidance: GuidanceSpec
    chosen_path: int = 0


@dataclass(frozen=True)
class ScenarioConfig:
    dt: float  # s
    duration: float  # s
    agents: tuple[AgentSpec, ...]
    metadata: dict = field(default_factory=dict)


def validate(config: ScenarioConfig) -> None:
    """Check cross-field invariants; raises ScenarioError naming the field."""
    if config.dt <= 0.0:
        raise ScenarioError("dt: must be positive")
    if config.duration < config.dt:
        raise ScenarioError("duration: must be at least dt")
    seen = set()
    for agent in config.agents:
        aid = agent.agent_id
        if not aid:
            raise ScenarioError("agents[].id: must be non-empty")
        if aid in seen:
            raise ScenarioError(f"agents[].id: duplicate id {aid!r}")
        seen.add(aid)
        if not agent.paths:
            raise ScenarioError(f"agents[{aid}].paths: must be non-empty")
        if not 0 <= agent.chosen_path < len(agent.paths):
            raise ScenarioError(f"agents[{aid}].chosen_path: out of range")
        if agent.radius <= 0.0:
            raise ScenarioError(f"agents[{aid}].radius: must be positive")
        if agent.v0 < 0.0:
            raise ScenarioError(f"agents[{aid}].v0: must be >= 0")
        for path in agent.paths:
            if not 0.0 <= agent.s0 <= max(path.total_length, 0.0):
                raise ScenarioError(f"agents[{aid}].s0: outside path")
        expected = agent.strategy.brake_fraction
        if agent.model.brake_fraction != expected:
            raise ScenarioError(
                f"agents[{aid}].model.brake_fraction: strategy "
                f"{agent.strategy.kind!r} requires {expected}")
        if agent.safety.contingency_decel_mag != agent.model.decel_mag:
            raise ScenarioError(
                f"agents[{aid}].safety.contingency_decel_mag: must equal "
                f"brake_fraction * a_brake_peak")


# --- JSON (de)serialization -------------------------------------------------

def _require(obj: dict, keys: set[str], where: str) -> None:
    extra = set(obj) - keys
    if extra:
        raise ScenarioError(f"{where}: unknown key {sorted(extra)[0]!r}")
    missing = keys - set(obj)
    if missing:
        raise ScenarioError(f"{where}: missing key {sorted(missing)[0]!r}")


def _number(obj, key: str, where: str, allow_inf: bool = False) -> float:
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        if allow_inf and val == "inf":
            return math.inf
        raise ScenarioError(f"{where}.{key}: expected a number")
    return float(val)


def agent_to_dict(agent: AgentSpec) -> dict:
    return {
        "id": agent.agent_id,
        "paths": [[list(v) for v in p.vertices] for p in agent.paths],
        "s0": agent.s0,
        "v0": agent.v0,
        "radius": agent.radius,
        "chosen_path": agent.chosen_path,
        "model": {
            "a_max": agent.model.a_max,
            "a_brake_peak": agent.model.a_brake_peak,
            "brake_fraction": agent.model.brake_fraction,
        },
        "plant": {
            "actuation_lag_tau": agent.plant.actuation_lag_tau,
            "a_brake_peak": agent.plant.a_brake_peak,
            "v_top": "inf" if math.isinf(agent.plant.v_top) else agent.plant.v_top,
        },
        "safety": {
            "inflation_margin": agent.safety.inflation_margin,
            "closed_path_ends": agent.safety.closed_path_ends,
        },
        "strategy": {
            "kind": agent.strategy.kind,
            "beta": agent.strategy.beta,
            "epsilon": agent.strategy.epsilon,
        },
        "guidance": {
            "kind": agent.guidance.kind,
            "target_speed": agent.guidance.target_speed,
        },
    }


def config_to_dict(config: ScenarioConfig) -> dict:
    return {
        "dt": config.dt,
        "duration": config.duration,
        "agents": [agent_to_dict(a) for a in config.agents],
        "metadata": config.metadata,
    }


def agent_from_dict(obj: dict, where: str) -> AgentSpec:
    _require(obj, {"id", "paths", "s0", "v0", "radius", "chosen_path",
                   "model", "plant", "safety", "strategy", "guidance"}, where)
    if not isinstance(obj["id"], str):
        raise ScenarioError(f"{where}.id: expected a string")
    paths = []
    if not isinstance(obj["paths"], list) or not obj["paths"]:
        raise ScenarioError(f"{where}.paths: expected a non-empty list")
    for i, raw in enumerate(obj["paths"]):
        try:
            paths.append(PolylinePath.from_points(raw))
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"{where}.paths[{i}]: {exc}") from exc

    model_obj = obj["model"]
    _require(model_obj, {"a_max", "a_brake_peak", "brake_fraction"},
             f"{where}.model")
    model = ModelParams(
        a_max=_number(model_obj, "a_max", f"{where}.model"),
        a_brake_peak=_number(model_obj, "a_brake_peak", f"{where}.model"),
        brake_fraction=_number(model_obj, "brake_fraction", f"{where}.model"),
    )
    plant_obj = obj["plant"]
    _require(plant_obj, {"actuation_lag_tau", "a_brake_peak", "v_top"},
             f"{where}.plant")
    plant = PlantParams(
        actuation_lag_tau=_number(plant_obj, "actuation_lag_tau", f"{where}.plant"),
        a_brake_peak=_number(plant_obj, "a_brake_peak", f"{where}.plant"),
        v_top=_number(plant_obj, "v_top", f"{where}.plant", allow_inf=True),
    )
    safety_obj = obj["safety"]
    _require(safety_obj, {"inflation_margin", "closed_path_ends"},
             f"{where}.safety")
    strategy_obj = obj["strategy"]
    _require(strategy_obj, {"kind", "beta", "epsilon"}, f"{where}.strategy")
    if strategy_obj["kind"] not in STRATEGY_KINDS:
        raise ScenarioError(f"{where}.strategy.kind: unknown kind "
                            f"{strategy_obj['kind']!r}")
    strategy = Strategy(
        kind=strategy_obj["kind"],
        beta=_number(strategy_obj, "beta", f"{where}.strategy"),
        epsilon=_number(strategy_obj, "epsilon", f"{where}.strategy"),
    )
    safety = SafetyParams(
        inflation_margin=_number(safety_obj, "inflation_margin", f"{where}.safety"),
        contingency_decel_mag=model.decel_mag,
        closed_path_ends=bool(safety_obj["closed_path_ends"]),
    )
    guidance_obj = obj["guidance"]
    _require(guidance_obj, {"kind", "target_speed"}, f"{where}.guidance")
    target = guidance_obj["target_speed"]
    guidance = GuidanceSpec(
        kind=guidance_obj["kind"],
        target_speed=None if target is None else float(target),
    )
    return AgentSpec(
        agent_id=obj["id"],
        paths=tuple(paths),
        s0=_number(obj, "s0", where),
        v0=_number(obj, "v0", where),
        radius=_number(obj, "radius", where),
        model=model,
        plant=plant,
        safety=safety,
        strategy=strategy,
        guidance=guidance,
        chosen_path=int(obj["chosen_path"]),
    )


def config_from_dict(obj: dict) -> ScenarioConfig:
    if not isinstance(obj, dict):
        raise ScenarioError("document: expected an object")
    _require(obj, {"dt", "duration", "agents", "metadata"}, "document")
    if not isinstance(obj["agents"], list):
        raise ScenarioError("agents: expected a list")
    agents = tuple(
        agent_from_dict(a, f"agents[{i}]") for i, a in enumerate(obj["agents"])
    )
    if not isinstance(obj["metadata"], dict):
        raise ScenarioError("metadata: expected an object")
    config = ScenarioConfig(
        dt=_number(obj, "dt", "document"),
        duration=_number(obj, "duration", "document"),
        agents=agents,
        metadata=dict(obj["metadata"]),
    )
    validate(config)
    return config


def save_config(config: ScenarioConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config_to_dict(config), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_config(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"document: invalid JSON ({exc})") from exc
    return config_from_dict(obj)


def with_strategy(config: ScenarioConfig, strategy: Strategy) -> ScenarioConfig:
    """Copy of config with every agent's strategy (and model fraction) replaced."""
    agents = []
    for agent in config.agents:
        model = replace(agent.model, brake_fraction=strategy.brake_fraction)
        safety = replace(agent.safety, contingency_decel_mag=model.decel_mag)
        agents.append(replace(agent, strategy=strategy, model=model,
                              safety=safety))
    return replace(config, agents=tuple(agents))
