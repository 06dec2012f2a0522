"""Deterministic multi-agent simulator for stopping-region collision
avoidance: capsule-swept stopping paths, disjointness-guarded contingency
braking, constraint tightening, and the benchmark scenarios that exercise
them."""

from .control import (Command, ConstraintSet, DanceReport, Strategy,
                      detect_dance, gap_to_region, select_command,
                      tightened_bounds)
from .dynamics import (AgentState, ModelParams, PlantParams, predict_model,
                       step_plant, stopping_distance)
from .geom import (Capsule, CapsuleChain, GeometryError, PolylinePath,
                   capsules_intersect, chains_disjoint, point_at_arclength,
                   sweep)
from .report import (SpeedProfile, TrialSummary, compare, speed_profile,
                     summarize)
from .safety import (DisjointnessReport, SafetyParams, StoppingPath,
                     StoppingRegion, disjointness, reachable_region,
                     stopping_path, stopping_region)
from .scenario import (AgentSpec, GuidanceSpec, ScenarioConfig, ScenarioError,
                       load_config, save_config, validate, with_strategy)
from .sim import (CollisionEvent, TickRecord, TrialLog, collision_check,
                  corridor_scenario, cyclist_scenario, random_lane_scenario,
                  run_trial)

__version__ = "0.1.0"

__all__ = [
    "AgentSpec", "AgentState", "Capsule", "CapsuleChain", "CollisionEvent",
    "Command", "ConstraintSet", "DanceReport", "DisjointnessReport",
    "GeometryError", "GuidanceSpec", "ModelParams", "PlantParams",
    "PolylinePath", "SafetyParams", "ScenarioConfig", "ScenarioError",
    "SpeedProfile", "StoppingPath", "StoppingRegion", "Strategy",
    "TickRecord", "TrialLog", "TrialSummary", "capsules_intersect",
    "chains_disjoint", "collision_check", "compare", "corridor_scenario",
    "cyclist_scenario", "detect_dance", "disjointness", "gap_to_region",
    "load_config", "point_at_arclength", "predict_model",
    "random_lane_scenario", "reachable_region", "run_trial", "save_config",
    "select_command", "speed_profile", "step_plant", "stopping_distance",
    "stopping_path", "stopping_region", "summarize", "sweep",
    "tightened_bounds", "validate", "with_strategy",
]
