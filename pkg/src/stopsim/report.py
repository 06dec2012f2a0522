"""Trial post-processing: speed profiles, summaries, comparisons, CSV I/O.

The per-tick CSV is the canonical telemetry export (one row per agent per
tick, columns fixed); summaries and comparisons are JSON plus an aligned
plain-text table. Profiles and summaries recomputed from an exported and
reimported log match the originals exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .control import detect_dance
from .scenario import ScenarioConfig
from .sim import TickRecord

CSV_COLUMNS = ("t", "agent_id", "s", "v", "a_cmd", "a_applied",
               "contingency", "a_hi_eff", "gap", "disjoint")

STRATEGY_ORDER = ("tightening", "conservative", "none")

ABSENT = None  # sentinel for "never happened" positions


@dataclass(frozen=True)
class SpeedProfile:
    """Ordered (position, speed) samples for one agent in one trial."""

    agent_id: str
    strategy: str
    samples: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class TrialSummary:
    strategy: str
    collided: bool
    min_gap: float  # m, over physical radii
    final_position: float  # m
    toggle_count: int
    mean_speed_to_200m: float  # m/s
    first_contingency_position: float | None  # m, ABSENT if never

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "collided": self.collided,
            "min_gap": self.min_gap,
            "final_position": self.final_position,
            "toggle_count": self.toggle_count,
            "mean_speed_to_200m": self.mean_speed_to_200m,
            "first_contingency_position": self.first_contingency_position,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TrialSummary":
        return cls(
            strategy=obj["strategy"],
            collided=bool(obj["collided"]),
            min_gap=float(obj["min_gap"]),
            final_position=float(obj["final_position"]),
            toggle_count=int(obj["toggle_count"]),
            mean_speed_to_200m=float(obj["mean_speed_to_200m"]),
            first_contingency_position=(
                None if obj["first_contingency_position"] is None
                else float(obj["first_contingency_position"])),
        )


@dataclass
class LogView:
    """A log reimported from CSV: records plus the config that produced them."""

    config: ScenarioConfig
    records: list[TickRecord] = field(default_factory=list)

    def agent_records(self, agent_id: str) -> list[TickRecord]:
        return [r for r in self.records if r.agent_id == agent_id]


def speed_profile(log, agent_id: str) -> SpeedProfile:
    """One (s, v) sample per tick for the given agent, in tick order."""
    spec = next((a for a in log.config.agents if a.agent_id == agent_id), None)
    if spec is None:
        raise KeyError(f"unknown agent {agent_id!r}")
    samples = tuple((r.s, r.v) for r in log.agent_records(agent_id))
    return SpeedProfile(agent_id=agent_id, strategy=spec.strategy.kind,
                        samples=samples)


def _pairwise_min_gap(log) -> float:
    """Smallest physical clearance between any agent pair over the log."""
    specs = {a.agent_id: a for a in log.config.agents}
    by_tick: dict[float, list[TickRecord]] = {}
    for rec in log.records:
        by_tick.setdefault(rec.t, []).append(rec)
    min_gap = math.inf
    for recs in by_tick.values():
        pts = []
        for rec in recs:
            spec = specs[rec.agent_id]
            pts.append((spec.paths[spec.chosen_path].point_at_extended(rec.s),
                        spec.radius))
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                (ax, ay), ra = pts[i]
                (bx, by), rb = pts[j]
                gap = math.hypot(bx - ax, by - ay) - (ra + rb)
                min_gap = min(min_gap, gap)
    return min_gap


def summarize(log, subject: str | None = None) -> TrialSummary:
    """Summary of one trial, computed entirely from the tick records.

    The subject agent defaults to the first agent declared in the config.
    collided is equivalent to the log carrying a collision event: the
    colliding tick is always logged, so the minimum physical gap dips below
    zero exactly when a collision terminated the trial.
    """
    if subject is None:
        subject = log.config.agents[0].agent_id
    spec = next((a for a in log.config.agents if a.agent_id == subject), None)
    if spec is None:
        raise KeyError(f"unknown agent {subject!r}")
    recs = log.agent_records(subject)
    min_gap = _pairwise_min_gap(log)
    speeds = [r.v for r in recs if r.s <= 200.0]
    first_cont = next((r.s for r in recs if r.contingency), ABSENT)
    report = detect_dance([(r.t, r.contingency) for r in recs],
                          window_s=log.config.duration)
    return TrialSummary(
        strategy=spec.strategy.kind,
        collided=min_gap < 0.0,
        min_gap=min_gap,
        final_position=recs[-1].s if recs else spec.s0,
        toggle_count=report.toggle_count,
        mean_speed_to_200m=sum(speeds) / len(speeds) if speeds else 0.0,
        first_contingency_position=first_cont,
    )


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[TrialSummary, ...]

    def to_dict(self) -> dict:
        return {"rows": [r.to_dict() for r in self.rows]}

    def to_text(self) -> str:
        headers = ("strategy", "collided", "min_gap", "final_position",
                   "toggle_count", "mean_speed_to_200m", "first_contingency")
        body = []
        for r in self.rows:
            first = "-" if r.first_contingency_position is None \
                else f"{r.first_contingency_position:.2f}"
            body.append((r.strategy, "yes" if r.collided else "no",
                         f"{r.min_gap:.3f}", f"{r.final_position:.2f}",
                         str(r.toggle_count), f"{r.mean_speed_to_200m:.3f}",
                         first))
        widths = [max(len(h), *(len(row[i]) for row in body))
                  for i, h in enumerate(headers)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
        lines.append("  ".join("-" * w for w in widths))
        for row in body:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
        return "\n".join(lines)


def compare(summaries) -> ComparisonTable:
    """Align summaries into canonical strategy order for comparison."""
    summaries = list(summaries)
    if len(summaries) < 2:
        raise ValueError("need at least two summaries to compare")

    def key(summary: TrialSummary):
        try:
            return (0, STRATEGY_ORDER.index(summary.strategy))
        except ValueError:
            return (1, 0)

    return ComparisonTable(tuple(sorted(summaries, key=key)))


# --- CSV telemetry -----------------------------------------------------------

def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def csv_text(log) -> str:
    """Render the per-tick telemetry as CSV text (deterministic)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in log.records:
        writer.writerow([
            _fmt(r.t), r.agent_id, _fmt(r.s), _fmt(r.v), _fmt(r.a_cmd),
            _fmt(r.a_applied), int(r.contingency), _fmt(r.a_hi_eff),
            _fmt(r.gap), int(r.disjoint),
        ])
    return buf.getvalue()


def write_csv(log, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text(log))


def read_csv(path) -> list[TickRecord]:
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header: {header}")
        for row in reader:
            records.append(TickRecord(
                t=float(row[0]), agent_id=row[1], s=float(row[2]),
                v=float(row[3]), a_cmd=float(row[4]), a_applied=float(row[5]),
                contingency=bool(int(row[6])), a_hi_eff=float(row[7]),
                gap=float(row[8]), disjoint=bool(int(row[9])),
            ))
    return records


def reimport(csv_path, config: ScenarioConfig) -> LogView:
    return LogView(config=config, records=read_csv(csv_path))


def write_summary(summary: TrialSummary, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_summary(path) -> TrialSummary:
    with open(path, encoding="utf-8") as fh:
        return TrialSummary.from_dict(json.load(fh))
