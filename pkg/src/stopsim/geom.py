"""Polyline paths and capsule geometry.

Agent motion is parameterized by arclength along a polyline; the space an
agent occupies while moving is represented as a chain of capsules (segments
with radius). Everything here is exact scalar geometry: intersection is a
strict test on segment-segment distance, so tangency counts as disjoint.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

Point = tuple[float, float]

_EPS = 1e-9


class GeometryError(ValueError):
    """Domain error for out-of-range arclengths or malformed shapes."""


@dataclass(frozen=True)
class PolylinePath:
    """Piecewise-linear path with precomputed cumulative arclength.

    A single-vertex path is the degenerate representation of a stationary
    obstacle; its total length is zero and every sweep over it is a disc.
    """

    vertices: tuple[Point, ...]
    cumulative_arclength: tuple[float, ...]

    @classmethod
    def from_points(cls, points) -> "PolylinePath":
        pts = tuple((float(x), float(y)) for x, y in points)
        if not pts:
            raise GeometryError("path needs at least one vertex")
        cum = [0.0]
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            seg = math.hypot(x1 - x0, y1 - y0)
            if seg <= 0.0:
                raise GeometryError("duplicate consecutive vertices")
            cum.append(cum[-1] + seg)
        return cls(pts, tuple(cum))

    @property
    def total_length(self) -> float:
        return self.cumulative_arclength[-1]

    def point_at(self, s: float) -> Point:
        return point_at_arclength(self, s)

    def point_at_extended(self, s: float) -> Point:
        """Like point_at but extrapolates the final segment beyond the end.

        Open path ends let an agent stop past the declared polyline; the
        degenerate single-vertex path has nowhere to extrapolate and pins
        every arclength to its one vertex.
        """
        if len(self.vertices) == 1:
            return self.vertices[0]
        if s <= self.total_length:
            return point_at_arclength(self, s)
        x0, y0 = self.vertices[-2]
        x1, y1 = self.vertices[-1]
        seg = math.hypot(x1 - x0, y1 - y0)
        over = s - self.total_length
        return (x1 + (x1 - x0) / seg * over, y1 + (y1 - y0) / seg * over)


@dataclass(frozen=True)
class Capsule:
    """Segment with radius; start == end degenerates to a disc."""

    a: Point
    b: Point
    radius: float

    def __post_init__(self):
        if self.radius <= 0.0:
            raise GeometryError("capsule radius must be positive")


@dataclass(frozen=True)
class CapsuleChain:
    capsules: tuple[Capsule, ...]
    total_arclength: float


def point_at_arclength(path: PolylinePath, s: float) -> Point:
    """Point at arclength s by linear interpolation along the segments."""
    total = path.total_length
    if s < -_EPS or s > total + _EPS:
        raise GeometryError(f"arclength {s} outside [0, {total}]")
    s = min(max(s, 0.0), total)
    if len(path.vertices) == 1:
        return path.vertices[0]
    cum = path.cumulative_arclength
    i = bisect_right(cum, s) - 1
    if i >= len(path.vertices) - 1:
        return path.vertices[-1]
    x0, y0 = path.vertices[i]
    x1, y1 = path.vertices[i + 1]
    seg = cum[i + 1] - cum[i]
    w = (s - cum[i]) / seg
    return (x0 + (x1 - x0) * w, y0 + (y1 - y0) * w)


def sweep(path: PolylinePath, s0: float, s1: float, radius: float,
          extend: bool = False) -> CapsuleChain:
    """Swept footprint of a disc of the given radius from s0 to s1.

    Produces one capsule per (partial) traversed segment; s0 == s1 yields a
    single disc. With extend=True, s1 may run past the path end and the
    final segment direction is extrapolated.
    """
    if radius <= 0.0:
        raise GeometryError("sweep radius must be positive")
    if s0 < -_EPS or s1 < s0 - _EPS:
        raise GeometryError(f"bad sweep span [{s0}, {s1}]")
    total = path.total_length
    if not extend and s1 > total + _EPS:
        raise GeometryError(f"arclength {s1} outside [0, {total}]")
    s0 = max(s0, 0.0)
    s1 = max(s1, s0)

    locate = path.point_at_extended if extend else path.point_at
    if s1 - s0 <= _EPS or len(path.vertices) == 1:
        p = locate(s0)
        return CapsuleChain((Capsule(p, p, radius),), 0.0)

    cum = path.cumulative_arclength
    breaks = [s0]
    for c in cum:
        if s0 + _EPS < c < s1 - _EPS:
            breaks.append(c)
    breaks.append(s1)
    capsules = []
    for a, b in zip(breaks, breaks[1:]):
        capsules.append(Capsule(locate(a), locate(b), radius))
    return CapsuleChain(tuple(capsules), s1 - s0)


def _segment_segment_distance(p1: Point, q1: Point, p2: Point, q2: Point) -> float:
    """Minimum distance between segments p1-q1 and p2-q2.

    Standard clamped-projection method; degenerate (zero-length) segments
    fall out naturally as point cases.
    """
    d1x, d1y = q1[0] - p1[0], q1[1] - p1[1]
    d2x, d2y = q2[0] - p2[0], q2[1] - p2[1]
    rx, ry = p1[0] - p2[0], p1[1] - p2[1]
    a = d1x * d1x + d1y * d1y
    e = d2x * d2x + d2y * d2y
    f = d2x * rx + d2y * ry

    if a <= _EPS * _EPS and e <= _EPS * _EPS:
        return math.hypot(rx, ry)
    if a <= _EPS * _EPS:
        s = 0.0
        t = min(max(f / e, 0.0), 1.0)
    else:
        c = d1x * rx + d1y * ry
        if e <= _EPS * _EPS:
            t = 0.0
            s = min(max(-c / a, 0.0), 1.0)
        else:
            b = d1x * d2x + d1y * d2y
            denom = a * e - b * b
            s = min(max((b * f - c * e) / denom, 0.0), 1.0) if denom > 0.0 else 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t = 0.0
                s = min(max(-c / a, 0.0), 1.0)
            elif t > 1.0:
                t = 1.0
                s = min(max((b - c) / a, 0.0), 1.0)
    cx = p1[0] + d1x * s - (p2[0] + d2x * t)
    cy = p1[1] + d1y * s - (p2[1] + d2y * t)
    return math.hypot(cx, cy)


def capsules_intersect(a: Capsule, b: Capsule) -> bool:
    """True iff the core segments come strictly closer than the radius sum."""
    return _segment_segment_distance(a.a, a.b, b.a, b.b) < a.radius + b.radius


def chains_disjoint(a: CapsuleChain, b: CapsuleChain) -> bool:
    """True iff no capsule of one chain intersects any capsule of the other."""
    for ca in a.capsules:
        for cb in b.capsules:
            if capsules_intersect(ca, cb):
                return False
    return True
