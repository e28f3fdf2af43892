"""Exact geometry of point, curve and disk grains in dimension 1 and 2.

Grains are immutable primitive closed sets with exact Euclidean distance
and Hausdorff-measure queries.  Everything here is deterministic and pure;
random unions of grains are built by :mod:`minkdensity.processes` and
measured by :mod:`minkdensity.estimators`.

Conventions:
  * enlargements are closed (``distance <= r`` is inside),
  * windows are closed axis-aligned boxes with strictly ordered corners,
  * angles live in ``[0, 2*pi)`` and angular intervals are split explicitly
    at the wraparound point,
  * lines use the normal form ``{x : x . (cos a, sin a) = p}`` with
    ``a in (0, pi]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

TWO_PI = 2.0 * math.pi

# Packed-array kind codes shared with the accelerated kernels.
KIND_POINT = 0
KIND_SEGMENT = 1
KIND_LINE = 2
KIND_CIRCLE = 3
KIND_ARC = 4
KIND_DISK = 5


def unit_ball_volume(k: int) -> float:
    """Volume of the unit ball in dimension ``k`` (``k = 0`` gives 1)."""
    if k < 0:
        raise ValueError(f"ball dimension must be >= 0, got {k}")
    if k == 0:
        return 1.0
    if k == 1:
        return 2.0
    if k == 2:
        return math.pi
    return math.pi ** (k / 2.0) / math.gamma(k / 2.0 + 1.0)


def line_direction(angle: float) -> tuple[float, float]:
    """Unit normal (cos, sin) of a line's angle, with values below 1e-15
    snapped to zero so axis-aligned lines clip exactly."""
    c = math.cos(angle)
    s = math.sin(angle)
    if -1e-15 < c < 1e-15:
        c = 0.0
    if -1e-15 < s < 1e-15:
        s = 0.0
    return c, s


@dataclass(frozen=True)
class Point:
    """A point in dimension 1 or 2, stored as a coordinate tuple."""

    coords: tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) not in (1, 2):
            raise ValueError(f"points must have 1 or 2 coordinates, got {len(coords)}")
        if not all(math.isfinite(c) for c in coords):
            raise ValueError(f"point coordinates must be finite, got {coords}")

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def x(self) -> float:
        return self.coords[0]

    @property
    def y(self) -> float:
        # d = 1 points embed on the first axis
        return self.coords[1] if len(self.coords) > 1 else 0.0


def point(*coords: float) -> Point:
    """Shorthand constructor: ``point(1, 2)`` instead of ``Point((1, 2))``."""
    return Point(tuple(coords))


@dataclass(frozen=True)
class Window:
    """Closed axis-aligned box given by its lower and upper corners."""

    lo: Point
    hi: Point

    def __post_init__(self):
        if self.lo.d != self.hi.d:
            raise ValueError("window corners must share a dimension")
        for a, b in zip(self.lo.coords, self.hi.coords):
            if not a < b:
                raise ValueError(f"window needs lo < hi per axis, got {a} >= {b}")

    @property
    def d(self) -> int:
        return self.lo.d

    @property
    def sizes(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in zip(self.lo.coords, self.hi.coords))

    @property
    def volume(self) -> float:
        return math.prod(self.sizes)

    @property
    def center(self) -> Point:
        return Point(tuple((a + b) / 2.0 for a, b in zip(self.lo.coords, self.hi.coords)))

    @property
    def circumradius(self) -> float:
        """Radius of the smallest ball around the center containing the box."""
        return 0.5 * math.sqrt(sum(s * s for s in self.sizes))

    def contains(self, x: Point) -> bool:
        return all(a <= c <= b for a, c, b in zip(self.lo.coords, x.coords, self.hi.coords))

    def strictly_contains_window(self, inner: "Window") -> bool:
        return all(a < c for a, c in zip(self.lo.coords, inner.lo.coords)) and all(
            c < b for c, b in zip(inner.hi.coords, self.hi.coords)
        )


def window(lo: Sequence[float], hi: Sequence[float]) -> Window:
    return Window(Point(tuple(lo)), Point(tuple(hi)))


def dilate_window(w: Window, s: float) -> Window:
    """Grow the box by ``s`` on every side.

    This is a superset of the true ball-dilation of the box, used only as a
    clipping and containment region, never as an exact set.
    """
    if s < 0:
        raise ValueError(f"dilation must be >= 0, got {s}")
    if s == 0:
        return w
    return Window(
        Point(tuple(c - s for c in w.lo.coords)),
        Point(tuple(c + s for c in w.hi.coords)),
    )


# --------------------------------------------------------------------------
# Grains
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PointGrain:
    location: Point

    dim = 0

    @property
    def ambient(self) -> int:
        return self.location.d


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    dim = 1
    ambient = 2

    def __post_init__(self):
        if self.a.d != 2 or self.b.d != 2:
            raise ValueError("segments are planar (d = 2)")
        if self.a.coords == self.b.coords:
            raise ValueError("segment endpoints must differ")

    @property
    def length(self) -> float:
        dx = self.b.x - self.a.x
        dy = self.b.y - self.a.y
        return math.sqrt(dx * dx + dy * dy)

    @property
    def midpoint(self) -> Point:
        return point((self.a.x + self.b.x) / 2.0, (self.a.y + self.b.y) / 2.0)


@dataclass(frozen=True)
class Line:
    """Unbounded planar line ``{x : x . (cos angle, sin angle) = offset}``."""

    offset: float
    angle: float

    dim = 1
    ambient = 2

    def __post_init__(self):
        if not (0.0 < self.angle <= math.pi):
            raise ValueError(f"line angle must lie in (0, pi], got {self.angle}")


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    dim = 1
    ambient = 2

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"circle radius must be > 0, got {self.radius}")


@dataclass(frozen=True)
class Arc:
    """Circular arc from ``theta_lo`` to ``theta_hi`` (radians, counterclockwise)."""

    center: Point
    radius: float
    theta_lo: float
    theta_hi: float

    dim = 1
    ambient = 2

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"arc radius must be > 0, got {self.radius}")
        if not 0.0 < self.theta_hi - self.theta_lo <= TWO_PI + 1e-12:
            raise ValueError("arc needs 0 < theta_hi - theta_lo <= 2*pi")

    @property
    def extent(self) -> float:
        return min(self.theta_hi - self.theta_lo, TWO_PI)

    @property
    def start(self) -> float:
        """Start angle normalized into [0, 2*pi)."""
        return self.theta_lo % TWO_PI

    @property
    def length(self) -> float:
        return self.radius * self.extent


@dataclass(frozen=True)
class Disk:
    center: Point
    radius: float

    dim = 2
    ambient = 2

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"disk radius must be > 0, got {self.radius}")


Grain = Union[PointGrain, Segment, Line, Circle, Arc, Disk]


def hausdorff_dim(g: Grain) -> int:
    return g.dim


@dataclass(frozen=True)
class RealizedSet:
    """One sampled realization: grains of a common dimension plus the window
    inside which the realization is complete."""

    grains: tuple[Grain, ...]
    n: int
    valid_window: Window

    def __post_init__(self):
        object.__setattr__(self, "grains", tuple(self.grains))
        for g in self.grains:
            if g.dim != self.n:
                raise ValueError(
                    f"grain {type(g).__name__} has dimension {g.dim}, set declares {self.n}"
                )

    @property
    def d(self) -> int:
        return self.valid_window.d

    @property
    def is_empty(self) -> bool:
        return not self.grains

    @cached_property
    def packed(self) -> tuple[np.ndarray, np.ndarray]:
        return pack_grains(self.grains)


def pack_grains(grains: Sequence[Grain]) -> tuple[np.ndarray, np.ndarray]:
    """Pack grains into (kinds int64 (G,), params float64 (G, 5)) arrays.

    d = 1 points embed at y = 0; queries must embed the same way.
    """
    g_count = len(grains)
    kinds = np.empty(g_count, dtype=np.int64)
    params = np.zeros((g_count, 5), dtype=np.float64)
    for i, g in enumerate(grains):
        if isinstance(g, PointGrain):
            kinds[i] = KIND_POINT
            params[i, 0] = g.location.x
            params[i, 1] = g.location.y
        elif isinstance(g, Segment):
            kinds[i] = KIND_SEGMENT
            params[i, 0] = g.a.x
            params[i, 1] = g.a.y
            params[i, 2] = g.b.x
            params[i, 3] = g.b.y
        elif isinstance(g, Line):
            kinds[i] = KIND_LINE
            params[i, 0] = g.offset
            params[i, 1] = g.angle
        elif isinstance(g, Circle):
            kinds[i] = KIND_CIRCLE
            params[i, 0] = g.center.x
            params[i, 1] = g.center.y
            params[i, 2] = g.radius
        elif isinstance(g, Arc):
            kinds[i] = KIND_ARC
            params[i, 0] = g.center.x
            params[i, 1] = g.center.y
            params[i, 2] = g.radius
            params[i, 3] = g.start
            params[i, 4] = g.extent
        elif isinstance(g, Disk):
            kinds[i] = KIND_DISK
            params[i, 0] = g.center.x
            params[i, 1] = g.center.y
            params[i, 2] = g.radius
        else:
            raise TypeError(f"not a grain: {g!r}")
    return kinds, params


# --------------------------------------------------------------------------
# Distances
# --------------------------------------------------------------------------


def distance(x: Point, g: Grain) -> float:
    """Exact Euclidean distance from ``x`` to the grain as a point set."""
    if isinstance(g, PointGrain):
        if x.d != g.location.d:
            raise ValueError(f"query dimension {x.d} != grain dimension {g.location.d}")
        dx = x.x - g.location.x
        dy = x.y - g.location.y
        return math.sqrt(dx * dx + dy * dy)
    if x.d != 2:
        raise ValueError(f"query dimension {x.d} != grain dimension 2")
    if isinstance(g, Segment):
        return _segment_distance(g.a.x, g.a.y, g.b.x, g.b.y, x.x, x.y)
    if isinstance(g, Line):
        ux, uy = line_direction(g.angle)
        return abs(x.x * ux + x.y * uy - g.offset)
    if isinstance(g, Circle):
        return abs(math.sqrt((x.x - g.center.x) ** 2 + (x.y - g.center.y) ** 2) - g.radius)
    if isinstance(g, Arc):
        return _arc_distance(
            g.center.x, g.center.y, g.radius, g.start, g.extent, x.x, x.y
        )
    if isinstance(g, Disk):
        rho = math.sqrt((x.x - g.center.x) ** 2 + (x.y - g.center.y) ** 2)
        return max(0.0, rho - g.radius)
    raise TypeError(f"not a grain: {g!r}")


def _segment_distance(ax, ay, bx, by, qx, qy):
    vx = bx - ax
    vy = by - ay
    wx = qx - ax
    wy = qy - ay
    vv = vx * vx + vy * vy
    t = (wx * vx + wy * vy) / vv
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    dx = wx - t * vx
    dy = wy - t * vy
    return math.sqrt(dx * dx + dy * dy)


def _arc_distance(cx, cy, radius, start, extent, qx, qy):
    dx = qx - cx
    dy = qy - cy
    rho = math.sqrt(dx * dx + dy * dy)
    phi = math.atan2(dy, dx) % TWO_PI
    rel = (phi - start) % TWO_PI
    if rel <= extent:
        return abs(rho - radius)
    e0x = cx + radius * math.cos(start)
    e0y = cy + radius * math.sin(start)
    e1x = cx + radius * math.cos(start + extent)
    e1y = cy + radius * math.sin(start + extent)
    d0 = math.sqrt((qx - e0x) ** 2 + (qy - e0y) ** 2)
    d1 = math.sqrt((qx - e1x) ** 2 + (qy - e1y) ** 2)
    return min(d0, d1)


def distance_to_set(x: Point, s: RealizedSet) -> float | None:
    """Minimum distance over the grains; ``None`` marks the empty set."""
    if s.is_empty:
        return None
    return min(distance(x, g) for g in s.grains)


def in_enlargement(x: Point, s: RealizedSet, r: float) -> bool:
    """Closed-enlargement membership: distance to the set at most ``r``."""
    if r <= 0:
        raise ValueError(f"enlargement radius must be > 0, got {r}")
    d = distance_to_set(x, s)
    return d is not None and d <= r


# --------------------------------------------------------------------------
# Hausdorff-measure clipping
# --------------------------------------------------------------------------


def _param_clip(px, py, vx, vy, w: Window, t0, t1):
    """Clip the parametric track p + t v to the box; returns (t0, t1) or None."""
    for c, v, lo, hi in ((px, vx, w.lo.coords[0], w.hi.coords[0]),
                         (py, vy, w.lo.coords[1], w.hi.coords[1])):
        if v == 0.0:
            if c < lo or c > hi:
                return None
        else:
            ta = (lo - c) / v
            tb = (hi - c) / v
            if ta > tb:
                ta, tb = tb, ta
            t0 = max(t0, ta)
            t1 = min(t1, tb)
    if t0 > t1:
        return None
    return t0, t1


def _circle_box_crossings(cx, cy, radius, w: Window) -> list[float]:
    """Angles (in [0, 2*pi)) where the circle crosses the box edges."""
    lo0, lo1 = w.lo.coords
    hi0, hi1 = w.hi.coords
    angles: list[float] = []
    for x_edge in (lo0, hi0):
        dx = x_edge - cx
        if abs(dx) <= radius:
            dy = math.sqrt(max(radius * radius - dx * dx, 0.0))
            for y in (cy + dy, cy - dy):
                if lo1 <= y <= hi1:
                    angles.append(math.atan2(y - cy, dx) % TWO_PI)
    for y_edge in (lo1, hi1):
        dy = y_edge - cy
        if abs(dy) <= radius:
            dx = math.sqrt(max(radius * radius - dy * dy, 0.0))
            for x in (cx + dx, cx - dx):
                if lo0 <= x <= hi0:
                    angles.append(math.atan2(dy, x - cx) % TWO_PI)
    return sorted(set(angles))


def _arc_box_partition(cx, cy, radius, start, extent, w: Window):
    """Partition an arc at box crossings; yields (abs_lo, abs_hi, inside)."""
    crossings = _circle_box_crossings(cx, cy, radius, w)
    full = extent >= TWO_PI
    if full:
        rel = sorted({(a - start) % TWO_PI for a in crossings})
        if not rel:
            bounds = [(0.0, TWO_PI)]
        else:
            bounds = [(rel[i], rel[i + 1]) for i in range(len(rel) - 1)]
            bounds.append((rel[-1], rel[0] + TWO_PI))
    else:
        rel = {0.0, extent}
        for a in crossings:
            u = (a - start) % TWO_PI
            if 0.0 < u < extent:
                rel.add(u)
        rel_sorted = sorted(rel)
        bounds = [(rel_sorted[i], rel_sorted[i + 1]) for i in range(len(rel_sorted) - 1)]
    out = []
    for a, b in bounds:
        if b - a <= 0.0:
            continue
        mid = start + (a + b) / 2.0
        px = cx + radius * math.cos(mid)
        py = cy + radius * math.sin(mid)
        inside = (
            w.lo.coords[0] <= px <= w.hi.coords[0]
            and w.lo.coords[1] <= py <= w.hi.coords[1]
        )
        out.append((start + a, start + b, inside))
    return out


def clip_measure(g: Grain, w: Window) -> float:
    """Exact ``H^n(g intersect w)`` for point and curve grains.

    Disk grains (n = 2) are rejected: per-grain area sums double-count
    overlap in unions, so solid sets are measured by indicator quadrature
    instead (see :func:`enlargement_volume` with the set itself).
    """
    if isinstance(g, PointGrain):
        if g.location.d != w.d:
            raise ValueError("grain and window dimensions differ")
        return 1.0 if w.contains(g.location) else 0.0
    if w.d != 2:
        raise ValueError("curve grains need a planar window")
    if isinstance(g, Segment):
        clipped = _param_clip(g.a.x, g.a.y, g.b.x - g.a.x, g.b.y - g.a.y, w, 0.0, 1.0)
        if clipped is None:
            return 0.0
        t0, t1 = clipped
        return (t1 - t0) * g.length
    if isinstance(g, Line):
        ux, uy = line_direction(g.angle)
        clipped = _param_clip(g.offset * ux, g.offset * uy, -uy, ux, w, -math.inf, math.inf)
        if clipped is None:
            return 0.0
        t0, t1 = clipped
        return t1 - t0
    if isinstance(g, Circle):
        parts = _arc_box_partition(g.center.x, g.center.y, g.radius, 0.0, TWO_PI, w)
        return g.radius * sum(b - a for a, b, inside in parts if inside)
    if isinstance(g, Arc):
        parts = _arc_box_partition(g.center.x, g.center.y, g.radius, g.start, g.extent, w)
        return g.radius * sum(b - a for a, b, inside in parts if inside)
    if isinstance(g, Disk):
        raise ValueError("solid grains have no curve measure; use volume quadrature")
    raise TypeError(f"not a grain: {g!r}")


def measure_in_ball(g: Grain, center: Point, r: float) -> float:
    """Exact ``H^n(g intersect B_r(center))`` for point and curve grains."""
    if r <= 0:
        raise ValueError(f"ball radius must be > 0, got {r}")
    if isinstance(g, PointGrain):
        return 1.0 if distance(center, g) <= r else 0.0
    if center.d != 2:
        raise ValueError("curve grains need a planar query point")
    qx, qy = center.x, center.y
    if isinstance(g, Segment):
        return _segment_ball_measure(g.a.x, g.a.y, g.b.x, g.b.y, qx, qy, r)
    if isinstance(g, Line):
        ux, uy = line_direction(g.angle)
        h = abs(qx * ux + qy * uy - g.offset)
        if h >= r:
            return 0.0
        return 2.0 * math.sqrt(r * r - h * h)
    if isinstance(g, Circle):
        return _arc_ball_measure(g.center.x, g.center.y, g.radius, 0.0, TWO_PI, qx, qy, r)
    if isinstance(g, Arc):
        return _arc_ball_measure(g.center.x, g.center.y, g.radius, g.start, g.extent, qx, qy, r)
    if isinstance(g, Disk):
        raise ValueError("solid grains have no curve measure; use volume quadrature")
    raise TypeError(f"not a grain: {g!r}")


def _segment_ball_measure(ax, ay, bx, by, qx, qy, r):
    vx = bx - ax
    vy = by - ay
    wx = ax - qx
    wy = ay - qy
    a2 = vx * vx + vy * vy
    b2 = 2.0 * (wx * vx + wy * vy)
    c2 = wx * wx + wy * wy - r * r
    disc = b2 * b2 - 4.0 * a2 * c2
    if disc <= 0.0:
        return 0.0
    sq = math.sqrt(disc)
    t0 = (-b2 - sq) / (2.0 * a2)
    t1 = (-b2 + sq) / (2.0 * a2)
    t0 = max(t0, 0.0)
    t1 = min(t1, 1.0)
    if t1 <= t0:
        return 0.0
    return (t1 - t0) * math.sqrt(a2)


def _arc_ball_measure(cx, cy, radius, start, extent, qx, qy, r):
    dx = qx - cx
    dy = qy - cy
    d = math.sqrt(dx * dx + dy * dy)
    if d == 0.0:
        return radius * extent if radius <= r else 0.0
    u = (d * d + radius * radius - r * r) / (2.0 * d * radius)
    if u >= 1.0:
        return 0.0
    if u <= -1.0:
        return radius * extent
    psi = math.acos(u)
    phi0 = math.atan2(dy, dx)
    # covered window on the circle: [phi0 - psi, phi0 + psi]
    s = (phi0 - psi - start) % TWO_PI
    covered = 0.0
    # window may wrap past the arc start; test both unwrapped copies
    for shift in (0.0, -TWO_PI):
        lo = s + shift
        hi = lo + 2.0 * psi
        covered += max(0.0, min(hi, extent) - max(lo, 0.0))
    return radius * covered


# --------------------------------------------------------------------------
# Union-of-disks boundary
# --------------------------------------------------------------------------


def boundary_arcs(disks: Sequence[Disk]) -> list[Arc]:
    """Arcs of each circle not strictly inside any other disk.

    The returned arcs cover the topological boundary of the union up to
    H^1-null sets; circles swallowed by another open disk contribute
    nothing.  Exact duplicates are collapsed first so coincident disks do
    not double-count their shared circle.
    """
    unique: list[Disk] = []
    seen = set()
    for dk in disks:
        key = (dk.center.x, dk.center.y, dk.radius)
        if key not in seen:
            seen.add(key)
            unique.append(dk)
    arcs: list[Arc] = []
    for i, di in enumerate(unique):
        covered: list[tuple[float, float]] = []
        swallowed = False
        for j, dj in enumerate(unique):
            if i == j:
                continue
            dx = dj.center.x - di.center.x
            dy = dj.center.y - di.center.y
            d = math.sqrt(dx * dx + dy * dy)
            if d + di.radius <= dj.radius:
                swallowed = True
                break
            if d >= di.radius + dj.radius or d + dj.radius <= di.radius:
                continue
            u = (d * d + di.radius * di.radius - dj.radius * dj.radius) / (
                2.0 * d * di.radius
            )
            u = min(1.0, max(-1.0, u))
            psi = math.acos(u)
            if psi <= 0.0:
                continue
            phi0 = math.atan2(dy, dx)
            covered.append(((phi0 - psi) % TWO_PI, 2.0 * psi))
        if swallowed:
            continue
        for lo, hi in _complement_intervals(covered):
            arcs.append(Arc(di.center, di.radius, lo, hi))
    return arcs


def _complement_intervals(covered: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Complement of a union of (start, extent) angle intervals in [0, 2*pi).

    Returns (theta_lo, theta_hi) pairs; a pair may wrap, with
    theta_hi = theta_lo + extent and theta_lo in [0, 2*pi).
    """
    if not covered:
        return [(0.0, TWO_PI)]
    pieces: list[tuple[float, float]] = []
    for start, extent in covered:
        if extent >= TWO_PI:
            return []
        end = start + extent
        if end <= TWO_PI:
            pieces.append((start, end))
        else:
            pieces.append((start, TWO_PI))
            pieces.append((0.0, end - TWO_PI))
    pieces.sort()
    merged = [list(pieces[0])]
    for a, b in pieces[1:]:
        if a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    gaps: list[tuple[float, float]] = []
    for k in range(len(merged)):
        gap_lo = merged[k][1]
        gap_hi = merged[(k + 1) % len(merged)][0] + (TWO_PI if k + 1 == len(merged) else 0.0)
        if gap_hi - gap_lo > 0.0:
            gaps.append((gap_lo % TWO_PI, gap_lo % TWO_PI + (gap_hi - gap_lo)))
    # wholly covered circle leaves no gaps
    if len(merged) == 1 and merged[0][0] <= 0.0 and merged[0][1] >= TWO_PI:
        return []
    return gaps


def union_disks_area(disks: Sequence[Disk]) -> float:
    """Area of a union of disks via Green's theorem over its boundary arcs."""
    total = 0.0
    for arc in boundary_arcs(disks):
        cx, cy, radius = arc.center.x, arc.center.y, arc.radius
        t0, t1 = arc.theta_lo, arc.theta_hi
        total += 0.5 * (
            cx * radius * (math.sin(t1) - math.sin(t0))
            - cy * radius * (math.cos(t1) - math.cos(t0))
            + radius * radius * (t1 - t0)
        )
    return total


# --------------------------------------------------------------------------
# Window restriction
# --------------------------------------------------------------------------


def clip_grain(g: Grain, w: Window) -> list[Grain]:
    """The grain intersected with the box, as grains (up to H^n-null sets)."""
    if isinstance(g, PointGrain):
        return [g] if w.contains(g.location) else []
    if isinstance(g, Segment):
        clipped = _param_clip(g.a.x, g.a.y, g.b.x - g.a.x, g.b.y - g.a.y, w, 0.0, 1.0)
        if clipped is None or clipped[1] - clipped[0] <= 0.0:
            return []
        t0, t1 = clipped
        vx = g.b.x - g.a.x
        vy = g.b.y - g.a.y
        return [
            Segment(
                point(g.a.x + t0 * vx, g.a.y + t0 * vy),
                point(g.a.x + t1 * vx, g.a.y + t1 * vy),
            )
        ]
    if isinstance(g, Line):
        ux, uy = line_direction(g.angle)
        clipped = _param_clip(g.offset * ux, g.offset * uy, -uy, ux, w, -math.inf, math.inf)
        if clipped is None or clipped[1] - clipped[0] <= 0.0:
            return []
        t0, t1 = clipped
        px, py = g.offset * ux, g.offset * uy
        return [
            Segment(point(px - t0 * uy, py + t0 * ux), point(px - t1 * uy, py + t1 * ux))
        ]
    if isinstance(g, (Circle, Arc)):
        if isinstance(g, Circle):
            start, extent, radius, center = 0.0, TWO_PI, g.radius, g.center
        else:
            start, extent, radius, center = g.start, g.extent, g.radius, g.center
        parts = _arc_box_partition(center.x, center.y, radius, start, extent, w)
        out: list[Grain] = []
        for a, b, inside in parts:
            if inside and b - a > 0.0:
                out.append(Arc(center, radius, a % TWO_PI, a % TWO_PI + (b - a)))
        return out
    if isinstance(g, Disk):
        raise ValueError("solid grains cannot be clipped to grain primitives")
    raise TypeError(f"not a grain: {g!r}")


def restrict_to_window(s: RealizedSet, w: Window | None = None) -> RealizedSet:
    """Clip every grain to the window (default: the set's valid window)."""
    target = w if w is not None else s.valid_window
    grains: list[Grain] = []
    for g in s.grains:
        grains.extend(clip_grain(g, target))
    return RealizedSet(tuple(grains), s.n, s.valid_window)


def set_measure_in_window(s: RealizedSet, w: Window) -> float:
    """Total ``H^n`` of the grains inside the box (valid for n < d unions,
    where pairwise overlaps are H^n-null)."""
    return sum(clip_measure(g, w) for g in s.grains)


# --------------------------------------------------------------------------
# Enlargement volume by grid quadrature
# --------------------------------------------------------------------------


def _grid_shape(a: Window, resolution: int) -> tuple[int, int, float, float, float, float, float, float]:
    lo0 = a.lo.coords[0]
    hi0 = a.hi.coords[0]
    if a.d == 2:
        lo1 = a.lo.coords[1]
        hi1 = a.hi.coords[1]
        res1 = resolution
    else:
        lo1 = hi1 = 0.0
        res1 = 1
    return resolution, res1, lo0, hi0, lo1, hi1


def enlargement_volume(s, a: Window, r: float, resolution: int) -> float:
    """Midpoint-rule volume of the closed r-enlargement inside the box.

    ``s`` is anything with a ``grains`` attribute (or a plain grain
    sequence).  The grid has ``resolution`` cells per axis; the result is
    deterministic for fixed inputs and independent of any parallel
    partitioning because cells are counted as integers.  The error is at
    most :func:`quadrature_error_bound`.
    """
    if r <= 0:
        raise ValueError(f"enlargement radius must be > 0, got {r}")
    if resolution < 8:
        raise ValueError(f"resolution must be >= 8 cells per axis, got {resolution}")
    grains = getattr(s, "grains", s)
    if len(grains) == 0:
        return 0.0
    from ._backend import kernels

    kinds, params = pack_grains(grains)
    res0, res1, lo0, hi0, lo1, hi1 = _grid_shape(a, resolution)
    count = kernels.enlargement_count(kinds, params, lo0, hi0, lo1, hi1, res0, res1, r)
    cell = (hi0 - lo0) / res0
    if a.d == 2:
        cell *= (hi1 - lo1) / res1
    return count * cell


def _enlarged_perimeter_bound(g: Grain, r: float, a: Window) -> float:
    """Upper bound on the boundary length of the r-enlargement of one grain."""
    if isinstance(g, PointGrain):
        return TWO_PI * r
    if isinstance(g, Segment):
        return 2.0 * g.length + TWO_PI * r
    if isinstance(g, Line):
        diag = 2.0 * a.circumradius
        return 2.0 * diag + TWO_PI * r
    if isinstance(g, (Circle, Arc)):
        radius = g.radius
        outer = TWO_PI * (radius + r)
        inner = TWO_PI * max(radius - r, 0.0)
        return outer + inner + (TWO_PI * r if isinstance(g, Arc) else 0.0)
    if isinstance(g, Disk):
        return TWO_PI * (g.radius + r)
    raise TypeError(f"not a grain: {g!r}")


def quadrature_error_bound(s, a: Window, r: float, resolution: int) -> float:
    """Certified error bound for :func:`enlargement_volume`.

    Only cells crossed by the enlargement boundary can be misclassified,
    each contributing at most one cell volume; a curve of length P crosses
    at most 2*P/h + 4 cells of side h per component.
    """
    grains = getattr(s, "grains", s)
    if len(grains) == 0:
        return 0.0
    if a.d == 1:
        h = (a.hi.coords[0] - a.lo.coords[0]) / resolution
        return 2.0 * len(grains) * 2.0 * h
    h = max((hi - lo) / resolution for lo, hi in zip(a.lo.coords, a.hi.coords))
    perimeter = sum(_enlarged_perimeter_bound(g, r, a) for g in grains)
    components = 2 * len(grains) + 2
    return (2.0 * perimeter / h + 4.0 * components) * h * h
