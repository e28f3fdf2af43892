"""JIT-compiled inner loops over packed grain arrays.

Layout (shared with the numpy twin in ``_kernels_numpy``):
  kinds  int64 (G,)      grain kind codes, see geometry.KIND_*
  params float64 (G, 5)  point: x, y | segment: ax, ay, bx, by
                         line: offset, angle | circle: cx, cy, R
                         arc: cx, cy, R, start, extent | disk: cx, cy, R
  offsets int64 (M+1,)   realization m owns rows offsets[m]:offsets[m+1]

All distances use sqrt(dx*dx + dy*dy) (not hypot) so both backends round
identically.
"""

import math

import numpy as np
from numba import njit

BACKEND_NAME = "numba"

TWO_PI = 2.0 * math.pi


@njit(cache=True, inline="always")
def _dist(kind, p0, p1, p2, p3, p4, qx, qy):
    if kind == 0:  # point
        dx = qx - p0
        dy = qy - p1
        return math.sqrt(dx * dx + dy * dy)
    if kind == 1:  # segment
        vx = p2 - p0
        vy = p3 - p1
        wx = qx - p0
        wy = qy - p1
        t = (wx * vx + wy * vy) / (vx * vx + vy * vy)
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        dx = wx - t * vx
        dy = wy - t * vy
        return math.sqrt(dx * dx + dy * dy)
    if kind == 2:  # line
        c = math.cos(p1)
        s = math.sin(p1)
        if -1e-15 < c < 1e-15:
            c = 0.0
        if -1e-15 < s < 1e-15:
            s = 0.0
        return abs(qx * c + qy * s - p0)
    if kind == 3:  # circle
        dx = qx - p0
        dy = qy - p1
        return abs(math.sqrt(dx * dx + dy * dy) - p2)
    if kind == 4:  # arc
        dx = qx - p0
        dy = qy - p1
        rho = math.sqrt(dx * dx + dy * dy)
        phi = math.atan2(dy, dx) % TWO_PI
        rel = (phi - p3) % TWO_PI
        if rel <= p4:
            return abs(rho - p2)
        e0x = p0 + p2 * math.cos(p3)
        e0y = p1 + p2 * math.sin(p3)
        e1x = p0 + p2 * math.cos(p3 + p4)
        e1y = p1 + p2 * math.sin(p3 + p4)
        d0 = math.sqrt((qx - e0x) ** 2 + (qy - e0y) ** 2)
        d1 = math.sqrt((qx - e1x) ** 2 + (qy - e1y) ** 2)
        return min(d0, d1)
    # disk
    dx = qx - p0
    dy = qy - p1
    rho = math.sqrt(dx * dx + dy * dy)
    out = rho - p2
    return out if out > 0.0 else 0.0


@njit(cache=True, inline="always")
def _ball_measure(kind, p0, p1, p2, p3, p4, qx, qy, r):
    if kind == 0:  # point
        dx = qx - p0
        dy = qy - p1
        return 1.0 if math.sqrt(dx * dx + dy * dy) <= r else 0.0
    if kind == 1:  # segment
        vx = p2 - p0
        vy = p3 - p1
        wx = p0 - qx
        wy = p1 - qy
        a2 = vx * vx + vy * vy
        b2 = 2.0 * (wx * vx + wy * vy)
        c2 = wx * wx + wy * wy - r * r
        disc = b2 * b2 - 4.0 * a2 * c2
        if disc <= 0.0:
            return 0.0
        sq = math.sqrt(disc)
        t0 = (-b2 - sq) / (2.0 * a2)
        t1 = (-b2 + sq) / (2.0 * a2)
        if t0 < 0.0:
            t0 = 0.0
        if t1 > 1.0:
            t1 = 1.0
        if t1 <= t0:
            return 0.0
        return (t1 - t0) * math.sqrt(a2)
    if kind == 2:  # line
        c = math.cos(p1)
        s = math.sin(p1)
        if -1e-15 < c < 1e-15:
            c = 0.0
        if -1e-15 < s < 1e-15:
            s = 0.0
        h = abs(qx * c + qy * s - p0)
        if h >= r:
            return 0.0
        return 2.0 * math.sqrt(r * r - h * h)
    if kind == 3 or kind == 4:  # circle / arc
        if kind == 3:
            start = 0.0
            extent = TWO_PI
        else:
            start = p3
            extent = p4
        dx = qx - p0
        dy = qy - p1
        d = math.sqrt(dx * dx + dy * dy)
        if d == 0.0:
            return p2 * extent if p2 <= r else 0.0
        u = (d * d + p2 * p2 - r * r) / (2.0 * d * p2)
        if u >= 1.0:
            return 0.0
        if u <= -1.0:
            return p2 * extent
        psi = math.acos(u)
        s = (math.atan2(dy, dx) - psi - start) % TWO_PI
        covered = 0.0
        for shift in (0.0, -TWO_PI):
            lo = s + shift
            hi = lo + 2.0 * psi
            lo_c = lo if lo > 0.0 else 0.0
            hi_c = hi if hi < extent else extent
            if hi_c > lo_c:
                covered += hi_c - lo_c
        return p2 * covered
    # disk: unsupported for curve measure, unreachable after validation
    return 0.0


@njit(cache=True)
def min_dist_batch(kinds, params, offsets, qx, qy):
    m_count = offsets.shape[0] - 1
    out = np.empty(m_count, dtype=np.float64)
    for m in range(m_count):
        best = np.inf
        for g in range(offsets[m], offsets[m + 1]):
            d = _dist(kinds[g], params[g, 0], params[g, 1], params[g, 2],
                      params[g, 3], params[g, 4], qx, qy)
            if d < best:
                best = d
        out[m] = best
    return out


@njit(cache=True)
def count_within_batch(kinds, params, offsets, qx, qy, r):
    m_count = offsets.shape[0] - 1
    out = np.zeros(m_count, dtype=np.int64)
    for m in range(m_count):
        c = 0
        for g in range(offsets[m], offsets[m + 1]):
            d = _dist(kinds[g], params[g, 0], params[g, 1], params[g, 2],
                      params[g, 3], params[g, 4], qx, qy)
            if d <= r:
                c += 1
        out[m] = c
    return out


@njit(cache=True)
def ball_measure_batch(kinds, params, offsets, qx, qy, r):
    m_count = offsets.shape[0] - 1
    out = np.zeros(m_count, dtype=np.float64)
    for m in range(m_count):
        total = 0.0
        for g in range(offsets[m], offsets[m + 1]):
            total += _ball_measure(kinds[g], params[g, 0], params[g, 1], params[g, 2],
                                   params[g, 3], params[g, 4], qx, qy, r)
        out[m] = total
    return out


@njit(cache=True)
def enlargement_count(kinds, params, lo0, hi0, lo1, hi1, res0, res1, r):
    h0 = (hi0 - lo0) / res0
    h1 = (hi1 - lo1) / res1
    g_count = kinds.shape[0]
    count = 0
    for i in range(res0):
        x = lo0 + (i + 0.5) * h0
        for j in range(res1):
            y = lo1 + (j + 0.5) * h1
            for g in range(g_count):
                d = _dist(kinds[g], params[g, 0], params[g, 1], params[g, 2],
                          params[g, 3], params[g, 4], x, y)
                if d <= r:
                    count += 1
                    break
    return count


@njit(cache=True)
def field_hits(kinds, params, offsets, xs, ys, r):
    """Per-cell hit counts over realizations and per-realization cell covers."""
    m_count = offsets.shape[0] - 1
    c_count = xs.shape[0]
    cell_counts = np.zeros(c_count, dtype=np.int64)
    per_real = np.zeros(m_count, dtype=np.int64)
    for m in range(m_count):
        g_lo = offsets[m]
        g_hi = offsets[m + 1]
        covered = 0
        for c in range(c_count):
            qx = xs[c]
            qy = ys[c]
            for g in range(g_lo, g_hi):
                d = _dist(kinds[g], params[g, 0], params[g, 1], params[g, 2],
                          params[g, 3], params[g, 4], qx, qy)
                if d <= r:
                    cell_counts[c] += 1
                    covered += 1
                    break
        per_real[m] = covered
    return cell_counts, per_real


def warmup():
    """Trigger compilation of every kernel on tiny inputs."""
    kinds = np.array([0, 1, 2, 3, 4, 5], dtype=np.int64)
    params = np.array(
        [
            [0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 1.5707963267948966, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0, 3.141592653589793],
            [0.0, 0.0, 1.0, 0.0, 0.0],
        ],
        dtype=np.float64,
    )
    offsets = np.array([0, 3, 6], dtype=np.int64)
    min_dist_batch(kinds, params, offsets, 0.25, 0.25)
    count_within_batch(kinds, params, offsets, 0.25, 0.25, 0.5)
    ball_measure_batch(kinds[:5], params[:5], offsets[:2] // 2, 0.25, 0.25, 0.5)
    enlargement_count(kinds, params, -1.0, 1.0, -1.0, 1.0, 8, 8, 0.5)
    xs = np.array([0.0, 0.5])
    ys = np.array([0.0, 0.5])
    field_hits(kinds, params, offsets, xs, ys, 0.5)
