"""Pure-numpy twin of the JIT kernels; same packed layout, same semantics.

Selected by MINKDENSITY_BACKEND=numpy or when numba is unavailable.
Vectorizes over grains/points per kind mask; batch reductions use
``reduceat`` with explicit empty-slice fixes.
"""

import math

import numpy as np

BACKEND_NAME = "numpy"

TWO_PI = 2.0 * math.pi


def _snap(arr):
    """Zero out direction components below 1e-15 (axis-aligned lines)."""
    out = np.asarray(arr, dtype=np.float64).copy()
    out[np.abs(out) < 1e-15] = 0.0
    return out


def _distances(kinds, params, qx, qy):
    """Distances from one query point to every packed grain, vectorized."""
    g_count = kinds.shape[0]
    out = np.empty(g_count, dtype=np.float64)

    mask = kinds == 0
    if mask.any():
        dx = qx - params[mask, 0]
        dy = qy - params[mask, 1]
        out[mask] = np.sqrt(dx * dx + dy * dy)

    mask = kinds == 1
    if mask.any():
        ax = params[mask, 0]
        ay = params[mask, 1]
        vx = params[mask, 2] - ax
        vy = params[mask, 3] - ay
        wx = qx - ax
        wy = qy - ay
        t = np.clip((wx * vx + wy * vy) / (vx * vx + vy * vy), 0.0, 1.0)
        dx = wx - t * vx
        dy = wy - t * vy
        out[mask] = np.sqrt(dx * dx + dy * dy)

    mask = kinds == 2
    if mask.any():
        ang = params[mask, 1]
        c = _snap(np.cos(ang))
        s = _snap(np.sin(ang))
        out[mask] = np.abs(qx * c + qy * s - params[mask, 0])

    mask = kinds == 3
    if mask.any():
        dx = qx - params[mask, 0]
        dy = qy - params[mask, 1]
        out[mask] = np.abs(np.sqrt(dx * dx + dy * dy) - params[mask, 2])

    mask = kinds == 4
    if mask.any():
        cx = params[mask, 0]
        cy = params[mask, 1]
        radius = params[mask, 2]
        start = params[mask, 3]
        extent = params[mask, 4]
        dx = qx - cx
        dy = qy - cy
        rho = np.sqrt(dx * dx + dy * dy)
        phi = np.arctan2(dy, dx) % TWO_PI
        rel = (phi - start) % TWO_PI
        on_arc = np.abs(rho - radius)
        e0x = cx + radius * np.cos(start)
        e0y = cy + radius * np.sin(start)
        e1x = cx + radius * np.cos(start + extent)
        e1y = cy + radius * np.sin(start + extent)
        d0 = np.sqrt((qx - e0x) ** 2 + (qy - e0y) ** 2)
        d1 = np.sqrt((qx - e1x) ** 2 + (qy - e1y) ** 2)
        out[mask] = np.where(rel <= extent, on_arc, np.minimum(d0, d1))

    mask = kinds == 5
    if mask.any():
        dx = qx - params[mask, 0]
        dy = qy - params[mask, 1]
        rho = np.sqrt(dx * dx + dy * dy)
        out[mask] = np.maximum(rho - params[mask, 2], 0.0)

    return out


def _ball_measures(kinds, params, qx, qy, r):
    g_count = kinds.shape[0]
    out = np.zeros(g_count, dtype=np.float64)

    mask = kinds == 0
    if mask.any():
        dx = qx - params[mask, 0]
        dy = qy - params[mask, 1]
        out[mask] = (np.sqrt(dx * dx + dy * dy) <= r).astype(np.float64)

    mask = kinds == 1
    if mask.any():
        ax = params[mask, 0]
        ay = params[mask, 1]
        vx = params[mask, 2] - ax
        vy = params[mask, 3] - ay
        wx = ax - qx
        wy = ay - qy
        a2 = vx * vx + vy * vy
        b2 = 2.0 * (wx * vx + wy * vy)
        c2 = wx * wx + wy * wy - r * r
        disc = b2 * b2 - 4.0 * a2 * c2
        hit = disc > 0.0
        sq = np.sqrt(np.where(hit, disc, 0.0))
        t0 = np.maximum((-b2 - sq) / (2.0 * a2), 0.0)
        t1 = np.minimum((-b2 + sq) / (2.0 * a2), 1.0)
        meas = np.where(hit & (t1 > t0), (t1 - t0) * np.sqrt(a2), 0.0)
        out[mask] = meas

    mask = kinds == 2
    if mask.any():
        ang = params[mask, 1]
        c = _snap(np.cos(ang))
        s = _snap(np.sin(ang))
        h = np.abs(qx * c + qy * s - params[mask, 0])
        out[mask] = np.where(h < r, 2.0 * np.sqrt(np.maximum(r * r - h * h, 0.0)), 0.0)

    mask = (kinds == 3) | (kinds == 4)
    if mask.any():
        cx = params[mask, 0]
        cy = params[mask, 1]
        radius = params[mask, 2]
        start = np.where(kinds[mask] == 3, 0.0, params[mask, 3])
        extent = np.where(kinds[mask] == 3, TWO_PI, params[mask, 4])
        dx = qx - cx
        dy = qy - cy
        d = np.sqrt(dx * dx + dy * dy)
        concentric = d == 0.0
        d_safe = np.where(concentric, 1.0, d)
        u = (d_safe * d_safe + radius * radius - r * r) / (2.0 * d_safe * radius)
        psi = np.arccos(np.clip(u, -1.0, 1.0))
        s = (np.arctan2(dy, dx) - psi - start) % TWO_PI
        covered = np.zeros_like(s)
        for shift in (0.0, -TWO_PI):
            lo = np.maximum(s + shift, 0.0)
            hi = np.minimum(s + shift + 2.0 * psi, extent)
            covered += np.maximum(hi - lo, 0.0)
        meas = radius * covered
        meas = np.where(u >= 1.0, 0.0, meas)
        meas = np.where(u <= -1.0, radius * extent, meas)
        meas = np.where(concentric, np.where(radius <= r, radius * extent, 0.0), meas)
        out[mask] = meas

    # disks: unsupported for curve measure, validated out upstream
    return out


def _segment_reduce(values, offsets, ufunc, fill, dtype):
    """Per-realization reduction over values[offsets[m]:offsets[m+1]].

    Empty slices get ``fill``.  ``reduceat`` is applied only at the starts
    of non-empty slices: consecutive non-empty slices are contiguous, so
    each reduceat segment covers exactly one realization.
    """
    m_count = offsets.shape[0] - 1
    out = np.full(m_count, fill, dtype=dtype)
    nonempty = np.flatnonzero(offsets[:-1] < offsets[1:])
    if nonempty.size:
        out[nonempty] = ufunc.reduceat(values, offsets[:-1][nonempty])
    return out


def min_dist_batch(kinds, params, offsets, qx, qy):
    if kinds.shape[0] == 0:
        return np.full(offsets.shape[0] - 1, np.inf)
    dists = _distances(kinds, params, qx, qy)
    return _segment_reduce(dists, offsets, np.minimum, np.inf, np.float64)


def count_within_batch(kinds, params, offsets, qx, qy, r):
    if kinds.shape[0] == 0:
        return np.zeros(offsets.shape[0] - 1, dtype=np.int64)
    hits = (_distances(kinds, params, qx, qy) <= r).astype(np.int64)
    return _segment_reduce(hits, offsets, np.add, 0, np.int64)


def ball_measure_batch(kinds, params, offsets, qx, qy, r):
    if kinds.shape[0] == 0:
        return np.zeros(offsets.shape[0] - 1, dtype=np.float64)
    meas = _ball_measures(kinds, params, qx, qy, r)
    return _segment_reduce(meas, offsets, np.add, 0.0, np.float64)


def enlargement_count(kinds, params, lo0, hi0, lo1, hi1, res0, res1, r, chunk=256):
    h0 = (hi0 - lo0) / res0
    h1 = (hi1 - lo1) / res1
    ys = lo1 + (np.arange(res1) + 0.5) * h1
    count = 0
    for i0 in range(0, res0, chunk):
        i1 = min(i0 + chunk, res0)
        xs = lo0 + (np.arange(i0, i1) + 0.5) * h0
        gx = np.repeat(xs, res1)
        gy = np.tile(ys, i1 - i0)
        best = np.full(gx.shape[0], np.inf)
        for g in range(kinds.shape[0]):
            d = _point_distances_to_grain(kinds[g], params[g], gx, gy)
            np.minimum(best, d, out=best)
        count += int(np.count_nonzero(best <= r))
    return count


def _point_distances_to_grain(kind, p, xs, ys):
    """Distances from many query points to a single grain."""
    if kind == 0:
        dx = xs - p[0]
        dy = ys - p[1]
        return np.sqrt(dx * dx + dy * dy)
    if kind == 1:
        vx = p[2] - p[0]
        vy = p[3] - p[1]
        wx = xs - p[0]
        wy = ys - p[1]
        t = np.clip((wx * vx + wy * vy) / (vx * vx + vy * vy), 0.0, 1.0)
        dx = wx - t * vx
        dy = wy - t * vy
        return np.sqrt(dx * dx + dy * dy)
    if kind == 2:
        c = math.cos(p[1])
        s = math.sin(p[1])
        if -1e-15 < c < 1e-15:
            c = 0.0
        if -1e-15 < s < 1e-15:
            s = 0.0
        return np.abs(xs * c + ys * s - p[0])
    if kind == 3:
        dx = xs - p[0]
        dy = ys - p[1]
        return np.abs(np.sqrt(dx * dx + dy * dy) - p[2])
    if kind == 4:
        dx = xs - p[0]
        dy = ys - p[1]
        rho = np.sqrt(dx * dx + dy * dy)
        phi = np.arctan2(dy, dx) % TWO_PI
        rel = (phi - p[3]) % TWO_PI
        e0x = p[0] + p[2] * math.cos(p[3])
        e0y = p[1] + p[2] * math.sin(p[3])
        e1x = p[0] + p[2] * math.cos(p[3] + p[4])
        e1y = p[1] + p[2] * math.sin(p[3] + p[4])
        d0 = np.sqrt((xs - e0x) ** 2 + (ys - e0y) ** 2)
        d1 = np.sqrt((xs - e1x) ** 2 + (ys - e1y) ** 2)
        return np.where(rel <= p[4], np.abs(rho - p[2]), np.minimum(d0, d1))
    dx = xs - p[0]
    dy = ys - p[1]
    rho = np.sqrt(dx * dx + dy * dy)
    return np.maximum(rho - p[2], 0.0)


def field_hits(kinds, params, offsets, xs, ys, r):
    m_count = offsets.shape[0] - 1
    c_count = xs.shape[0]
    cell_counts = np.zeros(c_count, dtype=np.int64)
    per_real = np.zeros(m_count, dtype=np.int64)
    if kinds.shape[0] == 0:
        return cell_counts, per_real
    for c in range(c_count):
        dists = _distances(kinds, params, xs[c], ys[c])
        best = _segment_reduce(dists, offsets, np.minimum, np.inf, np.float64)
        hit = best <= r
        cell_counts[c] = int(np.count_nonzero(hit))
        per_real += hit
    return cell_counts, per_real


def warmup():
    """Parity stub so both backends expose the same module surface."""
    return None
