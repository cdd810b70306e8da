"""Pure-Python pose-track kernels.

Reference implementation of the numeric hot loops; `movi._kernels._native`
is the compiled mirror. Both follow the exact same arithmetic, branch for
branch, so results are bit-identical across backends (the extension is
built with FP contraction off). Scalar math goes through `math` (libm),
never vectorized numpy, to keep that guarantee.

All functions take and return float64 numpy arrays.
"""

from __future__ import annotations

from math import acos, sin, sqrt

import numpy as np

# slerp falls back to normalized-linear blending when the arc is too
# short for the sine formula, or when the endpoints are orthogonal and
# the shortest path is ambiguous
NLERP_DOT = 1.0 - 1e-12
DEGENERATE_DOT = 1e-15


def _slerp_scalar(x0, y0, z0, w0, x1, y1, z1, w1, u):
    dot = x0 * x1 + y0 * y1 + z0 * z1 + w0 * w1
    if dot < 0.0:
        x1, y1, z1, w1 = -x1, -y1, -z1, -w1
        dot = -dot
    if u == 0.0 or (x0 == x1 and y0 == y1 and z0 == z1 and w0 == w1):
        return x0, y0, z0, w0
    if u == 1.0:
        return x1, y1, z1, w1
    if dot >= NLERP_DOT or dot <= DEGENERATE_DOT:
        a = 1.0 - u
        b = u
    else:
        theta = acos(dot)
        s = sin(theta)
        a = sin((1.0 - u) * theta) / s
        b = sin(u * theta) / s
    rx = a * x0 + b * x1
    ry = a * y0 + b * y1
    rz = a * z0 + b * z1
    rw = a * w0 + b * w1
    n = sqrt(rx * rx + ry * ry + rz * rz + rw * rw)
    return rx / n, ry / n, rz / n, rw / n


def slerp_one(q0, q1, u: float) -> np.ndarray:
    x0, y0, z0, w0 = np.asarray(q0, dtype=np.float64).tolist()
    x1, y1, z1, w1 = np.asarray(q1, dtype=np.float64).tolist()
    return np.array(_slerp_scalar(x0, y0, z0, w0, x1, y1, z1, w1, float(u)))


def resample(ts: np.ndarray, pos: np.ndarray, quat: np.ndarray,
             grid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sample a track at the given grid times (all within [ts[0], ts[-1]]).

    Positions interpolate linearly, orientations along the quaternion
    geodesic, between the bracketing samples. Grid times that hit an
    original timestamp copy that sample exactly.
    """
    t_list = ts.tolist()
    p_list = pos.tolist()
    q_list = quat.tolist()
    n = len(t_list)
    m = grid.shape[0]
    pos_out = np.empty((m, 3))
    quat_out = np.empty((m, 4))
    seg = 0
    for j in range(m):
        t = float(grid[j])
        while seg < n - 2 and t_list[seg + 1] <= t:
            seg += 1
        ta = t_list[seg]
        tb = t_list[seg + 1]
        u = (t - ta) / (tb - ta)
        pa = p_list[seg]
        pb = p_list[seg + 1]
        if u == 0.0 or pa == pb:
            pos_out[j, 0], pos_out[j, 1], pos_out[j, 2] = pa
        elif u == 1.0:
            pos_out[j, 0], pos_out[j, 1], pos_out[j, 2] = pb
        else:
            a = 1.0 - u
            pos_out[j, 0] = a * pa[0] + u * pb[0]
            pos_out[j, 1] = a * pa[1] + u * pb[1]
            pos_out[j, 2] = a * pa[2] + u * pb[2]
        qa = q_list[seg]
        qb = q_list[seg + 1]
        quat_out[j] = _slerp_scalar(qa[0], qa[1], qa[2], qa[3],
                                    qb[0], qb[1], qb[2], qb[3], u)
    return pos_out, quat_out


def moving_average(pos: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average with shrinking windows at the edges."""
    n = pos.shape[0]
    half = (window - 1) // 2
    out = np.empty((n, 3))
    if window == 1:
        # Skip the prefix sums: their subtraction is not bit-exact.
        out[:] = pos
        return out
    p_list = pos.tolist()
    for axis in range(3):
        prefix = [0.0] * (n + 1)
        acc = 0.0
        for i in range(n):
            acc = acc + p_list[i][axis]
            prefix[i + 1] = acc
        for i in range(n):
            lo = i - half
            if lo < 0:
                lo = 0
            hi = i + half
            if hi > n - 1:
                hi = n - 1
            out[i, axis] = (prefix[hi + 1] - prefix[lo]) / float(hi - lo + 1)
    return out


def central_diff(ts: np.ndarray, pos: np.ndarray) -> np.ndarray:
    """Velocity estimate: central differences, one-sided at the ends."""
    t = ts.tolist()
    p = pos.tolist()
    n = len(t)
    out = np.empty((n, 3))
    for axis in range(3):
        out[0, axis] = (p[1][axis] - p[0][axis]) / (t[1] - t[0])
        for i in range(1, n - 1):
            out[i, axis] = (p[i + 1][axis] - p[i - 1][axis]) / (t[i + 1] - t[i - 1])
        out[n - 1, axis] = (p[n - 1][axis] - p[n - 2][axis]) / (t[n - 1] - t[n - 2])
    return out


def rotate_forward_many(quat: np.ndarray) -> np.ndarray:
    """Apply each quaternion to the local +Z axis; rows are unit vectors."""
    q = quat.tolist()
    n = len(q)
    out = np.empty((n, 3))
    for i in range(n):
        x, y, z, w = q[i]
        fx = 2.0 * (x * z + w * y)
        fy = 2.0 * (y * z - w * x)
        fz = 1.0 - 2.0 * (x * x + y * y)
        norm = sqrt(fx * fx + fy * fy + fz * fz)
        out[i, 0] = fx / norm
        out[i, 1] = fy / norm
        out[i, 2] = fz / norm
    return out
