# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled pose-track kernels; arithmetic mirrors movi._kernels.pure
expression for expression (built with FP contraction off, so results
are bit-identical to the pure backend)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport acos, sin, sqrt

cnp.import_array()

cdef double NLERP_DOT = 1.0 - 1e-12
cdef double DEGENERATE_DOT = 1e-15


cdef inline void _slerp_c(double x0, double y0, double z0, double w0,
                          double x1, double y1, double z1, double w1,
                          double u, double* out) nogil:
    cdef double dot, theta, s, a, b, rx, ry, rz, rw, n
    dot = x0 * x1 + y0 * y1 + z0 * z1 + w0 * w1
    if dot < 0.0:
        x1 = -x1; y1 = -y1; z1 = -z1; w1 = -w1
        dot = -dot
    if u == 0.0 or (x0 == x1 and y0 == y1 and z0 == z1 and w0 == w1):
        out[0] = x0; out[1] = y0; out[2] = z0; out[3] = w0
        return
    if u == 1.0:
        out[0] = x1; out[1] = y1; out[2] = z1; out[3] = w1
        return
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
    out[0] = rx / n; out[1] = ry / n; out[2] = rz / n; out[3] = rw / n


def slerp_one(q0, q1, double u):
    cdef double[::1] a = np.ascontiguousarray(q0, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(q1, dtype=np.float64)
    out = np.empty(4)
    cdef double[::1] o = out
    _slerp_c(a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3], u, &o[0])
    return out


def resample(double[::1] ts, double[:, ::1] pos, double[:, ::1] quat,
             double[::1] grid):
    cdef Py_ssize_t n = ts.shape[0]
    cdef Py_ssize_t m = grid.shape[0]
    pos_out = np.empty((m, 3))
    quat_out = np.empty((m, 4))
    cdef double[:, ::1] po = pos_out
    cdef double[:, ::1] qo = quat_out
    cdef Py_ssize_t j, seg = 0
    cdef double t, ta, tb, u, a
    cdef double q[4]
    with nogil:
        for j in range(m):
            t = grid[j]
            while seg < n - 2 and ts[seg + 1] <= t:
                seg += 1
            ta = ts[seg]
            tb = ts[seg + 1]
            u = (t - ta) / (tb - ta)
            if u == 0.0 or (pos[seg, 0] == pos[seg + 1, 0] and
                            pos[seg, 1] == pos[seg + 1, 1] and
                            pos[seg, 2] == pos[seg + 1, 2]):
                po[j, 0] = pos[seg, 0]; po[j, 1] = pos[seg, 1]; po[j, 2] = pos[seg, 2]
            elif u == 1.0:
                po[j, 0] = pos[seg + 1, 0]; po[j, 1] = pos[seg + 1, 1]; po[j, 2] = pos[seg + 1, 2]
            else:
                a = 1.0 - u
                po[j, 0] = a * pos[seg, 0] + u * pos[seg + 1, 0]
                po[j, 1] = a * pos[seg, 1] + u * pos[seg + 1, 1]
                po[j, 2] = a * pos[seg, 2] + u * pos[seg + 1, 2]
            _slerp_c(quat[seg, 0], quat[seg, 1], quat[seg, 2], quat[seg, 3],
                     quat[seg + 1, 0], quat[seg + 1, 1], quat[seg + 1, 2], quat[seg + 1, 3],
                     u, q)
            qo[j, 0] = q[0]; qo[j, 1] = q[1]; qo[j, 2] = q[2]; qo[j, 3] = q[3]
    return pos_out, quat_out


def moving_average(double[:, ::1] pos, Py_ssize_t window):
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t half = (window - 1) // 2
    out = np.empty((n, 3))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t k, ax
    if window == 1:
        # Skip the prefix sums: their subtraction is not bit-exact.
        with nogil:
            for k in range(n):
                for ax in range(3):
                    o[k, ax] = pos[k, ax]
        return out
    prefix_arr = np.empty(n + 1)
    cdef double[::1] prefix = prefix_arr
    cdef Py_ssize_t axis, i, lo, hi
    cdef double acc
    with nogil:
        for axis in range(3):
            prefix[0] = 0.0
            acc = 0.0
            for i in range(n):
                acc = acc + pos[i, axis]
                prefix[i + 1] = acc
            for i in range(n):
                lo = i - half
                if lo < 0:
                    lo = 0
                hi = i + half
                if hi > n - 1:
                    hi = n - 1
                o[i, axis] = (prefix[hi + 1] - prefix[lo]) / <double>(hi - lo + 1)
    return out


def central_diff(double[::1] ts, double[:, ::1] pos):
    cdef Py_ssize_t n = ts.shape[0]
    out = np.empty((n, 3))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t axis, i
    with nogil:
        for axis in range(3):
            o[0, axis] = (pos[1, axis] - pos[0, axis]) / (ts[1] - ts[0])
            for i in range(1, n - 1):
                o[i, axis] = (pos[i + 1, axis] - pos[i - 1, axis]) / (ts[i + 1] - ts[i - 1])
            o[n - 1, axis] = (pos[n - 1, axis] - pos[n - 2, axis]) / (ts[n - 1] - ts[n - 2])
    return out


def rotate_forward_many(double[:, ::1] quat):
    cdef Py_ssize_t n = quat.shape[0]
    out = np.empty((n, 3))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i
    cdef double x, y, z, w, fx, fy, fz, norm
    with nogil:
        for i in range(n):
            x = quat[i, 0]; y = quat[i, 1]; z = quat[i, 2]; w = quat[i, 3]
            fx = 2.0 * (x * z + w * y)
            fy = 2.0 * (y * z - w * x)
            fz = 1.0 - 2.0 * (x * x + y * y)
            norm = sqrt(fx * fx + fy * fy + fz * fz)
            o[i, 0] = fx / norm
            o[i, 1] = fy / norm
            o[i, 2] = fz / norm
    return out
