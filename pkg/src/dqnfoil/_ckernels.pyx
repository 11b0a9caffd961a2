# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport atan2, log, sqrt, M_PI

cnp.import_array()


def influence_matrices(x, y):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t m = xv.shape[0] - 1
    cdef Py_ssize_t i, j
    cdef double two_pi = 2.0 * M_PI
    an_a = np.empty((m, m))
    at_a = np.empty((m, m))
    bn_a = np.empty((m, m))
    bt_a = np.empty((m, m))
    cdef double[:, ::1] an = an_a
    cdef double[:, ::1] at = at_a
    cdef double[:, ::1] bn = bn_a
    cdef double[:, ::1] bt = bt_a
    tx_a = np.empty(m)
    ty_a = np.empty(m)
    xm_a = np.empty(m)
    ym_a = np.empty(m)
    cdef double[::1] tx = tx_a
    cdef double[::1] ty = ty_a
    cdef double[::1] xm = xm_a
    cdef double[::1] ym = ym_a
    cdef double dx, dy, length
    cdef double d1x, d1y, d2x, d2y, beta, logr, us, ws
    cdef double vsx, vsy, vvx, vvy

    for j in range(m):
        dx = xv[j + 1] - xv[j]
        dy = yv[j + 1] - yv[j]
        length = sqrt(dx * dx + dy * dy)
        tx[j] = dx / length
        ty[j] = dy / length
        xm[j] = 0.5 * (xv[j] + xv[j + 1])
        ym[j] = 0.5 * (yv[j] + yv[j + 1])

    for i in range(m):
        for j in range(m):
            if i == j:
                beta = -M_PI
                logr = 0.0
            else:
                d1x = xm[i] - xv[j]
                d1y = ym[i] - yv[j]
                d2x = xm[i] - xv[j + 1]
                d2y = ym[i] - yv[j + 1]
                beta = atan2(d1x * d2y - d1y * d2x, d1x * d2x + d1y * d2y)
                logr = 0.5 * log((d1x * d1x + d1y * d1y) / (d2x * d2x + d2y * d2y))
            us = logr / two_pi
            ws = beta / two_pi
            vsx = us * tx[j] - ws * ty[j]
            vsy = us * ty[j] + ws * tx[j]
            vvx = -ws * tx[j] - us * ty[j]
            vvy = -ws * ty[j] + us * tx[j]
            an[i, j] = vsx * ty[i] - vsy * tx[i]
            at[i, j] = vsx * tx[i] + vsy * ty[i]
            bn[i, j] = vvx * ty[i] - vvy * tx[i]
            bt[i, j] = vvx * tx[i] + vvy * ty[i]
    return an_a, at_a, bn_a, bt_a


cdef inline double _orient(double ax, double ay, double bx, double by,
                           double cx, double cy) nogil:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def has_self_intersection(x, y):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0] - 1
    cdef Py_ssize_t i, j
    cdef bint closed
    cdef double o1, o2, o3, o4
    if n < 4:
        return False
    closed = xv[0] == xv[n] and yv[0] == yv[n]
    for i in range(n):
        for j in range(i + 2, n):
            if closed and i == 0 and j == n - 1:
                continue
            o1 = _orient(xv[i], yv[i], xv[i + 1], yv[i + 1], xv[j], yv[j])
            o2 = _orient(xv[i], yv[i], xv[i + 1], yv[i + 1], xv[j + 1], yv[j + 1])
            if o1 * o2 >= 0.0:
                continue
            o3 = _orient(xv[j], yv[j], xv[j + 1], yv[j + 1], xv[i], yv[i])
            o4 = _orient(xv[j], yv[j], xv[j + 1], yv[j + 1], xv[i + 1], yv[i + 1])
            if o3 * o4 < 0.0:
                return True
    return False
