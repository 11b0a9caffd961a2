"""Pure numpy implementations of the hot kernels.

These are the reference versions; ``_ckernels.pyx`` mirrors them loop by
loop and must agree to round-off.
"""
import numpy as np

TWO_PI = 2.0 * np.pi


def influence_matrices(x, y):
    """Unit-strength panel influence on every panel midpoint.

    Parameters
    ----------
    x, y : ndarray, shape (m + 1,)
        Closed polyline vertices, counterclockwise.

    Returns
    -------
    an, at, bn, bt : ndarray, shape (m, m)
        Normal (n) and tangential (t) velocity at midpoint i induced by a
        unit source (a) or unit counterclockwise vortex (b) on panel j.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    dxp = np.diff(x)
    dyp = np.diff(y)
    length = np.hypot(dxp, dyp)
    tx = dxp / length
    ty = dyp / length
    xm = 0.5 * (x[:-1] + x[1:])
    ym = 0.5 * (y[:-1] + y[1:])

    # rows: collocation i, columns: panel j
    d1x = xm[:, None] - x[None, :-1]
    d1y = ym[:, None] - y[None, :-1]
    d2x = xm[:, None] - x[None, 1:]
    d2y = ym[:, None] - y[None, 1:]
    r1sq = d1x * d1x + d1y * d1y
    r2sq = d2x * d2x + d2y * d2y
    beta = np.arctan2(d1x * d2y - d1y * d2x, d1x * d2x + d1y * d2y)
    np.fill_diagonal(beta, -np.pi)
    logr = 0.5 * np.log(r1sq / r2sq)
    np.fill_diagonal(logr, 0.0)

    us = logr / TWO_PI
    ws = beta / TWO_PI
    # local (tangent, inward-left normal) -> global
    tjx = tx[None, :]
    tjy = ty[None, :]
    vsx = us * tjx - ws * tjy
    vsy = us * tjy + ws * tjx
    vvx = -ws * tjx - us * tjy
    vvy = -ws * tjy + us * tjx

    tix = tx[:, None]
    tiy = ty[:, None]
    # outward normal of a counterclockwise loop is (ty, -tx)
    an = vsx * tiy - vsy * tix
    at = vsx * tix + vsy * tiy
    bn = vvx * tiy - vvy * tix
    bt = vvx * tix + vvy * tiy
    return an, at, bn, bt


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def has_self_intersection(x, y):
    """True if any two non-adjacent segments of the polyline cross properly."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = len(x) - 1
    if n < 4:
        return False
    closed = x[0] == x[-1] and y[0] == y[-1]
    ax, ay, bx, by = x[:-1], y[:-1], x[1:], y[1:]
    A = (ax[:, None], ay[:, None], bx[:, None], by[:, None])
    B = (ax[None, :], ay[None, :], bx[None, :], by[None, :])
    o1 = _orient(A[0], A[1], A[2], A[3], B[0], B[1])
    o2 = _orient(A[0], A[1], A[2], A[3], B[2], B[3])
    o3 = _orient(B[0], B[1], B[2], B[3], A[0], A[1])
    o4 = _orient(B[0], B[1], B[2], B[3], A[2], A[3])
    cross = (o1 * o2 < 0.0) & (o3 * o4 < 0.0)
    i, j = np.triu_indices(n, k=2)
    hit = cross[i, j]
    if closed:
        hit &= ~((i == 0) & (j == n - 1))
    return bool(hit.any())
