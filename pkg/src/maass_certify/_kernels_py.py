"""Pure-python geometry kernels (reference implementation).

These are the hot inner loops of the toolkit: Iwasawa extraction, polar
height, and exact reduction to the fundamental domain for n = 2, 3.  A
Cython twin (_kernels_cy) implements the same API; maass_certify.kernels
selects between them at import time.

Conventions: a point of the generalized upper half plane is (x, y) with
x the strict-upper-triangle entries and y the n-1 positive torus ratios;
its determinant-one matrix is x_mat @ a_y.  Reduction returns an integer
gamma with gamma.z equal to the canonical fundamental-domain representative.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DecompositionError, ReductionError

IS_COMPILED = False

_EPS_IMPROVE = 1e-12


# ---------------------------------------------------------------- matrices

def point_matrix2(x, y):
    if y <= 0:
        raise DecompositionError("torus coordinate must be positive")
    s = math.sqrt(y)
    return np.array([[s, x / s], [0.0, 1.0 / s]])


def point_matrix3(xv, yv):
    x12, x13, x23 = xv
    y1, y2 = yv
    if y1 <= 0 or y2 <= 0:
        raise DecompositionError("torus coordinates must be positive")
    norm = (y1 * y1 * y2) ** (-1.0 / 3.0)
    d1, d2, d3 = norm * y1 * y2, norm * y1, norm
    return np.array([
        [d1, x12 * d2, x13 * d3],
        [0.0, d2, x23 * d3],
        [0.0, 0.0, d3],
    ])


# ------------------------------------------------------- iwasawa / polar

def iwasawa2(g):
    """(x12, y1) of a 2x2 det-1 matrix, bottom-up Gram orthogonalization."""
    t2 = math.hypot(g[1, 0], g[1, 1])
    if not (t2 > 0 and math.isfinite(t2)):
        raise DecompositionError("singular or non-finite input")
    q2 = g[1] / t2
    r12 = g[0, 0] * q2[0] + g[0, 1] * q2[1]
    u = g[0] - r12 * q2
    r11 = math.hypot(u[0], u[1])
    return r12 / t2, r11 / t2


def iwasawa3(g):
    """(x12, x13, x23, Y1, Y2) of a 3x3 det-1 matrix."""
    t3 = math.sqrt(g[2, 0] ** 2 + g[2, 1] ** 2 + g[2, 2] ** 2)
    if not (t3 > 0 and math.isfinite(t3)):
        raise DecompositionError("singular or non-finite input")
    q3 = g[2] / t3
    r23 = float(g[1] @ q3)
    u2 = g[1] - r23 * q3
    r22 = math.sqrt(float(u2 @ u2))
    if r22 <= 0:
        raise DecompositionError("rank-deficient input")
    q2 = u2 / r22
    r13 = float(g[0] @ q3)
    r12 = float(g[0] @ q2)
    u1 = g[0] - r13 * q3 - r12 * q2
    r11 = math.sqrt(float(u1 @ u1))
    return (r12 / r22, r13 / t3, r23 / t3, r22 / t3, r11 / r22)


def iwasawa_full(g):
    """(x_mat, y, xi) for n in {2,3}; g = x_mat @ a_y @ xi, xi in SO(n)."""
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    if n == 2:
        x12, y1 = iwasawa2(g)
        x = np.array([[1.0, x12], [0.0, 1.0]])
        y = np.array([y1])
    elif n == 3:
        x12, x13, x23, y1, y2 = iwasawa3(g)
        x = np.array([[1.0, x12, x13], [0.0, 1.0, x23], [0.0, 0.0, 1.0]])
        y = np.array([y1, y2])
    else:
        raise DecompositionError(f"unsupported size {n}")
    a = point_matrix3((x[0, 1], x[0, 2], x[1, 2]), y) if n == 3 \
        else point_matrix2(x[0, 1], y[0])
    xi = np.linalg.solve(a, g)
    return x, y, xi


def log_singular_values(g):
    """Descending log singular values of a det-1 matrix."""
    g = np.asarray(g, dtype=float)
    if not np.all(np.isfinite(g)):
        raise DecompositionError("non-finite input")
    w = np.linalg.eigvalsh(g @ g.T)
    w = np.clip(w, 1e-300, None)
    return 0.5 * np.log(w)[::-1]


def sigma(g):
    """Polar height: Euclidean norm of the log singular values."""
    return float(np.linalg.norm(log_singular_values(g)))


def sigma_batch(mats):
    mats = np.asarray(mats, dtype=float)
    w = np.linalg.eigvalsh(mats @ np.swapaxes(mats, -1, -2))
    w = np.clip(w, 1e-300, None)
    a = 0.5 * np.log(w)
    return np.sqrt((a * a).sum(axis=-1))


def iwasawa_y_batch(mats):
    """Torus coordinates for a stack of det-1 matrices (n = 2 or 3)."""
    mats = np.asarray(mats, dtype=float)
    n = mats.shape[-1]
    if n == 2:
        t2 = np.linalg.norm(mats[..., 1, :], axis=-1)
        return (1.0 / (t2 * t2))[..., None]
    if n == 3:
        t3 = np.linalg.norm(mats[..., 2, :], axis=-1)
        cr = np.cross(mats[..., 1, :], mats[..., 2, :])
        t2 = np.linalg.norm(cr, axis=-1) / t3
        y1 = t2 / t3
        y2 = 1.0 / (t2 * t2 * t3)
        return np.stack([y1, y2], axis=-1)
    raise DecompositionError(f"unsupported size {n}")


# ------------------------------------------------------------- reduction

def reduce2(x, y, cap=10000):
    """Gauss reduction of x + iy; returns (a, b, c, d, x', y', iters)."""
    a, b, c, d = 1, 0, 0, 1
    it = 0
    while it < cap:
        it += 1
        m = math.floor(x + 0.5)
        if m != 0:
            x -= m
            a, b = a - m * c, b - m * d
        r2 = x * x + y * y
        if r2 < 1.0 - 1e-14:
            x, y = -x / r2, y / r2
            a, b, c, d = c, d, -a, -b
        else:
            break
    else:
        raise ReductionError("n=2 reduction exceeded iteration cap")
    # canonical boundary choices: |x| = 1/2 and the unit arc go to x >= 0
    if x < 0 and abs(x * x + y * y - 1.0) < 1e-14:
        r2 = x * x + y * y
        x, y = -x / r2, y / r2
        a, b, c, d = c, d, -a, -b
    if abs(x + 0.5) < 1e-14:
        x += 1.0
        a, b = a + c, b + d
    return a, b, c, d, x, y, it


def membership2(x, y, tol=1e-12):
    return (abs(x) <= 0.5 + tol) and (x * x + y * y >= 1.0 - tol)


def _cholesky3(q):
    l00 = math.sqrt(q[0][0])
    l10 = q[1][0] / l00
    l20 = q[2][0] / l00
    l11 = math.sqrt(q[1][1] - l10 * l10)
    l21 = (q[2][1] - l20 * l10) / l11
    l22 = math.sqrt(q[2][2] - l20 * l20 - l21 * l21)
    return l00, l10, l20, l11, l21, l22


def best_row3(q, bound):
    """Shortest primitive integer row r (lexicographic tie-break) with
    r Q r^T < bound, by Fincke-Pohst enumeration; None when no row exists."""
    l00, l10, l20, l11, l21, l22 = _cholesky3(q)
    # upper-triangular R = L^T: ||R r||^2 with
    # R = [[l00, l10, l20], [0, l11, l21], [0, 0, l22]]
    s = math.sqrt(bound)
    best = None
    best_val = bound
    r2max = int(math.floor(s / l22))
    for r2 in range(-r2max, r2max + 1):
        t2 = l22 * r2
        rem2 = bound - t2 * t2
        if rem2 <= 0:
            continue
        w = math.sqrt(rem2)
        c1 = l21 * r2
        lo1 = int(math.ceil((-w - c1) / l11 - 1e-12))
        hi1 = int(math.floor((w - c1) / l11 + 1e-12))
        for r1 in range(lo1, hi1 + 1):
            t1 = l11 * r1 + c1
            rem1 = rem2 - t1 * t1
            if rem1 <= 0:
                continue
            w0 = math.sqrt(rem1)
            c0 = l10 * r1 + l20 * r2
            lo0 = int(math.ceil((-w0 - c0) / l00 - 1e-12))
            hi0 = int(math.floor((w0 - c0) / l00 + 1e-12))
            for r0 in range(lo0, hi0 + 1):
                if r0 == 0 and r1 == 0:
                    continue
                val = (q[0][0] * r0 * r0 + q[1][1] * r1 * r1
                       + q[2][2] * r2 * r2
                       + 2.0 * (q[1][0] * r0 * r1 + q[2][0] * r0 * r2
                                + q[2][1] * r1 * r2))
                if val < best_val - _EPS_IMPROVE or (
                        best is not None and abs(val - best_val) <= _EPS_IMPROVE
                        and (r0, r1, r2) < best):
                    best_val = val
                    best = (r0, r1, r2)
    return best


def complete_row3(r):
    """An SL(3,Z) matrix with bottom row r (r primitive), Python ints."""
    v = [int(r[0]), int(r[1]), int(r[2])]
    u = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]  # accumulates column operations

    def colop(i, j, qq):  # col_i -= qq * col_j  (acts on v and u)
        v[i] -= qq * v[j]
        for row in u:
            row[i] -= qq * row[j]

    # gcd column operations until only position 2 is nonzero
    while v[0] != 0 or v[1] != 0:
        idx = [k for k in range(3) if v[k] != 0]
        idx.sort(key=lambda k: abs(v[k]))
        j = idx[0]
        moved = False
        for i in range(3):
            if i != j and v[i] != 0:
                qq = round(v[i] / v[j])
                if qq != 0:
                    colop(i, j, qq)
                    moved = True
        if not moved:
            # v[j] is the only nonzero entry; move it to position 2
            if j != 2:
                v[j], v[2] = v[2], v[j]
                for row in u:
                    row[j], row[2] = row[2], row[j]
            break
    if v[2] < 0:
        v[2] = -v[2]
        for row in u:
            row[2] = -row[2]
    if v[2] != 1:
        raise ReductionError(f"row {r} is not primitive")
    # det(u) = +-1; fix sign so det = +1 (negate first column if needed)
    det = (u[0][0] * (u[1][1] * u[2][2] - u[1][2] * u[2][1])
           - u[0][1] * (u[1][0] * u[2][2] - u[1][2] * u[2][0])
           + u[0][2] * (u[1][0] * u[2][1] - u[1][1] * u[2][0]))
    if det == -1:
        for row in u:
            row[0] = -row[0]
    # gamma = u^{-1} (adjugate; det u = 1), bottom row is r
    g = [[u[1][1] * u[2][2] - u[1][2] * u[2][1],
          u[0][2] * u[2][1] - u[0][1] * u[2][2],
          u[0][1] * u[1][2] - u[0][2] * u[1][1]],
         [u[1][2] * u[2][0] - u[1][0] * u[2][2],
          u[0][0] * u[2][2] - u[0][2] * u[2][0],
          u[0][2] * u[1][0] - u[0][0] * u[1][2]],
         [u[1][0] * u[2][1] - u[1][1] * u[2][0],
          u[0][1] * u[2][0] - u[0][0] * u[2][1],
          u[0][0] * u[1][1] - u[0][1] * u[1][0]]]
    return g


_SIGNS3 = (
    ((1, 1, 1), (1, 1, 1)),
    ((-1, -1, 1), (1, -1, -1)),   # diag(-1,-1,1): flips x13, x23
    ((-1, 1, -1), (-1, 1, -1)),   # diag(-1,1,-1): flips x12, x23
    ((1, -1, -1), (-1, -1, 1)),   # diag(1,-1,-1): flips x12, x13
)


def reduce3(g0, cap=10000):
    """Reduce a 3x3 det-1 matrix to the canonical fundamental-domain point.

    Returns (gamma rows as python ints, (x12, x13, x23, Y1, Y2), iters).
    """
    gam = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    g0 = np.asarray(g0, dtype=float)
    trace = []
    last_norm = math.inf
    it = 0
    while True:
        it += 1
        if it > cap:
            raise ReductionError("n=3 reduction exceeded iteration cap",
                                 trace=trace)
        m = np.array(gam, dtype=float) @ g0
        x12, x13, x23, y1, y2 = iwasawa3(m)
        changed = False
        # (i): reduce the upper-left hyperbolic point (x12, Y2)
        a, b, c, d, _, _, _ = reduce2(x12, y2, cap)
        if (a, b, c, d) != (1, 0, 0, 1):
            emb = [[a, b, 0], [c, d, 0], [0, 0, 1]]
            gam = _imul3(emb, gam)
            changed = True
            m = np.array(gam, dtype=float) @ g0
            x12, x13, x23, y1, y2 = iwasawa3(m)
        # (iii): translate the last column into [-1/2, 1/2]
        m13 = math.floor(x13 + 0.5)
        m23 = math.floor(x23 + 0.5)
        if m13 != 0 or m23 != 0:
            tr = [[1, 0, -m13], [0, 1, -m23], [0, 0, 1]]
            gam = _imul3(tr, gam)
            changed = True
            m = np.array(gam, dtype=float) @ g0
            x12, x13, x23, y1, y2 = iwasawa3(m)
        # (ii): look for an integer row shorter than the bottom row
        q = m @ m.T
        bottom = q[2, 2]
        row = best_row3(q.tolist(), bottom * (1.0 - 1e-12))
        if row is not None:
            val = float(np.array(row) @ q @ np.array(row))
            if val >= last_norm * (1.0 + 1e-9) and trace:
                raise ReductionError(
                    "bottom-row norm failed to decrease", trace=trace)
            last_norm = min(last_norm, val)
            trace.append(("row", row, val))
            gam = _imul3(complete_row3(row), gam)
            changed = True
        if not changed:
            break
    # canonical sign normalization: lexicographically smallest x under the
    # diagonal sign flips that preserve the reduction conditions
    m = np.array(gam, dtype=float) @ g0
    coords = iwasawa3(m)
    best_key = (coords[0], coords[1], coords[2])
    best_sign = None
    for diag, flips in _SIGNS3[1:]:
        key = (flips[0] * coords[0], flips[1] * coords[1],
               flips[2] * coords[2])
        if key < best_key:
            best_key = key
            best_sign = diag
    if best_sign is not None:
        s = [[best_sign[0], 0, 0], [0, best_sign[1], 0], [0, 0, best_sign[2]]]
        gam = _imul3(s, gam)
        m = np.array(gam, dtype=float) @ g0
        coords = iwasawa3(m)
    return gam, coords, it


def _imul3(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)]
            for i in range(3)]


def membership3(coords, tol=1e-12):
    """Closure conditions of the fundamental domain for n = 3."""
    x12, x13, x23, y1, y2 = coords
    if abs(x12) > 0.5 + tol or x12 * x12 + y2 * y2 < 1.0 - tol:
        return False
    if abs(x13) > 0.5 + tol or abs(x23) > 0.5 + tol:
        return False
    m = point_matrix3((x12, x13, x23), (y1, y2))
    q = m @ m.T
    return best_row3(q.tolist(), q[2, 2] * (1.0 - max(tol, 1e-12))) is None
