# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled geometry kernels: same API as _kernels_py, C inner loops.

The batch helpers are already vectorized numpy and are re-exported from the
pure module unchanged.
"""

from libc.math cimport sqrt, log, floor, fabs, hypot, INFINITY

import numpy as np

from .errors import DecompositionError, ReductionError
from ._kernels_py import (
    sigma_batch, iwasawa_y_batch, iwasawa_full, point_matrix2, point_matrix3,
)

IS_COMPILED = True

cdef double _EPS_IMPROVE = 1e-12


cdef inline void _mat3(object g, double[3][3] m) except *:
    cdef double[:, :] v = np.ascontiguousarray(g, dtype=np.float64)
    cdef int i, j
    for i in range(3):
        for j in range(3):
            m[i][j] = v[i, j]


def iwasawa2(g):
    cdef double[:, :] v = np.ascontiguousarray(g, dtype=np.float64)
    cdef double t2, q0, q1, r12, u0, u1, r11
    t2 = hypot(v[1, 0], v[1, 1])
    if not (t2 > 0):
        raise DecompositionError("singular or non-finite input")
    q0 = v[1, 0] / t2
    q1 = v[1, 1] / t2
    r12 = v[0, 0] * q0 + v[0, 1] * q1
    u0 = v[0, 0] - r12 * q0
    u1 = v[0, 1] - r12 * q1
    r11 = hypot(u0, u1)
    return r12 / t2, r11 / t2


cdef int _iwasawa3_c(double[3][3] m, double* out) except -1:
    # out: x12, x13, x23, Y1, Y2
    cdef double t3, r23, r22, r13, r12, r11
    cdef double q3[3]
    cdef double q2[3]
    cdef double u[3]
    cdef int k
    t3 = sqrt(m[2][0] * m[2][0] + m[2][1] * m[2][1] + m[2][2] * m[2][2])
    if not (t3 > 0):
        raise DecompositionError("singular or non-finite input")
    for k in range(3):
        q3[k] = m[2][k] / t3
    r23 = m[1][0] * q3[0] + m[1][1] * q3[1] + m[1][2] * q3[2]
    for k in range(3):
        u[k] = m[1][k] - r23 * q3[k]
    r22 = sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2])
    if not (r22 > 0):
        raise DecompositionError("rank-deficient input")
    for k in range(3):
        q2[k] = u[k] / r22
    r13 = m[0][0] * q3[0] + m[0][1] * q3[1] + m[0][2] * q3[2]
    r12 = m[0][0] * q2[0] + m[0][1] * q2[1] + m[0][2] * q2[2]
    for k in range(3):
        u[k] = m[0][k] - r13 * q3[k] - r12 * q2[k]
    r11 = sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2])
    out[0] = r12 / r22
    out[1] = r13 / t3
    out[2] = r23 / t3
    out[3] = r22 / t3
    out[4] = r11 / r22
    return 0


def iwasawa3(g):
    cdef double[3][3] m
    cdef double out[5]
    _mat3(g, m)
    _iwasawa3_c(m, out)
    return out[0], out[1], out[2], out[3], out[4]


cdef void _eig_sym3(double[3][3] a, double* w):
    # Jacobi iteration for a symmetric 3x3 matrix; eigenvalues into w
    cdef double b[3][3]
    cdef int i, j, p, q, it
    cdef double off, theta, t, c, s, apq, app, aqq, aip, aiq
    for i in range(3):
        for j in range(3):
            b[i][j] = a[i][j]
    for it in range(64):
        off = fabs(b[0][1]) + fabs(b[0][2]) + fabs(b[1][2])
        if off < 1e-300:
            break
        for p in range(2):
            for q in range(p + 1, 3):
                apq = b[p][q]
                if fabs(apq) < 1e-300:
                    continue
                theta = (b[q][q] - b[p][p]) / (2.0 * apq)
                if theta >= 0:
                    t = 1.0 / (theta + sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + sqrt(1.0 + theta * theta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                app = b[p][p]
                aqq = b[q][q]
                b[p][p] = app - t * apq
                b[q][q] = aqq + t * apq
                b[p][q] = 0.0
                b[q][p] = 0.0
                for i in range(3):
                    if i != p and i != q:
                        aip = b[i][p]
                        aiq = b[i][q]
                        b[i][p] = c * aip - s * aiq
                        b[p][i] = b[i][p]
                        b[i][q] = c * aiq + s * aip
                        b[q][i] = b[i][q]
    w[0] = b[0][0]
    w[1] = b[1][1]
    w[2] = b[2][2]
    # sort descending
    cdef double tmp
    if w[0] < w[1]:
        tmp = w[0]; w[0] = w[1]; w[1] = tmp
    if w[1] < w[2]:
        tmp = w[1]; w[1] = w[2]; w[2] = tmp
    if w[0] < w[1]:
        tmp = w[0]; w[0] = w[1]; w[1] = tmp


def log_singular_values(g):
    cdef double[:, :] v = np.ascontiguousarray(g, dtype=np.float64)
    cdef int n = v.shape[0]
    cdef double[3][3] m, gg
    cdef double w[3]
    cdef double a, b, c, disc, l1, l2
    cdef int i, j, k
    for i in range(n):
        for j in range(n):
            if not (v[i, j] == v[i, j] and -INFINITY < v[i, j] < INFINITY):
                raise DecompositionError("non-finite input")
    if n == 2:
        a = v[0, 0] * v[0, 0] + v[0, 1] * v[0, 1]
        b = v[0, 0] * v[1, 0] + v[0, 1] * v[1, 1]
        c = v[1, 0] * v[1, 0] + v[1, 1] * v[1, 1]
        disc = sqrt(0.25 * (a - c) * (a - c) + b * b)
        l1 = 0.5 * (a + c) + disc
        l2 = 0.5 * (a + c) - disc
        if l1 < 1e-300: l1 = 1e-300
        if l2 < 1e-300: l2 = 1e-300
        return np.array([0.5 * log(l1), 0.5 * log(l2)])
    if n == 3:
        _mat3(g, m)
        for i in range(3):
            for j in range(3):
                gg[i][j] = 0.0
                for k in range(3):
                    gg[i][j] += m[i][k] * m[j][k]
        _eig_sym3(gg, w)
        for i in range(3):
            if w[i] < 1e-300:
                w[i] = 1e-300
        return np.array([0.5 * log(w[0]), 0.5 * log(w[1]), 0.5 * log(w[2])])
    raise DecompositionError("unsupported size")


def sigma(g):
    a = log_singular_values(g)
    cdef double s = 0.0
    for v in a:
        s += v * v
    return sqrt(s)


def reduce2(double x, double y, long cap=10000):
    cdef long a = 1, b = 0, c = 0, d = 1, it = 0, m, ta, tb
    cdef double r2
    while it < cap:
        it += 1
        m = <long>floor(x + 0.5)
        if m != 0:
            x -= m
            a -= m * c
            b -= m * d
        r2 = x * x + y * y
        if r2 < 1.0 - 1e-14:
            x = -x / r2
            y = y / r2
            ta = a; tb = b
            a = c; b = d; c = -ta; d = -tb
        else:
            break
    else:
        raise ReductionError("n=2 reduction exceeded iteration cap")
    if x < 0 and fabs(x * x + y * y - 1.0) < 1e-14:
        r2 = x * x + y * y
        x = -x / r2
        y = y / r2
        ta = a; tb = b
        a = c; b = d; c = -ta; d = -tb
    if fabs(x + 0.5) < 1e-14:
        x += 1.0
        a += c
        b += d
    return a, b, c, d, x, y, it


def membership2(double x, double y, double tol=1e-12):
    return (fabs(x) <= 0.5 + tol) and (x * x + y * y >= 1.0 - tol)


cdef int _best_row3_c(double[3][3] q, double bound, long* rout) except -1:
    # returns 1 and fills rout when an improving row exists, else 0
    cdef double l00, l10, l20, l11, l21, l22, s, w, w0, c1, c0
    cdef double best_val, val, t1, t2
    cdef long r0, r1, r2, r2max, lo1, hi1, lo0, hi0
    cdef int found = 0
    l00 = sqrt(q[0][0])
    l10 = q[1][0] / l00
    l20 = q[2][0] / l00
    l11 = sqrt(q[1][1] - l10 * l10)
    l21 = (q[2][1] - l20 * l10) / l11
    l22 = sqrt(q[2][2] - l20 * l20 - l21 * l21)
    s = sqrt(bound)
    best_val = bound
    r2max = <long>floor(s / l22)
    for r2 in range(-r2max, r2max + 1):
        t2 = l22 * r2
        if bound - t2 * t2 <= 0:
            continue
        w = sqrt(bound - t2 * t2)
        c1 = l21 * r2
        lo1 = <long>(floor((-w - c1) / l11 - 1e-12)) + 1
        hi1 = <long>floor((w - c1) / l11 + 1e-12)
        for r1 in range(lo1, hi1 + 1):
            t1 = l11 * r1 + c1
            if bound - t2 * t2 - t1 * t1 <= 0:
                continue
            w0 = sqrt(bound - t2 * t2 - t1 * t1)
            c0 = l10 * r1 + l20 * r2
            lo0 = <long>(floor((-w0 - c0) / l00 - 1e-12)) + 1
            hi0 = <long>floor((w0 - c0) / l00 + 1e-12)
            for r0 in range(lo0, hi0 + 1):
                if r0 == 0 and r1 == 0:
                    continue
                val = (q[0][0] * r0 * r0 + q[1][1] * r1 * r1
                       + q[2][2] * r2 * r2
                       + 2.0 * (q[1][0] * r0 * r1 + q[2][0] * r0 * r2
                                + q[2][1] * r1 * r2))
                if val < best_val - _EPS_IMPROVE or (
                        found and fabs(val - best_val) <= _EPS_IMPROVE
                        and (r0 < rout[0] or (r0 == rout[0] and (
                            r1 < rout[1] or (r1 == rout[1]
                                             and r2 < rout[2]))))):
                    best_val = val
                    rout[0] = r0
                    rout[1] = r1
                    rout[2] = r2
                    found = 1
    return found


def best_row3(q, double bound):
    cdef double[3][3] qc
    cdef long r[3]
    cdef int i, j
    for i in range(3):
        for j in range(3):
            qc[i][j] = q[i][j]
    if _best_row3_c(qc, bound, r):
        return (r[0], r[1], r[2])
    return None


cdef long _round_div(long a, long b):
    # nearest integer to a/b (ties toward +inf), exact in integers
    cdef long qq = a // b
    cdef long r = a - qq * b
    if 2 * r >= b if b > 0 else 2 * r <= b:
        qq += 1
    return qq


def complete_row3(r):
    cdef long v[3]
    cdef long u[3][3]
    cdef long g[3][3]
    cdef int i, j, moved
    cdef long qq, det, tmp
    for i in range(3):
        v[i] = r[i]
        for j in range(3):
            u[i][j] = 1 if i == j else 0
    while v[0] != 0 or v[1] != 0:
        # j = index of smallest nonzero |v|
        j = -1
        for i in range(3):
            if v[i] != 0 and (j < 0 or (v[i] if v[i] > 0 else -v[i])
                              < (v[j] if v[j] > 0 else -v[j])):
                j = i
        moved = 0
        for i in range(3):
            if i != j and v[i] != 0:
                qq = _round_div(v[i], v[j])
                if qq != 0:
                    v[i] -= qq * v[j]
                    u[0][i] -= qq * u[0][j]
                    u[1][i] -= qq * u[1][j]
                    u[2][i] -= qq * u[2][j]
                    moved = 1
        if not moved:
            if j != 2:
                tmp = v[j]; v[j] = v[2]; v[2] = tmp
                for i in range(3):
                    tmp = u[i][j]; u[i][j] = u[i][2]; u[i][2] = tmp
            break
    if v[2] < 0:
        v[2] = -v[2]
        for i in range(3):
            u[i][2] = -u[i][2]
    if v[2] != 1:
        raise ReductionError(f"row {r} is not primitive")
    det = (u[0][0] * (u[1][1] * u[2][2] - u[1][2] * u[2][1])
           - u[0][1] * (u[1][0] * u[2][2] - u[1][2] * u[2][0])
           + u[0][2] * (u[1][0] * u[2][1] - u[1][1] * u[2][0]))
    if det == -1:
        for i in range(3):
            u[i][0] = -u[i][0]
    g[0][0] = u[1][1] * u[2][2] - u[1][2] * u[2][1]
    g[0][1] = u[0][2] * u[2][1] - u[0][1] * u[2][2]
    g[0][2] = u[0][1] * u[1][2] - u[0][2] * u[1][1]
    g[1][0] = u[1][2] * u[2][0] - u[1][0] * u[2][2]
    g[1][1] = u[0][0] * u[2][2] - u[0][2] * u[2][0]
    g[1][2] = u[0][2] * u[1][0] - u[0][0] * u[1][2]
    g[2][0] = u[1][0] * u[2][1] - u[1][1] * u[2][0]
    g[2][1] = u[0][1] * u[2][0] - u[0][0] * u[2][1]
    g[2][2] = u[0][0] * u[1][1] - u[0][1] * u[1][0]
    return [[g[0][0], g[0][1], g[0][2]],
            [g[1][0], g[1][1], g[1][2]],
            [g[2][0], g[2][1], g[2][2]]]


cdef void _imul3_c(long a[3][3], long b[3][3], long out[3][3]):
    cdef int i, j, k
    for i in range(3):
        for j in range(3):
            out[i][j] = 0
            for k in range(3):
                out[i][j] += a[i][k] * b[k][j]


def reduce3(g0, long cap=10000):
    cdef double[:, :] gv = np.ascontiguousarray(g0, dtype=np.float64)
    cdef long gam[3][3]
    cdef long tmp3[3][3]
    cdef long emb[3][3]
    cdef long row[3]
    cdef double[3][3] m, q
    cdef double co[5]
    cdef double last_norm = INFINITY, bottom, val, bk0, bk1, bk2, k0, k1, k2
    cdef long it = 0, m13, m23, a, b, c, d
    cdef int i, j, k, changed, nrows, best_s
    cdef long ov
    for i in range(3):
        for j in range(3):
            gam[i][j] = 1 if i == j else 0
    while True:
        it += 1
        if it > cap:
            raise ReductionError("n=3 reduction exceeded iteration cap")
        _refresh(gam, gv, m)
        _iwasawa3_c(m, co)
        changed = 0
        # (i) reduce the hyperbolic point (x12, Y2)
        res = reduce2(co[0], co[4], cap)
        a = res[0]; b = res[1]; c = res[2]; d = res[3]
        if a != 1 or b != 0 or c != 0 or d != 1:
            emb[0][0] = a; emb[0][1] = b; emb[0][2] = 0
            emb[1][0] = c; emb[1][1] = d; emb[1][2] = 0
            emb[2][0] = 0; emb[2][1] = 0; emb[2][2] = 1
            _imul3_c(emb, gam, tmp3)
            _copy3(tmp3, gam)
            changed = 1
            _refresh(gam, gv, m)
            _iwasawa3_c(m, co)
        # (iii) translate last column
        m13 = <long>floor(co[1] + 0.5)
        m23 = <long>floor(co[2] + 0.5)
        if m13 != 0 or m23 != 0:
            emb[0][0] = 1; emb[0][1] = 0; emb[0][2] = -m13
            emb[1][0] = 0; emb[1][1] = 1; emb[1][2] = -m23
            emb[2][0] = 0; emb[2][1] = 0; emb[2][2] = 1
            _imul3_c(emb, gam, tmp3)
            _copy3(tmp3, gam)
            changed = 1
            _refresh(gam, gv, m)
            _iwasawa3_c(m, co)
        # (ii) improving integer row
        for i in range(3):
            for j in range(3):
                q[i][j] = 0.0
                for k in range(3):
                    q[i][j] += m[i][k] * m[j][k]
        bottom = q[2][2]
        if _best_row3_c(q, bottom * (1.0 - 1e-12), row):
            val = (q[0][0] * row[0] * row[0] + q[1][1] * row[1] * row[1]
                   + q[2][2] * row[2] * row[2]
                   + 2.0 * (q[1][0] * row[0] * row[1]
                            + q[2][0] * row[0] * row[2]
                            + q[2][1] * row[1] * row[2]))
            if val >= last_norm * (1.0 + 1e-9) and it > 1:
                raise ReductionError("bottom-row norm failed to decrease")
            if val < last_norm:
                last_norm = val
            comp = complete_row3((row[0], row[1], row[2]))
            for i in range(3):
                for j in range(3):
                    emb[i][j] = comp[i][j]
            _imul3_c(emb, gam, tmp3)
            _copy3(tmp3, gam)
            changed = 1
        if not changed:
            break
    _refresh(gam, gv, m)
    _iwasawa3_c(m, co)
    # canonical sign normalization over the four diagonal sign flips
    bk0 = co[0]; bk1 = co[1]; bk2 = co[2]
    best_s = 0
    for i in range(1, 4):
        if i == 1:
            k0 = co[0]; k1 = -co[1]; k2 = -co[2]
        elif i == 2:
            k0 = -co[0]; k1 = co[1]; k2 = -co[2]
        else:
            k0 = -co[0]; k1 = -co[1]; k2 = co[2]
        if (k0 < bk0 or (k0 == bk0 and (k1 < bk1 or
                                        (k1 == bk1 and k2 < bk2)))):
            bk0 = k0; bk1 = k1; bk2 = k2
            best_s = i
    if best_s != 0:
        if best_s == 1:
            emb[0][0] = -1; emb[1][1] = -1; emb[2][2] = 1
        elif best_s == 2:
            emb[0][0] = -1; emb[1][1] = 1; emb[2][2] = -1
        else:
            emb[0][0] = 1; emb[1][1] = -1; emb[2][2] = -1
        emb[0][1] = emb[0][2] = emb[1][0] = emb[1][2] = 0
        emb[2][0] = emb[2][1] = 0
        _imul3_c(emb, gam, tmp3)
        _copy3(tmp3, gam)
        _refresh(gam, gv, m)
        _iwasawa3_c(m, co)
    # overflow guard for the int64 accumulation
    for i in range(3):
        for j in range(3):
            ov = gam[i][j]
            if ov > 4611686018427387904 or ov < -4611686018427387904:
                raise ReductionError("gamma coefficient overflow")
    return ([[gam[0][0], gam[0][1], gam[0][2]],
             [gam[1][0], gam[1][1], gam[1][2]],
             [gam[2][0], gam[2][1], gam[2][2]]],
            (co[0], co[1], co[2], co[3], co[4]), it)


cdef void _copy3(long a[3][3], long b[3][3]):
    cdef int i, j
    for i in range(3):
        for j in range(3):
            b[i][j] = a[i][j]


cdef void _refresh(long gam[3][3], double[:, :] g0, double[3][3] m):
    cdef int i, j, k
    for i in range(3):
        for j in range(3):
            m[i][j] = 0.0
            for k in range(3):
                m[i][j] += gam[i][k] * g0[k, j]


def membership3(coords, double tol=1e-12):
    cdef double x12 = coords[0], x13 = coords[1], x23 = coords[2]
    cdef double y1 = coords[3], y2 = coords[4]
    cdef double[3][3] q
    cdef long row[3]
    cdef int i, j, k
    if fabs(x12) > 0.5 + tol or x12 * x12 + y2 * y2 < 1.0 - tol:
        return False
    if fabs(x13) > 0.5 + tol or fabs(x23) > 0.5 + tol:
        return False
    mm = point_matrix3((x12, x13, x23), (y1, y2))
    cdef double[:, :] mv = np.ascontiguousarray(mm, dtype=np.float64)
    for i in range(3):
        for j in range(3):
            q[i][j] = 0.0
            for k in range(3):
                q[i][j] += mv[i, k] * mv[j, k]
    cdef double t = tol if tol > 1e-12 else 1e-12
    return _best_row3_c(q, q[2][2] * (1.0 - t), row) == 0
