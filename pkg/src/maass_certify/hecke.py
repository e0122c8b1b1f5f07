"""Schur polynomials, Satake Hecke eigenvalues, multiplicative coefficient
tables, Hecke coset matrices and the extended operators built from them.

The Schur value S_{k_1..k_{n-1}} is the classical s_lambda with partition
lambda_i = k_i + ... + k_{n-1}, evaluated through the Jacobi-Trudi
determinant of complete homogeneous polynomials (finite at repeated
arguments, where the bialternant ratio is 0/0).  With this indexing the
coefficient table satisfies T_N F = A(N,1,...,1) F and the extended-operator
recursion reproduces the elementary-symmetric eigenvalues.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .domain import apply_integer
from .errors import ConfigError
from .params import LocalDataSet, SpectralParameter


def complete_homogeneous(xs, rmax: int) -> list:
    """h_0..h_rmax of the argument list, by Newton's recurrence."""
    xs = np.asarray(xs, dtype=complex)
    p = [complex((xs ** k).sum()) for k in range(rmax + 1)]
    h = [1.0 + 0.0j]
    for r in range(1, rmax + 1):
        h.append(sum(h[r - i] * p[i] for i in range(1, r + 1)) / r)
    return h


def elementary_symmetric(xs, j: int) -> complex:
    xs = np.asarray(xs, dtype=complex)
    coeffs = np.array([1.0 + 0j])
    for x in xs:
        coeffs = np.convolve(coeffs, np.array([1.0 + 0j, x]))
    if j >= len(coeffs):
        return 0.0 + 0j
    return complex(coeffs[j])


def schur(k, xs) -> complex:
    """S_{k_1..k_{n-1}}(x_1..x_n) via Jacobi-Trudi."""
    k = tuple(int(v) for v in k)
    if any(v < 0 for v in k):
        raise ConfigError("Schur indices must be nonnegative")
    lam = [sum(k[i:]) for i in range(len(k))]
    lam = [v for v in lam if v > 0]
    if not lam:
        return 1.0 + 0j
    m = len(lam)
    h = complete_homogeneous(xs, lam[0] + m)

    def hh(r):
        return h[r] if 0 <= r <= lam[0] + m else 0.0 + 0j

    mat = np.array([[hh(lam[i] - (i + 1) + (j + 1)) for j in range(m)]
                    for i in range(m)])
    return complex(np.linalg.det(mat))


def schur_bialternant(k, xs) -> complex:
    """Raw bialternant ratio (oracle; requires distinct arguments)."""
    k = tuple(int(v) for v in k)
    xs = np.asarray(xs, dtype=complex)
    n = xs.size
    lam = [sum(k[i:]) for i in range(len(k))] + [0]
    num = np.array([[x ** (lam[i] + n - 1 - i) for x in xs] for i in range(n)])
    den = np.array([[x ** (n - 1 - i) for x in xs] for i in range(n)])
    return complex(np.linalg.det(num) / np.linalg.det(den))


def satake_hecke_eigenvalue(j: int, p: int, ell_p: SpectralParameter) -> complex:
    """sum over j-element index sets of p^{-(ell_{r_1}+...+ell_{r_j})}."""
    n = ell_p.n
    if not 1 <= j <= n - 1:
        raise ConfigError(f"need 1 <= j <= n-1, got {j}")
    return elementary_symmetric(float(p) ** (-ell_p.ell), j)


def _factorize(m: int) -> dict:
    out = {}
    f = 2
    while f * f <= m:
        while m % f == 0:
            out[f] = out.get(f, 0) + 1
            m //= f
        f += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


class CoefficientTable:
    """Multiplicative coefficient table of a local data set.

    Prime-power values come from Schur evaluations at the Satake parameters;
    indices touching a prime outside the data set give 0.
    """

    def __init__(self, data_set: LocalDataSet):
        self.data_set = data_set
        self._cache: dict = {}

    def coefficient(self, m) -> complex:
        m = tuple(int(v) for v in m)
        if len(m) != self.data_set.n - 1 or any(v < 1 for v in m):
            raise ConfigError(f"bad Hecke index {m}")
        if m in self._cache:
            return self._cache[m]
        val = 1.0 + 0j
        support = {}
        for slot, mv in enumerate(m):
            for q, e in _factorize(mv).items():
                support.setdefault(q, [0] * len(m))[slot] += e
        for q, k in support.items():
            if q not in self.data_set.finite:
                val = 0.0 + 0j
                break
            xs = float(q) ** (-self.data_set.finite[q].ell)
            val *= schur(k, xs)
        self._cache[m] = val
        return val

    __call__ = coefficient


def hecke_cosets(n: int, N: int) -> list:
    """All integer upper-triangular matrices with positive diagonal product N
    and entries 0 <= c_ij < c_i, in a fixed deterministic order."""
    if N < 1:
        raise ConfigError("N must be a positive integer")

    def diag_tuples(rem, parts):
        if parts == 1:
            yield (rem,)
            return
        for d in range(1, rem + 1):
            if rem % d == 0:
                for rest in diag_tuples(rem // d, parts - 1):
                    yield (d,) + rest

    out = []
    for diag in sorted(diag_tuples(N, n)):
        ranges = []
        for i in range(n):
            for _ in range(i + 1, n):
                ranges.append(range(diag[i]))
        for uppers in product(*ranges):
            m = np.zeros((n, n), dtype=np.int64)
            pos = 0
            for i in range(n):
                m[i, i] = diag[i]
                for j in range(i + 1, n):
                    m[i, j] = uppers[pos]
                    pos += 1
            out.append(m)
    return out


def coset_count(n: int, N: int) -> int:
    """len(hecke_cosets(n, N)) without materializing the matrices."""
    if N < 1:
        raise ConfigError("N must be a positive integer")

    def rec(rem, parts):
        if parts == 1:
            return 1
        total = 0
        for d in range(1, rem + 1):
            if rem % d == 0:
                total += d ** (parts - 1) * rec(rem // d, parts - 1)
        return total

    return rec(N, n)


def apply_T_N(f, N: int, z) -> complex:
    """N^{-(n-1)/2} sum over cosets of f(gamma z), projective action."""
    n = z.n
    total = 0.0 + 0j
    for gamma in hecke_cosets(n, N):
        total += f(apply_integer(gamma, z))
    return total * float(N) ** (-(n - 1) / 2.0)


def t_pj_expansion(j: int) -> dict:
    """The extended operator as a polynomial in the T_{p^r}.

    Returns {sorted tuple of exponents r: integer coefficient}, meaning
    sum over monomials of coeff * prod_r T_{p^r}.
    """
    if j < 0:
        raise ConfigError("j must be nonnegative")
    table = [{(): 1}]
    for jj in range(1, j + 1):
        acc: dict = {}
        for k in range(jj):
            sign = (-1) ** k
            for mono, c in table[jj - k - 1].items():
                key = tuple(sorted(mono + (k + 1,)))
                acc[key] = acc.get(key, 0) + sign * c
        table.append({m: c for m, c in acc.items() if c != 0})
    return table[j]


def t_pj_eigenvalue(j: int, p: int, ell_p: SpectralParameter) -> complex:
    """Spectral value of the extended operator from the expansion and the
    prime-power coefficients (equals the elementary-symmetric eigenvalue)."""
    n = ell_p.n
    xs = float(p) ** (-ell_p.ell)
    val = 0.0 + 0j
    for mono, c in t_pj_expansion(j).items():
        term = complex(c)
        for r in mono:
            term *= schur((r,) + (0,) * (n - 2), xs)
        val += term
    return val


def sharp_T(n: int, q: int, j: int) -> int:
    """Size of the generating matrix set of the extended operator: sum over
    expansion monomials of the product of coset counts."""
    total = 0
    for mono, c in t_pj_expansion(j).items():
        size = 1
        for r in mono:
            size *= coset_count(n, q ** r)
        total += abs(c) * size
    return total


def hecke_generating_matrices(n: int, q: int, j: int) -> list:
    """Matrices generating the extended operator by left translations:
    the union over expansion monomials of products of coset matrices."""
    out = []
    for mono, _ in sorted(t_pj_expansion(j).items()):
        factors = [hecke_cosets(n, q ** r) for r in mono]
        if not factors:
            out.append(np.eye(n, dtype=np.int64))
            continue
        for combo in product(*factors):
            m = combo[0]
            for g in combo[1:]:
                m = m @ g
            out.append(m)
    return out


def verify_multiplicativity(ell_p: SpectralParameter, p: int,
                            max_exp: int = 3) -> dict:
    """Check the coefficient relation on prime-power indices up to max_exp.

    A(m,1,..,1) A(m_1,..,m_{n-1}) = sum over c_1...c_n = m, c_j | m_j of
    A(m_1 c_n / c_1, ..., m_j c_{j-1} / c_j, ...).
    """
    if max_exp > 4:
        raise ConfigError("max_exp capped at 4")
    n = ell_p.n
    xs = float(p) ** (-ell_p.ell)

    def A(exps):
        return schur(exps, xs)

    worst = 0.0
    checks = 0
    for a0 in range(max_exp + 1):
        for aa in product(range(max_exp + 1), repeat=n - 1):
            lhs = A((a0,) + (0,) * (n - 2)) * A(aa)
            rhs = 0.0 + 0j
            for bb in product(*[range(min(a0, aj) + 1) for aj in aa]):
                used = sum(bb)
                if used > a0:
                    continue
                bn = a0 - used
                slots = [aa[0] + bn - bb[0]]
                for jj in range(1, n - 1):
                    slots.append(aa[jj] + bb[jj - 1] - bb[jj])
                rhs += A(tuple(slots))
            worst = max(worst, abs(lhs - rhs))
            checks += 1
    return {"p": p, "max_exp": max_exp, "checks": checks,
            "max_deviation": worst}
