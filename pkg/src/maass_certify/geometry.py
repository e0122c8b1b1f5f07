"""Matrix decompositions, polar height, the power function and its
Casimir/Laplace eigenvalues, Haar densities, polar balls and Siegel sets.

Everything here is a pure function; the hot scalar paths delegate to the
selected kernel implementation (see maass_certify.kernels).
"""

from __future__ import annotations

import numpy as np

from . import _kernels_py
from .errors import ConfigError, DecompositionError, UnsupportedRankError
from .kernels import impl as _k
from .params import SpectralParameter, TorusVector, rho

DET_TOL = 1e-10


class GroupElement:
    """A real n x n matrix of determinant one (checked at construction)."""

    __slots__ = ("mat",)

    def __init__(self, mat):
        m = np.asarray(mat, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ConfigError("group element must be a square matrix")
        if not np.all(np.isfinite(m)):
            raise DecompositionError("group element entries must be finite")
        if abs(np.linalg.det(m) - 1.0) >= DET_TOL:
            raise ConfigError(
                f"determinant must be 1 within {DET_TOL}, got "
                f"{np.linalg.det(m)}")
        self.mat = m

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    def inv(self) -> "GroupElement":
        return GroupElement(np.linalg.inv(self.mat))

    def __matmul__(self, other):
        return GroupElement(self.mat @ as_matrix(other))

    def __repr__(self):
        return f"GroupElement({self.mat.tolist()!r})"


def as_matrix(g) -> np.ndarray:
    if isinstance(g, GroupElement):
        return g.mat
    if isinstance(g, IwasawaPoint):
        return g.matrix()
    return np.asarray(g, dtype=float)


class IwasawaPoint:
    """Point x.a_y of the generalized upper half plane.

    x holds the strict upper-triangle entries row by row (1 entry for n=2,
    (x12, x13, x23) for n=3); y holds the n-1 positive torus ratios.
    """

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        n = y.size + 1
        if x.size != n * (n - 1) // 2:
            raise ConfigError("x has wrong number of entries for rank")
        if np.any(y <= 0) or not np.all(np.isfinite(y)) \
                or not np.all(np.isfinite(x)):
            raise ConfigError("torus coordinates must be positive and finite")
        self.x = x
        self.y = y

    @property
    def n(self) -> int:
        return self.y.size + 1

    def matrix(self) -> np.ndarray:
        if self.n == 2:
            return _k.point_matrix2(self.x[0], self.y[0])
        return _k.point_matrix3(tuple(self.x), tuple(self.y))

    def __repr__(self):
        return f"IwasawaPoint(x={self.x.tolist()}, y={self.y.tolist()})"


def iwasawa_decompose(g) -> tuple[IwasawaPoint, GroupElement]:
    """g = x.a_y.xi with xi in SO(n); returns (point, rotation)."""
    m = as_matrix(g)
    x, y, xi = _kernels_py.iwasawa_full(m)
    n = m.shape[0]
    if n == 2:
        pt = IwasawaPoint([x[0, 1]], y)
    else:
        pt = IwasawaPoint([x[0, 1], x[0, 2], x[1, 2]], y)
    return pt, GroupElement(xi)


def iwasawa_point(g) -> IwasawaPoint:
    m = as_matrix(g)
    if m.shape[0] == 2:
        x12, y1 = _k.iwasawa2(m)
        return IwasawaPoint([x12], [y1])
    x12, x13, x23, y1, y2 = _k.iwasawa3(m)
    return IwasawaPoint([x12, x13, x23], [y1, y2])


def polar_height(g) -> float:
    """sqrt(a_1^2 + ... + a_n^2), e^{a_j} the singular values of g."""
    return _k.sigma(as_matrix(g))


def polar_log_singvals(g) -> np.ndarray:
    """Descending log singular values (the polar exponents)."""
    return _k.log_singular_values(as_matrix(g))


def iw_y(g) -> TorusVector:
    """Log-diagonal of the Iwasawa torus part, as a zero-sum vector."""
    m = as_matrix(g)
    n = m.shape[0]
    y = iwasawa_point(m).y
    logs = np.zeros(n)
    # diagonal d_i = prod_{k<=n-i} y_k, then projected to determinant one
    for i in range(n):
        logs[i] = np.log(y[: n - 1 - i]).sum()
    logs -= logs.mean()
    return TorusVector(logs)


def in_ball(g, delta: float) -> bool:
    if delta <= 0:
        raise ConfigError("delta must be positive")
    return polar_height(g) < delta


def siegel_membership(z: IwasawaPoint, a: float, b: float) -> bool:
    """|x_ij| <= b and y_i > a (b may be inf)."""
    if a < 0:
        raise ConfigError("a must be nonnegative")
    return bool(np.all(np.abs(z.x) <= b) and np.all(z.y > a))


def haar_density(y) -> float:
    """The d*y density prod_k y_k^{-k(n-k)-1} at the torus point y."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y <= 0):
        raise ConfigError("torus coordinates must be positive")
    n = y.size + 1
    ks = np.arange(1, n)
    return float(np.prod(y ** (-(ks * (n - ks) + 1.0))))


def phi_exponents(ell: SpectralParameter) -> np.ndarray:
    """Exponent of y_j in the power function: sum_{k<=n-j} (ell_k + rho_k)."""
    n = ell.n
    shifted = ell.ell + rho(n)
    return np.array([shifted[: n - j].sum() for j in range(1, n)])


def phi_ell(ell: SpectralParameter, g) -> complex:
    """The simultaneous eigenfunction prod_j y_j^{...} evaluated at g."""
    y = iwasawa_point(as_matrix(g)).y
    return complex(np.exp(np.dot(phi_exponents(ell), np.log(y))))


def phi_ell_from_y(ell: SpectralParameter, y) -> complex:
    y = np.atleast_1d(np.asarray(y, dtype=float))
    return complex(np.exp(np.dot(phi_exponents(ell), np.log(y))))


def laplace_eigenvalue(ell: SpectralParameter) -> complex:
    """(n+1)/12 - (ell_1^2 + ... + ell_n^2)/(n(n-1))."""
    n = ell.n
    return (n + 1) / 12.0 - (ell.ell ** 2).sum() / (n * (n - 1))


def casimir_eigenvalue(j: int, ell: SpectralParameter) -> complex:
    """Eigenvalue of the degree-(j+1) invariant operator on the power
    function; closed forms derived in scripts/derive_casimir_eigenvalues.py."""
    n = ell.n
    if n not in (2, 3):
        raise UnsupportedRankError(f"rank {n} not supported")
    if not 1 <= j <= n - 1:
        raise ConfigError(f"need 1 <= j <= n-1, got j={j}")
    if j == 1:
        return -laplace_eigenvalue(ell)
    # n = 3, j = 2 on the zero-sum locus: p3/6 + p2/4 - 1/2
    p2 = (ell.ell ** 2).sum()
    p3 = (ell.ell ** 3).sum()
    return p3 / 6.0 + p2 / 4.0 - 0.5


def _elementary_exp(n: int, i: int, j: int, t: float) -> np.ndarray:
    m = np.eye(n)
    if i == j:
        m[i, i] = np.exp(t)
    else:
        m[i, j] = t
    return m


def casimir_apply_fd(fun, g, j: int, h: float = 0.08,
                     richardson: int = 2) -> complex:
    """Apply the degree-(j+1) invariant operator to ``fun`` at g by nested
    central differences of right translations.

    ``fun`` maps a determinant-one matrix to a scalar; it is evaluated on
    det-normalized arguments so the trace-word derivatives along diagonal
    directions make sense.
    """
    from itertools import product as _product
    from math import factorial

    g = as_matrix(g)
    n = g.shape[0]
    pref = factorial(n - j - 1) / factorial(n)

    def fnorm(m):
        d = np.linalg.det(m)
        return fun(m / d ** (1.0 / n))

    def one_pass(hh):
        total = 0.0 + 0.0j
        for idx in _product(range(n), repeat=j + 1):
            pairs = [(idx[a], idx[(a + 1) % (j + 1)]) for a in range(j + 1)]
            acc = 0.0 + 0.0j
            for signs in _product((-1.0, 1.0), repeat=j + 1):
                m = g
                for s, (a, b) in zip(signs, pairs):
                    m = m @ _elementary_exp(n, a, b, s * hh)
                acc += np.prod(signs) * fnorm(m)
            total += acc / (2.0 * hh) ** (j + 1)
        return pref * total

    # Romberg-style extrapolation: the error expansion is in even powers of h
    vals = [one_pass(h / 2.0 ** k) for k in range(richardson + 1)]
    for level in range(1, richardson + 1):
        fac = 4.0 ** level
        vals = [(fac * vals[k + 1] - vals[k]) / (fac - 1.0)
                for k in range(len(vals) - 1)]
    return vals[0]


def laplacian_fd(fun, g, h: float = 0.08, richardson: int = 2) -> complex:
    """Finite-difference Laplacian (minus the degree-2 invariant operator)."""
    return -casimir_apply_fd(fun, g, 1, h=h, richardson=richardson)


def random_group_element(n: int, rng, spread: float = 1.0) -> GroupElement:
    """Seeded random element of SL(n,R) (QR-based, determinant-corrected)."""
    m = rng.normal(size=(n, n), scale=spread) + np.eye(n)
    d = np.linalg.det(m)
    if abs(d) < 1e-8:
        return random_group_element(n, rng, spread)
    if d < 0:
        m[0] = -m[0]
        d = -d
    return GroupElement(m / d ** (1.0 / n))
