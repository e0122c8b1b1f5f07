"""Exact reduction to the fundamental domain for n = 2, 3.

reduce() returns the unique SL(n,Z) element carrying z to the canonical
representative; membership() tests the closed reduction conditions (or,
with closure=False, agreement with the canonical representative) and
in_tilde_F() detects the parabolic saturation of the domain.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError, UnsupportedRankError
from .geometry import IwasawaPoint, as_matrix, iwasawa_point
from .kernels import impl as _k


class ReductionResult:
    """gamma in SL(n,Z) together with the reduced point gamma.z."""

    __slots__ = ("gamma", "reduced", "iterations")

    def __init__(self, gamma, reduced, iterations):
        self.gamma = np.asarray(gamma, dtype=object)
        self.reduced = reduced
        self.iterations = iterations

    @property
    def gamma_float(self) -> np.ndarray:
        return self.gamma.astype(float)

    def is_identity(self) -> bool:
        n = self.reduced.n
        return all(self.gamma[i][j] == (1 if i == j else 0)
                   for i in range(n) for j in range(n))

    def __repr__(self):
        return (f"ReductionResult(gamma={self.gamma.tolist()}, "
                f"reduced={self.reduced!r})")


def reduce(z, cap: int = 10000) -> ReductionResult:
    """Canonical fundamental-domain reduction of a point (or matrix)."""
    if isinstance(z, IwasawaPoint):
        pt = z
    else:
        pt = iwasawa_point(as_matrix(z))
    n = pt.n
    if n == 2:
        a, b, c, d, x, y, it = _k.reduce2(float(pt.x[0]), float(pt.y[0]), cap)
        gamma = [[a, b], [c, d]]
        red = IwasawaPoint([x], [y])
    elif n == 3:
        gamma, coords, it = _k.reduce3(pt.matrix(), cap)
        red = IwasawaPoint(coords[:3], coords[3:])
    else:
        raise UnsupportedRankError(f"rank {n} not supported")
    return ReductionResult(gamma, red, it)


def membership(z: IwasawaPoint, closure: bool = True, tol: float = 1e-12,
               cap: int = 10000) -> bool:
    """closure=True: the closed reduction conditions; closure=False: the
    point equals its own canonical representative."""
    n = z.n
    if n == 2:
        ok = _k.membership2(float(z.x[0]), float(z.y[0]), tol)
    elif n == 3:
        ok = _k.membership3(
            (float(z.x[0]), float(z.x[1]), float(z.x[2]),
             float(z.y[0]), float(z.y[1])), tol)
    else:
        raise UnsupportedRankError(f"rank {n} not supported")
    if not ok or closure:
        return ok
    res = reduce(z, cap)
    same = (np.allclose(res.reduced.x, z.x, atol=1e-9)
            and np.allclose(res.reduced.y, z.y, rtol=1e-9))
    return res.is_identity() or same


def in_tilde_F(z: IwasawaPoint, cap: int = 10000) -> bool:
    """True iff a parabolic element (SL(n-1,Z) block plus integer last
    column) carries z into the fundamental domain: equivalently, the
    reducing gamma has bottom row (0, ..., 0, +-1)."""
    res = reduce(z, cap)
    n = z.n
    return all(res.gamma[n - 1][j] == 0 for j in range(n - 1))


def apply_integer(gamma, z: IwasawaPoint) -> IwasawaPoint:
    """Left action of an integer (or real, det > 0) matrix on a point."""
    g = np.asarray(gamma, dtype=float)
    det = np.linalg.det(g)
    if det <= 0:
        raise ConfigError("matrix acting on the upper half plane needs det>0")
    m = (g / det ** (1.0 / g.shape[0])) @ z.matrix()
    return iwasawa_point(m)
