"""Spectral parameters, torus vectors and local data sets.

A spectral parameter is a point of the complexified dual torus of SL(n):
n complex numbers summing to zero.  A LocalDataSet collects one parameter
per place (the archimedean one is mandatory) and is the basic input to the
quasi-Maass machinery and to the certification bounds.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .errors import ConfigError

ZERO_SUM_TOL = 1e-12


class SpectralParameter:
    """n complex numbers with zero sum.

    ``exact`` optionally carries a symbolic form of each entry (used by the
    annihilating-operator exact-vanishing mode); it is opaque here.
    """

    __slots__ = ("ell", "exact")

    def __init__(self, ell, exact=None):
        arr = np.asarray(ell, dtype=complex).reshape(-1)
        if arr.size < 2:
            raise ConfigError("spectral parameter needs at least 2 entries")
        if not np.all(np.isfinite(arr.view(float))):
            raise ConfigError("spectral parameter entries must be finite")
        if abs(arr.sum()) >= ZERO_SUM_TOL:
            raise ConfigError(
                f"spectral parameter entries must sum to zero, got {arr.sum()}"
            )
        self.ell = arr
        self.exact = exact

    @property
    def n(self) -> int:
        return self.ell.size

    def __len__(self) -> int:
        return self.ell.size

    def __iter__(self):
        return iter(self.ell)

    def __getitem__(self, i):
        return self.ell[i]

    def __repr__(self):
        return f"SpectralParameter({list(self.ell)!r})"

    def permuted(self, perm) -> "SpectralParameter":
        """Apply a Weyl-group element (a permutation of the entries)."""
        ex = None
        if self.exact is not None:
            ex = tuple(self.exact[p] for p in perm)
        return SpectralParameter(self.ell[list(perm)], exact=ex)

    def negated(self) -> "SpectralParameter":
        ex = None
        if self.exact is not None:
            ex = tuple(e.neg() for e in self.exact)
        return SpectralParameter(-self.ell, exact=ex)

    def max_abs_re(self) -> float:
        return float(np.max(np.abs(self.ell.real)))


class TorusVector:
    """n reals with zero sum: log-coordinates on the diagonal torus."""

    __slots__ = ("a",)

    def __init__(self, a):
        arr = np.asarray(a, dtype=float).reshape(-1)
        if abs(arr.sum()) >= ZERO_SUM_TOL:
            raise ConfigError(f"torus vector must sum to zero, got {arr.sum()}")
        self.a = arr

    @property
    def n(self) -> int:
        return self.a.size

    def __repr__(self):
        return f"TorusVector({list(self.a)!r})"


def rho(n: int) -> np.ndarray:
    """Half-sum-of-roots shift vector: rho_k = (n - 2k + 1)/2, k = 1..n."""
    return np.array([(n - 2 * k + 1) / 2.0 for k in range(1, n + 1)])


def weyl_permutations(n: int):
    """The Weyl group as entry permutations (tuples acting by ell -> ell[p])."""
    return list(permutations(range(n)))


class LocalDataSet:
    """Parameters for a set of places M = {oo} + finite primes.

    The archimedean parameter must satisfy |Re ell_j| < 1/2 (the unitary
    generic window); finite parameters are unconstrained beyond zero sum.
    """

    def __init__(self, n: int, archimedean: SpectralParameter,
                 finite: dict | None = None):
        if n not in (2, 3):
            raise ConfigError(f"rank n must be 2 or 3, got {n}")
        if archimedean.n != n:
            raise ConfigError("archimedean parameter has wrong length")
        if archimedean.max_abs_re() >= 0.5:
            raise ConfigError(
                "archimedean parameter must satisfy |Re ell_j| < 1/2")
        finite = dict(finite or {})
        for p, par in finite.items():
            if not (isinstance(p, int) and p >= 2 and _is_prime(p)):
                raise ConfigError(f"finite place {p!r} is not a prime")
            if par.n != n:
                raise ConfigError(f"parameter at p={p} has wrong length")
        self.n = n
        self.archimedean = archimedean
        self.finite = finite

    @property
    def primes(self):
        return sorted(self.finite)

    def param(self, place):
        """Parameter at a place; place is 'inf' (or None) or a prime."""
        if place in ("inf", "oo", None):
            return self.archimedean
        try:
            return self.finite[place]
        except KeyError:
            raise ConfigError(f"no parameter at place {place}") from None

    def has_place(self, place) -> bool:
        return place in ("inf", "oo", None) or place in self.finite


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    f = 2
    while f * f <= m:
        if m % f == 0:
            return False
        f += 1
    return True
