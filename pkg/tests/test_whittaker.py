import math

import numpy as np
import pytest

from maass_certify import geometry as G
from maass_certify import whittaker as W
from maass_certify.bessel import besselk, gamma_c
from maass_certify.errors import ConfigError
from maass_certify.geometry import IwasawaPoint
from maass_certify.params import SpectralParameter

TWO_PI = 2.0 * math.pi


def test_besselk_against_mpmath():
    import mpmath as mp
    mp.mp.dps = 25
    worst = 0.0
    for nu in (0.0, 0.4, 2.0, 9j, 0.3 + 4j, 0.45 - 2j):
        for x in (0.05, 0.3, 1.0, 6.3, 30.0, 200.0):
            ours = besselk(nu, x)
            ref = complex(mp.besselk(mp.mpc(nu), x))
            err = abs(ours - ref) / (abs(ref) + 1e-280)
            if abs(ref) > 1e-250:
                worst = max(worst, min(err, abs(ours - ref) * 1e12))
    assert worst < 1e-8


def test_jacquet_constant_matches_gamma_formula(rng):
    # oracle: the exact Fourier pair gives c(ell) = 2 pi^s / Gamma(s)
    for _ in range(6):
        re = rng.uniform(-0.4, 0.45)
        im = rng.uniform(-6, 6)
        ell = SpectralParameter([re + 1j * im, -re - 1j * im])
        c = W.jacquet_constant_n2(ell)
        s = complex(ell.ell[0]) + 0.5
        exact = 2.0 * math.pi ** s / gamma_c(s)
        assert abs(c - exact) / abs(exact) < 1e-8


def test_closed_form_matches_defining_integral(rng):
    ell = SpectralParameter([0.3, -0.3])
    c = W.jacquet_constant_n2(ell)
    for y in np.linspace(0.25, 4.0, 20):
        direct = W.jacquet_integral_n2(ell, float(y))
        closed = c * math.sqrt(y) * besselk(0.3, TWO_PI * y)
        # quadrature of the defining integral has an absolute noise floor
        assert abs(direct - closed) <= 1e-6 * abs(closed) + 1e-12


def test_translation_covariance_n2():
    ell = SpectralParameter([0.25j, -0.25j])
    y = 1.3
    base = W.whittaker_eval(W.WhittakerQuery(IwasawaPoint([0.0], [y]), ell))
    # integer translation leaves the value unchanged (period-1 covariance)
    one = W.whittaker_eval(W.WhittakerQuery(IwasawaPoint([1.0], [y]), ell))
    assert abs(base - one) < 1e-12 * abs(base)
    # generic translation multiplies by the character
    x = 0.37
    got = W.whittaker_eval(W.WhittakerQuery(IwasawaPoint([x], [y]), ell))
    assert abs(got - base * np.exp(-2j * math.pi * x)) < 1e-12 * abs(base)


def test_decay_n2():
    ell = SpectralParameter([0.0, 0.0])
    w4 = abs(W.whittaker_eval(W.WhittakerQuery(IwasawaPoint([0.0], [4.0]),
                                               ell)))
    w8 = abs(W.whittaker_eval(W.WhittakerQuery(IwasawaPoint([0.0], [8.0]),
                                               ell)))
    assert w8 < w4 * math.exp(-TWO_PI * 4) * 100  # exponential decay
    assert w8 < w4


def test_eigenfunction_n2(rng):
    ell = SpectralParameter([0.2 + 1.1j, -0.2 - 1.1j])
    lam = G.laplace_eigenvalue(ell)

    def fun(m):
        return W.whittaker_eval(W.WhittakerQuery(m, ell, 1))

    for _ in range(4):
        g = IwasawaPoint([rng.uniform(-0.4, 0.4)],
                         [rng.uniform(0.7, 1.6)]).matrix()
        w0 = fun(g)
        fd = G.laplacian_fd(fun, g, h=0.05, richardson=2)
        assert abs(fd - lam * w0) <= 1e-4 * abs(lam * w0)


def test_conjugation_n2():
    t = 2.1
    ell = SpectralParameter([1j * t, -1j * t])
    rev = SpectralParameter([-np.conj(v) for v in ell.ell[::-1]])
    # on the torus the character phase is trivial and the conjugation
    # symmetry holds with the same sign
    za = IwasawaPoint([0.0], [1.2])
    a = W.whittaker_eval(W.WhittakerQuery(za, ell))
    b = W.whittaker_eval(W.WhittakerQuery(za, rev))
    assert abs(b - np.conj(a)) < 1e-10 * abs(a)
    # off the torus the character sign flips under conjugation
    zb = IwasawaPoint([0.3], [1.2])
    a = W.whittaker_eval(W.WhittakerQuery(zb, ell, 1))
    b = W.whittaker_eval(W.WhittakerQuery(zb, rev, -1))
    assert abs(b - np.conj(a)) < 1e-10 * abs(a)


def test_unitary_window_enforced():
    with pytest.raises(ConfigError):
        W.whittaker_eval(W.WhittakerQuery(
            IwasawaPoint([0.0], [1.0]), SpectralParameter([0.6, -0.6])))


# ------------------------------------------------------------------ n = 3

ELL3 = SpectralParameter([0.8j, 0.25j, -1.05j])


def test_gl3_reduction_chain_identities(rng):
    """Every exact step of the Jacquet-integral reduction, numerically."""
    from scipy.integrate import quad

    # the integrand structure phi(w u a) = d2^{-(1+l12)} d3^{-(1+l23)}
    l = rng.normal(size=3)
    l -= l.mean()
    ell = SpectralParameter(l)
    w = np.array([[0, 0, -1], [0, 1, 0], [1, 0, 0]], dtype=float)
    u = np.array([[1, 0.7, -0.3], [0, 1, 0.45], [0, 0, 1]])
    a = np.diag([1.2, 0.8, 1 / (1.2 * 0.8)])
    g = w @ u @ a
    r2, r3 = g[1], g[2]
    d3 = np.linalg.norm(r3)
    d2 = np.linalg.norm(np.cross(r2, r3))
    pred = d2 ** (-(1 + l[0] - l[1])) * d3 ** (-(1 + l[1] - l[2]))
    assert abs(G.phi_ell(ell, g) - pred) < 1e-12 * abs(pred)

    # Fourier-Bessel pair
    s = 0.9 + 0.35j
    aa = 1.3
    fre = lambda x: ((x * x + aa * aa) ** (-s)).real
    fim = lambda x: ((x * x + aa * aa) ** (-s)).imag
    re, _ = quad(fre, 0, np.inf, weight="cos", wvar=TWO_PI, limlst=400,
                 limit=400)
    im, _ = quad(fim, 0, np.inf, weight="cos", wvar=TWO_PI, limlst=400,
                 limit=400)
    lhs = 2 * (re + 1j * im)
    rhs = 2 * math.pi ** s / gamma_c(s) * aa ** (0.5 - s) * \
        besselk(s - 0.5, TWO_PI * aa)
    assert abs(lhs - rhs) < 1e-7 * abs(rhs)

    # Beta merge
    U, V = 1.3, 2.4
    s2, s3 = 0.8 + 0.3j, 0.7 - 0.2j
    fre = lambda t: (t ** (s2 - 1) * (1 - t) ** (s3 - 1)
                     * (t * U + (1 - t) * V) ** (-s2 - s3)).real
    fim = lambda t: (t ** (s2 - 1) * (1 - t) ** (s3 - 1)
                     * (t * U + (1 - t) * V) ** (-s2 - s3)).imag
    re, _ = quad(fre, 0, 1, limit=200)
    im, _ = quad(fim, 0, 1, limit=200)
    lhs = gamma_c(s2 + s3) / (gamma_c(s2) * gamma_c(s3)) * (re + 1j * im)
    assert abs(lhs - U ** -s2 * V ** -s3) < 1e-8 * abs(lhs)

    # separation of the completed square
    for _ in range(10):
        t1, t2, t3 = np.exp(rng.uniform(-0.7, 0.7, 3))
        u12, u23 = rng.uniform(-5, 5, 2)
        tau = rng.uniform(0.05, 0.95)
        mu = u12 * u23
        C = t1 * t1 * t3 * t3 * u23 * u23 + t1 * t1 * t2 * t2
        D = t1 * t1 + u12 * u12 * t2 * t2
        E = tau * t2 * t2 * t3 * t3 + (1 - tau) * t3 * t3
        xm = tau * t2 * t2 * t3 * t3 * mu / E
        F = tau * (t2 * t2 * t3 * t3 * (xm - mu) ** 2 + C) + \
            (1 - tau) * (t3 * t3 * xm * xm + D)
        R = 1 - tau + tau * t2 * t2
        Gv = t3 * t3 * R + tau * t3 ** 4 * u23 * u23
        sep = (Gv / (t3 * t3 * R)) * \
            ((1 - tau) * t2 * t2 * u12 * u12 + t1 * t1 * R)
        assert abs(F - sep) < 1e-12 * abs(F)


def test_gl3_tau_convergence():
    eng = W.WhittakerGL3(ELL3)
    a = eng.eval_torus_reduced(1.0, 1.0, nx=200)
    b = eng.eval_torus_reduced(1.0, 1.0, nx=500)
    assert abs(a - b) <= 1e-9 * abs(b)


def test_gl3_eigenfunction():
    eng = W.WhittakerGL3(ELL3)
    assert eng is not None
    lam1 = G.casimir_eigenvalue(1, ELL3)
    lam2 = G.casimir_eigenvalue(2, ELL3)

    def fun(m):
        return W.whittaker_eval(W.WhittakerQuery(m, ELL3, 1))

    g0 = IwasawaPoint([0.12, -0.3, 0.21], [0.9, 1.15]).matrix()
    w0 = fun(g0)
    fd1 = G.casimir_apply_fd(fun, g0, 1, h=0.07, richardson=2)
    fd2 = G.casimir_apply_fd(fun, g0, 2, h=0.07, richardson=2)
    assert abs(fd1 - lam1 * w0) <= 2e-4 * abs(lam1 * w0)
    assert abs(fd2 - lam2 * w0) <= 1e-3 * abs(lam2 * w0)


def test_gl3_covariance(rng):
    base_pt = IwasawaPoint([0.0, 0.0, 0.0], [1.1, 0.9])
    base = W.whittaker_eval(W.WhittakerQuery(base_pt, ELL3, 1))
    for _ in range(20):
        u12, u13, u23 = rng.uniform(-1.5, 1.5, 3)
        umat = np.array([[1, u12, u13], [0, 1, u23], [0, 0, 1.0]])
        z = G.iwasawa_point(umat @ base_pt.matrix())
        got = W.whittaker_eval(W.WhittakerQuery(z, ELL3, 1))
        phase = np.exp(2j * math.pi * (-u12 + u23))
        assert abs(got - phase * base) < 1e-9 * abs(base)
    # eps = -1 flips the sign on the first character coordinate
    basem = W.whittaker_eval(W.WhittakerQuery(base_pt, ELL3, -1))
    u = np.array([[1, 0.3, 0], [0, 1, 0], [0, 0, 1.0]])
    z = G.iwasawa_point(u @ base_pt.matrix())
    got = W.whittaker_eval(W.WhittakerQuery(z, ELL3, -1))
    assert abs(got - basem * np.exp(2j * math.pi * 0.3)) < 1e-9 * abs(basem)


def test_gl3_shift_analyticity():
    # Richardson over the analytic shift reproduces the direct value
    eng = W.WhittakerGL3(ELL3)
    direct = eng.eval_torus_reduced(1.3, 0.8)
    vals = [eng.eval_torus_reduced(1.3, 0.8, shift=s)
            for s in (0.4, 0.3, 0.2, 0.1)]
    xs = [0.4, 0.3, 0.2, 0.1]
    tab = list(vals)
    for lev in range(1, len(tab)):
        for i in range(len(tab) - lev):
            tab[i] = (xs[i + lev] * tab[i] - xs[i] * tab[i + 1]) / \
                (xs[i + lev] - xs[i])
    assert abs(tab[0] - direct) < 0.05 * abs(direct)


@pytest.mark.slow
def test_gl3_oscillatory_crosscheck():
    # the (slow, roughly converging) iterated oscillatory path agrees with
    # the reduced formula at a shifted, absolutely convergent parameter
    eng = W.WhittakerGL3(ELL3, periods=40)
    osc = eng._eval_shifted(0.4, 1.0, 1.0)
    red = eng.eval_torus_reduced(1.0, 1.0, shift=0.4)
    assert abs(osc - red) < 0.2 * abs(red)


# ------------------------------------------------------------- tail norms

def test_tail_monotone_and_positive():
    ell = SpectralParameter([0.0, 0.0])
    t1 = W.whittaker_tail_norm(1.0, ell)
    t2 = W.whittaker_tail_norm(2.0, ell)
    assert t1 > t2 > 0


def test_tail_oracle_n2():
    # independent scalar quadrature oracle with mpmath besselk
    import mpmath as mp
    ell = SpectralParameter([0.0, 0.0])
    ours = W.whittaker_tail_norm(1.0, ell)
    c = abs(W.jacquet_constant_n2(ell)) ** 2

    mp.mp.dps = 30
    ref = c * float(mp.quad(
        lambda y: abs(mp.besselk(0, TWO_PI * y)) ** 2 / y, [1, 3, 8]))
    assert abs(ours - ref) <= 1e-6 * ref


def test_tail_finite_at_siegel_corner():
    ell = SpectralParameter([0.45j, -0.45j])
    # T below 1 is rejected; finiteness at the Siegel height sqrt(3)/2 is
    # the integrand's local integrability, tested via T = 1
    val = W.whittaker_tail_norm(1.0, ell)
    assert np.isfinite(val) and val > 0


def test_tail_log_mode_consistency():
    ell = SpectralParameter([1.2j, -1.2j])
    for T in (3.0, 12.0):
        v = W.whittaker_tail_norm(T, ell)
        lg = W.whittaker_tail_norm(T, ell, log_mode=True)
        assert abs(math.log(v) - lg) < 2e-3


def test_tail_log_mode_far():
    ell = SpectralParameter([9j, -9j])
    lg = W.whittaker_tail_norm(280.0, ell, log_mode=True)
    assert np.isfinite(lg)
    # dominated by e^{-4 pi T}
    assert abs(lg - (-4 * math.pi * 280.0)) < 0.05 * 4 * math.pi * 280.0


def test_tail_n3_modes():
    lg = W.whittaker_tail_norm(1.5, ELL3, log_mode=True)
    assert np.isfinite(lg)
    far = W.whittaker_tail_norm(600.0, ELL3, log_mode=True)
    assert np.isfinite(far) and far < lg
