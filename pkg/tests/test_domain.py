import math

import numpy as np
import pytest

from maass_certify import domain as D
from maass_certify import geometry as G
from maass_certify.geometry import IwasawaPoint

SL2_GENS = [np.array([[1, 1], [0, 1]]), np.array([[0, -1], [1, 0]])]
SL3_GENS = [
    np.array([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
    np.array([[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
    np.array([[1, 0, 0], [0, 1, 1], [0, 0, 1]]),
    np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]]),
    np.array([[1, 0, 0], [0, 0, -1], [0, 1, 0]]),
]


def random_gamma(n, rng, length=5):
    gens = SL2_GENS if n == 2 else SL3_GENS
    g = np.eye(n, dtype=int)
    for k in rng.integers(0, len(gens), rng.integers(1, length + 1)):
        g = g @ (gens[k] if rng.integers(2) else np.linalg.inv(gens[k]).astype(int))
    return g


def random_point(n, rng, xspread=3.0, logy=1.2):
    nx = n * (n - 1) // 2
    return IwasawaPoint(rng.uniform(-xspread, xspread, nx),
                        np.exp(rng.uniform(-logy, logy, n - 1)))


def test_reduce_n2_examples():
    r = D.reduce(IwasawaPoint([0.0], [2.0]))
    assert r.is_identity()
    r = D.reduce(IwasawaPoint([0.0], [0.5]))
    assert abs(r.reduced.x[0]) < 1e-14 and abs(r.reduced.y[0] - 2.0) < 1e-12
    assert abs(abs(r.gamma[0][1]) - 1) == 0 and abs(r.gamma[0][0]) == 0
    r = D.reduce(IwasawaPoint([7.0 / 3.0], [5.0]))
    assert abs(r.reduced.x[0] - 1.0 / 3.0) < 1e-12
    assert abs(r.reduced.y[0] - 5.0) < 1e-12


def test_reduce_n2_gauss_oracle(rng):
    # independent classical reduction: act by T/S on complex numbers
    for _ in range(500):
        z0 = complex(rng.uniform(-4, 4), math.exp(rng.uniform(-2, 1.5)))
        z = z0
        for _ in range(10000):
            z -= round(z.real)
            if abs(z) < 1.0 - 1e-14:
                z = -1.0 / z
            else:
                break
        r = D.reduce(IwasawaPoint([z0.real], [z0.imag]))
        assert abs(r.reduced.y[0] - z.imag) < 1e-9
        assert abs(r.reduced.x[0] - z.real) < 1e-9 or \
            abs(abs(r.reduced.x[0]) - 0.5) < 1e-9


def test_membership_n2():
    assert D.membership(IwasawaPoint([0.0], [2.0]))
    assert not D.membership(IwasawaPoint([0.6], [2.0]))
    assert D.membership(IwasawaPoint([0.5], [2.0]))  # closure boundary


def test_membership_n3_siegel_interior():
    assert D.membership(IwasawaPoint([0, 0, 0], [2.0, 2.0]))


@pytest.mark.parametrize("n", [2, 3])
def test_reduce_idempotent(n, rng):
    for _ in range(300):
        z = random_point(n, rng)
        r = D.reduce(z)
        assert D.membership(r.reduced, closure=True, tol=1e-9)
        r2 = D.reduce(r.reduced)
        assert r2.is_identity()


@pytest.mark.parametrize("n", [2, 3])
def test_reduce_equivariance(n, rng):
    count = 0
    for _ in range(400):
        z = random_point(n, rng)
        gam = random_gamma(n, rng)
        z2 = D.apply_integer(gam, z)
        ra, rb = D.reduce(z), D.reduce(z2)
        assert np.allclose(ra.reduced.x, rb.reduced.x, atol=1e-8)
        assert np.allclose(ra.reduced.y, rb.reduced.y, rtol=1e-8)
        count += 1
    assert count == 400


@pytest.mark.parametrize("n", [2, 3])
def test_reduce_gamma_consistency(n, rng):
    # gamma applied to z reproduces the reduced point
    for _ in range(200):
        z = random_point(n, rng)
        r = D.reduce(z)
        moved = D.apply_integer(r.gamma_float, z)
        assert np.allclose(moved.x, r.reduced.x, atol=1e-9)
        assert np.allclose(moved.y, r.reduced.y, rtol=1e-9)


@pytest.mark.parametrize("n", [2, 3])
def test_siegel_interior_in_domain(n, rng):
    # interior points of Sigma_{1,1/2} always pass the closed conditions
    for _ in range(300):
        nx = n * (n - 1) // 2
        z = IwasawaPoint(rng.uniform(-0.49, 0.49, nx),
                         np.exp(rng.uniform(math.log(1.01), 1.5, n - 1)))
        assert D.membership(z, closure=True)


@pytest.mark.parametrize("n", [2, 3])
def test_reduced_in_siegel(n, rng):
    # every reduced point lies in Sigma_{sqrt(3)/2, 1/2}
    for _ in range(300):
        r = D.reduce(random_point(n, rng))
        assert G.siegel_membership(r.reduced, math.sqrt(3) / 2 - 1e-9,
                                   0.5 + 1e-9)


def test_in_tilde_f_basic(rng):
    assert D.in_tilde_F(IwasawaPoint([0.0], [2.0]))
    assert D.in_tilde_F(IwasawaPoint([5.0], [2.0]))  # pure translation
    assert not D.in_tilde_F(IwasawaPoint([0.0], [0.5]))  # needs inversion
    for _ in range(100):
        z = random_point(3, rng)
        r = D.reduce(z)
        if r.is_identity():
            assert D.in_tilde_F(z)


def test_in_tilde_f_parabolic_translates(rng):
    # parabolic translates of domain points stay inside tilde-F
    for _ in range(100):
        z = D.reduce(random_point(3, rng)).reduced
        gp = random_gamma(2, rng)
        par = np.eye(3, dtype=int)
        par[:2, :2] = gp
        par[0, 2], par[1, 2] = rng.integers(-3, 4, 2)
        assert D.in_tilde_F(D.apply_integer(par, z))


def test_membership_canonical(rng):
    # closure=False accepts exactly the canonical representative
    for _ in range(50):
        z = random_point(3, rng)
        r = D.reduce(z)
        assert D.membership(r.reduced, closure=False)
        if not r.is_identity():
            assert not D.membership(z, closure=False) or \
                D.membership(z, closure=True)


def test_kernel_reduce_agree(kimpl, rng):
    from maass_certify._kernels_py import reduce3 as reduce3_py
    for _ in range(100):
        z = random_point(3, rng)
        m = z.matrix()
        ga, ca, _ = kimpl.reduce3(m)
        gb, cb, _ = reduce3_py(m)
        assert [list(r) for r in ga] == [list(r) for r in gb]
        assert np.allclose(ca, cb, atol=1e-10)
