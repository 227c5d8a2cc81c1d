import numpy as np
import pytest

from charfun import _kernels_py as pure

compiled = pytest.importorskip("charfun._kernels")


def _points(seed=0, n=2000):
    rng = np.random.default_rng(seed)
    return rng.uniform(-60, 60, n) + 1j * rng.uniform(-60, 60, n)


def test_loggamma_parity():
    z = _points()
    a = compiled.loggamma(z)
    b = pure.loggamma(z)
    assert np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))) < 1e-13


def test_loggamma_ratio_parity():
    z = _points(1)
    w = _points(2)
    a = compiled.loggamma_ratio(z, w)
    b = pure.loggamma_ratio(z, w)
    assert np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))) < 1e-13


def test_loggamma_ratio_broadcasts():
    z = np.array([1.5 + 2j, 3.0 - 1j])
    np.testing.assert_allclose(compiled.loggamma_ratio(z, 2.0), pure.loggamma_ratio(z, 2.0), rtol=1e-14)


@pytest.mark.parametrize("n", [17, 1000, 70_000])
def test_gp_sums_parity(n):
    dt = 2 * np.pi / 40
    t = dt * np.arange(n + 1)
    w = np.ones(n + 1)
    w[0] = w[-1] = 0.5
    cf = (1 - 2j * t) ** -1.5
    x = np.linspace(-2, 30, 257)
    pa, ca = compiled.gp_sums(x, t, w, cf, dt, 3.0)
    pb, cb = pure.gp_sums(x, t, w, cf, dt, 3.0)
    np.testing.assert_allclose(pa, pb, rtol=0, atol=1e-12)
    np.testing.assert_allclose(ca, cb, rtol=0, atol=1e-12)


def test_gp_sums_irregular_nodes():
    # non-uniform nodes take the direct cos/sin path
    t = np.concatenate([[0.0], np.sort(np.random.default_rng(3).uniform(0.01, 50, 300))])
    w = np.ones_like(t)
    cf = np.exp(-0.5 * t * t) + 0j
    x = np.linspace(-3, 3, 11)
    pa, ca = compiled.gp_sums(x, t, w, cf, 0.1, 0.0)
    pb, cb = pure.gp_sums(x, t, w, cf, 0.1, 0.0)
    np.testing.assert_allclose(pa, pb, atol=1e-12)
    np.testing.assert_allclose(ca, cb, atol=1e-12)
