"""The numba and numpy kernel backends must agree."""

import numpy as np
import pytest

from peerde import _kernels
from peerde._kernels import _numpy as npk

try:
    from peerde._kernels import _numba as nbk
except ImportError:  # pragma: no cover
    nbk = None

pytestmark = pytest.mark.skipif(nbk is None, reason="numba not installed")


@pytest.fixture
def rng():
    return np.random.default_rng(123)


@pytest.mark.parametrize("strategy", range(5))
def test_mutate_backends_match(rng, strategy):
    x = rng.normal(size=(12, 4))
    idx = np.argsort(rng.random((12, 11)), axis=1)[:, :5]
    a = npk.de_mutate(x, idx, 3, strategy, 0.7)
    b = nbk.de_mutate(x, idx, 3, strategy, 0.7)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-14)


def test_crossover_backends_match(rng):
    x = rng.normal(size=(20, 6))
    v = rng.normal(size=(20, 6))
    r = rng.random((20, 6))
    jrand = rng.integers(6, size=20)
    np.testing.assert_array_equal(npk.de_crossover(x, v, r, jrand, 0.4), nbk.de_crossover(x, v, r, jrand, 0.4))


@pytest.mark.parametrize("name", ["sphere", "rosenbrock", "rastrigin"])
def test_benchmarks_match(rng, name):
    x = rng.uniform(-3, 3, size=(30, 7))
    np.testing.assert_allclose(getattr(npk, name)(x), getattr(nbk, name)(x), rtol=1e-12)


def test_likelihoods_match(rng):
    x = np.column_stack([np.ones(50), rng.normal(size=(50, 2))])
    y = (rng.random(50) < 0.4).astype(float)
    b = rng.normal(size=(8, 3)) * 3
    np.testing.assert_allclose(npk.binary_nll(b, x, y), nbk.binary_nll(b, x, y), rtol=1e-12)
    eta = rng.normal(size=50)
    tau = np.array([-1.0, 0.2, 1.5])
    yc = rng.integers(4, size=50)
    assert npk.ordered_nll(eta, tau, yc) == pytest.approx(nbk.ordered_nll(eta, tau, yc), rel=1e-12)


def test_auc_match_with_ties(rng):
    s = rng.integers(0, 5, size=80).astype(float)
    lab = rng.integers(0, 2, size=80)
    assert npk.mann_whitney_auc(s, lab) == nbk.mann_whitney_auc(s, lab)


def test_backend_flag(monkeypatch):
    import importlib

    monkeypatch.setenv("PEERDE_DISABLE_NUMBA", "1")
    mod = importlib.reload(_kernels)
    try:
        assert mod.BACKEND == "numpy"
        assert mod.sphere is npk.sphere
    finally:
        monkeypatch.delenv("PEERDE_DISABLE_NUMBA")
        importlib.reload(_kernels)
