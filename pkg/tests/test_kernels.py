import os
import subprocess
import sys

import numpy as np
import pytest

from fregevote import kernels
from fregevote.apportionment import METHODS, ApportionmentProblem

BACKENDS = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])


def reference(method, votes, k):
    return METHODS[method](ApportionmentProblem.from_votes(list(votes), k))


def random_rows(seed, rows, m_max=8, vmax=1000, zeros=True):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(rows):
        m = int(rng.integers(2, m_max + 1))
        v = rng.integers(1, vmax + 1, size=m)
        if zeros:
            v[rng.random(m) < 0.15] = 0
            if v.sum() == 0:
                v[0] = 1
        out.append(v)
    return out


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("method", kernels.METHOD_ORDER)
def test_matches_reference(backend, method):
    rng = np.random.default_rng(5)
    for v in random_rows(17, 60):
        k = int(rng.integers(1, 120))
        assert kernels.allocate(method, v, k, backend) == reference(method, v, k)


@pytest.mark.parametrize("backend", BACKENDS)
def test_six_party_example(backend):
    expected = {
        "largest-remainder": (16, 2, 1, 1, 0, 0),
        "dhondt": (18, 1, 1, 0, 0, 0),
        "adams": (14, 2, 1, 1, 1, 1),
        "sainte-lague": (17, 1, 1, 1, 0, 0),
        "huntington-hill": (15, 1, 1, 1, 1, 1),
        "quota": (17, 2, 1, 0, 0, 0),
        "frege": (16, 1, 1, 1, 1, 0),
    }
    for method, seats in expected.items():
        assert kernels.allocate(method, [79, 7, 6, 3, 2, 1], 20, backend) == seats


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("method", kernels.METHOD_ORDER)
def test_backends_agree_batch(method):
    rng = np.random.default_rng(3)
    votes = rng.integers(1, 1001, size=(2000, 5))
    votes[rng.random(votes.shape) < 0.05] = 0
    votes[votes.sum(axis=1) == 0, 0] = 1
    ks = rng.integers(1, 151, size=2000)
    a = kernels.allocate_batch(method, votes, ks, "numba")
    b = kernels.allocate_batch(method, votes, ks, "numpy")
    assert np.array_equal(a, b)
    assert np.array_equal(a.sum(axis=1), ks)


def test_hh_exact_tie():
    for backend in BACKENDS:
        assert kernels.allocate("huntington-hill", [6, 1], 10, backend) == (9, 1)
        assert kernels.allocate("huntington-hill", [1, 6], 10, backend) == (2, 8)


def test_overflow_guard():
    with pytest.raises(OverflowError):
        kernels.allocate_batch("dhondt", np.array([[2**40, 1]]), 10)
    with pytest.raises(OverflowError):
        kernels.allocate_batch("frege", np.array([[2**30, 2**30]]), 2**31)


@pytest.mark.parametrize(
    "votes, ks",
    [
        (np.array([1, 2]), 3),
        (np.array([[0, 0]]), 3),
        (np.array([[1, -1]]), 3),
        (np.array([[1, 2]]), 0),
    ],
)
def test_input_validation(votes, ks):
    with pytest.raises(ValueError):
        kernels.allocate_batch("dhondt", votes, ks)


def test_unknown_backend_and_method():
    with pytest.raises(ValueError):
        kernels.allocate("dhondt", [1, 2], 3, backend="gpu")
    with pytest.raises(KeyError):
        kernels.allocate("nonsense", [1, 2], 3)


def _default_backend(env_value):
    env = dict(os.environ)
    env.pop("FREGEVOTE_DISABLE_NUMBA", None)
    if env_value is not None:
        env["FREGEVOTE_DISABLE_NUMBA"] = env_value
    out = subprocess.run(
        [sys.executable, "-c", "from fregevote import kernels; print(kernels.DEFAULT_BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    return out.stdout.strip()


def test_env_flag_selects_numpy():
    assert _default_backend("1") == "numpy"
    assert _default_backend("true") == "numpy"


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")
def test_default_is_numba():
    assert _default_backend(None) == "numba"
    assert _default_backend("0") == "numba"
