import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eitlin.sobolev import (
    embedding_error_check,
    embedding_sweep,
    h_eps_inner,
    nd_eigenvalues,
    scaled_basis,
)


def test_eigenvalues_and_ordering():
    sc = nd_eigenvalues(4)
    np.testing.assert_array_equal(sc.eigenvalues, [1, 1, 0.5, 0.5])
    np.testing.assert_array_equal(sc.modes, [1, -1, 2, -2])
    assert len(sc) == 4
    big = nd_eigenvalues(101).eigenvalues
    assert np.all(np.diff(big) <= 0)
    with pytest.raises(ValueError):
        nd_eigenvalues(0)


def test_h_eps_examples():
    g = np.array([1, 0, 1, 0], complex)
    h = np.array([1, 0, 1j, 0], complex)
    # lambda^{-2 eps} with eps = 1/2 weighs mode 2 by 2
    assert h_eps_inner(g, h, 0.5) == pytest.approx(1 + 2 * (-1j))
    assert h_eps_inner(g, h, 0.0) == pytest.approx(1 - 1j)
    assert h_eps_inner(g, g, -0.5) == pytest.approx(1.5)
    with pytest.raises(ValueError):
        h_eps_inner(g, h, 0.75)
    with pytest.raises(ValueError):
        h_eps_inner(g, h[:3], 0.1)


@given(eps=st.floats(-0.5, 0.5))
def test_scaled_basis_is_orthonormal(eps):
    N = 8
    for i in range(N):
        for k in range(N):
            val = h_eps_inner(scaled_basis(i, N, eps), scaled_basis(k, N, eps), eps)
            assert val == pytest.approx(1.0 if i == k else 0.0, abs=1e-14)


def test_embedding_examples():
    T = np.zeros((4, 4))
    T[0, 0] = 1.0
    chk = embedding_error_check(T, 1, 0.25)
    assert chk.error == 0.0 and chk.ok
    T = np.zeros((4, 4))
    T[3, 3] = 1.0
    chk = embedding_error_check(T, 2, 0.5)
    # error^2 = (lambda_4^2)^{2 eps} = 1/4, bound^2 = (lambda_1 lambda_3)^{2 eps} = 1/2
    assert chk.error == pytest.approx(0.5)
    assert chk.bound == pytest.approx(np.sqrt(0.5))
    assert chk.ok
    with pytest.raises(ValueError):
        embedding_error_check(T, 4, 0.1)
    with pytest.raises(ValueError):
        embedding_error_check(np.zeros((3, 4)), 1, 0.1)


def test_embedding_eps_zero_is_plain_tail():
    rng = np.random.default_rng(0)
    T = rng.standard_normal((6, 6))
    chk = embedding_error_check(T, 3, 0.0)
    mask = np.ones((6, 6), bool)
    mask[:3, :3] = False
    assert chk.error == pytest.approx(np.linalg.norm(T[mask]))
    assert chk.bound == pytest.approx(np.linalg.norm(T))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 31), eps=st.sampled_from([0.1, 0.25, 0.5]))
def test_embedding_error_monotone_in_M(seed, eps):
    rng = np.random.default_rng(seed)
    T = rng.standard_normal((20, 20)) + 1j * rng.standard_normal((20, 20))
    errs = [embedding_error_check(T, M, eps).error for M in range(20)]
    assert all(a >= b - 1e-12 for a, b in zip(errs, errs[1:]))
    assert all(embedding_error_check(T, M, eps).ok for M in range(20))


def test_sweep_matches_scalar_check():
    res = embedding_sweep(N=12, trials=20, seed=3)
    assert res["violations"] == 0
    assert res["cases"] == 20 * 3 * 11
    w = res["worst"]
    rng = np.random.default_rng(3)
    for t in range(w["trial"] + 1):
        T = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    chk = embedding_error_check(T, w["M"], w["eps"])
    assert chk.error / chk.bound == pytest.approx(w["ratio"], rel=1e-12)
    with pytest.raises(ValueError):
        embedding_sweep(N=5, Ms=[5], trials=1)
