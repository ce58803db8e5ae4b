import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma

from eitlin.bounds import (
    COL_CONSTANT,
    NORM_BOUND,
    ROW_CONSTANT,
    BoundReport,
    SchurVectors,
    domination_sweep,
    figure1_data,
    gronwall_sweep,
    log_rho,
    norm_sweep,
    op_norm_estimate,
    rho,
    rho_majorant,
    schur_col_check,
    schur_col_sums,
    schur_col_tail,
    schur_row_check,
    schur_row_sums,
    schur_sweep,
    xi,
    xi_unchecked,
)
from eitlin.frechet import abs_block, assemble_block, entry_gamma


def test_constants():
    assert NORM_BOUND == pytest.approx(11.313708498984761, rel=1e-15)
    assert ROW_CONSTANT == 4 and COL_CONSTANT == 32


# ------------------------------------------------------------------ #
# majorant and gamma ratio
# ------------------------------------------------------------------ #

def test_xi_examples():
    assert xi(0, 1, 1) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)
    assert xi(3, 5, 1) == pytest.approx(entry_gamma(3, 1, 5), rel=1e-15)
    assert xi(0, 10, 2) == pytest.approx(math.sqrt(3) / 10 / math.sqrt(math.pi) * math.exp(-4 / 21), rel=1e-14)
    with pytest.raises(ValueError):
        xi(0, 3, 4)
    with pytest.raises(ValueError):
        xi(0, 3, 0)
    assert xi_unchecked(0, 3, 4) > 0


def test_rho_examples():
    assert rho(0, 10, 1) == 1.0
    assert rho(0, 10, 2) == pytest.approx(9 / 11, rel=1e-14)
    assert rho(2, 7, 3) == pytest.approx((6 * 5) / (10 * 11), rel=1e-14)
    with pytest.raises(ValueError):
        log_rho(0, 5, 0.5)
    with pytest.raises(ValueError):
        log_rho(0, 5, 5.5)


def test_rho_against_gamma_function():
    for ja, m, x in [(0, 6, 2.5), (3, 9, 4.25), (1, 4, 1.0)]:
        ref = gamma(m) * gamma(m + ja + 1) / (gamma(m - x + 1) * gamma(m + ja + x))
        assert rho(ja, m, x) == pytest.approx(ref, rel=1e-12)


def test_log_gamma_sanity():
    # stdlib log-gamma, checked at classical values and on the recurrence
    assert math.lgamma(1) == 0.0
    assert math.exp(math.lgamma(0.5)) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    for x in (0.3, 2.7, 17.5, 250.0):
        assert math.lgamma(x + 1) - math.lgamma(x) == pytest.approx(math.log(x), abs=1e-12)


@settings(max_examples=200)
@given(ja=st.integers(0, 20), m=st.integers(1, 200), t=st.floats(0, 1))
def test_rho_below_majorant(ja, m, t):
    x = 1 + t * (m - 1)
    assert log_rho(ja, m, x) <= math.log(rho_majorant(ja, m, x)) + 1e-12


@settings(max_examples=300)
@given(ja=st.integers(0, 50), m=st.integers(1, 500), data=st.data())
def test_domination_property(ja, m, data):
    k = data.draw(st.integers(1, m))
    assert entry_gamma(ja, k, m) <= xi(ja, m, k) * (1 + 1e-14)


# ------------------------------------------------------------------ #
# Schur test
# ------------------------------------------------------------------ #

def test_schur_vectors():
    sv = SchurVectors(3)
    np.testing.assert_allclose(sv.u(3), [1, 1 / math.sqrt(2), 1 / math.sqrt(3)])
    np.testing.assert_allclose(sv.v(2), [0.5, 1 / math.sqrt(5)])


def test_schur_row_example():
    val = schur_row_check(10, 200, 200)
    assert val <= ROW_CONSTANT / math.sqrt(210)
    assert val == pytest.approx(schur_row_sums(10, 200)[-1], rel=1e-12)
    assert schur_row_check(0, 5, 0) == 0.0


def test_schur_col_examples():
    assert schur_col_check(0, 1, 2000) <= COL_CONSTANT
    assert schur_col_check(20, 10, 5000) <= COL_CONSTANT / math.sqrt(10)
    # the tail alone still certifies column 1
    assert schur_col_check(0, 1, 0) <= COL_CONSTANT
    with pytest.raises(ValueError):
        schur_col_check(0, 0, 10)


def test_col_tail_dominates_true_tail():
    for ja, k, M in [(0, 1, 50), (3, 5, 100), (10, 40, 200), (0, 150, 100)]:
        tail = schur_col_tail(ja, k, M)
        big = 40_000
        lo = max(M + 1, k)
        m = np.arange(lo, big + 1)
        exact = np.sum([entry_gamma(ja, k, int(mm)) / math.sqrt(mm + ja) for mm in m])
        assert tail >= exact


def test_col_tail_decreases_with_window():
    tails = [schur_col_tail(2, 3, M) for M in (10, 100, 1000, 10000)]
    assert all(a > b for a, b in zip(tails, tails[1:]))


def test_col_sums_vectorized_match_scalar():
    sums = schur_col_sums(4, 300)
    for k in (1, 7, 150, 300):
        assert sums[k - 1] == pytest.approx(schur_col_check(4, k, 300), rel=1e-12)


# ------------------------------------------------------------------ #
# operator norm
# ------------------------------------------------------------------ #

def test_op_norm_examples():
    assert op_norm_estimate(np.diag([3.0, 1.0])) == pytest.approx(3.0, rel=1e-12)
    assert op_norm_estimate(np.zeros((3, 3))) == 0.0
    A = np.array([[1.0, 2.0], [0.0, 1.0]])
    assert op_norm_estimate(A) == pytest.approx(np.linalg.norm(A, 2), rel=1e-10)
    with pytest.raises(ValueError):
        op_norm_estimate(A, iters=0)


def test_op_norm_monotone_and_below_true_norm():
    blk = assemble_block(2, 300, 300)
    true = np.linalg.norm(blk.entries, 2)
    ests = [op_norm_estimate(blk, it) for it in (1, 5, 50, 500)]
    assert all(a <= b for a, b in zip(ests, ests[1:]))
    assert ests[-1] <= true * (1 + 1e-12)
    assert ests[-1] == pytest.approx(true, rel=1e-6)


def test_truncated_norms_below_bound():
    for ja in (0, 1, 10):
        assert np.linalg.norm(abs_block(ja, 400, 400), 2) <= NORM_BOUND


# ------------------------------------------------------------------ #
# reports and sweeps (small ranges)
# ------------------------------------------------------------------ #

def test_bound_report():
    r = BoundReport()
    r.add("a", 1.0, where=1)
    r.add("a", 0.5, where=2)
    r.add("a", 2.0, where=3)
    assert r.margins["a"] == 0.5 and r.details["a"] == {"where": 2}
    r2 = BoundReport(margins={"b": -1.0})
    merged = r.merge(r2)
    assert merged.passed == {"a": True, "b": False}
    assert not merged.ok and r.ok
    assert set(merged.to_dict()) == {"ranges", "margins", "pass", "details"}


def test_small_sweeps_pass():
    for rep in (domination_sweep(60, 5), gronwall_sweep(30, 4, 0.05),
                schur_sweep(150, 5), norm_sweep((50, 100), 5, 50)):
        assert rep.ok, rep.to_dict()
    d = domination_sweep(60, 5)
    assert d.margins["k1_equality"] > 0
    assert d.details["domination_strict_min_rel_gap"] > 0


# ------------------------------------------------------------------ #
# figure data
# ------------------------------------------------------------------ #

def test_figure1_rows():
    rows = figure1_data()
    assert len(rows) == 96
    assert {r["m"] for r in rows} == {15, 30, 100}
    assert {r["j"] for r in rows} == {0, 3}
    assert {r["k"] for r in rows} == set(range(1, 17))
    assert all(r["absF"] <= r["xi"] for r in rows)
    for r in rows:
        if r["k"] == 1:
            assert r["absF"] == pytest.approx(r["xi"], rel=1e-14)
        if r["k"] > r["m"]:
            assert r["absF"] == 0.0
