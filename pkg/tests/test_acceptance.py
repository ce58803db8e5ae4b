"""Acceptance criteria 1-10 at their stated tolerances and full ranges."""
import math
import time

import numpy as np
import pytest

from eitlin.bounds import (
    NORM_BOUND,
    domination_sweep,
    figure1_data,
    gronwall_sweep,
    norm_sweep,
    schur_sweep,
)
from eitlin.frechet import apply, block_apply, hs_norm
from eitlin.oracle import max_discrepancy
from eitlin.recon import ReconConfig, reconstruct
from eitlin.serialize import figure1_to_csv
from eitlin.sobolev import embedding_sweep
from eitlin.zernike import SpectralPerturbation, ZernikeIndex, analyze, basis_eval, disk_grid, sample_on_grid


def complex_table(rng, jmax, kmax, draw="normal"):
    shape = (2 * jmax + 1, kmax + 1)
    if draw == "uniform":
        return SpectralPerturbation.from_array(rng.uniform(-1, 1, shape) + 1j * rng.uniform(-1, 1, shape))
    return SpectralPerturbation.from_array(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@pytest.mark.criterion("1")
def test_ac1_oracle_equivalence(acceptance):
    t0 = time.perf_counter()
    res = max_discrepancy(jmax=6, kmax=6, mmax=10)
    dt = time.perf_counter() - t0
    ok = res["max_abs"] <= 1e-9 and res["max_abs_zero"] <= 1e-12
    assert acceptance(ok, f"max |entry - quadrature| = {res['max_abs']:.2e} (zeros {res['max_abs_zero']:.2e}) "
                          f"over {res['count']} tuples, {dt:.1f}s"), res


@pytest.mark.criterion("2")
def test_ac2_entry_domination(acceptance):
    rep = domination_sweep(m_max=500, j_max=50, k1_tol=1e-14)
    ok = rep.margins["domination"] >= 0 and rep.margins["k1_equality"] >= 0
    assert acceptance(ok, f"min rel gap {rep.margins['domination']:.2e} (k>=2: "
                          f"{rep.details['domination_strict_min_rel_gap']:.2e}), k=1 mismatch "
                          f"{1e-14 - rep.margins['k1_equality']:.1e}; m<=500, |j|<=50"), rep.to_dict()


@pytest.mark.criterion("3")
def test_ac3_gronwall_majorant(acceptance):
    rep = gronwall_sweep(m_max=200, j_max=20, step=0.01)
    ok = rep.ok
    assert acceptance(ok, f"min log gap {rep.margins['gronwall'] + 0.0:.2e} (x>1: "
                          f"{rep.details['gronwall_strict_min_log_gap']:.2e}); m<=200, |j|<=20, step 0.01"), \
        rep.to_dict()


@pytest.mark.criterion("4")
def test_ac4_schur_certificates(acceptance):
    rep = schur_sweep(M=2000, j_max=100)
    ok = rep.ok
    assert acceptance(ok, f"row margin {rep.margins['schur_row']:.3f}, column margin "
                          f"{rep.margins['schur_col']:.3f}; m,k<=2000, |j|<=100"), rep.to_dict()


@pytest.mark.criterion("5")
def test_ac5_uniform_norm_bound(acceptance):
    rep = norm_sweep(sizes=(100, 500, 2000), j_max=50, iters=200)
    observed = rep.details["observed_max_norm"]
    ok = observed <= NORM_BOUND
    assert acceptance(ok, f"observed max ||F^|j||| = {observed:.6f} <= 2^3.5 = {NORM_BOUND:.7f}"), \
        rep.to_dict()


@pytest.mark.criterion("6")
def test_ac6_hs_identity(acceptance):
    rng = np.random.default_rng(2024)
    worst = 0.0
    mmax = 50
    for _ in range(100):
        c = complex_table(rng, 6, 6)
        lhs = hs_norm(apply(c, mmax)) ** 2
        rhs = 2 * math.fsum(np.linalg.norm(block_apply(abs(j), mmax - abs(j), c.blocks[j])) ** 2
                            for j in range(-6, 7))
        worst = max(worst, abs(lhs - rhs) / rhs)
    assert acceptance(worst <= 1e-12, f"max rel deviation {worst:.2e} on 100 tables (jmax=kmax=6, mmax=50)")


@pytest.mark.criterion("7")
def test_ac7_figure1(acceptance):
    rows = figure1_data()
    csv = figure1_to_csv(rows)
    lines = csv.strip().splitlines()
    keys = {(r["j"], r["m"], r["k"]) for r in rows}
    ok = (len(lines) == 97 and lines[0] == "j,m,k,absF,xi"
          and keys == {(j, m, k) for j in (0, 3) for m in (15, 30, 100) for k in range(1, 17)}
          and all(r["absF"] <= r["xi"] for r in rows)
          and all(abs(r["absF"] - r["xi"]) <= 1e-14 * r["xi"] for r in rows if r["k"] == 1))
    assert acceptance(ok, f"{len(lines) - 1} rows, absF <= xi on every row, k=1 equal to 1e-14")


@pytest.mark.criterion("8")
def test_ac8_embedding_bound(acceptance):
    res = embedding_sweep(N=50, Ms=range(1, 50), eps_values=(0.1, 0.25, 0.5), trials=10_000, seed=0)
    ok = res["violations"] == 0 and res["cases"] == 10_000 * 49 * 3
    assert acceptance(ok, f"{res['violations']} violations in {res['cases']} cases, "
                          f"worst error/bound {res['worst']['ratio']:.3f}"), res


@pytest.mark.criterion("9")
def test_ac9_reconstruction_round_trip(acceptance):
    rng = np.random.default_rng(7)
    cfg = ReconConfig(mmax=30, jmax=3, kmax=3, alpha=1e-8)
    worst = 0.0
    for _ in range(100):
        c = complex_table(rng, 3, 3, draw="uniform")
        back = reconstruct(apply(c, 30), cfg)
        worst = max(worst, float(np.abs(back.to_array() - c.to_array()).max()))
    unit = SpectralPerturbation.unit(0, 0, 3, 3)
    err00 = float(np.abs(reconstruct(apply(unit, 30), cfg).to_array() - unit.to_array()).max())
    ok = worst <= 1e-4 and err00 <= 1e-6
    assert acceptance(ok, f"random tables max error {worst:.2e} (<=1e-4), c00 only {err00:.2e} (<=1e-6)")


@pytest.mark.criterion("10")
def test_ac10_zernike_orthonormality_and_round_trip(acceptance):
    D = 16
    idx = [(j, k) for j in range(-D, D + 1) for k in range((D - abs(j)) // 2 + 1)]
    grid = disk_grid(D + 1, 2 * D + 2)
    rr, tt = grid.mesh()
    vals = np.stack([basis_eval(ZernikeIndex(j, k), rr, tt).ravel() for j, k in idx])
    w = np.broadcast_to(grid.weights[:, None] * grid.theta_weight, rr.shape).ravel()
    gram_err = float(np.abs((vals * w) @ vals.conj().T - np.eye(len(idx))).max())

    rng = np.random.default_rng(10)
    trip_err = 0.0
    box = disk_grid(2 * D + 1, 2 * D + 2)
    for _ in range(10):
        c = SpectralPerturbation.zeros(D, D // 2)
        for j, k in idx:
            c.blocks[j][k] = complex(rng.standard_normal(), rng.standard_normal())
        back = analyze(sample_on_grid(c, box), box, D, D // 2)
        trip_err = max(trip_err, float(np.abs(back.to_array() - c.to_array()).max()))
    ok = gram_err <= 1e-10 and trip_err <= 1e-10
    assert acceptance(ok, f"Gram deviation {gram_err:.2e}, transform round trip {trip_err:.2e} "
                          f"({len(idx)} functions, degree <= {D})")
