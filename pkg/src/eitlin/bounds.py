"""Entry majorant, Schur-test certificates and norm estimates for F^{|j|}.

All sweeps work with absolute values |F^{|j|}_{m,k}| (the entries are
nonpositive). The Schur weights are u_l = l^{-1/2} and v_l = (l+|j|)^{-1/2},
with constants 4 (rows) and 32 (columns), giving the uniform bound
||F^{|j|}|| <= sqrt(4 * 32) = 2**3.5.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from ._parallel import parallel_map
from .frechet import INV_SQRT_PI, TriangularBlock, _log_gamma_ratio, abs_block, entry_gamma

__all__ = [
    "ROW_CONSTANT",
    "COL_CONSTANT",
    "NORM_BOUND",
    "SchurVectors",
    "BoundReport",
    "xi",
    "xi_unchecked",
    "rho",
    "log_rho",
    "rho_majorant",
    "schur_row_check",
    "schur_row_sums",
    "schur_col_check",
    "schur_col_sums",
    "schur_col_tail",
    "op_norm_estimate",
    "figure1_data",
    "FIGURE1_M",
    "FIGURE1_J",
    "abs_entries_gamma",
    "domination_sweep",
    "gronwall_sweep",
    "schur_sweep",
    "norm_sweep",
]

ROW_CONSTANT = 4.0
COL_CONSTANT = 32.0
NORM_BOUND = 2.0 ** 3.5

FIGURE1_M = (15, 30, 100)
FIGURE1_J = (0, 3)


@dataclass(frozen=True)
class SchurVectors:
    j_abs: int

    def u(self, n: int) -> np.ndarray:
        return 1.0 / np.sqrt(np.arange(1, n + 1, dtype=float))

    def v(self, n: int) -> np.ndarray:
        return 1.0 / np.sqrt(np.arange(1, n + 1, dtype=float) + self.j_abs)


@dataclass
class BoundReport:
    """Worst-case margins (bound minus value) for each inequality of a sweep."""

    ranges: dict = field(default_factory=dict)
    margins: dict[str, float] = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def add(self, name: str, margin: float, **detail):
        prev = self.margins.get(name)
        if prev is None or margin < prev:
            self.margins[name] = float(margin)
            if detail:
                self.details[name] = detail

    def merge(self, other: BoundReport) -> BoundReport:
        out = BoundReport(dict(self.ranges), dict(self.margins), dict(self.details))
        for name, margin in other.margins.items():
            out.add(name, margin, **other.details.get(name, {}))
        return out

    @property
    def passed(self) -> dict[str, bool]:
        return {name: margin >= 0 for name, margin in self.margins.items()}

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def to_dict(self) -> dict:
        return {"ranges": self.ranges, "margins": self.margins,
                "pass": self.passed, "details": self.details}


def xi_unchecked(j_abs, m, k):
    """Majorant formula without the 1 <= k <= m guard (vectorizes over arrays)."""
    j_abs = np.abs(j_abs)
    expo = -2.0 * (k + j_abs) * (k - 1) / (2 * m + j_abs + 1)
    return INV_SQRT_PI * np.sqrt(2 * k + j_abs - 1) / (m + j_abs) * np.exp(expo)


def xi(j_abs: int, m: int, k: int) -> float:
    """Exponential majorant of |F^{|j|}_{m,k}|, valid for 1 <= k <= m."""
    if k < 1 or k > m:
        raise ValueError(f"need 1 <= k <= m, got k={k}, m={m}")
    ja = abs(j_abs)
    return (INV_SQRT_PI * math.sqrt(2 * k + ja - 1) / (m + ja)
            * math.exp(-2.0 * (k + ja) * (k - 1) / (2 * m + ja + 1)))


def log_rho(j_abs: int, m: int, x):
    """ln rho(x) for scalar or array x in [1, m]."""
    ja = abs(j_abs)
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 1) or np.any(x_arr > m):
        raise ValueError(f"x must lie in [1, {m}]")
    if x_arr.ndim == 0:
        return _log_gamma_ratio(ja, m, float(x_arr))
    return (gammaln(m) - gammaln(m - x_arr + 1)) + (gammaln(m + ja + 1) - gammaln(m + ja + x_arr))


def rho(j_abs: int, m: int, x):
    """Gamma ratio Gamma(m)Gamma(m+|j|+1) / (Gamma(m-x+1)Gamma(m+|j|+x))."""
    val = np.exp(log_rho(j_abs, m, x))
    return float(val) if np.ndim(val) == 0 else val


def rho_majorant(j_abs: int, m: int, x):
    """exp(-2 (x+|j|)(x-1) / (2m+|j|+1)), the Gronwall upper bound for rho."""
    ja = abs(j_abs)
    return np.exp(-2.0 * (np.asarray(x, float) + ja) * (np.asarray(x, float) - 1) / (2 * m + ja + 1))


def schur_row_sums(j_abs: int, M: int, K: int | None = None) -> np.ndarray:
    """sum_{k<=K} |F_{m,k}| u_k for every row m = 1..M."""
    K = M if K is None else K
    if K == 0:
        return np.zeros(M)
    return abs_block(j_abs, M, K) @ SchurVectors(abs(j_abs)).u(K)


def schur_row_check(j_abs: int, m: int, K: int) -> float:
    """Weighted row sum sum_{k=1}^{K} |F^{|j|}_{m,k}| u_k (to be compared with 4 v_m)."""
    K = min(K, m)
    if K <= 0:
        return 0.0
    ja = abs(j_abs)
    return math.fsum(entry_gamma(ja, k, m) / math.sqrt(k) for k in range(1, K + 1))


def schur_col_tail(j_abs: int, k: int, M: int) -> float:
    """Upper bound for sum_{m > M, m >= k} |F_{m,k}| v_m.

    Dominates each term by the majorant, rescales to the variable 2m+|j|+1
    and applies the integral test for the resulting unimodal summand g:
    the sum from s on is at most int_s^inf g + max_{x >= s} g. The integral
    has the closed form sqrt(1/b) * (sqrt(pi)/2) * erf(sqrt(b / (2s+|j|+1)))
    with b = 2k(k+|j|).
    """
    ja = abs(j_abs)
    s = max(M + 1, k)
    b = 2.0 * k * (k + ja)
    pref = 3.0 ** 1.5 * math.e ** 2 * INV_SQRT_PI * math.sqrt(2 * k + ja - 1)
    z = 2.0 * s + ja + 1
    integral = math.sqrt(1.0 / b) * 0.5 * math.sqrt(math.pi) * math.erf(math.sqrt(b / z))
    if z >= 2.0 * b / 3.0:
        peak = z ** -1.5 * math.exp(-b / z)
    else:
        peak = (3.0 / (2.0 * math.e * b)) ** 1.5
    return pref * (integral + peak)


def schur_col_check(j_abs: int, k: int, M: int) -> float:
    """Certified value of sum_{m>=1} |F^{|j|}_{m,k}| v_m: finite part plus tail bound."""
    if k < 1:
        raise ValueError("column index k must be >= 1")
    ja = abs(j_abs)
    finite = math.fsum(entry_gamma(ja, k, m) / math.sqrt(m + ja) for m in range(k, M + 1))
    return finite + schur_col_tail(ja, k, M)


def schur_col_sums(j_abs: int, M: int) -> np.ndarray:
    """Certified column sums for k = 1..M with the window truncated at row M."""
    ja = abs(j_abs)
    finite = SchurVectors(ja).v(M) @ abs_block(ja, M, M)
    tails = np.array([schur_col_tail(ja, k, M) for k in range(1, M + 1)])
    return finite + tails


def op_norm_estimate(block: TriangularBlock | np.ndarray, iters: int = 200) -> float:
    """Lower bound on the spectral norm by power iteration on B^T B.

    Starts from the all-ones vector. The returned value is the largest
    ||B x|| / ||x|| seen, so it is nondecreasing in `iters` and never
    exceeds the true norm.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    B = block.entries if isinstance(block, TriangularBlock) else np.asarray(block)
    if B.size == 0 or not np.any(B):
        return 0.0
    x = np.ones(B.shape[1])
    x /= np.linalg.norm(x)
    best = 0.0
    for _ in range(iters):
        y = B @ x
        best = max(best, float(np.linalg.norm(y)))
        x = B.T @ y
        nx = np.linalg.norm(x)
        if nx == 0.0:
            break
        x /= nx
    return best


def figure1_data(ms=FIGURE1_M, js=FIGURE1_J, kmax: int = 16) -> list[dict]:
    """Rows (j, m, k, absF, xi) comparing entries with their majorant for k = 1..kmax.

    For k > m the matrix entry is structurally zero while the majorant is
    still evaluated from its closed form, as a continuum curve.
    """
    rows = []
    for j in js:
        for m in ms:
            for k in range(1, kmax + 1):
                if k <= m:
                    absF, bound = entry_gamma(j, k, m), xi(j, m, k)
                else:
                    absF, bound = 0.0, float(xi_unchecked(j, m, k))
                rows.append({"j": j, "m": m, "k": k, "absF": absF, "xi": bound})
    return rows


# -- sweeps -----------------------------------------------------------------

def abs_entries_gamma(j_abs: int, m, k) -> np.ndarray:
    """Vectorized ``entry_gamma`` over arrays with 1 <= k <= m."""
    ja = abs(j_abs)
    m = np.asarray(m, dtype=float)
    k = np.asarray(k, dtype=float)
    lr = (gammaln(m) - gammaln(m - k + 1)) + (gammaln(m + ja + 1) - gammaln(m + ja + k))
    return INV_SQRT_PI * np.sqrt(2 * k + ja - 1) / (m + ja) * np.exp(lr)


def _triangle(M: int):
    m, k = np.tril_indices(M)
    return m + 1, k + 1


def domination_sweep(m_max: int = 500, j_max: int = 50, k1_tol: float = 1e-14) -> BoundReport:
    """|F_{m,k}| <= xi(k) on the full triangle and equality at k = 1.

    Margins: min relative gap (xi - |F|)/xi, and k1_tol minus the largest
    relative mismatch at k = 1.
    """
    m, k = _triangle(m_max)

    def one(ja):
        absF = abs_entries_gamma(ja, m, k)
        bound = xi_unchecked(ja, m, k)
        rel = (bound - absF) / bound
        first = k == 1
        eq = np.abs(absF[first] - bound[first]) / bound[first]
        # k = 1 is an equality; the informative gap is the one for k >= 2
        strict = np.where(first, np.inf, rel)
        i = int(np.argmin(strict))
        return ja, float(rel.min()), float(strict[i]), (int(m[i]), int(k[i])), float(eq.max())

    report = BoundReport(ranges={"m_max": m_max, "j_max": j_max})
    strict_min = np.inf
    for ja, rel, strict, where, eq in parallel_map(one, range(j_max + 1)):
        report.add("domination", rel, j=ja, strict_min_rel_gap=strict, m=where[0], k=where[1])
        report.add("k1_equality", k1_tol - eq, j=ja, max_rel=eq)
        strict_min = min(strict_min, strict)
    report.details["domination_strict_min_rel_gap"] = strict_min
    return report


def gronwall_sweep(m_max: int = 200, j_max: int = 20, step: float = 0.01) -> BoundReport:
    """ln rho(x) <= -2(x+|j|)(x-1)/(2m+|j|+1) on x = 1, 1+step, ..., <= m."""

    def one(ja):
        worst = (np.inf, None)
        strict = np.inf
        for m in range(1, m_max + 1):
            x = 1.0 + step * np.arange(int(np.floor((m - 1) / step + 1e-9)) + 1)
            gap = (-2.0 * (x + ja) * (x - 1) / (2 * m + ja + 1)) - log_rho(ja, m, x)
            i = int(np.argmin(gap))
            if gap[i] < worst[0]:
                worst = (float(gap[i]), (m, float(x[i])))
            if x.size > 1:
                strict = min(strict, float(gap[1:].min()))
        return ja, worst, strict

    # margins are in log space: ln(majorant) - ln(rho)
    report = BoundReport(ranges={"m_max": m_max, "j_max": j_max, "step": step})
    strict_min = np.inf
    for ja, (gap, where), strict in parallel_map(one, range(j_max + 1)):
        report.add("gronwall", gap, j=ja, m=where[0], x=where[1])
        strict_min = min(strict_min, strict)
    report.details["gronwall_strict_min_log_gap"] = strict_min
    return report


def schur_sweep(M: int = 2000, j_max: int = 100) -> BoundReport:
    """Row sums against 4 v_m and tail-certified column sums against 32 u_k, m, k <= M."""

    def one(ja):
        sv = SchurVectors(ja)
        block = abs_block(ja, M, M)
        rows = block @ sv.u(M)
        cols = sv.v(M) @ block + np.array([schur_col_tail(ja, k, M) for k in range(1, M + 1)])
        row_margin = ROW_CONSTANT * sv.v(M) - rows
        col_margin = COL_CONSTANT * sv.u(M) - cols
        return ja, float(row_margin.min()), int(row_margin.argmin()) + 1, \
            float(col_margin.min()), int(col_margin.argmin()) + 1

    report = BoundReport(ranges={"M": M, "j_max": j_max})
    for ja, rm, mi, cm, ki in parallel_map(one, range(j_max + 1)):
        report.add("schur_row", rm, j=ja, m=mi)
        report.add("schur_col", cm, j=ja, k=ki)
    return report


def norm_sweep(sizes=(100, 500, 2000), j_max: int = 50, iters: int = 200) -> BoundReport:
    """Power-iteration norm estimates of truncated F^{|j|} against 2**3.5."""
    cases = [(M, ja) for M in sizes for ja in range(j_max + 1)]

    def one(case):
        M, ja = case
        return case, op_norm_estimate(abs_block(ja, M, M), iters)

    report = BoundReport(ranges={"sizes": list(sizes), "j_max": j_max, "iters": iters})
    observed = 0.0
    for (M, ja), est in parallel_map(one, cases):
        observed = max(observed, est)
        report.add("uniform_norm", NORM_BOUND - est, M=M, j=ja, estimate=est)
        report.add("hs_constant", 16.0 - math.sqrt(2.0) * est, M=M, j=ja)
    report.details["observed_max_norm"] = observed
    return report
