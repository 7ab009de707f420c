"""Dimensional constants and the numeric inequality verification suite.

alpha(n, j) and beta(n, j) govern the scaled limits of random inscribed
approximation; del/div (Delone triangulation and Dirichlet-Voronoi tiling
numbers) and their Laguerre variants ldel/ldiv govern best approximation
and are known exactly only in the plane and in R^2-tilings (n = 2, 3).

The suite re-checks every printed asymptotic inequality numerically over a
dimension range.  Claimed bounds that fail are reported as findings, never
patched: the constants are claims under test, not tunables.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, lgamma, log, pi, sqrt

import numpy as np
from scipy.special import gammaln

from .measures import ball_intrinsic_volume, ball_surface, ball_volume

SLACK = 1e-12


# -- scaled-limit constants ------------------------------------------------------

def alpha(n: int, j: int) -> float:
    """(1 - 2/(n+1)) (n|D_n|/|D_{n-1}|)^(2/(n-1)) Gamma(j+1+2/(n-1))/Gamma(j+1)."""
    if n < 2 or not 1 <= j <= n:
        raise ValueError("need n >= 2 and 1 <= j <= n")
    c = 2.0 / (n - 1.0)
    lv1 = log(n) + _log_ball_volume(n) - _log_ball_volume(n - 1)
    return (1.0 - 2.0 / (n + 1.0)) * exp(c * lv1 + lgamma(j + 1.0 + c) - lgamma(j + 1.0))


def beta(n: int, j: int) -> float:
    """alpha(n, j) * j V_j(D_n) / (2 n |D_n|) * |dD_n|^(-2/(n-1))."""
    if n < 2 or not 1 <= j <= n:
        raise ValueError("need n >= 2 and 1 <= j <= n")
    c = 2.0 / (n - 1.0)
    lsurf = log(n) + _log_ball_volume(n)
    return alpha(n, j) * j * ball_intrinsic_volume(n, j) / (2.0 * n * ball_volume(n)) \
        * exp(-c * lsurf)


def alpha_from_beta(n: int, j: int) -> float:
    """Inverts the beta relation; equals alpha(n, j) to roundoff."""
    c = 2.0 / (n - 1.0)
    lsurf = log(n) + _log_ball_volume(n)
    return beta(n, j) * 2.0 * n * ball_volume(n) / (j * ball_intrinsic_volume(n, j)) \
        * exp(c * lsurf)


def _log_ball_volume(n: int) -> float:
    return 0.5 * n * log(pi) - lgamma(0.5 * n + 1.0)


def _alpha_vector(n: int) -> np.ndarray:
    """alpha(n, j) for j = 1..n in one vectorized sweep."""
    c = 2.0 / (n - 1.0)
    j = np.arange(1, n + 1, dtype=float)
    lv1 = log(n) + _log_ball_volume(n) - _log_ball_volume(n - 1)
    return (1.0 - 2.0 / (n + 1.0)) * np.exp(c * lv1 + gammaln(j + 1.0 + c) - gammaln(j + 1.0))


# -- tiling numbers ----------------------------------------------------------------

@dataclass(frozen=True)
class TilingNumber:
    """Exact value when known (m in {1, 2}); otherwise an interval marker."""

    kind: str
    m: int              # subscript: tilings of R^m govern approximation in R^{m+1}
    value: float = None
    exact: bool = False
    lower: float = 0.0
    upper: float = float("inf")
    note: str = ""

    def to_dict(self):
        return {"kind": self.kind, "m": self.m, "value": self.value,
                "exact": self.exact, "lower": self.lower, "upper": self.upper,
                "note": self.note}


_EXACT_TILING = {
    ("del", 1): 1.0 / 6.0,
    ("div", 1): 1.0 / 12.0,
    ("del", 2): 1.0 / (2.0 * sqrt(3.0)),
    ("div", 2): 5.0 / (18.0 * sqrt(3.0)),
    ("ldel", 1): 1.0 / 16.0,
    ("ldiv", 1): 1.0 / 16.0,
    ("ldel", 2): 1.0 / (6.0 * sqrt(3.0)) - 1.0 / (8.0 * pi),
    ("ldiv", 2): 5.0 / (18.0 * sqrt(3.0)) - 1.0 / (4.0 * pi),
}


def tiling_number(kind: str, m: int) -> TilingNumber:
    """del/div/ldel/ldiv tiling number with subscript m = n - 1."""
    if kind not in ("del", "div", "ldel", "ldiv"):
        raise ValueError("kind must be del, div, ldel or ldiv")
    if m < 1:
        raise ValueError("subscript must be >= 1")
    if (kind, m) in _EXACT_TILING:
        v = _EXACT_TILING[(kind, m)]
        return TilingNumber(kind, m, value=v, exact=True, lower=v, upper=v)
    n = m + 1
    base = n / (2.0 * pi * exp(1.0))
    if kind == "del":
        return TilingNumber(kind, m, lower=base * (1.0 + log(n) / n - 2.0 / n),
                            upper=base * (1.0 + 25.0 * log(n) / n),
                            note="unknown, bounds only (Stirling-type band)")
    if kind == "div":
        return TilingNumber(kind, m, lower=0.0,
                            upper=base * (1.0 + 25.0 * log(n) / n),
                            note="unknown, bounds only (dominated by the del band)")
    if kind == "ldiv":
        return TilingNumber(kind, m, lower=0.25 / (pi * exp(1.0)),
                            upper=0.97 / (pi * exp(1.0)),
                            note="unknown, bounds only (up to o(1) terms)")
    return TilingNumber(kind, m, lower=0.0, upper=float("inf"),
                        note="unknown; only the order in the dimension is known")


def known_tiling_numbers() -> dict:
    """The exactly known slice of the tiling-number table."""
    return {f"{kind}_{m}": v for (kind, m), v in _EXACT_TILING.items()}


# -- Wills helpers --------------------------------------------------------------------

def wills_ball(n: int) -> float:
    """W(D_n) = sum_j V_j(D_n)."""
    return sum(ball_intrinsic_volume(n, j) for j in range(n + 1))


def what_hat(n: int) -> tuple:
    """(sum_j j V_j(D_n), V_1(D_n) W(D_{n-1})): two routes to the same value."""
    if n < 2:
        raise ValueError("need n >= 2")
    direct = sum(j * ball_intrinsic_volume(n, j) for j in range(n + 1))
    product = ball_intrinsic_volume(n, 1) * wills_ball(n - 1)
    return direct, product


# -- the inequality suite ----------------------------------------------------------------

@dataclass(frozen=True)
class InequalityRecord:
    name: str
    n: int
    ok: bool
    margin: float           # smallest slack over all links/indices (negative = violated)
    worst_index: int = None
    note: str = ""

    def to_dict(self):
        return {"inequality": self.name, "n": self.n, "ok": self.ok,
                "margin": self.margin, "worst_index": self.worst_index,
                "note": self.note}


def _chain(*values):
    """Minimum slack of a chain v_0 <= v_1 <= ... <= v_k."""
    return min(values[i + 1] - values[i] for i in range(len(values) - 1))


def _record(name, n, margin, worst=None, note=""):
    return InequalityRecord(name, n, bool(margin >= -SLACK), float(margin), worst, note)


def _stirling_bounds(n):
    # in log space; slack is scaled by the log magnitude so it stays above
    # one ulp of the compared values
    la = 0.5 * log(2.0 * pi * n) + n * (log(n) - 1.0)
    lb = lgamma(n + 1.0)
    margin = _chain(la, lb, la + 1.0 / (12.0 * n), la + log(1.0 + 1.0 / n))
    scale = max(1.0, abs(la))
    return _record("stirling_bounds", n, margin / scale)


def _ball_volume_band(n):
    lref = -0.5 * log(pi * n) + 0.5 * n * log(2.0 * pi * exp(1.0) / n)
    lv = _log_ball_volume(n)
    lo = lref + log(1.0 - 1.0 / n) if n > 1 else -np.inf
    scale = max(1.0, abs(lref))
    return _record("ball_volume_band", n, _chain(lo, lv, lref) / scale)


def _intrinsic_width_band(n):
    v1 = exp(log(n) + _log_ball_volume(n) - _log_ball_volume(n - 1))
    ref = sqrt(2.0 * pi * n)
    return _record("intrinsic_width_band", n, _chain(ref * (1.0 - 1.0 / n), v1, ref))


def _sphere_area_power_band(n):
    s = exp(2.0 / (n - 1.0) * (log(n) + _log_ball_volume(n)))
    base = 2.0 * pi * exp(1.0) / n
    margin = _chain(base, s, base * (2.0 * exp(1.0)) ** (1.0 / (n - 1.0)),
                    base * (1.0 + 8.0 / n))
    return _record("sphere_area_power_band", n, margin,
                   note="the last link fails at n = 2 and is recorded as a finding"
                   if margin < -SLACK else "")


def _gamma_shift_band(n):
    g = exp(lgamma(1.0 + 2.0 / (n - 1.0)))
    return _record("gamma_shift_band", n, _chain(1.0 - 2.0 / n, g, 1.0 + 2.0 / n))


def _gamma_ratio_product(n):
    c = 2.0 / (n - 1.0)
    j = np.arange(1, n + 1, dtype=float)
    ratio = np.exp(gammaln(j + 1.0 + c) - gammaln(j + 1.0))
    prod = exp(lgamma(1.0 + c)) * np.cumprod(1.0 + c / j)
    # the product identity is exact; only accumulated roundoff (~n eps) remains
    ident = np.max(np.abs(ratio - prod) / ratio)
    ident_tol = max(SLACK, 20.0 * n * np.finfo(float).eps)
    harmonic = np.cumsum(1.0 / j)
    upper = (1.0 + 2.0 / n) * np.exp(c * harmonic)
    margin = float(np.min(upper - ratio))
    ok_margin = min(margin, SLACK if ident <= ident_tol else ident_tol - ident)
    worst = int(np.argmin(upper - ratio)) + 1
    return _record("gamma_ratio_product", n, ok_margin, worst)


def _gamma_ratio_band(n):
    c = 2.0 / (n - 1.0)
    j = np.arange(1, n + 1, dtype=float)
    ratio = np.exp(gammaln(j + 1.0 + c) - gammaln(j + 1.0))
    upper = 1.0 + 25.0 * np.log(j + 1.0) / n
    m1 = float(np.min(ratio - 1.0))
    m2 = float(np.min(upper - ratio))
    margin = min(m1, m2)
    worst = int(np.argmin(upper - ratio)) + 1
    if n >= 10:
        margin = min(margin, (1.0 + 4.0 * log(n) / n) - float(ratio[-1]))
    return _record("gamma_ratio_band", n, margin, worst)


def _alpha_band(n):
    a = _alpha_vector(n)
    lo = 1.0 + log(n) / n - 2.0 / n
    hi = 1.0 + 120.0 * log(n) / n
    margin = min(float(np.min(a - lo)), float(np.min(hi - a)))
    worst = int(np.argmin(np.minimum(a - lo, hi - a))) + 1
    if n >= 4:
        margin = min(margin, float(np.min(a - 1.0)))
    return _record("alpha_band", n, margin, worst)


def _alpha_ratio_band(n):
    a = _alpha_vector(n)
    j = np.arange(1, n, dtype=float)
    ratio = a[-1] / a[:-1]
    lo = 1.0 + 2.0 / n ** 2
    hi = 1.0 + np.minimum(1.0 / j, 3.0 * log(n) / n)
    margin = min(float(np.min(ratio - lo)), float(np.min(hi - ratio)))
    worst = int(np.argmin(np.minimum(ratio - lo, hi - ratio))) + 1
    return _record("alpha_ratio_band", n, margin, worst)


def _beta_band(n):
    a = _alpha_vector(n)
    c = 2.0 / (n - 1.0)
    lsurf = log(n) + _log_ball_volume(n)
    # beta / (j V_j / (4 pi e |D_n|)) = alpha * (2 pi e / n) * |dD_n|^(-2/(n-1))
    ratio = a * (2.0 * pi * exp(1.0) / n) * exp(-c * lsurf)
    lo = 1.0 + 14.0 * log(n) / n
    hi = 1.0 + 120.0 * log(n) / n
    margin = min(float(np.min(ratio - lo)), float(np.min(hi - ratio)))
    worst = int(np.argmin(np.minimum(ratio - lo, hi - ratio))) + 1
    return _record("beta_band", n, margin, worst,
                   note="the claimed lower constant is too large for low j; finding"
                   if margin < -SLACK else "")


def _tiling_number_band(n):
    if n not in (2, 3):
        return None
    d = _EXACT_TILING[("del", n - 1)]
    base = n / (2.0 * pi * exp(1.0))
    margin = _chain(base * (1.0 + log(n) / n - 2.0 / n), d,
                    base * (1.0 + 25.0 * log(n) / n))
    return _record("tiling_number_band", n, margin)


_CHECKS = [_stirling_bounds, _ball_volume_band, _intrinsic_width_band,
           _sphere_area_power_band, _gamma_shift_band, _gamma_ratio_product,
           _gamma_ratio_band, _alpha_band, _alpha_ratio_band, _beta_band,
           _tiling_number_band]

# Claims that fail numerically as printed; they are reported as findings
# and deliberately NOT adjusted.
EXPECTED_FINDINGS = {
    "sphere_area_power_band": lambda n: n == 2,
    "beta_band": lambda n: True,
}


def appendix_b_suite(n_max: int = 1000):
    """One record per (inequality, n) for 2 <= n <= n_max."""
    if n_max > 2000:
        raise ValueError("suite supported up to n_max = 2000")
    records = []
    for n in range(2, n_max + 1):
        for check in _CHECKS:
            rec = check(n)
            if rec is not None:
                records.append(rec)
    return records


def suite_findings(records) -> list:
    """The failing records of a suite run."""
    return [r for r in records if not r.ok]


def findings_all_expected(records) -> bool:
    """True when every failure belongs to a documented finding family."""
    return all(EXPECTED_FINDINGS.get(r.name, lambda n: False)(r.n)
               for r in suite_findings(records))
