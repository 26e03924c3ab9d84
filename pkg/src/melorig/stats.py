"""Regression and two-sample tests, with a self-contained Student-t tail.

Everything here is plain Python floats plus ``math``; numpy is used only
for the quadratic least-squares solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    BadDf,
    DegenerateX,
    LengthMismatch,
    MelorigError,
    SingularSystem,
    TooFewSamples,
    ZeroVariance,
)

BETA_CF_TOL = 1e-14
BETA_CF_MAX_ITER = 300
_TINY = 1e-300


# --- Student-t distribution ---------------------------------------------

def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, BETA_CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < BETA_CF_TOL:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def regularized_incomplete_beta(a: float, b: float, x: float, y: float | None = None) -> float:
    """I_x(a, b). Pass ``y = 1 - x`` when it is known more accurately than x."""
    if y is None:
        y = 1.0 - x
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log(y))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, y) / b


def student_t_sf(t: float, df: float) -> float:
    """Upper tail P(T >= t) of Student's t with ``df`` degrees of freedom."""
    if not df > 0:
        raise BadDf(f"degrees of freedom must be positive, got {df}")
    if math.isnan(t):
        return math.nan
    if t == 0.0:
        return 0.5
    if t < 0.0:
        return 1.0 - student_t_sf(-t, df)
    if math.isinf(t):
        return 0.0
    if math.isinf(df):
        return 0.5 * math.erfc(t / math.sqrt(2.0))
    t2 = t * t
    denom = df + t2
    return 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, df / denom, t2 / denom)


def two_sided_p(t: float, df: float) -> float:
    return min(1.0, 2.0 * student_t_sf(abs(t), df))


def student_t_isf(p: float, df: float) -> float:
    """Inverse of ``student_t_sf`` for p in (0, 0.5], by bisection."""
    if not 0.0 < p <= 0.5:
        raise ValueError(f"upper-tail probability must be in (0, 0.5], got {p}")
    lo, hi = 0.0, 1.0
    while student_t_sf(hi, df) > p:
        lo, hi = hi, hi * 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if student_t_sf(mid, df) > p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- helpers ------------------------------------------------------------

def _floats(v: Sequence[float]) -> list[float]:
    return [float(x) for x in v]


def _mean(v: Sequence[float]) -> float:
    return math.fsum(v) / len(v)


def _sample_var(v: Sequence[float]) -> float:
    m = _mean(v)
    return math.fsum((x - m) ** 2 for x in v) / (len(v) - 1)


# --- simple linear regression -------------------------------------------

@dataclass(frozen=True)
class RegressionResult:
    slope: float
    intercept: float
    r: float
    r_squared: float
    p_value: float
    stderr_slope: float
    n: int

    def predict(self, x: float) -> float:
        return self.intercept + self.slope * x


def linear_regression(x: Sequence[float], y: Sequence[float]) -> RegressionResult:
    """Least-squares line with intercept; p-value tests slope == 0."""
    x, y = _floats(x), _floats(y)
    n = len(x)
    if n != len(y):
        raise LengthMismatch(f"x has {n} values, y has {len(y)}")
    if n < 3:
        raise TooFewSamples(f"linear regression needs at least 3 points, got {n}")
    mx, my = _mean(x), _mean(y)
    sxx = math.fsum((a - mx) ** 2 for a in x)
    if sxx == 0.0:
        raise DegenerateX("x has zero variance")
    syy = math.fsum((b - my) ** 2 for b in y)
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    slope = sxy / sxx
    intercept = my - slope * mx
    r = 0.0 if syy == 0.0 else max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))
    df = n - 2
    # slope test from the residuals; near-perfect fits lose too much in 1 - r^2
    ssr = math.fsum((b - my - slope * (a - mx)) ** 2 for a, b in zip(x, y))
    stderr = math.sqrt(ssr / df / sxx)
    if stderr == 0.0:
        p = 0.0 if slope != 0.0 else 1.0
    else:
        p = two_sided_p(slope / stderr, df)
    return RegressionResult(slope, intercept, r, r * r, p, stderr, n)


# --- regression through the origin --------------------------------------

@dataclass(frozen=True)
class OlsResult:
    coef: float
    stderr: float
    t_stat: float
    p_value: float
    ci_low: float
    ci_high: float
    r2_uncentered: float
    r2_adj_uncentered: float
    f_stat: float
    f_pvalue: float
    log_likelihood: float
    aic: float
    bic: float
    durbin_watson: float
    jarque_bera: float
    jb_p: float
    skew: float
    kurtosis: float
    n: int
    residuals: tuple[float, ...] = ()

    @property
    def df_resid(self) -> int:
        return self.n - 1


def ols_no_intercept(y: Sequence[float], x: Sequence[float]) -> OlsResult:
    """Single-regressor OLS without a constant, with the usual diagnostics.

    R-squared is uncentered. ``kurtosis`` is the raw (non-excess) fourth
    standardized moment of the residuals.
    """
    y, x = _floats(y), _floats(x)
    n = len(x)
    if n != len(y):
        raise LengthMismatch(f"x has {n} values, y has {len(y)}")
    if n < 2:
        raise TooFewSamples(f"no-intercept OLS needs at least 2 points, got {n}")
    sxx = math.fsum(a * a for a in x)
    if sxx == 0.0:
        raise DegenerateX("sum of squared regressor values is zero")
    coef = math.fsum(a * b for a, b in zip(x, y)) / sxx
    resid = [b - coef * a for a, b in zip(x, y)]
    ssr = math.fsum(e * e for e in resid)
    syy = math.fsum(b * b for b in y)
    df_resid = n - 1
    nan = math.nan

    r2 = 1.0 - ssr / syy if syy > 0 else nan
    r2_adj = 1.0 - n / df_resid * (1.0 - r2)

    sigma2 = ssr / df_resid
    stderr = math.sqrt(sigma2 / sxx)
    if stderr > 0:
        t = coef / stderr
        p = two_sided_p(t, df_resid)
        half = student_t_isf(0.025, df_resid) * stderr
        f = (syy - ssr) / sigma2
    else:  # exact fit
        t = math.copysign(math.inf, coef) if coef else nan
        p = 0.0 if coef else 1.0
        half, f = 0.0, math.inf
    if ssr > 0:
        llf = -0.5 * n * (math.log(2.0 * math.pi) + math.log(ssr / n) + 1.0)
        dw = math.fsum((resid[i] - resid[i - 1]) ** 2 for i in range(1, n)) / ssr
    else:
        llf, dw = math.inf, nan
    f_p = p  # F(1, df) tail equals the two-sided t tail for one regressor

    me = _mean(resid)
    m2 = math.fsum((e - me) ** 2 for e in resid) / n
    if m2 ** 2 > 0:  # m2 can be positive yet underflow when raised
        skew = math.fsum((e - me) ** 3 for e in resid) / n / m2 ** 1.5
        kurt = math.fsum((e - me) ** 4 for e in resid) / n / m2 ** 2
        jb = n / 6.0 * (skew ** 2 + (kurt - 3.0) ** 2 / 4.0)
        jb_p = math.exp(-0.5 * jb)  # chi-square survival with 2 df
    else:
        skew = kurt = jb = jb_p = nan

    k = 1
    return OlsResult(
        coef=coef, stderr=stderr, t_stat=t, p_value=p,
        ci_low=coef - half, ci_high=coef + half,
        r2_uncentered=r2, r2_adj_uncentered=r2_adj,
        f_stat=f, f_pvalue=f_p,
        log_likelihood=llf, aic=-2.0 * llf + 2 * k, bic=-2.0 * llf + k * math.log(n),
        durbin_watson=dw, jarque_bera=jb, jb_p=jb_p, skew=skew, kurtosis=kurt,
        n=n, residuals=tuple(resid),
    )


# --- two-sample t-tests -------------------------------------------------

@dataclass(frozen=True)
class TTestResult:
    t_stat: float
    df: float
    p_value: float
    mean_a: float
    mean_b: float
    n_a: int
    n_b: int
    equal_var: bool = False

    def formatted(self) -> str:
        return f"t={round(self.t_stat, 4)}, p={round(self.p_value, 4)}"


def welch_t_test(a: Sequence[float], b: Sequence[float], *, equal_var: bool = False) -> TTestResult:
    """Two-sided two-sample t-test; Welch's form unless ``equal_var``."""
    a, b = _floats(a), _floats(b)
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise TooFewSamples(f"each sample needs at least 2 values, got {na} and {nb}")
    ma, mb = _mean(a), _mean(b)
    va, vb = _sample_var(a), _sample_var(b)
    if va == 0.0 and vb == 0.0:
        raise ZeroVariance("both samples are constant")
    if equal_var:
        df = float(na + nb - 2)
        pooled = ((na - 1) * va + (nb - 1) * vb) / df
        se2 = pooled * (1.0 / na + 1.0 / nb)
    else:
        qa, qb = va / na, vb / nb
        se2 = qa + qb
        wa, wb = qa / se2, qb / se2  # weights keep the squares from underflowing
        df = 1.0 / (wa * wa / (na - 1) + wb * wb / (nb - 1))
    t = (ma - mb) / math.sqrt(se2)
    return TTestResult(t, df, two_sided_p(t, df), ma, mb, na, nb, equal_var)


@dataclass(frozen=True)
class PairwiseTest:
    composer_a: str
    composer_b: str
    result: TTestResult | None
    error: MelorigError | None = None
    alpha: float = 0.05

    @property
    def significant(self) -> bool:
        return self.result is not None and self.result.p_value < self.alpha

    @property
    def label(self) -> str:
        return f"{self.composer_a} and {self.composer_b}:"


def pairwise_composer_tests(
    scores_by_composer: Mapping[str, Sequence[float]],
    *,
    alpha: float = 0.05,
    equal_var: bool = False,
) -> list[PairwiseTest]:
    """One test per unordered composer pair, names in lexicographic order."""
    names = sorted(scores_by_composer)
    if len(names) < 2:
        raise TooFewSamples(f"need at least 2 composers, got {len(names)}")
    out = []
    for a, b in combinations(names, 2):
        try:
            res = welch_t_test(scores_by_composer[a], scores_by_composer[b], equal_var=equal_var)
            out.append(PairwiseTest(a, b, res, alpha=alpha))
        except MelorigError as exc:
            out.append(PairwiseTest(a, b, None, exc, alpha=alpha))
    return out


# --- quadratic check ----------------------------------------------------

@dataclass(frozen=True)
class QuadraticFit:
    c0: float
    c1: float
    c2: float
    r_squared: float

    def __iter__(self):
        return iter((self.c0, self.c1, self.c2, self.r_squared))

    @property
    def curvature(self) -> int:
        return (self.c2 > 0) - (self.c2 < 0)

    def predict(self, x: float) -> float:
        return self.c0 + self.c1 * x + self.c2 * x * x


def quadratic_fit(x: Sequence[float], y: Sequence[float]) -> QuadraticFit:
    """Least squares y ~ c0 + c1 x + c2 x^2.

    The solve runs on standardized x and is mapped back, which keeps
    large-magnitude regressors (search counts) well conditioned.
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.shape != ya.shape:
        raise LengthMismatch(f"x has {xa.size} values, y has {ya.size}")
    if xa.size < 4:
        raise TooFewSamples(f"quadratic fit needs at least 4 points, got {xa.size}")
    if np.unique(xa).size < 3:
        raise SingularSystem("fewer than 3 distinct x values")
    m = float(xa.mean())
    s = float(np.abs(xa - m).max())
    u = (xa - m) / s
    design = np.column_stack([np.ones_like(u), u, u * u])
    (d0, d1, d2), _, rank, _ = np.linalg.lstsq(design, ya, rcond=None)
    if rank < 3:
        raise SingularSystem("Vandermonde system is rank deficient")
    c2 = d2 / (s * s)
    c1 = d1 / s - 2.0 * d2 * m / (s * s)
    c0 = d0 - d1 * m / s + d2 * m * m / (s * s)
    fitted = design @ np.array([d0, d1, d2])
    ssr = math.fsum((ya - fitted) ** 2)
    sst = math.fsum((ya - ya.mean()) ** 2)
    r2 = 1.0 - ssr / sst if sst > 0 else 1.0
    return QuadraticFit(float(c0), float(c1), float(c2), r2)
