"""Plain-text and CSV renderings of the statistics results."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Sequence

from .stats import OlsResult, PairwiseTest, QuadraticFit, RegressionResult

OLS_WIDTH = 78


def _g(v: float, spec: str) -> str:
    return "nan" if v is None or (isinstance(v, float) and math.isnan(v)) else format(v, spec)


def _pair(left: tuple[str, str], right: tuple[str, str]) -> str:
    half = OLS_WIDTH // 2
    l = left[0] + left[1].rjust(half - 1 - len(left[0])) + " "
    r = right[0] + right[1].rjust(OLS_WIDTH - half - len(right[0]))
    return l + r


def ols_report(res: OlsResult, *, dependent: str = "Melodic Originality", regressor: str = "Popularity") -> str:
    """Text block laid out like a statsmodels OLS summary (no date stamp)."""
    rule = "=" * OLS_WIDTH
    thin = "-" * OLS_WIDTH
    lines = [
        "OLS Regression Results".center(OLS_WIDTH),
        rule,
        _pair(("Dep. Variable:", dependent), ("R-squared (uncentered):", _g(res.r2_uncentered, ".3f"))),
        _pair(("Model:", "OLS"), ("Adj. R-squared (uncentered):", _g(res.r2_adj_uncentered, ".3f"))),
        _pair(("Method:", "Least Squares"), ("F-statistic:", _g(res.f_stat, ".4g"))),
        _pair(("No. Observations:", str(res.n)), ("Prob (F-statistic):", _g(res.f_pvalue, ".3g"))),
        _pair(("Df Residuals:", str(res.df_resid)), ("Log-Likelihood:", _g(res.log_likelihood, ".2f"))),
        _pair(("Df Model:", "1"), ("AIC:", _g(res.aic, ".4g"))),
        _pair(("Covariance Type:", "nonrobust"), ("BIC:", _g(res.bic, ".4g"))),
        rule,
        f"{'':<14}{'coef':>10}{'std err':>11}{'t':>10}{'P>|t|':>9}{'[0.025':>12}{'0.975]':>12}",
        thin,
        f"{regressor:<14}{_g(res.coef, '.4g'):>10}{_g(res.stderr, '.3g'):>11}{_g(res.t_stat, '.3f'):>10}"
        f"{_g(res.p_value, '.3f'):>9}{_g(res.ci_low, '.3g'):>12}{_g(res.ci_high, '.3g'):>12}",
        rule,
        _pair(("Durbin-Watson:", _g(res.durbin_watson, ".3f")), ("Jarque-Bera (JB):", _g(res.jarque_bera, ".3f"))),
        _pair(("Skew:", _g(res.skew, ".3f")), ("Prob(JB):", _g(res.jb_p, ".3g"))),
        _pair(("Kurtosis:", _g(res.kurtosis, ".3f")), ("", "")),
        rule,
        "Notes:",
        "[1] R-squared is computed without centering (uncentered) since the model",
        "    does not contain a constant.",
    ]
    return "\n".join(lines) + "\n"


OLS_FIELDS = ("coef", "stderr", "t_stat", "p_value", "ci_low", "ci_high", "r2_uncentered",
              "r2_adj_uncentered", "f_stat", "f_pvalue", "log_likelihood", "aic", "bic",
              "durbin_watson", "jarque_bera", "jb_p", "skew", "kurtosis", "n")


def write_ols_csv(res: OlsResult, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["field", "value"])
        for name in OLS_FIELDS:
            w.writerow([name, repr(getattr(res, name))])
    return path


def write_regression_csv(reg: RegressionResult, quad: QuadraticFit | None, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["model", "field", "value"])
        for name in ("slope", "intercept", "r", "r_squared", "p_value", "stderr_slope", "n"):
            w.writerow(["linear", name, repr(getattr(reg, name))])
        if quad is not None:
            for name in ("c0", "c1", "c2", "r_squared"):
                w.writerow(["quadratic", name, repr(getattr(quad, name))])
            w.writerow(["quadratic", "curvature", quad.curvature])
    return path


def write_ttests_csv(tests: Sequence[PairwiseTest], path: str | Path) -> Path:
    """Table-style rows ("A and B:", "t=..., p=...") plus raw numbers."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["#", "Test", "Results", "Significant", "t", "df", "p"])
        for i, pt in enumerate(tests, start=1):
            r = pt.result
            if r is None:
                w.writerow([i, pt.label, f"error: {pt.error}", "", "", "", ""])
            else:
                w.writerow([i, pt.label, r.formatted(), "yes" if pt.significant else "no",
                            repr(r.t_stat), repr(r.df), repr(r.p_value)])
    return path


def ttest_table(tests: Sequence[PairwiseTest]) -> str:
    width = max((len(t.label) for t in tests), default=10) + 2
    out = []
    for i, pt in enumerate(tests, start=1):
        res = pt.result.formatted() if pt.result else f"error: {pt.error}"
        mark = " *" if pt.significant else ""
        out.append(f"{i:>3}  {pt.label:<{width}}{res}{mark}")
    return "\n".join(out) + "\n"
