"""Independent extended-precision reference computations (mpmath, 50 digits).

Nothing in here imports the package under test.
"""

from __future__ import annotations

import mpmath as mp

mp.mp.dps = 50


def _m(v):
    return [mp.mpf(a) for a in v]


def t_pdf(u, df):
    df = mp.mpf(df)
    c = mp.gamma((df + 1) / 2) / (mp.sqrt(df * mp.pi) * mp.gamma(df / 2))
    return c * (1 + u * u / df) ** (-(df + 1) / 2)


def t_sf_quad(t, df):
    """Upper tail by numerical integration of the density."""
    t = mp.mpf(t)
    return mp.quad(lambda u: t_pdf(u, df), [t, mp.inf])


def t_sf_beta(t, df):
    t, df = mp.mpf(t), mp.mpf(df)
    half = mp.betainc(df / 2, mp.mpf(1) / 2, 0, df / (df + t * t), regularized=True) / 2
    return half if t >= 0 else 1 - half


def t_isf(p, df):
    p = mp.mpf(p)
    return mp.findroot(lambda t: t_sf_beta(t, df) - p, mp.mpf(2))


def linear_regression(x, y):
    x, y = _m(x), _m(y)
    n = len(x)
    sx, sy = mp.fsum(x), mp.fsum(y)
    sxx = mp.fsum(a * a for a in x)
    sxy = mp.fsum(a * b for a, b in zip(x, y))
    syy = mp.fsum(b * b for b in y)
    # normal equations [[n, sx], [sx, sxx]] [b0, b1] = [sy, sxy]
    b0, b1 = mp.lu_solve(mp.matrix([[n, sx], [sx, sxx]]), mp.matrix([sy, sxy]))
    cxx = sxx - sx * sx / n
    cyy = syy - sy * sy / n
    cxy = sxy - sx * sy / n
    r = cxy / mp.sqrt(cxx * cyy)
    df = n - 2
    t = r * mp.sqrt(df / (1 - r * r))
    p = 2 * t_sf_beta(abs(t), df)
    stderr = mp.sqrt((1 - r * r) * cyy / cxx / df)
    return {"slope": b1, "intercept": b0, "r": r, "r_squared": r * r, "p_value": p, "stderr_slope": stderr}


def ols_no_intercept(y, x):
    x, y = _m(x), _m(y)
    n = len(x)
    sxx = mp.fsum(a * a for a in x)
    coef = mp.fsum(a * b for a, b in zip(x, y)) / sxx
    e = [b - coef * a for a, b in zip(x, y)]
    ssr = mp.fsum(v * v for v in e)
    syy = mp.fsum(b * b for b in y)
    df = n - 1
    s2 = ssr / df
    se = mp.sqrt(s2 / sxx)
    t = coef / se
    p = 2 * t_sf_beta(abs(t), df)
    q = t_isf(mp.mpf("0.025"), df)
    r2 = 1 - ssr / syy
    llf = -mp.mpf(n) / 2 * (mp.log(2 * mp.pi) + mp.log(ssr / n) + 1)
    me = mp.fsum(e) / n
    m2 = mp.fsum((v - me) ** 2 for v in e) / n
    m3 = mp.fsum((v - me) ** 3 for v in e) / n
    m4 = mp.fsum((v - me) ** 4 for v in e) / n
    skew = m3 / m2 ** mp.mpf(1.5)
    kurt = m4 / m2 ** 2
    jb = mp.mpf(n) / 6 * (skew ** 2 + (kurt - 3) ** 2 / 4)
    return {
        "coef": coef, "stderr": se, "t_stat": t, "p_value": p,
        "ci_low": coef - q * se, "ci_high": coef + q * se,
        "r2_uncentered": r2, "r2_adj_uncentered": 1 - mp.mpf(n) / df * (1 - r2),
        "f_stat": (syy - ssr) / s2, "log_likelihood": llf,
        "aic": -2 * llf + 2, "bic": -2 * llf + mp.log(n),
        "durbin_watson": mp.fsum((e[i] - e[i - 1]) ** 2 for i in range(1, n)) / ssr,
        "jarque_bera": jb, "jb_p": mp.exp(-jb / 2), "skew": skew, "kurtosis": kurt,
    }


def welch(a, b):
    a, b = _m(a), _m(b)
    na, nb = len(a), len(b)
    ma, mb = mp.fsum(a) / na, mp.fsum(b) / nb
    va = mp.fsum((v - ma) ** 2 for v in a) / (na - 1)
    vb = mp.fsum((v - mb) ** 2 for v in b) / (nb - 1)
    se2 = va / na + vb / nb
    t = (ma - mb) / mp.sqrt(se2)
    df = se2 ** 2 / ((va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1))
    return {"t_stat": t, "df": df, "p_value": 2 * t_sf_beta(abs(t), df)}


def quadratic(x, y):
    x, y = _m(x), _m(y)
    s = [mp.fsum(a ** k for a in x) for k in range(5)]
    rhs = [mp.fsum(b * a ** k for a, b in zip(x, y)) for k in range(3)]
    A = mp.matrix([[s[i + j] for j in range(3)] for i in range(3)])
    c = mp.lu_solve(A, mp.matrix(rhs))
    fitted = [c[0] + c[1] * a + c[2] * a * a for a in x]
    my = mp.fsum(y) / len(y)
    ssr = mp.fsum((b - f) ** 2 for b, f in zip(y, fitted))
    sst = mp.fsum((b - my) ** 2 for b in y)
    return {"c0": c[0], "c1": c[1], "c2": c[2], "r_squared": 1 - ssr / sst}
