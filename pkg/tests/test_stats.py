import math

import mpmath as mp
import pytest
from hypothesis import assume, given, settings, strategies as st

import oracles
from melorig.errors import BadDf, DegenerateX, LengthMismatch, SingularSystem, TooFewSamples, ZeroVariance
from melorig.stats import (
    linear_regression,
    ols_no_intercept,
    pairwise_composer_tests,
    quadratic_fit,
    student_t_isf,
    student_t_sf,
    welch_t_test,
)

# --- fixtures and their frozen 50-digit oracle values (tests/oracles.py) ---

X10 = [3.238, 1.508, 6.509, 0.724, 5.359, 3.657, 0.58, 5.074, 0.375, 4.336]
Y10 = [-0.372, 0.63, -4.722, 1.848, -1.745, -0.561, -0.597, -3.796, 0.348, -2.003]
LINREG_10 = {
    "slope": -0.78374821131623264,
    "intercept": 1.3608343906877056,
    "r": -0.86494368411946656,
    "r_squared": 0.74812757669815555,
    "p_value": 0.0012327010524162985,
    "stderr_slope": 0.16078074907998017,
}

X20 = [1954885, 188507, 1731090, 650258, 374085, 323805, 686115, 1650640, 443380, 1205040,
       1313936, 807555, 1140714, 219299, 213242, 491322, 1392760, 912425, 696880, 1212568]
Y20 = [0.7292, 0.7641, 0.7886, 0.682, 0.7562, 0.8186, 0.6561, 0.7504, 0.7491, 0.7212,
       0.788, 0.755, 0.6882, 0.7936, 0.7856, 0.8022, 0.836, 0.7772, 0.7629, 0.6972]
OLS_20 = {
    "coef": 6.268787008888576e-7,
    "stderr": 8.8628638897247643e-8,
    "t_stat": 7.0730940775885624,
    "p_value": 9.9215351878572538e-7,
    "ci_low": 4.4137682776745031e-7,
    "ci_high": 8.1238057401026489e-7,
    "r2_uncentered": 0.72475200812710263,
    "r2_adj_uncentered": 0.71026527171273961,
    "f_stat": 50.028659830418396,
    "log_likelihood": -9.8965941279664071,
    "aic": 21.793188255932814,
    "bic": 22.788920529486805,
    "durbin_watson": 1.5815868737617618,
    "jarque_bera": 1.0790221906802911,
    "jb_p": 0.58303323036795549,
    "skew": -0.29750672242883405,
    "kurtosis": 2.0300589557839301,
}

XQ = [2.377, -0.431, 1.476, 0.972, 0.899, 0.281, 2.2, 2.723, 0.37, 1.321, -1.697, 1.507]
YQ = [0.227, -0.504, 0.999, 0.747, 0.653, 0.797, 0.928, 0.385, 0.704, 1.02, -1.503, 1.048]
QUAD_12 = {
    "c0": 0.37256075732155452,
    "c1": 0.74306900881007103,
    "c2": -0.27064897695134562,
    "r_squared": 0.89735673133490366,
}

# (t, df) -> upper tail, by quadrature of the density
T_SF = {
    (1, 8): 0.17329675354366712391,
    (2.5, 3): 0.043853323504032773625,
    (-1.7, 12.5): 0.94307050816310596667,
    (0.3, 1): 0.40722642092225765968,
    (10, 2): 0.0049262285116628454234,
    (40, 50): 6.2062118921863527931e-40,
    (1.96, 1e4): 0.025011760115916524769,
    (4, 0.5): 0.15961004149433576524,
    (0.01, 300): 0.49601396697944091177,
}


def test_frozen_values_match_live_oracles():
    for k, v in oracles.linear_regression(X10, Y10).items():
        assert float(v) == pytest.approx(LINREG_10[k], rel=1e-15)
    for k, v in oracles.ols_no_intercept(Y20, X20).items():
        assert float(v) == pytest.approx(OLS_20[k], rel=1e-15)
    for k, v in oracles.quadratic(XQ, YQ).items():
        assert float(v) == pytest.approx(QUAD_12[k], rel=1e-15)
    for (t, df), v in list(T_SF.items())[:4]:
        assert float(oracles.t_sf_beta(t, df)) == pytest.approx(v, rel=1e-15)


# --- student t ----------------------------------------------------------

@pytest.mark.parametrize("key", list(T_SF))
def test_t_sf_fixtures(key):
    assert abs(student_t_sf(*key) - T_SF[key]) <= 1e-10


def test_t_sf_limits():
    assert student_t_sf(0.0, 3.7) == 0.5
    assert student_t_sf(math.inf, 5) == 0.0
    assert student_t_sf(-math.inf, 5) == 1.0
    assert student_t_sf(1e6, 2) < 1e-11
    with pytest.raises(BadDf):
        student_t_sf(1.0, 0)


@settings(max_examples=300, deadline=None)
@given(st.floats(-50, 50), st.floats(0.05, 1e4))
def test_t_sf_symmetry(t, df):
    assert abs(student_t_sf(t, df) + student_t_sf(-t, df) - 1.0) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.floats(-50, 50), st.floats(0.1, 1e4))
def test_t_sf_vs_mpmath(t, df):
    assert abs(student_t_sf(t, df) - float(oracles.t_sf_beta(t, df))) <= 1e-10


def test_t_isf_inverts():
    for df in (1, 2.5, 11, 427, 5000):
        q = student_t_isf(0.025, df)
        assert q == pytest.approx(float(oracles.t_isf(0.025, df)), rel=1e-12)


# --- linear regression --------------------------------------------------

def test_exact_line():
    r = linear_regression([1, 2, 3], [2, 4, 6])
    assert (r.slope, r.intercept, r.r, r.r_squared, r.p_value) == (2.0, 0.0, 1.0, 1.0, 0.0)


def test_regression_errors():
    with pytest.raises(DegenerateX):
        linear_regression([1, 1, 1], [1, 2, 3])
    with pytest.raises(LengthMismatch):
        linear_regression([1, 2, 3], [1, 2])


def test_regression_fixture():
    r = linear_regression(X10, Y10)
    for k, v in LINREG_10.items():
        assert getattr(r, k) == pytest.approx(v, abs=1e-9), k


finite = st.floats(-1e3, 1e3, allow_nan=False)


@settings(max_examples=300)
@given(st.lists(st.tuples(finite, finite), min_size=3, max_size=40))
def test_regression_invariants(points):
    xs, ys = zip(*points)
    assume(max(xs) - min(xs) > 1e-3)
    r = linear_regression(xs, ys)
    assert abs(r.r_squared - r.r * r.r) <= 1e-12
    assert -1.0 <= r.r <= 1.0 and 0.0 <= r.p_value <= 1.0


@settings(max_examples=200)
@given(st.lists(st.tuples(finite, finite), min_size=3, max_size=40), st.floats(0.01, 100))
def test_regression_scale(points, c):
    xs, ys = zip(*points)
    assume(max(xs) - min(xs) > 1e-3 and max(ys) - min(ys) > 1e-3)
    a = linear_regression(xs, ys)
    b = linear_regression(xs, [c * y for y in ys])
    assert abs(a.r - b.r) <= 1e-10 and abs(a.p_value - b.p_value) <= 1e-10
    assert b.slope == pytest.approx(c * a.slope, rel=1e-9, abs=1e-12)


# --- OLS through the origin ---------------------------------------------

def test_ols_exact():
    r = ols_no_intercept([3, 6, 9.0], [1, 2, 3])
    assert r.coef == 3.0 and r.r2_uncentered == 1.0
    assert all(e == 0 for e in r.residuals)


def test_ols_two_equal_points():
    assert ols_no_intercept([5, 5], [2, 2]).coef == 2.5


def test_ols_degenerate():
    with pytest.raises(DegenerateX):
        ols_no_intercept([1, 2], [0, 0])


def test_ols_fixture():
    r = ols_no_intercept(Y20, X20)
    for k, v in OLS_20.items():
        assert getattr(r, k) == pytest.approx(v, rel=1e-8, abs=1e-8 * max(1.0, abs(v))), k
    assert r.ci_low <= r.coef <= r.ci_high
    assert r.f_stat == pytest.approx(r.t_stat ** 2, rel=1e-12)


ols_points = st.lists(st.tuples(st.floats(0.5, 1e3), st.floats(-1e3, 1e3)), min_size=3, max_size=40)


@settings(max_examples=300)
@given(ols_points)
def test_ols_invariants(points):
    xs, ys = zip(*points)
    r = ols_no_intercept(ys, xs)
    e = r.residuals
    xnorm = math.hypot(*xs)  # hypot scales, so tiny values do not underflow
    norm = xnorm * math.hypot(*e)
    # floor: when the fit is exact up to rounding, e is pure rounding noise
    # (relative eps for normal numbers; a subnormal coef is quantized to ulp(0))
    floor = 8 * len(xs) * (2.0 ** -52 * xnorm * math.hypot(*ys) + xnorm ** 2 * math.ulp(0.0))
    assert abs(math.fsum(x * v for x, v in zip(xs, e))) <= 1e-9 * norm + floor
    if not math.isnan(r.r2_uncentered):
        assert -1e-12 <= r.r2_uncentered <= 1 + 1e-12
    if r.stderr > 0:
        assert r.ci_low <= r.coef <= r.ci_high


@settings(max_examples=100)
@given(ols_points, st.floats(0.01, 100))
def test_ols_scale(points, c):
    xs, ys = zip(*points)
    a = ols_no_intercept(ys, xs)
    b = ols_no_intercept([c * y for y in ys], xs)
    assume(a.stderr > 0 and abs(a.t_stat) < 1e6)
    assert b.coef == pytest.approx(c * a.coef, rel=1e-9, abs=1e-300)
    assert abs(a.t_stat - b.t_stat) <= 1e-10 * max(1.0, abs(a.t_stat))
    assert abs(a.p_value - b.p_value) <= 1e-10


# --- t-tests ------------------------------------------------------------

def test_welch_identical():
    r = welch_t_test([1, 2, 3, 4], [1, 2, 3, 4])
    assert r.t_stat == 0.0 and r.p_value == 1.0


def test_welch_example():
    r = welch_t_test([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
    assert r.t_stat == -1.0 and r.df == 8.0
    assert abs(r.p_value - float(oracles.welch([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])["p_value"])) <= 1e-12
    assert round(r.p_value, 4) == 0.3466


def test_welch_errors():
    with pytest.raises(TooFewSamples):
        welch_t_test([1], [1, 2])
    with pytest.raises(ZeroVariance):
        welch_t_test([2, 2], [2, 2, 2])


def test_pooled_variant():
    a, b = [0.81, 0.84, 0.86, 0.83], [0.88, 0.9, 0.87, 0.91, 0.93, 0.9]
    r = welch_t_test(a, b, equal_var=True)
    assert r.df == 8.0
    na, nb = len(a), len(b)
    ma, mb = sum(a) / na, sum(b) / nb
    va = sum((v - ma) ** 2 for v in a) / (na - 1)
    vb = sum((v - mb) ** 2 for v in b) / (nb - 1)
    sp = ((na - 1) * va + (nb - 1) * vb) / (na + nb - 2)
    assert r.t_stat == pytest.approx((ma - mb) / math.sqrt(sp * (1 / na + 1 / nb)), rel=1e-12)


samples = st.lists(st.floats(-100, 100), min_size=2, max_size=30)


@settings(max_examples=300)
@given(samples, samples)
def test_welch_antisymmetry(a, b):
    try:
        ab, ba = welch_t_test(a, b), welch_t_test(b, a)
    except ZeroVariance:  # includes variances that underflow to zero
        assume(False)
    assert ab.t_stat == -ba.t_stat and ab.p_value == ba.p_value
    assert 0.0 <= ab.p_value <= 1.0
    if ab.mean_a != ab.mean_b:
        assert (ab.t_stat > 0) == (ab.mean_a > ab.mean_b)


def test_pairwise_shape_and_order():
    groups = {c: [0.8 + 0.01 * i + 0.001 * k for k in range(5)] for i, c in
              enumerate(["Schumann", "Liszt", "Beethoven", "Schubert", "Chopin", "Brahms"])}
    tests = pairwise_composer_tests(groups)
    assert len(tests) == 15
    assert (tests[0].composer_a, tests[0].composer_b) == ("Beethoven", "Brahms")
    assert tests[0].label == "Beethoven and Brahms:"


def test_pairwise_identical_groups():
    tests = pairwise_composer_tests({c: [0.1, 0.5, 0.9] for c in "ABCD"})
    assert len(tests) == 6
    assert all(t.result.t_stat == 0 and not t.significant for t in tests)


def test_pairwise_errors_collected():
    tests = pairwise_composer_tests({"A": [1, 1], "B": [1, 1], "C": [1, 2, 3]})
    assert [t.error is not None for t in tests] == [True, False, False]


@given(st.integers(2, 9))
def test_pairwise_count(k):
    groups = {f"c{i}": [i, i + 1.0, i + 3.0] for i in range(k)}
    assert len(pairwise_composer_tests(groups)) == k * (k - 1) // 2


def test_ttest_formatting():
    r = welch_t_test([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
    assert r.formatted() == "t=-1.0, p=0.3466"
    tiny = welch_t_test([10, 10.1, 10.2], [0, 0.1, 0.2])
    assert tiny.formatted().endswith("p=0.0")


# --- quadratic ----------------------------------------------------------

def test_exact_parabola():
    xs = [0.0, 0.25, 0.5, 0.75, 1.0]
    q = quadratic_fit(xs, [1 - (x - 0.5) ** 2 for x in xs])
    assert abs(q.c2 + 1) <= 1e-9 and q.r_squared == pytest.approx(1.0, abs=1e-12)
    assert q.curvature == -1


def test_collinear_points():
    q = quadratic_fit([1, 2, 3, 4, 5], [3, 5, 7, 9, 11])
    assert abs(q.c2) <= 1e-9 and q.c1 == pytest.approx(2) and q.c0 == pytest.approx(1)


def test_quadratic_fixture():
    q = quadratic_fit(XQ, YQ)
    for k, v in QUAD_12.items():
        assert getattr(q, k) == pytest.approx(v, abs=1e-8), k
    c0, c1, c2, r2 = q
    assert (c0, c2) == (q.c0, q.c2)


def test_quadratic_large_regressor():
    # search-count scale x; compare against the exact-arithmetic solve
    xs = [float(v) for v in X20]
    q = quadratic_fit(xs, Y20)
    ref = oracles.quadratic(xs, Y20)
    assert q.c2 == pytest.approx(float(ref["c2"]), rel=1e-6)
    assert q.r_squared == pytest.approx(float(ref["r_squared"]), abs=1e-10)


def test_quadratic_singular():
    with pytest.raises(SingularSystem):
        quadratic_fit([1, 1, 2, 2], [1, 2, 3, 4])
    with pytest.raises(TooFewSamples):
        quadratic_fit([1, 2, 3], [1, 2, 3])
