import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from fibeuler.core import PrecisionContext
from fibeuler.exact import euler_transform, product_expansion_oracle
from fibeuler.logseries import (
    DomainError,
    PoleError,
    b_of_x,
    g_one_reduced,
    g_term,
    g_term_variant,
    g_term_value,
    log_u,
    log_u_term,
    saddle_lhs,
    saddle_term,
)

ZS = [-1, 0, 1, 2]
FIB = {-1: 1, 0: 0, 1: 1, 2: 1, 3: 2}


def fd1(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def fd2(f, x, h):
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)


def rel(a, b):
    return abs(a - b) / max(abs(b), mpf(1))


def test_log_u_near_zero(ctx30):
    v = log_u(mpf("1e-12"), 0, ctx30)
    assert 0 < v.value < mpf("2e-12")


def test_log_u_first_term():
    assert log_u_term(1, mpf("0.5"), 0, 1) == 2


def test_saddle_first_term():
    assert saddle_term(1, mpf("0.5"), 0, 1) == 10


@pytest.mark.parametrize("x", ["0.1", "0.3", "0.4"])
@pytest.mark.parametrize("z", ZS)
def test_log_u_against_truncated_product(x, z):
    # oracle: U(x) ~ sum_{n<=200} a_n x^n from the factor-by-factor expansion
    ctx = PrecisionContext(target_digits=25, work_digits=50)
    terms = product_expansion_oracle(z, 200).terms
    with ctx.workdps():
        xv = mpf(x)
        poly = mpmath.polyval(list(reversed(terms)), xv)
        assert rel(log_u(xv, z, ctx).value, mpmath.log(poly)) < mpf(10) ** -20


@pytest.mark.parametrize("z", ZS)
def test_log_u_against_truncated_series_at_half(z):
    # at x = 0.5 the power series tail beyond degree 200 is ~1e-10, so use 700 terms
    ctx = PrecisionContext(target_digits=25, work_digits=50)
    terms = euler_transform(z, 700).terms
    with ctx.workdps():
        poly = mpmath.polyval(list(reversed(terms)), mpf("0.5"))
        assert rel(log_u("0.5", z, ctx).value, mpmath.log(poly)) < mpf(10) ** -20


@pytest.mark.parametrize("x", ["0.3", "0.5", "0.6"])
@pytest.mark.parametrize("z", ZS)
def test_saddle_lhs_is_log_derivative(x, z, ctx_fd):
    with ctx_fd.workdps():
        xv = mpf(x)
        h = mpf(10) ** -(ctx_fd.work_digits // 3)
        L = lambda t: log_u(t, z, ctx_fd).value  # noqa: E731
        expected = xv * fd1(L, xv, h)
        assert rel(saddle_lhs(xv, z, ctx_fd).value, expected) < mpf(10) ** -10


@pytest.mark.parametrize("x", ["0.3", "0.5", "0.6"])
@pytest.mark.parametrize("z", ZS)
def test_b_of_x_is_second_log_derivative(x, z, ctx_fd):
    with ctx_fd.workdps():
        xv = mpf(x)
        L = lambda t: log_u(t, z, ctx_fd).value  # noqa: E731
        h1 = mpf(10) ** -(ctx_fd.work_digits // 3)
        h2 = mpf(10) ** -(ctx_fd.work_digits // 4)
        expected = xv * fd1(L, xv, h1) + xv**2 * fd2(L, xv, h2)
        assert rel(b_of_x(xv, z, ctx_fd).value, expected) < mpf(10) ** -8


@pytest.mark.parametrize("z", ZS)
def test_fd_error_is_second_order(z):
    # halving h should cut the central-difference error by ~4
    ctx = PrecisionContext(target_digits=20, work_digits=60)
    with ctx.workdps():
        x = mpf("0.5")
        exact = saddle_lhs(x, z, ctx).value
        L = lambda t: log_u(t, z, ctx).value  # noqa: E731
        errs = [abs(x * fd1(L, x, h) - exact) for h in (mpf("1e-3"), mpf("5e-4"), mpf("2.5e-4"))]
        for a, b in zip(errs, errs[1:]):
            assert 3.5 < a / b < 4.5


def test_g_term_matches_per_term_second_derivative():
    ctx = PrecisionContext(target_digits=20, work_digits=60)
    with ctx.workdps():
        x = mpf("0.55")
        f = lambda t: log_u_term(5, t, FIB[1], FIB[2])  # noqa: E731
        expected = x**2 * fd2(f, x, mpf(10) ** -15)
        assert rel(g_term(5, x, 1, ctx), expected) < mpf(10) ** -20


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.01, max_value=0.6), st.sampled_from(ZS))
def test_g_one_equals_reduced_form(r, z):
    ctx = PrecisionContext(target_digits=30, work_digits=50)
    with ctx.workdps():
        rv = mpf(r)
        assert rel(g_term(1, rv, z, ctx), g_one_reduced(rv, FIB[z], FIB[z + 1])) < mpf(10) ** -40


@pytest.mark.parametrize("z", ZS)
def test_variant_g_coincides_only_when_f_z_vanishes(z):
    with mpmath.workdps(40):
        x = mpf("0.45")
        fz, fz1 = FIB[z], FIB[z + 1]
        same = g_term_variant(3, x, fz, fz1) == g_term_value(3, x, fz, fz1)
        assert same == (fz == 0)


def test_g_term_root_test():
    ctx = PrecisionContext(30)
    with ctx.workdps():
        inv_phi = 2 / (1 + mpmath.sqrt(5))
        val = abs(g_term(200, "0.61", 0, ctx)) ** (mpf(1) / 200)
        assert abs(val - inv_phi) < 0.05


def test_g_term_near_zero(ctx30):
    for k in (1, 2, 7):
        assert abs(g_term(k, "1e-15", 2, ctx30)) < mpf("1e-10")


@pytest.mark.parametrize("z", ZS)
def test_saddle_lhs_monotone(z, ctx30):
    grid = [mpf(i) / 100 for i in range(1, 62)]
    values = [saddle_lhs(x, z, ctx30).value for x in grid]
    assert all(b > a for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("fn", [log_u, saddle_lhs, b_of_x])
@pytest.mark.parametrize("x", ["0.05", "0.3", "0.6", "0.618"])
def test_tail_bounds_within_tolerance(fn, x, ctx30):
    v = fn(x, 1, ctx30)
    assert v.tail_bound <= ctx30.tail_tol
    assert v.truncation_K >= 1


def test_domain_errors(ctx30):
    with pytest.raises(DomainError):
        log_u(0, 0, ctx30)
    with pytest.raises(DomainError):
        saddle_lhs(-0.1, 0, ctx30)
    with ctx30.workdps():
        boundary = (mpmath.sqrt(5) - 1) / 2
    with pytest.raises(PoleError):
        log_u(boundary, 0, ctx30)
    with pytest.raises(PoleError):
        b_of_x(0.7, 0, ctx30)
    with pytest.raises(PoleError):
        g_term(1, boundary, 0, ctx30)
    assert g_term(2, boundary, 0, ctx30) > 0
    with pytest.raises(DomainError):
        g_term(0, 0.3, 0, ctx30)
