import mpmath
import pytest
from mpmath import mpf

from fibeuler.core import PrecisionContext
from fibeuler.logseries import saddle_lhs
from fibeuler.saddle import r_expansion, solve_saddle

ZS = [-1, 0, 1, 2]


def phi_minus_one(ctx):
    with ctx.workdps():
        return (mpmath.sqrt(5) - 1) / 2


@pytest.mark.parametrize("z", ZS)
@pytest.mark.parametrize("n", [1, 7, 100, 5000, 10**5])
def test_residual(n, z, ctx30):
    sp = solve_saddle(n, z, ctx30)
    assert 0 < sp.r < phi_minus_one(ctx30)
    assert sp.residual <= mpf(10) ** (-ctx30.target_digits + 2) * n
    # independent re-evaluation through the certified public series
    with ctx30.workdps():
        assert abs(saddle_lhs(sp.r, z, ctx30).value - n) <= mpf(10) ** -25 * n


def test_n_one_z0(ctx30):
    sp = solve_saddle(1, 0, ctx30)
    with ctx30.workdps():
        assert abs(saddle_lhs(sp.r, 0, ctx30).value - 1) < mpf(10) ** -28


@pytest.mark.parametrize("z", ZS)
def test_root_increases_with_n(z, ctx30):
    rs = [solve_saddle(n, z, ctx30).r for n in (1, 2, 5, 10, 50, 200, 1000, 10**4, 10**6)]
    assert all(b > a for a, b in zip(rs, rs[1:]))
    assert phi_minus_one(ctx30) - rs[-1] < mpf("1e-3")


def test_expansion_limit(ctx30):
    assert abs(r_expansion(10**30, 0, ctx30) - phi_minus_one(ctx30)) < mpf("1e-14")


def test_expansion_direct_substitution(ctx30):
    with ctx30.workdps():
        phi = (1 + mpmath.sqrt(5)) / 2
        n = 10**6
        expected = phi - 1 - phi**-1 / (mpmath.root(5, 4) * 1000) + phi**-1 / (2 * mpmath.sqrt(5) * n)
        assert abs(r_expansion(n, 0, ctx30) - expected) < mpf(10) ** -40


def test_expansion_term_count(ctx30):
    n = 400
    three = r_expansion(n, 1, ctx30)
    two = r_expansion(n, 1, ctx30, terms=2)
    with ctx30.workdps():
        phi = (1 + mpmath.sqrt(5)) / 2
        assert abs((three - two) - phi**0 / (2 * mpmath.sqrt(5) * n)) < mpf(10) ** -40
    with pytest.raises(ValueError):
        r_expansion(n, 0, ctx30, terms=4)
    with pytest.raises(ValueError):
        r_expansion(0, 0, ctx30)


@pytest.mark.parametrize("z", ZS)
def test_expansion_error_is_order_n_minus_three_halves(z, ctx30):
    ns = [10**2, 10**3, 10**4, 10**5]
    scaled = []
    for n in ns:
        diff = solve_saddle(n, z, ctx30).r - r_expansion(n, z, ctx30)
        scaled.append(abs(diff) * mpf(n) ** 1.5)
    assert max(scaled) <= 5
    # the scaled error settles: successive changes shrink by ~sqrt(10)
    steps = [abs(b - a) for a, b in zip(scaled, scaled[1:])]
    assert all(b < a for a, b in zip(steps, steps[1:]))


@pytest.mark.parametrize("z", ZS)
def test_inverse_power_growth(z, ctx30):
    # log(1/r^n) - (n log phi + phi^(z/2) sqrt(n) / 5^(1/4)) stays bounded
    with ctx30.workdps():
        phi = (1 + mpmath.sqrt(5)) / 2
        gaps = []
        for n in (10**3, 10**4, 10**5):
            r = solve_saddle(n, z, ctx30).r
            lead = n * mpmath.log(phi) + phi ** (mpf(z) / 2) * mpmath.sqrt(n) / mpmath.root(5, 4)
            gaps.append(-n * mpmath.log(r) - lead)
        assert all(abs(g) < 3 for g in gaps)
        assert abs(gaps[2] - gaps[1]) < abs(gaps[1] - gaps[0])


def test_bad_n(ctx30):
    with pytest.raises(ValueError):
        solve_saddle(0, 0, ctx30)


def test_precision_escalation_agrees():
    low = PrecisionContext(30)
    high = low.escalated()
    a = solve_saddle(1234, 2, low).r
    b = solve_saddle(1234, 2, high).r
    with high.workdps():
        assert abs(a - b) < mpf(10) ** -27
