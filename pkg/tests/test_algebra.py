"""Rational functions, gcd, series, partial fractions, integration."""

import pytest
from hypothesis import given, settings, strategies as st

from kplump.errors import IrreducibleDenominator, LogTermRequired, PoleAtCenter
from kplump.partfrac import (PoleTerm, gaussian_sqrt, integrate_log_free,
                             partial_fractions, residue_at)
from kplump.poly import SparsePoly
from kplump.polygcd import poly_gcd, proven_coprime, squarefree_part, sylvester_resultant
from kplump.ratfunc import RationalFunction
from kplump.scalars import ExactScalar, IMAG, ONE, ZERO
from kplump.series import TruncatedSeries, series_coeffs, series_expand

P = SparsePoly.parse


def rf(num, den="1", vars=("u",)):
    return RationalFunction(P(num, vars=vars), P(den, vars=vars))


# -- rational functions ---------------------------------------------------------

def test_reduction_to_lowest_terms():
    f = rf("u^2 - 1", "u^2 + 2*u + 1")
    assert f.num == P("u - 1", vars=("u",))
    assert f.den == P("u + 1", vars=("u",))


def test_monic_denominator():
    f = rf("1", "2*u + 4")
    assert f.den.leading_coefficient().is_one()
    assert f == rf("1/2", "u + 2")


def test_arithmetic_and_equality():
    a = rf("1", "u - 1")
    b = rf("1", "u + 1")
    assert a - b == rf("2", "u^2 - 1")
    assert a * b == rf("1", "u^2 - 1")
    assert (a / b) == rf("u + 1", "u - 1")


def test_zero_denominator_rejected():
    from kplump.errors import ZeroDenominator
    with pytest.raises(ZeroDenominator):
        RationalFunction(P("1", vars=("u",)), SparsePoly.zero(("u",)))


def test_derivative_quotient_rule():
    f = rf("4", "(u - 1)^2")
    assert f.derivative("u") == rf("-8", "(u - 1)^3")


def test_substitution_chart_change():
    # u = 1/z turns 4/(u-1)^2 into 4 z^2/(1-z)^2
    f = rf("4", "(u - 1)^2")
    z = SparsePoly.variable("z", ("z",))
    out = f.substitute({"u": RationalFunction(SparsePoly.const(("z",), ONE), z)})
    assert out == RationalFunction(P("4*z^2", vars=("z",)), P("(1 - z)^2", vars=("z",)))


def test_limit_at_infinity():
    assert rf("4", "(u - 1)^2").limit_at_infinity("u") == ZERO
    assert rf("3*u^2 + 1", "u^2 - 5").limit_at_infinity("u") == ExactScalar(3)
    with pytest.raises(ValueError):
        rf("u^3", "u").limit_at_infinity("u")


# -- gcd -------------------------------------------------------------------------

def test_gcd_univariate():
    a = P("u^4 - 1", vars=("u",))
    b = P("u^2 - 1", vars=("u",))
    assert poly_gcd(a, b) == P("u^2 - 1", vars=("u",))


def test_gcd_multivariate():
    g = P("x + y", vars=("x", "y"))
    a = g * P("x - y", vars=("x", "y"))
    b = g * P("x^2 + 1", vars=("x", "y"))
    assert poly_gcd(a, b) == g


def test_gcd_coprime():
    a = P("x^2 + y^2 + 1", vars=("x", "y"))
    b = P("x*y - 2", vars=("x", "y"))
    assert poly_gcd(a, b).is_constant()
    assert proven_coprime(a, b)


def test_proven_coprime_is_conservative():
    g = P("x + y", vars=("x", "y"))
    a = g * P("x - y", vars=("x", "y"))
    b = g * P("x + 2*y", vars=("x", "y"))
    assert not proven_coprime(a, b)


def test_squarefree_part():
    p = P("(x + 1)^3*(x - 2)", vars=("x",))
    sf = squarefree_part(p)
    assert sf == P("(x + 1)*(x - 2)", vars=("x",)) or sf == P("(x+1)*(x-2)", vars=("x",))


def test_sylvester_resultant_known_values():
    a = P("x^2 - 1", vars=("x",))
    b = P("x - 2", vars=("x",))
    r = sylvester_resultant(a, b, "x")
    assert r.constant_value() == ExactScalar(3)
    # common root -> zero resultant
    c = P("x - 1", vars=("x",))
    assert sylvester_resultant(a, c, "x").is_zero()
    # bivariate: Res_x(y - x^2, x - 1) = y - 1 up to sign
    d = P("y - x^2", vars=("x", "y"))
    e = P("x - 1", vars=("x", "y"))
    r2 = sylvester_resultant(d, e, "x")
    assert r2 == P("y - 1", vars=("y",)) or r2 == P("1 - y", vars=("y",))


# -- series ----------------------------------------------------------------------

def test_series_frame_rows():
    w1 = rf("4", "(u - 1)^2")
    assert series_expand(w1, "u", 0, 4).coeffs == [
        ExactScalar(4), ExactScalar(8), ExactScalar(12), ExactScalar(16)]
    w2 = rf("-12*u^2", "(u - 1)^4")
    assert series_expand(w2, "u", 0, 4).coeffs == [
        ZERO, ZERO, ExactScalar(-12), ExactScalar(-48)]


def test_series_node_differential():
    f = rf("-1", "(1 - 2*u)*(1 - 3*u)")
    s = series_expand(f, "u", 0, 3)
    assert s.coeffs == [ExactScalar(-1), ExactScalar(-5), ExactScalar(-19)]


def test_series_pole_at_center():
    with pytest.raises(PoleAtCenter):
        series_expand(rf("1", "u"), "u", 0, 3)


def test_series_at_shifted_center():
    f = rf("1", "u")
    s = series_expand(f, "u", 1, 3)
    assert s.coeffs == [ExactScalar(1), ExactScalar(-1), ExactScalar(1)]


def test_series_product_homomorphism():
    f = rf("4", "(u - 1)^2")
    g = rf("-1", "(1 - 2*u)*(1 - 3*u)")
    n = 6
    sf = series_expand(f, "u", 0, n)
    sg = series_expand(g, "u", 0, n)
    sfg = series_expand(f * g, "u", 0, n)
    assert sf * sg == sfg


def test_series_carried_coefficients():
    f = RationalFunction(
        P("eps", vars=("u", "eps")),
        P("1 - u*eps", vars=("u", "eps")),
    )
    coeffs = series_coeffs(f, "u", 0, 3)
    assert coeffs[0] == RationalFunction(P("eps", vars=("eps",)), 1)
    assert coeffs[2] == RationalFunction(P("eps^3", vars=("eps",)), 1)


# -- partial fractions ------------------------------------------------------------

def test_partial_fractions_paper_example():
    f = rf("-12*u^2", "(u - 1)^4")
    pf = partial_fractions(f, "u")
    got = {(t.pole, t.order): t.coefficient for t in pf.terms}
    assert got == {
        (ExactScalar(1), 2): ExactScalar(-12),
        (ExactScalar(1), 3): ExactScalar(-24),
        (ExactScalar(1), 4): ExactScalar(-12),
    }
    assert pf.poly_part.is_zero()


def test_partial_fractions_textbook_split():
    pf = partial_fractions(rf("1", "u^2 - 1"), "u")
    got = {(t.pole, t.order): t.coefficient for t in pf.terms}
    assert got == {(ExactScalar(1), 1): ExactScalar("1/2"),
                   (ExactScalar(-1), 1): ExactScalar("-1/2")}


def test_partial_fractions_two_simple_poles():
    f = rf("-1", "(1 - 2*u)*(1 - 3*u)")
    pf = partial_fractions(f, "u")
    poles = sorted((t.pole for t in pf.terms), key=lambda p: p.re)
    assert poles == [ExactScalar("1/3"), ExactScalar("1/2")]
    assert pf.recombine() == f


def test_partial_fractions_gaussian_poles():
    pf = partial_fractions(rf("1", "u^2 + 1"), "u")
    poles = {t.pole for t in pf.terms}
    assert poles == {IMAG, -IMAG}


def test_partial_fractions_irreducible():
    with pytest.raises(IrreducibleDenominator):
        partial_fractions(rf("1", "u^2 - 2"), "u")


def test_gaussian_sqrt():
    assert gaussian_sqrt(ExactScalar("9/4")) == ExactScalar("3/2")
    assert gaussian_sqrt(ExactScalar(-4)) == ExactScalar(0, 2)
    s = gaussian_sqrt(ExactScalar(0, 2))  # sqrt(2i) = 1 + i
    assert s is not None and s * s == ExactScalar(0, 2)
    assert gaussian_sqrt(ExactScalar(2)) is None


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.sampled_from([-2, -1, 1, 2, 3]),
                          st.integers(1, 3),
                          st.fractions(min_value=-9, max_value=9, max_denominator=4)),
                min_size=1, max_size=3))
def test_partial_fractions_round_trip(terms):
    u = SparsePoly.variable("u", ("u",))
    total = RationalFunction(SparsePoly.zero(("u",)), 1, reduce=False)
    for pole, order, coef in terms:
        if not coef:
            continue
        lin = u - SparsePoly.const(("u",), pole)
        total = total + RationalFunction(
            SparsePoly.const(("u",), ExactScalar(coef)), lin ** order)
    if total.is_zero():
        return
    pf = partial_fractions(total, "u")
    assert pf.recombine() == total


# -- integration --------------------------------------------------------------------

def test_integrate_power_rule():
    f = rf("4", "(u - 1)^2")
    g = integrate_log_free(f, "u")
    assert g == rf("-4", "u - 1")


def test_integrate_paper_antiderivative():
    f = rf("-12*u^2", "(u - 1)^4")
    g = integrate_log_free(f, "u", basepoint="inf")
    expected = (rf("12", "u - 1") + rf("12", "(u - 1)^2") + rf("4", "(u - 1)^3"))
    assert g == expected
    assert g.derivative("u") == f


def test_integrate_log_term_rejected():
    with pytest.raises(LogTermRequired):
        integrate_log_free(rf("1", "u - 1"), "u")


def test_integrate_pinned_at_finite_basepoint():
    f = rf("2*u", "1")
    g = integrate_log_free(f, "u", basepoint=ExactScalar(2))
    assert g.evaluate({"u": ExactScalar(2)}).is_zero()
    assert g.derivative("u") == f


def test_residue_at():
    f = rf("1", "u^2 - 1")
    assert residue_at(f, "u", 1) == ExactScalar("1/2")
    assert residue_at(f, "u", -1) == ExactScalar("-1/2")
    assert residue_at(f, "u", 5) == ZERO
