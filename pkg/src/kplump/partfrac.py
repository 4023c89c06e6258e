"""Partial fractions, residues, and log-free integration of rational functions.

Everything here is univariate over Q(i).  Denominators must split into
linear factors with poles expressible as Gaussian rationals; a factor of
degree >= 2 without such a root raises IrreducibleDenominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .errors import IrreducibleDenominator, LogTermRequired
from .poly import SparsePoly
from .ratfunc import RationalFunction
from .scalars import ExactScalar, QQ, ONE, ZERO, scalar
from .series import series_coeffs


@dataclass(frozen=True)
class PoleTerm:
    """coefficient / (var - pole)^order"""
    pole: ExactScalar
    order: int
    coefficient: ExactScalar


@dataclass(frozen=True)
class PartialFractions:
    var: str
    poly_part: SparsePoly
    terms: tuple

    def recombine(self) -> RationalFunction:
        total = RationalFunction(self.poly_part, 1, reduce=False)
        x = SparsePoly.variable(self.var, (self.var,))
        for t in self.terms:
            lin = x - SparsePoly.const((self.var,), t.pole)
            total = total + RationalFunction(
                SparsePoly.const((self.var,), t.coefficient), lin ** t.order
            )
        return total


def _rational_sqrt(q):
    """Exact sqrt of a nonnegative rational, or None."""
    num, den = int(q.numerator), int(q.denominator)
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return QQ(rn, rd)
    return None


def gaussian_sqrt(s: ExactScalar):
    """A square root of s in Q(i), or None if no such root exists."""
    if s.is_zero():
        return ZERO
    if s.is_real():
        if s.re > 0:
            r = _rational_sqrt(s.re)
            return None if r is None else ExactScalar(r)
        r = _rational_sqrt(-s.re)
        return None if r is None else ExactScalar(0, r)
    n = _rational_sqrt(s.norm())
    if n is None:
        return None
    x2 = (s.re + n) / 2
    x = _rational_sqrt(x2)
    if x is None or not x:
        return None
    y = s.im / (2 * x)
    return ExactScalar(x, y)


def _divmod_univariate(num: SparsePoly, den: SparsePoly, var: str):
    """Quotient and remainder of univariate polynomials over Q(i)."""
    n = num.univariate_coeffs(var)
    d = den.univariate_coeffs(var)
    while d and d[-1].is_zero():
        d.pop()
    if not d:
        raise ZeroDivisionError("univariate division by zero")
    dd = len(d) - 1
    lc = d[-1].constant_value()
    r = [c.constant_value() for c in n]
    q = [ZERO] * max(0, len(r) - dd)
    while len(r) - 1 >= dd and r:
        while r and r[-1].is_zero():
            r.pop()
        if len(r) - 1 < dd:
            break
        k = len(r) - 1 - dd
        f = r[-1] / lc
        q[k] = f
        for i in range(dd + 1):
            r[k + i] = r[k + i] - f * d[i].constant_value()
        r.pop()
    qp = SparsePoly((var,), {(k,): c for k, c in enumerate(q) if not c.is_zero()})
    rp = SparsePoly((var,), {(k,): c for k, c in enumerate(r) if not c.is_zero()})
    return qp, rp


def _find_root(coeffs, var: str):
    """A Gaussian-rational root of a univariate poly (scalar coeffs), or None."""
    cs = [c for c in coeffs]
    while cs and cs[-1].is_zero():
        cs.pop()
    deg = len(cs) - 1
    if deg <= 0:
        return None
    if cs[0].is_zero():
        return ZERO
    if deg == 1:
        return -cs[0] / cs[1]
    if deg == 2:
        a, b, c = cs[2], cs[1], cs[0]
        disc = b * b - ExactScalar(4) * a * c
        root = gaussian_sqrt(disc)
        if root is None:
            return None
        return (-b + root) / (ExactScalar(2) * a)
    # Rational root search for real coefficients.
    if all(c.is_real() for c in cs):
        den_lcm = 1
        for c in cs:
            d = int(c.re.denominator)
            from math import gcd
            den_lcm = den_lcm * d // gcd(den_lcm, d)
        ints = [int(c.re.numerator) * (den_lcm // int(c.re.denominator)) for c in cs]
        a0, an = abs(ints[0]), abs(ints[-1])

        def divisors(n):
            out = []
            i = 1
            while i * i <= n:
                if n % i == 0:
                    out.append(i)
                    out.append(n // i)
                i += 1
            return sorted(set(out))

        for p in divisors(a0):
            for q in divisors(an):
                for sgn in (1, -1):
                    cand = QQ(sgn * p, q)
                    acc = QQ(0)
                    for c in reversed(ints):
                        acc = acc * cand + c
                    if not acc:
                        return ExactScalar(cand)
    return None


def partial_fractions(f: RationalFunction, var: str) -> PartialFractions:
    """Decompose f into a polynomial part plus c/(var - pole)^k terms.

    The decomposition is verified by recombination before returning.
    """
    used = f.num.used_vars() | f.den.used_vars()
    if not used <= {var}:
        raise ValueError(f"partial fractions requires a function univariate in {var}")
    num = f.num.with_vars((var,))
    den = f.den.with_vars((var,))
    qp, rp = _divmod_univariate(num, den, var)

    # Factor the denominator into linear pieces.
    roots = []  # (pole, multiplicity)
    rest = den
    x = SparsePoly.variable(var, (var,))
    while rest.total_degree() > 0:
        root = _find_root([c.constant_value() for c in rest.univariate_coeffs(var)], var)
        if root is None:
            raise IrreducibleDenominator(
                f"denominator factor {rest.to_text()} has no root in Q(i)"
            )
        lin = x - SparsePoly.const((var,), root)
        mult = 0
        while True:
            q = rest.try_divide(lin)
            if q is None:
                break
            rest = q
            mult += 1
        roots.append((root, mult))

    terms = []
    for pole, m in roots:
        other = den
        lin = x - SparsePoly.const((var,), pole)
        for _ in range(m):
            other = other.try_divide(lin)
        g = RationalFunction(rp, other)
        coeffs = series_coeffs(g, var, pole, m)
        for j, c in enumerate(coeffs):
            val = c.num.constant_value() / c.den.constant_value()
            if not val.is_zero():
                terms.append(PoleTerm(pole, m - j, val))
    terms.sort(key=lambda t: ((t.pole.re, t.pole.im), t.order))
    result = PartialFractions(var, qp, tuple(terms))
    if result.recombine() != f:
        raise ArithmeticError("partial fraction recombination mismatch")
    return result


def residue_at(f: RationalFunction, var: str, pole) -> ExactScalar:
    """Exact residue of f at a finite pole."""
    pole = scalar(pole)
    pf = partial_fractions(f, var)
    for t in pf.terms:
        if t.pole == pole and t.order == 1:
            return t.coefficient
    return ZERO


def integrate_log_free(f: RationalFunction, var: str, basepoint=None) -> RationalFunction:
    """Rational antiderivative of f; raises LogTermRequired on any residue.

    With basepoint=None the antiderivative has zero constant term (which is
    also its value at infinity when there is no polynomial part).  Passing a
    scalar basepoint, or the string "inf", pins the antiderivative to vanish
    there.
    """
    pf = partial_fractions(f, var)
    x = SparsePoly.variable(var, (var,))
    total = RationalFunction(SparsePoly.zero((var,)), 1, reduce=False)
    for k, c in enumerate(pf.poly_part.univariate_coeffs(var)):
        if not c.is_zero():
            mono = SparsePoly((var,), {(k + 1,): c.constant_value() / (k + 1)})
            total = total + RationalFunction(mono, 1, reduce=False)
    for t in pf.terms:
        if t.order == 1:
            raise LogTermRequired(
                f"nonzero residue {t.coefficient} at {var} = {t.pole}"
            )
        lin = x - SparsePoly.const((var,), t.pole)
        coef = t.coefficient / (1 - t.order)
        total = total + RationalFunction(
            SparsePoly.const((var,), coef), lin ** (t.order - 1)
        )
    if basepoint is not None:
        if isinstance(basepoint, str) and basepoint == "inf":
            value = total.limit_at_infinity(var)
        else:
            value = total.evaluate({var: scalar(basepoint)})
        if not value.is_zero():
            total = total - RationalFunction(
                SparsePoly.const((var,), value), 1, reduce=False
            )
    # d/dvar of the antiderivative must reproduce f exactly.
    if total.derivative(var) != f:
        raise ArithmeticError("antiderivative check failed")
    return total
