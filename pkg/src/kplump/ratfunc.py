"""Rational functions: quotients of sparse polynomials in lowest terms.

Invariants: the denominator is nonzero, gcd(num, den) is a unit, and the
denominator's grevlex leading coefficient is 1.
"""

from __future__ import annotations

from .errors import ZeroDenominator
from .poly import SparsePoly
from .polygcd import poly_gcd
from .scalars import ExactScalar, ONE, ZERO, scalar


def _as_poly(value, vars=()):
    if isinstance(value, SparsePoly):
        return value
    return SparsePoly.const(vars, scalar(value))


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num, den=1, reduce=True):
        num = _as_poly(num)
        den = _as_poly(den, num.vars)
        num, den = SparsePoly.align(num, den)
        if den.is_zero():
            raise ZeroDenominator("rational function with zero denominator")
        if num.is_zero():
            den = SparsePoly.const(num.vars, ONE)
        elif reduce and not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = num.try_divide(g)
                den = den.try_divide(g)
        lc = den.leading_coefficient()
        if not lc.is_one():
            inv = ONE / lc
            num = num.scale(inv)
            den = den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    # -- queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> SparsePoly:
        if not self.is_polynomial():
            raise ValueError("not a polynomial")
        c = self.den.constant_value()
        return self.num.scale(ONE / c)

    @property
    def vars(self):
        return self.num.vars

    # -- arithmetic --------------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, SparsePoly):
            return RationalFunction(other, 1, reduce=False)
        try:
            return RationalFunction(_as_poly(scalar(other)), 1, reduce=False)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else other - self

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else other / self

    def __pow__(self, n: int):
        if n < 0:
            if self.is_zero():
                raise ZeroDivisionError("zero to a negative power")
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num ** n, self.den ** n, reduce=False)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RationalFunction is not hashable")

    # -- calculus ------------------------------------------------------------------

    def derivative(self, var: str) -> "RationalFunction":
        if var not in self.num.vars:
            return RationalFunction(SparsePoly.zero(self.num.vars), 1, reduce=False)
        dn = self.num.derivative(var)
        dd = self.den.derivative(var)
        if dd.is_zero():
            return RationalFunction(dn, self.den)
        return RationalFunction(dn * self.den - self.num * dd, self.den * self.den)

    def substitute(self, bindings: dict) -> "RationalFunction":
        """Compose: each bound variable is replaced by a rational function."""
        result_num = None
        result = self
        for name, value in bindings.items():
            if name not in result.vars or name not in result.num.used_vars() | result.den.used_vars():
                if name not in result.vars:
                    continue
            if not isinstance(value, RationalFunction):
                if isinstance(value, SparsePoly):
                    value = RationalFunction(value, 1, reduce=False)
                else:
                    value = RationalFunction(_as_poly(scalar(value)), 1, reduce=False)
            num = _substitute_rf(result.num, name, value)
            den = _substitute_rf(result.den, name, value)
            result = num / den
        return result

    def evaluate(self, point: dict) -> ExactScalar:
        d = self.den.evaluate(point)
        if d.is_zero():
            raise ZeroDivisionError("pole at evaluation point")
        return self.num.evaluate(point) / d

    def evaluate_partial(self, point: dict) -> "RationalFunction":
        """Substitute scalar values for a subset of the variables."""
        bindings = {k: scalar(v) for k, v in point.items()}
        num = self.num.substitute(bindings)
        den = self.den.substitute(bindings)
        return RationalFunction(num, den)

    def limit_at_infinity(self, var: str) -> ExactScalar:
        """Limit as var -> infinity for a function univariate in var."""
        dn = self.num.degree_in(var)
        dd = self.den.degree_in(var)
        if dn > dd:
            raise ValueError("function diverges at infinity")
        if dn < dd:
            return ZERO
        cn = self.num.univariate_coeffs(var)[dn]
        cd = self.den.univariate_coeffs(var)[dd]
        if not (cn.is_constant() and cd.is_constant()):
            raise ValueError("limit at infinity requires scalar leading coefficients")
        return cn.constant_value() / cd.constant_value()

    # -- serialization ----------------------------------------------------------------

    def to_text(self) -> str:
        if self.is_polynomial():
            return self.as_poly().to_text()
        return f"({self.num.to_text()}) / ({self.den.to_text()})"

    def to_json_dict(self) -> dict:
        return {"num": self.num.to_json_dict(), "den": self.den.to_json_dict()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "RationalFunction":
        return cls(
            SparsePoly.from_json_dict(data["num"]),
            SparsePoly.from_json_dict(data["den"]),
        )

    def __repr__(self):
        return f"RationalFunction({self.to_text()})"

    def __str__(self):
        return self.to_text()


def _substitute_rf(p: SparsePoly, name: str, value: RationalFunction) -> RationalFunction:
    """Substitute one variable of a polynomial by a rational function.

    Clears denominators once: p(..., N/D, ...) = sum_k c_k(...) N^k D^(m-k) / D^m.
    """
    if name not in p.vars:
        return RationalFunction(p, 1, reduce=False)
    coeffs = p.univariate_coeffs(name)
    m = len(coeffs) - 1
    if m < 0:
        return RationalFunction(p, 1, reduce=False)
    N, D = value.num, value.den
    n_pows = [SparsePoly.const(N.vars, ONE)]
    d_pows = [SparsePoly.const(D.vars, ONE)]
    for _ in range(m):
        n_pows.append(n_pows[-1] * N)
        d_pows.append(d_pows[-1] * D)
    total = None
    for k, c in enumerate(coeffs):
        if c.is_zero():
            continue
        piece = c * n_pows[k] * d_pows[m - k]
        total = piece if total is None else total + piece
    if total is None:
        return RationalFunction(SparsePoly.zero(p.vars), 1, reduce=False)
    return RationalFunction(total, d_pows[m])
