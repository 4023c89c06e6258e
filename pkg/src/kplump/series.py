"""Exact truncated power series of rational functions."""

from __future__ import annotations

from .errors import PoleAtCenter
from .poly import SparsePoly
from .ratfunc import RationalFunction
from .scalars import ExactScalar, ONE, ZERO, scalar


class TruncatedSeries:
    """Taylor coefficients [c0, ..., c_{order-1}] of a function at a point."""

    __slots__ = ("var", "order", "coeffs")

    def __init__(self, var: str, coeffs):
        self.var = var
        self.coeffs = [scalar(c) for c in coeffs]
        self.order = len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, list):
            return self.coeffs == [scalar(c) for c in other]
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs

    def __hash__(self):
        raise TypeError("TruncatedSeries is not hashable")

    def _check(self, other):
        if self.var != other.var:
            raise ValueError("series in different variables")

    def __add__(self, other):
        self._check(other)
        n = min(self.order, other.order)
        return TruncatedSeries(self.var, [self.coeffs[i] + other.coeffs[i] for i in range(n)])

    def __sub__(self, other):
        self._check(other)
        n = min(self.order, other.order)
        return TruncatedSeries(self.var, [self.coeffs[i] - other.coeffs[i] for i in range(n)])

    def __mul__(self, other):
        if isinstance(other, (int, ExactScalar)):
            c = scalar(other)
            return TruncatedSeries(self.var, [x * c for x in self.coeffs])
        self._check(other)
        n = min(self.order, other.order)
        out = [ZERO] * n
        for i, a in enumerate(self.coeffs[:n]):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs[: n - i]):
                out[i + j] = out[i + j] + a * b
        return TruncatedSeries(self.var, out)

    __rmul__ = __mul__

    def __repr__(self):
        return f"TruncatedSeries({self.var}, {[c.as_str() for c in self.coeffs]})"


def series_coeffs(f: RationalFunction, var: str, center, order: int):
    """Taylor coefficients of f in var at center, carried exactly.

    Other variables ride along: each coefficient is a RationalFunction in
    the remaining variables (a constant one when f is univariate).
    Raises PoleAtCenter when the denominator vanishes identically at center.
    """
    if order <= 0:
        return []
    center = scalar(center)
    shift = None
    if not center.is_zero():
        x = SparsePoly.variable(var, (var,)) if var not in f.vars else SparsePoly.variable(var, f.vars)
        shift = {var: x + SparsePoly.const(x.vars, center)}
    num = f.num.substitute(shift) if shift else f.num
    den = f.den.substitute(shift) if shift else f.den
    if var in num.vars:
        n_coeffs = num.univariate_coeffs(var)
    else:
        n_coeffs = [num]
    if var in den.vars:
        d_coeffs = den.univariate_coeffs(var)
    else:
        d_coeffs = [den]
    if not d_coeffs or d_coeffs[0].is_zero():
        raise PoleAtCenter(f"pole of order >= 1 at {var} = {center}")
    rest = tuple(v for v in f.vars if v != var)
    d0 = RationalFunction(d_coeffs[0], 1, reduce=False)
    out = []
    for k in range(order):
        nk = n_coeffs[k] if k < len(n_coeffs) else SparsePoly.zero(rest)
        acc = RationalFunction(nk, 1, reduce=False)
        for j in range(1, min(k, len(d_coeffs) - 1) + 1):
            dj = d_coeffs[j]
            if dj.is_zero() or out[k - j].is_zero():
                continue
            acc = acc - RationalFunction(dj, 1, reduce=False) * out[k - j]
        out.append(acc / d0)
    return out


def series_expand(f: RationalFunction, var: str, center, order: int) -> TruncatedSeries:
    """Exact Taylor expansion; requires f univariate in var."""
    coeffs = series_coeffs(f, var, center, order)
    scalars = []
    for c in coeffs:
        if not c.num.is_constant() or not c.den.is_constant():
            raise ValueError("series has non-scalar coefficients; use series_coeffs")
        den = c.den.constant_value()
        scalars.append(c.num.constant_value() / den)
    return TruncatedSeries(var, scalars)
