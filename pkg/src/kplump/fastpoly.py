"""Packed-exponent integer kernel for large real polynomial products.

Exponent vectors are packed into a single Python int (16 bits per
variable) so monomial multiplication is integer addition and dictionary
keys hash quickly.  Coefficients are scaled to plain integers first.
Arbitrary-precision integers are required here (coefficients in the exact
PDE residual far exceed 64 bits), so this path stays in pure Python.
"""

from __future__ import annotations

from math import gcd as _gcd

from .scalars import ExactScalar, QQ

_FIELD = 16
_LIMIT = 1 << (_FIELD - 1)


def _to_int_packed(p):
    """(packed dict, denominator scale) for an all-real SparsePoly, or None."""
    den = 1
    for c in p.terms.values():
        if c.im:
            return None
        d = int(c.re.denominator)
        den = den * d // _gcd(den, d)
    packed = {}
    for e, c in p.terms.items():
        if any(x >= _LIMIT for x in e):
            return None
        key = 0
        for i, x in enumerate(e):
            key |= x << (_FIELD * i)
        packed[key] = int(c.re.numerator) * (den // int(c.re.denominator))
    return packed, den


def _from_packed(packed, scale, vars):
    from .poly import SparsePoly
    nv = len(vars)
    mask = (1 << _FIELD) - 1
    out = SparsePoly(vars)
    terms = out.terms
    for key, val in packed.items():
        if not val:
            continue
        e = tuple((key >> (_FIELD * i)) & mask for i in range(nv))
        terms[e] = ExactScalar(QQ(val, scale))
    return out


def mul_packed(pa: dict, pb: dict) -> dict:
    if len(pa) < len(pb):
        pa, pb = pb, pa
    out = {}
    get = out.get
    items_a = list(pa.items())
    for kb, cb in pb.items():
        for ka, ca in items_a:
            k = ka + kb
            cur = get(k)
            out[k] = ca * cb if cur is None else cur + ca * cb
    return out


def try_mul(a, b):
    """Fast product of two aligned SparsePolys; None when not applicable."""
    pa = _to_int_packed(a)
    if pa is None:
        return None
    pb = _to_int_packed(b)
    if pb is None:
        return None
    da, sa = pa
    db, sb = pb
    return _from_packed(mul_packed(da, db), sa * sb, a.vars)
