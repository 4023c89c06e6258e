"""Multivariate polynomial gcd, resultants, and squarefree parts.

gcd uses the primitive polynomial remainder sequence recursively over the
coefficient ring; resultants use Sylvester matrices with fraction-free
Bareiss elimination (exact divisions only).
"""

from __future__ import annotations

from .poly import SparsePoly
from .scalars import ExactScalar, ONE, ZERO


def _coeff_list(p: SparsePoly, var: str):
    return p.univariate_coeffs(var)


def _trim(coeffs):
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _prem(F, G):
    """Pseudo-remainder of coefficient lists F by G (deg F >= deg G >= 0)."""
    r = list(F)
    dg = len(G) - 1
    lcg = G[-1]
    while _trim(r) and len(r) - 1 >= dg:
        lcr = r[-1]
        shift = len(r) - 1 - dg
        r = [c * lcg for c in r]
        for i, gc in enumerate(G):
            r[shift + i] = r[shift + i] - lcr * gc
        r.pop()
    return _trim(r)


def _content_pp(coeffs):
    """(content, primitive coefficient list) over the coefficient ring."""
    cont = None
    for c in coeffs:
        if c.is_zero():
            continue
        cont = c if cont is None else poly_gcd(cont, c)
        if cont.is_constant():
            break
    if cont is None:
        return None, coeffs
    if cont.is_constant():
        cont = SparsePoly.const(cont.vars, ONE)
        return cont, coeffs
    return cont, [c.try_divide(cont) if not c.is_zero() else c for c in coeffs]


def _univariate_gcd_degree(ca, cb) -> int:
    """Degree of the gcd of two univariate rational coefficient lists."""
    fa = [c for c in ca]
    fb = [c for c in cb]
    while fa and fa[-1].is_zero():
        fa.pop()
    while fb and fb[-1].is_zero():
        fb.pop()
    if not fa:
        return len(fb) - 1
    if not fb:
        return len(fa) - 1
    while fb:
        if len(fa) < len(fb):
            fa, fb = fb, fa
            continue
        lc = fb[-1]
        shift = len(fa) - len(fb)
        top = fa[-1]
        fa = [c * lc for c in fa]
        for i, c in enumerate(fb):
            fa[shift + i] = fa[shift + i] - top * c
        fa.pop()
        while fa and fa[-1].is_zero():
            fa.pop()
        if len(fa) < len(fb):
            fa, fb = fb, fa
    return len(fa) - 1


_PROBE_VALUES = (2, 3, 5, 7, 11, 13, -2, -3, -5, 17, 19, -7)


def proven_coprime(a: SparsePoly, b: SparsePoly) -> bool:
    """Sound certificate that gcd(a, b) is constant.

    For each shared variable v the other variables are specialized at a
    point keeping the v-leading coefficients of both inputs nonzero; the
    gcd then has the same v-degree as its specialization (the leading
    coefficient of a divisor divides the input's).  If every per-variable
    degree is zero the gcd is constant.  Returns False when inconclusive.
    """
    a, b = SparsePoly.align(a, b)
    shared = sorted(a.used_vars() & b.used_vars(), key=a.vars.index)
    if not shared:
        return True
    if not all(c.is_real() for c in a.terms.values()):
        return False
    if not all(c.is_real() for c in b.terms.values()):
        return False
    for v in shared:
        others = [w for w in a.vars if w != v]
        ca = a.univariate_coeffs(v)
        cb = b.univariate_coeffs(v)
        proven = False
        for offset in range(6):
            point = {w: ExactScalar(_PROBE_VALUES[(i + offset) % len(_PROBE_VALUES)])
                     for i, w in enumerate(others)}
            if ca[-1].evaluate(point).is_zero() or cb[-1].evaluate(point).is_zero():
                continue
            fa = [c.evaluate(point) for c in ca]
            fb = [c.evaluate(point) for c in cb]
            if _univariate_gcd_degree(fa, fb) == 0:
                proven = True
                break
        if not proven:
            return False
    return True


def poly_gcd(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    """Primitive gcd (content 1, normalized leading coefficient)."""
    a, b = SparsePoly.align(a, b)
    if a.is_zero():
        return b.primitive()[1] if not b.is_zero() else a
    if b.is_zero():
        return a.primitive()[1]
    if a.is_constant() or b.is_constant():
        return SparsePoly.const(a.vars, ONE)
    if proven_coprime(a, b):
        return SparsePoly.const(a.vars, ONE)
    used = sorted(a.used_vars() | b.used_vars(), key=a.vars.index)
    # Pick the main variable with the smallest worst-case degree.
    var = min(used, key=lambda v: max(a.degree_in(v), b.degree_in(v)))
    fa = _coeff_list(a, var)
    fb = _coeff_list(b, var)
    ca, pa = _content_pp(fa)
    cb, pb = _content_pp(fb)
    cont = poly_gcd(ca, cb)
    F, G = (pa, pb) if len(pa) >= len(pb) else (pb, pa)
    while G:
        R = _prem(F, G)
        F, G = G, _content_pp(R)[1] if R else R
    g = SparsePoly.from_univariate(F, var)
    _, g = g.primitive()
    if not cont.is_constant():
        g = g * cont.with_vars(g.vars) if cont.vars != g.vars else g * cont
        _, g = g.primitive()
    return g.with_vars(a.vars)


def sylvester_resultant(a: SparsePoly, b: SparsePoly, var: str) -> SparsePoly:
    """Resultant wrt var via Bareiss elimination on the Sylvester matrix."""
    a, b = SparsePoly.align(a, b)
    fa = _coeff_list(a, var)
    fb = _coeff_list(b, var)
    m, n = len(fa) - 1, len(fb) - 1
    rest = tuple(v for v in a.vars if v != var)
    if m < 0 or n < 0:
        return SparsePoly.zero(rest)
    if m == 0 and n == 0:
        return SparsePoly.const(rest, ONE)
    size = m + n
    zero = SparsePoly.zero(rest)
    mat = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(fa)):
            row[i + j] = c
        mat.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(fb)):
            row[i + j] = c
        mat.append(row)
    sign = 1
    prev = SparsePoly.const(rest, ONE)
    for k in range(size - 1):
        if mat[k][k].is_zero():
            pivot_row = next((i for i in range(k + 1, size) if not mat[i][k].is_zero()), None)
            if pivot_row is None:
                return SparsePoly.zero(rest)
            mat[k], mat[pivot_row] = mat[pivot_row], mat[k]
            sign = -sign
        piv = mat[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = mat[i][j] * piv - mat[i][k] * mat[k][j]
                q = num.try_divide(prev)
                if q is None:
                    raise ArithmeticError("Bareiss division failed")
                mat[i][j] = q
            mat[i][k] = zero
        prev = piv
    det = mat[size - 1][size - 1]
    return -det if sign < 0 else det


def squarefree_part(p: SparsePoly) -> SparsePoly:
    """p divided by the gcd of p with all its partial derivatives."""
    if p.is_zero() or p.is_constant():
        return p
    g = p
    for v in sorted(p.used_vars(), key=p.vars.index):
        g = poly_gcd(g, p.derivative(v))
        if g.is_constant():
            return p.primitive()[1]
    sf = p.try_divide(g)
    if sf is None:
        raise ArithmeticError("squarefree division failed")
    return sf.primitive()[1]
