"""Families of nodal curves degenerating to cuspidal curves.

Pairs of identified points depend polynomially on a formal parameter eps;
suitable rational-in-eps combinations of the node differentials have
finite nonzero limits as eps -> 0 that form a cusp differential basis.
All limits are exact cancellations in the rational function field.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curves import ChartPoint, CuspSpec, Differential, SemigroupSpec
from .errors import DivergentLimit, ModelMismatch
from .poly import SparsePoly
from .ratfunc import RationalFunction
from .scalars import ExactScalar, ONE, ZERO, scalar
from .series import series_coeffs

EPS = "eps"
UE = ("u", EPS)


def _poly(text, vars=UE):
    return SparsePoly.parse(text, vars=vars)


@dataclass
class NodalFamily:
    """Point pairs b(eps), c(eps) plus the rescaling matrix with finite limits."""

    pairs: list          # (SparsePoly in eps, SparsePoly in eps)
    rescalings: list     # rows of RationalFunction in eps
    cusps: list          # the limiting CuspSpecs

    @property
    def node_count(self) -> int:
        return len(self.pairs)

    def limit_genus(self) -> int:
        return sum(c.delta for c in self.cusps)


def family_differentials(family: NodalFamily):
    """Node differentials (b-c)/((1-bu)(1-cu)) du with eps carried along."""
    out = []
    u = SparsePoly.variable("u", UE)
    one = SparsePoly.const(UE, ONE)
    for b, c in family.pairs:
        b = b.with_vars(UE)
        c = c.with_vars(UE)
        den = (one - b * u) * (one - c * u)
        out.append(RationalFunction(b - c, den))
    return out


def eps_limit(f: RationalFunction) -> RationalFunction:
    """Exact eps -> 0 limit; DivergentLimit if a pole at eps = 0 survives."""
    if EPS not in f.vars:
        return f
    num = f.num.substitute({EPS: ZERO})
    den = f.den.substitute({EPS: ZERO})
    if den.is_zero():
        raise DivergentLimit("pole at eps = 0 after cancellation")
    return RationalFunction(num, den)


def rescale_and_limit(family: NodalFamily):
    """Apply the rescaling matrix and take exact eps -> 0 limits."""
    diffs = family_differentials(family)
    out = []
    for row in family.rescalings:
        total = None
        for coef, w in zip(row, diffs):
            if coef.is_zero():
                continue
            coef2 = RationalFunction(coef.num.with_vars(UE), coef.den.with_vars(UE),
                                     reduce=False)
            piece = coef2 * w
            total = piece if total is None else total + piece
        if total is None:
            raise DivergentLimit("empty rescaling row")
        lim = eps_limit(total)
        out.append(Differential(
            RationalFunction(lim.num.with_vars(("u",)), lim.den.with_vars(("u",))),
            "u",
        ))
    return out


def _eps_rf(text) -> RationalFunction:
    num, _, den = text.partition("/")
    n = SparsePoly.parse(num, vars=(EPS,))
    if den:
        d = SparsePoly.parse(den, vars=(EPS,))
        return RationalFunction(n, d)
    return RationalFunction(n, 1, reduce=False)


def genus4_family() -> NodalFamily:
    """Four node pairs collapsing onto <2,5> cusps at z = 1 and z = -1.

    The rescaling combinations are the published ones: eta1 = (1/eps) w1,
    eta2 = (1/eps^3)(2 w2 - w1), and their mirrors.
    """
    e = (EPS,)
    P = lambda s: SparsePoly.parse(s, vars=e)
    pairs = [
        (P("1 + 2*eps"), P("1 - 2*eps")),
        (P("1 + eps"), P("1 - eps")),
        (P("-1 + 2*eps"), P("-1 - 2*eps")),
        (P("-1 + eps"), P("-1 - eps")),
    ]
    zero = RationalFunction(SparsePoly.zero(e), 1, reduce=False)
    rescalings = [
        [_eps_rf("1/eps"), zero, zero, zero],
        [_eps_rf("-1/eps^3"), _eps_rf("2/eps^3"), zero, zero],
        [zero, zero, _eps_rf("1/eps"), zero],
        [zero, zero, _eps_rf("-1/eps^3"), _eps_rf("2/eps^3")],
    ]
    cusps = [
        CuspSpec(ChartPoint("z", 1), SemigroupSpec([2, 5])),
        CuspSpec(ChartPoint("z", -1), SemigroupSpec([2, 5])),
    ]
    return NodalFamily(pairs, rescalings, cusps)


def _solve_rescalings(pairs, blocks, order):
    """Rescaling rows via row reduction over the eps-Taylor expansions.

    Within each block the differentials are expanded in eps; combinations
    cancelling all orders below the target are found by forward
    elimination (the combination multipliers are scalars), normalized to
    primitive integer vectors, then scaled by the matching eps power.
    """
    family = NodalFamily(pairs, [], [])
    diffs = family_differentials(family)
    e = (EPS,)
    rows = []
    for block in blocks:
        pivots = []  # (order, series list, combo dict)
        for i in block:
            series = series_coeffs(diffs[i], EPS, 0, order)
            combo = {i: ExactScalar(1)}
            for p_order, p_series, p_combo in pivots:
                cur = series[p_order]
                if cur.is_zero():
                    continue
                ratio = cur / p_series[p_order]
                if not (ratio.num.is_constant() and ratio.den.is_constant()):
                    raise DivergentLimit(
                        "eps-orders are not scalar multiples within the block"
                    )
                r = ratio.num.constant_value() / ratio.den.constant_value()
                series = [a - p_series[k] * r if not p_series[k].is_zero() else a
                          for k, a in enumerate(series)]
                for j, cj in p_combo.items():
                    combo[j] = combo.get(j, ZERO) - r * cj
            lead = next((k for k, a in enumerate(series) if not a.is_zero()), None)
            if lead is None:
                raise DivergentLimit("differential vanished to the probed eps order")
            # integer-primitive combo, own coefficient positive
            den_lcm = 1
            from math import gcd
            for cj in combo.values():
                d = int(cj.re.denominator)
                den_lcm = den_lcm * d // gcd(den_lcm, d)
            nums = {j: int(cj.re.numerator) * (den_lcm // int(cj.re.denominator))
                    for j, cj in combo.items()}
            g = 0
            for v in nums.values():
                g = gcd(g, abs(v))
            if nums[i] < 0:
                g = -g
            combo = {j: ExactScalar(v // g) for j, v in nums.items() if v}
            # recompute the series for the normalized combo
            total = None
            for j, cj in combo.items():
                piece = diffs[j] * RationalFunction(
                    SparsePoly.const(UE, cj), 1, reduce=False)
                total = piece if total is None else total + piece
            series = series_coeffs(total, EPS, 0, order)
            pivots.append((lead, series, combo))
            row = [RationalFunction(SparsePoly.zero(e), 1, reduce=False)] * len(pairs)
            eps_pow = SparsePoly((EPS,), {(lead,): ONE})
            for j, cj in combo.items():
                row[j] = RationalFunction(SparsePoly.const(e, cj), eps_pow)
            rows.append(row)
    return rows


def genus6_family(order: int = 8) -> NodalFamily:
    """Six node pairs collapsing onto <2,7> cusps at z = 1 and z = -1.

    The rescaling matrix is not published; it is computed by the
    leading-order solve over the eps expansions, one block per cusp.
    """
    e = (EPS,)
    P = lambda s: SparsePoly.parse(s, vars=e)
    pairs = [
        (P("1 + 3*eps"), P("1 - 3*eps")),
        (P("1 + 2*eps"), P("1 - 2*eps")),
        (P("1 + eps"), P("1 - eps")),
        (P("-1 + 3*eps"), P("-1 - 3*eps")),
        (P("-1 + 2*eps"), P("-1 - 2*eps")),
        (P("-1 + eps"), P("-1 - eps")),
    ]
    cusps = [
        CuspSpec(ChartPoint("z", 1), SemigroupSpec([2, 7])),
        CuspSpec(ChartPoint("z", -1), SemigroupSpec([2, 7])),
    ]
    rescalings = _solve_rescalings(pairs, [(0, 1, 2), (3, 4, 5)], order)
    return NodalFamily(pairs, rescalings, cusps)


def family_frame_rows(family: NodalFamily, m: int = 3):
    """Series rows at u = 0 of the rescaled differentials, eps carried.

    Each entry is a RationalFunction of eps; taking eps_limit of every
    entry must agree with the frame rows of the limit differentials
    (series expansion commutes with the eps limit).
    """
    diffs = family_differentials(family)
    rows = []
    for row in family.rescalings:
        total = None
        for coef, w in zip(row, diffs):
            if coef.is_zero():
                continue
            coef2 = RationalFunction(coef.num.with_vars(UE), coef.den.with_vars(UE),
                                     reduce=False)
            piece = coef2 * w
            total = piece if total is None else total + piece
        rows.append(series_coeffs(total, "u", 0, m))
    return rows


def local_model_check(eps_values=None) -> dict:
    """Verify the planar model x = t^2, y = t^5 - 5 eps^2 t^3 + 4 eps^4 t.

    For eps != 0 the parametrization glues (t, -t) exactly at t = eps and
    t = 2*eps (two nodes); at eps = 0 it degenerates to the <2,5> cusp
    x = t^2, y = t^5.
    """
    tv = ("t", EPS)
    t = SparsePoly.variable("t", tv)
    ep = SparsePoly.variable(EPS, tv)
    y = SparsePoly.parse("t^5 - 5*eps^2*t^3 + 4*eps^4*t", vars=tv)
    factored = t * (t * t - ep * ep) * (t * t - (ep * ep).scale(4))
    if y != factored:
        raise ModelMismatch("y does not factor as t (t^2-eps^2)(t^2-4 eps^2)")
    # y is odd in t, x = t^2 is even: nodes exactly at the nonzero roots of y.
    for mult in (1, 2):
        val = y.substitute({"t": ep.scale(mult).with_vars(tv)})
        if not val.is_zero():
            raise ModelMismatch(f"y(t = {mult} eps) != 0")
    y0 = y.substitute({EPS: ZERO})
    if y0 != SparsePoly.parse("t^5", vars=tv):
        raise ModelMismatch("eps = 0 limit is not the <2,5> monomial cusp")
    checks = {"factorization": True, "node_parameters": ("eps", "2*eps"),
              "cusp_semigroup": (2, 5)}
    if eps_values:
        for ev in eps_values:
            ev = scalar(ev)
            for mult in (1, 2):
                tval = ev * ExactScalar(mult)
                out = y.evaluate({"t": tval, EPS: ev})
                if not out.is_zero():
                    raise ModelMismatch(f"y({mult}*{ev.as_str()}) != 0")
        checks["sampled"] = [scalar(v).as_str() for v in eps_values]
    return checks
