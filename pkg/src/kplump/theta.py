"""Theta divisors of cuspidal rational curves as polynomial hypersurfaces.

The divisor is the closure of the image of (g-1)-tuples of points under
the abelian integrals of the dualizing differentials.  Its defining
polynomial is obtained by clearing denominators, saturating with respect
to them (one inverse variable per pole), and eliminating the parameters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .curves import CurveSpec, CuspSpec, curve_differential_basis
from .errors import BoundViolated, LeadingTermMismatch, NotHypersurface
from .groebner import EliminationStats, groebner_eliminate
from .partfrac import integrate_log_free, partial_fractions
from .poly import SparsePoly, grevlex_key
from .polygcd import poly_gcd, squarefree_part, sylvester_resultant
from .ratfunc import RationalFunction
from .scalars import ExactScalar, ONE, ZERO, scalar


@dataclass
class ThetaParametrization:
    """Abelian integrals pinned at the base point, one per differential."""

    genus: int
    var: str
    integrals: list          # RationalFunction in `var`, I_j vanishing at basepoint
    blocks: list             # block sizes, one per singularity
    curve: CurveSpec = None

    @property
    def nparams(self) -> int:
        return self.genus - 1

    def z_names(self):
        return tuple(f"Z{j + 1}" for j in range(self.genus))

    def param_names(self):
        return tuple(f"t{k + 1}" for k in range(self.nparams))

    def summand(self, j: int, k: int) -> RationalFunction:
        """I_j evaluated at the k-th parameter (as a rational function)."""
        name = self.param_names()[k]
        num = self.integrals[j].num.rename({self.var: name})
        den = self.integrals[j].den.rename({self.var: name})
        return RationalFunction(num, den, reduce=False)

    def z_value(self, j: int) -> RationalFunction:
        """Z_j = sum over parameters of I_j(t_k)."""
        names = self.param_names()
        total = None
        for k in range(self.nparams):
            piece = self.summand(j, k)
            total = piece if total is None else total + piece
        if total is None:
            return RationalFunction(SparsePoly.zero(()), 1, reduce=False)
        return total


def build_parametrization(curve: CurveSpec, basis=None, override=None) -> ThetaParametrization:
    """Integrate a differential basis and pin the constants at the base point.

    The integrals are represented in the chart of the first basis
    differential; a base point at that chart's infinity is handled by the
    vanishing-at-infinity limit.
    """
    if basis is None:
        basis = curve_differential_basis(curve, override=override)
    chart = basis[0].chart
    base = curve.basepoint.in_chart(chart)
    integrals = []
    for w in basis:
        local = w.to_chart(chart)
        pin = "inf" if base is None else base
        integrals.append(integrate_log_free(local.func, chart, basepoint=pin))
    return ThetaParametrization(
        genus=curve.genus,
        var=chart,
        integrals=integrals,
        blocks=[s.delta for s in curve.singularities],
        curve=curve,
    )


@dataclass
class ThetaPolynomial:
    """Normalized defining polynomial of the theta divisor."""

    poly: SparsePoly
    blocks: list
    genus: int
    stats: EliminationStats = None

    @property
    def degree(self) -> int:
        return self.poly.total_degree()

    @property
    def leading(self) -> tuple:
        """Exponent vector of the grevlex leading monomial."""
        return self.poly.leading_exps()

    def to_json_dict(self) -> dict:
        return {
            "genus": self.genus,
            "blocks": list(self.blocks),
            "poly": self.poly.to_json_dict(),
            "text": self.poly.to_text(),
        }

    @classmethod
    def from_json_dict(cls, data) -> "ThetaPolynomial":
        return cls(
            poly=SparsePoly.from_json_dict(data["poly"]),
            blocks=list(data["blocks"]),
            genus=data["genus"],
        )


def _normalize(poly: SparsePoly, z_names) -> SparsePoly:
    _, prim = poly.with_vars(z_names).primitive()
    return prim


def _cleared_equations(par: ThetaParametrization, param_names, z_names):
    """Z_j * D_j - N_j over the parameter ring, plus the distinct pole list."""
    eqs = []
    poles = []
    all_vars = tuple(param_names) + tuple(z_names)
    for j in range(par.genus):
        zj = SparsePoly.variable(z_names[j], all_vars)
        value = par.z_value(j)
        num = value.num.with_vars(all_vars)
        den = value.den.with_vars(all_vars)
        eqs.append(zj * den - num)
        for t in partial_fractions(par.integrals[j], par.var).terms:
            if all(not (t.pole == p) for p in poles):
                poles.append(t.pole)
    return eqs, poles


def eliminate(par: ThetaParametrization, strategy: str = "sym",
              max_seconds: float = 300.0, max_steps: int = None) -> ThetaPolynomial:
    """Defining polynomial of the image hypersurface.

    strategy: 'lex' = direct block-order Buchberger on the cleared and
    saturated ideal; 'sym' = rewrite in elementary symmetric functions of
    the parameters first; 'res' = iterated resultants (nparams <= 2 only).
    All strategies agree up to normalization when they terminate.
    """
    z_names = par.z_names()
    if par.nparams == 0:
        # The divisor is the single point Z = 0; its hypersurface is Z1 = 0.
        poly = SparsePoly.variable(z_names[0], z_names)
        return ThetaPolynomial(_normalize(poly, z_names), par.blocks, par.genus)
    if strategy == "lex":
        out = _eliminate_direct(par, z_names, max_seconds, max_steps)
    elif strategy == "sym":
        out = _eliminate_symmetric(par, z_names, max_seconds, max_steps)
    elif strategy == "res":
        out = _eliminate_resultants(par, z_names)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    theta = ThetaPolynomial(_normalize(out[0], z_names), par.blocks, par.genus, out[1])
    if not check_membership(theta, par):
        raise NotHypersurface("eliminated polynomial does not vanish on the image")
    return theta


def _eliminate_direct(par, z_names, max_seconds, max_steps):
    """Block-order Buchberger on the cleared-and-saturated ideal.

    One inverse variable per distinct denominator (t_k - pole), with the
    relation w * (t_k - pole) - 1; the integrals then become polynomials in
    the inverse variables via their partial fractions, keeping generator
    degrees small.
    """
    param_names = par.param_names()
    decomps = [partial_fractions(I, par.var) for I in par.integrals]
    poles = []
    for pf in decomps:
        for t in pf.terms:
            if all(not (t.pole == p) for p in poles):
                poles.append(t.pole)
    w_names = tuple(
        f"w{r + 1}_{k + 1}"
        for k in range(par.nparams)
        for r in range(len(poles))
    )
    all_vars = param_names + w_names + z_names

    def w_var(pole_idx, k):
        return SparsePoly.variable(f"w{pole_idx + 1}_{k + 1}", all_vars)

    gens = []
    one = SparsePoly.const(all_vars, ONE)
    for k, tname in enumerate(param_names):
        tv = SparsePoly.variable(tname, all_vars)
        for r, pole in enumerate(poles):
            gens.append(w_var(r, k) * (tv - SparsePoly.const(all_vars, pole)) - one)
    for j in range(par.genus):
        pf = decomps[j]
        total = SparsePoly.zero(all_vars)
        for k, tname in enumerate(param_names):
            tv = SparsePoly.variable(tname, all_vars)
            for deg, c in enumerate(pf.poly_part.univariate_coeffs(par.var)):
                if not c.is_zero():
                    total = total + (tv ** deg).scale(c.constant_value())
            for term in pf.terms:
                r = next(i for i, p in enumerate(poles) if p == term.pole)
                total = total + (w_var(r, k) ** term.order).scale(term.coefficient)
        zj = SparsePoly.variable(z_names[j], all_vars)
        gens.append(zj - total)
    basis, stats = groebner_eliminate(
        gens, param_names + w_names, z_names,
        max_seconds=max_seconds, max_steps=max_steps,
    )
    return _expect_principal(basis), stats


def elementary_symmetric(params, vars=None):
    """e_1..e_m as SparsePolys in the parameter variables."""
    vars = tuple(params) if vars is None else tuple(vars)
    idx = [vars.index(p) for p in params]
    out = []
    for r in range(1, len(params) + 1):
        p = SparsePoly(vars)
        for combo in itertools.combinations(idx, r):
            exps = [0] * len(vars)
            for c in combo:
                exps[c] = 1
            p.terms[tuple(exps)] = ONE
        out.append(p)
    return out


def symmetrize(p: SparsePoly, params, e_names) -> SparsePoly:
    """Rewrite a symmetric polynomial in elementary symmetric coordinates.

    Classic leading-term subtraction; raises if p is not symmetric.
    """
    params = tuple(params)
    e_names = tuple(e_names)
    m = len(params)
    basis = elementary_symmetric(params)
    pow_cache = [{0: SparsePoly.const(params, ONE)} for _ in range(m)]

    def e_power(i, k):
        cache = pow_cache[i]
        if k not in cache:
            best = max(j for j in cache if j <= k)
            acc = cache[best]
            for j in range(best, k):
                acc = acc * basis[i]
                cache[j + 1] = acc
        return cache[k]

    work = p.with_vars(params) if set(p.used_vars()) <= set(params) else p
    if tuple(work.vars) != params:
        work = work.with_vars(params)
    result = SparsePoly(e_names)
    while work.terms:
        # lex-leading exponent (t1 > t2 > ... ordering)
        alpha = max(work.terms)
        c = work.terms[alpha]
        if any(alpha[i] < alpha[i + 1] for i in range(m - 1)):
            raise ValueError("polynomial is not symmetric in the parameters")
        e_exps = tuple(
            alpha[i] - (alpha[i + 1] if i + 1 < m else 0) for i in range(m)
        )
        result.terms[e_exps] = result.terms.get(e_exps, ZERO) + c
        prod = SparsePoly.const(params, c)
        for i, k in enumerate(e_exps):
            if k:
                prod = prod * e_power(i, k)
        work = work - prod
    result.terms = {e: c for e, c in result.terms.items() if not c.is_zero()}
    return result


def _eliminate_symmetric(par, z_names, max_seconds, max_steps):
    param_names = par.param_names()
    e_names = tuple(f"e{r + 1}" for r in range(par.nparams))
    eqs, poles = _cleared_equations(par, param_names, z_names)
    w_names = tuple(f"w{r + 1}" for r in range(len(poles)))
    all_vars = e_names + w_names + z_names
    gens = []
    for j, eq in enumerate(eqs):
        # eq = Z_j * D_j(t) - N_j(t): symmetrize the t-coefficients of Z_j.
        coeffs = eq.univariate_coeffs(z_names[j])
        sym_eq = SparsePoly(all_vars)
        for k, c in enumerate(coeffs):
            if c.is_zero():
                continue
            sym_c = symmetrize(_drop_z(c, z_names), param_names, e_names)
            zj = SparsePoly.monomial(
                all_vars,
                tuple(1 if v == z_names[j] else 0 for v in all_vars),
            ) ** k
            sym_eq = sym_eq + sym_c.with_vars(all_vars) * zj
        gens.append(sym_eq)
    one = SparsePoly.const(all_vars, ONE)
    for r, pole in enumerate(poles):
        prod = SparsePoly.const(param_names, ONE)
        for t in param_names:
            tv = SparsePoly.variable(t, param_names)
            prod = prod * (tv - SparsePoly.const(param_names, pole))
        f_p = symmetrize(prod, param_names, e_names).with_vars(all_vars)
        w = SparsePoly.variable(w_names[r], all_vars)
        gens.append(w * f_p - one)
    basis, stats = groebner_eliminate(
        gens, e_names + w_names, z_names,
        max_seconds=max_seconds, max_steps=max_steps,
    )
    return _expect_principal(basis), stats


def _drop_z(p: SparsePoly, z_names) -> SparsePoly:
    used = p.used_vars()
    if used & set(z_names):
        raise ValueError("coefficient unexpectedly involves Z variables")
    keep = tuple(v for v in p.vars if v not in z_names)
    return p.with_vars(keep)


def _expect_principal(basis):
    if not basis:
        raise NotHypersurface("elimination ideal is zero")
    if len(basis) != 1:
        raise NotHypersurface(
            f"elimination ideal has {len(basis)} generators; image is not a hypersurface"
        )
    return basis[0]


def _eliminate_resultants(par, z_names):
    if par.nparams > 2:
        raise ValueError("resultant strategy supports at most two parameters")
    param_names = par.param_names()
    eqs, _poles = _cleared_equations(par, param_names, z_names)
    if par.nparams == 1:
        candidates = []
        for i, j in itertools.combinations(range(len(eqs)), 2):
            r = sylvester_resultant(eqs[i], eqs[j], param_names[0])
            if not r.is_zero():
                candidates.append(r)
        result = candidates[0]
        for r in candidates[1:]:
            result = poly_gcd(result, r)
    else:
        t1, t2 = param_names
        routes = []
        pairs = list(itertools.combinations(range(len(eqs)), 2))
        for (a, b), (c, d) in itertools.combinations(pairs, 2):
            if len({a, b, c, d}) < 3:
                continue
            r1 = sylvester_resultant(eqs[a], eqs[b], t2)
            r2 = sylvester_resultant(eqs[c], eqs[d], t2)
            r = sylvester_resultant(r1, r2, t1)
            if not r.is_zero():
                routes.append(r)
            if len(routes) == 2:
                break
        if not routes:
            raise NotHypersurface("all resultant routes degenerated")
        result = routes[0]
        for r in routes[1:]:
            result = poly_gcd(result, r)
    result = _strip_variable_factors(result, z_names)
    result = squarefree_part(result)
    return result.with_vars(z_names), None


def _strip_variable_factors(p: SparsePoly, z_names) -> SparsePoly:
    for name in z_names:
        v = SparsePoly.variable(name, p.vars)
        while True:
            q = p.try_divide(v)
            if q is None:
                break
            p = q
    return p


# -- structural checks ---------------------------------------------------------

def check_membership(theta: ThetaPolynomial, par: ThetaParametrization) -> bool:
    """Substitute Z_j = sum_k I_j(t_k) into theta; must vanish identically.

    Denominators are cleared first so the verification is one polynomial
    identity, independent of the elimination route.
    """
    if par.nparams == 0:
        z0 = {name: ZERO for name in par.z_names()}
        return theta.poly.evaluate(z0).is_zero()
    z_names = par.z_names()
    values = [par.z_value(j) for j in range(par.genus)]
    max_deg = [theta.poly.degree_in(name) for name in z_names]
    # theta * prod D_j^{M_j} = sum_alpha c_alpha prod N_j^a D_j^(M_j - a)
    n_pows = []
    d_pows = []
    for j, v in enumerate(values):
        npw = [SparsePoly.const(v.num.vars, ONE)]
        dpw = [SparsePoly.const(v.den.vars, ONE)]
        for _ in range(max(max_deg[j], 0)):
            npw.append(npw[-1] * v.num)
            dpw.append(dpw[-1] * v.den)
        n_pows.append(npw)
        d_pows.append(dpw)
    total = None
    for exps, c in theta.poly.with_vars(z_names).terms.items():
        piece = SparsePoly.const((), c)
        for j, a in enumerate(exps):
            piece = piece * n_pows[j][a]
            piece = piece * d_pows[j][max_deg[j] - a]
        total = piece if total is None else total + piece
    return total is None or total.is_zero()


def check_degree_bound(theta: ThetaPolynomial, curve: CurveSpec) -> dict:
    """Triangular degree bound, with equality for a single <2,2g+1> cusp."""
    g = curve.genus
    bound = g * (g + 1) // 2
    deg = theta.degree
    if deg > bound:
        raise BoundViolated(f"theta degree {deg} exceeds bound {bound}")
    expect_equality = (
        len(curve.singularities) == 1
        and isinstance(curve.singularities[0], CuspSpec)
        and curve.singularities[0].semigroup.generators == (2, 2 * g + 1)
    )
    if expect_equality and deg != bound:
        raise BoundViolated(
            f"single <2,{2 * g + 1}> cusp should attain degree {bound}, got {deg}"
        )
    return {"degree": deg, "bound": bound, "equality_expected": expect_equality,
            "ok": True}


def expected_leading_exps(curve: CurveSpec):
    """Exponent vector of the product of block-minimal variables."""
    exps = []
    for s in curve.singularities:
        if not isinstance(s, CuspSpec):
            raise ValueError("leading-term law applies to cuspidal curves")
        size = s.partition().size
        exps.extend([size] + [0] * (s.delta - 1))
    return tuple(exps)


def check_leading_term(theta: ThetaPolynomial, curve: CurveSpec) -> dict:
    expected = expected_leading_exps(curve)
    top = theta.degree
    top_monomials = [e for e in theta.poly.terms if sum(e) == top]
    if len(top_monomials) != 1 or top_monomials[0] != expected:
        raise LeadingTermMismatch(
            f"highest-degree monomials {top_monomials}, expected {expected}"
        )
    return {"leading": expected, "ok": True}


def check_weighted_homogeneity(theta: ThetaPolynomial, weights) -> tuple:
    """(is_homogeneous, weighted_degree or None) for the given weights."""
    weights = list(weights)
    degs = {sum(w * e for w, e in zip(weights, exps)) for exps in theta.poly.terms}
    if len(degs) == 1:
        return True, degs.pop()
    return False, None
