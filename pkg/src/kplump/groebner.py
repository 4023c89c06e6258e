"""Buchberger Groebner engine with block elimination orders.

Monomials are packed into single integers whose natural ordering realizes
the term order (graded reverse lexicographic within each block, blocks
compared left to right), so leading-term queries are plain comparisons.
Polynomials are content-stripped integer coefficient lists; reduction is
fraction-free.  S-pair selection is normal (sugar) with the Gebauer-Moeller
installation of Buchberger's product and chain criteria.

Coefficients are restricted to rationals; every elimination system in
scope is real.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from heapq import heappush, heappop
from math import gcd as _gcd

from .errors import EliminationTimeout
from .poly import SparsePoly
from .scalars import ExactScalar, QQ

_W = 20            # bits per field
_C = 1 << 16       # offset for reversed-negated exponent fields
_GUARD = 1 << 19   # guard bit inside each field (values stay below 2^16)


class MonomialOrder:
    """Block grevlex order over a fixed variable tuple."""

    def __init__(self, vars, blocks=None):
        self.vars = tuple(vars)
        if blocks is None:
            blocks = [list(self.vars)]
        self.blocks = [tuple(b) for b in blocks]
        seen = [v for b in self.blocks for v in b]
        if sorted(seen) != sorted(self.vars) or len(seen) != len(self.vars):
            raise ValueError("blocks must partition the variable tuple")
        # Field layout, most significant first: per block a degree field then
        # one field (C - e) per variable in reverse block order.
        self._fields = []  # (kind, var_index) with kind in {"deg", "exp"}
        for b in self.blocks:
            self._fields.append(("deg", [self.vars.index(v) for v in b]))
            for v in reversed(b):
                self._fields.append(("exp", self.vars.index(v)))
        n = len(self._fields)
        self._shifts = [(_W * (n - 1 - i)) for i in range(n)]
        base = 0
        for (kind, _), sh in zip(self._fields, self._shifts):
            if kind == "exp":
                base |= _C << sh
        self._mul_base = base
        self.nvars = len(self.vars)
        self._pshifts = [_W * i for i in range(self.nvars)]
        self._pguard = 0
        for sh in self._pshifts:
            self._pguard |= _GUARD << sh

    # -- order keys ------------------------------------------------------------

    def okey(self, exps) -> int:
        key = 0
        for (kind, spec), sh in zip(self._fields, self._shifts):
            if kind == "deg":
                key |= sum(exps[i] for i in spec) << sh
            else:
                key |= (_C - exps[spec]) << sh
        return key

    def exps_of(self, okey: int) -> tuple:
        out = [0] * self.nvars
        mask = (1 << _W) - 1
        for (kind, spec), sh in zip(self._fields, self._shifts):
            if kind == "exp":
                out[spec] = _C - ((okey >> sh) & mask)
        return tuple(out)

    def mul(self, k1: int, k2: int) -> int:
        return k1 + k2 - self._mul_base

    def quot(self, k1: int, k2: int) -> int:
        """Monomial quotient in key space (caller guarantees divisibility)."""
        return k1 - k2 + self._mul_base

    def one(self) -> int:
        return self.okey((0,) * self.nvars)

    def total_degree(self, okey: int) -> int:
        mask = (1 << _W) - 1
        return sum(
            (okey >> sh) & mask
            for (kind, _), sh in zip(self._fields, self._shifts)
            if kind == "deg"
        )

    # -- plain packing for divisibility ------------------------------------------

    def pkey(self, exps) -> int:
        key = 0
        for e, sh in zip(exps, self._pshifts):
            key |= e << sh
        return key

    def divides(self, a_pkey: int, b_pkey: int) -> bool:
        """True when the monomial packed in a divides the one packed in b."""
        g = self._pguard
        return ((b_pkey | g) - a_pkey) & g == g

    def lcm_exps(self, ea, eb):
        return tuple(max(x, y) for x, y in zip(ea, eb))


# -- integer polynomial lists ---------------------------------------------------

def _content_strip(terms):
    """Divide out the integer content; make the leading coefficient positive."""
    if not terms:
        return terms
    g = 0
    for _, c in terms:
        g = _gcd(g, abs(c))
        if g == 1:
            break
    if terms[0][1] < 0:
        g = -g
    if g not in (0, 1):
        return [(k, c // g) for k, c in terms]
    if g == -1:
        return [(k, -c) for k, c in terms]
    return terms


def _merge_scaled(a_coef, p, b_coef, shift, q, order):
    """a_coef * p - b_coef * (x^shift * q) for descending term lists."""
    out = []
    i = j = 0
    mul = order.mul
    np_, nq = len(p), len(q)
    while i < np_ and j < nq:
        kp = p[i][0]
        kq = mul(q[j][0], shift)
        if kp > kq:
            out.append((kp, a_coef * p[i][1]))
            i += 1
        elif kp < kq:
            out.append((kq, -b_coef * q[j][1]))
            j += 1
        else:
            c = a_coef * p[i][1] - b_coef * q[j][1]
            if c:
                out.append((kp, c))
            i += 1
            j += 1
    while i < np_:
        out.append((p[i][0], a_coef * p[i][1]))
        i += 1
    while j < nq:
        out.append((mul(q[j][0], shift), -b_coef * q[j][1]))
        j += 1
    return out


@dataclass
class EliminationStats:
    pairs_considered: int = 0
    pairs_reduced: int = 0
    reduction_steps: int = 0
    basis_size: int = 0
    elapsed: float = 0.0


class _Budget:
    def __init__(self, max_seconds=None, max_steps=None):
        self.deadline = None if max_seconds is None else time.monotonic() + max_seconds
        self.max_steps = max_steps
        self.steps = 0

    def tick(self, n=1):
        self.steps += n
        if self.max_steps is not None and self.steps > self.max_steps:
            raise EliminationTimeout(f"step budget {self.max_steps} exceeded")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise EliminationTimeout("wall-clock budget exceeded")


def _to_gpoly(p: SparsePoly, order: MonomialOrder):
    den = 1
    for c in p.terms.values():
        if c.im:
            raise NotImplementedError("Groebner engine handles rational coefficients only")
        d = int(c.re.denominator)
        den = den * d // _gcd(den, d)
    terms = []
    for e, c in p.terms.items():
        terms.append((order.okey(e), int(c.re.numerator) * (den // int(c.re.denominator))))
    terms.sort(key=lambda t: t[0], reverse=True)
    return _content_strip(terms)


def _from_gpoly(terms, order: MonomialOrder, vars=None) -> SparsePoly:
    vars = order.vars if vars is None else tuple(vars)
    p = SparsePoly(order.vars)
    for k, c in terms:
        p.terms[order.exps_of(k)] = ExactScalar(c)
    return p.with_vars(vars) if vars != order.vars else p


def _top_reduce(p, basis, active, order, budget, stats):
    """Full normal form of p against the active basis (fraction-free)."""
    head = []
    while p:
        lk, lc = p[0]
        lp = order.pkey(order.exps_of(lk))
        reducer = None
        for idx in active:
            g = basis[idx]
            if order.divides(g.lm_pkey, lp):
                reducer = g
                break
        if reducer is None:
            head.append((lk, lc))
            p = p[1:]
            continue
        budget.tick()
        stats.reduction_steps += 1
        shift = order.quot(lk, reducer.lm_okey)
        g0 = _gcd(abs(lc), abs(reducer.lc))
        a = reducer.lc // g0
        b = lc // g0
        if a < 0:
            a, b = -a, -b
        p = _merge_scaled(a, p[1:], b, shift, reducer.terms[1:], order)
        if a != 1 and head:
            head = [(k, c * a) for k, c in head]
    return _content_strip(head)


@dataclass
class _BasisElem:
    terms: list
    lm_okey: int
    lm_pkey: int
    lm_exps: tuple
    lc: int
    sugar: int


def _make_elem(terms, order, sugar=None):
    lm = terms[0][0]
    exps = order.exps_of(lm)
    if sugar is None:
        sugar = max(order.total_degree(k) for k, _ in terms)
    return _BasisElem(terms, lm, order.pkey(exps), exps, terms[0][1], sugar)


def buchberger(gens, order: MonomialOrder, max_seconds=None, max_steps=None):
    """Reduced Groebner basis of the ideal generated by gens.

    Returns (list of SparsePoly, EliminationStats).  Raises
    EliminationTimeout when a budget is exceeded.
    """
    t0 = time.monotonic()
    stats = EliminationStats()
    budget = _Budget(max_seconds, max_steps)

    basis = []
    active = []
    pairs = []  # heap of (sugar, lcm_okey, i, j)
    pair_set = {}

    def lcm_okey(i, j):
        e = order.lcm_exps(basis[i].lm_exps, basis[j].lm_exps)
        return order.okey(e), e

    def add_pairs(t):
        """Gebauer-Moeller update for new basis index t."""
        new = []
        ht = basis[t]
        for i in active:
            if i == t:
                continue
            ko, ke = lcm_okey(i, t)
            new.append([i, t, ko, ke])
        # M criterion: keep only pairs whose lcm is minimal among the new ones.
        keep = []
        for a in new:
            dominated = False
            pa = order.pkey(a[3])
            for b in new:
                if b is a:
                    continue
                pb = order.pkey(b[3])
                if order.divides(pb, pa) and (b[2] != a[2] or b[0] < a[0]):
                    dominated = True
                    break
            if not dominated:
                keep.append(a)
        # B criterion: drop pairs with coprime leading monomials.
        kept2 = []
        for i, t_, ko, ke in keep:
            prod = tuple(x + y for x, y in zip(basis[i].lm_exps, basis[t_].lm_exps))
            if ke == prod:
                continue
            kept2.append((i, t_, ko, ke))
        # Chain criterion on old pairs.
        stale = []
        for (i, j), (ko, ke) in list(pair_set.items()):
            if order.divides(basis[t].lm_pkey, order.pkey(ke)):
                k1, _ = lcm_okey(i, t)
                k2, _ = lcm_okey(j, t)
                if k1 != ko and k2 != ko:
                    stale.append((i, j))
        for key in stale:
            del pair_set[key]
        for i, t_, ko, ke in kept2:
            dlc = order.total_degree(ko)
            sug = max(
                basis[i].sugar + dlc - order.total_degree(basis[i].lm_okey),
                basis[t_].sugar + dlc - order.total_degree(basis[t_].lm_okey),
            )
            pair_set[(i, t_)] = (ko, ke)
            heappush(pairs, (sug, ko, i, t_))

    def insert(terms, sugar=None):
        elem = _make_elem(terms, order, sugar)
        basis.append(elem)
        active.append(len(basis) - 1)
        add_pairs(len(basis) - 1)

    for g in gens:
        if g.is_zero():
            continue
        terms = _to_gpoly(g, order)
        terms = _top_reduce(terms, basis, active, order, budget, stats)
        if terms:
            insert(terms)

    while pairs:
        sug, ko, i, j = heappop(pairs)
        if pair_set.pop((i, j), None) is None:
            continue  # pruned by the chain criterion
        stats.pairs_considered += 1
        gi, gj = basis[i], basis[j]
        si = order.quot(ko, gi.lm_okey)
        sj = order.quot(ko, gj.lm_okey)
        g0 = _gcd(abs(gi.lc), abs(gj.lc))
        a = gj.lc // g0
        b = gi.lc // g0
        spoly = _merge_scaled(a, [(order.mul(k, si), c) for k, c in gi.terms],
                              b, sj, gj.terms, order)
        spoly = _content_strip(spoly)
        if not spoly:
            continue
        stats.pairs_reduced += 1
        red = _top_reduce(spoly, basis, active, order, budget, stats)
        if red:
            insert(red, sugar=sug)

    # Interreduce to the unique reduced basis (up to normalization).
    final = _interreduce(basis, active, order, budget, stats)
    stats.basis_size = len(final)
    stats.elapsed = time.monotonic() - t0
    polys = [_from_gpoly(t, order) for t in final]
    return polys, stats


def _interreduce(basis, active, order, budget, stats):
    elems = [basis[i] for i in active]
    elems.sort(key=lambda e: e.lm_okey)
    kept = []
    for e in elems:
        if any(order.divides(o.lm_pkey, e.lm_pkey) for o in kept):
            continue
        kept.append(e)
    result = []
    for pos, e in enumerate(kept):
        others = kept[:pos] + kept[pos + 1:]
        if not others:
            result.append(_content_strip(e.terms))
            continue
        tmp_basis = others
        tmp_active = list(range(len(others)))
        red = _top_reduce(list(e.terms), tmp_basis, tmp_active, order, budget, stats)
        if red:
            result.append(_content_strip(red))
    result.sort(key=lambda t: t[0][0])
    return result


def groebner_eliminate(gens, elim_vars, keep_vars, max_seconds=None, max_steps=None):
    """Reduced basis of the elimination ideal in the keep variables.

    Returns (list of SparsePoly over keep_vars, EliminationStats).
    """
    elim_vars = tuple(elim_vars)
    keep_vars = tuple(keep_vars)
    all_vars = elim_vars + keep_vars
    order = MonomialOrder(all_vars, [list(elim_vars), list(keep_vars)])
    aligned = [g.with_vars(all_vars) if set(g.used_vars()) <= set(all_vars) else g
               for g in gens]
    gb, stats = buchberger(aligned, order, max_seconds=max_seconds, max_steps=max_steps)
    elim_set = set(elim_vars)
    out = []
    for p in gb:
        if p.used_vars() & elim_set:
            continue
        out.append(p.with_vars(keep_vars))
    return out, stats
