"""Singular rational curves: semigroups, charts, and dualizing differentials.

A curve is the projective line with prescribed singularities: cusps
(location plus numerical semigroup, monomial local ring) and nodes (pairs
of identified points).  Dualizing differentials are meromorphic
differentials on the line whose residues against all local-ring functions
vanish; cusp bases are found by solving those residue conditions exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd as _int_gcd

from .errors import MalformedGaps, RankDeficient
from .linalg import nullspace, rank, rref
from .partfrac import partial_fractions, residue_at
from .poly import SparsePoly
from .ratfunc import RationalFunction
from .scalars import ExactScalar, ONE, ZERO, scalar


# -- numerical semigroups ----------------------------------------------------

@dataclass(frozen=True)
class SemigroupSpec:
    generators: tuple

    def __init__(self, generators):
        gens = tuple(sorted(set(int(g) for g in generators)))
        if not gens or any(g <= 0 for g in gens):
            raise ValueError("generators must be positive integers")
        g = 0
        for x in gens:
            g = _int_gcd(g, x)
        if g != 1:
            raise ValueError("gcd of generators must be 1 (finite gap set)")
        object.__setattr__(self, "generators", gens)

    def __str__(self):
        return "<" + ",".join(str(g) for g in self.generators) + ">"


def gaps(s: SemigroupSpec):
    """Sorted complement of the semigroup in the nonnegative integers."""
    bound = s.generators[0] * s.generators[-1] + 1
    member = [False] * bound
    member[0] = True
    for n in range(1, bound):
        member[n] = any(n >= g and member[n - g] for g in s.generators)
    out = [n for n in range(1, bound) if not member[n]]
    # Every integer from the largest gap on must be a member.
    top = out[-1] if out else 0
    assert all(member[n] for n in range(top + 1, bound)), "gap bound too small"
    return out


def delta(s: SemigroupSpec) -> int:
    return len(gaps(s))


def conductor(s: SemigroupSpec) -> int:
    g = gaps(s)
    return g[-1] + 1 if g else 0


def gorenstein_check(s: SemigroupSpec) -> bool:
    return conductor(s) == 2 * delta(s)


@dataclass(frozen=True)
class Partition:
    parts: tuple

    def __init__(self, parts):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts) or any(
            parts[i] < parts[i + 1] for i in range(len(parts) - 1)
        ):
            raise ValueError("parts must be weakly decreasing positive integers")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)


def weierstrass_partition(gap_list) -> Partition:
    """lambda_i = w_{n+1-i} - (n-i) for ascending gaps w_1 < ... < w_n."""
    w = list(gap_list)
    n = len(w)
    if sorted(w) != w or len(set(w)) != n:
        raise MalformedGaps("gaps must be strictly increasing")
    parts = [w[n - i] - (n - i) for i in range(1, n + 1)]
    if any(parts[i] < parts[i + 1] for i in range(n - 1)) or any(p <= 0 for p in parts):
        raise MalformedGaps(f"gap sequence {w} gives non-partition {parts}")
    return Partition(parts)


# -- charts and points on the line --------------------------------------------

CHARTS = ("z", "u")


def other_chart(chart: str) -> str:
    return "u" if chart == "z" else "z"


@dataclass(frozen=True)
class ChartPoint:
    """A point of the line, stored as a finite coordinate in one chart.

    The two charts are related by u = 1/z, so z = 0 is u-infinity and
    vice versa; every point has a finite coordinate in at least one chart.
    """

    chart: str
    value: ExactScalar

    def __init__(self, chart, value):
        if chart not in CHARTS:
            raise ValueError(f"unknown chart {chart!r}")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "value", scalar(value))

    @classmethod
    def parse(cls, data) -> "ChartPoint":
        chart = data.get("chart", "z")
        at = data["at"]
        if isinstance(at, str) and at.strip() in ("inf", "oo", "infinity"):
            return cls(other_chart(chart), 0)
        return cls(chart, scalar(at))

    def in_chart(self, chart: str):
        """Finite coordinate in the requested chart, or None if infinite there."""
        if chart == self.chart:
            return self.value
        if self.value.is_zero():
            return None
        return ONE / self.value

    def same_point(self, other: "ChartPoint") -> bool:
        if self.chart == other.chart:
            return self.value == other.value
        if self.value.is_zero() or other.value.is_zero():
            return False
        return self.value * other.value == ONE

    def __str__(self):
        return f"{self.chart}={self.value.as_str()}"


def transport(func: RationalFunction, src: str, dst: str) -> RationalFunction:
    """Move a differential coefficient g(x) dx between charts (u = 1/z)."""
    if src == dst:
        return func
    x_new = SparsePoly.variable(dst, (dst,))
    inv = RationalFunction(SparsePoly.const((dst,), ONE), x_new)
    moved = func.substitute({src: inv})
    jacobian = RationalFunction(
        SparsePoly.const((dst,), ExactScalar(-1)), x_new * x_new
    )
    return moved * jacobian


class Differential:
    """g(x) dx on the line, tagged with its chart; pole data is computed."""

    __slots__ = ("chart", "func")

    def __init__(self, func: RationalFunction, chart: str):
        if chart not in CHARTS:
            raise ValueError(f"unknown chart {chart!r}")
        used = func.num.used_vars() | func.den.used_vars()
        if not used <= {chart}:
            raise ValueError(f"differential in chart {chart} uses variables {used}")
        self.func = RationalFunction(func.num.with_vars((chart,)), func.den.with_vars((chart,)))
        self.chart = chart

    def to_chart(self, chart: str) -> "Differential":
        if chart == self.chart:
            return self
        return Differential(transport(self.func, self.chart, chart), chart)

    def poles(self):
        """All poles as (ChartPoint, order), including the one at infinity."""
        out = []
        pf = partial_fractions(self.func, self.chart)
        by_pole = {}
        for t in pf.terms:
            key = (t.pole.re, t.pole.im)
            by_pole[key] = max(by_pole.get(key, 0), t.order)
        for (re_, im_), order in sorted(by_pole.items()):
            out.append((ChartPoint(self.chart, ExactScalar(re_, im_)), order))
        # Pole at the chart's infinity: look at 0 in the other chart.
        flipped = self.to_chart(other_chart(self.chart))
        pf_inf = partial_fractions(flipped.func, flipped.chart)
        inf_order = max((t.order for t in pf_inf.terms if t.pole.is_zero()), default=0)
        if inf_order:
            out.append((ChartPoint(flipped.chart, ZERO), inf_order))
        return out

    def residue(self, point: ChartPoint) -> ExactScalar:
        """Residue at a point (chart-independent)."""
        coord = point.in_chart(self.chart)
        if coord is not None:
            return residue_at(self.func, self.chart, coord)
        flipped = self.to_chart(other_chart(self.chart))
        return residue_at(flipped.func, flipped.chart, ZERO)

    def scale(self, c) -> "Differential":
        return Differential(self.func * RationalFunction(
            SparsePoly.const((self.chart,), scalar(c)), 1, reduce=False), self.chart)

    def __add__(self, other: "Differential") -> "Differential":
        other = other.to_chart(self.chart)
        return Differential(self.func + other.func, self.chart)

    def __sub__(self, other: "Differential") -> "Differential":
        other = other.to_chart(self.chart)
        return Differential(self.func - other.func, self.chart)

    def __eq__(self, other):
        if not isinstance(other, Differential):
            return NotImplemented
        return self.func == other.to_chart(self.chart).func

    def __hash__(self):
        raise TypeError("Differential is not hashable")

    def to_json_dict(self) -> dict:
        return {
            "chart": self.chart,
            "num": self.func.num.to_text(),
            "den": self.func.den.to_text(),
        }

    @classmethod
    def from_json_dict(cls, data) -> "Differential":
        chart = data["chart"]
        num = SparsePoly.parse(data["num"], vars=(chart,))
        den = SparsePoly.parse(data["den"], vars=(chart,))
        return cls(RationalFunction(num, den), chart)

    def __repr__(self):
        return f"Differential(({self.func.to_text()}) d{self.chart})"


# -- singularity specs ----------------------------------------------------------

@dataclass(frozen=True)
class CuspSpec:
    location: ChartPoint
    semigroup: SemigroupSpec

    def __post_init__(self):
        if not gorenstein_check(self.semigroup):
            raise ValueError(
                f"semigroup {self.semigroup} is not Gorenstein (d != 2*delta)"
            )

    @property
    def delta(self) -> int:
        return delta(self.semigroup)

    def partition(self) -> Partition:
        return weierstrass_partition(gaps(self.semigroup))

    def preimages(self):
        return (self.location,)


@dataclass(frozen=True)
class NodeSpec:
    b: ExactScalar
    c: ExactScalar

    def __init__(self, b, c):
        b, c = scalar(b), scalar(c)
        if b == c:
            raise ValueError("node requires two distinct points")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def delta(self) -> int:
        return 1

    def preimages(self):
        return (ChartPoint("z", self.b), ChartPoint("z", self.c))


@dataclass(frozen=True)
class CurveSpec:
    singularities: tuple
    basepoint: ChartPoint
    expansion_point: ChartPoint

    def __init__(self, singularities, basepoint, expansion_point):
        singularities = tuple(singularities)
        pts = []
        for s in singularities:
            pts.extend(s.preimages())
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if pts[i].same_point(pts[j]):
                    raise ValueError("singularity locations must be pairwise distinct")
        for name, p in (("basepoint", basepoint), ("expansion point", expansion_point)):
            if any(p.same_point(q) for q in pts):
                raise ValueError(f"{name} must be a smooth point")
        object.__setattr__(self, "singularities", singularities)
        object.__setattr__(self, "basepoint", basepoint)
        object.__setattr__(self, "expansion_point", expansion_point)

    @property
    def genus(self) -> int:
        return sum(s.delta for s in self.singularities)

    @classmethod
    def from_json_dict(cls, data) -> "CurveSpec":
        sings = []
        for s in data["singularities"]:
            if s["type"] == "cusp":
                loc = ChartPoint.parse({"chart": s.get("chart", "z"), "at": s["at"]})
                sings.append(CuspSpec(loc, SemigroupSpec(s["semigroup"])))
            elif s["type"] == "node":
                sings.append(NodeSpec(scalar(s["b"]), scalar(s["c"])))
            else:
                raise ValueError(f"unknown singularity type {s['type']!r}")
        return cls(
            sings,
            ChartPoint.parse(data["basepoint"]),
            ChartPoint.parse(data["expansion_point"]),
        )

    def to_json_dict(self) -> dict:
        out = []
        for s in self.singularities:
            if isinstance(s, CuspSpec):
                out.append({
                    "type": "cusp",
                    "chart": s.location.chart,
                    "at": s.location.value.as_str(),
                    "semigroup": list(s.semigroup.generators),
                })
            else:
                out.append({"type": "node", "b": s.b.as_str(), "c": s.c.as_str()})
        return {
            "singularities": out,
            "basepoint": {"chart": self.basepoint.chart, "at": self.basepoint.value.as_str()},
            "expansion_point": {
                "chart": self.expansion_point.chart,
                "at": self.expansion_point.value.as_str(),
            },
        }


# -- dualizing differentials -----------------------------------------------------

def node_differential(n: NodeSpec, chart: str = "u") -> Differential:
    """(b-c)/((1-bu)(1-cu)) du, equivalently -(1/(z-b) - 1/(z-c)) dz."""
    if chart == "u":
        u = SparsePoly.variable("u", ("u",))
        one = SparsePoly.const(("u",), ONE)
        den = (one - u.scale(n.b)) * (one - u.scale(n.c))
        num = SparsePoly.const(("u",), n.b - n.c)
        return Differential(RationalFunction(num, den), "u")
    z = SparsePoly.variable("z", ("z",))
    fb = RationalFunction(SparsePoly.const(("z",), ONE), z - SparsePoly.const(("z",), n.b))
    fc = RationalFunction(SparsePoly.const(("z",), ONE), z - SparsePoly.const(("z",), n.c))
    return Differential(-(fb - fc), "z")


def cusp_differential_basis(cusp: CuspSpec) -> list:
    """Solve the residue conditions at a monomial cusp.

    Local functions at the cusp are modeled as (x-a)^s for s in the
    semigroup; the ansatz runs over pole orders 2..conductor+1 and the
    conditions say the residue of (x-a)^s * omega vanishes for every
    semigroup element s up to the conductor.  Returns delta differentials
    in reduced echelon form over the pole-order coordinates (ascending
    minimal pole order first).
    """
    s = cusp.semigroup
    d = conductor(s)
    dlt = delta(s)
    gap_set = set(gaps(s))
    members = [m for m in range(0, d + 1) if m not in gap_set]
    orders = list(range(2, d + 2))
    # Residue of (x-a)^s * sum c_k (x-a)^(-k) dx is c_{s+1}.
    rows = []
    for m in members:
        row = [ONE if k == m + 1 else ZERO for k in orders]
        if any(not x.is_zero() for x in row):
            rows.append(row)
    basis = nullspace(rows, len(orders))
    if len(basis) != dlt:
        raise RankDeficient(
            f"residue conditions for {s} give dimension {len(basis)}, expected {dlt}"
        )
    reduced, pivots = rref(basis)
    reduced = [r for r in reduced if any(not x.is_zero() for x in r)]
    if len(reduced) != dlt:
        raise RankDeficient("echelon reduction lost dimensions")
    chart = cusp.location.chart
    a = cusp.location.value
    x = SparsePoly.variable(chart, (chart,))
    lin = x - SparsePoly.const((chart,), a)
    out = []
    for vec in reduced:
        total = RationalFunction(SparsePoly.zero((chart,)), 1, reduce=False)
        for coef, k in zip(vec, orders):
            if not coef.is_zero():
                total = total + RationalFunction(SparsePoly.const((chart,), coef), lin ** k)
        out.append(Differential(total, chart))
    return out


def curve_differential_basis(curve: CurveSpec, override=None) -> list:
    """Union of local bases; count equals the arithmetic genus.

    An override (list of Differentials, e.g. a published basis with its
    particular scalings) replaces the construction but is validated against
    the residue conditions and checked for linear independence.
    """
    if override is not None:
        diffs = list(override)
        if len(diffs) != curve.genus:
            raise ValueError(
                f"override has {len(diffs)} differentials, genus is {curve.genus}"
            )
        if not rosenlicht_check(curve, diffs):
            raise ValueError("override violates the residue conditions")
        if _independent_count(diffs) != curve.genus:
            raise ValueError("override differentials are linearly dependent")
        return diffs
    diffs = []
    for s in curve.singularities:
        if isinstance(s, CuspSpec):
            diffs.extend(cusp_differential_basis(s))
        else:
            diffs.append(node_differential(s, chart="u"))
    assert len(diffs) == curve.genus
    return diffs


def singular_blocks(curve: CurveSpec):
    """Sizes of the per-singularity blocks in the differential basis."""
    return [s.delta for s in curve.singularities]


def _independent_count(diffs) -> int:
    """Rank of the partial-fraction coefficient matrix (in the z chart)."""
    vectors = []
    columns = {}
    for w in diffs:
        pf = partial_fractions(w.to_chart("z").func, "z")
        vec = {}
        for t in pf.terms:
            key = ("pole", t.pole.re, t.pole.im, t.order)
            columns.setdefault(key, len(columns))
            vec[key] = t.coefficient
        for k, c in enumerate(pf.poly_part.univariate_coeffs("z")):
            if not c.is_zero():
                key = ("poly", 0, 0, k)
                columns.setdefault(key, len(columns))
                vec[key] = c.constant_value()
        vectors.append(vec)
    rows = [[vec.get(key, ZERO) for key in columns] for vec in vectors]
    return rank(rows)


def rosenlicht_check(curve: CurveSpec, diffs) -> bool:
    """Re-verify the residue conditions for every differential.

    Checks, independently of how the basis was constructed: cusp conditions
    Res((x-a)^m * omega) = 0 for all semigroup elements m below the
    conductor, zero residue sums at nodes, and no poles away from the
    singular preimages.
    """
    allowed = []
    for s in curve.singularities:
        allowed.extend(s.preimages())
    for w in diffs:
        for point, _order in w.poles():
            if not any(point.same_point(p) for p in allowed):
                return False
        for s in curve.singularities:
            if isinstance(s, CuspSpec):
                chart = s.location.chart
                a = s.location.value
                local = w.to_chart(chart)
                x = SparsePoly.variable(chart, (chart,))
                lin = x - SparsePoly.const((chart,), a)
                d = conductor(s.semigroup)
                gap_set = set(gaps(s.semigroup))
                for m in range(0, d + 1):
                    if m in gap_set:
                        continue
                    shifted = local.func * RationalFunction(lin ** m, 1, reduce=False)
                    if not residue_at(shifted, chart, a).is_zero():
                        return False
            else:
                total = w.residue(ChartPoint("z", s.b)) + w.residue(ChartPoint("z", s.c))
                if not total.is_zero():
                    return False
    return True
