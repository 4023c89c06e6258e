"""From theta polynomials to real regular KP1 tau polynomials.

The series coefficients of the differential basis at the expansion point
feed the substitution Z_j -> a0*x + a1*i*y + a2*t + phi_j (the i absorbs
the rescaling that turns KP2 data into KP1 data).  Phases are solved so
every coefficient is real, regularity is certified by an exact
sum-of-squares decomposition, and the PDE is verified symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curves import CurveSpec
from .errors import (ImaginaryResidue, NonpositiveConstant, NoRealSolution,
                     NotConjugate, RecombinationMismatch, ZeroTau, DecayMismatch)
from .poly import SparsePoly, grevlex_key
from .ratfunc import RationalFunction
from .scalars import ExactScalar, IMAG, ONE, ZERO, scalar
from .series import series_expand
from .theta import ThetaPolynomial

XYT = ("x", "y", "t")


@dataclass
class FrameRows:
    """First m series coefficients of each basis differential."""

    rows: list

    def __post_init__(self):
        if self.rows and min(len(r) for r in self.rows) < 3:
            raise ValueError("need at least 3 series coefficients (x, y, t directions)")

    @property
    def genus(self) -> int:
        return len(self.rows)


def frame_rows(curve: CurveSpec, basis, m: int = 3) -> FrameRows:
    """Exact series rows of the basis at the curve's expansion point."""
    chart = curve.expansion_point.chart
    center = curve.expansion_point.value
    rows = []
    for w in basis:
        local = w.to_chart(chart)
        rows.append(series_expand(local.func, chart, center, m).coeffs)
    return FrameRows(rows)


@dataclass
class PhaseVector:
    """Phase entries: solved ExactScalar values or symbol names."""

    entries: list

    @classmethod
    def symbolic(cls, g: int) -> "PhaseVector":
        return cls([f"phi{j + 1}" for j in range(g)])

    @classmethod
    def from_values(cls, values) -> "PhaseVector":
        return cls([scalar(v) for v in values])

    def is_solved(self) -> bool:
        return all(isinstance(e, ExactScalar) for e in self.entries)

    def symbols(self):
        return [e for e in self.entries if isinstance(e, str)]

    def values(self):
        if not self.is_solved():
            raise ValueError("phase vector still has symbolic entries")
        return list(self.entries)


def tau_substitute(theta: ThetaPolynomial, rows: FrameRows, phases: PhaseVector) -> SparsePoly:
    """Compose theta with Z_j = a0j*x + a1j*i*y + a2j*t + phi_j."""
    g = theta.genus
    if rows.genus != g or len(phases.entries) != g:
        raise ValueError("rows/phases size must match the genus")
    phase_syms = tuple(dict.fromkeys(phases.symbols()))
    out_vars = XYT + phase_syms
    bindings = {}
    for j in range(g):
        a = rows.rows[j]
        lin = SparsePoly(out_vars)
        for var, coef in zip(XYT, (a[0], a[1] * IMAG, a[2])):
            if not coef.is_zero():
                exps = tuple(1 if v == var else 0 for v in out_vars)
                lin.terms[exps] = coef
        entry = phases.entries[j]
        if isinstance(entry, str):
            exps = tuple(1 if v == entry else 0 for v in out_vars)
            lin.terms[exps] = lin.terms.get(exps, ZERO) + ONE
        elif not entry.is_zero():
            exps = (0,) * len(out_vars)
            lin.terms[exps] = lin.terms.get(exps, ZERO) + entry
        bindings[f"Z{j + 1}"] = lin
    return theta.poly.substitute(bindings).with_vars(out_vars)


def coefficient_in_xyt(p: SparsePoly, ex: int, ey: int, et: int) -> SparsePoly:
    """Coefficient of x^ex y^ey t^et as a polynomial in the other variables."""
    idx = [p.vars.index(v) for v in XYT]
    rest = tuple(v for v in p.vars if v not in XYT)
    out = SparsePoly(rest)
    for e, c in p.terms.items():
        if (e[idx[0]], e[idx[1]], e[idx[2]]) == (ex, ey, et):
            re_ = tuple(x for i, x in enumerate(e) if i not in idx)
            out.terms[re_] = out.terms.get(re_, ZERO) + c
    out.terms = {e: c for e, c in out.terms.items() if not c.is_zero()}
    return out


def _imaginary_part(p: SparsePoly) -> SparsePoly:
    out = SparsePoly(p.vars)
    for e, c in p.terms.items():
        if c.im:
            out.terms[e] = ExactScalar(c.im)
    return out


def _normalize_constraint(c: SparsePoly) -> SparsePoly:
    _, prim = c.primitive()
    return prim


def solve_phases(substituted: SparsePoly, phase_names=None):
    """Choose phases making every coefficient real.

    Scans the imaginary parts of the (x,y,t)-coefficients, highest y-power
    first, Gaussian-eliminating the affine ones; free phases are pinned to
    zero.  Returns (PhaseVector, constraints) where the constraints are the
    normalized affine relations that were used.
    """
    if phase_names is None:
        phase_names = tuple(v for v in substituted.vars if v not in XYT)
    phase_names = tuple(phase_names)
    idx = {v: substituted.vars.index(v) for v in XYT}

    def collect(poly):
        groups = {}
        for e, c in poly.terms.items():
            key = (e[idx["x"]], e[idx["y"]], e[idx["t"]])
            bucket = groups.setdefault(key, SparsePoly(phase_names))
            pe = tuple(e[poly.vars.index(v)] for v in phase_names)
            bucket.terms[pe] = bucket.terms.get(pe, ZERO) + c
        out = []
        for key, bucket in groups.items():
            im = _imaginary_part(bucket)
            if not im.is_zero():
                out.append((key, im))
        # Highest y power first, then total degree, then grevlex.
        out.sort(key=lambda kv: (kv[0][1], sum(kv[0]), grevlex_key(kv[0])), reverse=True)
        return out

    work = substituted
    solution = {}
    constraints = []
    while True:
        pending = collect(work)
        if not pending:
            break
        progressed = False
        for _key, im in pending:
            if im.total_degree() > 1:
                continue
            # affine: pick the lowest-index phase with a nonzero coefficient
            pivot = None
            for name in phase_names:
                if name in solution:
                    continue
                e = tuple(1 if v == name else 0 for v in phase_names)
                coef = im.terms.get(e, ZERO)
                if not coef.is_zero():
                    pivot = (name, coef)
                    break
            if pivot is None:
                if im.is_constant() and not im.is_zero():
                    raise NoRealSolution(
                        f"inconsistent constraint {im.to_text()} = 0"
                    )
                continue
            name, coef = pivot
            e = tuple(1 if v == name else 0 for v in phase_names)
            rest = im.copy()
            del rest.terms[e]
            expr = rest.scale(-(ONE / coef))
            solution[name] = expr
            constraints.append(_normalize_constraint(im))
            work = work.substitute({name: expr.with_vars(phase_names)})
            progressed = True
            break
        if not progressed:
            raise NoRealSolution(
                "reality constraints are not affine in the remaining phases: "
                + "; ".join(im.to_text() for _k, im in pending[:3])
            )
    # Pin free phases to zero, then resolve solution chains.
    values = {
        name: solution.get(name, SparsePoly.zero(phase_names))
        for name in phase_names
    }
    for _ in range(len(phase_names)):
        if not any(v.used_vars() for v in values.values()):
            break
        values = {
            name: v.substitute({w: values[w] for w in v.used_vars()})
            if v.used_vars() else v
            for name, v in values.items()
        }
    entries = []
    for name in phase_names:
        v = values[name]
        if v.used_vars():
            raise NoRealSolution(f"could not resolve phase {name}")
        entries.append(v.constant_value() if not v.is_zero() else ZERO)
    return PhaseVector(entries), constraints


def real_tau(theta: ThetaPolynomial, rows: FrameRows, phases: PhaseVector) -> SparsePoly:
    """Substitute solved phases; verify reality; normalize monic (grevlex).

    The printed form of the tau polynomial is monic in its grevlex leading
    monomial; a constant rescaling does not change the KP solution.
    """
    if not phases.is_solved():
        raise ValueError("phases must be solved scalars")
    sub = tau_substitute(theta, rows, phases)
    sub = sub.with_vars(XYT) if set(sub.used_vars()) <= set(XYT) else sub
    for e, c in sub.terms.items():
        if c.im:
            raise ImaginaryResidue(
                f"coefficient of {e} kept imaginary part {c.im}"
            )
    tau = sub.with_vars(XYT)
    jd = tau.joint_degree(("x", "y"))
    if jd % 2 != 0:
        raise ImaginaryResidue(f"tau has odd total degree {jd} in (x, y)")
    return tau.monic()


def u_from_tau(tau: SparsePoly) -> RationalFunction:
    """u = 2 (tau tau_xx - tau_x^2) / tau^2, in lowest terms."""
    if tau.is_zero():
        raise ZeroTau("tau is the zero polynomial")
    tau = tau.with_vars(XYT) if set(tau.used_vars()) <= set(XYT) else tau
    tx = tau.derivative("x")
    txx = tx.derivative("x")
    num = (tau * txx - tx * tx).scale(2)
    return RationalFunction(num, tau * tau)


def kp1_residual(u: RationalFunction) -> SparsePoly:
    """Exact numerator of (-4 u_t + 6 u u_x + u_xxx)_x - 3 u_yy over tau^10.

    The zero polynomial certifies that u solves KP1.
    """
    P = u.num.with_vars(XYT) if set(u.num.used_vars()) <= set(XYT) else u.num
    Q = u.den.with_vars(P.vars)
    Px, Pt, Py = (P.derivative(v) for v in ("x", "t", "y"))
    Qx, Qt, Qy = (Q.derivative(v) for v in ("x", "t", "y"))
    A = Px * Q - P * Qx                    # u_x   = A / Q^2
    T = Pt * Q - P * Qt                    # u_t   = T / Q^2
    B = A.derivative("x") * Q - A * Qx.scale(2)     # u_xx  = B / Q^3
    C = B.derivative("x") * Q - B * Qx.scale(3)     # u_xxx = C / Q^4
    Q2 = Q * Q
    E = T.scale(-4) * Q2 + P.scale(6) * A * Q + C   # inner bracket over Q^4
    F = E.derivative("x") * Q - E * Qx.scale(4)     # d/dx -> over Q^5
    G = Py * Q - P * Qy                    # u_y   = G / Q^2
    H = G.derivative("y") * Q - G * Qy.scale(2)     # u_yy  = H / Q^3
    return F - H.scale(3) * Q2


def hirota_bilinear(tau: SparsePoly) -> SparsePoly:
    """(D_x^4 - 4 D_x D_t - 3 D_y^2) tau . tau; identically zero is a
    sufficient condition for the KP1 identity (independent cross-check)."""
    tau = tau.with_vars(XYT)
    tx = tau.derivative("x")
    txx = tx.derivative("x")
    txxx = txx.derivative("x")
    txxxx = txxx.derivative("x")
    tt = tau.derivative("t")
    txt = tx.derivative("t")
    ty = tau.derivative("y")
    tyy = ty.derivative("y")
    dx4 = (tau * txxxx - (tx * txxx).scale(4) + (txx * txx).scale(3)).scale(2)
    dxdt = (tau * txt - tx * tt).scale(2)
    dy2 = (tau * tyy - ty * ty).scale(2)
    return dx4 - dxdt.scale(4) - dy2.scale(3)


# -- sum of squares certificates --------------------------------------------------

@dataclass(frozen=True)
class ResidualFactorTemplate:
    """A Z-polynomial factor whose substituted form is claimed to be
    (sum of the given squares) + constant."""

    z_poly: SparsePoly
    squares: tuple
    constant: ExactScalar


@dataclass(frozen=True)
class ConjugateTemplate:
    """theta = factor1 * factor2 + scalar * prod(residual factors)."""

    factor1: SparsePoly
    factor2: SparsePoly
    residual_scalar: ExactScalar
    residual_factors: tuple


@dataclass(frozen=True)
class DirectTemplate:
    """tau = sum of squares + constant, given directly."""

    squares: tuple
    constant: ExactScalar


def bicuspidal_template() -> ConjugateTemplate:
    """Built-in rearrangement for the two-<2,5>-cusp family."""
    Z = ("Z1", "Z2", "Z3", "Z4")
    P = lambda s: SparsePoly.parse(s, vars=Z)
    xyt = lambda s: SparsePoly.parse(s, vars=XYT)
    return ConjugateTemplate(
        factor1=P("Z1^3 - 24*Z1^2 + 192*Z1 + 16*Z2 - 336"),
        factor2=P("Z3^3 + 24*Z3^2 + 192*Z3 + 16*Z4 + 336"),
        residual_scalar=ExactScalar(36),
        residual_factors=(
            ResidualFactorTemplate(
                P("Z1*Z3 + 10*Z1 - 6*Z3 - 56"),
                (xyt("4*x + 12*t + 10"), xyt("8*y")),
                ExactScalar(4),
            ),
            ResidualFactorTemplate(
                P("Z1*Z3 + 6*Z1 - 10*Z3 - 56"),
                (xyt("4*x + 12*t + 6"), xyt("8*y")),
                ExactScalar(4),
            ),
        ),
    )


@dataclass
class SOSCertificate:
    """Exact decomposition proving tau > 0 for all real (x, y, t).

    recombine() returns sum(squares^2) + residual_scalar * prod(residual
    factors) + offset, which equals tau_scale * tau exactly; tau_scale is
    the positive constant absorbed by the monic normalization of tau.
    Each conjugate pair (f, conj f) is the verified factorization of the
    corresponding square sum: f * conj(f) = Re(f)^2 + Im(f)^2.
    """

    squares: list
    conjugate_pairs: list
    residual_scalar: ExactScalar
    residual_factors: list      # (expanded factor, inner squares, inner const)
    offset: ExactScalar
    constant: ExactScalar       # tau(0, 0, 0)
    tau_scale: ExactScalar

    def recombine(self) -> SparsePoly:
        total = SparsePoly.const(XYT, self.offset)
        for s in self.squares:
            total = total + s * s
        if self.residual_factors:
            prod = SparsePoly.const(XYT, self.residual_scalar)
            for fac, _sq, _c in self.residual_factors:
                prod = prod * fac
            total = total + prod
        return total.with_vars(XYT)

    def to_json_dict(self) -> dict:
        return {
            "squares": [s.to_text() for s in self.squares],
            "conjugate_pairs": [
                [a.to_json_dict(), b.to_json_dict()] for a, b in self.conjugate_pairs
            ],
            "residual_scalar": self.residual_scalar.as_str(),
            "residual_factors": [
                {
                    "factor": f.to_text(),
                    "squares": [s.to_text() for s in sq],
                    "constant": c.as_str(),
                }
                for f, sq, c in self.residual_factors
            ],
            "offset": self.offset.as_str(),
            "constant": self.constant.as_str(),
            "tau_scale": self.tau_scale.as_str(),
        }

    @classmethod
    def from_json_dict(cls, data) -> "SOSCertificate":
        def sc(text):
            return SparsePoly.parse(text, vars=()).constant_value()
        return cls(
            squares=[SparsePoly.parse(s, vars=XYT) for s in data["squares"]],
            conjugate_pairs=[
                (SparsePoly.from_json_dict(a), SparsePoly.from_json_dict(b))
                for a, b in data["conjugate_pairs"]
            ],
            residual_scalar=sc(data["residual_scalar"]),
            residual_factors=[
                (
                    SparsePoly.parse(d["factor"], vars=XYT),
                    [SparsePoly.parse(s, vars=XYT) for s in d["squares"]],
                    sc(d["constant"]),
                )
                for d in data["residual_factors"]
            ],
            offset=sc(data["offset"]),
            constant=sc(data["constant"]),
            tau_scale=sc(data["tau_scale"]),
        )


def _conjugate_coeffs(p: SparsePoly) -> SparsePoly:
    return p.conjugate_coefficients()


def sos_certify(tau: SparsePoly, theta: ThetaPolynomial = None,
                rows: FrameRows = None, phases: PhaseVector = None,
                template=None) -> SOSCertificate:
    """Verify a sum-of-squares rearrangement of tau.

    Templates are verified, never discovered: the built-in one covers the
    two-<2,5>-cusp family; anything else must be supplied by the caller.
    """
    tau = tau.with_vars(XYT)
    const = tau.evaluate({"x": ZERO, "y": ZERO, "t": ZERO})
    if const.re <= 0 or const.im:
        raise NonpositiveConstant(f"tau(0,0,0) = {const} is not positive")
    if template is None:
        template = bicuspidal_template()
    if isinstance(template, DirectTemplate):
        total = SparsePoly.const(XYT, template.constant)
        for s in template.squares:
            total = total + s.with_vars(XYT) * s.with_vars(XYT)
        if total != tau:
            raise RecombinationMismatch("direct template does not reproduce tau")
        if template.constant.re <= 0 or template.constant.im:
            raise NonpositiveConstant("direct template constant must be positive")
        return SOSCertificate(
            squares=list(template.squares),
            conjugate_pairs=[],
            residual_scalar=ZERO,
            residual_factors=[],
            offset=template.constant,
            constant=const,
            tau_scale=ONE,
        )
    if theta is None or rows is None or phases is None:
        raise ValueError("conjugate templates need theta, rows, and phases")
    # (i) the rearrangement reproduces theta exactly
    rebuilt = template.factor1 * template.factor2
    prod = SparsePoly.const(template.factor1.vars, template.residual_scalar)
    for rf in template.residual_factors:
        prod = prod * rf.z_poly
    rebuilt = rebuilt + prod
    if rebuilt != theta.poly:
        raise RecombinationMismatch("template does not expand to the theta polynomial")
    # (ii) substituted cubic factors are complex conjugates
    sub = lambda zp: _theta_like_substitute(zp, theta, rows, phases)
    A1 = sub(template.factor1)
    A2 = sub(template.factor2)
    if A2 != _conjugate_coeffs(A1):
        raise NotConjugate("substituted block factors are not complex conjugates")
    re1 = SparsePoly(XYT)
    im1 = SparsePoly(XYT)
    for e, c in A1.with_vars(XYT).terms.items():
        if c.re:
            re1.terms[e] = ExactScalar(c.re)
        if c.im:
            im1.terms[e] = ExactScalar(c.im)
    if re1 * re1 + im1 * im1 != A1 * A2:
        raise NotConjugate("pair product does not equal its square sum")
    # (iii) residual factors are squares plus a positive constant
    factors = []
    for rf in template.residual_factors:
        g = sub(rf.z_poly).with_vars(XYT)
        if not g.is_real():
            raise NotConjugate(f"residual factor {rf.z_poly.to_text()} is not real")
        expanded = SparsePoly.const(XYT, rf.constant)
        for s in rf.squares:
            expanded = expanded + s.with_vars(XYT) * s.with_vars(XYT)
        if expanded != g:
            raise RecombinationMismatch(
                f"residual factor {rf.z_poly.to_text()} does not match its squares"
            )
        if rf.constant.re <= 0 or rf.constant.im:
            raise NonpositiveConstant("residual constant must be positive")
        factors.append((g, list(rf.squares), rf.constant))
    cert = SOSCertificate(
        squares=[re1, im1],
        conjugate_pairs=[(A1, A2)],
        residual_scalar=template.residual_scalar,
        residual_factors=factors,
        offset=ZERO,
        constant=const,
        tau_scale=ONE,
    )
    recombined = cert.recombine()
    scale = _constant_ratio(recombined, tau)
    if scale is None or recombined != tau.scale(scale):
        raise RecombinationMismatch("certificate does not recombine to tau")
    if scale.re <= 0 or scale.im:
        raise RecombinationMismatch("recombination scale must be positive")
    cert.tau_scale = scale
    return cert


def _theta_like_substitute(z_poly: SparsePoly, theta: ThetaPolynomial,
                           rows: FrameRows, phases: PhaseVector) -> SparsePoly:
    shell = ThetaPolynomial(z_poly, theta.blocks, theta.genus)
    return tau_substitute(shell, rows, phases).with_vars(XYT)


def _constant_ratio(a: SparsePoly, b: SparsePoly):
    """Scalar c with a == c*b (compared on leading terms), or None."""
    if b.is_zero():
        return None
    lb = b.leading_exps()
    la = a.leading_exps()
    if la != lb:
        return None
    return a.terms[la] / b.terms[lb]


# -- decay -----------------------------------------------------------------------

_RATIONAL_DIRECTIONS = [
    ("1", "0"), ("0", "1"), ("-1", "0"), ("0", "-1"),
    ("3/5", "4/5"), ("4/5", "3/5"), ("-3/5", "4/5"), ("4/5", "-3/5"),
    ("5/13", "12/13"), ("12/13", "5/13"), ("-5/13", "-12/13"), ("12/13", "-5/13"),
    ("8/17", "15/17"), ("15/17", "8/17"), ("-8/17", "15/17"), ("-15/17", "-8/17"),
]


def decay_check(u: RationalFunction, t_value="-11/8", strict: bool = True) -> dict:
    """Far-field decay report for a regular solution.

    Degree rule: joint (x,y) degree of the numerator plus 4 bounded by the
    denominator's.  Ray proxy: the maximum of |u| * (x^2+y^2)^2 over exact
    rational directions at radius 50 is at most 10 times its radius-25
    value.  With strict=True a failure raises DecayMismatch.
    """
    t_value = scalar(t_value)
    num_deg = u.num.joint_degree(("x", "y"))
    den_deg = u.den.joint_degree(("x", "y"))
    degree_ok = u.num.is_zero() or num_deg + 4 <= den_deg

    def ray_max(radius):
        r = scalar(radius)
        best = None
        for cx, sy in _RATIONAL_DIRECTIONS:
            x = r * scalar(cx)
            y = r * scalar(sy)
            point = {"x": x, "y": y, "t": t_value}
            den = u.den.evaluate(point)
            if den.is_zero():
                raise DecayMismatch(f"pole on sampling ray at radius {radius}")
            val = u.num.evaluate(point) / den
            weight = (x * x + y * y) ** 2
            mag = val * weight
            mag_abs = ExactScalar(abs(mag.re)) if mag.is_real() else None
            if mag_abs is None:
                raise DecayMismatch("non-real sample value")
            if best is None or best < mag_abs:
                best = mag_abs
        return best if best is not None else ZERO

    if u.num.is_zero():
        report = {
            "num_joint_degree": -1, "den_joint_degree": den_deg,
            "degree_rule_ok": True, "ray_max_r25": ZERO, "ray_max_r50": ZERO,
            "ray_bounded": True,
        }
        return report
    m25 = ray_max(25)
    m50 = ray_max(50)
    bounded = m50 <= ExactScalar(10) * m25
    report = {
        "num_joint_degree": num_deg,
        "den_joint_degree": den_deg,
        "degree_rule_ok": degree_ok,
        "ray_max_r25": m25,
        "ray_max_r50": m50,
        "ray_bounded": bounded,
    }
    if strict and not (degree_ok and bounded):
        raise DecayMismatch(f"decay check failed: {report}")
    return report


@dataclass
class TauResult:
    """A real tau polynomial with its phases, solution, and certificate."""

    tau: SparsePoly
    phases: PhaseVector
    constraints: list
    u: RationalFunction
    certificate: SOSCertificate = None
    theta: ThetaPolynomial = None

    def to_json_dict(self) -> dict:
        return {
            "tau": self.tau.to_json_dict(),
            "tau_text": self.tau.to_text(),
            "phases": [p.as_str() for p in self.phases.values()],
            "constraints": [c.to_text() for c in self.constraints],
            "u": self.u.to_json_dict(),
            "certificate": None if self.certificate is None
            else self.certificate.to_json_dict(),
            "theta": None if self.theta is None else self.theta.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, data) -> "TauResult":
        from .theta import ThetaPolynomial
        return cls(
            tau=SparsePoly.from_json_dict(data["tau"]),
            phases=PhaseVector.from_values(data["phases"]),
            constraints=[],
            u=RationalFunction.from_json_dict(data["u"]),
            certificate=None if data.get("certificate") is None
            else SOSCertificate.from_json_dict(data["certificate"]),
            theta=None if data.get("theta") is None
            else ThetaPolynomial.from_json_dict(data["theta"]),
        )
