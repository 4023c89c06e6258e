"""End-to-end orchestration: curve spec -> theta -> real tau -> solution."""

from __future__ import annotations

from .curves import CurveSpec, CuspSpec, curve_differential_basis
from .errors import KplumpError
from .kp import (PhaseVector, TauResult, frame_rows, real_tau, solve_phases,
                 sos_certify, tau_substitute, u_from_tau)
from .theta import (ThetaPolynomial, build_parametrization, check_degree_bound,
                    check_leading_term, eliminate)


def compute_theta(curve: CurveSpec, override=None, strategy: str = "sym",
                  budget_seconds: float = 300.0, budget_steps=None) -> ThetaPolynomial:
    """Differential basis, abelian integrals, elimination, structural checks."""
    basis = curve_differential_basis(curve, override=override)
    par = build_parametrization(curve, basis=basis)
    theta = eliminate(par, strategy, max_seconds=budget_seconds, max_steps=budget_steps)
    check_degree_bound(theta, curve)
    if all(isinstance(s, CuspSpec) for s in curve.singularities):
        check_leading_term(theta, curve)
    return theta


def compute_tau(curve: CurveSpec, theta: ThetaPolynomial, override=None,
                phases=None, want_certificate: bool = True) -> TauResult:
    """Frame rows, phase solving, reality, the solution u, and (when a
    template applies) the regularity certificate."""
    basis = curve_differential_basis(curve, override=override)
    rows = frame_rows(curve, basis, m=3)
    if phases is None:
        substituted = tau_substitute(theta, rows, PhaseVector.symbolic(theta.genus))
        solved, constraints = solve_phases(substituted)
    else:
        solved = PhaseVector.from_values(phases)
        constraints = []
    tau = real_tau(theta, rows, solved)
    u = u_from_tau(tau)
    certificate = None
    if want_certificate:
        try:
            certificate = sos_certify(tau, theta, rows, solved)
        except KplumpError:
            certificate = None
    return TauResult(tau=tau, phases=solved, constraints=constraints, u=u,
                     certificate=certificate, theta=theta)


def run_pipeline(curve: CurveSpec, override=None, strategy: str = "sym",
                 budget_seconds: float = 300.0, phases=None,
                 want_certificate: bool = True) -> TauResult:
    theta = compute_theta(curve, override=override, strategy=strategy,
                          budget_seconds=budget_seconds)
    return compute_tau(curve, theta, override=override, phases=phases,
                       want_certificate=want_certificate)
