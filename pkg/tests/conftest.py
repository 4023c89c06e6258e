import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kplump.curves import (ChartPoint, CurveSpec, CuspSpec, Differential,
                           SemigroupSpec, curve_differential_basis)
from kplump.kp import (PhaseVector, frame_rows, real_tau, solve_phases,
                       tau_substitute, u_from_tau)
from kplump.poly import SparsePoly
from kplump.ratfunc import RationalFunction
from kplump.theta import build_parametrization, eliminate

import paper_data


def _diff(num, den, chart="u"):
    return Differential(
        RationalFunction(SparsePoly.parse(num, vars=(chart,)),
                         SparsePoly.parse(den, vars=(chart,))),
        chart,
    )


@pytest.fixture(scope="session")
def bicuspidal_curve():
    return CurveSpec(
        (CuspSpec(ChartPoint("z", 1), SemigroupSpec([2, 5])),
         CuspSpec(ChartPoint("z", -1), SemigroupSpec([2, 5]))),
        basepoint=ChartPoint("z", 0),
        expansion_point=ChartPoint("u", 0),
    )


@pytest.fixture(scope="session")
def paper_basis():
    return [_diff(n, d) for n, d in paper_data.DUALIZING_DIFFS]


@pytest.fixture(scope="session")
def monomial_curve():
    return CurveSpec(
        (CuspSpec(ChartPoint.parse({"chart": "z", "at": "inf"}),
                  SemigroupSpec([4, 5, 6])),),
        basepoint=ChartPoint("z", 0),
        expansion_point=ChartPoint("z", 0),
    )


@pytest.fixture(scope="session")
def bicuspidal_parametrization(bicuspidal_curve, paper_basis):
    return build_parametrization(bicuspidal_curve, basis=paper_basis)


@pytest.fixture(scope="session")
def bicuspidal_theta(bicuspidal_parametrization):
    return eliminate(bicuspidal_parametrization, "sym", max_seconds=240)


@pytest.fixture(scope="session")
def bicuspidal_rows(bicuspidal_curve, paper_basis):
    return frame_rows(bicuspidal_curve, paper_basis, m=3)


@pytest.fixture(scope="session")
def bicuspidal_solved(bicuspidal_theta, bicuspidal_rows):
    substituted = tau_substitute(bicuspidal_theta, bicuspidal_rows,
                                 PhaseVector.symbolic(4))
    phases, constraints = solve_phases(substituted)
    return phases, constraints


@pytest.fixture(scope="session")
def bicuspidal_tau(bicuspidal_theta, bicuspidal_rows, bicuspidal_solved):
    phases, _ = bicuspidal_solved
    return real_tau(bicuspidal_theta, bicuspidal_rows, phases)


@pytest.fixture(scope="session")
def bicuspidal_u(bicuspidal_tau):
    return u_from_tau(bicuspidal_tau)


# -- acceptance reporting -----------------------------------------------------

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def acceptance_record():
    def record(criterion, status, note=""):
        ACCEPTANCE_RESULTS[criterion] = (status, note)
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE_RESULTS):
        status, note = ACCEPTANCE_RESULTS[crit]
        line = f"criterion {crit:>4}: {status}"
        if note:
            line += f"  ({note})"
        terminalreporter.write_line(line)
