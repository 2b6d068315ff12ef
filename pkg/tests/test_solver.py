import numpy as np
import pytest

from riswipt.solver import (Bound, ConicProblem, ConvexQuadratic, Hyperbolic,
                            Infeasible, Linear, phase_one, solve)
from solver_cases import analytic_cases


@pytest.mark.parametrize("case", analytic_cases(), ids=lambda c: c[0])
def test_analytic_optimum(case):
    name, prob, start, opt = case
    res = solve(prob, start=start)
    assert res.status == "Optimal"
    assert res.objective_value == pytest.approx(opt, abs=1e-6)
    assert prob.max_violation(res.z_opt) <= 1e-9


@pytest.mark.parametrize("case", analytic_cases()[:8], ids=lambda c: c[0])
def test_cold_start_via_phase_one(case):
    name, prob, _, opt = case
    res = solve(prob)  # no start: phase-I must find the interior
    assert res.objective_value == pytest.approx(opt, abs=1e-6)


def test_phase_one_from_violating_start():
    prob = ConicProblem(num_vars=2, objective=np.array([1.0, 1.0]),
                        constraints=[Linear(a=np.array([1.0, 1.0]), b=1.0),
                                     Bound(i=0, lo=0.0), Bound(i=1, lo=0.0)])
    z = phase_one(prob, start=np.array([5.0, 5.0]))
    assert prob.max_violation(z) < 0.0


def test_infeasible_detected():
    prob = ConicProblem(num_vars=1, objective=np.array([1.0]),
                        constraints=[Linear(a=np.array([1.0]), b=0.0),
                                     Linear(a=np.array([-1.0]), b=-1.0)])
    with pytest.raises(Infeasible):
        phase_one(prob)


def test_psd_validation():
    with pytest.raises(ValueError):
        ConvexQuadratic(Q=np.array([[-1.0]]), q=np.zeros(1), b=1.0)
    with pytest.raises(ValueError):
        Hyperbolic(Q=np.array([[0.0, 2.0], [2.0, 0.0]]), q=np.zeros(2),
                   c=0.0, i=0, j=1)


def test_hyperbolic_cone_positivity():
    # optimum pinned on the cone with both cone variables strictly positive
    prob = ConicProblem(
        num_vars=3, objective=np.array([0.0, 0.0, 1.0]),
        constraints=[Hyperbolic(Q=np.diag([0.0, 0.0, 1.0]), q=np.zeros(3),
                                c=0.0, i=0, j=1),
                     Linear(a=np.array([2.0, 1.0, 0.0]), b=3.0),
                     Bound(i=0, lo=0.0), Bound(i=1, lo=0.0)])
    res = solve(prob, start=np.array([0.5, 0.5, 0.1]))
    # max z with z^2 <= x*y, 2x + y <= 3 -> x = 0.75, y = 1.5
    assert res.objective_value == pytest.approx(np.sqrt(0.75 * 1.5), abs=1e-6)
    assert res.z_opt[0] > 0.0 and res.z_opt[1] > 0.0


def test_kkt_residual_small_at_optimum():
    name, prob, start, opt = analytic_cases()[3]
    res = solve(prob, start=start)
    assert res.kkt_residual <= 1e-4
