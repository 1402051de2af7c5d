"""The l1 solver, least squares, uniqueness predicate, and concentration."""

import numpy as np
import pytest

from zncert.lattice import GroupParams, SupportSet
from zncert.spectral import ANALYST_PLUS, Signal, dft, idft
from zncert.recovery import (
    RecoveryProblem,
    SolverConfig,
    concentration_check,
    l1_objective_profile,
    l1_recover,
    least_squares_recover,
    load_problem,
    problem_from_json_dict,
    problem_to_json_dict,
    save_problem,
    uniqueness_check,
)

P4 = GroupParams(4, 1)


def four_point_problem() -> tuple[Signal, RecoveryProblem]:
    f = Signal(P4, np.array([1, 0, 0, 2], dtype=complex), ANALYST_PLUS)
    missing = SupportSet.from_coords(P4, [(1,), (2,)])
    return f, RecoveryProblem.from_signal(f, missing)


def random_problem(rng, n, d, e_size, s_size):
    p = GroupParams(n, d)
    idx = rng.choice(p.size, size=e_size, replace=False)
    values = np.zeros(p.size, dtype=np.complex128)
    values[idx] = rng.normal(size=e_size) + 1j * rng.normal(size=e_size)
    f = Signal(p, values)
    sidx = rng.choice(p.size, size=s_size, replace=False) if s_size else []
    missing = SupportSet(p, tuple(p.from_flat(int(i)) for i in sidx))
    return f, RecoveryProblem.from_signal(f, missing)


def test_problem_coverage_invariant():
    f, problem = four_point_problem()
    assert len(problem.observed) == 2
    spectrum = dft(f)
    # observed entry at a missing frequency must be rejected
    observed = {m: spectrum.value_at(m) for m in P4.points()}
    with pytest.raises(ValueError):
        RecoveryProblem(P4, observed, problem.missing, ANALYST_PLUS)
    # short observation map rejected too
    with pytest.raises(ValueError):
        RecoveryProblem(P4, {}, problem.missing, ANALYST_PLUS)


def test_l1_recovers_four_point_signal():
    f, problem = four_point_problem()
    solution = l1_recover(problem)
    assert solution.status == "converged"
    assert np.max(np.abs(solution.signal.values - f.values)) <= 1e-6
    assert solution.objective == pytest.approx(3.0, abs=1e-6)
    assert solution.feasibility_residual <= 1e-8
    assert solution.signal.convention == ANALYST_PLUS


def test_l1_solver_determinism():
    _, problem = four_point_problem()
    first = l1_recover(problem)
    second = l1_recover(problem)
    assert first.iterations == second.iterations
    assert np.array_equal(first.signal.values, second.signal.values)
    assert first.objective == second.objective


def test_l1_no_missing_frequencies_is_one_projection():
    rng = np.random.default_rng(2)
    p = GroupParams(6, 1)
    f = Signal(p, rng.normal(size=6) + 1j * rng.normal(size=6))
    problem = RecoveryProblem.from_signal(f, SupportSet(p, ()))
    solution = l1_recover(problem)
    assert solution.iterations == 1
    assert solution.status == "converged"
    assert np.max(np.abs(solution.signal.values - f.values)) <= 1e-12


def test_l1_iteration_budget_reports_max_iter():
    _, problem = four_point_problem()
    solution = l1_recover(problem, SolverConfig(max_iter=3))
    assert solution.status == "max-iter"
    assert solution.iterations == 3
    # the projected iterate is feasible even when the budget runs out
    assert solution.feasibility_residual <= 1e-10
    assert "near_degenerate" in solution.diagnostics


def test_l1_all_zero_observations():
    p = GroupParams(8, 1)
    f = Signal(p, np.zeros(8, dtype=complex))
    problem = RecoveryProblem.from_signal(f, SupportSet.from_coords(p, [(1,), (5,)]))
    solution = l1_recover(problem)
    assert solution.status == "converged"
    assert solution.objective == 0.0
    assert np.all(solution.signal.values == 0)


def test_l1_exact_recovery_random_trials():
    rng = np.random.default_rng(7)
    for trial in range(30):
        n = int(rng.integers(6, 17))
        while True:
            e_size = int(rng.integers(1, 4))
            s_size = int(rng.integers(0, 4))
            if 2 * e_size * s_size < n:
                break
        f, problem = random_problem(rng, n, 1, e_size, s_size)
        solution = l1_recover(problem)
        scale = max(1.0, float(np.max(np.abs(f.values))))
        assert solution.status == "converged"
        assert np.max(np.abs(solution.signal.values - f.values)) <= 1e-6 * scale
        assert solution.feasibility_residual <= 1e-8 * scale


def test_objective_profile_four_point_walkthrough():
    f, problem = four_point_problem()
    direction = Signal(P4, np.array([-1, 1, -1, 1], dtype=complex), ANALYST_PLUS)
    profile = l1_objective_profile(problem, direction, [0.0, 1.0, -0.5j], base=f)
    assert profile[0] == pytest.approx(3.0, abs=1e-12)
    assert profile[1] == pytest.approx(5.0, abs=1e-12)  # |0| + 2 + |3|
    for value, step in zip(profile, [0.0, 1.0, -0.5j]):
        assert value >= 3.0 + 2.0 * abs(step) - 1e-12


def test_objective_profile_defaults_to_l1_solution():
    _, problem = four_point_problem()
    direction = Signal(P4, np.array([-1, 1, -1, 1], dtype=complex), ANALYST_PLUS)
    profile = l1_objective_profile(problem, direction, [0.0, 0.5])
    assert profile[0] == pytest.approx(3.0, abs=1e-5)
    assert profile[1] > profile[0]


def test_objective_profile_rejects_infeasible_direction():
    _, problem = four_point_problem()
    bad = Signal(P4, np.array([1, 0, 0, 0], dtype=complex), ANALYST_PLUS)
    with pytest.raises(ValueError):
        l1_objective_profile(problem, bad, [0.0])


def test_least_squares_with_true_support():
    f, problem = four_point_problem()
    support = SupportSet.from_coords(P4, [(0,), (3,)])
    solution = least_squares_recover(problem, support)
    assert solution.status == "converged"
    assert solution.feasibility_residual <= 1e-10
    assert np.max(np.abs(solution.signal.values - f.values)) <= 1e-10
    assert solution.diagnostics["rank"] == 2


def test_least_squares_full_support_no_missing_is_inverse_transform():
    rng = np.random.default_rng(13)
    p = GroupParams(5, 1)
    f = Signal(p, rng.normal(size=5) + 1j * rng.normal(size=5))
    problem = RecoveryProblem.from_signal(f, SupportSet(p, ()))
    full = SupportSet.from_coords(p, [(i,) for i in range(5)])
    solution = least_squares_recover(problem, full)
    assert solution.status == "converged"
    target, _ = problem.target_arrays()
    inverse = idft(Signal(p, target, problem.convention, side="frequency"))
    assert np.max(np.abs(solution.signal.values - inverse.values)) <= 1e-10


def test_least_squares_underdetermined_is_infeasible():
    _, problem = four_point_problem()
    too_big = SupportSet.from_coords(P4, [(0,), (1,), (3,)])
    solution = least_squares_recover(problem, too_big)
    assert solution.status == "infeasible"
    assert solution.diagnostics["reason"] == "non-unique"
    assert solution.diagnostics["rank"] < len(too_big)


def test_least_squares_wrong_support_is_inconsistent():
    # overdetermined with a wrong support: full rank but a large residual,
    # reported as infeasible so converged always means feasible
    p = GroupParams(8, 1)
    values = np.zeros(8, dtype=complex)
    values[[0, 3]] = [1.0, 2.0]
    f = Signal(p, values)
    problem = RecoveryProblem.from_signal(f, SupportSet.from_coords(p, [(1,)]))
    wrong = SupportSet.from_coords(p, [(5,)])
    solution = least_squares_recover(problem, wrong)
    assert solution.status == "infeasible"
    assert solution.diagnostics["reason"] == "inconsistent"
    assert solution.feasibility_residual > 0.1


def test_uniqueness_check_examples():
    assert not uniqueness_check(2, SupportSet.from_coords(P4, [(1,), (2,)]), P4)
    assert uniqueness_check(2, SupportSet(P4, ()), P4)
    p16 = GroupParams(16, 1)
    s3 = SupportSet.from_coords(p16, [(1,), (2,), (3,)])
    assert uniqueness_check(2, s3, p16)


def test_concentration_equality_case():
    # spectrum = delta at 0 makes h constant; the bound is met with equality
    p = GroupParams(8, 1)
    spec = np.zeros(8, dtype=complex)
    spec[0] = 1.0
    h = idft(Signal(p, spec, side="frequency"))
    e = SupportSet.from_coords(p, [(0,), (3,), (5,)])
    s = SupportSet.from_coords(p, [(0,)])
    result = concentration_check(h, e, s)
    assert result.holds
    assert result.lhs == pytest.approx(result.rhs, rel=1e-12)


def test_concentration_four_point_difference():
    h = Signal(P4, np.array([-1, 1, -1, 1], dtype=complex), ANALYST_PLUS)
    e = SupportSet.from_coords(P4, [(0,), (3,)])
    s = SupportSet.from_coords(P4, [(1,), (2,)])
    result = concentration_check(h, e, s)
    assert result == (2.0, 4.0, True)


def test_concentration_random_sweep():
    rng = np.random.default_rng(19)
    for trial in range(40):
        n = int(rng.integers(3, 13))
        p = GroupParams(n, 1)
        s_size = int(rng.integers(1, n + 1))
        sidx = rng.choice(n, size=s_size, replace=False)
        spec = np.zeros(n, dtype=complex)
        spec[sidx] = rng.normal(size=s_size) + 1j * rng.normal(size=s_size)
        h = idft(Signal(p, spec, side="frequency"))
        s = SupportSet(p, tuple(p.from_flat(int(i)) for i in sidx))
        e_size = int(rng.integers(1, n + 1))
        eidx = rng.choice(n, size=e_size, replace=False)
        e = SupportSet(p, tuple(p.from_flat(int(i)) for i in eidx))
        assert concentration_check(h, e, s).holds


def test_concentration_rejects_leaky_spectrum():
    p = GroupParams(4, 1)
    h = Signal(p, np.array([1, 1, 0, 0], dtype=complex))
    e = SupportSet.from_coords(p, [(0,)])
    s = SupportSet.from_coords(p, [(0,)])  # spectrum actually leaks beyond {0}
    with pytest.raises(ValueError):
        concentration_check(h, e, s)


def test_problem_json_round_trip(tmp_path):
    _, problem = four_point_problem()
    data = problem_to_json_dict(problem)
    assert data["missing"] == [[1], [2]]
    restored = problem_from_json_dict(data)
    assert restored.convention == problem.convention
    assert restored.observed == problem.observed

    path = tmp_path / "problem.json"
    save_problem(problem, path)
    loaded = load_problem(path)
    assert loaded.observed == problem.observed
    solution = l1_recover(loaded)
    assert np.max(np.abs(solution.signal.values - [1, 0, 0, 2])) <= 1e-6


def test_solution_json_shape():
    _, problem = four_point_problem()
    solution = l1_recover(problem, SolverConfig(max_iter=200))
    data = solution.to_json_dict()
    assert set(data) == {
        "status",
        "objective",
        "feasibility_residual",
        "iterations",
        "diagnostics",
        "signal",
    }
