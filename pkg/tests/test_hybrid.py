import numpy as np
import pytest

from ampboost.engine import grover_iterations
from ampboost.errors import BudgetError, OutOfReachError
from ampboost.hybrid import (
    BUDGET_EXHAUSTED,
    CONFIRMED_MIN,
    Consistent,
    Exists,
    Improved,
    NotFoundEvidence,
    greedy_descent,
    hybrid_solve,
    simulated_experiment,
    subset_sum_query,
    verify_minimum,
)
from ampboost.problems import (
    digits_of,
    evaluate_cost,
    generate_linear_qubo,
    linear_qubo,
    subset_sum,
)
from ampboost.spectrum import enumerate_space, exact_ps, stats
from ampboost.sweep import correlation_points, fit_correlation

from conftest import indicator_space


def boostable_min_instance(n, start_seed=0):
    """First chain instance at or after start_seed with positive skew."""
    seed = start_seed
    while True:
        p = generate_linear_qubo(n, seed=seed)
        space = enumerate_space(p)
        if stats(space, exact_ps(space)).x_delta > 0:
            return p, space, seed
        seed += 1


def min_fit(space, r=10):
    pts = correlation_points(space, r, direction="min")
    return fit_correlation([(p.ps_star, p.cost_value) for p in pts])


class TestSimulatedExperiment:
    def test_marked_state_dominates_shots(self):
        d = 1024
        space = indicator_space(d, [5])
        k = grover_iterations(d, 1)
        record = simulated_experiment(space, [np.pi], k, budget_per_point=200 * k,
                                      threshold=0.5, seed=0)
        outcomes = record.entries[0].outcomes
        hits = sum(1 for i, _ in outcomes if i == 5)
        assert hits >= 0.99 * len(outcomes)

    def test_budget_below_one_run_rejected(self):
        space = indicator_space(16, [0])
        with pytest.raises(BudgetError):
            simulated_experiment(space, [np.pi], 10, budget_per_point=5,
                                 threshold=0.5)

    def test_shots_follow_budget_policy(self):
        space = indicator_space(64, [0])
        record = simulated_experiment(space, [1.0, 2.0], 7, budget_per_point=100,
                                      threshold=0.5, seed=1)
        for entry in record.entries:
            assert entry.shots_t == 100 // 7

    def test_reproducible_under_seed(self):
        space = enumerate_space(generate_linear_qubo(10, seed=0))
        grid = np.linspace(0.5, 1.5, 5) * exact_ps(space)
        a = simulated_experiment(space, grid, 20, 400, threshold=0.0, seed=5)
        b = simulated_experiment(space, grid, 20, 400, threshold=0.0, seed=5)
        assert a == b

    def test_equal_budget_bands_agree_across_k(self):
        p, space, _ = boostable_min_instance(14)
        ps = exact_ps(space)
        kg = grover_iterations(space.d, 1)
        grid = np.linspace(0.9, 1.2, 12) * ps
        threshold = np.percentile(space.costs, 1.0)
        budget = 12 * kg
        mins = []
        for k in (kg // 4, kg // 2, 3 * kg // 4):
            rec = simulated_experiment(space, grid, k, budget, threshold, seed=3)
            below = rec.below_threshold()
            assert below, f"no tail outcomes at k={k}"
            mins.append(min(c for _, _, c in below))
        # all three budgets surface the same deep-tail band
        assert max(mins) - min(mins) < 4 * abs(np.percentile(space.costs, 1.0)
                                               - space.c_min)


class TestGreedyDescent:
    def test_start_at_minimum_is_fixed_point(self):
        p = generate_linear_qubo(10, seed=3)
        space = enumerate_space(p)
        start = digits_of(p, int(space.argmin_set[0]))
        digits, cost, flips = greedy_descent(p, start)
        assert digits == start and cost == space.c_min and flips == 0

    def test_single_negative_weight_flips_once(self):
        p = linear_qubo([-5, 0], [0])
        digits, cost, flips = greedy_descent(p, (0, 0))
        assert digits[0] == 1 and cost == -5 and flips == 1

    def test_outputs_are_local_optima(self):
        rng = np.random.default_rng(0)
        p = generate_linear_qubo(12, seed=9)
        for _ in range(25):
            start = tuple(rng.integers(0, 2, size=12))
            digits, cost, _ = greedy_descent(p, start)
            assert cost <= evaluate_cost(p, start)
            for i in range(12):
                flipped = list(digits)
                flipped[i] = 1 - flipped[i]
                assert evaluate_cost(p, flipped) >= cost

    def test_max_direction(self):
        p = linear_qubo([5, 3], [0])
        digits, cost, _ = greedy_descent(p, (0, 0), direction="max")
        assert cost == 8


class TestVerifyMinimum:
    def test_true_minimum_is_consistent(self):
        p, space, seed = boostable_min_instance(14)
        result = verify_minimum(space, space.c_min, min_fit(space), probes=10,
                                seed=seed)
        assert isinstance(result, Consistent)
        assert result.probes == 10

    def test_second_best_is_improved(self):
        hits = 0
        p, space, _ = boostable_min_instance(14)
        second = np.unique(space.costs)[1]
        for s in range(10):
            result = verify_minimum(space, second, min_fit(space), probes=6,
                                    shots=8, seed=s)
            if isinstance(result, Improved):
                assert result.cost < second
                hits += 1
        assert hits >= 9

    def test_zero_probes_rejected(self):
        space = enumerate_space(generate_linear_qubo(8, seed=0))
        with pytest.raises(BudgetError):
            verify_minimum(space, space.c_min, min_fit(space, 5), probes=0)


class TestHybridSolve:
    def test_finds_minimum_on_favorable_instances(self):
        found = 0
        seed = 0
        for _ in range(5):
            p, space, seed = boostable_min_instance(14, seed)
            _, cost, trace = hybrid_solve(p, budget=150_000, seed=seed + 100)
            if cost == space.c_min:
                found += 1
            assert trace.iterations_spent <= 150_000
            seed += 1
        assert found >= 4

    def test_trace_best_cost_monotone(self):
        p, space, seed = boostable_min_instance(14)
        _, _, trace = hybrid_solve(p, budget=100_000, seed=1)
        assert all(b <= a for a, b in zip(trace.best_costs, trace.best_costs[1:]))

    def test_zero_budget_baseline(self):
        p = generate_linear_qubo(12, seed=4)
        digits, cost, trace = hybrid_solve(p, budget=0, seed=2)
        assert trace.verdict == BUDGET_EXHAUSTED
        assert evaluate_cost(p, digits) == cost
        assert trace.events[0]["phase"] == "baseline"

    def test_skewed_instance_reports_asymmetry_diagnostic(self):
        # instance whose deep-tail lies on the max side: min-direction
        # campaigns yield nothing beyond classical sampling
        p = generate_linear_qubo(14, seed=52)
        space = enumerate_space(p)
        assert stats(space, exact_ps(space)).x_delta < 0
        _, _, trace = hybrid_solve(p, budget=120_000, seed=11)
        diags = [e for e in trace.events if e["phase"] == "diagnostic"]
        assert diags and diags[0]["opposite_side_boostable"]

    def test_reproducible(self):
        p = generate_linear_qubo(12, seed=6)
        a = hybrid_solve(p, budget=50_000, seed=9)
        b = hybrid_solve(p, budget=50_000, seed=9)
        assert a[0] == b[0] and a[1] == b[1]
        assert a[2].events == b[2].events


class TestSubsetSumQuery:
    def test_power_of_two_weights_target_found(self):
        result = subset_sum_query(subset_sum((1, 2, 4, 8)), 13, seed=0)
        assert isinstance(result, Exists)
        assert evaluate_cost(subset_sum((1, 2, 4, 8)), result.assignment) == 13

    def test_parity_blocked_target_not_found(self):
        result = subset_sum_query(subset_sum((2, 4, 6)), 5, seed=0)
        assert isinstance(result, NotFoundEvidence)
        assert result.trials > 0

    def test_mid_band_target_out_of_reach(self):
        p = subset_sum(tuple(range(1, 13)))
        with pytest.raises(OutOfReachError):
            subset_sum_query(p, 39, seed=0)

    def test_extremum_target_handled(self):
        p = subset_sum(tuple(range(1, 13)))
        result = subset_sum_query(p, 78, seed=0)
        assert isinstance(result, Exists)
        assert result.assignment == (1,) * 12
