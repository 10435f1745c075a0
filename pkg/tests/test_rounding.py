import random
from fractions import Fraction

import pytest

from priocover import (
    AssumptionViolated,
    ColumnRestrictedCIP,
    FracSolution,
    LpOptimal,
    PrimalDualPcipOracle,
    TuLineOracle,
    ZeroOneCIP,
    brute_force_opt,
    canonical_relaxation,
    check_cover,
    round_ccip,
    round_no_kc,
    simplex_solve,
    solution_cost,
)
from priocover.lp import alpha_relaxed, kc_residual
from priocover.rounding import partition_rows, power2_normalize

from conftest import rand_interval_ccip


def knapsack_ccip():
    base = ZeroOneCIP(
        matrix=((1, 1, 1),), demands=(5,), costs=(1, 1, 1), upper_bounds=(1, 1, 1)
    )
    return ColumnRestrictedCIP(base=base, supplies=(4, 3, 2))


def oracles():
    return TuLineOracle(), PrimalDualPcipOracle()


def test_power2_normalize_rounds_and_scales():
    ccip = knapsack_ccip()
    relaxed = alpha_relaxed(ccip, Fraction(1, 3))
    residual = kc_residual(ccip, relaxed.generating_set)
    normalized = power2_normalize(residual, relaxed.x_star)
    # b^F = 5 - 4 - 3 = 0: the only row evaporates
    assert normalized.row_ids == ()
    assert tuple(normalized.scaled_solution) == (4, Fraction(4, 3), 0)

    # fresh residual with F empty keeps the row and rounds up/down
    residual = kc_residual(ccip, frozenset())
    normalized = power2_normalize(residual, FracSolution((1, 1, 1)))
    assert normalized.row_ids == (0,)
    assert normalized.rounded_demands == (8,)
    assert normalized.rounded_supplies == (4, 2, 2)


def test_partition_tie_goes_large():
    base = ZeroOneCIP(
        matrix=((1, 1),), demands=(2,), costs=(1, 1), upper_bounds=(2, 2)
    )
    ccip = ColumnRestrictedCIP(base=base, supplies=(2, 1))
    residual = kc_residual(ccip, frozenset())
    # both sides weigh 2*y: tie must land in large_rows
    normalized = power2_normalize(residual, FracSolution((Fraction(1, 2), 1)))
    part = partition_rows(normalized, residual)
    assert part.large_rows == (0,)
    assert part.small_rows == ()
    assert part.large_columns[0] == (0,)
    assert part.small_columns[0] == (1,)


def test_round_ccip_knapsack_golden():
    sol, audit = round_ccip(knapsack_ccip(), *oracles())
    assert tuple(sol) == (1, 1, 0)
    assert audit.cost == 2
    assert audit.lower_bound == Fraction(4, 3)
    assert audit.generating_set == frozenset({0, 1})
    assert audit.bound_factor == 40
    assert audit.cost_bound == Fraction(160, 3)
    assert check_cover(knapsack_ccip(), sol).feasible


def test_round_ccip_zero_demand_row():
    base = ZeroOneCIP(
        matrix=((1,), (1,)), demands=(0, 2), costs=(1,), upper_bounds=(1,)
    )
    ccip = ColumnRestrictedCIP(base=base, supplies=(2,))
    sol, audit = round_ccip(ccip, *oracles())
    assert tuple(sol) == (1,)
    assert audit.cost == 1


def test_round_ccip_seeded_suite():
    rng = random.Random(314)
    worst = Fraction(0)
    for _ in range(30):
        ccip = rand_interval_ccip(rng, max_edges=5, max_cols=6)
        sol, audit = round_ccip(ccip, *oracles())
        report = check_cover(ccip, sol)
        assert report.feasible
        bounds = ccip.base.upper_bounds
        assert all(v <= b for v, b in zip(sol, bounds))
        assert audit.cost <= 40 * audit.lower_bound
        opt, _ = brute_force_opt(ccip)
        assert opt >= audit.lower_bound
        worst = max(worst, Fraction(audit.cost, opt))
    # far from the worst-case factor in practice
    assert worst < 10


def test_round_no_kc_golden():
    base = ZeroOneCIP(matrix=((1,),), demands=(3,), costs=(1,), upper_bounds=(1,))
    ccip = ColumnRestrictedCIP(base=base, supplies=(3,))
    sol = round_no_kc(ccip, FracSolution((1,)), TuLineOracle())
    assert tuple(sol) == (5,)


def test_round_no_kc_flags_oversized_entries():
    base = ZeroOneCIP(matrix=((1,),), demands=(2,), costs=(1,), upper_bounds=(1,))
    ccip = ColumnRestrictedCIP(base=base, supplies=(3,))
    with pytest.raises(AssumptionViolated) as err:
        round_no_kc(ccip, FracSolution((1,)), TuLineOracle())
    assert err.value.offending == ((0, 0),)


def test_round_no_kc_seeded_suite():
    rng = random.Random(2718)
    for _ in range(30):
        ccip = rand_interval_ccip(rng, no_bottleneck=True)
        lp = simplex_solve(canonical_relaxation(ccip))
        assert isinstance(lp, LpOptimal)
        x = FracSolution(lp.solution)
        sol = round_no_kc(ccip, x, TuLineOracle())
        assert check_cover(ccip, sol).feasible
        bounds = ccip.base.upper_bounds
        assert all(v <= 10 * b for v, b in zip(sol, bounds))
        cost = solution_cost(ccip.base.costs, sol)
        assert cost <= 10 * lp.value


def test_round_no_kc_rejects_infeasible_point():
    base = ZeroOneCIP(
        matrix=((1, 1),), demands=(4,), costs=(1, 1), upper_bounds=(2, 2)
    )
    ccip = ColumnRestrictedCIP(base=base, supplies=(2, 2))
    with pytest.raises(Exception):
        round_no_kc(ccip, FracSolution((Fraction(1, 2), 0)), TuLineOracle())
