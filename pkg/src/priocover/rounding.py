"""Rounding pipelines for column-restricted covering programs.

`round_ccip` runs the knapsack-cover route: compute a 1/24-relaxed
point, zero out the heavy columns, normalize demands and supplies to
powers of two, split rows by where their fractional coverage comes
from, and hand small rows to a 0,1 oracle per supply class and large
rows to a priority oracle. The result, lifted by buying the heavy
columns outright, is feasible at cost within (24*gamma + 8*omega) of
the fractional lower bound.

`round_no_kc` is the bound-violating alternative: no strengthening,
one 0,1 oracle call per geometric supply class, output within 10*gamma
of the input cost but with multiplicities up to 10d.

Every intermediate object is exposed and every proof-step inequality
is asserted at runtime rather than trusted.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import FractionalInfeasible, AssumptionViolated, ValidationError
from .lp import alpha_relaxed, kc_residual
from .model import (
    FracSolution,
    IntSolution,
    PriorityCIP,
    ZeroOneCIP,
    UNBOUNDED,
    apply_supplies,
    build_priority_matrix,
    check_cover,
    is_unbounded,
    solution_cost,
)


def _pow2_ceil(v):
    p = 1
    while p < v:
        p *= 2
    return p


def _pow2_floor(v):
    p = 1
    while p * 2 <= v:
        p *= 2
    return p


def _floor(fr):
    fr = Fraction(fr)
    return fr.numerator // fr.denominator


@dataclass(frozen=True)
class Power2Normalized:
    """Demands rounded up and supplies rounded down to powers of two.

    Rows whose residual demand hit zero are dropped; row_ids maps the
    surviving positions back to the residual's row indices. The scaled
    point y = 4*xbar covers the normalized system, which is asserted at
    construction time.
    """

    row_ids: tuple
    rounded_demands: tuple
    rounded_supplies: tuple
    scaled_solution: FracSolution

    def pattern(self, residual):
        """0,1 incidence of the surviving rows (true where the residual
        matrix is positive)."""
        return tuple(
            tuple(1 if v > 0 else 0 for v in residual.residual_matrix[i])
            for i in self.row_ids
        )

    def normalized_entry(self, pattern_row, j, demand):
        return min(self.rounded_supplies[j], demand) if pattern_row[j] else 0


def power2_normalize(residual, xbar):
    xs = tuple(xbar)
    y = FracSolution(tuple(4 * Fraction(v) for v in xs))
    row_ids = tuple(
        i for i, bf in enumerate(residual.residual_demands) if bf > 0
    )
    demands = tuple(
        _pow2_ceil(residual.residual_demands[i]) for i in row_ids
    )
    F = residual.generating_set
    supplies = tuple(
        _pow2_floor(s) if s > 0 and j not in F else 0
        for j, s in enumerate(residual.supplies)
    )
    normalized = Power2Normalized(
        row_ids=row_ids,
        rounded_demands=demands,
        rounded_supplies=supplies,
        scaled_solution=y,
    )
    pattern = normalized.pattern(residual)
    for pos, bbar in enumerate(demands):
        covered = sum(
            min(supplies[j], bbar) * y[j]
            for j in range(len(supplies))
            if pattern[pos][j]
        )
        assert covered >= bbar, (
            "4*xbar misses normalized row %d" % row_ids[pos]
        )
    return normalized


@dataclass(frozen=True)
class RowPartition:
    """Surviving rows split by where their scaled coverage comes from.

    large_columns[i] holds the incident columns whose rounded supply
    reaches the row's rounded demand, small_columns[i] the rest; the
    row goes to large_rows when the large side carries at least half
    the coverage (ties included).
    """

    large_rows: tuple
    small_rows: tuple
    large_columns: dict
    small_columns: dict


def partition_rows(normalized, residual):
    pattern = normalized.pattern(residual)
    y = normalized.scaled_solution
    large_rows = []
    small_rows = []
    large_cols = {}
    small_cols = {}
    for pos, bbar in enumerate(normalized.rounded_demands):
        L = []
        S = []
        for j, bit in enumerate(pattern[pos]):
            if not bit:
                continue
            (L if normalized.rounded_supplies[j] >= bbar else S).append(j)
        weight_l = sum(
            (min(normalized.rounded_supplies[j], bbar) * y[j] for j in L),
            Fraction(0),
        )
        weight_s = sum(
            (min(normalized.rounded_supplies[j], bbar) * y[j] for j in S),
            Fraction(0),
        )
        large_cols[pos] = tuple(L)
        small_cols[pos] = tuple(S)
        if weight_s <= weight_l:
            large_rows.append(pos)
            assert 2 * weight_l >= bbar, "large row below half coverage"
        else:
            small_rows.append(pos)
            assert 2 * weight_s >= bbar, "small row below half coverage"
    return RowPartition(
        large_rows=tuple(large_rows),
        small_rows=tuple(small_rows),
        large_columns=large_cols,
        small_columns=small_cols,
    )


@dataclass(frozen=True)
class SupplyClasses:
    """Geometric supply classes over the columns outside F.

    class_supplies[t] is s_max/2^t (rounded supplies, powers of two),
    class_columns[t] the columns at exactly that supply. thresholds maps
    each small row to the first class it counts as small for it, and
    contributions[(t, row)] is twice the scaled coverage the class gives
    that row (zero below the threshold). Columns with zero supply cover
    nothing and belong to no class.
    """

    class_supplies: tuple
    class_columns: tuple
    thresholds: dict
    contributions: dict
    small_rows: tuple
    scaled_solution: FracSolution


def supply_classes(normalized, partition, residual):
    supplies = normalized.rounded_supplies
    positive = [s for s in supplies if s > 0]
    if not positive:
        assert not partition.small_rows, "small rows without positive supply"
        return SupplyClasses(
            class_supplies=(),
            class_columns=(),
            thresholds={},
            contributions={},
            small_rows=(),
            scaled_solution=normalized.scaled_solution,
        )
    s_max = max(positive)
    s_min = min(positive)
    num_classes = s_max.bit_length() - s_min.bit_length() + 1
    class_supplies = tuple(s_max >> t for t in range(num_classes))
    class_columns = tuple(
        tuple(j for j, s in enumerate(supplies) if s == cs)
        for cs in class_supplies
    )
    y = normalized.scaled_solution
    pattern = normalized.pattern(residual)
    thresholds = {}
    contributions = {}
    for pos in partition.small_rows:
        bbar = normalized.rounded_demands[pos]
        # first class whose supply is at most half the demand
        t_i = max(0, s_max.bit_length() - bbar.bit_length() + 1)
        thresholds[pos] = t_i
        total = Fraction(0)
        for t in range(num_classes):
            if t < t_i:
                contributions[(t, pos)] = Fraction(0)
                continue
            mass = sum(
                (
                    min(supplies[j], bbar) * y[j]
                    for j in class_columns[t]
                    if pattern[pos][j]
                ),
                Fraction(0),
            )
            contributions[(t, pos)] = 2 * mass
            total += 2 * mass
        assert total >= bbar, "small-row class contributions fall short"
    return SupplyClasses(
        class_supplies=class_supplies,
        class_columns=class_columns,
        thresholds=thresholds,
        contributions=contributions,
        small_rows=tuple(partition.small_rows),
        scaled_solution=y,
    )


def round_small_rows(classes, residual, oracle):
    """One scaled 0,1 cover per supply class, concatenated.

    Class t gets demand floor(3 * contribution / class supply) on each
    small row and the witness 6y restricted to its columns; outputs are
    disjoint across classes so concatenation is well defined. The
    result's coverage of every small row at the original residual
    coefficients is asserted.
    """
    n = len(residual.supplies)
    out = [0] * n
    if not classes.small_rows:
        return IntSolution(tuple(out))
    y = classes.scaled_solution
    row_of = _surviving_rows(residual)
    gamma = getattr(oracle, "gamma", None)
    for t, cols in enumerate(classes.class_columns):
        if not cols:
            continue
        s_t = classes.class_supplies[t]
        demands = tuple(
            _floor(3 * classes.contributions[(t, pos)] / s_t)
            for pos in classes.small_rows
        )
        if not any(demands):
            continue
        matrix = []
        for pos in classes.small_rows:
            # incidence straight off the residual (positive entry = hit)
            row = residual.residual_matrix[row_of[pos]]
            matrix.append(tuple(1 if row[j] > 0 else 0 for j in cols))
        costs = tuple(residual.costs[j] for j in cols)
        bounds = tuple(residual.upper_bounds[j] for j in cols)
        sub = ZeroOneCIP(
            matrix=tuple(matrix),
            demands=demands,
            costs=costs,
            upper_bounds=bounds,
        )
        witness = []
        for j in cols:
            w = 6 * y[j]
            dj = residual.upper_bounds[j]
            assert is_unbounded(dj) or w <= dj, "witness exceeds bound"
            witness.append(w)
        z = oracle(sub, FracSolution(tuple(witness)))
        for k, j in enumerate(cols):
            dj = residual.upper_bounds[j]
            assert is_unbounded(dj) or z[k] <= dj, "oracle broke a bound"
            out[j] = z[k]
        if gamma is not None:
            got = solution_cost(costs, z)
            cap = gamma * sum(c * w for c, w in zip(costs, witness))
            assert got <= cap, "class solution exceeds gamma times witness"
    for pos in classes.small_rows:
        i = row_of[pos]
        covered = sum(
            residual.residual_matrix[i][j] * out[j] for j in range(n)
        )
        assert covered >= residual.residual_demands[i], (
            "small row %d left short" % i
        )
    return IntSolution(tuple(out))


def _surviving_rows(residual):
    """Residual row index per surviving-row position."""
    return [
        i for i, bf in enumerate(residual.residual_demands) if bf > 0
    ]


def round_large_rows(partition, normalized, residual, oracle):
    """Unit-demand priority cover over the large rows.

    Columns outside F keep their rounded supply; the rows' rounded
    demands act as priorities. 2y must cover it fractionally (a
    guarantee; FractionalInfeasible flags an upstream bug), and the
    oracle's 0/1 answer covers every large row at the original residual
    coefficients, which is asserted.
    """
    n = len(residual.supplies)
    if not partition.large_rows:
        return IntSolution((0,) * n)
    row_of = _surviving_rows(residual)
    pattern = normalized.pattern(residual)
    rows = tuple(partition.large_rows)
    base = ZeroOneCIP(
        matrix=tuple(pattern[pos] for pos in rows),
        demands=(1,) * len(rows),
        costs=residual.costs,
        upper_bounds=(UNBOUNDED,) * n,
    )
    pcip = PriorityCIP(
        base=base,
        priority_supplies=normalized.rounded_supplies,
        priority_demands=tuple(
            normalized.rounded_demands[pos] for pos in rows
        ),
    )
    y = normalized.scaled_solution
    witness = FracSolution(tuple(2 * y[j] for j in range(n)))
    pm = build_priority_matrix(pcip)
    for k, pos in enumerate(rows):
        if sum(pm[k][j] * witness[j] for j in range(n)) < 1:
            raise FractionalInfeasible(
                "2y does not cover large row %d" % row_of[pos]
            )
    z = oracle(pcip, witness)
    for v in z:
        assert v in (0, 1), "priority oracle returned a multiplicity"
    for pos in rows:
        i = row_of[pos]
        covered = sum(
            residual.residual_matrix[i][j] * z[j] for j in range(n)
        )
        assert covered >= residual.residual_demands[i], (
            "large row %d left short" % i
        )
    omega = getattr(oracle, "omega", None)
    if omega is not None:
        got = solution_cost(residual.costs, z)
        cap = omega * sum(
            (c * w for c, w in zip(residual.costs, witness)), Fraction(0)
        )
        assert got <= cap, "priority solution exceeds omega times witness"
    return z


@dataclass(frozen=True)
class RoundingAudit:
    """Everything the pipeline computed, for inspection and testing."""

    alpha: Fraction
    x_star: FracSolution
    lower_bound: Fraction
    generating_set: frozenset
    iterations: int
    xbar: FracSolution
    residual: object
    normalized: Power2Normalized
    partition: RowPartition
    classes: SupplyClasses
    small_solution: IntSolution
    large_solution: IntSolution
    combined: IntSolution
    solution: IntSolution
    cost: object
    bound_factor: object
    cost_bound: object


def round_ccip(ccip, cip_oracle, pcip_oracle):
    """Full knapsack-cover pipeline; returns (solution, RoundingAudit).

    The solution buys every column of F at its bound and takes the
    better of the small-row and large-row answers elsewhere. Feasibility
    for the original demands and the factor bound against the fractional
    lower bound are asserted before returning.
    """
    alpha = Fraction(1, 24)
    relaxed = alpha_relaxed(ccip, alpha)
    F = relaxed.generating_set
    xbar = FracSolution(
        tuple(
            Fraction(0) if j in F else Fraction(v)
            for j, v in enumerate(relaxed.x_star)
        )
    )
    residual = kc_residual(ccip, F)
    normalized = power2_normalize(residual, xbar)
    partition = partition_rows(normalized, residual)
    classes = supply_classes(normalized, partition, residual)
    small = round_small_rows(classes, residual, cip_oracle)
    large = round_large_rows(partition, normalized, residual, pcip_oracle)
    n = ccip.num_cols
    combined = IntSolution(
        tuple(max(small[j], large[j]) for j in range(n))
    )
    d = ccip.base.upper_bounds
    final = []
    for j in range(n):
        if j in F:
            final.append(d[j])
        else:
            dj = d[j]
            assert is_unbounded(dj) or combined[j] <= dj
            final.append(combined[j])
    solution = IntSolution(tuple(final))

    report = check_cover(ccip, solution)
    assert report.feasible, "final lift misses rows %r" % (report.uncovered,)
    cost = solution_cost(ccip.base.costs, solution)
    gamma = getattr(cip_oracle, "gamma", None)
    omega = getattr(pcip_oracle, "omega", None)
    factor = None
    bound = None
    if gamma is not None and omega is not None:
        factor = 24 * gamma + 8 * omega
        bound = factor * relaxed.lower_bound
        assert cost <= bound, "pipeline exceeded its factor bound"
    audit = RoundingAudit(
        alpha=alpha,
        x_star=relaxed.x_star,
        lower_bound=relaxed.lower_bound,
        generating_set=F,
        iterations=relaxed.iterations,
        xbar=xbar,
        residual=residual,
        normalized=normalized,
        partition=partition,
        classes=classes,
        small_solution=small,
        large_solution=large,
        combined=combined,
        solution=solution,
        cost=cost,
        bound_factor=factor,
        cost_bound=bound,
    )
    return solution, audit


def round_no_kc(ccip, x, oracle):
    """Demand-relaxing rounding without strengthened inequalities.

    Needs every single entry to fit under its row demand; violators are
    reported. Output multiplicities may run up to 10d, coverage of the
    original demands and the 10*gamma cost factor are asserted.
    """
    A = ccip.base.matrix
    s = ccip.supplies
    b = ccip.base.demands
    c = ccip.base.costs
    d = ccip.base.upper_bounds
    m, n = ccip.num_rows, ccip.num_cols

    offending = [
        (i, j)
        for i in range(m)
        for j in range(n)
        if A[i][j] and A[i][j] * s[j] > b[i]
    ]
    if offending:
        raise AssumptionViolated(offending)
    xs = tuple(Fraction(v) for v in x)
    if len(xs) != n:
        raise ValidationError("fractional point has the wrong length")
    for j, v in enumerate(xs):
        if v < 0 or (not is_unbounded(d[j]) and v > d[j]):
            raise ValidationError("fractional point violates bounds at %d" % j)
    effective = apply_supplies(ccip)
    for i in range(m):
        if sum(effective[i][j] * xs[j] for j in range(n)) < b[i]:
            raise ValidationError("fractional point violates row %d" % i)

    out = [0] * n
    positive = [j for j in range(n) if s[j] > 0]
    if positive:
        s_max = max(s[j] for j in positive)
        groups = {}
        for j in positive:
            t = (s_max // s[j]).bit_length() - 1
            groups.setdefault(t, []).append(j)
        gamma = getattr(oracle, "gamma", None)
        for t in sorted(groups):
            cols = groups[t]
            bt = [
                sum(A[i][j] * s[j] * xs[j] for j in cols) for i in range(m)
            ]
            demands = []
            for i in range(m):
                hits = [s[j] for j in cols if A[i][j]]
                demands.append(_floor(5 * bt[i] / min(hits)) if hits else 0)
            bounds = tuple(
                UNBOUNDED if is_unbounded(d[j]) else 10 * d[j] for j in cols
            )
            sub = ZeroOneCIP(
                matrix=tuple(
                    tuple(A[i][j] for j in cols) for i in range(m)
                ),
                demands=tuple(demands),
                costs=tuple(c[j] for j in cols),
                upper_bounds=bounds,
            )
            witness = FracSolution(tuple(10 * xs[j] for j in cols))
            z = oracle(sub, witness)
            for k, j in enumerate(cols):
                assert is_unbounded(d[j]) or z[k] <= 10 * d[j]
                out[j] = z[k]
            if gamma is not None:
                got = solution_cost(sub.costs, z)
                cap = gamma * sum(
                    (cv * w for cv, w in zip(sub.costs, witness)),
                    Fraction(0),
                )
                assert got <= cap, "class exceeded gamma times witness"

    solution = IntSolution(tuple(out))
    report = check_cover(ccip, solution)
    assert report.feasible, "rounded point misses rows %r" % (
        report.uncovered,
    )
    gamma = getattr(oracle, "gamma", None)
    if gamma is not None:
        cost = solution_cost(c, solution)
        frac_cost = sum((cv * v for cv, v in zip(c, xs)), Fraction(0))
        assert cost <= 10 * gamma * frac_cost, "cost factor exceeded"
    return solution
