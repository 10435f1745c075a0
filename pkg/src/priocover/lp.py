"""Exact rational linear programming and knapsack-cover machinery.

The solver is a dense two-phase tableau simplex over Fraction with Bland's
anti-cycling rule. Upper bounds are folded in as explicit rows, so the
returned point is a basic (vertex) solution of the bounded polyhedron,
which is what the totally-unimodular integrality checks rely on.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import Infeasible, IterationBudgetExceeded, ValidationError
from .model import (
    FracSolution,
    LineInstance,
    PriorityCIP,
    ColumnRestrictedCIP,
    TreeInstance,
    ZeroOneCIP,
    UNBOUNDED,
    apply_supplies,
    build_priority_matrix,
    effective_system,
    is_unbounded,
)


@dataclass(frozen=True)
class LpRow:
    coeffs: tuple
    rhs: Fraction
    label: object

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))


@dataclass(frozen=True)
class LinearProgram:
    """min objective . x  subject to  coeffs . x >= rhs per row,
    0 <= x_j <= upper_bounds[j]."""

    objective: tuple
    rows: tuple
    upper_bounds: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "objective", tuple(Fraction(c) for c in self.objective)
        )
        object.__setattr__(self, "rows", tuple(self.rows))
        bounds = tuple(
            u if is_unbounded(u) else Fraction(u) for u in self.upper_bounds
        )
        object.__setattr__(self, "upper_bounds", bounds)
        n = len(self.objective)
        labels = set()
        for row in self.rows:
            if len(row.coeffs) != n:
                raise ValidationError("row %r has wrong width" % (row.label,))
            if row.label in labels:
                raise ValidationError("duplicate row label %r" % (row.label,))
            labels.add(row.label)
        if len(bounds) != n:
            raise ValidationError("bounds length != objective length")

    @property
    def num_vars(self):
        return len(self.objective)


@dataclass(frozen=True)
class LpOptimal:
    solution: tuple
    value: Fraction
    basis: tuple


@dataclass(frozen=True)
class LpInfeasible:
    pass


@dataclass(frozen=True)
class LpUnbounded:
    pass


def _pivot(tab, basis, row, col):
    piv = tab[row][col]
    inv = 1 / piv
    tab[row] = [a * inv for a in tab[row]]
    prow = tab[row]
    for i, r in enumerate(tab):
        if i == row:
            continue
        f = r[col]
        if f:
            tab[i] = [a - f * p for a, p in zip(r, prow)]
    basis[row] = col


def _run_simplex(tab, basis, width):
    """Minimize the last tableau row. Bland's rule throughout."""
    m = len(tab) - 1
    while True:
        obj = tab[-1]
        enter = None
        for j in range(width):
            if obj[j] < 0:
                enter = j
                break
        if enter is None:
            return "optimal"
        leave = None
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave is None:
            return "unbounded"
        _pivot(tab, basis, leave, enter)


def simplex_solve(lp):
    """Exact two-phase simplex. Returns LpOptimal/LpInfeasible/LpUnbounded."""
    n = lp.num_vars
    zero = Fraction(0)
    one = Fraction(1)

    # assemble >= and <= rows over the original variables, rhs >= 0
    ge_rows = []  # (coeffs, rhs)
    le_rows = []
    for row in lp.rows:
        coeffs, rhs = list(row.coeffs), row.rhs
        if rhs <= 0:
            # a.x >= rhs with rhs <= 0 is -a.x <= -rhs
            le_rows.append(([-c for c in coeffs], -rhs))
        else:
            ge_rows.append((coeffs, rhs))
    for j, u in enumerate(lp.upper_bounds):
        if is_unbounded(u):
            continue
        coeffs = [zero] * n
        coeffs[j] = one
        le_rows.append((coeffs, Fraction(u)))

    m = len(ge_rows) + len(le_rows)
    num_slack = m
    num_art = len(ge_rows)
    width = n + num_slack + num_art  # columns before the rhs

    tab = []
    basis = []
    art_cols = []
    si = 0
    ai = 0
    for coeffs, rhs in ge_rows:
        row = list(coeffs) + [zero] * (num_slack + num_art)
        row[n + si] = -one  # surplus
        art_col = n + num_slack + ai
        row[art_col] = one
        row.append(rhs)
        tab.append(row)
        basis.append(art_col)
        art_cols.append(art_col)
        si += 1
        ai += 1
    for coeffs, rhs in le_rows:
        row = list(coeffs) + [zero] * (num_slack + num_art)
        row[n + si] = one  # slack, starts basic
        row.append(rhs)
        tab.append(row)
        basis.append(n + si)
        si += 1

    if num_art:
        # phase 1: minimize the artificial total
        cost = [zero] * (width + 1)
        for c in art_cols:
            cost[c] = one
        tab.append(cost)
        for i, b in enumerate(basis):
            if b in set(art_cols):
                f = tab[-1][b]
                if f:
                    tab[-1] = [a - f * p for a, p in zip(tab[-1], tab[i])]
        _run_simplex(tab, basis, width)  # bounded below by 0, always optimal
        if -tab[-1][-1] != 0:
            return LpInfeasible()
        tab.pop()
        # drive surviving artificials out of the basis
        art_set = set(art_cols)
        drop = []
        for i in range(len(tab)):
            if basis[i] in art_set:
                piv_col = None
                for j in range(n + num_slack):
                    if tab[i][j] != 0:
                        piv_col = j
                        break
                if piv_col is None:
                    drop.append(i)  # redundant constraint
                else:
                    _pivot(tab, basis, i, piv_col)
        for i in reversed(drop):
            tab.pop(i)
            basis.pop(i)

    # phase 2
    width2 = n + num_slack
    tab = [row[:width2] + [row[-1]] for row in tab]
    cost = [Fraction(c) for c in lp.objective] + [zero] * (num_slack + 1)
    tab.append(cost)
    for i, b in enumerate(basis):
        f = tab[-1][b]
        if f:
            tab[-1] = [a - f * p for a, p in zip(tab[-1], tab[i])]
    status = _run_simplex(tab, basis, width2)
    if status == "unbounded":
        return LpUnbounded()

    x = [zero] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = tab[i][-1]
    value = sum(c * v for c, v in zip(lp.objective, x))
    return LpOptimal(solution=tuple(x), value=value, basis=tuple(basis))


# ---------------------------------------------------------------------------
# relaxations


def canonical_relaxation(instance):
    """The plain LP relaxation an instance defines.

    Matrix-form instances keep their upper bounds; line and tree instances
    get none (multiplicities above 1 never help a unit-demand cover, so
    the optimum is unchanged and duality stays clean).
    """
    if isinstance(instance, ZeroOneCIP):
        matrix, demands, costs = instance.matrix, instance.demands, instance.costs
        bounds = instance.upper_bounds
        tag = "row"
    elif isinstance(instance, ColumnRestrictedCIP):
        matrix = apply_supplies(instance)
        demands = instance.base.demands
        costs = instance.base.costs
        bounds = instance.base.upper_bounds
        tag = "row"
    elif isinstance(instance, PriorityCIP):
        matrix = build_priority_matrix(instance)
        demands = (1,) * instance.num_rows
        costs = instance.base.costs
        bounds = instance.base.upper_bounds
        tag = "row"
    elif isinstance(instance, (LineInstance, TreeInstance)):
        matrix, demands, costs = effective_system(instance)
        bounds = (UNBOUNDED,) * len(costs)
        tag = "edge"
    else:
        raise ValidationError(
            "no canonical relaxation for %r" % type(instance).__name__
        )
    rows = tuple(
        LpRow(coeffs=matrix[i], rhs=demands[i], label=(tag, i))
        for i in range(len(matrix))
    )
    return LinearProgram(objective=costs, rows=rows, upper_bounds=bounds)


@dataclass(frozen=True)
class ResidualSystem:
    """A^F[s] and b^F for a column set F.

    Entries follow the knapsack-cover recipe: zero out F's columns, clamp
    the rest at the residual demand. A row whose residual demand was wiped
    out by an unbounded column in F is listed in infinite_flags. Supplies,
    costs, and bounds of the source problem ride along so the rounding
    stages can run from the residual alone.
    """

    residual_matrix: tuple
    residual_demands: tuple
    generating_set: frozenset
    supplies: tuple
    costs: tuple
    upper_bounds: tuple
    infinite_flags: tuple = ()


def kc_residual(ccip, F):
    F = frozenset(F)
    A = ccip.base.matrix
    s = ccip.supplies
    d = ccip.base.upper_bounds
    m, n = ccip.num_rows, ccip.num_cols
    demands = []
    flags = []
    for i in range(m):
        acc = 0
        wiped = False
        for j in F:
            aij = A[i][j] * s[j]
            if aij == 0:
                continue
            if is_unbounded(d[j]):
                wiped = True
                flags.append((i, j))
            else:
                acc += aij * d[j]
        bf = 0 if wiped else max(0, ccip.base.demands[i] - acc)
        demands.append(bf)
    matrix = tuple(
        tuple(
            0 if j in F else min(A[i][j] * s[j], demands[i])
            for j in range(n)
        )
        for i in range(m)
    )
    return ResidualSystem(
        residual_matrix=matrix,
        residual_demands=tuple(demands),
        generating_set=F,
        supplies=s,
        costs=ccip.base.costs,
        upper_bounds=d,
        infinite_flags=tuple(flags),
    )


def _kc_rows(ccip, residual):
    """LP rows of the knapsack-cover system for one column set."""
    key = tuple(sorted(residual.generating_set))
    rows = []
    for i, bf in enumerate(residual.residual_demands):
        if bf == 0:
            continue
        rows.append(
            LpRow(
                coeffs=residual.residual_matrix[i],
                rhs=bf,
                label=("kc", key, i),
            )
        )
    return rows


@dataclass(frozen=True)
class AlphaRelaxed:
    x_star: FracSolution
    lower_bound: Fraction
    generating_set: frozenset
    iterations: int


def alpha_relaxed(ccip, alpha, iteration_cap=200):
    """Constraint generation for an alpha-relaxed point.

    Solves over the F = {} knapsack-cover rows, then repeatedly adds the
    rows of F(x*) that x* violates. Every sub-LP optimum is a lower bound
    on the fully strengthened LP, which is the alpha-relaxed cost contract.
    """
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ValidationError("alpha must lie strictly between 0 and 1")
    A = ccip.base.matrix
    s = ccip.supplies
    d = ccip.base.upper_bounds
    b = ccip.base.demands
    n = ccip.num_cols

    # quick exactness check: buying everything at its bound is the best any
    # integral solution can do, so a shortfall here means infeasible
    for i in range(ccip.num_rows):
        total = 0
        maxed = False
        for j in range(n):
            if A[i][j] and s[j]:
                if is_unbounded(d[j]):
                    maxed = True
                    break
                total += s[j] * d[j]
        if not maxed and total < b[i]:
            raise Infeasible("row %d cannot be covered integrally" % i, [i])

    rows = list(_kc_rows(ccip, kc_residual(ccip, frozenset())))
    seen = {row.label for row in rows}
    for it in range(1, iteration_cap + 1):
        lp = LinearProgram(
            objective=ccip.base.costs, rows=tuple(rows), upper_bounds=d
        )
        res = simplex_solve(lp)
        if isinstance(res, LpInfeasible):
            raise Infeasible("knapsack-cover system infeasible")
        if isinstance(res, LpUnbounded):
            raise ValidationError("covering LP cannot be unbounded")
        x = res.solution
        F = frozenset(
            j
            for j in range(n)
            if not is_unbounded(d[j]) and x[j] >= alpha * d[j]
        )
        residual = kc_residual(ccip, F)
        violated = []
        for row in _kc_rows(ccip, residual):
            lhs = sum(c * xv for c, xv in zip(row.coeffs, x))
            if lhs < row.rhs and row.label not in seen:
                violated.append(row)
        if not violated:
            return AlphaRelaxed(
                x_star=FracSolution(x),
                lower_bound=res.value,
                generating_set=F,
                iterations=it,
            )
        for row in violated:
            rows.append(row)
            seen.add(row.label)
    raise IterationBudgetExceeded(iteration_cap)
