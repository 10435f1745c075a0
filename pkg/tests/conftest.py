"""Seeded instance generators shared across the test modules.

Everything takes an explicit random.Random so suites are reproducible;
feasibility is patched in rather than rejection-sampled so the instance
count per seed is fixed.
"""

import random

from priocover import (
    ColumnRestrictedCIP,
    LineInstance,
    Segment,
    TreeInstance,
    TreeSegment,
    ZeroOneCIP,
)
from priocover.model import tree_segment_covered


def rand_line(rng, max_edges=10, max_segments=15, max_level=8, max_cost=20):
    n = rng.randint(1, max_edges)
    priorities = tuple(rng.randint(1, max_level) for _ in range(n))
    segments = []
    for _ in range(rng.randint(1, max_segments)):
        left = rng.randint(1, n)
        right = rng.randint(left, n)
        segments.append(
            Segment(left, right, rng.randint(1, max_level), rng.randint(1, max_cost))
        )
    return LineInstance(priorities, tuple(segments))


def coverable_line(rng, **kwargs):
    """Rejection-sample until every edge has a strong enough segment."""
    while True:
        inst = rand_line(rng, **kwargs)
        if all(
            any(seg.covers(e, inst.priority(e)) for seg in inst.segments)
            for e in range(1, inst.num_edges + 1)
        ):
            return inst


def rand_tree(rng, max_nodes=8, max_extra=5, max_level=8, max_cost=20, unit_cost=False):
    """Random rooted tree with enough segments to be coverable.

    Random segments first, then one patch segment per still-uncovered
    edge, so total segments stay within max_extra + (nodes - 1).
    """
    n = rng.randint(2, max_nodes)
    parent = {v: rng.randrange(v) for v in range(1, n)}
    children = {}
    for v in range(1, n):
        children.setdefault(parent[v], []).append(v)
    child_order = {v: tuple(children[v]) for v in children}
    priorities = {v: rng.randint(1, max_level) for v in range(1, n)}

    def cost():
        return 1 if unit_cost else rng.randint(1, max_cost)

    segments = []
    for _ in range(rng.randint(0, max_extra)):
        bottom = rng.randint(1, n - 1)
        chain = [bottom]
        while chain[-1] != 0:
            chain.append(parent[chain[-1]])
        top = rng.choice(chain[1:])
        segments.append(TreeSegment(top, bottom, rng.randint(1, max_level), cost()))

    probe = TreeInstance(0, parent, priorities, tuple(segments), child_order)
    covered = set()
    for seg in segments:
        covered.update(tree_segment_covered(probe, seg))
    for v in range(1, n):
        if v not in covered:
            segments.append(TreeSegment(parent[v], v, priorities[v], cost()))
    return TreeInstance(0, parent, priorities, tuple(segments), child_order)


def rand_interval_ccip(rng, max_edges=6, max_cols=8, max_supply=6, max_cost=10,
                       max_bound=3, demand_cap=12, no_bottleneck=False):
    """Column-restricted program whose base matrix is an interval matrix.

    Demands are drawn within each row's total capacity, so the instance
    is integrally feasible. With no_bottleneck, demands additionally sit
    at or above every supply present in the row.
    """
    while True:
        n = rng.randint(1, max_edges)
        m = rng.randint(1, max_cols)
        spans = []
        for _ in range(m):
            left = rng.randint(1, n)
            spans.append((left, rng.randint(left, n)))
        matrix = tuple(
            tuple(1 if l <= i + 1 <= r else 0 for (l, r) in spans) for i in range(n)
        )
        supplies = tuple(rng.randint(1, max_supply) for _ in range(m))
        bounds = tuple(rng.randint(1, max_bound) for _ in range(m))
        costs = tuple(rng.randint(1, max_cost) for _ in range(m))
        caps = [
            sum(a * s * d for a, s, d in zip(row, supplies, bounds))
            for row in matrix
        ]
        if any(c == 0 for c in caps):
            continue
        demands = []
        ok = True
        for i, row in enumerate(matrix):
            lo = 1
            if no_bottleneck:
                lo = max(a * s for a, s in zip(row, supplies))
            hi = min(caps[i], demand_cap)
            if lo > hi:
                ok = False
                break
            demands.append(rng.randint(lo, hi))
        if not ok:
            continue
        base = ZeroOneCIP(
            matrix=matrix,
            demands=tuple(demands),
            costs=costs,
            upper_bounds=bounds,
        )
        return ColumnRestrictedCIP(base=base, supplies=supplies)
