"""JSON documents for instances, solutions, and reports.

Every payload is integer or {"num", "den"} rational, so files diff
cleanly and round-trip exactly. Parsing keeps a field path for error
messages; serialization fixes key order so equal objects give
byte-identical text.
"""

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .model import (
    Box,
    ColumnRestrictedCIP,
    CoverReport,
    FracSolution,
    IntSolution,
    LineInstance,
    PriorityCIP,
    RectCoverInstance,
    Segment,
    TreeInstance,
    TreeSegment,
    TwoPriorityLineInstance,
    TwoPrioritySegment,
    UNBOUNDED,
    ZeroOneCIP,
    is_unbounded,
)

DOCUMENT_VERSION = 1


@dataclass(frozen=True)
class SolutionPayload:
    """A solution vector with the cost the producer computed for it."""

    solution: object
    cost: object


@dataclass(frozen=True)
class Document:
    kind: str
    version: int
    body: object


_KINDS = (
    "zero_one_cip",
    "ccip",
    "pcip",
    "line",
    "two_plc",
    "tree",
    "rect",
    "solution",
    "report",
)


def _fail(path, message):
    raise ValidationError("%s: %s" % (path.lstrip(".") or "document", message))


def _get(obj, key, path):
    if not isinstance(obj, dict):
        _fail(path, "expected an object")
    if key not in obj:
        _fail(path, "missing field %r" % key)
    return obj[key]


def _int(value, path):
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, "expected an integer, got %r" % (value,))
    return value


def _num(value, path):
    """Integer or {"num", "den"} rational."""
    if isinstance(value, bool):
        _fail(path, "expected a number, got %r" % (value,))
    if isinstance(value, int):
        return value
    if isinstance(value, dict):
        num = _int(_get(value, "num", path), path + ".num")
        den = _int(_get(value, "den", path), path + ".den")
        if den == 0:
            _fail(path, "zero denominator")
        return Fraction(num, den)
    _fail(path, "expected an integer or {num, den}, got %r" % (value,))


def _list(value, path):
    if not isinstance(value, list):
        _fail(path, "expected a list")
    return value


def _encode_num(value):
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return {"num": value.numerator, "den": value.denominator}
    return int(value)


def _encode_bound(value):
    return None if is_unbounded(value) else int(value)


def _decode_bound(value, path):
    if value is None:
        return UNBOUNDED
    return _int(value, path)


# ---------------------------------------------------------------------------
# per-kind payload codecs


def _cip_fields(body):
    return {
        "matrix": [list(row) for row in body.matrix],
        "demands": list(body.demands),
        "costs": list(body.costs),
        "bounds": [_encode_bound(d) for d in body.upper_bounds],
    }


def _parse_cip_fields(payload, path):
    matrix = tuple(
        tuple(
            _int(a, "%s.matrix[%d][%d]" % (path, i, j))
            for j, a in enumerate(_list(row, "%s.matrix[%d]" % (path, i)))
        )
        for i, row in enumerate(_list(_get(payload, "matrix", path), path + ".matrix"))
    )
    demands = tuple(
        _int(b, "%s.demands[%d]" % (path, i))
        for i, b in enumerate(_list(_get(payload, "demands", path), path + ".demands"))
    )
    costs = tuple(
        _int(c, "%s.costs[%d]" % (path, j))
        for j, c in enumerate(_list(_get(payload, "costs", path), path + ".costs"))
    )
    bounds = tuple(
        _decode_bound(d, "%s.bounds[%d]" % (path, j))
        for j, d in enumerate(_list(_get(payload, "bounds", path), path + ".bounds"))
    )
    return ZeroOneCIP(
        matrix=matrix, demands=demands, costs=costs, upper_bounds=bounds
    )


def _encode_body(kind, body):
    if kind == "zero_one_cip":
        return _cip_fields(body)
    if kind == "ccip":
        out = _cip_fields(body.base)
        out["supplies"] = list(body.supplies)
        return out
    if kind == "pcip":
        out = _cip_fields(body.base)
        out["supplies"] = list(body.priority_supplies)
        out["priorities"] = list(body.priority_demands)
        return out
    if kind == "line":
        return {
            "edges": [{"pi": p} for p in body.edge_priorities],
            "segments": [
                {"l": s.left, "r": s.right, "s": s.supply, "c": s.cost}
                for s in body.segments
            ],
        }
    if kind == "two_plc":
        return {
            "edges": [{"pi1": a, "pi2": b} for a, b in body.edge_priorities],
            "segments": [
                {
                    "l": s.left,
                    "r": s.right,
                    "s1": s.supply1,
                    "s2": s.supply2,
                    "c": s.cost,
                }
                for s in body.segments
            ],
        }
    if kind == "tree":
        nodes = sorted(body.parent)
        return {
            "root": body.root,
            "parent": {str(v): body.parent[v] for v in nodes},
            "child_order": {
                str(v): list(body.child_order[v])
                for v in sorted(body.child_order)
            },
            "edges": [{"id": v, "pi": body.edge_priorities[v]} for v in nodes],
            "segments": [
                {"t": s.top, "b": s.bottom, "s": s.supply, "c": s.cost}
                for s in body.segments
            ],
        }
    if kind == "rect":
        return {
            "points": [list(p) for p in body.points],
            "boxes": [
                {
                    "x_lo": b.x_lo,
                    "x_hi": b.x_hi,
                    "y_hi": b.y_hi,
                    "z_hi": b.z_hi,
                    "c": b.cost,
                }
                for b in body.boxes
            ],
        }
    if kind == "solution":
        return {
            "x": [_encode_num(v) for v in body.solution],
            "cost": _encode_num(body.cost),
        }
    if kind == "report":
        return {
            "feasible": bool(body.feasible),
            "coverage": [_encode_num(v) for v in body.coverage],
            "demands": [_encode_num(v) for v in body.demands],
            "uncovered": [int(e) for e in body.uncovered],
        }
    raise ValidationError("unknown document kind %r" % kind)


def _parse_body(kind, payload, path):
    if kind == "zero_one_cip":
        return _parse_cip_fields(payload, path)
    if kind == "ccip":
        base = _parse_cip_fields(payload, path)
        supplies = tuple(
            _int(s, "%s.supplies[%d]" % (path, j))
            for j, s in enumerate(
                _list(_get(payload, "supplies", path), path + ".supplies")
            )
        )
        return ColumnRestrictedCIP(base=base, supplies=supplies)
    if kind == "pcip":
        base = _parse_cip_fields(payload, path)
        supplies = tuple(
            _int(s, "%s.supplies[%d]" % (path, j))
            for j, s in enumerate(
                _list(_get(payload, "supplies", path), path + ".supplies")
            )
        )
        priorities = tuple(
            _int(p, "%s.priorities[%d]" % (path, i))
            for i, p in enumerate(
                _list(_get(payload, "priorities", path), path + ".priorities")
            )
        )
        return PriorityCIP(
            base=base, priority_supplies=supplies, priority_demands=priorities
        )
    if kind == "line":
        edges = tuple(
            _int(_get(e, "pi", "%s.edges[%d]" % (path, i)), "%s.edges[%d].pi" % (path, i))
            for i, e in enumerate(_list(_get(payload, "edges", path), path + ".edges"))
        )
        segments = tuple(
            Segment(
                left=_int(_get(s, "l", p), p + ".l"),
                right=_int(_get(s, "r", p), p + ".r"),
                supply=_int(_get(s, "s", p), p + ".s"),
                cost=_int(_get(s, "c", p), p + ".c"),
            )
            for j, s in enumerate(
                _list(_get(payload, "segments", path), path + ".segments")
            )
            for p in ("%s.segments[%d]" % (path, j),)
        )
        return LineInstance(edges, segments)
    if kind == "two_plc":
        edges = tuple(
            (
                _int(_get(e, "pi1", p), p + ".pi1"),
                _int(_get(e, "pi2", p), p + ".pi2"),
            )
            for i, e in enumerate(_list(_get(payload, "edges", path), path + ".edges"))
            for p in ("%s.edges[%d]" % (path, i),)
        )
        segments = tuple(
            TwoPrioritySegment(
                left=_int(_get(s, "l", p), p + ".l"),
                right=_int(_get(s, "r", p), p + ".r"),
                supply1=_int(_get(s, "s1", p), p + ".s1"),
                supply2=_int(_get(s, "s2", p), p + ".s2"),
                cost=_int(_get(s, "c", p), p + ".c"),
            )
            for j, s in enumerate(
                _list(_get(payload, "segments", path), path + ".segments")
            )
            for p in ("%s.segments[%d]" % (path, j),)
        )
        return TwoPriorityLineInstance(edges, segments)
    if kind == "tree":
        root = _int(_get(payload, "root", path), path + ".root")
        parent_raw = _get(payload, "parent", path)
        if not isinstance(parent_raw, dict):
            _fail(path + ".parent", "expected an object")
        parent = {}
        for k, v in parent_raw.items():
            try:
                node = int(k)
            except ValueError:
                _fail(path + ".parent", "non-integer node id %r" % k)
            parent[node] = _int(v, "%s.parent[%s]" % (path, k))
        order_raw = _get(payload, "child_order", path)
        if not isinstance(order_raw, dict):
            _fail(path + ".child_order", "expected an object")
        child_order = {}
        for k, v in order_raw.items():
            try:
                node = int(k)
            except ValueError:
                _fail(path + ".child_order", "non-integer node id %r" % k)
            child_order[node] = tuple(
                _int(c, "%s.child_order[%s][%d]" % (path, k, i))
                for i, c in enumerate(_list(v, "%s.child_order[%s]" % (path, k)))
            )
        priorities = {}
        for i, e in enumerate(_list(_get(payload, "edges", path), path + ".edges")):
            p = "%s.edges[%d]" % (path, i)
            priorities[_int(_get(e, "id", p), p + ".id")] = _int(
                _get(e, "pi", p), p + ".pi"
            )
        segments = tuple(
            TreeSegment(
                top=_int(_get(s, "t", p), p + ".t"),
                bottom=_int(_get(s, "b", p), p + ".b"),
                supply=_int(_get(s, "s", p), p + ".s"),
                cost=_int(_get(s, "c", p), p + ".c"),
            )
            for j, s in enumerate(
                _list(_get(payload, "segments", path), path + ".segments")
            )
            for p in ("%s.segments[%d]" % (path, j),)
        )
        return TreeInstance(
            root=root,
            parent=parent,
            edge_priorities=priorities,
            segments=segments,
            child_order=child_order,
        )
    if kind == "rect":
        points = tuple(
            tuple(
                _int(c, "%s.points[%d][%d]" % (path, i, k))
                for k, c in enumerate(_list(p, "%s.points[%d]" % (path, i)))
            )
            for i, p in enumerate(_list(_get(payload, "points", path), path + ".points"))
        )
        for i, p in enumerate(points):
            if len(p) != 3:
                _fail("%s.points[%d]" % (path, i), "expected 3 coordinates")
        boxes = tuple(
            Box(
                x_lo=_int(_get(b, "x_lo", p), p + ".x_lo"),
                x_hi=_int(_get(b, "x_hi", p), p + ".x_hi"),
                y_hi=_int(_get(b, "y_hi", p), p + ".y_hi"),
                z_hi=_int(_get(b, "z_hi", p), p + ".z_hi"),
                cost=_int(_get(b, "c", p), p + ".c"),
            )
            for j, b in enumerate(_list(_get(payload, "boxes", path), path + ".boxes"))
            for p in ("%s.boxes[%d]" % (path, j),)
        )
        return RectCoverInstance(points=points, boxes=boxes)
    if kind == "solution":
        xs = [
            _num(v, "%s.x[%d]" % (path, j))
            for j, v in enumerate(_list(_get(payload, "x", path), path + ".x"))
        ]
        cost = _num(_get(payload, "cost", path), path + ".cost")
        if any(isinstance(v, Fraction) for v in xs):
            sol = FracSolution(tuple(Fraction(v) for v in xs))
        else:
            sol = IntSolution(tuple(xs))
        return SolutionPayload(solution=sol, cost=cost)
    if kind == "report":
        feasible = _get(payload, "feasible", path)
        if not isinstance(feasible, bool):
            _fail(path + ".feasible", "expected a boolean")
        coverage = tuple(
            _num(v, "%s.coverage[%d]" % (path, i))
            for i, v in enumerate(
                _list(_get(payload, "coverage", path), path + ".coverage")
            )
        )
        demands = tuple(
            _num(v, "%s.demands[%d]" % (path, i))
            for i, v in enumerate(
                _list(_get(payload, "demands", path), path + ".demands")
            )
        )
        uncovered = tuple(
            _int(v, "%s.uncovered[%d]" % (path, i))
            for i, v in enumerate(
                _list(_get(payload, "uncovered", path), path + ".uncovered")
            )
        )
        return CoverReport(
            feasible=feasible,
            coverage=coverage,
            demands=demands,
            uncovered=uncovered,
        )
    _fail(path, "unknown kind %r" % kind)


_KIND_OF_TYPE = (
    (ZeroOneCIP, "zero_one_cip"),
    (ColumnRestrictedCIP, "ccip"),
    (PriorityCIP, "pcip"),
    (LineInstance, "line"),
    (TwoPriorityLineInstance, "two_plc"),
    (TreeInstance, "tree"),
    (RectCoverInstance, "rect"),
    (SolutionPayload, "solution"),
    (CoverReport, "report"),
)


def document_for(body):
    """Wrap a model object in a Document, inferring the kind tag."""
    for typ, kind in _KIND_OF_TYPE:
        if isinstance(body, typ):
            return Document(kind=kind, version=DOCUMENT_VERSION, body=body)
    raise ValidationError("cannot serialize %r" % type(body).__name__)


def serialize_document(doc):
    payload = {"kind": doc.kind, "version": doc.version}
    payload.update(_encode_body(doc.kind, doc.body))
    return json.dumps(payload, indent=2) + "\n"


def parse_document(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            "invalid JSON at line %d column %d: %s"
            % (exc.lineno, exc.colno, exc.msg)
        ) from None
    if not isinstance(raw, dict):
        _fail("", "top level must be an object")
    kind = _get(raw, "kind", "")
    if kind not in _KINDS:
        _fail("kind", "unknown kind %r" % (kind,))
    version = _int(_get(raw, "version", ""), "version")
    if version != DOCUMENT_VERSION:
        _fail(
            "version",
            "unsupported version %d, expected %d" % (version, DOCUMENT_VERSION),
        )
    return Document(kind=kind, version=version, body=_parse_body(kind, raw, ""))
