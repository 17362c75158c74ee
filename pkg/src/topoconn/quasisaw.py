"""Finite two-depth Aleksandrov frames and their regular closed algebra.

A quasi-saw is a quasi-order on W0 (depth 0) and W1 (depth 1) where the
relation goes from each depth-1 point to a nonempty set of depth-0
successors.  Read as an Aleksandrov topology (opens are up-closed sets),
a regular closed set is determined by its depth-0 trace: a depth-1 point
belongs to it exactly when one of its successors does.  All Boolean
operations therefore reduce to set operations on traces.

Two evaluators are provided: :func:`check` uses the trace-level
characterizations of the predicates, while :func:`oracle_check`
recomputes everything from the literal topology (closure and interior as
down- and up-closures, connectedness by exhaustive two-partition search)
and serves as an independent cross-check.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

from .syntax import (
    AtomF,
    And,
    Complement,
    Conn,
    Contact,
    Eq,
    Formula,
    IntConn,
    Not,
    One,
    Or,
    Product,
    Sum,
    Term,
    Variable,
    Zero,
)

DEFAULT_ORACLE_CAP = 14


class FrameError(ValueError):
    pass


class FrameMismatchError(ValueError):
    pass


class UnboundVariableError(KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound variable: {name}")


class OracleCapExceeded(ValueError):
    pass


class FrameClass(enum.Enum):
    """Frame classes the solver can target.

    CON_2QS (every depth-1 point has exactly two successors, frame
    connected) is contained in CON_QS (frame connected), which is
    contained in ALL_QS.
    """

    ALL_QS = "all"
    CON_QS = "con"
    CON_2QS = "con2"


@dataclass(frozen=True)
class QuasiSaw:
    """Ordered depth-0 ids plus (id, successor set) pairs for depth 1."""

    w0: tuple[str, ...]
    w1: tuple[tuple[str, frozenset[str]], ...]

    def __post_init__(self) -> None:
        ids = list(self.w0) + [z for z, _ in self.w1]
        if len(set(ids)) != len(ids):
            raise FrameError("duplicate point ids")
        w0set = set(self.w0)
        for z, succ in self.w1:
            if not succ:
                raise FrameError(f"depth-1 point {z} has no successors")
            unknown = succ - w0set
            if unknown:
                raise FrameError(
                    f"depth-1 point {z} has unknown successors: {sorted(unknown)}"
                )

    @cached_property
    def successors(self) -> dict[str, frozenset[str]]:
        return {z: succ for z, succ in self.w1}

    @cached_property
    def points(self) -> frozenset[str]:
        return frozenset(self.w0) | frozenset(self.successors)

    def is_graph_connected(self) -> bool:
        """Connectivity of the incidence graph on w0 and w1."""
        nodes = list(self.w0) + [z for z, _ in self.w1]
        if not nodes:
            return True
        adj: dict[str, set[str]] = {n: set() for n in nodes}
        for z, succ in self.w1:
            for x in succ:
                adj[z].add(x)
                adj[x].add(z)
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            for m in adj[stack.pop()]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return len(seen) == len(nodes)


def make_frame(w0: Iterable[str], w1: Iterable[tuple[str, Iterable[str]]]) -> QuasiSaw:
    return QuasiSaw(tuple(w0), tuple((z, frozenset(s)) for z, s in w1))


@dataclass(frozen=True)
class RcSet:
    """A regular closed set, stored as its depth-0 trace."""

    frame: QuasiSaw
    trace: frozenset[str]

    def __post_init__(self) -> None:
        unknown = self.trace - set(self.frame.w0)
        if unknown:
            raise FrameError(f"unknown point ids in trace: {sorted(unknown)}")


def rc_expand(frame: QuasiSaw, trace: Iterable[str]) -> RcSet:
    return RcSet(frame, frozenset(trace))


def full_points(s: RcSet) -> frozenset[str]:
    """Every point of the set: the trace plus each depth-1 point with a
    successor in the trace."""
    extra = {z for z, succ in s.frame.w1 if succ & s.trace}
    return s.trace | extra


def _require_same_frame(a: RcSet, b: RcSet) -> None:
    if a.frame != b.frame:
        raise FrameMismatchError("operands live on different frames")


def rc_sum(a: RcSet, b: RcSet) -> RcSet:
    _require_same_frame(a, b)
    return RcSet(a.frame, a.trace | b.trace)


def rc_product(a: RcSet, b: RcSet) -> RcSet:
    _require_same_frame(a, b)
    return RcSet(a.frame, a.trace & b.trace)


def rc_complement(a: RcSet) -> RcSet:
    return RcSet(a.frame, frozenset(a.frame.w0) - a.trace)


def _connected(points: set[str], frame: QuasiSaw) -> bool:
    """Connectivity of the incidence graph restricted to ``points``."""
    if not points:
        return True
    adj: dict[str, set[str]] = {p: set() for p in points}
    for z, succ in frame.w1:
        if z in points:
            for x in succ & points:
                adj[z].add(x)
                adj[x].add(z)
    start = next(iter(points))
    seen = {start}
    stack = [start]
    while stack:
        for m in adj[stack.pop()]:
            if m not in seen:
                seen.add(m)
                stack.append(m)
    return len(seen) == len(points)


def is_connected(s: RcSet) -> bool:
    """Connectedness of the set; the empty set counts as connected."""
    return _connected(set(full_points(s)), s.frame)


def interior_points(s: RcSet) -> frozenset[str]:
    """The interior: trace points plus depth-1 points all of whose
    successors lie in the trace."""
    extra = {z for z, succ in s.frame.w1 if succ <= s.trace}
    return s.trace | extra


def is_interior_connected(s: RcSet) -> bool:
    return _connected(set(interior_points(s)), s.frame)


def contact(a: RcSet, b: RcSet) -> bool:
    _require_same_frame(a, b)
    if a.trace & b.trace:
        return True
    return any(succ & a.trace and succ & b.trace for _, succ in a.frame.w1)


def components(s: RcSet) -> list[frozenset[str]]:
    """Connected components of the set's full point set, as point sets,
    ordered by their smallest member."""
    points = set(full_points(s))
    adj: dict[str, set[str]] = {p: set() for p in points}
    for z, succ in s.frame.w1:
        if z in points:
            for x in succ & points:
                adj[z].add(x)
                adj[x].add(z)
    out: list[frozenset[str]] = []
    remaining = set(points)
    while remaining:
        start = min(remaining)
        comp = {start}
        stack = [start]
        while stack:
            for m in adj[stack.pop()]:
                if m not in comp:
                    comp.add(m)
                    stack.append(m)
        out.append(frozenset(comp))
        remaining -= comp
    out.sort(key=lambda c: min(c))
    return out


def classify_frame(frame: QuasiSaw) -> frozenset[FrameClass]:
    out = {FrameClass.ALL_QS}
    if frame.is_graph_connected():
        out.add(FrameClass.CON_QS)
        if all(len(succ) == 2 for _, succ in frame.w1):
            out.add(FrameClass.CON_2QS)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Models and evaluation


@dataclass(frozen=True)
class QsModel:
    frame: QuasiSaw
    valuation: tuple[tuple[str, frozenset[str]], ...]

    @staticmethod
    def make(frame: QuasiSaw, valuation: Mapping[str, Iterable[str]]) -> "QsModel":
        items = tuple(
            (name, frozenset(trace)) for name, trace in sorted(valuation.items())
        )
        for name, trace in items:
            unknown = trace - set(frame.w0)
            if unknown:
                raise FrameError(
                    f"valuation of {name} uses unknown ids: {sorted(unknown)}"
                )
        return QsModel(frame, items)

    @cached_property
    def traces(self) -> dict[str, frozenset[str]]:
        return dict(self.valuation)

    def region(self, name: str) -> RcSet:
        if name not in self.traces:
            raise UnboundVariableError(name)
        return RcSet(self.frame, self.traces[name])


def _eval_trace(t: Term, model: QsModel) -> frozenset[str]:
    if isinstance(t, Variable):
        if t.name not in model.traces:
            raise UnboundVariableError(t.name)
        return model.traces[t.name]
    if isinstance(t, Zero):
        return frozenset()
    if isinstance(t, One):
        return frozenset(model.frame.w0)
    if isinstance(t, Sum):
        return _eval_trace(t.left, model) | _eval_trace(t.right, model)
    if isinstance(t, Product):
        return _eval_trace(t.left, model) & _eval_trace(t.right, model)
    if isinstance(t, Complement):
        return frozenset(model.frame.w0) - _eval_trace(t.arg, model)
    raise TypeError(f"not a term: {t!r}")


def check(model: QsModel, f: Formula) -> bool:
    """Evaluate ``f`` in ``model`` via the trace-level semantics."""
    if isinstance(f, AtomF):
        a = f.atom
        if isinstance(a, Eq):
            return _eval_trace(a.left, model) == _eval_trace(a.right, model)
        frame = model.frame
        if isinstance(a, Contact):
            return contact(
                RcSet(frame, _eval_trace(a.left, model)),
                RcSet(frame, _eval_trace(a.right, model)),
            )
        if isinstance(a, Conn):
            return is_connected(RcSet(frame, _eval_trace(a.arg, model)))
        if isinstance(a, IntConn):
            return is_interior_connected(RcSet(frame, _eval_trace(a.arg, model)))
        raise TypeError(f"not an atom: {a!r}")
    if isinstance(f, And):
        return check(model, f.left) and check(model, f.right)
    if isinstance(f, Or):
        return check(model, f.left) or check(model, f.right)
    if isinstance(f, Not):
        return not check(model, f.arg)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Brute-force topological oracle

# The oracle works with full point sets and the literal Aleksandrov
# topology: a set is open iff up-closed, closed iff down-closed, where a
# depth-1 point sits below each of its successors.


def _up(w: str, frame: QuasiSaw) -> frozenset[str]:
    succ = frame.successors.get(w)
    return frozenset({w}) if succ is None else frozenset({w}) | succ


def oracle_closure(points: frozenset[str], frame: QuasiSaw) -> frozenset[str]:
    below = {z for z, succ in frame.w1 if succ & points}
    return points | below


def oracle_interior(points: frozenset[str], frame: QuasiSaw) -> frozenset[str]:
    return frozenset(w for w in points if _up(w, frame) <= points)


def _oracle_connected(points: frozenset[str], frame: QuasiSaw) -> bool:
    """Exhaustive search for a decomposition into two disjoint nonempty
    relatively closed parts; connected iff none exists."""
    items = sorted(points)
    if len(items) <= 1:
        return True
    pinned, rest = items[0], items[1:]
    for k in range(len(rest) + 1):
        for extra in combinations(rest, k):
            part_a = frozenset({pinned, *extra})
            part_b = points - part_a
            if not part_b:
                continue
            closed_a = oracle_closure(part_a, frame) & points == part_a
            closed_b = oracle_closure(part_b, frame) & points == part_b
            if closed_a and closed_b:
                return False
    return True


def _oracle_term(t: Term, model: QsModel, universe: frozenset[str]) -> frozenset[str]:
    frame = model.frame
    if isinstance(t, Variable):
        if t.name not in model.traces:
            raise UnboundVariableError(t.name)
        return oracle_closure(model.traces[t.name], frame)
    if isinstance(t, Zero):
        return frozenset()
    if isinstance(t, One):
        return universe
    if isinstance(t, Sum):
        x = _oracle_term(t.left, model, universe)
        y = _oracle_term(t.right, model, universe)
        return oracle_closure(x | y, frame)
    if isinstance(t, Product):
        x = _oracle_term(t.left, model, universe)
        y = _oracle_term(t.right, model, universe)
        return oracle_closure(oracle_interior(x & y, frame), frame)
    if isinstance(t, Complement):
        x = _oracle_term(t.arg, model, universe)
        return oracle_closure(universe - x, frame)
    raise TypeError(f"not a term: {t!r}")


def oracle_check(model: QsModel, f: Formula, cap: int = DEFAULT_ORACLE_CAP) -> bool:
    """Evaluate ``f`` by literal closure/interior computations and
    exhaustive connectivity search.  Refuses frames with more than
    ``cap`` points, since the connectivity search is exponential."""
    frame = model.frame
    size = len(frame.w0) + len(frame.w1)
    if size > cap:
        raise OracleCapExceeded(f"frame has {size} points, oracle cap is {cap}")
    universe = frozenset(frame.points)

    def go(g: Formula) -> bool:
        if isinstance(g, AtomF):
            a = g.atom
            if isinstance(a, Eq):
                return _oracle_term(a.left, model, universe) == _oracle_term(
                    a.right, model, universe
                )
            if isinstance(a, Contact):
                return bool(
                    _oracle_term(a.left, model, universe)
                    & _oracle_term(a.right, model, universe)
                )
            if isinstance(a, Conn):
                return _oracle_connected(
                    _oracle_term(a.arg, model, universe), frame
                )
            if isinstance(a, IntConn):
                pts = _oracle_term(a.arg, model, universe)
                return _oracle_connected(oracle_interior(pts, frame), frame)
            raise TypeError(f"not an atom: {a!r}")
        if isinstance(g, And):
            return go(g.left) and go(g.right)
        if isinstance(g, Or):
            return go(g.left) or go(g.right)
        if isinstance(g, Not):
            return not go(g.arg)
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


# ---------------------------------------------------------------------------
# Model file format


def model_to_json(model: QsModel) -> dict:
    return {
        "w0": list(model.frame.w0),
        "w1": [
            {"id": z, "succ": sorted(succ)} for z, succ in model.frame.w1
        ],
        "valuation": {
            name: sorted(trace) for name, trace in model.valuation
        },
    }


def model_from_json(data: dict) -> QsModel:
    if not isinstance(data, dict):
        raise FrameError("model file must be a JSON object")
    try:
        w0 = [str(x) for x in data["w0"]]
        w1 = [(str(e["id"]), frozenset(str(s) for s in e["succ"])) for e in data["w1"]]
        valuation = {
            str(name): [str(x) for x in trace]
            for name, trace in data.get("valuation", {}).items()
        }
    except (KeyError, TypeError) as exc:
        raise FrameError(f"malformed model file: {exc}") from exc
    frame = make_frame(w0, w1)
    return QsModel.make(frame, valuation)
