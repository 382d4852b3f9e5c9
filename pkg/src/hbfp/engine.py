"""Event-driven constraint enforcement over a :class:`RelationState`.

Every user mutation runs through the same pipeline:

1. plumbing checks (unknown rows / nodes) -- raised as exceptions;
2. reject guards, in canonical subtype order, first failure wins;
3. the raw mutation;
4. tuple-generating propagation.

Guards look at the image of the *other* rows (the row being saved or deleted
is left out), so a pair still carried by a duplicate row is never treated as
removed.  Propagated rows bypass the guards.
"""

from __future__ import annotations

import enum
import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Union

from .constraints import EnforcementPlan, Subtype
from .cycles import NullCyclePolicy, is_cycle
from .store import Cell, NodeRef, Pair, RelationState, Row, cell_eq, format_pair

__all__ = [
    "Propagation",
    "EngineConfig",
    "AddNode",
    "InsertRow",
    "UpdateRow",
    "DeleteRow",
    "Mutation",
    "OldValues",
    "Change",
    "Accepted",
    "Rejected",
    "Outcome",
    "PlanConflictError",
    "apply",
    "on_node_added",
    "validate_save",
    "validate_delete",
    "propagate_after_save",
    "propagate_after_delete",
    "Engine",
]

S = Subtype


class Propagation(enum.Enum):
    FIXPOINT = "fixpoint"
    SINGLE_PASS = "single_pass"


@dataclass(frozen=True)
class EngineConfig:
    propagation: Propagation = Propagation.FIXPOINT
    null_cycle_policy: NullCyclePolicy = NullCyclePolicy.NEVER_CYCLES


@dataclass(frozen=True)
class AddNode:
    label: str


@dataclass(frozen=True)
class InsertRow:
    f: Cell
    g: Cell


@dataclass(frozen=True)
class UpdateRow:
    row_id: int
    f: Cell
    g: Cell


@dataclass(frozen=True)
class DeleteRow:
    row_id: int


Mutation = Union[AddNode, InsertRow, UpdateRow, DeleteRow]


@dataclass(frozen=True)
class OldValues:
    f: Cell
    g: Cell

    @property
    def pair(self) -> Pair:
        return (self.f, self.g)


@dataclass(frozen=True)
class Change:
    kind: str  # "added" | "removed" | "replaced"
    row: Row
    previous: Optional[Row] = None

    def render(self) -> str:
        if self.kind == "added":
            return f"+{self.row.row_id}{format_pair(self.row.pair)}"
        if self.kind == "removed":
            return f"-{self.row.row_id}{format_pair(self.row.pair)}"
        return f"~{self.row.row_id}{format_pair(self.previous.pair)}->{format_pair(self.row.pair)}"


@dataclass(frozen=True)
class Accepted:
    changes: tuple[Change, ...] = ()
    row_id: Optional[int] = None
    node: Optional[NodeRef] = None
    accepted: bool = field(default=True, init=False)

    @property
    def generated(self) -> tuple[Change, ...]:
        return self.changes


@dataclass(frozen=True)
class Rejected:
    subtype: Subtype
    message: str
    accepted: bool = field(default=False, init=False)


Outcome = Union[Accepted, Rejected]


class PlanConflictError(ValueError):
    pass


# -- helpers ---------------------------------------------------------------


def _full(p: Pair) -> bool:
    return p[0] is not None and p[1] is not None


def _relevant(p: Pair) -> bool:
    """Non-null, off-diagonal pair: the only kind symmetry/connectivity act on."""
    return _full(p) and p[0] != p[1]


def _rev(p: Pair) -> Pair:
    return (p[1], p[0])


def _key(n: NodeRef):
    return n.id


def _reject(plan: EnforcementPlan, handler: Subtype, text: Optional[str] = None) -> Rejected:
    source = _source_of(plan, handler)
    adjective = text or handler.adjective
    return Rejected(source, f"Request rejected: f•g {adjective}!")


def _source_of(plan: EnforcementPlan, handler: Subtype) -> Subtype:
    """The declared subtype whose enforcement attached ``handler``."""
    for s in plan.enforced:
        if s.base is handler or (s.base is S.EQUIVALENCE and handler in (S.REFLEXIVITY, S.EUCLIDEANITY)):
            return s
    return handler


def _covers(p: Pair, tolerant: bool) -> list[NodeRef]:
    """Nodes whose reflexivity requirement is met by pair ``p``."""
    f, g = p
    if cell_eq(f, g):
        return [f]
    if tolerant:
        if f is not None and g is None:
            return [f]
        if f is None and g is not None:
            return [g]
    return []


def _covered(x: NodeRef, pairs, tolerant: bool) -> bool:
    if (x, x) in pairs:
        return True
    return tolerant and ((x, None) in pairs or (None, x) in pairs)


def _intransitive_clash(pairs: set, new: Pair, nodes) -> bool:
    x, z = new
    for y in nodes:
        if (x, y) in pairs and (y, z) in pairs:  # new closes a chain
            return True
        if (z, y) in pairs and (x, y) in pairs:  # new starts a chain
            return True
        if (y, x) in pairs and (y, z) in pairs:  # new continues a chain
            return True
    return False


def _ineuclidean_clash(pairs: set, new: Pair, nodes) -> bool:
    y, z = new
    for x in nodes:
        if (x, y) in pairs and (x, z) in pairs:  # new joins two siblings
            return True
        if (y, x) in pairs and (z, x) in pairs:  # new is a fork edge, (z, x) the join
            return True
        if (y, x) in pairs and (x, z) in pairs:  # new is a fork edge, itself the join target
            return True
    return False


def _undense(pairs: set, candidates, nodes) -> Optional[Pair]:
    for x, z in candidates:
        if not any((x, y) in pairs and (y, z) in pairs for y in nodes):
            return (x, z)
    return None


# -- guards ----------------------------------------------------------------


def validate_save(
    state: RelationState,
    plan: EnforcementPlan,
    row_id: Optional[int],
    old: Optional[OldValues],
    f: Cell,
    g: Cell,
    cfg: EngineConfig = EngineConfig(),
) -> Optional[Rejected]:
    """Run the before-insert / before-update guards for saving ``(f, g)``.

    ``row_id`` and ``old`` are ``None`` for an insert.
    """
    if old is not None and old.pair == (f, g):
        return None
    new = (f, g)
    ctx = state.image_excluding(row_id)
    post = ctx | {new}
    nodes = state.nodes
    o = old.pair if old is not None else None
    removed = o is not None and o not in ctx

    if plan.enforces(S.CONNECTIVITY) and old is not None and plan.declares(S.SYMMETRY):
        if not ((cell_eq(f, old.f) and g is None) or (f is None and cell_eq(g, old.g))):
            return _reject(plan, S.CONNECTIVITY, "connected and symmetric")

    if plan.enforces(S.REFLEXIVITY) and old is not None:
        tolerant = plan.null_tolerant_reflexivity
        for x in _covers(o, tolerant):
            if not _covered(x, post, tolerant):
                return _reject(plan, S.REFLEXIVITY)

    if plan.enforces(S.NULL_IDENTITY) and _full(new) and f != g:
        return _reject(plan, S.NULL_IDENTITY)

    if plan.enforces(S.IRREFLEXIVITY) and cell_eq(f, g):
        return _reject(plan, S.IRREFLEXIVITY)

    if plan.enforces(S.ASYMMETRY) and _full(new) and (f == g or (g, f) in ctx):
        return _reject(plan, S.ASYMMETRY)

    if plan.enforces(S.TRANSITIVITY) and removed and _full(o):
        if any((o[0], y) in ctx and (y, o[1]) in ctx for y in nodes):
            return _reject(plan, S.TRANSITIVITY)

    if plan.enforces(S.INTRANSITIVITY) and _full(new) and _intransitive_clash(post, new, nodes):
        return _reject(plan, S.INTRANSITIVITY)

    if plan.enforces(S.EUCLIDEANITY) and removed and _full(o):
        if any((z, o[0]) in ctx and (z, o[1]) in ctx for z in nodes):
            return _reject(plan, S.EUCLIDEANITY)

    if plan.enforces(S.INEUCLIDEANITY) and _full(new) and _ineuclidean_clash(post, new, nodes):
        return _reject(plan, S.INEUCLIDEANITY)

    if plan.enforces(S.ACYCLICITY) and is_cycle(state, row_id, f, g, cfg.null_cycle_policy):
        return _reject(plan, S.ACYCLICITY)

    if plan.enforces(S.DENSITY):
        full_post = {p for p in post if _full(p)}
        if removed and _full(o):
            candidates = sorted(full_post, key=lambda p: (_key(p[0]), _key(p[1])))
        elif _full(new) and new not in ctx:
            candidates = [new]
        else:
            candidates = []
        if _undense(full_post, candidates, nodes):
            return _reject(plan, S.DENSITY)

    return None


def validate_delete(
    state: RelationState,
    plan: EnforcementPlan,
    row: Row,
    cfg: EngineConfig = EngineConfig(),
) -> Optional[Rejected]:
    ctx = state.image_excluding(row.row_id)
    o = row.pair
    removed = o not in ctx
    nodes = state.nodes

    if plan.enforces(S.CONNECTIVITY):
        if plan.declares(S.SYMMETRY):
            if o[0] is not None or o[1] is not None:
                return _reject(plan, S.CONNECTIVITY, "connected and symmetric")
        elif removed and _relevant(o) and _rev(o) not in ctx:
            return _reject(plan, S.CONNECTIVITY)

    if plan.enforces(S.REFLEXIVITY):
        tolerant = plan.null_tolerant_reflexivity
        for x in _covers(o, tolerant):
            if not _covered(x, ctx, tolerant):
                return _reject(plan, S.REFLEXIVITY)

    if plan.enforces(S.TRANSITIVITY) and removed and _full(o):
        if any((o[0], y) in ctx and (y, o[1]) in ctx for y in nodes):
            return _reject(plan, S.TRANSITIVITY)

    if plan.enforces(S.EUCLIDEANITY) and removed and _full(o):
        if any((z, o[0]) in ctx and (z, o[1]) in ctx for z in nodes):
            return _reject(plan, S.EUCLIDEANITY)

    if plan.enforces(S.DENSITY) and removed and _full(o):
        full_post = sorted((p for p in ctx if _full(p)), key=lambda p: (_key(p[0]), _key(p[1])))
        if _undense(set(full_post), full_post, nodes):
            return _reject(plan, S.DENSITY)

    return None


# -- propagation -----------------------------------------------------------


class _Propagator:
    def __init__(self, state: RelationState, plan: EnforcementPlan, cfg: EngineConfig):
        self.state = state
        self.plan = plan
        self.cfg = cfg
        self.changes: list[Change] = []

    @property
    def symmetric(self) -> bool:
        return self.plan.enforces(S.SYMMETRY) and not self.plan.declares(S.CONNECTIVITY)

    def add(self, pair: Pair) -> None:
        rid = self.state.insert_row_raw(*pair)
        self.changes.append(Change("added", self.state.row(rid)))

    def add_missing(self, pair: Pair) -> None:
        if self.state.pair_count(pair) == 0:
            self.add(pair)

    def remove(self, row: Row) -> None:
        self.state.delete_row_raw(row.row_id)
        self.changes.append(Change("removed", row))

    def replace(self, row: Row, pair: Pair) -> None:
        self.state.update_row_raw(row.row_id, *pair)
        self.changes.append(Change("replaced", self.state.row(row.row_id), row))

    def fresh_pairs(self) -> list[Pair]:
        return [c.row.pair for c in self.changes if c.kind != "removed"]

    def drop_counterpart(self, o: Pair, new: Optional[Pair], skip_row: Optional[int]) -> None:
        """Remove the reverse of a pair that just left the image.

        When the saving row now holds a fresh off-diagonal pair, the first
        counterpart row is turned into that pair's reverse instead.
        """
        image = self.state.image()
        if not _relevant(o) or o in image:
            return
        carriers = [r for r in self.state.carriers(_rev(o)) if r.row_id != skip_row]
        if not carriers:
            return
        if new is not None and _relevant(new) and _rev(new) not in image:
            self.replace(carriers[0], _rev(new))
            carriers = carriers[1:]
        for r in carriers:
            self.remove(r)

    def close(self, seeds) -> None:
        """Add every pair the active generators require, until nothing changes."""
        sym = self.symmetric
        trans = self.plan.enforces(S.TRANSITIVITY)
        eucl = self.plan.enforces(S.EUCLIDEANITY)
        if not (sym or trans or eucl):
            return
        pairs = {p for p in self.state.image() if _full(p)}
        succ: dict[NodeRef, set] = {}
        pred: dict[NodeRef, set] = {}
        for u, v in pairs:
            succ.setdefault(u, set()).add(v)
            pred.setdefault(v, set()).add(u)

        work = deque(p for p in seeds if _full(p))
        while work:
            u, v = work.popleft()
            out: list[Pair] = []
            if sym and u != v:
                out.append((v, u))
            if trans:
                out += [(u, w) for w in sorted(succ.get(v, ()), key=_key)]
                out += [(t, v) for t in sorted(pred.get(u, ()), key=_key)]
            if eucl:
                for w in sorted(succ.get(u, ()), key=_key):
                    out += [(v, w), (w, v)]
            for p in out:
                if p in pairs:
                    continue
                self.add(p)
                pairs.add(p)
                succ.setdefault(p[0], set()).add(p[1])
                pred.setdefault(p[1], set()).add(p[0])
                work.append(p)


def on_node_added(
    state: RelationState,
    plan: EnforcementPlan,
    node: NodeRef,
    cfg: EngineConfig = EngineConfig(),
) -> list[Change]:
    prop = _Propagator(state, plan, cfg)
    if plan.enforces(S.CONNECTIVITY):
        for y in state.nodes:
            if y == node:
                continue
            image = state.image()
            if (node, y) not in image and (y, node) not in image:
                prop.add((node, y))
                if plan.declares(S.SYMMETRY):
                    prop.add_missing((y, node))
    if plan.enforces(S.REFLEXIVITY):
        prop.add_missing((node, node))
    if cfg.propagation is Propagation.FIXPOINT:
        prop.close(prop.fresh_pairs())
    return prop.changes


def propagate_after_save(
    state: RelationState,
    plan: EnforcementPlan,
    row: Row,
    old: Optional[OldValues],
    cfg: EngineConfig = EngineConfig(),
) -> list[Change]:
    """Tuple-generating follow-up after ``row`` was inserted or updated."""
    new = row.pair
    if old is not None and old.pair == new:
        return []
    prop = _Propagator(state, plan, cfg)

    if old is not None:
        o = old.pair
        if prop.symmetric:
            prop.drop_counterpart(o, new, row.row_id)
        if plan.enforces(S.CONNECTIVITY) and not plan.declares(S.SYMMETRY) and _relevant(o):
            image = state.image()
            if o not in image and _rev(o) not in image:
                prop.add(_rev(o))

    if cfg.propagation is Propagation.FIXPOINT:
        prop.close([new] + prop.fresh_pairs())
    else:
        _single_pass(prop, new, old)
    return prop.changes


def _single_pass(prop: _Propagator, new: Pair, old: Optional[OldValues]) -> None:
    """The handlers exactly as written for one saved row, without re-running."""
    state, plan = prop.state, prop.plan
    f, g = new
    if prop.symmetric and _relevant(new):
        prop.add_missing((g, f))
    if not _relevant(new):
        return
    image = state.image()
    if plan.enforces(S.TRANSITIVITY):
        if old is None:
            for z in sorted((b for a, b in image if a == g and b is not None and b != g), key=_key):
                prop.add_missing((f, z))
        elif cell_eq(old.f, old.g):
            for z in sorted((b for a, b in image if a == f and b is not None and b != f), key=_key):
                prop.add_missing((z, g))
            for z in sorted((a for a, b in image if b == g and a is not None and a != g), key=_key):
                prop.add_missing((f, z))
    if plan.enforces(S.EUCLIDEANITY) and old is None:
        for z in sorted((b for a, b in image if a == f and b is not None and b != f), key=_key):
            prop.add_missing((g, z))


def propagate_after_delete(
    state: RelationState,
    plan: EnforcementPlan,
    old: OldValues,
    cfg: EngineConfig = EngineConfig(),
) -> list[Change]:
    prop = _Propagator(state, plan, cfg)
    if prop.symmetric:
        prop.drop_counterpart(old.pair, None, None)
    return prop.changes


# -- entry point -----------------------------------------------------------


def apply(
    state: RelationState,
    plan: EnforcementPlan,
    m: Mutation,
    cfg: EngineConfig = EngineConfig(),
) -> Outcome:
    """Validate, perform and propagate one mutation.

    Unknown rows or nodes raise before any guard runs; a rejection leaves
    ``state`` untouched.
    """
    if plan.has_conflicts:
        raise PlanConflictError("plan has conflicting constraints")

    if isinstance(m, AddNode):
        node = state.add_node(m.label)
        return Accepted(tuple(on_node_added(state, plan, node, cfg)), node=node)

    if isinstance(m, InsertRow):
        state.check_cells(m.f, m.g)
        rejection = validate_save(state, plan, None, None, m.f, m.g, cfg)
        if rejection:
            return rejection
        rid = state.insert_row_raw(m.f, m.g)
        changes = propagate_after_save(state, plan, state.row(rid), None, cfg)
        return Accepted(tuple(changes), row_id=rid)

    if isinstance(m, UpdateRow):
        row = state.row(m.row_id)
        state.check_cells(m.f, m.g)
        old = OldValues(row.f, row.g)
        rejection = validate_save(state, plan, row.row_id, old, m.f, m.g, cfg)
        if rejection:
            return rejection
        state.update_row_raw(row.row_id, m.f, m.g)
        changes = propagate_after_save(state, plan, state.row(row.row_id), old, cfg)
        return Accepted(tuple(changes), row_id=row.row_id)

    if isinstance(m, DeleteRow):
        row = state.row(m.row_id)
        rejection = validate_delete(state, plan, row, cfg)
        if rejection:
            return rejection
        state.delete_row_raw(row.row_id)
        changes = propagate_after_delete(state, plan, OldValues(row.f, row.g), cfg)
        return Accepted(tuple(changes), row_id=row.row_id)

    raise TypeError(f"not a mutation: {m!r}")


class Engine:
    """A state, a fixed plan and a config behind one lock."""

    def __init__(
        self,
        plan: EnforcementPlan,
        state: Optional[RelationState] = None,
        config: EngineConfig = EngineConfig(),
    ):
        if plan.has_conflicts:
            raise PlanConflictError("plan has conflicting constraints")
        self.plan = plan
        self.state = state if state is not None else RelationState()
        self.config = config
        self._lock = threading.Lock()

    def apply(self, m: Mutation) -> Outcome:
        with self._lock:
            return apply(self.state, self.plan, m, self.config)

    def snapshot(self) -> RelationState:
        with self._lock:
            return self.state.copy()
