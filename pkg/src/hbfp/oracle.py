"""Definitional checker for the eighteen subtypes.

Every property is evaluated by plain enumeration over the node set and the
relation image.  Nothing here shares code with the engine; it is the ground
truth the engine is tested against.

Pairs containing a null only take part where a definition names nulls (the
``null_*`` variants and null-identity).  When a property fails, the witness
is the first counterexample in label order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .constraints import Subtype
from .store import NodeRef, RelationState, format_cell

__all__ = ["PropertyVerdict", "holds", "holds_all", "check_image", "CHECKS"]


@dataclass(frozen=True)
class PropertyVerdict:
    subtype: Subtype
    holds: bool
    witness: Optional[tuple] = None

    def render(self) -> str:
        if self.holds:
            return f"{self.subtype}: OK"
        return f"{self.subtype}: FAIL witness=({','.join(format_cell(c) for c in self.witness)})"


class _Image:
    """Node set plus image with label-sorted lookups."""

    def __init__(self, nodes: Iterable[NodeRef], pairs: Iterable[tuple]):
        self.nodes = sorted(nodes, key=lambda n: n.label)
        self.pairs = set(pairs)
        self.full = sorted(
            (p for p in self.pairs if p[0] is not None and p[1] is not None),
            key=lambda p: (p[0].label, p[1].label),
        )
        self.succ: dict[NodeRef, list[NodeRef]] = {}
        for u, v in self.full:
            self.succ.setdefault(u, []).append(v)

    def has(self, u, v) -> bool:
        return (u, v) in self.pairs

    def covered(self, u, v) -> bool:
        """(u, v), (u, null) or (null, v) is present."""
        return (u, v) in self.pairs or (u, None) in self.pairs or (None, v) in self.pairs


def _connectivity(im: _Image):
    for i, x in enumerate(im.nodes):
        for y in im.nodes[i + 1:]:
            if not im.has(x, y) and not im.has(y, x):
                return (x, y)
    return None


def _reflexivity(im: _Image):
    for y in im.nodes:
        if not im.has(y, y):
            return (y, y)
    return None


def _null_reflexivity(im: _Image):
    for y in im.nodes:
        if not im.covered(y, y):
            return (y, y)
    return None


def _null_identity(im: _Image):
    for u, v in im.full:
        if u != v:
            return (u, v)
    return None


def _irreflexivity(im: _Image):
    for u, v in im.full:
        if u == v:
            return (u, v)
    return None


def _symmetry(im: _Image):
    for u, v in im.full:
        if not im.has(v, u):
            return (u, v)
    return None


def _null_symmetry(im: _Image):
    # verbatim clauses: (v, u), or (u, null), or (null, v)
    for u, v in im.full:
        if not (im.has(v, u) or im.has(u, None) or im.has(None, v)):
            return (u, v)
    return None


def _asymmetry(im: _Image):
    for u, v in im.full:
        if im.has(v, u):
            return (u, v)
    return None


def _transitivity(im: _Image):
    for u, v in im.full:
        for w in im.succ.get(v, ()):
            if not im.has(u, w):
                return (u, v, w)
    return None


def _null_transitivity(im: _Image):
    for u, v in im.full:
        for w in im.succ.get(v, ()):
            if not im.covered(u, w):
                return (u, v, w)
    return None


def _intransitivity(im: _Image):
    for u, v in im.full:
        for w in im.succ.get(v, ()):
            if im.has(u, w):
                return (u, v, w)
    return None


def _euclideanity(im: _Image):
    for u, v in im.full:
        for w in im.succ.get(u, ()):
            if not im.has(v, w):
                return (u, v, w)
    return None


def _null_euclideanity(im: _Image):
    for u, v in im.full:
        for w in im.succ.get(u, ()):
            if not im.covered(v, w):
                return (u, v, w)
    return None


def _ineuclideanity(im: _Image):
    for u, v in im.full:
        for w in im.succ.get(u, ()):
            if im.has(v, w):
                return (u, v, w)
    return None


def _equivalence(im: _Image):
    return _reflexivity(im) or _euclideanity(im)


def _null_equivalence(im: _Image):
    return _null_reflexivity(im) or _null_euclideanity(im)


def _acyclicity(im: _Image):
    # For each start node (label order), look for a path back to it through
    # nodes whose label is not smaller; the first hit is the smallest cycle start.
    for start in im.nodes:
        parent: dict[NodeRef, NodeRef] = {}
        stack = [start]
        seen = {start}
        while stack:
            x = stack.pop()
            for y in im.succ.get(x, ()):
                if y == start:
                    path = [x]
                    while path[-1] != start:
                        path.append(parent[path[-1]])
                    return tuple(reversed(path)) + (start,)
                if y.label > start.label and y not in seen:
                    seen.add(y)
                    parent[y] = x
                    stack.append(y)
    return None


def _density(im: _Image):
    for x, z in im.full:
        if not any(im.has(y, z) for y in im.succ.get(x, ())):
            return (x, z)
    return None


CHECKS: dict[Subtype, Callable[[_Image], Optional[tuple]]] = {
    Subtype.CONNECTIVITY: _connectivity,
    Subtype.REFLEXIVITY: _reflexivity,
    Subtype.NULL_REFLEXIVITY: _null_reflexivity,
    Subtype.NULL_IDENTITY: _null_identity,
    Subtype.IRREFLEXIVITY: _irreflexivity,
    Subtype.SYMMETRY: _symmetry,
    Subtype.NULL_SYMMETRY: _null_symmetry,
    Subtype.ASYMMETRY: _asymmetry,
    Subtype.TRANSITIVITY: _transitivity,
    Subtype.NULL_TRANSITIVITY: _null_transitivity,
    Subtype.INTRANSITIVITY: _intransitivity,
    Subtype.EUCLIDEANITY: _euclideanity,
    Subtype.NULL_EUCLIDEANITY: _null_euclideanity,
    Subtype.INEUCLIDEANITY: _ineuclideanity,
    Subtype.EQUIVALENCE: _equivalence,
    Subtype.NULL_EQUIVALENCE: _null_equivalence,
    Subtype.ACYCLICITY: _acyclicity,
    Subtype.DENSITY: _density,
}


def check_image(nodes: Iterable[NodeRef], pairs: Iterable[tuple], subtype: Subtype) -> PropertyVerdict:
    """Evaluate ``subtype`` on an explicit node set and image."""
    witness = CHECKS[subtype](_Image(nodes, pairs))
    return PropertyVerdict(subtype, witness is None, witness)


def holds(state: RelationState, subtype: Subtype) -> PropertyVerdict:
    return check_image(state.nodes, state.image(), subtype)


def holds_all(state: RelationState, subtypes: Iterable[Subtype]) -> list[PropertyVerdict]:
    subtypes = sorted(set(subtypes), key=lambda s: s.order)
    if not subtypes:
        return []
    im = _Image(state.nodes, state.image())
    out = []
    for s in subtypes:
        w = CHECKS[s](im)
        out.append(PropertyVerdict(s, w is None, w))
    return out
