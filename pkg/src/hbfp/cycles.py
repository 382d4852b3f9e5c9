"""Cycle detection over the relation image by level-wise closure.

The closure is grown one path length at a time: level 1 holds every
non-null pair of the image (minus an excluded row), level ``k`` joins the
level ``k - 1`` endpoints with the graph's edges.  Entries already present
at an earlier level are dropped, so each level only carries new pairs and
the loop stops as soon as a level adds nothing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional

from .store import Cell, NodeRef, RelationState

__all__ = [
    "NullCyclePolicy",
    "ClosureEntry",
    "closure_entries",
    "is_cycle",
    "transitive_closure",
]


class NullCyclePolicy(enum.Enum):
    NEVER_CYCLES = "never_cycles"
    PAPER_LITERAL = "paper_literal"


@dataclass(frozen=True)
class ClosureEntry:
    level: int
    d: NodeRef
    a: NodeRef


def _edges(state: RelationState, excluded_row: Optional[int]) -> list[tuple[NodeRef, NodeRef]]:
    return [
        (r.f, r.g)
        for r in state.rows
        if r.row_id != excluded_row and r.f is not None and r.g is not None
    ]


def _levels(edges: Iterable[tuple[NodeRef, NodeRef]], target=None):
    """Grow the closure level by level.

    Returns ``(entries, found)`` where ``entries`` maps ``(d, a)`` to the
    level it was first reached at, and ``found`` tells whether ``target``
    showed up (the loop stops right there).
    """
    succ: dict[NodeRef, list[NodeRef]] = {}
    entries: dict[tuple, int] = {}
    for d, a in edges:
        if (d, a) not in entries:
            entries[(d, a)] = 1
            succ.setdefault(d, []).append(a)
    frontier = list(entries)
    level = 2
    # each pass either adds at least one new (d, a) or stops
    while frontier:
        fresh = []
        for d, a in frontier:
            for b in succ.get(a, ()):
                if (d, b) not in entries:
                    entries[(d, b)] = level
                    fresh.append((d, b))
        if target is not None and target in entries:
            return entries, True
        frontier = fresh
        level += 1
    return entries, False


def closure_entries(state: RelationState, excluded_row: Optional[int] = None) -> list[ClosureEntry]:
    entries, _ = _levels(_edges(state, excluded_row))
    return [ClosureEntry(lvl, d, a) for (d, a), lvl in entries.items()]


def transitive_closure(state: RelationState, excluded_row: Optional[int] = None) -> frozenset:
    """Transitive closure of the non-null image pairs, ignoring ``excluded_row``."""
    entries, _ = _levels(_edges(state, excluded_row))
    return frozenset(entries)


def is_cycle(
    state: RelationState,
    excluded_row: Optional[int],
    u: Cell,
    v: Cell,
    policy: NullCyclePolicy = NullCyclePolicy.NEVER_CYCLES,
) -> bool:
    """Whether saving ``(u, v)`` on ``excluded_row`` closes a cycle.

    ``excluded_row`` is the row being saved (``None`` for an insert); its
    current value does not take part in the search.
    """
    if u is None or v is None:
        return policy is NullCyclePolicy.PAPER_LITERAL
    if u == v:
        return True
    edges = _edges(state, excluded_row)
    if (v, u) in edges:
        return True
    _, found = _levels(edges, target=(v, u))
    return found
