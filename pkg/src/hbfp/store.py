"""In-memory two-column relation store.

A store holds a node set ``C`` and a row set ``D``.  Every row carries two
cells, ``f`` and ``g``, each of which is either a :class:`NodeRef` or ``None``
(the null marker).  The relation image is the set of ``(f, g)`` pairs
projected from the rows; duplicate rows collapse in the image.

The mutation primitives here are *raw*: they enforce referential integrity
only.  Constraint enforcement lives in :mod:`hbfp.engine`.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

__all__ = [
    "NodeRef",
    "Cell",
    "Pair",
    "Row",
    "RelationState",
    "StoreError",
    "DuplicateLabel",
    "InvalidLabel",
    "NodeReferenced",
    "UnknownNode",
    "UnknownRow",
    "cell_eq",
    "format_cell",
    "format_pair",
]

_LABEL_RE = re.compile(r"^[^\s=]+$")


class StoreError(Exception):
    pass


class DuplicateLabel(StoreError):
    pass


class InvalidLabel(StoreError):
    pass


class NodeReferenced(StoreError):
    def __init__(self, node: "NodeRef", row_ids: list[int]):
        self.node = node
        self.row_ids = row_ids
        super().__init__(f"node {node.label!r} is referenced by rows {row_ids}")


class UnknownNode(StoreError):
    pass


class UnknownRow(StoreError):
    pass


@dataclass(frozen=True, order=True, slots=True)
class NodeRef:
    id: int
    label: str

    # hand-written: these sit on the hot path of every pair lookup
    def __hash__(self) -> int:
        return hash(self.id)

    def __eq__(self, other) -> bool:
        if other.__class__ is not NodeRef:
            return NotImplemented
        return self.id == other.id and self.label == other.label

    def __str__(self) -> str:
        return self.label


Cell = Optional[NodeRef]
Pair = tuple  # (Cell, Cell)


@dataclass(frozen=True)
class Row:
    row_id: int
    f: Cell
    g: Cell

    @property
    def pair(self) -> Pair:
        return (self.f, self.g)


def cell_eq(a: Cell, b: Cell) -> bool:
    """Equality used by every guard: nulls never compare equal."""
    return a is not None and b is not None and a == b


def format_cell(c: Cell) -> str:
    return "null" if c is None else c.label


def format_pair(p: Pair) -> str:
    return f"({format_cell(p[0])},{format_cell(p[1])})"


class RelationState:
    """Node set, row set and the multiset of projected pairs."""

    def __init__(self) -> None:
        self._nodes: dict[int, NodeRef] = {}
        self._by_label: dict[str, NodeRef] = {}
        self._rows: dict[int, Row] = {}
        self._pair_counts: Counter = Counter()
        self.next_node_id = 1
        self.next_row_id = 1

    # -- queries ---------------------------------------------------------

    @property
    def nodes(self) -> list[NodeRef]:
        """Nodes in creation order."""
        return list(self._nodes.values())

    @property
    def rows(self) -> list[Row]:
        """Rows in row_id order."""
        return list(self._rows.values())

    def node(self, label: str) -> NodeRef:
        try:
            return self._by_label[label]
        except KeyError:
            raise UnknownNode(f"unknown node {label!r}") from None

    def has_node(self, node: NodeRef) -> bool:
        return self._nodes.get(node.id) == node

    def row(self, row_id: int) -> Row:
        try:
            return self._rows[row_id]
        except KeyError:
            raise UnknownRow(f"unknown row {row_id}") from None

    def image(self) -> frozenset:
        return frozenset(self._pair_counts)

    def image_excluding(self, row_id: Optional[int]) -> set:
        """Image of every row except ``row_id`` (all rows when ``None``)."""
        pairs = set(self._pair_counts)
        if row_id is not None and row_id in self._rows:
            p = self._rows[row_id].pair
            if self._pair_counts[p] == 1:
                pairs.discard(p)
        return pairs

    def pair_count(self, pair: Pair) -> int:
        return self._pair_counts.get(pair, 0)

    def carriers(self, pair: Pair) -> list[Row]:
        """Rows whose projection is ``pair``, lowest row_id first."""
        return [r for r in self._rows.values() if r.pair == pair]

    def rows_referencing(self, node: NodeRef) -> list[int]:
        return [r.row_id for r in self._rows.values() if r.f == node or r.g == node]

    def __len__(self) -> int:
        return len(self._rows)

    def __iter__(self) -> Iterator[Row]:
        return iter(self.rows)

    # -- raw mutations ---------------------------------------------------

    def add_node(self, label: str) -> NodeRef:
        if not isinstance(label, str) or not _LABEL_RE.match(label) or label == "null":
            raise InvalidLabel(f"invalid label {label!r}")
        if label in self._by_label:
            raise DuplicateLabel(f"duplicate label {label!r}")
        node = NodeRef(self.next_node_id, label)
        self.next_node_id += 1
        self._nodes[node.id] = node
        self._by_label[label] = node
        return node

    def remove_node(self, node: NodeRef) -> None:
        if not self.has_node(node):
            raise UnknownNode(f"unknown node {node!r}")
        refs = self.rows_referencing(node)
        if refs:
            raise NodeReferenced(node, refs)
        del self._nodes[node.id]
        del self._by_label[node.label]

    def insert_row_raw(self, f: Cell, g: Cell) -> int:
        self.check_cells(f, g)
        row = Row(self.next_row_id, f, g)
        self.next_row_id += 1
        self._rows[row.row_id] = row
        self._pair_counts[row.pair] += 1
        return row.row_id

    def update_row_raw(self, row_id: int, f: Cell, g: Cell) -> None:
        old = self.row(row_id)
        self.check_cells(f, g)
        self._drop_pair(old.pair)
        new = Row(row_id, f, g)
        self._rows[row_id] = new
        self._pair_counts[new.pair] += 1

    def delete_row_raw(self, row_id: int) -> None:
        old = self.row(row_id)
        del self._rows[row_id]
        self._drop_pair(old.pair)

    # -- copying ---------------------------------------------------------

    def copy(self) -> "RelationState":
        other = RelationState.__new__(RelationState)
        other._nodes = dict(self._nodes)
        other._by_label = dict(self._by_label)
        other._rows = dict(self._rows)
        other._pair_counts = Counter(self._pair_counts)
        other.next_node_id = self.next_node_id
        other.next_row_id = self.next_row_id
        return other

    snapshot = copy

    def fingerprint(self) -> tuple:
        """Hashable full description, used for atomicity comparisons."""
        return (
            tuple(self._nodes.values()),
            tuple(self._rows.values()),
            self.next_node_id,
            self.next_row_id,
        )

    @classmethod
    def restore(
        cls,
        nodes: Iterable[NodeRef],
        rows: Iterable[Row],
        next_node_id: int,
        next_row_id: int,
    ) -> "RelationState":
        """Rebuild a state from explicit ids (used by the dump loader)."""
        state = cls()
        for n in sorted(nodes, key=lambda n: n.id):
            if not _LABEL_RE.match(n.label) or n.label == "null":
                raise InvalidLabel(f"invalid label {n.label!r}")
            if n.label in state._by_label or n.id in state._nodes:
                raise DuplicateLabel(f"duplicate node {n.label!r}")
            state._nodes[n.id] = n
            state._by_label[n.label] = n
        for r in sorted(rows, key=lambda r: r.row_id):
            if r.row_id in state._rows:
                raise StoreError(f"duplicate row id {r.row_id}")
            state.check_cells(r.f, r.g)
            state._rows[r.row_id] = r
            state._pair_counts[r.pair] += 1
        if state._nodes and next_node_id <= max(state._nodes):
            raise StoreError("next node id must exceed every node id")
        if state._rows and next_row_id <= max(state._rows):
            raise StoreError("next row id must exceed every row id")
        state.next_node_id = next_node_id
        state.next_row_id = next_row_id
        return state

    # -- internals -------------------------------------------------------

    def check_cells(self, f: Cell, g: Cell) -> None:
        for c in (f, g):
            if c is not None and not self.has_node(c):
                raise UnknownNode(f"unknown node {c!r}")

    def _drop_pair(self, pair: Pair) -> None:
        self._pair_counts[pair] -= 1
        if self._pair_counts[pair] == 0:
            del self._pair_counts[pair]

    def __repr__(self) -> str:
        rows = ", ".join(f"{r.row_id}:{format_pair(r.pair)}" for r in self._rows.values())
        labels = ", ".join(n.label for n in self._nodes.values())
        return f"RelationState(C=[{labels}], D=[{rows}])"
