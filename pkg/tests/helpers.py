"""Shared builders and random generators for the test suite."""

from __future__ import annotations

import random
from typing import Iterable, Optional

from hbfp.constraints import EnforcementPlan, Subtype, plan
from hbfp.engine import AddNode, DeleteRow, EngineConfig, InsertRow, UpdateRow, apply
from hbfp.store import RelationState

LABELS = "abcdefgh"


def build(labels: Iterable[str], pairs: Iterable[tuple] = ()) -> RelationState:
    """State with the given nodes and one raw row per pair (labels or None)."""
    state = RelationState()
    for label in labels:
        state.add_node(label)
    for f, g in pairs:
        state.insert_row_raw(cell(state, f), cell(state, g))
    return state


def cell(state: RelationState, label: Optional[str]):
    return None if label is None else state.node(label)


def labelled(pairs) -> set:
    """Project NodeRef pairs to label pairs (None stays None)."""
    return {tuple(None if c is None else c.label for c in p) for p in pairs}


def image_labels(state: RelationState) -> set:
    return labelled(state.image())


def random_mutation(rng: random.Random, state: RelationState, max_nodes: int, null_rate: float = 0.15):
    nodes = state.nodes
    rows = state.rows

    def pick():
        if not nodes or rng.random() < null_rate:
            return None
        return rng.choice(nodes)

    roll = rng.random()
    if len(nodes) < max_nodes and (len(nodes) < 2 or roll < 0.15):
        return AddNode(LABELS[len(nodes)])
    if rows and roll < 0.35:
        return DeleteRow(rng.choice(rows).row_id)
    if rows and roll < 0.55:
        return UpdateRow(rng.choice(rows).row_id, pick(), pick())
    return InsertRow(pick(), pick())


def random_run(
    rng: random.Random,
    p: EnforcementPlan,
    steps: int,
    max_nodes: int,
    cfg: EngineConfig = EngineConfig(),
    on_step=None,
) -> RelationState:
    """Drive a random script through the engine; ``on_step(state, m, outcome, before)``."""
    state = RelationState()
    for _ in range(steps):
        m = random_mutation(rng, state, max_nodes)
        before = state.copy() if on_step else None
        outcome = apply(state, p, m, cfg)
        if on_step:
            on_step(state, m, outcome, before)
    return state


def singleton(s: Subtype) -> EnforcementPlan:
    return plan({s})
