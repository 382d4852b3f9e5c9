"""Enforcement of the eighteen dyadic constraints on a two-column relation."""

from .constraints import (
    Conflict,
    Decision,
    EnforcementPlan,
    PlanEntry,
    Subtype,
    UnknownSubtype,
    conflicts,
    guard_table,
    parse_subtype,
    plan,
)
from .cycles import NullCyclePolicy, is_cycle, transitive_closure
from .engine import (
    Accepted,
    AddNode,
    DeleteRow,
    Engine,
    EngineConfig,
    InsertRow,
    Propagation,
    Rejected,
    UpdateRow,
    apply,
)
from .oracle import PropertyVerdict, holds, holds_all
from .scriptio import dump_state, execute, load_document, load_state, parse_script
from .store import NodeRef, RelationState, Row

__version__ = "0.1.0"

__all__ = [
    "Accepted", "AddNode", "Conflict", "Decision", "DeleteRow", "Engine", "EngineConfig",
    "EnforcementPlan", "InsertRow", "NodeRef", "NullCyclePolicy", "PlanEntry", "Propagation",
    "PropertyVerdict", "Rejected", "RelationState", "Row", "Subtype", "UnknownSubtype",
    "UpdateRow", "apply", "conflicts", "dump_state", "execute", "guard_table", "holds",
    "holds_all", "is_cycle", "load_document", "load_state", "parse_script", "parse_subtype",
    "plan", "transitive_closure",
]
