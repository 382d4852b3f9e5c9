"""Line-oriented scripts, their execution, and the dump format.

Script grammar (one command per line, ``#`` starts a comment)::

    constraint <subtype>
    node <label>
    insert <label|null> <label|null>
    update <row_id> <label|null> <label|null>
    delete <row_id>
    plan | check | closure | dump

Dump format::

    hbfp-dump 1 next_node=<n> next_row=<n>
    [constraints]
    <subtype>            (canonical order)
    [nodes]
    <id> <label>         (sorted by label)
    [rows]
    <row_id> <f> <g>     (sorted by row_id; cells are labels or null)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import oracle
from .constraints import Subtype, UnknownSubtype, canonical, conflicts, parse_subtype, plan
from .cycles import transitive_closure
from .engine import (
    AddNode,
    DeleteRow,
    EngineConfig,
    InsertRow,
    Rejected,
    UpdateRow,
    apply,
)
from .store import NodeRef, RelationState, Row, StoreError, format_cell, format_pair

__all__ = [
    "Command",
    "Script",
    "ParseError",
    "UnknownSubtypeError",
    "FormatError",
    "parse_script",
    "execute",
    "Transcript",
    "dump_state",
    "load_document",
    "load_state",
    "DUMP_HEADER",
]

DUMP_HEADER = "hbfp-dump 1"


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class FormatError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class UnknownSubtypeError(ParseError, UnknownSubtype):
    """An unknown subtype name in a ``constraint`` line."""


@dataclass(frozen=True)
class Command:
    verb: str
    args: tuple = ()
    line: int = 0


@dataclass(frozen=True)
class Script:
    commands: tuple[Command, ...]

    def __len__(self) -> int:
        return len(self.commands)


_ARITY = {
    "constraint": 1,
    "node": 1,
    "insert": 2,
    "update": 3,
    "delete": 1,
    "plan": 0,
    "check": 0,
    "closure": 0,
    "dump": 0,
}


def _row_id(token: str, line: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(line, f"row id must be an integer, got {token!r}") from None
    if value <= 0:
        raise ParseError(line, f"row id must be positive, got {value}")
    return value


def parse_script(text: str) -> Script:
    commands = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        verb, *args = body.split()
        if verb not in _ARITY:
            raise ParseError(lineno, f"unknown command {verb!r}")
        if len(args) != _ARITY[verb]:
            raise ParseError(lineno, f"{verb} takes {_ARITY[verb]} argument(s), got {len(args)}")
        if verb == "constraint":
            try:
                args = [parse_subtype(args[0])]
            except UnknownSubtype as e:
                raise UnknownSubtypeError(lineno, str(e)) from None
        elif verb == "update":
            args = [_row_id(args[0], lineno), args[1], args[2]]
        elif verb == "delete":
            args = [_row_id(args[0], lineno)]
        commands.append(Command(verb, tuple(args), lineno))
    return Script(tuple(commands))


# -- execution -------------------------------------------------------------


@dataclass
class Transcript:
    lines: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    exit_code: int = 0

    @property
    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)


class _PlumbingError(Exception):
    pass


class Session:
    """Runs commands against one state with one (eventually frozen) plan."""

    def __init__(
        self,
        state: Optional[RelationState] = None,
        constraints: Iterable[Subtype] = (),
        config: EngineConfig = EngineConfig(),
    ):
        self.state = state if state is not None else RelationState()
        self.declared: set[Subtype] = set(constraints)
        self.config = config
        self.frozen_plan = None

    def _cell(self, token: str):
        if token == "null":
            return None
        try:
            return self.state.node(token)
        except StoreError as e:
            raise _PlumbingError(str(e)) from None

    def _plan(self):
        if self.frozen_plan is None:
            p = plan(self.declared)
            if p.has_conflicts:
                reasons = "; ".join(
                    f"{'+'.join(map(str, c.subtypes))}: {c.reason}" for c in conflicts(self.declared)
                )
                raise _PlumbingError(f"conflicting constraints ({reasons})")
            self.frozen_plan = p
        return self.frozen_plan

    def run(self, cmd: Command, out: Transcript) -> None:
        verb, args = cmd.verb, cmd.args
        if verb == "constraint":
            if self.frozen_plan is not None:
                raise _PlumbingError("constraint declared after the first mutation")
            self.declared.add(args[0])
        elif verb == "plan":
            p = plan(self.declared)
            out.lines.extend(e.render() for e in p.entries)
        elif verb == "check":
            out.lines.extend(v.render() for v in oracle.holds_all(self.state, self.declared))
        elif verb == "closure":
            pairs = sorted(transitive_closure(self.state), key=lambda p: (p[0].label, p[1].label))
            out.lines.append("closure: " + " ".join(format_pair(p) for p in pairs))
        elif verb == "dump":
            out.lines.extend(dump_state(self.state, self.declared).splitlines())
        else:
            self._mutate(cmd, out)

    def _mutate(self, cmd: Command, out: Transcript) -> None:
        p = self._plan()
        verb, args = cmd.verb, cmd.args
        if verb == "node":
            m = AddNode(args[0])
        elif verb == "insert":
            m = InsertRow(self._cell(args[0]), self._cell(args[1]))
        elif verb == "update":
            m = UpdateRow(args[0], self._cell(args[1]), self._cell(args[2]))
        else:
            m = DeleteRow(args[0])
        try:
            outcome = apply(self.state, p, m, self.config)
        except StoreError as e:
            raise _PlumbingError(str(e)) from None
        if isinstance(outcome, Rejected):
            out.lines.append(outcome.message)
            out.exit_code = max(out.exit_code, 1)
            return
        generated = ", ".join(c.render() for c in outcome.changes)
        if verb == "node":
            out.lines.append(f"ok node={outcome.node.label} generated=[{generated}]")
        else:
            out.lines.append(f"ok row={outcome.row_id} generated=[{generated}]")


def execute(
    script: Script,
    state: Optional[RelationState] = None,
    cfg: EngineConfig = EngineConfig(),
    constraints: Iterable[Subtype] = (),
) -> tuple[Transcript, Session]:
    """Run ``script``; stops at the first plumbing error (exit code 2)."""
    session = Session(state, constraints, cfg)
    out = Transcript()
    for cmd in script.commands:
        try:
            session.run(cmd, out)
        except _PlumbingError as e:
            out.errors.append(f"line {cmd.line}: {e}")
            out.exit_code = 2
            break
    return out, session


# -- dump / load -----------------------------------------------------------


def dump_state(state: RelationState, constraints: Iterable[Subtype] = ()) -> str:
    lines = [f"{DUMP_HEADER} next_node={state.next_node_id} next_row={state.next_row_id}"]
    lines.append("[constraints]")
    lines.extend(str(s) for s in canonical(constraints))
    lines.append("[nodes]")
    lines.extend(f"{n.id} {n.label}" for n in sorted(state.nodes, key=lambda n: n.label))
    lines.append("[rows]")
    lines.extend(f"{r.row_id} {format_cell(r.f)} {format_cell(r.g)}" for r in state.rows)
    return "\n".join(lines) + "\n"


def _int_field(token: str, name: str, lineno: int) -> int:
    prefix = name + "="
    if not token.startswith(prefix):
        raise FormatError(lineno, f"expected {prefix}<int>")
    try:
        return int(token[len(prefix):])
    except ValueError:
        raise FormatError(lineno, f"bad integer in {token!r}") from None


def load_document(text: str) -> tuple[RelationState, frozenset[Subtype]]:
    """Parse a dump back into a state and its declared constraints."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError(1, "empty document")
    head = lines[0].split()
    if " ".join(head[:2]) != DUMP_HEADER or len(head) != 4:
        raise FormatError(1, f"expected header {DUMP_HEADER!r} with counters")
    next_node = _int_field(head[2], "next_node", 1)
    next_row = _int_field(head[3], "next_row", 1)

    sections = {"[constraints]": [], "[nodes]": [], "[rows]": []}
    order = list(sections)
    current = None
    seen = []
    for lineno, line in enumerate(lines[1:], start=2):
        if line in sections:
            if seen and order.index(line) <= order.index(seen[-1]) or line in seen:
                raise FormatError(lineno, f"section {line} out of order")
            seen.append(line)
            current = line
            continue
        if current is None:
            raise FormatError(lineno, "content before first section")
        sections[current].append((lineno, line))
    if seen != order:
        raise FormatError(len(lines), "missing section(s)")

    constraints = set()
    for lineno, line in sections["[constraints]"]:
        try:
            constraints.add(parse_subtype(line.strip()))
        except UnknownSubtype as e:
            raise FormatError(lineno, str(e)) from None

    nodes: dict[str, NodeRef] = {}
    for lineno, line in sections["[nodes]"]:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(lineno, "node line must be '<id> <label>'")
        try:
            nid = int(parts[0])
        except ValueError:
            raise FormatError(lineno, f"bad node id {parts[0]!r}") from None
        if parts[1] in nodes:
            raise FormatError(lineno, f"duplicate label {parts[1]!r}")
        nodes[parts[1]] = NodeRef(nid, parts[1])

    rows = []
    for lineno, line in sections["[rows]"]:
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(lineno, "row line must be '<row_id> <f> <g>'")
        try:
            rid = int(parts[0])
        except ValueError:
            raise FormatError(lineno, f"bad row id {parts[0]!r}") from None
        cells = []
        for token in parts[1:]:
            if token == "null":
                cells.append(None)
            elif token in nodes:
                cells.append(nodes[token])
            else:
                raise FormatError(lineno, f"unknown node {token!r}")
        rows.append(Row(rid, cells[0], cells[1]))

    try:
        state = RelationState.restore(nodes.values(), rows, next_node, next_row)
    except StoreError as e:
        raise FormatError(1, str(e)) from None
    return state, frozenset(constraints)


def load_state(text: str) -> RelationState:
    return load_document(text)[0]
