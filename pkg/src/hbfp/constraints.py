"""Constraint subtypes, redundancy guards, conflicts and the enforcement planner.

Each declared subtype is either enforced, skipped as redundant (its guard
fires over the declared set) or marked as a conflict.  Guards are kept as
small boolean expression trees so they can be inspected and rendered.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

__all__ = [
    "Subtype",
    "Atom",
    "And",
    "Or",
    "Not",
    "Decision",
    "PlanEntry",
    "EnforcementPlan",
    "Conflict",
    "parse_subtype",
    "properties_of",
    "guard_for",
    "guard_table",
    "conflicts",
    "plan",
    "render_plan",
    "UnknownSubtype",
]


class UnknownSubtype(ValueError):
    pass


class Subtype(enum.Enum):
    CONNECTIVITY = "connectivity"
    REFLEXIVITY = "reflexivity"
    NULL_REFLEXIVITY = "null_reflexivity"
    NULL_IDENTITY = "null_identity"
    IRREFLEXIVITY = "irreflexivity"
    SYMMETRY = "symmetry"
    NULL_SYMMETRY = "null_symmetry"
    ASYMMETRY = "asymmetry"
    TRANSITIVITY = "transitivity"
    NULL_TRANSITIVITY = "null_transitivity"
    INTRANSITIVITY = "intransitivity"
    EUCLIDEANITY = "euclideanity"
    NULL_EUCLIDEANITY = "null_euclideanity"
    INEUCLIDEANITY = "ineuclideanity"
    EQUIVALENCE = "equivalence"
    NULL_EQUIVALENCE = "null_equivalence"
    ACYCLICITY = "acyclicity"
    DENSITY = "density"

    @property
    def order(self) -> int:
        return _ORDER[self]

    @property
    def base(self) -> "Subtype":
        """The base subtype a null variant shares its handlers and guard with."""
        return _BASE.get(self, self)

    @property
    def is_null_variant(self) -> bool:
        return self in _BASE

    @property
    def adjective(self) -> str:
        """Spelling used in rejection messages and guard rendering."""
        return _ADJECTIVE[self.base]

    def __str__(self) -> str:
        return self.value


S = Subtype
_ORDER = {s: i for i, s in enumerate(Subtype)}
_BASE = {
    S.NULL_REFLEXIVITY: S.REFLEXIVITY,
    S.NULL_SYMMETRY: S.SYMMETRY,
    S.NULL_TRANSITIVITY: S.TRANSITIVITY,
    S.NULL_EUCLIDEANITY: S.EUCLIDEANITY,
    S.NULL_EQUIVALENCE: S.EQUIVALENCE,
}
_ADJECTIVE = {
    S.CONNECTIVITY: "connected",
    S.REFLEXIVITY: "reflexive",
    S.NULL_IDENTITY: "null-identical",
    S.IRREFLEXIVITY: "irreflexive",
    S.SYMMETRY: "symmetric",
    S.ASYMMETRY: "asymmetric",
    S.TRANSITIVITY: "transitive",
    S.INTRANSITIVITY: "intransitive",
    S.EUCLIDEANITY: "Euclidean",
    S.INEUCLIDEANITY: "inEuclidean",
    S.EQUIVALENCE: "an equivalence",
    S.ACYCLICITY: "acyclic",
    S.DENSITY: "dense",
}


def parse_subtype(name: str) -> Subtype:
    try:
        return Subtype(name)
    except ValueError:
        raise UnknownSubtype(f"unknown subtype {name!r}") from None


def canonical(subtypes: Iterable[Subtype]) -> tuple[Subtype, ...]:
    return tuple(sorted(set(subtypes), key=lambda s: s.order))


def properties_of(declared: Iterable[Subtype]) -> frozenset[Subtype]:
    """Properties a declared set asserts: null variants count as their base."""
    return frozenset(s.base for s in declared)


# -- guard expressions -----------------------------------------------------


class Expr:
    def evaluate(self, props: frozenset[Subtype]) -> bool:
        raise NotImplementedError

    def atoms(self) -> frozenset[Subtype]:
        raise NotImplementedError


@dataclass(frozen=True)
class Atom(Expr):
    prop: Subtype

    def evaluate(self, props):
        return self.prop in props

    def atoms(self):
        return frozenset({self.prop})

    def __str__(self):
        return self.prop.adjective


@dataclass(frozen=True)
class And(Expr):
    items: tuple

    def evaluate(self, props):
        return all(e.evaluate(props) for e in self.items)

    def atoms(self):
        return frozenset().union(*(e.atoms() for e in self.items))

    def __str__(self):
        return " and ".join(f"({e})" if isinstance(e, Or) else str(e) for e in self.items)


@dataclass(frozen=True)
class Or(Expr):
    items: tuple

    def evaluate(self, props):
        return any(e.evaluate(props) for e in self.items)

    def atoms(self):
        return frozenset().union(*(e.atoms() for e in self.items))

    def __str__(self):
        return " or ".join(str(e) for e in self.items)


@dataclass(frozen=True)
class Not(Expr):
    item: Expr

    def evaluate(self, props):
        return not self.item.evaluate(props)

    def atoms(self):
        return self.item.atoms()

    def __str__(self):
        return f"not ({self.item})"


def _any(*items) -> Or:
    return Or(tuple(Atom(i) if isinstance(i, Subtype) else i for i in items))


def _all(*items) -> And:
    return And(tuple(Atom(i) if isinstance(i, Subtype) else i for i in items))


# Redundancy conditions; a subtype is enforced iff its condition is false.
# 'and' binds tighter than 'or'.
_REDUNDANT_WHEN: dict[Subtype, Or] = {
    S.CONNECTIVITY: _any(_all(S.IRREFLEXIVITY, S.ASYMMETRY), S.INTRANSITIVITY),
    S.REFLEXIVITY: _any(
        S.NULL_IDENTITY, S.IRREFLEXIVITY, S.ASYMMETRY, S.INTRANSITIVITY,
        S.INEUCLIDEANITY, S.ACYCLICITY,
    ),
    S.NULL_IDENTITY: _any(
        S.IRREFLEXIVITY, S.ASYMMETRY, S.INTRANSITIVITY, S.INEUCLIDEANITY, S.ACYCLICITY
    ),
    S.IRREFLEXIVITY: _any(
        S.ASYMMETRY, S.INTRANSITIVITY, S.EUCLIDEANITY, S.INEUCLIDEANITY, S.ACYCLICITY
    ),
    S.SYMMETRY: _any(S.ASYMMETRY, S.EUCLIDEANITY, S.ACYCLICITY),
    S.ASYMMETRY: _any(
        S.SYMMETRY,
        S.ACYCLICITY,
        _all(_any(S.TRANSITIVITY, S.EUCLIDEANITY), _any(S.IRREFLEXIVITY, S.INTRANSITIVITY)),
    ),
    S.TRANSITIVITY: _any(
        S.INTRANSITIVITY, S.EUCLIDEANITY, _all(S.CONNECTIVITY, S.SYMMETRY)
    ),
    S.INTRANSITIVITY: _any(
        S.TRANSITIVITY, S.EUCLIDEANITY, S.DENSITY, _all(S.INEUCLIDEANITY, S.SYMMETRY)
    ),
    S.EUCLIDEANITY: _any(S.INEUCLIDEANITY, S.ACYCLICITY, _all(S.CONNECTIVITY, S.SYMMETRY)),
    S.INEUCLIDEANITY: _any(S.EUCLIDEANITY, _all(S.SYMMETRY, S.INTRANSITIVITY)),
    S.ACYCLICITY: _any(
        S.EUCLIDEANITY, S.REFLEXIVITY, S.NULL_IDENTITY, S.SYMMETRY,
        _all(S.ASYMMETRY, S.TRANSITIVITY),
    ),
    S.EQUIVALENCE: _any(
        S.IRREFLEXIVITY, S.ASYMMETRY, S.INTRANSITIVITY, S.INEUCLIDEANITY, S.ACYCLICITY
    ),
    S.DENSITY: _any(S.REFLEXIVITY, S.EUCLIDEANITY, _all(S.SYMMETRY, S.CONNECTIVITY)),
}


def guard_for(subtype: Subtype) -> Not:
    """Enforcement guard: the subtype's code is attached iff this is true."""
    return Not(_REDUNDANT_WHEN[subtype.base])


def guard_table() -> list[tuple[Subtype, Not]]:
    """The thirteen guards, keyed by base subtype in canonical order."""
    return [(s, Not(e)) for s, e in sorted(_REDUNDANT_WHEN.items(), key=lambda kv: kv[0].order)]


# -- conflicts -------------------------------------------------------------


@dataclass(frozen=True)
class Conflict:
    subtypes: tuple[Subtype, ...]
    reason: str


_CONFLICT_TABLE: list[tuple[frozenset[Subtype], str]] = [
    (frozenset({S.REFLEXIVITY, S.IRREFLEXIVITY}), "reflexive vs irreflexive"),
    (frozenset({S.SYMMETRY, S.ASYMMETRY}), "symmetric vs asymmetric"),
    (frozenset({S.TRANSITIVITY, S.INTRANSITIVITY}), "transitive vs intransitive"),
    (frozenset({S.EUCLIDEANITY, S.INEUCLIDEANITY}), "Euclidean vs inEuclidean"),
    (frozenset({S.EUCLIDEANITY, S.ACYCLICITY}), "Euclidean excludes acyclic"),
    (frozenset({S.EUCLIDEANITY, S.ASYMMETRY}), "Euclidean excludes asymmetric"),
    (frozenset({S.EUCLIDEANITY, S.IRREFLEXIVITY}), "Euclidean excludes irreflexive"),
    (frozenset({S.EUCLIDEANITY, S.INTRANSITIVITY}), "Euclidean excludes intransitive"),
    (frozenset({S.ASYMMETRY, S.CONNECTIVITY}), "asymmetric excludes connected"),
    (frozenset({S.EQUIVALENCE, S.IRREFLEXIVITY}), "an equivalence is reflexive"),
    (frozenset({S.EQUIVALENCE, S.ASYMMETRY}), "an equivalence is symmetric"),
    (frozenset({S.EQUIVALENCE, S.INTRANSITIVITY}), "an equivalence is transitive"),
    (frozenset({S.EQUIVALENCE, S.INEUCLIDEANITY}), "an equivalence is Euclidean"),
    (frozenset({S.EQUIVALENCE, S.ACYCLICITY}), "an equivalence is reflexive"),
    (
        frozenset({S.INEUCLIDEANITY, S.SYMMETRY, S.CONNECTIVITY}),
        "symmetric inEuclidean excludes connected",
    ),
]


def conflicts(declared: Iterable[Subtype]) -> list[Conflict]:
    """Incompatible combinations present in ``declared`` (null variants count as base)."""
    declared = canonical(declared)
    out = []
    for needed, reason in _CONFLICT_TABLE:
        members = tuple(s for s in declared if s.base in needed)
        if {s.base for s in members} == needed:
            out.append(Conflict(members, reason))
    return out


# -- planning --------------------------------------------------------------


class Decision(enum.Enum):
    ENFORCE = "enforce"
    REDUNDANT = "redundant"
    CONFLICT = "conflict"


@dataclass(frozen=True)
class PlanEntry:
    subtype: Subtype
    decision: Decision
    reason: str = ""

    def render(self) -> str:
        if self.decision is Decision.ENFORCE:
            return f"{self.subtype}: enforce"
        return f"{self.subtype}: {self.decision.value}({self.reason})"


# Handler groups attached per enforced subtype.
_HANDLERS: dict[Subtype, tuple[Subtype, ...]] = {
    S.EQUIVALENCE: (S.REFLEXIVITY, S.EUCLIDEANITY),
}


@dataclass(frozen=True)
class EnforcementPlan:
    declared: frozenset[Subtype]
    entries: tuple[PlanEntry, ...]
    handlers: frozenset[Subtype] = field(default_factory=frozenset)
    null_tolerant_reflexivity: bool = False

    @property
    def properties(self) -> frozenset[Subtype]:
        return properties_of(self.declared)

    @property
    def has_conflicts(self) -> bool:
        return any(e.decision is Decision.CONFLICT for e in self.entries)

    @property
    def enforced(self) -> tuple[Subtype, ...]:
        return tuple(e.subtype for e in self.entries if e.decision is Decision.ENFORCE)

    def enforces(self, handler: Subtype) -> bool:
        return handler in self.handlers

    def declares(self, prop: Subtype) -> bool:
        """Whether the product is declared to have ``prop`` (null variants count)."""
        return prop in self.properties

    def entry(self, subtype: Subtype) -> PlanEntry:
        for e in self.entries:
            if e.subtype is subtype:
                return e
        raise KeyError(subtype)

    def render(self) -> str:
        return render_plan(self)


def _decide(subtype: Subtype, props: frozenset[Subtype]) -> PlanEntry:
    cond = _REDUNDANT_WHEN[subtype.base]
    fired = [e for e in cond.items if e.evaluate(props)]
    if not fired:
        return PlanEntry(subtype, Decision.ENFORCE)
    reason = " or ".join(str(e) for e in fired) + " ⇒ " + subtype.adjective
    return PlanEntry(subtype, Decision.REDUNDANT, reason)


def plan(declared: Iterable[Subtype], *, detect_conflicts: bool = True) -> EnforcementPlan:
    """Decide enforce / redundant / conflict for every declared subtype.

    With ``detect_conflicts=False`` only the redundancy guards are consulted,
    which is what the guard-conformance check exercises.
    """
    declared = canonical(declared)
    props = properties_of(declared)
    found = conflicts(declared) if detect_conflicts else []
    conflict_reason: dict[Subtype, str] = {}
    for c in found:
        for s in c.subtypes:
            conflict_reason.setdefault(s, c.reason)

    entries = []
    for s in declared:
        if s in conflict_reason:
            entries.append(PlanEntry(s, Decision.CONFLICT, conflict_reason[s]))
        else:
            entries.append(_decide(s, props))

    if found:
        return EnforcementPlan(frozenset(declared), tuple(entries))

    handlers: set[Subtype] = set()
    strict_reflexive = False
    for e in entries:
        if e.decision is not Decision.ENFORCE:
            continue
        groups = _HANDLERS.get(e.subtype.base, (e.subtype.base,))
        handlers.update(groups)
        if S.REFLEXIVITY in groups and not e.subtype.is_null_variant:
            strict_reflexive = True
    return EnforcementPlan(
        frozenset(declared),
        tuple(entries),
        frozenset(handlers),
        null_tolerant_reflexivity=S.REFLEXIVITY in handlers and not strict_reflexive,
    )


def render_plan(p: EnforcementPlan) -> str:
    return "\n".join(e.render() for e in p.entries)
