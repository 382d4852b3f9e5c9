"""The redundancy conditions as plain text, with a small independent evaluator.

Used to cross-check the planner's expression trees: the text is parsed with
'and' binding tighter than 'or' and evaluated against a property set.
"""

from __future__ import annotations

import re

from hbfp.constraints import Subtype as S

GUARD_TEXT = {
    S.CONNECTIVITY: "irreflexive and asymmetric or intransitive",
    S.REFLEXIVITY: "null-identical or irreflexive or asymmetric or intransitive or inEuclidean or acyclic",
    S.NULL_IDENTITY: "irreflexive or asymmetric or intransitive or inEuclidean or acyclic",
    S.IRREFLEXIVITY: "asymmetric or intransitive or Euclidean or inEuclidean or acyclic",
    S.SYMMETRY: "asymmetric or Euclidean or acyclic",
    S.ASYMMETRY: "symmetric or acyclic or (transitive or Euclidean) and (irreflexive or intransitive)",
    S.TRANSITIVITY: "intransitive or Euclidean or connected and symmetric",
    S.INTRANSITIVITY: "transitive or Euclidean or dense or inEuclidean and symmetric",
    S.EUCLIDEANITY: "inEuclidean or acyclic or connected and symmetric",
    S.INEUCLIDEANITY: "Euclidean or symmetric and intransitive",
    S.ACYCLICITY: "Euclidean or reflexive or null-identity or symmetric or asymmetric and transitive",
    S.EQUIVALENCE: "irreflexive or asymmetric or intransitive or inEuclidean or acyclic",
    S.DENSITY: "reflexive or Euclidean or symmetric and connected",
}

WORDS = {
    "connected": S.CONNECTIVITY,
    "reflexive": S.REFLEXIVITY,
    "null-identical": S.NULL_IDENTITY,
    "null-identity": S.NULL_IDENTITY,
    "irreflexive": S.IRREFLEXIVITY,
    "symmetric": S.SYMMETRY,
    "asymmetric": S.ASYMMETRY,
    "transitive": S.TRANSITIVITY,
    "intransitive": S.INTRANSITIVITY,
    "Euclidean": S.EUCLIDEANITY,
    "inEuclidean": S.INEUCLIDEANITY,
    "acyclic": S.ACYCLICITY,
    "dense": S.DENSITY,
}


def mentioned(text: str) -> set:
    return {WORDS[w] for w in re.findall(r"[\w-]+", text) if w in WORDS}


def evaluate(text: str, props) -> bool:
    """Recursive descent: or-list of and-lists of atoms or parenthesised groups."""
    tokens = re.findall(r"\(|\)|[\w-]+", text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        pos += 1
        return tokens[pos - 1]

    def atom():
        tok = take()
        if tok == "(":
            value = disjunction()
            assert take() == ")"
            return value
        return WORDS[tok] in props

    def conjunction():
        value = atom()
        while peek() == "and":
            take()
            value = atom() and value
        return value

    def disjunction():
        value = conjunction()
        while peek() == "or":
            take()
            value = conjunction() or value
        return value

    result = disjunction()
    assert pos == len(tokens)
    return result
