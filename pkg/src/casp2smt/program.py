"""Ground-program representation and exact stable-model semantics.

This module is the semantics oracle of the package: answer sets are computed
directly from the definition (reduct plus least fixpoint of the positive
remainder), with exhaustive candidate enumeration capped at
:data:`ORACLE_CAP` atoms.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import AbstractSet, Iterable, Mapping, Optional, Tuple

from .errors import HeadsIntersectInput, MissingGamma, OracleCapExceeded
from .lincon import LinearConstraint

ORACLE_CAP = 22


class AtomKind(enum.Enum):
    REGULAR = "regular"
    IRREGULAR = "irregular"


@dataclass(frozen=True)
class AtomId:
    """A propositional atom; irregular atoms stand proxy for constraints."""

    name: str
    kind: AtomKind

    def __lt__(self, other: "AtomId") -> bool:
        return self.name < other.name

    def __repr__(self) -> str:
        return self.name


def atom(name: str) -> AtomId:
    """Atom with its kind read off the name (bars mark irregular atoms)."""
    kind = AtomKind.IRREGULAR if name.startswith("|") else AtomKind.REGULAR
    return AtomId(name, kind)


@dataclass(frozen=True)
class Rule:
    """head <- pos, not neg, not not dneg.  A ``None`` head is the empty head."""

    head: Optional[AtomId]
    pos: frozenset[AtomId]
    neg: frozenset[AtomId]
    dneg: frozenset[AtomId]

    @property
    def is_fact(self) -> bool:
        return self.head is not None and not (self.pos or self.neg or self.dneg)


def rule(
    head: Optional[AtomId],
    pos: Iterable[AtomId] = (),
    neg: Iterable[AtomId] = (),
    dneg: Iterable[AtomId] = (),
) -> Rule:
    return Rule(head, frozenset(pos), frozenset(neg), frozenset(dneg))


@dataclass(frozen=True)
class Program:
    """Immutable ground program plus the constraint mapping of its irregular
    atoms. The mapping is injective on normalized constraints."""

    rules: Tuple[Rule, ...]
    gamma: Tuple[Tuple[AtomId, LinearConstraint], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))
        pairs = self.gamma.items() if isinstance(self.gamma, Mapping) else self.gamma
        items = tuple(sorted(pairs, key=lambda kv: kv[0].name))
        object.__setattr__(self, "gamma", items)
        images = [c.normalized() for _, c in items]
        if len(set(images)) != len(images):
            raise ValueError("gamma must be injective on normalized constraints")
        known = {a for a, _ in items}
        for a in self.atoms:
            if a.kind is AtomKind.IRREGULAR and a not in known:
                raise MissingGamma(a.name)

    @cached_property
    def gamma_map(self) -> dict[AtomId, LinearConstraint]:
        return dict(self.gamma)

    @cached_property
    def atoms(self) -> Tuple[AtomId, ...]:
        """Atoms occurring in the rules, in first-occurrence order (head,
        then positive, negative, double-negated parts, each sorted)."""
        seen: dict[AtomId, None] = {}
        for r in self.rules:
            if r.head is not None:
                seen.setdefault(r.head)
            for part in (r.pos, r.neg, r.dneg):
                for a in sorted(part):
                    seen.setdefault(a)
        return tuple(seen)

    @cached_property
    def irregular_atoms(self) -> frozenset[AtomId]:
        return frozenset(a for a, _ in self.gamma)

    def constraint_of(self, a: AtomId) -> LinearConstraint:
        try:
            return self.gamma_map[a]
        except KeyError:
            raise MissingGamma(a.name) from None


def heads(p: Program) -> frozenset[AtomId]:
    """All nonempty heads."""
    return frozenset(r.head for r in p.rules if r.head is not None)


def satisfies_rule(x: AbstractSet[AtomId], r: Rule) -> bool:
    """Classical satisfaction of the rule as an implication; double negation
    collapses, so the body holds iff pos and dneg are in and neg is out."""
    body = r.pos <= x and not (r.neg & x) and r.dneg <= x
    return not body or (r.head is not None and r.head in x)


def satisfies_program(x: AbstractSet[AtomId], p: Program) -> bool:
    return all(satisfies_rule(x, r) for r in p.rules)


def reduct(p: Program, x: AbstractSet[AtomId]) -> Program:
    """Drop rules whose negative body part x falsifies; survivors keep head
    and positive body only."""
    kept = tuple(
        Rule(r.head, r.pos, frozenset(), frozenset())
        for r in p.rules
        if not (r.neg & x) and r.dneg <= x
    )
    return Program(kept, p.gamma)


def _reduct_pairs(
    rules: Iterable[Rule], x: AbstractSet[AtomId]
) -> list[tuple[Optional[AtomId], frozenset[AtomId]]]:
    return [
        (r.head, r.pos) for r in rules if not (r.neg & x) and r.dneg <= x
    ]


def _least_model(
    pairs: Iterable[tuple[Optional[AtomId], frozenset[AtomId]]]
) -> tuple[frozenset[AtomId], bool]:
    """Least fixpoint of the one-step operator of a positive program.

    Returns the fixpoint and whether a denial fired along the way.
    """
    pairs = list(pairs)
    derived: set[AtomId] = set()
    bottom = False
    changed = True
    while changed:
        changed = False
        for head, pos in pairs:
            if pos <= derived:
                if head is None:
                    bottom = True
                elif head not in derived:
                    derived.add(head)
                    changed = True
    return frozenset(derived), bottom


def is_answer_set(p: Program, x: AbstractSet[AtomId]) -> bool:
    """x is an answer set iff it equals the least model of the reduct and no
    denial of the reduct fires."""
    fixpoint, bottom = _least_model(_reduct_pairs(p.rules, x))
    return not bottom and fixpoint == frozenset(x)


def _candidates(
    names: Tuple[AtomId, ...], cap: int
) -> Iterable[frozenset[AtomId]]:
    if len(names) > cap:
        raise OracleCapExceeded(len(names), cap)
    ordered = sorted(names)
    for bits in itertools.product((False, True), repeat=len(ordered)):
        yield frozenset(a for a, b in zip(ordered, bits) if b)


def enumerate_answer_sets(p: Program, cap: int = ORACLE_CAP) -> list[frozenset[AtomId]]:
    """All answer sets, in lexicographic order of atom-name bit vectors."""
    return [x for x in _candidates(p.atoms, cap) if is_answer_set(p, x)]


def facts(xs: Iterable[AtomId]) -> tuple[Rule, ...]:
    return tuple(rule(a) for a in sorted(xs))


def with_facts(p: Program, xs: Iterable[AtomId]) -> Program:
    return Program(p.rules + facts(xs), p.gamma)


def input_answer_sets(
    p: Program, iota: AbstractSet[AtomId], cap: int = ORACLE_CAP
) -> list[frozenset[AtomId]]:
    """All x over the program's atoms that are answer sets once x's input
    part is added back as facts."""
    if heads(p) & iota:
        raise HeadsIntersectInput(
            f"head atoms also appear in the input vocabulary: "
            f"{sorted(a.name for a in heads(p) & iota)}"
        )
    found = []
    for x in _candidates(p.atoms, cap):
        pairs = _reduct_pairs(p.rules, x) + [(a, frozenset()) for a in x & iota]
        fixpoint, bottom = _least_model(pairs)
        if not bottom and fixpoint == x:
            found.append(x)
    return found


@dataclass(frozen=True)
class DependencyGraph:
    vertices: frozenset[AtomId]
    edges: frozenset[tuple[AtomId, AtomId]]


def dependency_graph(p: Program) -> DependencyGraph:
    """Edges run from each nonempty head to the positive atoms of its body."""
    edges = {
        (r.head, b) for r in p.rules if r.head is not None for b in r.pos
    }
    return DependencyGraph(frozenset(p.atoms), frozenset(edges))


def is_tight(p: Program) -> bool:
    """True iff the positive dependency graph is acyclic."""
    graph = dependency_graph(p)
    succ: dict[AtomId, list[AtomId]] = {v: [] for v in graph.vertices}
    for a, b in graph.edges:
        succ[a].append(b)
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {v: WHITE for v in graph.vertices}
    for start in graph.vertices:
        if colour[start] != WHITE:
            continue
        stack: list[tuple[AtomId, Iterable[AtomId]]] = [(start, iter(succ[start]))]
        colour[start] = GREY
        while stack:
            node, children = stack[-1]
            advanced = False
            for child in children:
                if colour[child] == GREY:
                    return False
                if colour[child] == WHITE:
                    colour[child] = GREY
                    stack.append((child, iter(succ[child])))
                    advanced = True
                    break
            if not advanced:
                colour[node] = BLACK
                stack.pop()
    return True
