"""Level rankings and the unfounded-loop-breaking ranking formula.

A level ranking witnesses non-circular support: every true atom must have a
satisfied body whose positive (non-input) atoms rank strictly lower. The
ranking formula expresses the same condition with fresh difference-constraint
atoms over integer rank variables, one per ordered atom pair.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import AbstractSet, Mapping, Optional, Tuple

from .completion import body_formula
from .errors import (
    HeadsIntersectInput,
    OracleCapExceeded,
    PartialRanking,
    RankVarForIrregular,
)
from .formula import Atom, PropFormula, conj, disj, implies
from .lincon import LinearConstraint, LinExpr, Rel
from .program import ORACLE_CAP, AtomId, AtomKind, Program, Rule, heads

RANK_PREFIX = "__lr_"

LevelRanking = Mapping[AtomId, int]


def _body_satisfied(r: Rule, x: AbstractSet[AtomId]) -> bool:
    return r.pos <= x and not (r.neg & x) and r.dneg <= x


def check_level_ranking(p: Program, x: AbstractSet[AtomId], lr: LevelRanking) -> bool:
    """Every atom of x needs a satisfied body whose positive atoms all rank
    at least one below the atom itself."""
    missing = set(x) - set(lr)
    if missing:
        raise PartialRanking(f"unranked atoms: {sorted(a.name for a in missing)}")
    for a in x:
        if not any(
            _body_satisfied(r, x) and all(lr[a] - 1 >= lr[b] for b in r.pos)
            for r in p.rules
            if r.head == a
        ):
            return False
    return True


def check_input_level_ranking(
    p: Program, x: AbstractSet[AtomId], iota: AbstractSet[AtomId], lr: LevelRanking
) -> bool:
    """Ranking condition relative to an input vocabulary: only non-input atoms
    are ranked, and input atoms in a body never constrain the ranking."""
    if heads(p) & iota:
        raise HeadsIntersectInput(
            f"head atoms also appear in the input vocabulary: "
            f"{sorted(a.name for a in heads(p) & iota)}"
        )
    ranked = set(x) - set(iota)
    missing = ranked - set(lr)
    if missing:
        raise PartialRanking(f"unranked atoms: {sorted(a.name for a in missing)}")
    for a in ranked:
        if not any(
            _body_satisfied(r, x)
            and all(lr[a] - 1 >= lr[b] for b in r.pos - iota)
            for r in p.rules
            if r.head == a
        ):
            return False
    return True


def _stratify(
    p: Program, x: AbstractSet[AtomId], iota: AbstractSet[AtomId]
) -> Optional[dict[AtomId, int]]:
    """Layer the atoms of x (minus iota) bottom-up through their satisfied
    bodies; succeeds exactly when a ranking exists, and then returns one."""
    target = set(x) - set(iota)
    levels: dict[AtomId, int] = {}
    stage = 0
    while True:
        added = False
        for a in target - levels.keys():
            for r in p.rules:
                if r.head != a or not _body_satisfied(r, x):
                    continue
                support = r.pos - iota
                if support <= levels.keys() and all(levels[b] < stage for b in support):
                    levels[a] = stage
                    added = True
                    break
        if not added:
            break
        stage += 1
    if set(levels) == target:
        return levels
    return None


def exists_level_ranking(
    p: Program, x: AbstractSet[AtomId], cap: int = ORACLE_CAP
) -> bool:
    """Ranking existence, decided by bottom-up stratification rather than by
    enumerating candidate rankings. Values never need to exceed the size of x."""
    if len(x) > cap:
        raise OracleCapExceeded(len(x), cap)
    return _stratify(p, x, frozenset()) is not None


def exists_input_level_ranking(
    p: Program, x: AbstractSet[AtomId], iota: AbstractSet[AtomId], cap: int = ORACLE_CAP
) -> bool:
    if len(x) > cap:
        raise OracleCapExceeded(len(x), cap)
    if heads(p) & iota:
        raise HeadsIntersectInput(
            f"head atoms also appear in the input vocabulary: "
            f"{sorted(a.name for a in heads(p) & iota)}"
        )
    return _stratify(p, x, iota) is not None


def find_level_ranking(
    p: Program, x: AbstractSet[AtomId], iota: AbstractSet[AtomId] = frozenset()
) -> Optional[dict[AtomId, int]]:
    """A concrete witness ranking, or None when none exists."""
    return _stratify(p, x, iota)


def fresh_rank_var(a: AtomId, used: Optional[set[str]] = None) -> str:
    """Deterministic integer-variable name for an atom's rank. A collision
    after sanitization gets a numeric suffix in first-use order."""
    if a.kind is AtomKind.IRREGULAR:
        raise RankVarForIrregular(f"{a.name} is never ranked")
    name = RANK_PREFIX + re.sub(r"[^A-Za-z0-9_]", "_", a.name)
    if used is None:
        return name
    candidate, i = name, 0
    while candidate in used:
        i += 1
        candidate = f"{name}_{i}"
    used.add(candidate)
    return candidate


@dataclass(frozen=True)
class RankingFormula:
    """Conjunction of per-atom support implications, plus the fresh ranking
    atoms and the integer rank variables they live on."""

    formula: PropFormula
    ranking_atoms: Tuple[Tuple[AtomId, LinearConstraint], ...]
    rank_vars: frozenset[str]

    @property
    def gamma(self) -> dict[AtomId, LinearConstraint]:
        return dict(self.ranking_atoms)

    @property
    def atoms(self) -> frozenset[AtomId]:
        return frozenset(a for a, _ in self.ranking_atoms)


def build_ranking_formula(
    p: Program,
    iota: AbstractSet[AtomId],
    full: bool = False,
    vocab: Optional[AbstractSet[AtomId]] = None,
) -> RankingFormula:
    """For each atom, require some satisfied body whose positive non-input
    atoms rank strictly lower, phrased with one fresh constraint atom per
    ordered atom pair.

    By default atoms whose bodies all have an empty positive non-input part
    are skipped; their implications repeat the completion's support formula.
    With ``full=True`` every non-input vocabulary atom gets its implication.
    """
    if heads(p) & iota:
        raise HeadsIntersectInput(
            f"head atoms also appear in the input vocabulary: "
            f"{sorted(a.name for a in heads(p) & iota)}"
        )
    names = sorted(set(vocab) if vocab is not None else set(p.atoms))
    var_names: dict[AtomId, str] = {}
    used: set[str] = set()
    pair_atoms: dict[tuple[AtomId, AtomId], AtomId] = {}
    gamma: dict[AtomId, LinearConstraint] = {}

    def rank_var(a: AtomId) -> str:
        if a not in var_names:
            var_names[a] = fresh_rank_var(a, used)
        return var_names[a]

    def rank_atom(a: AtomId, b: AtomId) -> AtomId:
        if (a, b) not in pair_atoms:
            expr = LinExpr(
                ((rank_var(a), Fraction(1)), (rank_var(b), Fraction(-1)))
            )
            c = LinearConstraint(expr, Rel.GE, Fraction(1)).normalized()
            ra = AtomId(f"|{c}|", AtomKind.IRREGULAR)
            pair_atoms[(a, b)] = ra
            gamma[ra] = c
        return pair_atoms[(a, b)]

    conjuncts: list[PropFormula] = []
    for a in names:
        if a in iota:
            continue
        bodies = [r for r in p.rules if r.head == a]
        recursive = [r for r in bodies if r.pos - iota]
        flat = [r for r in bodies if not (r.pos - iota)]
        if not recursive and not full:
            continue
        choices: list[PropFormula] = []
        for r in recursive:
            if a in r.pos - iota:
                # a positive self-loop can never witness support: the pair
                # constraint would be the contradictory lr - 1 >= lr
                continue
            choices.append(
                conj(
                    [body_formula(r)]
                    + [Atom(rank_atom(a, b)) for b in sorted(r.pos - iota)]
                )
            )
        choices += [body_formula(r) for r in flat]
        conjuncts.append(implies(Atom(a), disj(choices)))

    rank_vars = frozenset(
        v for c in gamma.values() for v in c.variables
    )
    return RankingFormula(
        formula=conj(conjuncts),
        ranking_atoms=tuple(sorted(gamma.items(), key=lambda kv: kv[0].name)),
        rank_vars=rank_vars,
    )
