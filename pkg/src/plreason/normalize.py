"""Concept normalization: the rewrite rules that merge functional
restrictions and interval constraints, push role ranges into fillers,
and collapse contradictions to bottom.

Two modes share the machinery:

* plain mode works against a closure index over the full KB: interval
  constraints are merged only for functional properties, and a
  conjunction of names collapses when two of them reach directly
  disjoint superclasses;
* oracle mode works against the range/functionality remainder of the KB
  plus an oracle: interval constraints on the same property are always
  merged, and a conjunction of names collapses when the oracle reports
  it inconsistent.

Rules are applied in a fixed staged order (merges, then ranges, then
contradiction rules), which reaches a normal form in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (BOTTOM, ClosureIndex, FullConcept, Interval,
                    SimpleConcept, as_full)


@dataclass(frozen=True)
class Plain:
    idx: ClosureIndex

    merge_all_constraints = False

    def functional(self, name: str) -> bool:
        return name in self.idx.functional

    def ranges(self, role: str):
        return self.idx.ranges.get(role, ())

    def conj_inconsistent(self, atoms) -> bool:
        return bool(atoms) and self.idx.conj_inconsistent(atoms)


@dataclass(frozen=True)
class Ibq:
    k_minus: ClosureIndex
    oracle: object  # an OracleBackend

    merge_all_constraints = True

    def functional(self, name: str) -> bool:
        return name in self.k_minus.functional

    def ranges(self, role: str):
        return self.k_minus.ranges.get(role, ())

    def conj_inconsistent(self, atoms) -> bool:
        return bool(atoms) and self.oracle.decide(frozenset(atoms), None)


def _merge(mode, c: SimpleConcept) -> SimpleConcept:
    """Merge interval constraints (functional properties, or all of them
    in oracle mode) and functional-role restrictions, bottom-up."""
    by_prop = {}
    for f, iv in c.constraints:
        by_prop.setdefault(f, []).append(iv)
    constraints = set()
    for f, ivs in by_prop.items():
        if len(ivs) > 1 and (mode.merge_all_constraints or mode.functional(f)):
            lo = max(iv.lo for iv in ivs)
            hi = min(iv.hi for iv in ivs)
            constraints.add((f, Interval(lo, hi)))
        else:
            constraints.update((f, iv) for iv in ivs)

    by_role = {}
    for r, ch in c.restrictions:
        by_role.setdefault(r, []).append(ch)
    restrictions = set()
    for r, children in by_role.items():
        if len(children) > 1 and mode.functional(r):
            merged = children[0]
            for ch in children[1:]:
                merged = merged.meet(ch)
            restrictions.add((r, _merge(mode, merged)))
        else:
            restrictions.update((r, _merge(mode, ch)) for ch in children)

    return SimpleConcept(atoms=c.atoms, bottom=c.bottom,
                         constraints=frozenset(constraints),
                         restrictions=frozenset(restrictions))


def _apply_ranges(mode, c: SimpleConcept) -> SimpleConcept:
    """Add declared range classes to every role filler that does not
    already carry them (skipping bottom fillers)."""
    if not c.restrictions:
        return c
    restrictions = set()
    for r, ch in c.restrictions:
        rng = mode.ranges(r)
        if rng and not ch.bottom:
            missing = frozenset(a for a in rng if a not in ch.atoms)
            if missing:
                ch = SimpleConcept(atoms=ch.atoms | missing, bottom=ch.bottom,
                                   constraints=ch.constraints,
                                   restrictions=ch.restrictions)
        restrictions.add((r, _apply_ranges(mode, ch)))
    return SimpleConcept(atoms=c.atoms, bottom=c.bottom,
                         constraints=c.constraints,
                         restrictions=frozenset(restrictions))


def _inconsistent(mode, c: SimpleConcept) -> bool:
    """Contradiction scan: bottom conjuncts, empty intervals, and
    inconsistent name conjunctions anywhere in the concept."""
    if c.bottom:
        return True
    if any(iv.empty for _, iv in c.constraints):
        return True
    if mode.conj_inconsistent(c.atoms):
        return True
    return any(_inconsistent(mode, ch) for _, ch in c.restrictions)


def normalize_simple(mode, c: SimpleConcept) -> SimpleConcept:
    c = _merge(mode, c)
    c = _apply_ranges(mode, c)
    if _inconsistent(mode, c):
        return BOTTOM
    return c


def normalize_full(mode, c) -> FullConcept:
    c = as_full(c)
    return FullConcept(tuple(normalize_simple(mode, d) for d in c.disjuncts))


def is_satisfiable(mode, c) -> bool:
    """A full concept is satisfiable iff some disjunct survives rewriting."""
    return any(not normalize_simple(mode, d).bottom for d in as_full(c).disjuncts)
