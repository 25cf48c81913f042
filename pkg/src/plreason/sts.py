"""Structural subsumption for elementary queries (simple, normalized,
interval-safe lhs and simple rhs).

The rhs is treated as a conjunction of parts, each of which must be
covered by the lhs:

* a bottom lhs subsumes into anything;
* an rhs atom needs an lhs atom reaching it through the subclass
  closure (plain mode) or a positive oracle answer for the conjunction
  of the lhs's top-level names (oracle mode);
* an rhs interval needs a contained lhs interval on the same property;
* an rhs restriction needs some lhs restriction on the same role whose
  filler structurally subsumes into the rhs filler (all candidates are
  tried; an lhs conjunct may serve several rhs conjuncts).
"""

from __future__ import annotations

from .model import ClosureIndex, SimpleConcept


def _sts(lhs: SimpleConcept, rhs: SimpleConcept, atom_covered) -> bool:
    if lhs.bottom:
        return True
    if rhs.bottom:
        return False
    for a in rhs.atoms:
        if not atom_covered(lhs, a):
            return False
    for f, iv in rhs.constraints:
        if not any(g == f and iv.contains(liv) for g, liv in lhs.constraints):
            return False
    for r, dch in rhs.restrictions:
        if not any(s == r and _sts(cch, dch, atom_covered)
                   for s, cch in lhs.restrictions):
            return False
    return True


def sts(idx: ClosureIndex, lhs: SimpleConcept, rhs: SimpleConcept) -> bool:
    def atom_covered(c: SimpleConcept, a: str) -> bool:
        return any(idx.is_subclass(a2, a) for a2 in c.atoms)

    return _sts(lhs, rhs, atom_covered)


def sts_oracle(oracle, lhs: SimpleConcept, rhs: SimpleConcept,
               memo: dict | None = None) -> bool:
    """Oracle-mode structural subsumption; oracle answers for
    (top-level-name-set, rhs atom) pairs are memoized across one query
    when a shared memo table is passed in."""
    if memo is None:
        memo = {}

    def atom_covered(c: SimpleConcept, a: str) -> bool:
        if not c.atoms:
            return False
        key = (c.atoms, a)
        hit = memo.get(key)
        if hit is None:
            hit = memo[key] = oracle.decide(c.atoms, a)
        return hit

    return _sts(lhs, rhs, atom_covered)
