"""Interval safety and interval splitting.

A query lhs ⊑ rhs is interval safe when every lhs interval is either
contained in or disjoint from every rhs interval over the same
property; safe queries let the structural subsumption check treat each
interval atomically.

Two splitters rewrite the lhs into an equivalent union whose pieces are
safe with respect to the rhs:

* the naive splitter cuts an lhs interval at every rhs endpoint inside
  it, always emitting singletons at the cut points;
* the refined splitter classifies each rhs endpoint by whether it
  occurs only as a lower bound, only as an upper bound, or as both, and
  emits singletons only for both-role endpoints.

Unions introduced inside restrictions are lifted to the top level via
∃R.(C1 ⊔ C2) ≡ ∃R.C1 ⊔ ∃R.C2 and distributivity.
"""

from __future__ import annotations

import itertools

from .model import (FullConcept, Interval, SimpleConcept, as_full,
                    sorted_constraints, sorted_restrictions, struct_key)

LOWER, UPPER, BOTH = "lower", "upper", "both"


def _iter_constraints(c) -> list:
    """Every (property, interval) pair occurring anywhere in a concept."""
    out = []

    def walk(sc: SimpleConcept):
        out.extend(sc.constraints)
        for _, ch in sc.restrictions:
            walk(ch)

    for d in as_full(c).disjuncts:
        walk(d)
    return out


def is_interval_safe(c, d) -> bool:
    by_prop = {}
    for f, iv in _iter_constraints(d):
        by_prop.setdefault(f, []).append(iv)
    for f, iv in _iter_constraints(c):
        for div in by_prop.get(f, ()):
            if iv.overlaps(div) and not div.contains(iv):
                return False
    return True


def endpoint_profile(d, refined: bool) -> tuple:
    """Canonical description of the rhs endpoints a split depends on.

    A sorted tuple of (property, value, classification); the naive
    splitter ignores the classification, so it is pinned to "both"
    there to keep cache keys stable across splitters.
    """
    roles = {}
    for f, iv in _iter_constraints(d):
        roles.setdefault((f, iv.lo), set()).add(LOWER)
        roles.setdefault((f, iv.hi), set()).add(UPPER)
    out = []
    for (f, v), kinds in roles.items():
        cls = BOTH if (not refined or len(kinds) == 2) else next(iter(kinds))
        out.append((f, v, cls))
    return tuple(sorted(out))


def split_interval_naive(iv: Interval, cuts) -> list:
    """Cut [lo,hi] at the given endpoint values inside it, producing a
    singleton at the start and at every cut, per the interval
    normalization equation; empty pieces and duplicates are dropped."""
    if iv.empty:
        return []
    xs = sorted({x for x in cuts if iv.lo <= x <= iv.hi})
    seq = [iv.lo] + [x for x in xs if x != iv.lo]
    pieces = []
    for i, x in enumerate(seq):
        nxt = seq[i + 1] if i + 1 < len(seq) else iv.hi
        pieces.append(Interval(x, x))
        pieces.append(Interval(x + 1, nxt - 1))
    pieces.append(Interval(iv.hi, iv.hi))
    out = []
    for p in pieces:
        if not p.empty and p not in out:
            out.append(p)
    return sorted(out)


def split_interval_refined(iv: Interval, cuts) -> list:
    """Cut [lo,hi] using endpoint classifications: lower-only endpoints
    open a sub-interval, upper-only endpoints close one, and endpoints
    playing both roles become singletons."""
    out = []
    start = iv.lo
    for x, cls in sorted(cuts):
        if x < iv.lo or x > iv.hi:
            continue
        if cls == BOTH:
            if start <= x - 1:
                out.append(Interval(start, x - 1))
            out.append(Interval(x, x))
            start = x + 1
        elif cls == LOWER:
            if start <= x - 1:
                out.append(Interval(start, x - 1))
            start = max(start, x)
        else:  # UPPER
            if start <= x:
                out.append(Interval(start, x))
                start = x + 1
    if start <= iv.hi:
        out.append(Interval(start, iv.hi))
    return out


def split_with_profile(c, profile: tuple, refined: bool) -> FullConcept:
    """Split every constraint of c against the rhs endpoint profile and
    lift the introduced unions to the top level."""
    by_prop = {}
    for f, v, cls in profile:
        by_prop.setdefault(f, []).append((v, cls))
    memo = {}

    def choices(sc: SimpleConcept) -> list:
        """All alternatives for one simple concept, in canonical order."""
        if sc in memo:
            return memo[sc]
        if sc.bottom:
            # a conjunction containing ⊥ is ⊥; dropping the other
            # conjuncts keeps the result interval safe
            memo[sc] = [SimpleConcept(bottom=True)]
            return memo[sc]
        slot_options = []
        for f, iv in sorted_constraints(sc):
            cuts = by_prop.get(f, ())
            if refined:
                pieces = split_interval_refined(iv, cuts)
            else:
                pieces = split_interval_naive(iv, (v for v, _ in cuts))
            slot_options.append([(f, p) for p in pieces])
        rest_options = []
        for r, ch in sorted_restrictions(sc):
            rest_options.append([(r, alt) for alt in choices(ch)])
        if not any(not opts for opts in slot_options + rest_options):
            alts = []
            for combo in itertools.product(*slot_options, *rest_options):
                n = len(slot_options)
                alts.append(SimpleConcept(
                    atoms=sc.atoms, bottom=sc.bottom,
                    constraints=frozenset(combo[:n]),
                    restrictions=frozenset(combo[n:])))
        else:
            # A constraint with an empty interval splits into nothing;
            # the whole conjunct is unsatisfiable.
            alts = []
        memo[sc] = alts
        return alts

    out = []
    for disj in as_full(c).disjuncts:
        alts = choices(disj)
        out.extend(alts if alts else [SimpleConcept(bottom=True)])
    return FullConcept(tuple(out))


def split_naive(c, d) -> FullConcept:
    return split_with_profile(c, endpoint_profile(d, refined=False), refined=False)


def split_refined(c, d) -> FullConcept:
    return split_with_profile(c, endpoint_profile(d, refined=True), refined=True)
