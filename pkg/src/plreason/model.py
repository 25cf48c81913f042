"""Core data model: policy concepts, knowledge-base axioms, and the
subclass/disjointness closure index shared by all reasoning code.

Concepts are immutable and hashable so they can serve as cache keys.
A simple concept is a conjunction of concept names (atoms), a bottom
flag, interval constraints on concrete properties, and existential
restrictions on roles; a full concept is a non-empty union of simple
concepts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


class SignatureError(ValueError):
    """A name is used in conflicting namespaces (role vs. property vs. concept)."""


@dataclass(frozen=True, order=True)
class Interval:
    lo: int
    hi: int

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


@dataclass(frozen=True)
class SimpleConcept:
    """A conjunction: atoms ⊓ bottom? ⊓ interval constraints ⊓ ∃-restrictions.

    Conjuncts are kept as sets, so ordering and repetition are irrelevant
    and structural equality coincides with conjunct-set equality.
    """

    atoms: frozenset = frozenset()
    bottom: bool = False
    constraints: frozenset = frozenset()      # of (property, Interval)
    restrictions: frozenset = frozenset()     # of (role, SimpleConcept)

    def __post_init__(self):
        # Precompute the hash; concepts are used heavily as cache keys.
        object.__setattr__(self, "_hash", hash(
            (self.atoms, self.bottom, self.constraints, self.restrictions)))

    def __hash__(self):
        return self._hash

    @property
    def is_bare_bottom(self) -> bool:
        return self.bottom and not (self.atoms or self.constraints or self.restrictions)

    @property
    def is_empty(self) -> bool:
        """True for the degenerate empty conjunction (no conjuncts at all)."""
        return not (self.bottom or self.atoms or self.constraints or self.restrictions)

    def meet(self, other: "SimpleConcept") -> "SimpleConcept":
        """Structural conjunction of two simple concepts."""
        return SimpleConcept(
            atoms=self.atoms | other.atoms,
            bottom=self.bottom or other.bottom,
            constraints=self.constraints | other.constraints,
            restrictions=self.restrictions | other.restrictions,
        )

    def sort_key(self):
        return struct_key(self)


BOTTOM = SimpleConcept(bottom=True)


def atom(name: str) -> SimpleConcept:
    return SimpleConcept(atoms=frozenset((name,)))


def conj(*parts: SimpleConcept) -> SimpleConcept:
    out = SimpleConcept()
    for p in parts:
        out = out.meet(p)
    return out


def has(prop: str, lo: int, hi: int) -> SimpleConcept:
    return SimpleConcept(constraints=frozenset(((prop, Interval(lo, hi)),)))


def exists(role: str, child: SimpleConcept) -> SimpleConcept:
    return SimpleConcept(restrictions=frozenset(((role, child),)))


def struct_key(c: SimpleConcept):
    """A canonical, order-defining structural key for simple concepts.

    Used wherever deterministic iteration over concept sets is required
    (serialization, fresh-name introduction, split output ordering).
    """
    return (
        c.bottom,
        tuple(sorted(c.atoms)),
        tuple(sorted((f, iv.lo, iv.hi) for f, iv in c.constraints)),
        tuple(sorted((r, struct_key(ch)) for r, ch in c.restrictions)),
    )


def sorted_restrictions(c: SimpleConcept):
    return sorted(c.restrictions, key=lambda rc: (rc[0], struct_key(rc[1])))


def sorted_constraints(c: SimpleConcept):
    return sorted(c.constraints, key=lambda fi: (fi[0], fi[1].lo, fi[1].hi))


@dataclass(frozen=True)
class FullConcept:
    """A union of simple concepts; at least one disjunct, order preserved."""

    disjuncts: tuple

    def __post_init__(self):
        if not self.disjuncts:
            raise ValueError("a full concept needs at least one disjunct")

    def __hash__(self):
        return hash(self.disjuncts)

    @staticmethod
    def of(*disjuncts: SimpleConcept) -> "FullConcept":
        return FullConcept(tuple(disjuncts))


def as_full(c) -> FullConcept:
    return c if isinstance(c, FullConcept) else FullConcept((c,))


# ---------------------------------------------------------------------------
# Axioms and knowledge bases


@dataclass(frozen=True, order=True)
class Inclusion:
    sub: str
    sup: str


@dataclass(frozen=True, order=True)
class Disjoint:
    a: str
    b: str


@dataclass(frozen=True, order=True)
class Functional:
    name: str  # a role or a concrete property


@dataclass(frozen=True, order=True)
class Range:
    role: str
    cls: str


@dataclass(frozen=True)
class KnowledgeBase:
    axioms: frozenset = frozenset()

    @staticmethod
    def of(*axioms) -> "KnowledgeBase":
        return KnowledgeBase(frozenset(axioms))

    def __hash__(self):
        return hash(self.axioms)

    @property
    def concept_names(self) -> frozenset:
        out = set()
        for ax in self.axioms:
            if isinstance(ax, Inclusion):
                out.add(ax.sub)
                out.add(ax.sup)
            elif isinstance(ax, Disjoint):
                out.add(ax.a)
                out.add(ax.b)
            elif isinstance(ax, Range):
                out.add(ax.cls)
        return frozenset(out)

    @property
    def role_names(self) -> frozenset:
        return frozenset(ax.role for ax in self.axioms if isinstance(ax, Range))

    def sorted_axioms(self):
        order = {Inclusion: 0, Disjoint: 1, Functional: 2, Range: 3}
        return sorted(self.axioms, key=lambda ax: (order[type(ax)], ax))


def concept_signature(c) -> tuple:
    """Collect (concept names, role names, property names) used in a concept."""
    names, roles, props = set(), set(), set()

    def walk(sc: SimpleConcept):
        names.update(sc.atoms)
        for f, _ in sc.constraints:
            props.add(f)
        for r, ch in sc.restrictions:
            roles.add(r)
            walk(ch)

    for d in as_full(c).disjuncts:
        walk(d)
    return frozenset(names), frozenset(roles), frozenset(props)


def check_namespaces(kb: KnowledgeBase, *concepts) -> None:
    """Reject tokens used both as a role and as a concrete property.

    Functional axioms are namespace-ambiguous on their own; roles are
    recognized from Range axioms and restrictions, properties from
    interval constraints.
    """
    roles = set(kb.role_names)
    props = set()
    for c in concepts:
        _, cr, cp = concept_signature(c)
        roles |= cr
        props |= cp
    clash = roles & props
    if clash:
        raise SignatureError(
            f"names used both as role and concrete property: {sorted(clash)}")


# ---------------------------------------------------------------------------
# Closure index


class ClosureIndex:
    """Precomputed reflexive-transitive subclass reachability plus
    disjointness, functionality, and range lookups over one KB."""

    def __init__(self, kb: KnowledgeBase):
        self.kb = kb
        succ = {}
        for ax in kb.axioms:
            if isinstance(ax, Inclusion):
                succ.setdefault(ax.sub, set()).add(ax.sup)
        names = set(kb.concept_names)
        self._up = {}
        for name in names:
            seen = {name}
            stack = [name]
            while stack:
                cur = stack.pop()
                for nxt in succ.get(cur, ()):
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            self._up[name] = frozenset(seen)

        raw_disj = {}
        for ax in kb.axioms:
            if isinstance(ax, Disjoint):
                raw_disj.setdefault(ax.a, set()).add(ax.b)
                raw_disj.setdefault(ax.b, set()).add(ax.a)
        # disj_exp(A) = every name directly disjoint from some superclass of A;
        # then disjoint(A, B) iff disj_exp(A) meets up(B).
        self._disj_exp = {}
        for name in names:
            exp = set()
            for sup in self._up[name]:
                exp |= raw_disj.get(sup, set())
            if exp:
                self._disj_exp[name] = frozenset(exp)

        self.functional = frozenset(
            ax.name for ax in kb.axioms if isinstance(ax, Functional))
        ranges = {}
        for ax in kb.axioms:
            if isinstance(ax, Range):
                ranges.setdefault(ax.role, set()).add(ax.cls)
        self.ranges = {r: tuple(sorted(cs)) for r, cs in ranges.items()}

    def up(self, name: str) -> frozenset:
        return self._up.get(name, frozenset((name,)))

    def is_subclass(self, a: str, b: str) -> bool:
        return a == b or b in self._up.get(a, ())

    def disjoint(self, a: str, b: str) -> bool:
        exp = self._disj_exp.get(a)
        return bool(exp) and not exp.isdisjoint(self.up(b))

    def conj_inconsistent(self, atoms) -> bool:
        """Rule-7 condition: some pair in the conjunction (a name may pair
        with itself) has disjoint superclasses."""
        atoms = list(atoms)
        for i, a in enumerate(atoms):
            for b in atoms[i:]:
                if self.disjoint(a, b):
                    return True
        return False


def build_closure(kb: KnowledgeBase) -> ClosureIndex:
    return ClosureIndex(kb)
