"""Import-by-query support: the oracle query abstraction, an EL-style
completion backend for external ontologies, axiom shifting between the
knowledge base and the oracle, oracle compilation into a plain KB, and
the single-atom policy transform.

An oracle answers queries of the shape  A1 ⊓ … ⊓ An ⊑ B  and
A1 ⊓ … ⊓ An ⊑ ⊥ (rhs None).  Answers must be monotone in the lhs and
deterministic; both built-in backends are immutable after construction
and safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (ClosureIndex, Disjoint, FullConcept, Functional,
                    Inclusion, KnowledgeBase, Range, SignatureError,
                    SimpleConcept, as_full, sorted_restrictions)


class OracleError(RuntimeError):
    """An oracle backend failed to answer (distinct from a negative answer)."""


# ---------------------------------------------------------------------------
# External ontology axioms (EL-style fragment)


@dataclass(frozen=True, order=True)
class Sub:
    """A1 ⊓ … ⊓ An ⊑ B (lhs sorted, non-empty)."""
    lhs: tuple
    sup: str

    @staticmethod
    def of(lhs, sup: str) -> "Sub":
        lhs = (lhs,) if isinstance(lhs, str) else tuple(sorted(set(lhs)))
        if not lhs:
            raise ValueError("inclusion needs a non-empty left-hand side")
        return Sub(lhs, sup)


@dataclass(frozen=True, order=True)
class SubEx:
    """A ⊑ ∃role.B."""
    sub: str
    role: str
    filler: str


@dataclass(frozen=True, order=True)
class ExSub:
    """∃role.A ⊑ B."""
    role: str
    filler: str
    sup: str


@dataclass(frozen=True, order=True)
class ODisjoint:
    a: str
    b: str


@dataclass(frozen=True, order=True)
class Definition:
    """name ≡ A1 ⊓ … ⊓ An (emitted by the single-atom transform)."""
    name: str
    parts: tuple

    @staticmethod
    def of(name: str, parts) -> "Definition":
        return Definition(name, tuple(sorted(set(parts))))


_AXIOM_KINDS = (Sub, SubEx, ExSub, ODisjoint, Definition)


@dataclass(frozen=True)
class ExternalOntology:
    axioms: frozenset = frozenset()

    def __post_init__(self):
        bad = [ax for ax in self.axioms if not isinstance(ax, _AXIOM_KINDS)]
        if bad:
            raise ValueError(f"unsupported ontology axioms: {bad}")

    def __hash__(self):
        return hash(self.axioms)

    @staticmethod
    def of(*axioms) -> "ExternalOntology":
        return ExternalOntology(frozenset(axioms))

    def union(self, other: "ExternalOntology") -> "ExternalOntology":
        return ExternalOntology(self.axioms | other.axioms)

    @property
    def concept_names(self) -> frozenset:
        out = set()
        for ax in self.axioms:
            if isinstance(ax, Sub):
                out.update(ax.lhs)
                out.add(ax.sup)
            elif isinstance(ax, SubEx):
                out.add(ax.sub)
                out.add(ax.filler)
            elif isinstance(ax, ExSub):
                out.add(ax.filler)
                out.add(ax.sup)
            elif isinstance(ax, ODisjoint):
                out.add(ax.a)
                out.add(ax.b)
            elif isinstance(ax, Definition):
                out.add(ax.name)
                out.update(ax.parts)
        return frozenset(out)

    @property
    def role_names(self) -> frozenset:
        return frozenset(ax.role for ax in self.axioms
                         if isinstance(ax, (SubEx, ExSub)))

    def sorted_axioms(self):
        order = {Sub: 0, Definition: 1, SubEx: 2, ExSub: 3, ODisjoint: 4}
        return sorted(self.axioms, key=lambda ax: (order[type(ax)], ax))


EMPTY_ONTOLOGY = ExternalOntology()


# ---------------------------------------------------------------------------
# Backends


class SaturationOracle:
    """Answers oracle queries by completion-rule saturation.

    Consequences are precomputed per concept name (subsumers and
    inconsistency); conjunction queries run a small saturation seeded
    with the query names, reusing the per-name results for existential
    successors.
    """

    concurrent_safe = True

    def __init__(self, onto: ExternalOntology):
        self.onto = onto
        self.concept_names = onto.concept_names
        self.role_names = onto.role_names
        self._subs = [ax for ax in onto.axioms if isinstance(ax, Sub)]
        self._defs = [ax for ax in onto.axioms if isinstance(ax, Definition)]
        self._subex = [ax for ax in onto.axioms if isinstance(ax, SubEx)]
        self._exsub = [ax for ax in onto.axioms if isinstance(ax, ExSub)]
        self._disj = set()
        for ax in onto.axioms:
            if isinstance(ax, ODisjoint):
                self._disj.add((ax.a, ax.b))
                self._disj.add((ax.b, ax.a))
        self._cl = {}    # name -> frozenset of subsumer names
        self._bot = {}   # name -> bool
        self._saturate_names()
        self._memo = {}

    def _saturate_names(self) -> None:
        cl = {n: {n} for n in self.concept_names}
        bot = {n: False for n in self.concept_names}
        changed = True
        while changed:
            changed = False
            for n in self.concept_names:
                s, b = self._close(set(cl[n]), cl, bot)
                if s != cl[n] or b != bot[n]:
                    cl[n], bot[n] = s, b
                    changed = True
        self._cl = {n: frozenset(s) for n, s in cl.items()}
        self._bot = bot

    def _close(self, s: set, cl, bot) -> tuple:
        """One node's closure under the completion rules, using the
        current per-name tables for existential successors."""
        is_bot = False
        changed = True
        while changed:
            changed = False
            for ax in self._subs:
                if ax.sup not in s and all(a in s for a in ax.lhs):
                    s.add(ax.sup)
                    changed = True
            for ax in self._defs:
                if ax.name in s and not all(p in s for p in ax.parts):
                    s.update(ax.parts)
                    changed = True
                if ax.name not in s and all(p in s for p in ax.parts):
                    s.add(ax.name)
                    changed = True
            succs = {(ax.role, ax.filler) for ax in self._subex if ax.sub in s}
            for ax in self._exsub:
                if ax.sup not in s and any(
                        r == ax.role and ax.filler in cl.get(b, {b})
                        for r, b in succs):
                    s.add(ax.sup)
                    changed = True
            if not is_bot:
                if any((a, b) in self._disj for a in s for b in s):
                    is_bot = True
                elif any(bot.get(a, False) for a in s):
                    is_bot = True
                elif any(bot.get(b, False) for _, b in succs):
                    is_bot = True
        return s, is_bot

    def decide(self, lhs, rhs: str | None) -> bool:
        lhs = frozenset(lhs)
        if not lhs:
            raise OracleError("oracle query needs a non-empty lhs")
        key = (lhs, rhs)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        s, is_bot = self._close(set(lhs), self._cl, self._bot)
        ans = is_bot if rhs is None else (is_bot or rhs in s)
        self._memo[key] = ans
        return ans


class ClosureOracle:
    """Wraps a plain PL knowledge base (its inclusion and disjointness
    axioms) as an oracle backend."""

    concurrent_safe = True

    def __init__(self, kb: KnowledgeBase):
        self.idx = ClosureIndex(kb)
        self.concept_names = kb.concept_names
        self.role_names = frozenset()

    def decide(self, lhs, rhs: str | None) -> bool:
        lhs = frozenset(lhs)
        if not lhs:
            raise OracleError("oracle query needs a non-empty lhs")
        if self.idx.conj_inconsistent(lhs):
            return True
        if rhs is None:
            return False
        return any(self.idx.is_subclass(a, rhs) for a in lhs)


# ---------------------------------------------------------------------------
# Axiom shifting and compilation


def _check_shared_signature(k: KnowledgeBase, o: ExternalOntology) -> None:
    shared_roles = (k.role_names | frozenset(
        ax.name for ax in k.axioms if isinstance(ax, Functional))) & (
            o.role_names | o.concept_names)
    if shared_roles:
        raise SignatureError(
            "KB roles/properties may not appear in the oracle signature: "
            f"{sorted(shared_roles)}")
    shared = k.concept_names & o.role_names
    if shared:
        raise SignatureError(
            f"KB concept names used as oracle roles: {sorted(shared)}")


def shift_axioms(k: KnowledgeBase, o: ExternalOntology):
    """Partition reasoning work: the KB keeps only range and
    functionality axioms; its inclusions and disjointness move into the
    oracle ontology."""
    _check_shared_signature(k, o)
    k_minus = []
    shifted = []
    for ax in k.axioms:
        if isinstance(ax, (Range, Functional)):
            k_minus.append(ax)
        elif isinstance(ax, Inclusion):
            shifted.append(Sub.of(ax.sub, ax.sup))
        elif isinstance(ax, Disjoint):
            shifted.append(ODisjoint(*sorted((ax.a, ax.b))))
    return KnowledgeBase(frozenset(k_minus)), o.union(
        ExternalOntology(frozenset(shifted)))


def saturate(o: ExternalOntology) -> SaturationOracle:
    return SaturationOracle(o)


def compile_oracle(k: KnowledgeBase, o: ExternalOntology) -> KnowledgeBase:
    """Compile the oracle away: a plain PL knowledge base containing the
    range/functionality remainder, every positive name-to-name
    inclusion over the oracle signature, and a disjointness axiom for
    every name pair (a name may pair with itself) whose conjunction the
    oracle reports inconsistent."""
    k_minus, o_plus = shift_axioms(k, o)
    backend = SaturationOracle(o_plus)
    names = sorted(o_plus.concept_names)
    axioms = set(k_minus.axioms)
    for a in names:
        for b in backend._cl[a]:
            if b != a:
                axioms.add(Inclusion(a, b))
    for i, a in enumerate(names):
        for b in names[i:]:
            if backend.decide(frozenset((a, b)), None):
                axioms.add(Disjoint(*sorted((a, b))))
    return KnowledgeBase(frozenset(axioms))


# ---------------------------------------------------------------------------
# Single-atom transform


def single_atom_transform(policies, prefix: str = "_C"):
    """Replace every conjunction of two or more concept names (at any
    depth) by one fresh defined name; identical conjunction sets share
    a fresh name.  Returns the rewritten policies plus the ontology of
    definitions."""
    fresh = {}

    def fresh_name(atoms: frozenset) -> str:
        name = fresh.get(atoms)
        if name is None:
            name = f"{prefix}{len(fresh)}"
            fresh[atoms] = name
        return name

    def walk(sc: SimpleConcept) -> SimpleConcept:
        atoms = sc.atoms
        if len(atoms) >= 2:
            atoms = frozenset((fresh_name(atoms),))
        restrictions = frozenset(
            (r, walk(ch)) for r, ch in sorted_restrictions(sc))
        return SimpleConcept(atoms=atoms, bottom=sc.bottom,
                             constraints=sc.constraints,
                             restrictions=restrictions)

    out = []
    for p in policies:
        full = as_full(p)
        out.append(FullConcept(tuple(walk(d) for d in full.disjuncts)))
    o_star = ExternalOntology(frozenset(
        Definition.of(name, atoms) for atoms, name in fresh.items()))
    return out, o_star
