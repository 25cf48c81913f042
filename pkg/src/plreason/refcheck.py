"""Independent semantic reference implementations used as test oracles:
direct model checking over finite interpretations, axiom checking,
canonical-model construction, and a complete brute-force decision for
subsumption and satisfiability on small instances.

The brute-force decision enumerates candidate counterexample models:
tree-shaped interpretations whose shape follows one lhs disjunct (with
functional-role fillers merged and range classes added), whose labels
are the forced closure of the syntactic atoms, and whose property
values range over one representative per region that the rhs intervals
carve out of each lhs interval.  Minimality makes this complete: since
the logic is negation-free, rhs satisfaction is monotone in labels,
edges, and values, so a counterexample exists iff one of these minimal
candidates is a counterexample.

When an external ontology is supplied, node labels are closed under its
axioms as well.  Oracle roles forced by A ⊑ ∃R.B axioms are not
materialized: the ontology shares no roles with the query, so such
successors influence the query only through the name consequences the
closure already accounts for, and the partial model extends to a full
model of the ontology.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import normalize as norm
from .model import (Disjoint, FullConcept, Functional, Inclusion, Interval,
                    KnowledgeBase, Range, SimpleConcept, as_full,
                    sorted_restrictions)
from .oracle import Definition, ExSub, ExternalOntology, ODisjoint, Sub, SubEx


class RefcheckLimitError(ValueError):
    """Instance too large for the brute-force oracle (refusal, never a
    wrong answer)."""


# ---------------------------------------------------------------------------
# Finite interpretations and model checking


@dataclass
class FiniteInterpretation:
    domain: set = field(default_factory=set)
    concept_ext: dict = field(default_factory=dict)   # name -> set of elements
    role_ext: dict = field(default_factory=dict)      # role -> set of (el, el)
    prop_ext: dict = field(default_factory=dict)      # prop -> set of (el, int)


@dataclass
class PointedModel:
    interp: FiniteInterpretation
    point: object


def _holds(interp: FiniteInterpretation, el, sc: SimpleConcept) -> bool:
    if sc.bottom:
        return False
    for a in sc.atoms:
        if el not in interp.concept_ext.get(a, ()):
            return False
    for f, iv in sc.constraints:
        if not any(e == el and iv.lo <= v <= iv.hi
                   for e, v in interp.prop_ext.get(f, ())):
            return False
    for r, ch in sc.restrictions:
        if not any(e == el and _holds(interp, t, ch)
                   for e, t in interp.role_ext.get(r, ())):
            return False
    return True


def model_check(m: PointedModel, c) -> bool:
    return any(_holds(m.interp, m.point, d) for d in as_full(c).disjuncts)


def axioms_hold(interp: FiniteInterpretation, kb: KnowledgeBase) -> bool:
    for ax in kb.axioms:
        if isinstance(ax, Inclusion):
            sub = interp.concept_ext.get(ax.sub, set())
            sup = interp.concept_ext.get(ax.sup, set())
            if not sub <= sup:
                return False
        elif isinstance(ax, Disjoint):
            a = interp.concept_ext.get(ax.a, set())
            b = interp.concept_ext.get(ax.b, set())
            if a & b:
                return False
        elif isinstance(ax, Functional):
            pairs = list(interp.role_ext.get(ax.name, ())) + list(
                interp.prop_ext.get(ax.name, ()))
            sources = [e for e, _ in pairs]
            if len(sources) != len(set(sources)):
                return False
        elif isinstance(ax, Range):
            cls = interp.concept_ext.get(ax.cls, set())
            if any(t not in cls for _, t in interp.role_ext.get(ax.role, ())):
                return False
    return True


# ---------------------------------------------------------------------------
# Forced name closure (KB inclusions/disjointness plus ontology axioms)


class _NameClosure:
    """Closes a set of names under every name-level consequence of the
    KB and an optional external ontology, and reports inconsistency."""

    def __init__(self, kb: KnowledgeBase, onto: ExternalOntology | None):
        self.incl = [(ax.sub, ax.sup) for ax in kb.axioms
                     if isinstance(ax, Inclusion)]
        self.disj = [(ax.a, ax.b) for ax in kb.axioms
                     if isinstance(ax, Disjoint)]
        self.subs, self.defs, self.subex, self.exsub = [], [], [], []
        names = set()
        if onto is not None:
            for ax in onto.axioms:
                if isinstance(ax, Sub):
                    self.subs.append(ax)
                elif isinstance(ax, Definition):
                    self.defs.append(ax)
                elif isinstance(ax, SubEx):
                    self.subex.append(ax)
                elif isinstance(ax, ExSub):
                    self.exsub.append(ax)
                elif isinstance(ax, ODisjoint):
                    self.disj.append((ax.a, ax.b))
            names |= onto.concept_names
        names |= kb.concept_names
        # Per-name closures, to a simultaneous fixpoint (existential
        # consequences of one name can feed back into another).
        self._table = {n: ({n}, False) for n in names}
        changed = True
        while changed:
            changed = False
            for n in names:
                new = self._close({n})
                if new != self._table[n]:
                    self._table[n] = new
                    changed = True

    def _close(self, seed) -> tuple:
        s = set(seed)
        bot = False
        changed = True
        while changed:
            changed = False
            for a, b in self.incl:
                if a in s and b not in s:
                    s.add(b)
                    changed = True
            for ax in self.subs:
                if ax.sup not in s and all(x in s for x in ax.lhs):
                    s.add(ax.sup)
                    changed = True
            for ax in self.defs:
                if ax.name in s and not all(p in s for p in ax.parts):
                    s.update(ax.parts)
                    changed = True
                if ax.name not in s and all(p in s for p in ax.parts):
                    s.add(ax.name)
                    changed = True
            succs = {(ax.role, ax.filler) for ax in self.subex if ax.sub in s}
            for ax in self.exsub:
                if ax.sup not in s:
                    for r, b in succs:
                        bs, _ = self._table.get(b, ({b}, False))
                        if r == ax.role and ax.filler in bs:
                            s.add(ax.sup)
                            changed = True
                            break
        if any(a in s and b in s for a, b in self.disj):
            bot = True
        elif any(self._table.get(b, ({b}, False))[1] for _, b in
                 {(ax.role, ax.filler) for ax in self.subex if ax.sub in s}):
            bot = True
        elif any(self._table.get(a, (set(), False))[1] for a in s):
            bot = True
        return frozenset(s), bot

    def close(self, atoms) -> tuple:
        return self._close(set(atoms))


# ---------------------------------------------------------------------------
# Brute-force subsumption / satisfiability


_MAX_EXISTS_NODES = 10
_MAX_NAMES = 12
_MAX_ENDPOINTS = 6
_MAX_COMBOS = 200_000


def _exists_nodes(c) -> int:
    def count(sc) -> int:
        return sum(1 + count(ch) for _, ch in sc.restrictions)

    return sum(count(d) for d in as_full(c).disjuncts)


def _names_of(c) -> set:
    out = set()

    def walk(sc):
        out.update(sc.atoms)
        for _, ch in sc.restrictions:
            walk(ch)

    for d in as_full(c).disjuncts:
        walk(d)
    return out


def _endpoints_of(c) -> set:
    out = set()

    def walk(sc):
        for _, iv in sc.constraints:
            out.update((iv.lo, iv.hi))
        for _, ch in sc.restrictions:
            walk(ch)

    for d in as_full(c).disjuncts:
        walk(d)
    return out


def _check_limits(c, d) -> None:
    if _exists_nodes(c) > _MAX_EXISTS_NODES:
        raise RefcheckLimitError("too many existential restrictions")
    if len(_names_of(c) | _names_of(d)) > _MAX_NAMES:
        raise RefcheckLimitError("too many concept names")
    if len(_endpoints_of(c) | _endpoints_of(d)) > _MAX_ENDPOINTS:
        raise RefcheckLimitError("too many distinct endpoints")


@dataclass
class _Node:
    label: frozenset
    edges: list            # of (role, _Node)
    slots: list            # of (prop, [candidate values])


def _slot_values(lo: int, hi: int, rhs_intervals) -> list:
    """One representative value per region the rhs intervals carve out
    of [lo, hi]."""
    starts = {lo}
    for riv in rhs_intervals:
        for x in (riv.lo, riv.hi + 1):
            if lo < x <= hi:
                starts.add(x)
    return sorted(starts)


def _build_node(sc: SimpleConcept, kb_idx, closure: _NameClosure,
                rhs_by_prop: dict):
    """Minimal candidate model node for one simple concept, or None if
    the concept is unsatisfiable with this structure."""
    if sc.bottom:
        return None
    label, bot = closure.close(sc.atoms)
    if bot:
        return None

    by_prop = {}
    for f, iv in sc.constraints:
        by_prop.setdefault(f, []).append(iv)
    slots = []
    for f in sorted(by_prop):
        ivs = by_prop[f]
        if f in kb_idx.functional:
            lo = max(iv.lo for iv in ivs)
            hi = min(iv.hi for iv in ivs)
            ivs = [Interval(lo, hi)]
        for iv in ivs:
            if iv.empty:
                return None
            slots.append((f, _slot_values(iv.lo, iv.hi,
                                          rhs_by_prop.get(f, ()))))

    by_role = {}
    for r, ch in sorted_restrictions(sc):
        by_role.setdefault(r, []).append(ch)
    edges = []
    for r in sorted(by_role):
        children = by_role[r]
        if r in kb_idx.functional and len(children) > 1:
            merged = children[0]
            for ch in children[1:]:
                merged = merged.meet(ch)
            children = [merged]
        for ch in children:
            for a in kb_idx.ranges.get(r, ()):
                if a not in ch.atoms:
                    ch = SimpleConcept(atoms=ch.atoms | {a}, bottom=ch.bottom,
                                       constraints=ch.constraints,
                                       restrictions=ch.restrictions)
            sub = _build_node(ch, kb_idx, closure, rhs_by_prop)
            if sub is None:
                return None
            edges.append((r, sub))
    return _Node(label, edges, slots)


def _candidate_models(root: _Node):
    """Yield pointed models for every combination of slot values."""
    nodes = []
    ids = {}

    def collect(node):
        ids[id(node)] = len(nodes)
        nodes.append(node)
        for _, ch in node.edges:
            collect(ch)

    collect(root)
    all_slots = [(i, f, values) for i, node in enumerate(nodes)
                 for f, values in node.slots]
    total = 1
    for _, _, values in all_slots:
        total *= len(values)
        if total > _MAX_COMBOS:
            raise RefcheckLimitError("too many candidate value combinations")

    for combo in itertools.product(*(values for _, _, values in all_slots)):
        interp = FiniteInterpretation()
        interp.domain = set(range(len(nodes)))
        for i, node in enumerate(nodes):
            for a in node.label:
                interp.concept_ext.setdefault(a, set()).add(i)
            for r, ch in node.edges:
                interp.role_ext.setdefault(r, set()).add((i, ids[id(ch)]))
        for (i, f, _), v in zip(all_slots, combo):
            interp.prop_ext.setdefault(f, set()).add((i, v))
        yield PointedModel(interp, 0)


def _rhs_intervals_by_prop(d) -> dict:
    out = {}

    def walk(sc):
        for f, iv in sc.constraints:
            out.setdefault(f, []).append(iv)
        for _, ch in sc.restrictions:
            walk(ch)

    for disj in as_full(d).disjuncts:
        walk(disj)
    return out


def brute_force_subsumes(kb: KnowledgeBase, c, d,
                         ontology: ExternalOntology | None = None) -> bool:
    c, d = as_full(c), as_full(d)
    _check_limits(c, d)
    kb_idx = _KbTables(kb)
    closure = _NameClosure(kb, ontology)
    rhs_by_prop = _rhs_intervals_by_prop(d)
    for ci in c.disjuncts:
        root = _build_node(ci, kb_idx, closure, rhs_by_prop)
        if root is None:
            continue  # unsatisfiable disjunct subsumes vacuously
        for m in _candidate_models(root):
            if not axioms_hold(m.interp, kb):
                continue
            if _holds(m.interp, m.point, ci) and not model_check(m, d):
                return False
    return True


def brute_force_satisfiable(kb: KnowledgeBase, c,
                            ontology: ExternalOntology | None = None) -> bool:
    c = as_full(c)
    _check_limits(c, c)
    kb_idx = _KbTables(kb)
    closure = _NameClosure(kb, ontology)
    return any(_build_node(ci, kb_idx, closure, {}) is not None
               for ci in c.disjuncts)


class _KbTables:
    """Functionality and range lookups straight off the axiom set."""

    def __init__(self, kb: KnowledgeBase):
        self.functional = {ax.name for ax in kb.axioms
                           if isinstance(ax, Functional)}
        self.ranges = {}
        for ax in kb.axioms:
            if isinstance(ax, Range):
                self.ranges.setdefault(ax.role, []).append(ax.cls)


# ---------------------------------------------------------------------------
# Canonical models


def canonical_model(mode, c: SimpleConcept) -> PointedModel:
    """The minimal tree-shaped pointed model of a normalized, non-bottom
    simple concept: the root satisfies exactly the names entailed by its
    top-level name conjunction, each constraint stores its upper bound,
    and each restriction contributes one child element."""
    if c.bottom:
        raise ValueError("canonical model requires a non-bottom concept")
    interp = FiniteInterpretation()
    counter = itertools.count()

    def entailed(atoms) -> set:
        if isinstance(mode, norm.Plain):
            out = set()
            for a in atoms:
                out |= mode.idx.up(a)
            return out
        out = set(atoms)
        if atoms:
            for cand in mode.oracle.concept_names:
                if mode.oracle.decide(atoms, cand):
                    out.add(cand)
        return out

    def build(sc: SimpleConcept):
        el = next(counter)
        interp.domain.add(el)
        for a in entailed(sc.atoms):
            interp.concept_ext.setdefault(a, set()).add(el)
        for f, iv in sc.constraints:
            interp.prop_ext.setdefault(f, set()).add((el, iv.hi))
        for r, ch in sorted_restrictions(sc):
            child = build(ch)
            interp.role_ext.setdefault(r, set()).add((el, child))
        return el

    return PointedModel(interp, build(c))
