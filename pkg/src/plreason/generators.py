"""Deterministic synthetic corpus generators: layered random
ontologies, random policy sets with compliance queries, pilot-like
consent perturbation, and the 3SAT hard-instance encoder.

All randomness flows through a PCG64 generator seeded with a 64-bit
seed, so identical (profile, seed) inputs reproduce identical corpora
on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from numpy.random import Generator, PCG64

from .model import (Disjoint, FullConcept, Functional, Inclusion, Interval,
                    KnowledgeBase, Range, SimpleConcept, build_closure)


def make_rng(seed: int) -> Generator:
    return Generator(PCG64(seed))


def _pick(rng: Generator, xs):
    return xs[int(rng.integers(0, len(xs)))]


def _randint(rng: Generator, lo: int, hi: int) -> int:
    """Uniform integer in [lo, hi], inclusive."""
    return int(rng.integers(lo, hi + 1))


# ---------------------------------------------------------------------------
# Ontology generation


@dataclass(frozen=True)
class OntologyProfile:
    classes: int
    roles: int
    concrete_props: int
    func_count: int
    range_count: int
    disj_target: int = 0
    inclusion_factor: float = 2.0
    adjacent_ratio: float = 0.9
    seed: int = 1


ONTOLOGY_PROFILES = {
    "O1": OntologyProfile(100, 10, 10, 10, 5, disj_target=3),
    "O2": OntologyProfile(1000, 50, 25, 37, 25, disj_target=31),
    "O3": OntologyProfile(10000, 100, 50, 75, 50, disj_target=298),
}


def onto_names(p: OntologyProfile):
    classes = [f"C{i}" for i in range(p.classes)]
    roles = [f"r{i}" for i in range(p.roles)]
    props = [f"p{i}" for i in range(p.concrete_props)]
    return classes, roles, props


def _layer_count(classes: int) -> int:
    layers = 0
    while (1 << layers) < classes:
        layers += 1
    return max(1, layers)


def gen_ontology(p: OntologyProfile) -> KnowledgeBase:
    rng = make_rng(p.seed)
    classes, roles, props = onto_names(p)
    n_layers = _layer_count(p.classes)
    layer_of = {c: int(rng.integers(0, n_layers)) for c in classes}
    by_layer = {}
    for c, layer in layer_of.items():
        by_layer.setdefault(layer, []).append(c)

    axioms = set()
    down = {c: {c} for c in classes}  # descendants, incl. self
    up = {c: {c} for c in classes}

    def add_inclusion(sub: str, sup: str) -> None:
        axioms.add(Inclusion(sub, sup))
        for d in list(down[sub]):
            for u in up[sup]:
                down[u].add(d)
                up[d].add(u)

    target = int(p.inclusion_factor * p.classes)
    attempts = 0
    added = 0
    while added < target and attempts < 20 * target:
        attempts += 1
        sub = _pick(rng, classes)
        layer = layer_of[sub]
        if layer == 0:
            continue
        if n_layers > 2 and layer > 1 and rng.random() >= p.adjacent_ratio:
            sup_layer = int(rng.integers(0, layer - 1))
        else:
            sup_layer = layer - 1
        candidates = by_layer.get(sup_layer)
        if not candidates:
            continue
        sup = _pick(rng, candidates)
        if sup == sub or Inclusion(sub, sup) in axioms:
            continue
        add_inclusion(sub, sup)
        added += 1

    added = 0
    attempts = 0
    while added < p.disj_target and attempts < 50 * max(1, p.disj_target):
        attempts += 1
        layer = int(rng.integers(0, n_layers))
        candidates = by_layer.get(layer, ())
        if len(candidates) < 2:
            continue
        a, b = _pick(rng, candidates), _pick(rng, candidates)
        if a == b or down[a] & down[b]:
            continue  # a shared descendant would become inconsistent
        axioms.add(Disjoint(*sorted((a, b))))
        added += 1

    func_pool = roles + props
    order = list(rng.permutation(len(func_pool)))
    for i in order[:min(p.func_count, len(func_pool))]:
        axioms.add(Functional(func_pool[int(i)]))

    order = list(rng.permutation(len(roles)))
    for i in order[:min(p.range_count, len(roles))]:
        axioms.add(Range(roles[int(i)], _pick(rng, classes)))

    return KnowledgeBase(frozenset(axioms))


# ---------------------------------------------------------------------------
# Policy generation


@dataclass(frozen=True)
class PolicyProfile:
    max_simple_per_full: int
    max_top_level_intersections: int
    max_depth: int
    endpoint_lo: int = 0
    endpoint_hi: int = 365
    # target post-normalization interval counts cycled over business
    # policies (drives the tractability-parameter experiments)
    ni_levels: tuple = (0, 1)
    seed: int = 1


POLICY_PROFILES = {
    "P1": PolicyProfile(10, 10, 4, ni_levels=(0, 1)),
    "P2": PolicyProfile(100, 20, 9, ni_levels=(1, 2, 3, 4, 5)),
}


@dataclass
class PolicyCorpus:
    business: list = field(default_factory=list)
    consents: list = field(default_factory=list)
    queries: list = field(default_factory=list)  # of (b_index, c_index)


def _functional_props(kb: KnowledgeBase, props) -> list:
    functional = {ax.name for ax in kb.axioms if isinstance(ax, Functional)}
    return [f for f in props if f in functional] or list(props)


def _rand_simple(rng, p: PolicyProfile, classes, roles, props, depth: int,
                 n_constraints: int = -1) -> SimpleConcept:
    atoms = frozenset(_pick(rng, classes)
                      for _ in range(_randint(rng, 1, 2)))
    if n_constraints < 0:
        n_constraints = _randint(rng, 0, 1) if props else 0
    constraints = set()
    for _ in range(n_constraints):
        f = _pick(rng, props)
        lo = _randint(rng, p.endpoint_lo, p.endpoint_hi)
        hi = min(p.endpoint_hi, lo + _randint(rng, 0, 60))
        constraints.add((f, Interval(lo, hi)))
    restrictions = set()
    if depth > 0 and roles:
        for _ in range(_randint(rng, 0, 2)):
            if rng.random() < 0.65:
                r = _pick(rng, roles)
                child = _rand_simple(rng, p, classes, roles, props,
                                     depth - 1, n_constraints=0)
                restrictions.add((r, child))
    return SimpleConcept(atoms=atoms, constraints=frozenset(constraints),
                         restrictions=frozenset(restrictions))


def _weaken(rng, idx, sc: SimpleConcept, widen: int) -> SimpleConcept:
    """A consent-style generalization of a simple concept: atoms may be
    replaced by superclasses, intervals are widened."""
    atoms = set()
    for a in sc.atoms:
        ups = sorted(idx.up(a))
        atoms.add(_pick(rng, ups) if rng.random() < 0.7 else a)
    constraints = set()
    for f, iv in sc.constraints:
        # strict widening keeps the weakened endpoints outside the
        # original interval
        lo = max(0, iv.lo - _randint(rng, 1, widen))
        hi = iv.hi + _randint(rng, 1, widen)
        constraints.add((f, Interval(lo, hi)))
    restrictions = frozenset((r, _weaken(rng, idx, ch, widen))
                             for r, ch in sc.restrictions)
    return SimpleConcept(atoms=frozenset(atoms),
                         constraints=frozenset(constraints),
                         restrictions=restrictions)


def gen_policies(kb: KnowledgeBase, p: PolicyProfile, count: int,
                 business_ratio: float = 0.3, classes=None, roles=None,
                 props=None) -> PolicyCorpus:
    """Random business/consent policies plus a query pairing.

    Business policies are filtered to KB-consistent ones and cycle
    through the profile's target interval counts.  Consent policies
    carry redundant and occasionally contradictory constraints on
    functional properties (normalizing the rhs collapses them), and
    roughly half the queries pair a business policy with a weakening of
    itself so the answer mix stays balanced where achievable.
    """
    from . import normalize as norm  # local import to avoid a cycle at load

    rng = make_rng(p.seed)
    if classes is None:
        classes = sorted(kb.concept_names) or ["A0", "A1", "A2"]
    if roles is None:
        roles = sorted(kb.role_names)
    if props is None:
        props = sorted({ax.name for ax in kb.axioms
                        if isinstance(ax, Functional)} - set(roles)) or ["p0"]
    fprops = _functional_props(kb, props)
    idx = build_closure(kb)
    mode = norm.Plain(idx)

    corpus = PolicyCorpus()
    n_business = max(1, round(count * business_ratio)) if count else 0
    n_consent = count - n_business

    made = 0
    guard = 0
    while made < n_business and guard < 50 * max(1, n_business):
        guard += 1
        ni = p.ni_levels[made % len(p.ni_levels)]
        hi_disj = min(p.max_simple_per_full, 10)
        n_disj = _randint(rng, max(1, min(hi_disj, p.max_simple_per_full // 3)),
                          hi_disj)
        # one interval set per policy, shared by every disjunct, each on
        # a distinct functional property: the post-normalization interval
        # count equals the profile's target level
        shared = frozenset(
            (fprops[j % len(fprops)],
             Interval(lo := _randint(rng, 30, 200),
                      lo + _randint(rng, 40, 120)))
            for j in range(ni))
        disjuncts = []
        for _ in range(n_disj):
            sc = _rand_simple(rng, p, classes, roles, fprops,
                              depth=min(p.max_depth, 3), n_constraints=0)
            disjuncts.append(sc.meet(SimpleConcept(constraints=shared)))
        policy = FullConcept(tuple(disjuncts))
        if norm.is_satisfiable(mode, policy):
            corpus.business.append(policy)
            made += 1

    for i in range(n_consent):
        b = corpus.business[i % len(corpus.business)] if corpus.business else None
        if b is not None and i % 2 == 0:
            # weakened copy of a business policy: mostly positive answers
            disjuncts = tuple(_weaken(rng, idx, d, widen=30)
                              for d in b.disjuncts)
        else:
            n_disj = _randint(rng, 1, min(p.max_simple_per_full, 8))
            disjuncts = tuple(
                _rand_simple(rng, p, classes, roles, fprops,
                             depth=min(p.max_depth, 3), n_constraints=0)
                for _ in range(n_disj))
        if b is not None:
            # One contradictory disjunct per consent: a pair of disjoint
            # singleton constraints on each of the paired business
            # policy's functional properties, inside its intervals.
            # The disjunct is unsatisfiable, so answers are unchanged;
            # un-normalized, its endpoints force fine-grained splits of
            # the business intervals, while rhs normalization collapses
            # it to bottom and removes the endpoints again.
            constraints = set()
            for f, iv in b.disjuncts[0].constraints:
                span = iv.hi - iv.lo
                if span < 3:
                    continue
                m1 = iv.lo + span // 3
                m2 = iv.lo + 2 * span // 3
                constraints.add((f, Interval(m1, m1)))
                constraints.add((f, Interval(m2, m2)))
            if constraints:
                disjuncts = disjuncts + (SimpleConcept(
                    atoms=frozenset((_pick(rng, classes),)),
                    constraints=frozenset(constraints)),)
        corpus.consents.append(FullConcept(tuple(disjuncts)))

    for ci in range(len(corpus.consents)):
        corpus.queries.append((ci % max(1, len(corpus.business)), ci))
    return corpus


def gen_pilot_like(base_policy: FullConcept, kb: KnowledgeBase, count: int,
                   seed: int) -> list:
    """Consent policies derived from a pilot-style base policy: each is
    a random non-empty subset of the base's simple policies with some
    vocabulary terms swapped for a random super- or sub-class."""
    rng = make_rng(seed)
    idx = build_closure(kb)
    downs = {}
    for name in kb.concept_names:
        for sup in idx.up(name):
            downs.setdefault(sup, set()).add(name)

    def perturb(sc: SimpleConcept) -> SimpleConcept:
        atoms = set()
        for a in sc.atoms:
            if rng.random() < 0.5:
                pool = sorted(idx.up(a) | downs.get(a, {a}))
                atoms.add(_pick(rng, pool))
            else:
                atoms.add(a)
        return SimpleConcept(atoms=frozenset(atoms),
                             constraints=sc.constraints,
                             restrictions=frozenset(
                                 (r, perturb(ch))
                                 for r, ch in sc.restrictions))

    out = []
    n = len(base_policy.disjuncts)
    for _ in range(count):
        mask = [bool(rng.integers(0, 2)) for _ in range(n)]
        if not any(mask):
            mask[int(rng.integers(0, n))] = True
        chosen = tuple(perturb(d)
                       for d, keep in zip(base_policy.disjuncts, mask) if keep)
        out.append(FullConcept(chosen))
    return out


# ---------------------------------------------------------------------------
# Pilot-style fixed vocabulary


def pilot_vocabulary() -> KnowledgeBase:
    """A small data-usage vocabulary in the style of the GDPR pilots:
    category trees for purposes, data, processing, recipients, and
    storage, with the usual functionality/range declarations."""
    trees = {
        "AnyPurpose": ["Marketing", "Analytics", "FitnessRecommendation",
                       "ServiceProvision", "Research"],
        "AnyData": ["DemographicData", "BiometricData", "LocationData",
                    "UsageData", "ContactData"],
        "AnyProcessing": ["Collect", "Analyze", "Transfer", "Store",
                          "Anonymize", "Update"],
        "AnyRecipient": ["Controller", "Processor", "ThirdParty",
                         "DataSubjFriends"],
        "AnyLocation": ["EU", "NonEU"],
    }
    extra = [("HeartRate", "BiometricData"), ("StepCount", "BiometricData"),
             ("ComputeAvg", "Analyze"), ("Erase", "Update"),
             ("EmailAddress", "ContactData"), ("Age", "DemographicData")]
    axioms = set()
    for top, subs in trees.items():
        for s in subs:
            axioms.add(Inclusion(s, top))
    for sub, sup in extra:
        axioms.add(Inclusion(sub, sup))
    tops = sorted(trees)
    for i, a in enumerate(tops):
        for b in tops[i + 1:]:
            axioms.add(Disjoint(a, b))
    axioms.update([
        Functional("has_purpose"), Functional("has_duration"),
        Range("has_purpose", "AnyPurpose"), Range("has_data", "AnyData"),
        Range("has_processing", "AnyProcessing"),
        Range("has_recipient", "AnyRecipient"),
        Range("has_location", "AnyLocation"),
    ])
    return KnowledgeBase(frozenset(axioms))


def pilot_base_policy(seed: int, n_simple: int = 6) -> FullConcept:
    """A pilot-style business policy: each simple policy states purpose,
    data, processing, recipient, and a storage clause with at most one
    duration interval (so the tractability parameter stays at 1)."""
    rng = make_rng(seed)
    purposes = ["Marketing", "Analytics", "FitnessRecommendation",
                "ServiceProvision", "Research"]
    data = ["DemographicData", "HeartRate", "LocationData", "UsageData",
            "EmailAddress", "Age"]
    processing = ["Collect", "ComputeAvg", "Transfer", "Store", "Anonymize"]
    recipients = ["Controller", "Processor", "ThirdParty"]
    disjuncts = []
    for _ in range(n_simple):
        lo = _randint(rng, 0, 180)
        hi = lo + _randint(rng, 30, 185)
        storage = SimpleConcept(
            restrictions=frozenset((("has_location",
                                     SimpleConcept(atoms=frozenset(("EU",)))),)),
            constraints=frozenset((("has_duration",
                                    Interval(lo, min(hi, 365))),)))
        sc = SimpleConcept(restrictions=frozenset([
            ("has_purpose", SimpleConcept(atoms=frozenset((_pick(rng, purposes),)))),
            ("has_data", SimpleConcept(atoms=frozenset((_pick(rng, data),)))),
            ("has_processing", SimpleConcept(atoms=frozenset((_pick(rng, processing),)))),
            ("has_recipient", SimpleConcept(atoms=frozenset((_pick(rng, recipients),)))),
            ("has_storage", storage),
        ]))
        disjuncts.append(sc)
    return FullConcept(tuple(disjuncts))


# ---------------------------------------------------------------------------
# Hard instances


def sat3_encode(clauses):
    """Encode a 3-CNF as a subsumption query that is valid iff the CNF
    is unsatisfiable.  Clauses are triples of signed non-zero integers
    (k for variable pk, -k for its negation)."""
    if not clauses:
        raise ValueError("need at least one clause")
    variables = set()
    for clause in clauses:
        if len(clause) != 3 or any(not isinstance(l, int) or l == 0
                                   for l in clause):
            raise ValueError(f"malformed clause: {clause!r}")
        variables.update(abs(l) for l in clause)
    lhs = SimpleConcept(constraints=frozenset(
        (f"p{v}", Interval(0, 1)) for v in sorted(variables)))
    disjuncts = []
    for clause in clauses:
        constraints = set()
        for lit in clause:
            iv = Interval(0, 0) if lit > 0 else Interval(1, 1)
            constraints.add((f"p{abs(lit)}", iv))
        disjuncts.append(SimpleConcept(constraints=frozenset(constraints)))
    return FullConcept((lhs,)), FullConcept(tuple(disjuncts))


def sat3_truth_table(clauses) -> bool:
    """Exhaustive satisfiability check of a 3-CNF (the independent
    verdict the encoder is tested against)."""
    variables = sorted({abs(l) for clause in clauses for l in clause})
    for bits in range(1 << len(variables)):
        assign = {v: bool(bits >> i & 1) for i, v in enumerate(variables)}
        if all(any(assign[abs(l)] == (l > 0) for l in clause)
               for clause in clauses):
            return True
    return False
