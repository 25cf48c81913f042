"""Shared test helpers: worked-example fixtures and a generator of
small random instances that stay within the reference checker's
limits."""

from __future__ import annotations

from numpy.random import Generator, PCG64

from plreason.model import (Disjoint, FullConcept, Functional, Inclusion,
                            Interval, KnowledgeBase, Range, SimpleConcept,
                            atom, conj, exists, has)

# ---------------------------------------------------------------------------
# Vocabulary and worked-example fixtures


def vocab_kb() -> KnowledgeBase:
    return KnowledgeBase.of(
        Inclusion("HeartRate", "BiometricData"),
        Inclusion("ComputeAvg", "Analytics"),
        Inclusion("BiometricData", "AnyData"),
        Inclusion("Demographic", "AnyData"),
        Inclusion("Update", "AnyProcessing"),
        Inclusion("Erase", "Update"),
        Disjoint("AnyData", "AnyPurpose"),
        Functional("has_purpose"),
        Range("has_data", "AnyData"),
    )


def befit_consent() -> FullConcept:
    """The fitness-app consent policy: two alternative usage bundles."""
    d1 = conj(
        exists("has_purpose", atom("FitnessRecommendation")),
        exists("has_data", atom("BiometricData")),
        exists("has_processing", atom("Analytics")),
        exists("has_recipient", atom("BeFit")),
        exists("has_storage", exists("has_location", atom("EU"))),
    )
    d2 = conj(
        exists("has_purpose", atom("SocialNetworking")),
        exists("has_data", atom("LocationData")),
        exists("has_processing", atom("Transfer")),
        exists("has_recipient", atom("DataSubjFriends")),
        exists("has_storage", conj(exists("has_location", atom("EU")),
                                   has("has_duration", 365, 1825))),
    )
    return FullConcept.of(d1, d2)


def befit_business() -> FullConcept:
    """The average-heart-rate business policy checked against the
    consent above."""
    return FullConcept.of(conj(
        exists("has_purpose", atom("FitnessRecommendation")),
        exists("has_data", atom("HeartRate")),
        exists("has_processing", atom("ComputeAvg")),
        exists("has_recipient", atom("BeFit")),
        exists("has_storage", exists("has_location", atom("EU"))),
    ))


_DUTIES = ("GetConsent", "GiveAccess", "RectifyOnRequest", "DeleteOnRequest")


def gdpr_consent_concept() -> FullConcept:
    """Consent-or-exemption concept: either full consent duties with the
    consent legal basis, or anonymous data, or a legal requirement."""
    d1 = conj(*[exists("has_duty", atom(d)) for d in _DUTIES],
              exists("has_legal_basis", atom("Art6_1_a_Consent")))
    return FullConcept.of(d1,
                          exists("has_data", atom("Anonymous")),
                          exists("has_purpose", atom("LawRequirement")))


def gdpr_business_policy() -> FullConcept:
    b1 = conj(
        exists("has_purpose", atom("Marketing")),
        exists("has_data", atom("CustomerData")),
        exists("has_legal_basis", atom("Art6_1_a_Consent")),
        *[exists("has_duty", atom(d)) for d in _DUTIES],
    )
    b2 = conj(
        exists("has_purpose", atom("Sell")),
        exists("has_data", atom("Anonymous")),
        exists("has_processing", atom("Transfer")),
        exists("has_recipient", atom("ThirdParty")),
    )
    return FullConcept.of(b1, b2)


# ---------------------------------------------------------------------------
# Random small instances (within refcheck limits)

_NAMES = [f"A{i}" for i in range(8)]
_ROLES = ["r0", "r1"]
_PROPS = ["f0", "f1"]
_ENDPOINTS = [0, 2, 5, 7, 9]


def _pick(rng: Generator, xs):
    return xs[int(rng.integers(0, len(xs)))]


def rand_kb(rng: Generator) -> KnowledgeBase:
    axioms = set()
    for _ in range(int(rng.integers(0, 6))):
        a, b = _pick(rng, _NAMES), _pick(rng, _NAMES)
        if a != b:
            axioms.add(Inclusion(a, b))
    if rng.random() < 0.6:
        a, b = _pick(rng, _NAMES), _pick(rng, _NAMES)
        if a != b:
            axioms.add(Disjoint(*sorted((a, b))))
    if rng.random() < 0.5:
        axioms.add(Functional("r0"))
    if rng.random() < 0.5:
        axioms.add(Functional("f0"))
    if rng.random() < 0.5:
        axioms.add(Range(_pick(rng, _ROLES), _pick(rng, _NAMES)))
    return KnowledgeBase(frozenset(axioms))


def rand_simple(rng: Generator, depth: int) -> SimpleConcept:
    atoms = frozenset(_pick(rng, _NAMES)
                      for _ in range(int(rng.integers(0, 3))))
    constraints = set()
    for _ in range(int(rng.integers(0, 3))):
        lo = _pick(rng, _ENDPOINTS)
        hi = _pick(rng, _ENDPOINTS)
        if rng.random() < 0.8 and hi < lo:
            lo, hi = hi, lo  # mostly non-empty, occasionally empty
        constraints.add((_pick(rng, _PROPS), Interval(lo, hi)))
    restrictions = set()
    if depth > 0:
        for _ in range(int(rng.integers(0, 3))):
            if rng.random() < 0.5:
                restrictions.add((_pick(rng, _ROLES),
                                  rand_simple(rng, depth - 1)))
    sc = SimpleConcept(atoms=atoms, bottom=rng.random() < 0.03,
                       constraints=frozenset(constraints),
                       restrictions=frozenset(restrictions))
    if sc.is_empty:
        sc = SimpleConcept(atoms=frozenset((_pick(rng, _NAMES),)))
    return sc


def rand_full(rng: Generator, max_disjuncts: int = 4,
              depth: int = 2) -> FullConcept:
    n = int(rng.integers(1, max_disjuncts + 1))
    return FullConcept(tuple(rand_simple(rng, depth) for _ in range(n)))


def _exists_nodes(c: FullConcept) -> int:
    def count(sc):
        return sum(1 + count(ch) for _, ch in sc.restrictions)

    return sum(count(d) for d in c.disjuncts)


def rand_instance(seed: int):
    """A random (kb, c, d) instance within the reference checker's
    documented limits."""
    rng = Generator(PCG64(seed))
    kb = rand_kb(rng)
    while True:
        c = rand_full(rng, depth=int(rng.integers(0, 3)))
        if _exists_nodes(c) <= 8:
            break
    if rng.random() < 0.25:
        # relate the sides: d is built from pieces of c
        base = list(c.disjuncts)
        keep = tuple(d for d in base if rng.random() < 0.6) or (base[0],)
        d = FullConcept(keep)
    else:
        d = rand_full(rng, depth=int(rng.integers(0, 3)))
    return kb, c, d


# ---------------------------------------------------------------------------
# Random oracle-mode instances

_ONAMES = [f"B{i}" for i in range(6)]
_OROLES = ["s0"]


def rand_ontology(rng: Generator) -> "ExternalOntology":
    from plreason.oracle import (ExSub, ExternalOntology, ODisjoint, Sub,
                                 SubEx)

    axioms = set()
    for _ in range(int(rng.integers(0, 5))):
        k = 1 if rng.random() < 0.7 else 2
        lhs = {_pick(rng, _ONAMES) for _ in range(k)}
        sup = _pick(rng, _ONAMES)
        if sup not in lhs:
            axioms.add(Sub.of(lhs, sup))
    if rng.random() < 0.5:
        axioms.add(SubEx(_pick(rng, _ONAMES), _OROLES[0],
                         _pick(rng, _ONAMES)))
    if rng.random() < 0.5:
        axioms.add(ExSub(_OROLES[0], _pick(rng, _ONAMES),
                         _pick(rng, _ONAMES)))
    if rng.random() < 0.4:
        a, b = _pick(rng, _ONAMES), _pick(rng, _ONAMES)
        if a != b:
            axioms.add(ODisjoint(*sorted((a, b))))
    return ExternalOntology(frozenset(axioms))


def rand_ibq_instance(seed: int):
    """A random (kb, ontology, c, d) oracle-mode instance: the KB keeps
    only functionality/range axioms, the vocabulary lives in the
    ontology, and the query shares only concept names with it."""
    rng = Generator(PCG64(seed))
    onto = rand_ontology(rng)
    axioms = set()
    if rng.random() < 0.5:
        axioms.add(Functional("r0"))
    if rng.random() < 0.5:
        axioms.add(Functional("f0"))
    if rng.random() < 0.5:
        axioms.add(Range(_pick(rng, _ROLES), _pick(rng, _ONAMES)))
    kb = KnowledgeBase(frozenset(axioms))

    def simple(depth: int) -> SimpleConcept:
        atoms = frozenset(_pick(rng, _ONAMES)
                          for _ in range(int(rng.integers(0, 3))))
        constraints = set()
        for _ in range(int(rng.integers(0, 3))):
            lo = _pick(rng, _ENDPOINTS)
            hi = _pick(rng, _ENDPOINTS)
            if rng.random() < 0.8 and hi < lo:
                lo, hi = hi, lo
            constraints.add((_pick(rng, _PROPS), Interval(lo, hi)))
        restrictions = set()
        if depth > 0:
            for _ in range(int(rng.integers(0, 3))):
                if rng.random() < 0.5:
                    restrictions.add((_pick(rng, _ROLES), simple(depth - 1)))
        sc = SimpleConcept(atoms=atoms, bottom=rng.random() < 0.03,
                           constraints=frozenset(constraints),
                           restrictions=frozenset(restrictions))
        if sc.is_empty:
            sc = SimpleConcept(atoms=frozenset((_pick(rng, _ONAMES),)))
        return sc

    def full() -> FullConcept:
        n = int(rng.integers(1, 4))
        return FullConcept(tuple(simple(int(rng.integers(0, 3)))
                                 for _ in range(n)))

    while True:
        c = full()
        if _exists_nodes(c) <= 8:
            break
    d = full()
    return kb, onto, c, d
