"""Normalization rewrite rules, both plain and oracle mode."""

from numpy.random import Generator, PCG64

from plreason.model import (BOTTOM, Functional, Inclusion, Disjoint,
                            Interval, KnowledgeBase, Range, SimpleConcept,
                            as_full, atom, build_closure, conj, exists, has)
from plreason.normalize import (Ibq, Plain, is_satisfiable, normalize_full,
                                normalize_simple)
from plreason.oracle import EMPTY_ONTOLOGY, saturate, shift_axioms
from plreason.refcheck import RefcheckLimitError, brute_force_subsumes

from helpers import befit_consent, rand_kb, rand_simple, vocab_kb


def plain_mode(kb):
    return Plain(build_closure(kb))


def ibq_mode(kb, onto=EMPTY_ONTOLOGY):
    k_minus, o_plus = shift_axioms(kb, onto)
    return Ibq(build_closure(k_minus), saturate(o_plus))


# ---------------------------------------------------------------------------
# Worked rule examples


def test_empty_interval_collapses():
    mode = plain_mode(KnowledgeBase.of())
    assert normalize_simple(mode, has("f", 5, 2)) == BOTTOM


def test_functional_property_merge():
    kb = KnowledgeBase.of(Functional("has_duration"))
    mode = plain_mode(kb)
    c = conj(has("has_duration", 1, 10), has("has_duration", 5, 20))
    assert normalize_simple(mode, c) == has("has_duration", 5, 10)


def test_non_functional_property_not_merged_in_plain_mode():
    mode = plain_mode(KnowledgeBase.of())
    c = conj(has("f", 1, 10), has("f", 5, 20))
    assert normalize_simple(mode, c) == c


def test_non_functional_property_merged_in_oracle_mode():
    mode = ibq_mode(KnowledgeBase.of())
    c = conj(has("f", 1, 10), has("f", 5, 20))
    assert normalize_simple(mode, c) == has("f", 5, 10)


def test_functional_merge_to_empty_collapses():
    kb = KnowledgeBase.of(Functional("f"))
    mode = plain_mode(kb)
    c = conj(has("f", 1, 3), has("f", 7, 9))
    assert normalize_simple(mode, c) == BOTTOM


def test_functional_role_merge():
    kb = KnowledgeBase.of(Functional("has_storage"))
    mode = plain_mode(kb)
    c = conj(exists("has_storage", atom("A")),
             exists("has_storage", atom("B")))
    assert normalize_simple(mode, c) == exists(
        "has_storage", conj(atom("A"), atom("B")))


def test_range_pushed_into_fillers():
    kb = KnowledgeBase.of(Range("has_storage", "AnyStorage"),
                          Range("has_location", "AnyLocation"))
    mode = plain_mode(kb)
    c = exists("has_storage", exists("has_location", atom("EU")))
    expected = exists(
        "has_storage",
        conj(atom("AnyStorage"),
             exists("has_location", conj(atom("EU"), atom("AnyLocation")))))
    assert normalize_simple(mode, c) == expected


def test_range_not_added_twice():
    kb = KnowledgeBase.of(Range("r", "A"))
    mode = plain_mode(kb)
    c = exists("r", atom("A"))
    assert normalize_simple(mode, c) == c


def test_range_skips_bottom_filler():
    kb = KnowledgeBase.of(Range("r", "A"))
    mode = plain_mode(kb)
    assert normalize_simple(mode, exists("r", BOTTOM)) == BOTTOM


def test_disjoint_atoms_collapse():
    kb = vocab_kb()
    mode = plain_mode(kb)
    c = conj(atom("AnyData"), atom("AnyPurpose"), exists("r", atom("X")))
    assert normalize_simple(mode, c) == BOTTOM


def test_disjointness_lifted_through_inclusions():
    kb = vocab_kb()  # HeartRate ⊑ ... ⊑ AnyData, disj(AnyData, AnyPurpose)
    mode = plain_mode(kb)
    assert normalize_simple(mode, conj(atom("HeartRate"),
                                       atom("AnyPurpose"))) == BOTTOM


def test_range_can_trigger_collapse():
    kb = KnowledgeBase.of(Range("has_data", "AnyData"),
                          Disjoint("AnyData", "AnyPurpose"))
    mode = plain_mode(kb)
    c = exists("has_data", atom("AnyPurpose"))
    assert normalize_simple(mode, c) == BOTTOM


# ---------------------------------------------------------------------------
# Full concepts and satisfiability


def test_normalize_full_preserves_order_and_bottoms():
    from plreason.model import FullConcept

    mode = plain_mode(KnowledgeBase.of())
    two = normalize_full(mode, FullConcept((BOTTOM, atom("A"))))
    assert two.disjuncts == (BOTTOM, atom("A"))


def test_befit_consent_normalizes_by_range_only():
    """The consent fixture is normal except for the declared range of
    has_data, which adds AnyData to its fillers; re-normalizing is then
    the identity."""
    mode = plain_mode(vocab_kb())
    c = befit_consent()
    out = normalize_full(mode, c)
    assert not any(d.bottom for d in out.disjuncts)

    def strip(sc):
        from plreason.model import SimpleConcept

        return SimpleConcept(
            atoms=sc.atoms - {"AnyData"}, bottom=sc.bottom,
            constraints=sc.constraints,
            restrictions=frozenset(
                (r, strip(ch) if r == "has_data" else ch)
                for r, ch in sc.restrictions))

    assert tuple(strip(d) for d in out.disjuncts) == c.disjuncts
    assert normalize_full(mode, out) == out


def test_is_satisfiable_rules():
    kb = KnowledgeBase.of(Disjoint("A", "B"))
    mode = plain_mode(kb)
    ab = conj(atom("A"), atom("B"))
    assert not is_satisfiable(mode, as_full(ab))
    from plreason.model import FullConcept
    assert is_satisfiable(mode, FullConcept((ab, atom("C"))))


# ---------------------------------------------------------------------------
# Properties


def test_idempotence_generated():
    rng = Generator(PCG64(11))
    for _ in range(300):
        kb = rand_kb(rng)
        c = rand_simple(rng, depth=2)
        for mode in (plain_mode(kb), ibq_mode(kb)):
            once = normalize_simple(mode, c)
            assert normalize_simple(mode, once) == once


def test_bottom_propagation_generated():
    rng = Generator(PCG64(12))
    for _ in range(200):
        kb = rand_kb(rng)
        mode = plain_mode(kb)
        inner = rand_simple(rng, depth=1)
        poisoned = exists("r1", exists("r0", conj(inner, BOTTOM)))
        assert normalize_simple(mode, poisoned) == BOTTOM
        poisoned2 = exists("r1", conj(inner, has("f1", 9, 0)))
        assert normalize_simple(mode, poisoned2) == BOTTOM


def test_soundness_vs_brute_force():
    """kb ⊨ c ≡ normalize(c), by mutual brute-force subsumption."""
    rng = Generator(PCG64(13))
    checked = 0
    for _ in range(200):
        kb = rand_kb(rng)
        mode = plain_mode(kb)
        c = rand_simple(rng, depth=2)
        n = normalize_simple(mode, c)
        try:
            fwd = brute_force_subsumes(kb, as_full(c), as_full(n))
            bwd = brute_force_subsumes(kb, as_full(n), as_full(c))
        except RefcheckLimitError:
            continue
        assert fwd and bwd
        checked += 1
    assert checked >= 150
