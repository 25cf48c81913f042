"""Reference semantic checkers: model checking, brute-force decisions,
and canonical models."""

import pytest
from numpy.random import Generator, PCG64

from plreason.model import (BOTTOM, Disjoint, FullConcept, Functional,
                            Inclusion, Interval, KnowledgeBase, Range,
                            SimpleConcept, as_full, atom, build_closure,
                            conj, exists, has)
from plreason.normalize import Plain, normalize_simple
from plreason.refcheck import (FiniteInterpretation, PointedModel,
                               RefcheckLimitError, axioms_hold,
                               brute_force_satisfiable,
                               brute_force_subsumes, canonical_model,
                               model_check)

from helpers import rand_kb, rand_simple, vocab_kb


def _tiny_model():
    interp = FiniteInterpretation()
    interp.domain = {0, 1}
    interp.concept_ext = {"A": {0}, "B": {0, 1}}
    interp.role_ext = {"r": {(0, 1)}}
    interp.prop_ext = {"f": {(0, 5)}}
    return interp


# ---------------------------------------------------------------------------
# Model checking


def test_model_check_atoms_and_constraints():
    m = PointedModel(_tiny_model(), 0)
    assert model_check(m, as_full(atom("A")))
    assert model_check(m, as_full(conj(atom("A"), atom("B"))))
    assert not model_check(m, as_full(atom("C")))
    assert model_check(m, as_full(has("f", 0, 9)))
    assert not model_check(m, as_full(has("f", 6, 9)))
    assert model_check(m, as_full(exists("r", atom("B"))))
    assert not model_check(m, as_full(exists("r", atom("A"))))
    assert not model_check(m, as_full(BOTTOM))
    # union: one satisfied disjunct suffices
    assert model_check(m, FullConcept.of(atom("C"), atom("A")))


def test_axioms_hold_each_kind():
    interp = _tiny_model()
    assert axioms_hold(interp, KnowledgeBase.of(Inclusion("A", "B")))
    assert not axioms_hold(interp, KnowledgeBase.of(Inclusion("B", "A")))
    assert not axioms_hold(interp, KnowledgeBase.of(Disjoint("A", "B")))
    assert axioms_hold(interp, KnowledgeBase.of(Functional("r")))
    interp.role_ext["r"].add((0, 0))
    assert not axioms_hold(interp, KnowledgeBase.of(Functional("r")))
    interp.role_ext["r"] = {(0, 1)}
    assert axioms_hold(interp, KnowledgeBase.of(Range("r", "B")))
    assert not axioms_hold(interp, KnowledgeBase.of(Range("r", "A")))


# ---------------------------------------------------------------------------
# Brute-force decisions


def test_brute_force_basic_cases():
    kb = vocab_kb()
    assert brute_force_subsumes(kb, as_full(atom("HeartRate")),
                                as_full(atom("AnyData")))
    assert not brute_force_subsumes(kb, as_full(atom("AnyData")),
                                    as_full(atom("HeartRate")))
    assert brute_force_subsumes(kb, as_full(BOTTOM), as_full(atom("X")))
    assert brute_force_subsumes(
        kb, as_full(conj(atom("AnyData"), atom("AnyPurpose"))),
        as_full(atom("Whatever")))  # unsatisfiable lhs


def test_brute_force_intervals():
    kb = KnowledgeBase.of()
    assert brute_force_subsumes(kb, as_full(has("f", 5, 5)),
                                as_full(has("f", 4, 6)))
    assert not brute_force_subsumes(kb, as_full(has("f", 4, 6)),
                                    as_full(has("f", 5, 5)))
    # union on the rhs covering the lhs interval pointwise
    assert brute_force_subsumes(
        kb, as_full(has("f", 0, 1)),
        FullConcept.of(has("f", 0, 0), has("f", 1, 1)))


def test_brute_force_functionality_matters():
    c = conj(exists("r", atom("A")), exists("r", atom("B")))
    d = exists("r", conj(atom("A"), atom("B")))
    assert not brute_force_subsumes(KnowledgeBase.of(), as_full(c), as_full(d))
    assert brute_force_subsumes(KnowledgeBase.of(Functional("r")),
                                as_full(c), as_full(d))


def test_brute_force_range_matters():
    c = exists("r", atom("A"))
    d = exists("r", conj(atom("A"), atom("RA")))
    assert not brute_force_subsumes(KnowledgeBase.of(), as_full(c), as_full(d))
    assert brute_force_subsumes(KnowledgeBase.of(Range("r", "RA")),
                                as_full(c), as_full(d))


def test_brute_force_satisfiable():
    kb = KnowledgeBase.of(Disjoint("A", "B"))
    assert not brute_force_satisfiable(kb, as_full(conj(atom("A"), atom("B"))))
    assert brute_force_satisfiable(
        kb, FullConcept.of(conj(atom("A"), atom("B")), atom("C")))
    assert not brute_force_satisfiable(kb, as_full(has("f", 7, 2)))
    assert not brute_force_satisfiable(kb, as_full(exists("r", BOTTOM)))


def test_limits_are_refusals():
    big = atom("A")
    for i in range(12):
        big = exists("r", big)
    with pytest.raises(RefcheckLimitError):
        brute_force_subsumes(KnowledgeBase.of(), as_full(big), as_full(big))
    many_names = conj(*[atom(f"N{i}") for i in range(13)])
    with pytest.raises(RefcheckLimitError):
        brute_force_subsumes(KnowledgeBase.of(), as_full(many_names),
                             as_full(atom("A")))
    many_eps = conj(*[has(f"f{i}", 10 * i, 10 * i + 1) for i in range(4)])
    with pytest.raises(RefcheckLimitError):
        brute_force_subsumes(KnowledgeBase.of(), as_full(many_eps),
                             as_full(atom("A")))


# ---------------------------------------------------------------------------
# Canonical models


def test_canonical_model_satisfies_concept_and_kb():
    rng = Generator(PCG64(41))
    checked = 0
    for _ in range(200):
        kb = rand_kb(rng)
        mode = Plain(build_closure(kb))
        c = normalize_simple(mode, rand_simple(rng, depth=2))
        if c.bottom:
            continue
        m = canonical_model(mode, c)
        assert model_check(m, as_full(c))
        assert axioms_hold(m.interp, kb)
        checked += 1
    assert checked >= 120


def test_canonical_model_rejects_bottom():
    mode = Plain(build_closure(KnowledgeBase.of()))
    with pytest.raises(ValueError):
        canonical_model(mode, BOTTOM)
