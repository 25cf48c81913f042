"""End-to-end acceptance checks, one test per criterion so the verbose
run shows one pass/fail line each.  Expected answers come from the
independent reference checkers and truth tables, never from the engine
under test."""

import statistics
import time
from functools import lru_cache

from numpy.random import Generator, PCG64

from plreason.bench import gen_corpus, run_bench
from plreason.engine import (Engine, OPTION_PRESETS, options_for, plr,
                             plr_oracle)
from plreason.generators import sat3_encode, sat3_truth_table
from plreason.intervals import split_naive, split_refined
from plreason.model import (FullConcept, Inclusion, KnowledgeBase, as_full,
                            atom, conj, has)
from plreason.normalize import normalize_full
from plreason.oracle import (EMPTY_ONTOLOGY, compile_oracle,
                             single_atom_transform)
from plreason.refcheck import (RefcheckLimitError, brute_force_satisfiable,
                               brute_force_subsumes)

import helpers

ALL_VARIANTS = [(opt, splitter) for opt in sorted(OPTION_PRESETS)
                for splitter in ("naive", "refined")]


@lru_cache(maxsize=1)
def _reference_corpus():
    """The first 10,000 seeded random instances the bounded reference
    checker can decide, with its subsumption verdicts."""
    out = []
    seed = 0
    while len(out) < 10_000:
        kb, c, d = helpers.rand_instance(seed)
        seed += 1
        try:
            expected = brute_force_subsumes(kb, c, d)
        except RefcheckLimitError:
            continue
        out.append((kb, c, d, expected))
    return out


def test_criterion_1_worked_splitting_examples():
    c = as_full(conj(has("f", 1, 9), atom("A")))
    d = as_full(has("f", 5, 12))
    c2 = as_full(has("f", 1, 10))
    d2 = as_full(has("f", 5, 10))
    split_naive(c, d), split_refined(c2, d2)  # warmup
    t0 = time.perf_counter()
    naive_out = split_naive(c, d)
    refined_out = split_refined(c2, d2)
    elapsed = time.perf_counter() - t0
    assert naive_out.disjuncts == tuple(
        conj(has("f", lo, hi), atom("A"))
        for lo, hi in [(1, 1), (2, 4), (5, 5), (6, 8), (9, 9)])
    assert refined_out.disjuncts == (has("f", 1, 4), has("f", 5, 10))
    assert elapsed < 0.001


def test_criterion_2_compliance_fixtures():
    kb = helpers.vocab_kb()
    consent = helpers.befit_consent()
    business = helpers.befit_business()
    first = FullConcept.of(consent.disjuncts[0])
    gdpr_kb = KnowledgeBase.of(Inclusion("Art6_1_a_Consent", "LegalBasis"))
    gdpr_b = helpers.gdpr_business_policy()
    gdpr_c = helpers.gdpr_consent_concept()
    plr(kb, business, first)  # warmup
    t0 = time.perf_counter()
    a = plr(kb, business, first)
    b = plr(gdpr_kb, gdpr_b, gdpr_c)
    c = plr(gdpr_kb, gdpr_c, gdpr_b)
    elapsed = time.perf_counter() - t0
    assert a is True
    assert b is True
    assert c is False
    assert elapsed < 0.010


def test_criterion_3_reference_agreement_all_variants():
    t0 = time.perf_counter()
    for kb, c, d, expected in _reference_corpus():
        for opt, splitter in ALL_VARIANTS:
            got = plr(kb, c, d, options_for(opt, splitter))
            assert got == expected, (kb, c, d, opt, splitter)
    assert time.perf_counter() - t0 < 600


def test_criterion_4_cnf_hardness_reduction():
    rng = Generator(PCG64(99))
    kb = KnowledgeBase.of()
    for _ in range(500):
        n_vars = int(rng.integers(1, 9))
        clauses = [tuple(int(rng.integers(1, n_vars + 1))
                         * (1 if rng.random() < 0.5 else -1)
                         for _ in range(3))
                   for _ in range(int(rng.integers(1, 16)))]
        c, d = sat3_encode(clauses)
        assert plr(kb, c, d) == (not sat3_truth_table(clauses)), clauses


def test_criterion_5_oracle_mode_coherence():
    checked = 0
    # compiled knowledge base replaces the oracle
    for seed in range(600):
        kb, onto, c, d = helpers.rand_ibq_instance(seed)
        (c1, d1), o_star = single_atom_transform([c, d])
        o2 = onto.union(o_star)
        eng = Engine.with_oracle(kb, o2)
        cn = normalize_full(eng.mode, c1)
        dn = normalize_full(eng.mode, d1)
        assert eng.check(cn, dn) == plr(compile_oracle(kb, o2), cn, dn), seed
        checked += 1
    # the oracle-mode driver with an empty oracle degenerates to the
    # plain driver
    for seed in range(600):
        kb, c, d = helpers.rand_instance(seed)
        eng = Engine.with_oracle(kb, EMPTY_ONTOLOGY)
        cn = normalize_full(eng.mode, c)
        dn = normalize_full(eng.mode, d)
        assert eng.check(cn, dn) == plr(kb, cn, dn), seed
        checked += 1
    assert checked >= 1000


def test_criterion_6_pilot_scale_latency(tmp_path):
    corpus = tmp_path / "pxs"
    gen_corpus(corpus, "pxs", seed=11, queries_per_policy=100)
    pre = run_bench(corpus, opt="pre", repeat=1)
    assert len(pre.rows) == 12_000
    assert max(r.n_i for r in pre.rows) <= 1
    assert pre.cache_hit_rate == 1.0
    pre_median = statistics.median(r.ns_median for r in pre.rows)
    assert pre_median < 1e6  # under one millisecond
    cached = run_bench(corpus, opt="c", repeat=1)
    c_median = statistics.median(r.ns_median for r in cached.rows)
    assert c_median <= 5 * pre_median


def test_criterion_7_interval_count_scaling(tmp_path):
    corpus = tmp_path / "p2"
    gen_corpus(corpus, "O1", "P2", seed=3, count=100)
    plain = run_bench(corpus, opt="c", splitter="refined",
                      repeat=1).group_medians()
    with_2n = run_bench(corpus, opt="c2n", splitter="refined",
                        repeat=1).group_medians()
    assert {2, 3, 5} <= plain.keys() and {2, 5} <= with_2n.keys()
    assert plain[3] >= 2 * plain[2]
    assert with_2n[5] < 2 * with_2n[2]


def test_criterion_8_validator_soundness():
    for kb, c, d, _ in _reference_corpus():
        engine = Engine(kb)
        for concept in (c, d):
            try:
                expected = brute_force_satisfiable(kb, concept)
            except RefcheckLimitError:
                continue
            assert engine.satisfiable(concept) == expected, (kb, concept)
