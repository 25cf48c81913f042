"""Full-query subsumption drivers: normalize the lhs (and optionally
the rhs), split its intervals against the rhs endpoints, then require
every lhs disjunct to pass structural subsumption against some rhs
disjunct.

Optimization variants are combinations of:

* ``c``   — cache normalization results and split results (the split
  cache is keyed by the normalized lhs plus the rhs endpoint profile,
  since splitting depends on the rhs only through its endpoints);
* ``2n``  — normalize the rhs as well before splitting, shrinking its
  endpoint profile;
* ``pre`` — pre-normalize a fixed set of lhs policies and pre-split
  them against the endpoints declared for future rhs policies (implies
  caches).

An engine is safe for concurrent queries with caches disabled; with
caches enabled, confine one engine instance per worker (the benchmark
harness does exactly that).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from . import intervals, normalize as norm, sts as sts_mod
from .model import (FullConcept, KnowledgeBase, SignatureError,
                    as_full, build_closure, check_namespaces,
                    concept_signature)
from .oracle import EMPTY_ONTOLOGY, ExternalOntology, saturate, shift_axioms

NAIVE, REFINED = "naive", "refined"


@dataclass(frozen=True)
class EngineOptions:
    use_caches: bool = False
    normalize_rhs: bool = False
    splitter: str = NAIVE
    pre_normalized: bool = False

    def __post_init__(self):
        if self.splitter not in (NAIVE, REFINED):
            raise ValueError(f"unknown splitter: {self.splitter}")
        if self.pre_normalized and not self.use_caches:
            object.__setattr__(self, "use_caches", True)


OPTION_PRESETS = {
    "plain": EngineOptions(),
    "c": EngineOptions(use_caches=True),
    "2n": EngineOptions(normalize_rhs=True),
    "c2n": EngineOptions(use_caches=True, normalize_rhs=True),
    "pre": EngineOptions(pre_normalized=True),
    "pre2n": EngineOptions(pre_normalized=True, normalize_rhs=True),
}


def options_for(opt: str, splitter: str = NAIVE) -> EngineOptions:
    try:
        base = OPTION_PRESETS[opt]
    except KeyError:
        raise ValueError(f"unknown option set: {opt!r} "
                         f"(expected one of {sorted(OPTION_PRESETS)})") from None
    return replace(base, splitter=splitter)


def interval_count(c) -> int:
    """The tractability parameter n_i: the maximum number of interval
    constraints occurring in a single disjunct (at any depth)."""
    def count(sc) -> int:
        return len(sc.constraints) + sum(count(ch) for _, ch in sc.restrictions)

    return max(count(d) for d in as_full(c).disjuncts)


class Engine:
    def __init__(self, kb: KnowledgeBase, options: EngineOptions | None = None,
                 ontology: ExternalOntology | None = None):
        self.options = options or EngineOptions()
        self.kb = kb
        if ontology is None:
            self.oracle = None
            self.mode = norm.Plain(build_closure(kb))
        else:
            k_minus, o_plus = shift_axioms(kb, ontology)
            self.oracle = saturate(o_plus)
            self.k_minus = k_minus
            self.mode = norm.Ibq(build_closure(k_minus), self.oracle)
        self._norm_cache = {}
        self._split_cache = {}
        self._presplit = {}
        self._declared = {}
        self.counters = {"norm_hits": 0, "split_hits": 0,
                         "pre_hits": 0, "pre_misses": 0}

    @staticmethod
    def with_oracle(kb: KnowledgeBase, ontology: ExternalOntology,
                    options: EngineOptions | None = None) -> "Engine":
        return Engine(kb, options, ontology=ontology)

    # -- pipeline pieces ---------------------------------------------------

    def _check_query_signature(self, *concepts) -> None:
        check_namespaces(self.kb, *concepts)
        if self.oracle is None:
            return
        for c in concepts:
            names, roles, props = concept_signature(c)
            bad = (roles | props) & (self.oracle.concept_names
                                     | self.oracle.role_names)
            bad |= names & self.oracle.role_names
            if bad:
                raise SignatureError(
                    "query roles/properties may only share concept names "
                    f"with the oracle signature; offending: {sorted(bad)}")

    def _normalize(self, c: FullConcept) -> FullConcept:
        if not self.options.use_caches:
            return norm.normalize_full(self.mode, c)
        hit = self._norm_cache.get(c)
        if hit is not None:
            self.counters["norm_hits"] += 1
            return hit
        out = norm.normalize_full(self.mode, c)
        self._norm_cache[c] = out
        return out

    def _split(self, cn: FullConcept, profile: tuple) -> FullConcept:
        refined = self.options.splitter == REFINED
        if not self.options.use_caches:
            return intervals.split_with_profile(cn, profile, refined)
        key = (cn, profile)
        hit = self._split_cache.get(key)
        if hit is not None:
            self.counters["split_hits"] += 1
            return hit
        out = intervals.split_with_profile(cn, profile, refined)
        self._split_cache[key] = out
        return out

    # -- public API --------------------------------------------------------

    def prenormalize(self, policies, declared_endpoints) -> None:
        """Normalize the given lhs policies and pre-split them against
        the declared endpoints, so later checks whose rhs endpoints fall
        inside the declared set are pure retrieval.

        Each declared endpoint is a (property, value) pair, optionally
        extended with a bound class ("lower"/"upper"/"both", e.g. a
        legally mandated minimum is a lower bound).  Bare pairs are
        split as both-class endpoints, which stays interval safe for
        any rhs drawing its endpoints from the declared set.
        """
        declared = {}
        for entry in declared_endpoints:
            if len(entry) == 2:
                (f, v), cls = entry, intervals.BOTH
            else:
                f, v, cls = entry
            prev = declared.get((f, v))
            if prev is not None and prev != cls:
                cls = intervals.BOTH
            declared[(f, v)] = cls
        self._declared = declared
        profile = tuple(sorted(
            (f, v, cls) for (f, v), cls in declared.items()))
        for p in policies:
            p = as_full(p)
            cn = self._normalize(p)
            refined = self.options.splitter == REFINED
            self._presplit[p] = intervals.split_with_profile(cn, profile, refined)

    def check(self, c, d) -> bool:
        c, d = as_full(c), as_full(d)
        self._check_query_signature(c, d)
        cn = self._normalize(c)
        dn = norm.normalize_full(self.mode, d) if self.options.normalize_rhs else d
        profile = intervals.endpoint_profile(
            dn, refined=self.options.splitter == REFINED)
        cs = None
        if self.options.pre_normalized and c in self._presplit:
            def covered(f, v, cls):
                declared = self._declared.get((f, v))
                if declared is None:
                    return False
                if self.options.splitter != REFINED:
                    return True  # the naive splitter ignores bound classes
                return declared in (intervals.BOTH, cls)

            if all(covered(f, v, cls) for f, v, cls in profile):
                cs = self._presplit[c]
                self.counters["pre_hits"] += 1
            else:
                self.counters["pre_misses"] += 1
        if cs is None:
            cs = self._split(cn, profile)
        if self.oracle is None:
            idx = self.mode.idx
            return all(
                any(sts_mod.sts(idx, ci, dj) for dj in dn.disjuncts)
                for ci in cs.disjuncts)
        memo = {}
        return all(
            any(sts_mod.sts_oracle(self.oracle, ci, dj, memo)
                for dj in dn.disjuncts)
            for ci in cs.disjuncts)

    def satisfiable(self, c) -> bool:
        c = as_full(c)
        self._check_query_signature(c)
        return norm.is_satisfiable(self.mode, c)


def plr(kb: KnowledgeBase, c, d, options: EngineOptions | None = None) -> bool:
    """One-shot subsumption check against a plain knowledge base."""
    return Engine(kb, options).check(c, d)


def plr_oracle(kb: KnowledgeBase, ontology: ExternalOntology, c, d,
               options: EngineOptions | None = None) -> bool:
    """One-shot subsumption check against a knowledge base plus an
    external ontology accessed as an oracle."""
    return Engine.with_oracle(kb, ontology, options).check(c, d)


def thread_budget() -> int:
    """Worker-count bound for the benchmark harness (PLR_THREADS)."""
    try:
        return max(1, int(os.environ.get("PLR_THREADS", "1")))
    except ValueError:
        return 1
