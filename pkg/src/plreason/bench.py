"""Benchmark corpora and the timing harness.

Corpus directory layout::

    metadata.json   profile, seed, declared endpoints, checksums
    kb.pl           knowledge base
    ontology.pl     external ontology (optional)
    policies/       one .pol file per policy (b* business, c* consent)
    queries.json    manifest of (lhs, rhs, optional expected answer)

``run_bench`` verifies checksums, replays every query through a chosen
engine configuration, and reports the median wall time per query over
the repeat runs (warmup excluded), grouped by the tractability
parameter n_i of the normalized lhs.  ``PLR_THREADS`` bounds the number
of workers; each worker confines its own engine.
"""

from __future__ import annotations

import csv
import hashlib
import json
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import generators as gen
from .engine import Engine, EngineOptions, interval_count, options_for, thread_budget
from .formats import (FORMAT_HEADER, parse_kb, parse_ontology, parse_policy,
                      serialize_kb, serialize_ontology, serialize_policy)
from .intervals import _iter_constraints

CSV_COLUMNS = ["query_id", "n_i", "answer", "ns_median", "opt_set",
               "splitter", "cache_hit_rate"]


class CorpusError(ValueError):
    pass


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _declared_endpoints(policies) -> list:
    out = set()
    for p in policies:
        for f, iv in _iter_constraints(p):
            out.add((f, iv.lo))
            out.add((f, iv.hi))
    return sorted(out)


def write_corpus(out_dir, kb, business, consents, queries, meta,
                 ontology=None) -> None:
    """Write a corpus directory; `queries` is a list of
    (business_index, consent_index, expected-or-None)."""
    out = Path(out_dir)
    (out / "policies").mkdir(parents=True, exist_ok=True)
    files = {"kb.pl": serialize_kb(kb)}
    if ontology is not None:
        files["ontology.pl"] = serialize_ontology(ontology)
    width = max(4, len(str(max(len(business), len(consents)))))
    b_names, c_names = [], []
    for i, p in enumerate(business):
        name = f"policies/b{i:0{width}d}.pol"
        b_names.append(name)
        files[name] = serialize_policy(p)
    for i, p in enumerate(consents):
        name = f"policies/c{i:0{width}d}.pol"
        c_names.append(name)
        files[name] = serialize_policy(p)
    manifest = {"format": FORMAT_HEADER, "queries": [
        {"id": f"q{qi:06d}", "lhs": b_names[bi], "rhs": c_names[ci],
         "expected": expected}
        for qi, (bi, ci, expected) in enumerate(queries)]}
    files["queries.json"] = json.dumps(manifest, indent=1) + "\n"
    for name, text in files.items():
        (out / name).write_text(text)
    meta = dict(meta)
    meta["format"] = FORMAT_HEADER
    meta["declared_endpoints"] = [list(e)
                                  for e in _declared_endpoints(consents)]
    meta["checksums"] = {name: _sha256(out / name) for name in sorted(files)}
    (out / "metadata.json").write_text(json.dumps(meta, indent=1) + "\n")


@dataclass
class Corpus:
    kb: object
    ontology: object
    business: dict      # file name -> FullConcept
    consents: dict
    queries: list       # of (id, lhs name, rhs name, expected)
    meta: dict


def load_corpus(corpus_dir) -> Corpus:
    root = Path(corpus_dir)
    meta_path = root / "metadata.json"
    if not meta_path.exists():
        raise CorpusError(f"no metadata.json in {root}")
    meta = json.loads(meta_path.read_text())
    for name, digest in meta.get("checksums", {}).items():
        path = root / name
        if not path.exists() or _sha256(path) != digest:
            raise CorpusError(f"checksum mismatch for {name}")
    kb = parse_kb((root / "kb.pl").read_text())
    ontology = None
    if (root / "ontology.pl").exists():
        ontology = parse_ontology((root / "ontology.pl").read_text())
    manifest = json.loads((root / "queries.json").read_text())
    business, consents = {}, {}
    queries = []
    for q in manifest["queries"]:
        for name, store in ((q["lhs"], business), (q["rhs"], consents)):
            if name not in store:
                store[name] = parse_policy((root / name).read_text())
        queries.append((q["id"], q["lhs"], q["rhs"], q.get("expected")))
    return Corpus(kb, ontology, business, consents, queries, meta)


# ---------------------------------------------------------------------------
# Corpus generation entry point (CLI `gen`)


def gen_corpus(out_dir, profile: str, policies: str = "P1", seed: int = 1,
               queries_per_policy: int = 100, count: int | None = None) -> None:
    if profile in ("pxs", "tr"):
        kb = gen.pilot_vocabulary()
        n_policies = 120 if profile == "pxs" else 100
        rng = gen.make_rng(seed)
        business = [gen.pilot_base_policy(int(rng.integers(0, 2**63)),
                                          n_simple=gen._randint(rng, 2, 4))
                    for _ in range(n_policies)]
        consents, queries = [], []
        for bi, b in enumerate(business):
            for c in gen.gen_pilot_like(b, kb, queries_per_policy,
                                        int(rng.integers(0, 2**63))):
                queries.append((bi, len(consents), None))
                consents.append(c)
        meta = {"profile": profile, "seed": seed,
                "queries_per_policy": queries_per_policy}
        write_corpus(out_dir, kb, business, consents, queries, meta)
        return
    if profile not in gen.ONTOLOGY_PROFILES:
        raise CorpusError(f"unknown profile {profile!r}")
    if policies not in gen.POLICY_PROFILES:
        raise CorpusError(f"unknown policy profile {policies!r}")
    oprof = replace(gen.ONTOLOGY_PROFILES[profile], seed=seed)
    pprof = replace(gen.POLICY_PROFILES[policies], seed=seed + 1)
    kb = gen.gen_ontology(oprof)
    classes, roles, props = gen.onto_names(oprof)
    if count is None:
        count = 100 if policies == "P1" else 60
    corpus = gen.gen_policies(kb, pprof, count, classes=classes,
                              roles=roles, props=props)
    queries = [(bi, ci, None) for bi, ci in corpus.queries]
    meta = {"profile": profile, "policy_profile": policies, "seed": seed,
            "adjacent_ratio": oprof.adjacent_ratio, "count": count}
    write_corpus(out_dir, kb, corpus.business, corpus.consents, queries, meta)


# ---------------------------------------------------------------------------
# Benchmark execution


@dataclass
class BenchRow:
    query_id: str
    n_i: int
    answer: bool
    ns_median: int
    opt_set: str
    splitter: str
    cache_hit_rate: float | None = None
    timed_out: bool = False


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)
    opt_set: str = "plain"
    splitter: str = "naive"
    cache_hit_rate: float | None = None

    def group_medians(self) -> dict:
        """Median ns per n_i group."""
        groups = {}
        for row in self.rows:
            groups.setdefault(row.n_i, []).append(row.ns_median)
        return {ni: statistics.median(vals) for ni, vals in groups.items()}

    def group_stats(self) -> dict:
        out = {}
        for ni, vals in self._grouped().items():
            vals = sorted(vals)
            out[ni] = {
                "count": len(vals),
                "mean_ns": statistics.fmean(vals),
                "median_ns": statistics.median(vals),
                "p90_ns": vals[min(len(vals) - 1, int(0.9 * len(vals)))],
            }
        return out

    def _grouped(self) -> dict:
        groups = {}
        for row in self.rows:
            groups.setdefault(row.n_i, []).append(row.ns_median)
        return groups

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for row in self.rows:
                w.writerow([row.query_id, row.n_i,
                            "true" if row.answer else "false",
                            row.ns_median, row.opt_set, row.splitter,
                            "" if row.cache_hit_rate is None
                            else f"{row.cache_hit_rate:.4f}"])


def _make_engine(corpus: Corpus, options: EngineOptions) -> Engine:
    if corpus.ontology is not None:
        engine = Engine.with_oracle(corpus.kb, corpus.ontology, options)
    else:
        engine = Engine(corpus.kb, options)
    if options.pre_normalized:
        declared = {(f, int(v)) for f, v in
                    corpus.meta.get("declared_endpoints", [])}
        engine.prenormalize(list(corpus.business.values()), declared)
    return engine


def run_bench(corpus_dir, opt: str = "c", splitter: str = "naive",
              repeat: int = 3, timeout_ms: float | None = None) -> BenchReport:
    corpus = load_corpus(corpus_dir)
    options = options_for(opt, splitter)
    workers = thread_budget()

    def run_chunk(queries) -> list:
        engine = _make_engine(corpus, options)
        rows = []
        for qid, lhs_name, rhs_name, expected in queries:
            lhs = corpus.business[lhs_name]
            rhs = corpus.consents[rhs_name]
            answer = engine.check(lhs, rhs)  # warmup (fills caches)
            if expected is not None and answer != expected:
                raise CorpusError(
                    f"query {qid}: engine answered {answer}, "
                    f"manifest expected {expected}")
            times = []
            for _ in range(max(1, repeat)):
                t0 = time.perf_counter_ns()
                engine.check(lhs, rhs)
                times.append(time.perf_counter_ns() - t0)
            ns = int(statistics.median(times))
            n_i = interval_count(engine._normalize(lhs))
            rows.append(BenchRow(
                query_id=qid, n_i=n_i, answer=answer, ns_median=ns,
                opt_set=opt, splitter=splitter,
                timed_out=(timeout_ms is not None
                           and ns > timeout_ms * 1e6)))
        hits = engine.counters["pre_hits"]
        misses = engine.counters["pre_misses"]
        rate = hits / (hits + misses) if (hits + misses) else None
        return rows, rate

    chunks = [corpus.queries[i::workers] for i in range(workers)]
    chunks = [c for c in chunks if c]
    results = []
    if len(chunks) == 1:
        results.append(run_chunk(chunks[0]))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_chunk, chunks))

    report = BenchReport(opt_set=opt, splitter=splitter)
    rates = [rate for _, rate in results if rate is not None]
    if options.pre_normalized:
        report.cache_hit_rate = (sum(rates) / len(rates)) if rates else 0.0
    for rows, _ in results:
        for row in rows:
            row.cache_hit_rate = report.cache_hit_rate
        report.rows.extend(rows)
    report.rows.sort(key=lambda r: r.query_id)
    return report
