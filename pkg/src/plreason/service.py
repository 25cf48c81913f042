"""HTTP service wrapping the reasoning engine.

Requests carry documents in the same text formats as the CLI (DSL or
JSON); the service parses them, runs the requested operation, and
returns results as JSON.  Parsed knowledge bases (with their closure
indexes / saturated oracles) are cached by content, so a client issuing
many checks against one KB pays the construction cost once.
"""

from __future__ import annotations

from functools import lru_cache

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import formats
from .engine import Engine, options_for
from .model import SignatureError
from .oracle import compile_oracle, single_atom_transform

app = FastAPI(title="plreason", version="0.1.0")


class CheckRequest(BaseModel):
    kb: str
    ontology: str | None = None
    compile_oracle: bool = False
    lhs: str
    rhs: str
    opt: str = "plain"
    splitter: str = "naive"


class CheckResponse(BaseModel):
    subsumed: bool


class ValidateRequest(BaseModel):
    kb: str
    ontology: str | None = None
    policy: str
    opt: str = "plain"


class ValidateResponse(BaseModel):
    satisfiable: bool
    per_disjunct: list[bool]


class NormalizeRequest(BaseModel):
    kb: str
    ontology: str | None = None
    policy: str


class PolicyResponse(BaseModel):
    policy: str


class SplitRequest(BaseModel):
    kb: str = "plr-format 1"
    lhs: str
    rhs: str
    splitter: str = "naive"


class CompileRequest(BaseModel):
    kb: str
    ontology: str


class KbResponse(BaseModel):
    kb: str


class SingleAtomRequest(BaseModel):
    policies: list[str]


class SingleAtomResponse(BaseModel):
    policies: list[str]
    ontology: str


@lru_cache(maxsize=32)
def _engine(kb_text: str, onto_text: str | None, compiled: bool,
            opt: str, splitter: str) -> Engine:
    kb = formats.parse_kb(kb_text)
    options = options_for(opt, splitter)
    if onto_text is None:
        return Engine(kb, options)
    onto = formats.parse_ontology(onto_text)
    if compiled:
        return Engine(compile_oracle(kb, onto), options)
    return Engine.with_oracle(kb, onto, options)


def _bad_request(exc: Exception):
    return HTTPException(status_code=422, detail=str(exc))


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/check", response_model=CheckResponse)
def check(req: CheckRequest) -> CheckResponse:
    try:
        engine = _engine(req.kb, req.ontology, req.compile_oracle,
                         req.opt, req.splitter)
        lhs = formats.parse_policy(req.lhs)
        rhs = formats.parse_policy(req.rhs)
        return CheckResponse(subsumed=engine.check(lhs, rhs))
    except (formats.ParseError, SignatureError, ValueError) as exc:
        raise _bad_request(exc) from exc


@app.post("/validate", response_model=ValidateResponse)
def validate(req: ValidateRequest) -> ValidateResponse:
    from . import normalize as norm

    try:
        engine = _engine(req.kb, req.ontology, False, req.opt, "naive")
        policy = formats.parse_policy(req.policy)
        per = [not norm.normalize_simple(engine.mode, d).bottom
               for d in policy.disjuncts]
        return ValidateResponse(satisfiable=any(per), per_disjunct=per)
    except (formats.ParseError, SignatureError, ValueError) as exc:
        raise _bad_request(exc) from exc


@app.post("/normalize", response_model=PolicyResponse)
def normalize(req: NormalizeRequest) -> PolicyResponse:
    from . import normalize as norm

    try:
        engine = _engine(req.kb, req.ontology, False, "plain", "naive")
        policy = formats.parse_policy(req.policy)
        out = norm.normalize_full(engine.mode, policy)
        return PolicyResponse(policy=formats.serialize_policy(out))
    except (formats.ParseError, SignatureError, ValueError) as exc:
        raise _bad_request(exc) from exc


@app.post("/split", response_model=PolicyResponse)
def split(req: SplitRequest) -> PolicyResponse:
    from . import intervals

    try:
        lhs = formats.parse_policy(req.lhs)
        rhs = formats.parse_policy(req.rhs)
        if req.splitter == "refined":
            out = intervals.split_refined(lhs, rhs)
        elif req.splitter == "naive":
            out = intervals.split_naive(lhs, rhs)
        else:
            raise ValueError(f"unknown splitter {req.splitter!r}")
        return PolicyResponse(policy=formats.serialize_policy(out))
    except (formats.ParseError, ValueError) as exc:
        raise _bad_request(exc) from exc


@app.post("/compile", response_model=KbResponse)
def compile_(req: CompileRequest) -> KbResponse:
    try:
        kb = formats.parse_kb(req.kb)
        onto = formats.parse_ontology(req.ontology)
        return KbResponse(kb=formats.serialize_kb(compile_oracle(kb, onto)))
    except (formats.ParseError, SignatureError, ValueError) as exc:
        raise _bad_request(exc) from exc


@app.post("/single-atom", response_model=SingleAtomResponse)
def single_atom(req: SingleAtomRequest) -> SingleAtomResponse:
    try:
        policies = [formats.parse_policy(p) for p in req.policies]
        out, o_star = single_atom_transform(policies)
        return SingleAtomResponse(
            policies=[formats.serialize_policy(p) for p in out],
            ontology=formats.serialize_ontology(o_star))
    except (formats.ParseError, ValueError) as exc:
        raise _bad_request(exc) from exc
