"""Text formats: a line-oriented DSL for knowledge bases and external
ontologies, an expression DSL for policies, and a JSON mirror of the
same model.  All documents start with the version header
``plr-format 1`` (a ``"format"`` field in JSON).

Policy grammar::

    policy  := simple ('|' simple)*
    simple  := term ('&' term)*
    term    := 'bottom'
             | NAME 'in' '[' INT ',' INT ']'
             | 'some' NAME '(' simple ')'
             | '(' simple ')'
             | NAME

Serialization is deterministic: structurally equal values serialize
identically (conjuncts and axioms are emitted in sorted order).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .model import (Disjoint, FullConcept, Functional, Inclusion, Interval,
                    KnowledgeBase, Range, SimpleConcept, sorted_constraints,
                    sorted_restrictions, struct_key)
from .oracle import (Definition, ExSub, ExternalOntology, ODisjoint, Sub,
                     SubEx)

FORMAT_HEADER = "plr-format 1"


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None,
                 col: int | None = None):
        loc = ""
        if line is not None:
            loc = f" at line {line}" + (f", column {col}" if col else "")
        super().__init__(f"{message}{loc}")
        self.line = line
        self.col = col


@dataclass
class PolicyDocument:
    concept: FullConcept
    id: str | None = None
    label: str | None = None


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_:.#/-]*")
_KEYWORDS = {"some", "in", "bottom"}


# ---------------------------------------------------------------------------
# Policy expression parsing


class _Tokens:
    _TOKEN_RE = re.compile(
        r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_:.#/-]*)|(?P<int>\d+)"
        r"|(?P<punct>[()\[\],&|]))")

    def __init__(self, text: str, line_offset: int = 0):
        self.tokens = []
        for lineno, line in enumerate(text.splitlines(), start=1 + line_offset):
            line = line.split("#", 1)[0]
            pos = 0
            while pos < len(line):
                m = self._TOKEN_RE.match(line, pos)
                if not m:
                    if line[pos:].strip():
                        raise ParseError(
                            f"unexpected character {line[pos:].strip()[0]!r}",
                            lineno, pos + 1)
                    break
                kind = m.lastgroup
                self.tokens.append((kind, m.group(kind), lineno, m.start(kind) + 1))
                pos = m.end()
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, expect: str | None = None):
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input"
                             + (f", expected {expect!r}" if expect else ""))
        self.pos += 1
        if expect is not None and tok[1] != expect:
            raise ParseError(f"expected {expect!r}, found {tok[1]!r}",
                             tok[2], tok[3])
        return tok


def _parse_simple(ts: _Tokens) -> SimpleConcept:
    parts = [_parse_term(ts)]
    while ts.peek() and ts.peek()[1] == "&":
        ts.next()
        parts.append(_parse_term(ts))
    out = SimpleConcept()
    for p in parts:
        out = out.meet(p)
    return out


def _parse_term(ts: _Tokens) -> SimpleConcept:
    tok = ts.next()
    kind, value, lineno, col = tok
    if value == "(":
        inner = _parse_simple(ts)
        ts.next(expect=")")
        return inner
    if kind != "name":
        raise ParseError(f"unexpected token {value!r}", lineno, col)
    if value == "bottom":
        return SimpleConcept(bottom=True)
    if value == "some":
        role = ts.next()
        if role[0] != "name" or role[1] in _KEYWORDS:
            raise ParseError(f"expected role name, found {role[1]!r}",
                             role[2], role[3])
        ts.next(expect="(")
        child = _parse_simple(ts)
        ts.next(expect=")")
        return SimpleConcept(restrictions=frozenset(((role[1], child),)))
    nxt = ts.peek()
    if nxt and nxt[1] == "in":
        ts.next()
        ts.next(expect="[")
        lo = ts.next()
        if lo[0] != "int":
            raise ParseError(f"expected integer, found {lo[1]!r}", lo[2], lo[3])
        ts.next(expect=",")
        hi = ts.next()
        if hi[0] != "int":
            raise ParseError(f"expected integer, found {hi[1]!r}", hi[2], hi[3])
        ts.next(expect="]")
        return SimpleConcept(constraints=frozenset(
            ((value, Interval(int(lo[1]), int(hi[1]))),)))
    if value in _KEYWORDS:
        raise ParseError(f"unexpected keyword {value!r}", lineno, col)
    return SimpleConcept(atoms=frozenset((value,)))


def parse_policy_expr(text: str, line_offset: int = 0) -> FullConcept:
    ts = _Tokens(text, line_offset)
    if ts.peek() is None:
        raise ParseError("empty policy expression")
    disjuncts = [_parse_simple(ts)]
    while ts.peek() and ts.peek()[1] == "|":
        ts.next()
        disjuncts.append(_parse_simple(ts))
    trailing = ts.peek()
    if trailing is not None:
        raise ParseError(f"unexpected token {trailing[1]!r}",
                         trailing[2], trailing[3])
    return FullConcept(tuple(disjuncts))


# ---------------------------------------------------------------------------
# Document-level parsing


def _split_header(text: str):
    """Strip the version header; returns (body lines, first body lineno)."""
    lines = text.splitlines()
    idx = 0
    for idx, line in enumerate(lines):
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            if stripped != FORMAT_HEADER:
                raise ParseError(
                    f"missing or wrong format header (expected "
                    f"{FORMAT_HEADER!r})", idx + 1)
            return lines[idx + 1:], idx + 1
    raise ParseError("empty document")


def _is_json(text: str) -> bool:
    return text.lstrip()[:1] == "{"


def _check_json_format(obj: dict) -> None:
    if obj.get("format") != FORMAT_HEADER:
        raise ParseError(
            f"missing or wrong \"format\" field (expected {FORMAT_HEADER!r})")


def _check_name(token: str, lineno: int) -> str:
    if not _NAME_RE.fullmatch(token) or token in _KEYWORDS:
        raise ParseError(f"invalid name {token!r}", lineno)
    return token


def parse_policy_document(text: str) -> PolicyDocument:
    if _is_json(text):
        obj = json.loads(text)
        _check_json_format(obj)
        return PolicyDocument(concept=policy_from_json(obj),
                              id=obj.get("id"), label=obj.get("label"))
    lines, offset = _split_header(text)
    meta = {}
    body_start = 0
    for i, line in enumerate(lines):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            body_start = i + 1
            continue
        m = re.fullmatch(r"@(id|label)\s+(.*)", stripped)
        if m:
            meta[m.group(1)] = m.group(2).strip()
            body_start = i + 1
        else:
            break
    body = "\n".join(lines[body_start:])
    concept = parse_policy_expr(body, line_offset=offset + body_start)
    return PolicyDocument(concept=concept, id=meta.get("id"),
                          label=meta.get("label"))


def parse_policy(text: str) -> FullConcept:
    return parse_policy_document(text).concept


def parse_kb(text: str) -> KnowledgeBase:
    if _is_json(text):
        obj = json.loads(text)
        _check_json_format(obj)
        return kb_from_json(obj)
    lines, offset = _split_header(text)
    axioms = set()
    for i, raw in enumerate(lines):
        lineno = offset + i + 1
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "sub" and len(parts) == 3:
            axioms.add(Inclusion(_check_name(parts[1], lineno),
                                 _check_name(parts[2], lineno)))
        elif parts[0] == "disj" and len(parts) == 3:
            axioms.add(Disjoint(*sorted((_check_name(parts[1], lineno),
                                         _check_name(parts[2], lineno)))))
        elif parts[0] == "func" and len(parts) == 2:
            axioms.add(Functional(_check_name(parts[1], lineno)))
        elif parts[0] == "range" and len(parts) == 3:
            axioms.add(Range(_check_name(parts[1], lineno),
                             _check_name(parts[2], lineno)))
        else:
            raise ParseError(f"unrecognized KB line {line!r}", lineno)
    return KnowledgeBase(frozenset(axioms))


def parse_ontology(text: str) -> ExternalOntology:
    if _is_json(text):
        obj = json.loads(text)
        _check_json_format(obj)
        return ontology_from_json(obj)
    lines, offset = _split_header(text)
    axioms = set()
    for i, raw in enumerate(lines):
        lineno = offset + i + 1
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "sub" and len(parts) == 3:
            lhs = [_check_name(t.strip(), lineno)
                   for t in parts[1].split("&") if t.strip()]
            if not lhs:
                raise ParseError("empty inclusion left-hand side", lineno)
            axioms.add(Sub.of(lhs, _check_name(parts[2], lineno)))
        elif parts[0] == "disj" and len(parts) == 3:
            axioms.add(ODisjoint(*sorted((_check_name(parts[1], lineno),
                                          _check_name(parts[2], lineno)))))
        elif parts[0] == "def" and len(parts) >= 4 and parts[2] == "=":
            rhs = " ".join(parts[3:])
            names = [_check_name(t.strip(), lineno)
                     for t in rhs.split("&") if t.strip()]
            if not names:
                raise ParseError("empty definition right-hand side", lineno)
            axioms.add(Definition.of(_check_name(parts[1], lineno), names))
        elif parts[0] == "sub-ex" and len(parts) == 4:
            axioms.add(SubEx(_check_name(parts[1], lineno),
                             _check_name(parts[2], lineno),
                             _check_name(parts[3], lineno)))
        elif parts[0] == "ex-sub" and len(parts) == 4:
            axioms.add(ExSub(_check_name(parts[1], lineno),
                             _check_name(parts[2], lineno),
                             _check_name(parts[3], lineno)))
        else:
            raise ParseError(f"unrecognized ontology line {line!r}", lineno)
    return ExternalOntology(frozenset(axioms))


# ---------------------------------------------------------------------------
# DSL serialization


def _simple_to_text(sc: SimpleConcept, nested: bool = False) -> str:
    parts = []
    if sc.bottom:
        parts.append("bottom")
    parts.extend(sorted(sc.atoms))
    for f, iv in sorted_constraints(sc):
        parts.append(f"{f} in [{iv.lo},{iv.hi}]")
    for r, ch in sorted_restrictions(sc):
        parts.append(f"some {r} ({_simple_to_text(ch, nested=True)})")
    if not parts:
        raise ValueError("cannot serialize an empty conjunction")
    return " & ".join(parts)


def serialize_policy(doc) -> str:
    if isinstance(doc, (FullConcept, SimpleConcept)):
        doc = PolicyDocument(concept=doc if isinstance(doc, FullConcept)
                             else FullConcept((doc,)))
    lines = [FORMAT_HEADER]
    if doc.id:
        lines.append(f"@id {doc.id}")
    if doc.label:
        lines.append(f"@label {doc.label}")
    body = "\n  | ".join(_simple_to_text(d) for d in doc.concept.disjuncts)
    lines.append(body)
    return "\n".join(lines) + "\n"


def serialize_kb(kb: KnowledgeBase) -> str:
    lines = [FORMAT_HEADER]
    for ax in kb.sorted_axioms():
        if isinstance(ax, Inclusion):
            lines.append(f"sub {ax.sub} {ax.sup}")
        elif isinstance(ax, Disjoint):
            lines.append(f"disj {ax.a} {ax.b}")
        elif isinstance(ax, Functional):
            lines.append(f"func {ax.name}")
        elif isinstance(ax, Range):
            lines.append(f"range {ax.role} {ax.cls}")
    return "\n".join(lines) + "\n"


def serialize_ontology(onto: ExternalOntology) -> str:
    lines = [FORMAT_HEADER]
    for ax in onto.sorted_axioms():
        if isinstance(ax, Sub):
            lines.append(f"sub {'&'.join(ax.lhs)} {ax.sup}")
        elif isinstance(ax, Definition):
            lines.append(f"def {ax.name} = {' & '.join(ax.parts)}")
        elif isinstance(ax, SubEx):
            lines.append(f"sub-ex {ax.sub} {ax.role} {ax.filler}")
        elif isinstance(ax, ExSub):
            lines.append(f"ex-sub {ax.role} {ax.filler} {ax.sup}")
        elif isinstance(ax, ODisjoint):
            lines.append(f"disj {ax.a} {ax.b}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSON mirror


def simple_to_json(sc: SimpleConcept) -> dict:
    return {
        "atoms": sorted(sc.atoms),
        "bottom": sc.bottom,
        "constraints": [{"property": f, "lo": iv.lo, "hi": iv.hi}
                        for f, iv in sorted_constraints(sc)],
        "restrictions": [{"role": r, "child": simple_to_json(ch)}
                         for r, ch in sorted_restrictions(sc)],
    }


def simple_from_json(obj: dict) -> SimpleConcept:
    return SimpleConcept(
        atoms=frozenset(obj.get("atoms", ())),
        bottom=bool(obj.get("bottom", False)),
        constraints=frozenset(
            (c["property"], Interval(int(c["lo"]), int(c["hi"])))
            for c in obj.get("constraints", ())),
        restrictions=frozenset(
            (r["role"], simple_from_json(r["child"]))
            for r in obj.get("restrictions", ())),
    )


def policy_to_json(doc) -> dict:
    if isinstance(doc, (FullConcept, SimpleConcept)):
        doc = PolicyDocument(concept=doc if isinstance(doc, FullConcept)
                             else FullConcept((doc,)))
    out = {"format": FORMAT_HEADER, "type": "policy",
           "disjuncts": [simple_to_json(d) for d in doc.concept.disjuncts]}
    if doc.id:
        out["id"] = doc.id
    if doc.label:
        out["label"] = doc.label
    return out


def policy_from_json(obj: dict) -> FullConcept:
    disjuncts = obj.get("disjuncts", [])
    if not disjuncts:
        raise ParseError("policy JSON needs at least one disjunct")
    return FullConcept(tuple(simple_from_json(d) for d in disjuncts))


def kb_to_json(kb: KnowledgeBase) -> dict:
    axioms = []
    for ax in kb.sorted_axioms():
        if isinstance(ax, Inclusion):
            axioms.append({"kind": "sub", "sub": ax.sub, "sup": ax.sup})
        elif isinstance(ax, Disjoint):
            axioms.append({"kind": "disj", "a": ax.a, "b": ax.b})
        elif isinstance(ax, Functional):
            axioms.append({"kind": "func", "name": ax.name})
        elif isinstance(ax, Range):
            axioms.append({"kind": "range", "role": ax.role, "class": ax.cls})
    return {"format": FORMAT_HEADER, "type": "kb", "axioms": axioms}


def kb_from_json(obj: dict) -> KnowledgeBase:
    axioms = set()
    for ax in obj.get("axioms", ()):
        kind = ax.get("kind")
        if kind == "sub":
            axioms.add(Inclusion(ax["sub"], ax["sup"]))
        elif kind == "disj":
            axioms.add(Disjoint(*sorted((ax["a"], ax["b"]))))
        elif kind == "func":
            axioms.add(Functional(ax["name"]))
        elif kind == "range":
            axioms.add(Range(ax["role"], ax["class"]))
        else:
            raise ParseError(f"unknown KB axiom kind {kind!r}")
    return KnowledgeBase(frozenset(axioms))


def ontology_to_json(onto: ExternalOntology) -> dict:
    axioms = []
    for ax in onto.sorted_axioms():
        if isinstance(ax, Sub):
            axioms.append({"kind": "sub", "sub": list(ax.lhs), "sup": ax.sup})
        elif isinstance(ax, Definition):
            axioms.append({"kind": "def", "name": ax.name,
                           "parts": list(ax.parts)})
        elif isinstance(ax, SubEx):
            axioms.append({"kind": "sub-ex", "sub": ax.sub, "role": ax.role,
                           "filler": ax.filler})
        elif isinstance(ax, ExSub):
            axioms.append({"kind": "ex-sub", "role": ax.role,
                           "filler": ax.filler, "sup": ax.sup})
        elif isinstance(ax, ODisjoint):
            axioms.append({"kind": "disj", "a": ax.a, "b": ax.b})
    return {"format": FORMAT_HEADER, "type": "ontology", "axioms": axioms}


def ontology_from_json(obj: dict) -> ExternalOntology:
    axioms = set()
    for ax in obj.get("axioms", ()):
        kind = ax.get("kind")
        if kind == "sub":
            lhs = ax["sub"]
            axioms.add(Sub.of([lhs] if isinstance(lhs, str) else lhs,
                              ax["sup"]))
        elif kind == "def":
            axioms.add(Definition.of(ax["name"], ax["parts"]))
        elif kind == "sub-ex":
            axioms.add(SubEx(ax["sub"], ax["role"], ax["filler"]))
        elif kind == "ex-sub":
            axioms.add(ExSub(ax["role"], ax["filler"], ax["sup"]))
        elif kind == "disj":
            axioms.add(ODisjoint(*sorted((ax["a"], ax["b"]))))
        else:
            raise ParseError(f"unknown ontology axiom kind {kind!r}")
    return ExternalOntology(frozenset(axioms))
