"""SPARQL-subset parser and basic-graph-pattern evaluator.

Supported surface: PREFIX declarations (on top of the built-in namespace
table), SELECT [DISTINCT] * | ?vars, a WHERE block of triple patterns with
`a` and `;` predicate-object lists and `,` object lists, FILTER
comparisons (<, >, =, !=) between one variable and a constant, and LIMIT.
Everything else that is recognizably SPARQL raises "unsupported feature"
with the offending token rather than a generic parse error.

Evaluation is an index nested-loop join; patterns are ordered greedily by
their candidate count against the store, most selective first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .kgmodel import NAMESPACES, Iri, Literal, Term, XSD, RDF
from .store import TripleStore


class QueryError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{message} (line {line}, column {col})"
                         if line else message)
        self.message = message
        self.line = line
        self.col = col


class UnsupportedQueryFeature(QueryError):
    def __init__(self, token: str, line: int = 0, col: int = 0):
        super().__init__(f"unsupported query feature: {token}", line, col)
        self.token = token


_UNSUPPORTED = {
    "OPTIONAL", "UNION", "GRAPH", "ORDER", "GROUP", "HAVING", "ASK",
    "CONSTRUCT", "DESCRIBE", "INSERT", "DELETE", "BIND", "VALUES",
    "SERVICE", "MINUS", "EXISTS", "OFFSET", "FROM", "REDUCED",
}

_KEYWORDS = {"SELECT", "DISTINCT", "WHERE", "PREFIX", "FILTER", "LIMIT", "BASE"}


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self):
        return f"?{self.name}"


PatternTerm = Union[Variable, Term]


@dataclass(frozen=True)
class TriplePattern:
    s: PatternTerm
    p: PatternTerm
    o: PatternTerm

    def variables(self) -> set[str]:
        return {t.name for t in (self.s, self.p, self.o)
                if isinstance(t, Variable)}


@dataclass(frozen=True)
class Filter:
    var: str
    op: str  # < > = !=
    value: Term


@dataclass
class QueryAst:
    prefixes: dict[str, str]
    select_all: bool
    projection: list[str]
    distinct: bool
    patterns: list[TriplePattern]
    filters: list[Filter] = field(default_factory=list)
    limit: Optional[int] = None

    def variables(self) -> list[str]:
        seen: list[str] = []
        for pat in self.patterns:
            for term in (pat.s, pat.p, pat.o):
                if isinstance(term, Variable) and term.name not in seen:
                    seen.append(term.name)
        return seen


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_SPEC = [
    ("COMMENT", r"#[^\n]*"),
    ("IRIREF", r"<[^<>\"{}|^`\\\s]*>"),
    ("VAR", r"\?[A-Za-z_][A-Za-z0-9_]*"),
    ("NUMBER", r"[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?"),
    ("STRING", r'"(?:[^"\\\n]|\\.)*"'),
    ("DTSEP", r"\^\^"),
    ("PNAME", r"[A-Za-z][A-Za-z0-9_-]*:[A-Za-z0-9_%-][A-Za-z0-9_.%-]*|[A-Za-z][A-Za-z0-9_-]*:"),
    ("WORD", r"[A-Za-z][A-Za-z0-9_-]*"),
    ("NEQ", r"!="),
    ("PUNCT", r"[{}();,.<>=*\[\]]"),
    ("WS", r"\s+"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{n}>{p})" for n, p in _TOKEN_SPEC))


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise QueryError(f"stray character {text[pos]!r}", line, col)
        kind = m.lastgroup
        raw = m.group()
        if kind == "PNAME":
            # A trailing '.' belongs to the statement, not the local name.
            while raw.endswith("."):
                raw = raw[:-1]
        if kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind, raw, line, col))
        consumed = raw if kind == "PNAME" else m.group()
        nl = consumed.count("\n")
        if nl:
            line += nl
            col = len(consumed) - consumed.rfind("\n")
        else:
            col += len(consumed)
        pos += len(consumed)
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, tokens: list[Token], prefixes: dict[str, str]):
        self.toks = tokens
        self.i = 0
        self.prefixes = prefixes

    def peek(self) -> Optional[Token]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else Token("", "", 1, 1)
            raise QueryError("unexpected end of query", last.line, last.col)
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text.upper() != text.upper():
            raise QueryError(f"expected {text!r}, found {tok.text!r}",
                             tok.line, tok.col)
        return tok

    def _check_unsupported(self, tok: Token):
        if tok.kind == "WORD" and tok.text.upper() in _UNSUPPORTED:
            raise UnsupportedQueryFeature(tok.text, tok.line, tok.col)

    def resolve(self, tok: Token) -> Iri:
        prefix, local = tok.text.split(":", 1)
        if prefix not in self.prefixes:
            raise QueryError(f"unknown prefix: {prefix!r}", tok.line, tok.col)
        return Iri(self.prefixes[prefix] + local)

    def term(self, tok: Token) -> PatternTerm:
        self._check_unsupported(tok)
        if tok.kind == "VAR":
            return Variable(tok.text[1:])
        if tok.kind == "IRIREF":
            return Iri(tok.text[1:-1])
        if tok.kind == "PNAME":
            return self.resolve(tok)
        if tok.kind == "WORD" and tok.text == "a":
            return RDF.type
        if tok.kind == "NUMBER":
            return _number_literal(tok.text)
        if tok.kind == "STRING":
            lex = _unquote(tok.text)
            nxt = self.peek()
            if nxt is not None and nxt.kind == "DTSEP":
                self.next()
                dt_tok = self.next()
                if dt_tok.kind == "IRIREF":
                    return Literal(lex, Iri(dt_tok.text[1:-1]))
                if dt_tok.kind == "PNAME":
                    return Literal(lex, self.resolve(dt_tok))
                raise QueryError("expected datatype IRI after ^^",
                                 dt_tok.line, dt_tok.col)
            return Literal(lex, XSD.string)
        raise QueryError(f"unexpected token {tok.text!r}", tok.line, tok.col)


_STRING_ESCAPES = {"t": "\t", "r": "\r", "n": "\n", '"': '"', "\\": "\\"}


def _unquote(text: str) -> str:
    return re.sub(r"\\(.)",
                  lambda m: _STRING_ESCAPES.get(m.group(1), m.group(0)),
                  text[1:-1])


def _number_literal(text: str) -> Literal:
    if re.fullmatch(r"[+-]?\d+", text):
        return Literal(text, XSD.integer)
    if "e" in text.lower():
        return Literal(text, XSD.double)
    return Literal(text, XSD.decimal)


def parse_query(text: str, base_prefixes: Optional[dict[str, str]] = None) -> QueryAst:
    tokens = _tokenize(text)
    prefixes = dict(NAMESPACES if base_prefixes is None else base_prefixes)
    p = _Parser(tokens, prefixes)

    while True:
        tok = p.peek()
        if tok is None:
            raise QueryError("missing SELECT")
        if tok.kind == "WORD" and tok.text.upper() == "PREFIX":
            p.next()
            name_tok = p.next()
            if name_tok.kind != "PNAME" or not name_tok.text.endswith(":"):
                raise QueryError("expected prefix name ending in ':'",
                                 name_tok.line, name_tok.col)
            iri_tok = p.next()
            if iri_tok.kind != "IRIREF":
                raise QueryError("expected <IRI> in PREFIX declaration",
                                 iri_tok.line, iri_tok.col)
            prefixes[name_tok.text[:-1]] = iri_tok.text[1:-1]
            continue
        break

    tok = p.next()
    p._check_unsupported(tok)
    if tok.kind != "WORD" or tok.text.upper() != "SELECT":
        raise QueryError(f"expected SELECT, found {tok.text!r}", tok.line, tok.col)

    distinct = False
    tok = p.peek()
    if tok and tok.kind == "WORD" and tok.text.upper() == "DISTINCT":
        p.next()
        distinct = True

    select_all = False
    projection: list[str] = []
    tok = p.next()
    if tok.text == "*":
        select_all = True
    elif tok.kind == "VAR":
        projection.append(tok.text[1:])
        while p.peek() and p.peek().kind == "VAR":
            projection.append(p.next().text[1:])
    else:
        p._check_unsupported(tok)
        raise QueryError("expected * or variables after SELECT",
                         tok.line, tok.col)

    where = p.next()
    if where.kind == "WORD" and where.text.upper() != "WHERE":
        p._check_unsupported(where)
    if not (where.kind == "WORD" and where.text.upper() == "WHERE"):
        raise QueryError("missing WHERE", where.line, where.col)
    p.expect("{")

    patterns: list[TriplePattern] = []
    filters: list[Filter] = []
    while True:
        tok = p.peek()
        if tok is None:
            raise QueryError("unterminated WHERE block")
        if tok.text == "}":
            p.next()
            break
        if tok.kind == "WORD" and tok.text.upper() == "FILTER":
            p.next()
            filters.append(_parse_filter(p))
            continue
        p._check_unsupported(tok)
        _parse_statement(p, patterns)

    limit = None
    tok = p.peek()
    if tok and tok.kind == "WORD" and tok.text.upper() == "LIMIT":
        p.next()
        num = p.next()
        if num.kind != "NUMBER" or not re.fullmatch(r"\d+", num.text):
            raise QueryError("LIMIT expects a non-negative integer",
                             num.line, num.col)
        limit = int(num.text)
    tok = p.peek()
    if tok is not None:
        p._check_unsupported(tok)
        raise QueryError(f"unexpected trailing token {tok.text!r}",
                         tok.line, tok.col)

    ast = QueryAst(prefixes, select_all, projection, distinct, patterns, filters, limit)
    in_patterns = set(ast.variables())
    for name in projection:
        if name not in in_patterns:
            raise QueryError(f"projected variable ?{name} not used in any pattern")
    for f in filters:
        if f.var not in in_patterns:
            raise QueryError(f"filtered variable ?{f.var} not used in any pattern")
    return ast


def _parse_statement(p: _Parser, patterns: list[TriplePattern]):
    tok = p.peek()
    if tok is not None and tok.text == "{":
        # Group graph patterns are outside the subset; name the construct
        # that needed them when one follows (UNION, OPTIONAL, ...).
        for ahead in p.toks[p.i:]:
            if ahead.kind == "WORD" and ahead.text.upper() in _UNSUPPORTED:
                raise UnsupportedQueryFeature(ahead.text, ahead.line, ahead.col)
        raise UnsupportedQueryFeature("{", tok.line, tok.col)
    subject = p.term(p.next())
    if isinstance(subject, Literal):
        raise QueryError("literal cannot be a subject")
    while True:
        verb_tok = p.next()
        if verb_tok.text in (".", ";", "}"):
            raise QueryError("incomplete triple pattern",
                             verb_tok.line, verb_tok.col)
        verb = p.term(verb_tok)
        if isinstance(verb, Literal):
            raise QueryError("literal cannot be a predicate",
                             verb_tok.line, verb_tok.col)
        while True:
            obj_tok = p.next()
            if obj_tok.text in (".", ";", "}"):
                raise QueryError("incomplete triple pattern",
                                 obj_tok.line, obj_tok.col)
            patterns.append(TriplePattern(subject, verb, p.term(obj_tok)))
            nxt = p.peek()
            if nxt and nxt.text == ",":
                p.next()
                continue
            break
        nxt = p.peek()
        if nxt is None:
            raise QueryError("statement not terminated")
        if nxt.text == ";":
            p.next()
            if p.peek() and p.peek().text in (".", "}"):
                if p.peek().text == ".":
                    p.next()
                return
            continue
        if nxt.text == ".":
            p.next()
            return
        if nxt.text == "}":
            return
        raise QueryError(f"expected '.', ';' or '}}', found {nxt.text!r}",
                         nxt.line, nxt.col)


def _parse_filter(p: _Parser) -> Filter:
    p.expect("(")
    left = p.next()
    op_tok = p.next()
    op = op_tok.text
    if op not in ("<", ">", "=", "!="):
        raise QueryError(f"unsupported filter operator {op!r}",
                         op_tok.line, op_tok.col)
    right = p.next()
    p.expect(")")
    lt = p.term(left) if left.kind != "VAR" else Variable(left.text[1:])
    rt = p.term(right) if right.kind != "VAR" else Variable(right.text[1:])
    if isinstance(lt, Variable) and not isinstance(rt, Variable):
        return Filter(lt.name, op, rt)
    if isinstance(rt, Variable) and not isinstance(lt, Variable):
        flipped = {"<": ">", ">": "<", "=": "=", "!=": "!="}[op]
        return Filter(rt.name, flipped, lt)
    raise QueryError("FILTER must compare one variable with one constant",
                     op_tok.line, op_tok.col)


# ---------------------------------------------------------------------------
# Evaluation


_NUMERIC_DATATYPES = {
    XSD.integer.value, XSD.decimal.value, XSD.double.value,
    NAMESPACES["xsd"] + "float",
}


def _numeric_value(term: Term) -> Optional[float]:
    if isinstance(term, Literal) and term.datatype.value in _NUMERIC_DATATYPES:
        try:
            return float(term.lexical)
        except ValueError:
            return None
    return None


def _filter_ok(f: Filter, value: Term) -> bool:
    want = f.value
    lv, rv = _numeric_value(value), _numeric_value(want)
    if lv is not None and rv is not None:
        if f.op == "<":
            return lv < rv
        if f.op == ">":
            return lv > rv
        if f.op == "=":
            return lv == rv
        return lv != rv
    ls = value.ntriples() if not isinstance(value, Literal) else value.lexical
    rs = want.ntriples() if not isinstance(want, Literal) else want.lexical
    if f.op == "<":
        return ls < rs
    if f.op == ">":
        return ls > rs
    if f.op == "=":
        return ls == rs
    return ls != rs


def _bind(pattern: TriplePattern, row: dict[str, Term]):
    def sub(t: PatternTerm):
        if isinstance(t, Variable):
            return row.get(t.name)
        return t

    return sub(pattern.s), sub(pattern.p), sub(pattern.o)


def evaluate(ast: QueryAst, store: TripleStore) -> list[dict[str, Term]]:
    """Natural join of all pattern match-sets, filtered and projected."""
    remaining = list(ast.patterns)
    rows: list[dict[str, Term]] = [{}]
    bound_vars: set[str] = set()
    pending_filters = list(ast.filters)

    while remaining and rows:
        def cost(pat: TriplePattern) -> tuple:
            s, p, o = _bind(pat, {})
            unbound = len(pat.variables() - bound_vars)
            return (unbound, store.count(s, p, o))

        # Prefer patterns already connected to bound variables, then the
        # smallest candidate set.
        connected = [p for p in remaining if p.variables() & bound_vars] or remaining
        pat = min(connected, key=cost)
        remaining.remove(pat)

        new_rows = []
        for row in rows:
            s, p, o = _bind(pat, row)
            for t in store.match(s, p, o):
                new_row = dict(row)
                ok = True
                for term, value in ((pat.s, t.s), (pat.p, t.p), (pat.o, t.o)):
                    if isinstance(term, Variable):
                        prev = new_row.get(term.name)
                        if prev is None:
                            new_row[term.name] = value
                        elif prev != value:
                            ok = False
                            break
                if ok:
                    new_rows.append(new_row)
        rows = new_rows
        bound_vars |= pat.variables()
        still_pending = []
        for f in pending_filters:
            if f.var in bound_vars:
                rows = [r for r in rows if _filter_ok(f, r[f.var])]
            else:
                still_pending.append(f)
        pending_filters = still_pending

    projected = ast.variables() if ast.select_all else ast.projection
    out = []
    for row in rows:
        out.append({name: row[name] for name in projected if name in row})
    if ast.distinct:
        seen = set()
        unique = []
        for row in out:
            key = tuple(sorted((k, v.ntriples()) for k, v in row.items()))
            if key not in seen:
                seen.add(key)
                unique.append(row)
        out = unique
    if ast.limit is not None:
        out = out[: ast.limit]
    return out


def run_query(text: str, store: TripleStore) -> tuple[list[str], list[dict[str, Term]]]:
    ast = parse_query(text)
    rows = evaluate(ast, store)
    header = ast.variables() if ast.select_all else ast.projection
    return header, rows


def results_to_json(header: list[str], rows: list[dict[str, Term]]) -> dict:
    """SPARQL-results-style JSON: terms rendered with N-Triples quoting."""
    return {
        "head": {"vars": list(header)},
        "results": {
            "bindings": [
                {name: row[name].ntriples() for name in header if name in row}
                for row in rows
            ]
        },
    }
