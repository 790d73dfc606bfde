"""Recursive-descent parsers for the modal and first-order surface syntaxes.

Modal grammar (binary connectives bind looser than every prefix operator)::

    formula := imp
    imp     := or ("->" imp)?          also "<->" as an extension for schemas
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | "[]" unary | "<>" unary
             | "[-" formula "]" unary | "<-" formula ">" unary
             | "@" nom unary | "!" nom unary
             | atom | nom | META | "true" | "false" | "(" formula ")"

Nominals and ``@``/``!`` are accepted only with ``hybrid=True``; in that mode
identifiers of the form ``x``, ``y``, ``z`` followed by digits are nominal
variables.  Upper-case identifiers are schema placeholders and need
``meta=True``.

First-order grammar::

    fol   := imp ; imp := or ("->" imp)? ; or := and ("|" and)* ;
    and   := unary ("&" unary)*
    unary := "~" unary | "Ex" var unary | "Ax" var unary
           | "R" var var | var "=" var | PRED var | "(" fol ")"

where ``PRED`` is ``P_<atom>``.
"""
from __future__ import annotations

import re

from . import fol
from . import formula as F
from .errors import ParseError

KEYWORDS = {"true", "false"}
NOMINAL_RE = re.compile(r"[xyz][0-9]*\Z")

_MODAL_TOKENS = [
    ("IFF", r"<\s*-\s*>"),
    ("DDEL", r"<\s*-"),
    ("DIA", r"<\s*>"),
    ("IMP", r"-\s*>"),
    ("DEL", r"\[\s*-"),
    ("BOX", r"\[\s*\]"),
    ("RBRACK", r"\]"),
    ("GT", r">"),
    ("NOT", r"~"),
    ("AND", r"&"),
    ("OR", r"\|"),
    ("AT", r"@"),
    ("DOWN", r"!"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("META", r"[A-Z][A-Za-z0-9_]*"),
    ("IDENT", r"[a-z][a-z0-9_]*"),
]

_FOL_TOKENS = [
    ("IMP", r"-\s*>"),
    ("NOT", r"~"),
    ("AND", r"&"),
    ("OR", r"\|"),
    ("EQ", r"="),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("EX", r"Ex\b"),
    ("ALL", r"Ax\b"),
    ("REL", r"R\b"),
    ("PRED", r"P_[a-z][a-z0-9_]*"),
    ("IDENT", r"[a-z][a-z0-9_]*'*"),
]


def _lexer(spec):
    return re.compile("|".join(f"(?P<{name}>{pat})" for name, pat in spec))


_MODAL_RE = _lexer(_MODAL_TOKENS)
_FOL_RE = _lexer(_FOL_TOKENS)


def tokenize(text: str, lexer) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = lexer.match(text, pos)
        if m is None:
            raise ParseError(f"unknown token {text[pos]!r}", pos, text)
        out.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(("EOF", "", n))
    return out


class _Stream:
    def __init__(self, text: str, lexer):
        self.text = text
        self.toks = tokenize(text, lexer)
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str):
        tok = self.next()
        if tok[0] != kind:
            self.fail(f"expected {what}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        raise ParseError(msg, tok[2], self.text)


class _ModalParser:
    def __init__(self, text: str, hybrid: bool, meta: bool):
        self.s = _Stream(text, _MODAL_RE)
        self.hybrid = hybrid
        self.meta = meta

    def parse(self) -> F.Formula:
        f = self.formula()
        if self.s.peek() != "EOF":
            self.s.fail(f"unexpected {self.s.toks[self.s.i][1]!r}")
        return f

    def formula(self):
        left = self.disjunction()
        kind = self.s.peek()
        if kind == "IMP":
            self.s.next()
            return F.implies(left, self.formula())
        if kind == "IFF":
            self.s.next()
            return F.iff(left, self.formula())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.s.peek() == "OR":
            self.s.next()
            f = F.disj(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.s.peek() == "AND":
            self.s.next()
            f = F.And(f, self.unary())
        return f

    def nominal(self) -> str:
        tok = self.s.expect("IDENT", "nominal variable")
        if not NOMINAL_RE.match(tok[1]):
            self.s.fail(f"{tok[1]!r} is not a nominal variable", tok)
        return tok[1]

    def unary(self):
        kind, val, pos = self.s.next()
        if kind == "NOT":
            return F.Not(self.unary())
        if kind == "BOX":
            return F.Box(self.unary())
        if kind == "DIA":
            return F.dia(self.unary())
        if kind == "DEL":
            guard = self.formula()
            self.s.expect("RBRACK", "']'")
            return F.Del(guard, self.unary())
        if kind == "DDEL":
            guard = self.formula()
            self.s.expect("GT", "'>'")
            return F.del_dual(guard, self.unary())
        if kind in ("AT", "DOWN"):
            if not self.hybrid:
                self.s.fail(f"'{val}' needs the hybrid language", (kind, val, pos))
            nom = self.nominal()
            body = self.unary()
            return F.At(nom, body) if kind == "AT" else F.Down(nom, body)
        if kind == "LPAREN":
            f = self.formula()
            self.s.expect("RPAREN", "')'")
            return f
        if kind == "META":
            if not self.meta:
                self.s.fail(f"unexpected placeholder {val!r}", (kind, val, pos))
            return F.Meta(val)
        if kind == "IDENT":
            if val == "true":
                return F.TOP
            if val == "false":
                return F.BOT
            if self.hybrid and NOMINAL_RE.match(val):
                return F.Nom(val)
            return F.Atom(val)
        self.s.fail(f"unexpected {val or 'end of input'!r}", (kind, val, pos))


def parse_ld(text: str) -> F.Formula:
    """Parse a formula of the plain deletion language."""
    return _ModalParser(text, hybrid=False, meta=False).parse()


def parse_hybrid(text: str) -> F.Formula:
    return _ModalParser(text, hybrid=True, meta=False).parse()


def parse_schema(text: str, hybrid: bool = False) -> F.Formula:
    """Parse a template whose upper-case identifiers are placeholders."""
    return _ModalParser(text, hybrid=hybrid, meta=True).parse()


class _FolParser:
    def __init__(self, text: str):
        self.s = _Stream(text, _FOL_RE)

    def parse(self) -> fol.FolFormula:
        f = self.formula()
        if self.s.peek() != "EOF":
            self.s.fail(f"unexpected {self.s.toks[self.s.i][1]!r}")
        return f

    def formula(self):
        left = self.disjunction()
        if self.s.peek() == "IMP":
            self.s.next()
            return fol.implies(left, self.formula())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.s.peek() == "OR":
            self.s.next()
            f = fol.disj(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.s.peek() == "AND":
            self.s.next()
            f = fol.And(f, self.unary())
        return f

    def var(self) -> str:
        return self.s.expect("IDENT", "variable")[1]

    def unary(self):
        kind, val, pos = self.s.next()
        if kind == "NOT":
            return fol.Not(self.unary())
        if kind == "EX":
            v = self.var()
            return fol.Exists(v, self.unary())
        if kind == "ALL":
            v = self.var()
            return fol.forall(v, self.unary())
        if kind == "REL":
            return fol.Rel(self.var(), self.var())
        if kind == "PRED":
            return fol.Pred(val[2:], self.var())
        if kind == "IDENT":
            self.s.expect("EQ", "'='")
            return fol.Eq(val, self.var())
        if kind == "LPAREN":
            f = self.formula()
            self.s.expect("RPAREN", "')'")
            return f
        self.s.fail(f"unexpected {val or 'end of input'!r}", (kind, val, pos))


def parse_fol(text: str) -> fol.FolFormula:
    return _FolParser(text).parse()
