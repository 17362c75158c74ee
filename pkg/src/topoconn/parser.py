"""Parser for the concrete formula syntax.

Grammar (EBNF, whitespace insignificant, ``#`` starts a line comment):

    formula := disj
    disj    := conj ("|" conj)*
    conj    := lit ("&" lit)*
    lit     := "!" lit | "(" formula ")" | atom
    atom    := term ("=" | "!=" | "<=") term
             | "C(" term "," term ")" | "c(" term ")" | "ci(" term ")"
    term    := factor ("+" factor)*
    factor  := unary ("." unary)*
    unary   := "-" unary | "0" | "1" | ident | "(" term ")"

``t1 <= t2`` desugars to ``t1 . -t2 = 0`` and ``t1 != t2`` to
``!(t1 = t2)``; neither survives into the abstract syntax.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    And,
    AtomF,
    Complement,
    Conn,
    Contact,
    Eq,
    Formula,
    IntConn,
    Not,
    ONE,
    Or,
    Product,
    Sum,
    Term,
    Variable,
    ZERO,
    leq,
)


class ParseError(ValueError):
    """Syntax error with source position and the expected-token set."""

    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...]):
        self.line = line
        self.col = col
        self.expected = expected
        suffix = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{line}:{col}: {message}{suffix}")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op><=|!=|[=!&|(),+.\-01])
    """,
    re.VERBOSE,
)

_KIND_BY_OP = {
    "<=": "LEQ", "!=": "NEQ", "=": "EQ", "!": "NOT", "&": "AND", "|": "OR",
    "(": "LPAREN", ")": "RPAREN", ",": "COMMA", "+": "PLUS", ".": "DOT",
    "-": "MINUS", "0": "ZERO", "1": "ONE",
}


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col, ())
        lexeme = m.group(0)
        if m.lastgroup == "ident":
            tokens.append(_Token("IDENT", lexeme, line, col))
        elif m.lastgroup == "op":
            tokens.append(_Token(_KIND_BY_OP[lexeme], lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        # Farthest failure seen, for error reporting across backtracking.
        self.err_pos = -1
        self.err_expected: set[str] = set()

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: str) -> ParseError:
        tok = self.peek()
        if self.pos > self.err_pos:
            self.err_pos = self.pos
            self.err_expected = {expected}
        elif self.pos == self.err_pos:
            self.err_expected.add(expected)
        far = self.tokens[self.err_pos if self.err_pos >= 0 else self.pos]
        what = f"unexpected {far.kind.lower()}" if far.kind != "EOF" else "unexpected end of input"
        if far.text:
            what = f"unexpected {far.text!r}"
        return ParseError(what, far.line, far.col, tuple(sorted(self.err_expected)))

    def expect(self, kind: str, what: str) -> _Token:
        if self.peek().kind != kind:
            raise self.fail(what)
        return self.advance()

    # formula := disj
    def formula(self) -> Formula:
        return self.disj()

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().kind == "OR":
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.lit()
        while self.peek().kind == "AND":
            self.advance()
            f = And(f, self.lit())
        return f

    def lit(self) -> Formula:
        tok = self.peek()
        if tok.kind == "NOT":
            self.advance()
            return Not(self.lit())
        if tok.kind == "LPAREN":
            # "(" is ambiguous: parenthesized formula or parenthesized term
            # opening an atom.  Try the formula reading, backtrack on failure.
            saved = self.pos
            self.advance()
            try:
                inner = self.formula()
                self.expect("RPAREN", "')'")
                return inner
            except ParseError:
                self.pos = saved
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "IDENT" and self.peek(1).kind == "LPAREN" and tok.text in (
            "C",
            "c",
            "ci",
        ):
            self.advance()
            self.advance()
            if tok.text == "C":
                t1 = self.term()
                self.expect("COMMA", "','")
                t2 = self.term()
                self.expect("RPAREN", "')'")
                return AtomF(Contact(t1, t2))
            t = self.term()
            self.expect("RPAREN", "')'")
            return AtomF(Conn(t) if tok.text == "c" else IntConn(t))
        t1 = self.term()
        op = self.peek()
        if op.kind == "EQ":
            self.advance()
            return AtomF(Eq(t1, self.term()))
        if op.kind == "NEQ":
            self.advance()
            return Not(AtomF(Eq(t1, self.term())))
        if op.kind == "LEQ":
            self.advance()
            return leq(t1, self.term())
        raise self.fail("'=', '!=' or '<='")

    def term(self) -> Term:
        t = self.factor()
        while self.peek().kind == "PLUS":
            self.advance()
            t = Sum(t, self.factor())
        return t

    def factor(self) -> Term:
        t = self.unary()
        while self.peek().kind == "DOT":
            self.advance()
            t = Product(t, self.unary())
        return t

    def unary(self) -> Term:
        tok = self.peek()
        if tok.kind == "MINUS":
            self.advance()
            return Complement(self.unary())
        if tok.kind == "ZERO":
            self.advance()
            return ZERO
        if tok.kind == "ONE":
            self.advance()
            return ONE
        if tok.kind == "IDENT":
            self.advance()
            return Variable(tok.text)
        if tok.kind == "LPAREN":
            self.advance()
            t = self.term()
            self.expect("RPAREN", "')'")
            return t
        raise self.fail("a term")


def parse(text: str) -> Formula:
    """Parse formula source text; raises :class:`ParseError` on bad input."""
    parser = _Parser(_tokenize(text))
    f = parser.formula()
    if parser.peek().kind != "EOF":
        raise parser.fail("end of input")
    return f


def parse_term(text: str) -> Term:
    """Parse a bare term (no comparison, no predicates)."""
    parser = _Parser(_tokenize(text))
    t = parser.term()
    if parser.peek().kind != "EOF":
        raise parser.fail("end of input")
    return t
