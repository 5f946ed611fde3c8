"""Text format for polynomials over the Puiseux field.

Grammar (whitespace is insignificant)::

    poly     := ["+" | "-"] term (("+" | "-") term)*
    term     := factor (["*"] factor)*      -- juxtaposition only after a number
    factor   := primary ["^" exponent]
    primary  := "(" poly ")" | rational | "t" | "x" | "y"
    exponent := rational | "(" ["-"] rational ")"   -- on t
              | nat                                 -- on x, y and groups
    rational := int ["/" posint]

Examples: ``x + y + x*y``, ``(1 + t^(1/2))*x + t*(x^2 + y^2 + 1)``, ``2t^(1/3)*y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Optional, Tuple

from tropint.puiseux import BivariatePoly, PuiseuxScalar, format_scalar


class ParseError(ValueError):
    """Syntax error with a 1-based position and the tokens that would have been accepted."""

    def __init__(self, message: str, line: int, col: int, expected: Iterable[str] = ()):
        self.line, self.col = line, col
        self.expected: FrozenSet[str] = frozenset(expected)
        exp = f"; expected {' or '.join(repr(e) for e in sorted(self.expected))}" if self.expected else ""
        super().__init__(f"line {line}, column {col}: {message}{exp}")


@dataclass(frozen=True)
class Token:
    kind: str       # "int", "x", "y", "t", one of "+-*/^()", or "eof"
    text: str
    offset: int


def _tokenize(text: str) -> List[Token]:
    out, i = [], 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(Token("int", text[i:j], i))
            i = j
        elif ch in "xyt+-*/^()":
            out.append(Token(ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", *_position(text, i))
    out.append(Token("eof", "", len(text)))
    return out


def _position(text: str, offset: int) -> Tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


FACTOR_START = frozenset({"(", "int", "t", "x", "y"})


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, message: str, expected: Iterable[str]):
        raise ParseError(message, *_position(self.text, self.tok.offset), expected)

    def take(self, kind: str) -> Token:
        if self.tok.kind != kind:
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            self.fail(f"found {found}", {kind})
        t = self.tok
        self.i += 1
        return t

    def accept(self, kind: str) -> Optional[Token]:
        if self.tok.kind == kind:
            return self.take(kind)
        return None

    def parse(self) -> BivariatePoly:
        p = self.poly()
        if self.tok.kind != "eof":
            self.fail(f"found {self.tok.text!r}", {"+", "-", "*", "end of input"})
        return p

    def poly(self) -> BivariatePoly:
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        acc = self.term() * sign
        while self.tok.kind in "+-":
            sign = 1 if self.take(self.tok.kind).kind == "+" else -1
            acc = acc + self.term() * sign
        return acc

    def term(self) -> BivariatePoly:
        acc = self.factor()
        while True:
            if self.accept("*"):
                acc = acc * self.factor()
            elif self.toks[self.i - 1].kind == "int" and self.tok.kind in FACTOR_START - {"int"}:
                acc = acc * self.factor()
            else:
                return acc

    def rational(self, signed: bool = False) -> Fraction:
        neg = signed and self.accept("-") is not None
        num = int(self.take("int").text)
        den = 1
        if self.accept("/"):
            tok = self.take("int")
            den = int(tok.text)
            if den == 0:
                raise ParseError("zero denominator", *_position(self.text, tok.offset), ())
        value = Fraction(num, den)
        return -value if neg else value

    def factor(self) -> BivariatePoly:
        kind = self.tok.kind
        if kind not in FACTOR_START:
            found = "end of input" if kind == "eof" else repr(self.tok.text)
            self.fail(f"found {found}", FACTOR_START)
        if kind == "t":
            self.take("t")
            e = Fraction(1)
            if self.accept("^"):
                if self.accept("("):
                    e = self.rational(signed=True)
                    self.take(")")
                else:
                    e = self.rational()
            return BivariatePoly.constant(PuiseuxScalar.monomial(1, e))
        if kind == "int":
            base = BivariatePoly.constant(self.rational())
        elif kind in "xy":
            self.take(kind)
            base = BivariatePoly.variable(kind)
        else:
            self.take("(")
            base = self.poly()
            self.take(")")
        if self.accept("^"):
            base = base ** int(self.take("int").text)
        return base


def parse_poly(text: str) -> BivariatePoly:
    """Parse a polynomial in ``x, y`` with Puiseux coefficients in ``t``."""
    return _Parser(text).parse()


def _monomial(i: int, j: int) -> str:
    parts = []
    for v, e in (("x", i), ("y", j)):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_poly(f: BivariatePoly) -> str:
    """Canonical text form; ``parse_poly(format_poly(f)) == f``."""
    if f.is_zero():
        return "0"
    out = []
    for (i, j) in sorted(f.coeffs, key=lambda m: (m[0] + m[1], -m[0])):
        c = f.coeffs[(i, j)]
        mono = _monomial(i, j)
        neg = False
        if len(c.terms) == 1:
            e, a = c.terms[0]
            neg = a < 0
            scalar = format_scalar(-c if neg else c)
            if mono and scalar == "1":
                body = mono
            else:
                body = f"{scalar}*{mono}" if mono else scalar
        else:
            body = f"({format_scalar(c)})*{mono}" if mono else f"({format_scalar(c)})"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" {'-' if neg else '+'} {body}")
    return "".join(out)
