"""Parser for compact spectrum expressions.

Grammar, with whitespace free between tokens:

    expr        = term { "u" term } [ bound ]
    term        = progression | "{" rational { "," rational } "}"
    progression = [ rational ] "Z" [ ("+" | "-") rational ]
    bound       = "|" ("lambda" | "l") "|" "<=" rational
    rational    = [ "-" ] ( "p/q" | decimal | integer )

"2Z u 2Z+1/2 |lambda|<=10" expands both arithmetic progressions up to
absolute value 10.  A progression with nonzero step needs a bound, either
in the expression or passed as `truncate`, since the result must be finite.
All values are exact Fractions.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyExpansionError, ParseError

_BOUND_RE = re.compile(r"\|\s*(?:λ|lambda|l)\s*\|\s*<=")
_NUMBER_RE = re.compile(r"\d+/\d+|\d*\.\d+|\d+")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _lex(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _BOUND_RE.match(text, i)
        if m:
            tokens.append(_Token("bound", m.group(), i))
            i = m.end()
            continue
        m = _NUMBER_RE.match(text, i)
        if m:
            tokens.append(_Token("number", m.group(), i))
            i = m.end()
            continue
        ch = text[i]
        if ch == "Z":
            tokens.append(_Token("Z", ch, i))
        elif ch == "u":
            tokens.append(_Token("union", ch, i))
        elif ch in "+-{},":
            tokens.append(_Token(ch, ch, i))
        else:
            raise ParseError(f"unexpected character {ch!r}", position=i)
        i += 1
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _lex(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self, kind: str) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != kind:
            raise ParseError(
                f"expected {kind}, found {tok.text or 'end of input'!r}",
                position=tok.pos,
            )
        self.i += 1
        return tok

    def rational(self) -> Fraction:
        sign = 1
        if self.peek().kind in ("+", "-"):
            if self.take(self.peek().kind).kind == "-":
                sign = -1
        tok = self.take("number")
        return sign * Fraction(tok.text)

    def term(self):
        """Returns ("list", values) or ("progression", step, offset)."""
        if self.peek().kind == "{":
            self.take("{")
            values = [self.rational()]
            while self.peek().kind == ",":
                self.take(",")
                values.append(self.rational())
            self.take("}")
            return ("list", values)
        step = Fraction(1)
        if self.peek().kind in ("number", "-", "+"):
            step = self.rational()
        self.take("Z")
        offset = Fraction(0)
        if self.peek().kind in ("+", "-"):
            sign = -1 if self.take(self.peek().kind).kind == "-" else 1
            offset = sign * Fraction(self.take("number").text)
        return ("progression", abs(step), offset)

    def expr(self):
        terms = [self.term()]
        while self.peek().kind == "union":
            self.take("union")
            terms.append(self.term())
        bound = None
        if self.peek().kind == "bound":
            tok = self.take("bound")
            try:
                bound = Fraction(self.take("number").text)
            except ParseError:
                raise ParseError("bound needs a value", position=tok.pos) from None
        self.take("end")
        return terms, bound


def parse_spectrum(text: str, truncate=None) -> list:
    """Expand a spectrum expression into a sorted list of distinct Fractions.

    `truncate` imposes |lam| <= truncate on top of any bound inside the
    expression.  Raises ParseError for malformed input or an unbounded
    progression, EmptyExpansionError when nothing survives.
    """
    terms, bound = _Parser(text).expr()
    if truncate is not None:
        truncate = Fraction(truncate)
        bound = truncate if bound is None else min(bound, truncate)

    values = set()
    for term in terms:
        if term[0] == "list":
            for v in term[1]:
                if bound is None or abs(v) <= bound:
                    values.add(v)
            continue
        _, step, offset = term
        if step == 0:
            if bound is None or abs(offset) <= bound:
                values.add(offset)
            continue
        if bound is None:
            raise ParseError(
                "a progression expands to infinitely many values; add a bound "
                "like |lambda|<=K or pass a truncation"
            )
        k_min = math.ceil((-bound - offset) / step)
        k_max = math.floor((bound - offset) / step)
        for k in range(k_min, k_max + 1):
            values.add(step * k + offset)
    if not values:
        raise EmptyExpansionError(f"no frequencies survive in {text!r}")
    return sorted(values)
