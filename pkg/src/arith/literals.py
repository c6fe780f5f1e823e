# src/arith/literals.py

"""
Element literals for the command line.

    expr   := term   (("+" | "-") term)*
    term   := unary  (("*" | "/") unary)*
    unary  := ("+" | "-") unary | atom
    atom   := INT | "i" | "w" | "beta" | "gamma" | "(" expr ")"

Rationals are written as quotients, e.g. "(-1/4)*beta" or "(1-i)/2".
Evaluation is exact and returns an ExtElement.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Union

from ..errors import LiteralSyntaxError
from .extension import ExtElement, FieldParams, ZElement, format_grid
from .gfp import EISENSTEIN_POLY, GAUSSIAN_POLY

_TOKEN = re.compile(r"\s*(?:(\d+)|(beta|gamma|i|w)|([-+*/()]))")


@dataclass(frozen=True)
class Token:
    kind: str      # "int", "name", "op", "end"
    text: str
    position: int


def tokenize(source: str) -> List[Token]:
    tokens, pos = [], 0
    while pos < len(source):
        if source[pos:].strip() == "":
            break
        match = _TOKEN.match(source, pos)
        if not match:
            start = pos + (len(source[pos:]) - len(source[pos:].lstrip()))
            raise LiteralSyntaxError(f"✘ unexpected character {source[start]!r}", source, start)
        number, name, op = match.groups()
        start = match.start(match.lastindex)
        if number is not None:
            tokens.append(Token("int", number, start))
        elif name is not None:
            end = match.end()
            if end < len(source) and (source[end].isalnum() or source[end] == "_"):
                raise LiteralSyntaxError("✘ unknown name", source, start)
            tokens.append(Token("name", name, start))
        else:
            tokens.append(Token("op", op, start))
        pos = match.end()
    tokens.append(Token("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str, params: FieldParams):
        self.source = source
        self.params = params
        self.tokens = tokenize(source)
        self.index = 0

    def _peek(self) -> Token:
        return self.tokens[self.index]

    def _take(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _fail(self, message: str, token: Token):
        raise LiteralSyntaxError(f"✘ {message}", self.source, token.position)

    def parse(self) -> ExtElement:
        value = self._expr()
        token = self._peek()
        if token.kind != "end":
            self._fail(f"unexpected {token.text!r}", token)
        return value

    def _expr(self) -> ExtElement:
        value = self._term()
        while self._peek().kind == "op" and self._peek().text in "+-":
            op = self._take().text
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self) -> ExtElement:
        value = self._unary()
        while self._peek().kind == "op" and self._peek().text in "*/":
            token = self._take()
            rhs = self._unary()
            if token.text == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    self._fail("division by zero", token)
                value = value / rhs
        return value

    def _unary(self) -> ExtElement:
        token = self._peek()
        if token.kind == "op" and token.text in "+-":
            self._take()
            value = self._unary()
            return -value if token.text == "-" else value
        return self._atom()

    def _atom(self) -> ExtElement:
        token = self._take()
        params = self.params
        if token.kind == "int":
            return ExtElement.scalar(params, int(token.text))
        if token.kind == "name":
            return self._name(token)
        if token.kind == "op" and token.text == "(":
            value = self._expr()
            closing = self._take()
            if closing.kind != "op" or closing.text != ")":
                self._fail("expected ')'", closing)
            return value
        self._fail("expected a number, a generator or '('" if token.kind != "end"
                   else "unexpected end of literal", token)

    def _name(self, token: Token) -> ExtElement:
        params = self.params
        poly = list(params.gamma_poly)
        if token.text == "beta":
            return ExtElement.beta(params)
        if token.text == "gamma":
            if params.f == 1:
                self._fail("gamma needs f > 1", token)
            return ExtElement.gamma(params)
        if token.text == "i" and poly != GAUSSIAN_POLY:
            self._fail("i needs γ polynomial x^2 + 1", token)
        if token.text == "w" and poly != EISENSTEIN_POLY:
            self._fail("w needs γ polynomial x^2 + x + 1", token)
        return ExtElement.gamma(params)


def parse_element(source: str, params: FieldParams) -> ExtElement:
    """Exact element for a literal such as "(1-i)/2"."""
    return _Parser(source, params).parse()


def parse_rational(source: str) -> Fraction:
    """A bare rational such as "1/15" or "-3"."""
    try:
        return Fraction(source.strip())
    except (ValueError, ZeroDivisionError):
        raise LiteralSyntaxError("✘ expected a rational like 1/15", source, 0)


def split_top_level(source: str, separator: str = ",") -> List[str]:
    """Split on separators outside parentheses."""
    parts, depth, start = [], 0, 0
    for pos, ch in enumerate(source):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == separator and depth == 0:
            parts.append(source[start:pos])
            start = pos + 1
    parts.append(source[start:])
    return [part for part in parts if part.strip()]


def parse_quotients(source: str, params: FieldParams) -> List[ZElement]:
    """Comma separated partial quotients, e.g. "1/3,1/3"."""
    return [ZElement.from_ext(parse_element(part, params)) for part in split_top_level(source)]


def format_element(x: Union[ExtElement, ZElement]) -> str:
    return format_grid(x.params, x.ext.rationals() if isinstance(x, ZElement) else x.rationals())
