"""Recursive-descent parser for polynomial expressions in z<k>, zb<k>.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT ("/" INT)? | "z" INT | "zb" INT | "(" expr ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from sympy.polys.rings import PolyRing

from ..algebra.ring import Poly, coordinate_count, split_monomial, to_fraction, to_qq, z, zbar
from ..errors import ValidationError
from ..exact import format_rational


class PolySyntaxError(ValidationError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message}（位置 {position}）")
        self.position = position


class VariableIndexError(ValidationError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message}（位置 {position}）")
        self.position = position


_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>zb|z)(?P<idx>\d+)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "var", "op", "end"
    text: str
    position: int
    index: int = 0


def tokenize(src: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(src, pos)
        if match is None:
            offset = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise PolySyntaxError(f"解釈できない文字 {src[offset]!r} があります", offset)
        if match.group("int") is not None:
            tokens.append(Token("int", match.group("int"), match.start("int")))
        elif match.group("var") is not None:
            tokens.append(
                Token("var", match.group("var"), match.start("var"), int(match.group("idx")))
            )
        else:
            tokens.append(Token("op", match.group("op"), match.start("op")))
        pos = match.end()
    tokens.append(Token("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, ring: PolyRing) -> None:
        self.ring = ring
        self.n = coordinate_count(ring)
        self.tokens = tokenize(src)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def accept(self, op: str) -> Optional[Token]:
        token = self.current
        if token.kind == "op" and token.text == op:
            self.pos += 1
            return token
        return None

    def expect(self, op: str) -> Token:
        token = self.accept(op)
        if token is None:
            raise PolySyntaxError(f"{op!r} が必要です", self.current.position)
        return token

    def parse(self) -> Poly:
        result = self.expr()
        if self.current.kind != "end":
            raise PolySyntaxError(f"余分な記号 {self.current.text!r} があります", self.current.position)
        return result

    def expr(self) -> Poly:
        result = self.term()
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> Poly:
        result = self.unary()
        while self.accept("*"):
            result = result * self.unary()
        return result

    def unary(self) -> Poly:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.accept("^"):
            token = self.current
            if token.kind != "int":
                raise PolySyntaxError("指数には非負整数を指定してください", token.position)
            self.pos += 1
            return base ** int(token.text)
        return base

    def atom(self) -> Poly:
        token = self.current
        if token.kind == "int":
            self.pos += 1
            value = Fraction(int(token.text))
            if self.accept("/"):
                den = self.current
                if den.kind != "int":
                    raise PolySyntaxError("分母には整数を指定してください", den.position)
                self.pos += 1
                if int(den.text) == 0:
                    raise PolySyntaxError("分母が 0 です", den.position)
                value /= int(den.text)
            return self.ring.ground_new(to_qq(value))
        if token.kind == "var":
            self.pos += 1
            if not 1 <= token.index <= self.n:
                raise VariableIndexError(
                    f"変数 {token.text}{token.index} の添字は 1..{self.n} の範囲で指定してください",
                    token.position,
                )
            j = token.index - 1
            return z(self.ring, j) if token.text == "z" else zbar(self.ring, j)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        if token.kind == "end":
            raise PolySyntaxError("式が途中で終わっています", token.position)
        raise PolySyntaxError(f"予期しない記号 {token.text!r} です", token.position)


def parse_poly(src: str, ring: PolyRing) -> Poly:
    return _Parser(src, ring).parse()


def _render_monomial(monom) -> List[str]:
    alpha, beta = split_monomial(monom)
    factors: List[str] = []
    for prefix, exps in (("z", alpha), ("zb", beta)):
        for j, e in enumerate(exps):
            if e == 1:
                factors.append(f"{prefix}{j + 1}")
            elif e > 1:
                factors.append(f"{prefix}{j + 1}^{e}")
    return factors


def render_poly(f: Poly) -> str:
    """Canonical text: terms in decreasing degrevlex order, ``p/q`` coefficients."""

    if not f:
        return "0"
    parts: List[str] = []
    for monom, coeff in f.terms():
        value = to_fraction(coeff)
        factors = _render_monomial(monom)
        magnitude = abs(value)
        if not factors:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([format_rational(magnitude)] + factors)
        if not parts:
            parts.append(body if value > 0 else f"-{body}")
        else:
            parts.append(f"{'+' if value > 0 else '-'} {body}")
    return " ".join(parts)
