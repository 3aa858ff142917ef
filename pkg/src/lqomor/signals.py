"""Recursive-descent parser for scalar input-signal expressions.

Grammar (binding tightest last):

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := primary ('^' factor)?          right associative
    primary := NUMBER | 't' | NAME '(' expr ')' | '(' expr ')'

with functions ``sin``, ``cos`` and ``exp``.  Parsing errors carry the byte
offset of the offending token; evaluation raises on division by zero or any
non-finite intermediate value.
"""

import math
import re

from .errors import SignalEvalError, SignalSyntaxError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)

_FUNCTIONS = {"sin": math.sin, "cos": math.cos, "exp": math.exp}


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            offset = len(text) - len(stripped)
            raise SignalSyntaxError(
                f"unexpected character {stripped[0]!r} at offset {offset}",
                offset=offset,
            )
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, symbol):
        kind, value, offset = self.peek()
        if kind != "op" or value != symbol:
            raise SignalSyntaxError(
                f"expected {symbol!r} at offset {offset}", offset=offset
            )
        self.advance()

    def parse(self):
        node = self.expr()
        kind, value, offset = self.peek()
        if kind != "end":
            raise SignalSyntaxError(
                f"unexpected token {value!r} at offset {offset}", offset=offset
            )
        return node

    def expr(self):
        node = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.advance()[1]
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.advance()[1]
            node = (op, node, self.factor())
        return node

    def factor(self):
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return ("neg", self.factor())
        return self.power()

    def power(self):
        node = self.primary()
        if self.peek()[:2] == ("op", "^"):
            self.advance()
            node = ("^", node, self.factor())
        return node

    def primary(self):
        kind, value, offset = self.advance()
        if kind == "num":
            return ("num", float(value))
        if kind == "name":
            if value == "t":
                return ("t",)
            if value in _FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return ("call", value, arg)
            raise SignalSyntaxError(
                f"unknown identifier {value!r} at offset {offset}",
                offset=offset,
                identifier=value,
            )
        if (kind, value) == ("op", "("):
            node = self.expr()
            self.expect_op(")")
            return node
        raise SignalSyntaxError(
            f"unexpected token {value or 'end of input'!r} at offset {offset}",
            offset=offset,
        )


def _eval(node, t):
    head = node[0]
    if head == "num":
        return node[1]
    if head == "t":
        return t
    if head == "neg":
        return -_eval(node[1], t)
    if head == "call":
        return _FUNCTIONS[node[1]](_eval(node[2], t))
    left = _eval(node[1], t)
    right = _eval(node[2], t)
    if head == "+":
        return left + right
    if head == "-":
        return left - right
    if head == "*":
        return left * right
    if head == "/":
        if right == 0.0:
            raise ZeroDivisionError("division by zero")
        return left / right
    if head == "^":
        return left ** right
    raise AssertionError(f"unknown node {head!r}")


class SignalExpr:
    """Parsed scalar signal ``u(t)``; callable on a float time."""

    def __init__(self, source, tree):
        self.source = source
        self._tree = tree

    def __call__(self, t):
        try:
            value = _eval(self._tree, float(t))
        except ZeroDivisionError as exc:
            raise SignalEvalError(
                f"signal {self.source!r} undefined at t={t:g}: {exc}", t=float(t)
            ) from exc
        except (OverflowError, ValueError) as exc:
            raise SignalEvalError(
                f"signal {self.source!r} failed at t={t:g}: {exc}", t=float(t)
            ) from exc
        if isinstance(value, complex) or not math.isfinite(value):
            raise SignalEvalError(
                f"signal {self.source!r} is non-finite at t={t:g}", t=float(t)
            )
        return value

    def __repr__(self):
        return f"SignalExpr({self.source!r})"


def parse_signal(text):
    """Parse an input-signal expression into a callable :class:`SignalExpr`."""
    if not isinstance(text, str):
        raise SignalSyntaxError(f"expected str, got {type(text).__name__}")
    return SignalExpr(text, _Parser(text).parse())
