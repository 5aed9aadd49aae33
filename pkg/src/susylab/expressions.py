"""Small symbolic expression AST with exact differentiation.

Grammar accepted by :func:`parse` (infix, usual precedence)::

    expr    := term  (("+" | "-") term)*
    term    := factor (("*" | "/") factor)*
    factor  := ("+" | "-") factor | power
    power   := atom (("^" | "**") factor)?      # exponent must be constant
    atom    := NUMBER | NAME | "exp" "(" expr ")" | "(" expr ")"

NAME is the coordinate ``x`` or a parameter bound via ``params``. Node set:
constant, variable, sum, product, power (constant rational exponent), exp
and reciprocal (division maps to a reciprocal product). Powers with
non-integer exponents evaluate only for positive bases; integer exponents
work for any base so that ordinary polynomials stay usable on the full line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, EvaluationError


class Expr:
    def diff(self) -> "Expr":
        raise NotImplementedError

    def evaluate(self, x):
        raise NotImplementedError

    def is_entire(self) -> bool:
        """True when the expression is analytic on the whole complex plane."""
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def diff(self):
        return Const(0.0)

    def evaluate(self, x):
        return self.value

    def is_entire(self):
        return True

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def diff(self):
        return Const(1.0)

    def evaluate(self, x):
        return x

    def is_entire(self):
        return True

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Sum(Expr):
    left: Expr
    right: Expr

    def diff(self):
        return add(self.left.diff(), self.right.diff())

    def evaluate(self, x):
        return self.left.evaluate(x) + self.right.evaluate(x)

    def is_entire(self):
        return self.left.is_entire() and self.right.is_entire()

    def __str__(self):
        return f"({self.left} + {self.right})"


@dataclass(frozen=True)
class Product(Expr):
    left: Expr
    right: Expr

    def diff(self):
        return add(mul(self.left.diff(), self.right), mul(self.left, self.right.diff()))

    def evaluate(self, x):
        return self.left.evaluate(x) * self.right.evaluate(x)

    def is_entire(self):
        return self.left.is_entire() and self.right.is_entire()

    def __str__(self):
        return f"({self.left} * {self.right})"


@dataclass(frozen=True)
class Power(Expr):
    base: Expr
    exponent: float

    def diff(self):
        return mul(mul(Const(self.exponent), Power(self.base, self.exponent - 1.0)), self.base.diff())

    def evaluate(self, x):
        b = self.base.evaluate(x)
        p = self.exponent
        if p == int(p):
            return b ** int(p)
        if not np.iscomplexobj(b) and np.any(np.asarray(b) <= 0.0):
            raise EvaluationError(
                f"power with non-integer exponent {p} needs a positive base"
            )
        return b ** p

    def is_entire(self):
        return self.base.is_entire() and self.exponent == int(self.exponent) and self.exponent >= 0

    def __str__(self):
        return f"({self.base} ^ {self.exponent})"


@dataclass(frozen=True)
class ExpNode(Expr):
    arg: Expr

    def diff(self):
        return mul(self, self.arg.diff())

    def evaluate(self, x):
        return np.exp(self.arg.evaluate(x))

    def is_entire(self):
        return self.arg.is_entire()

    def __str__(self):
        return f"exp({self.arg})"


@dataclass(frozen=True)
class Reciprocal(Expr):
    arg: Expr

    def diff(self):
        # d(1/u) = -u' / u^2
        return mul(Const(-1.0), mul(self.arg.diff(), Product(self, self)))

    def evaluate(self, x):
        return 1.0 / self.arg.evaluate(x)

    def is_entire(self):
        return False

    def __str__(self):
        return f"(1 / {self.arg})"


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and a.value == 0.0:
        return b
    if isinstance(b, Const) and b.value == 0.0:
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Sum(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const):
        if a.value == 0.0:
            return Const(0.0)
        if a.value == 1.0:
            return b
    if isinstance(b, Const):
        if b.value == 0.0:
            return Const(0.0)
        if b.value == 1.0:
            return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    return Product(a, b)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ConfigurationError(f"bad character in expression at {text[pos:]!r}")
        tokens.append(m.group(m.lastgroup))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, tok):
        got = self.take()
        if got != tok:
            raise ConfigurationError(f"expected {tok!r}, got {got!r}")

    def expr(self) -> Expr:
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            node = add(node, rhs if op == "+" else mul(Const(-1.0), rhs))
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            node = mul(node, rhs if op == "*" else Reciprocal(rhs))
        return node

    def factor(self) -> Expr:
        if self.peek() in ("+", "-"):
            op = self.take()
            inner = self.factor()
            return inner if op == "+" else mul(Const(-1.0), inner)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            exponent = self.factor()
            if not isinstance(exponent, Const):
                raise ConfigurationError("exponent must be a numeric constant")
            return Power(base, exponent.value)
        return base

    def atom(self) -> Expr:
        tok = self.take()
        if tok is None:
            raise ConfigurationError("unexpected end of expression")
        if tok == "(":
            node = self.expr()
            self.expect(")")
            return node
        if tok == "exp":
            self.expect("(")
            node = self.expr()
            self.expect(")")
            return ExpNode(node)
        if re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", tok):
            return Var(tok)
        try:
            return Const(float(tok))
        except ValueError:
            raise ConfigurationError(f"unexpected token {tok!r}") from None


def _bind(node: Expr, params: dict[str, float]) -> Expr:
    if isinstance(node, Var):
        if node.name == "x":
            return node
        if node.name in params:
            return Const(float(params[node.name]))
        raise ConfigurationError(f"unbound name {node.name!r} in expression")
    if isinstance(node, Sum):
        return add(_bind(node.left, params), _bind(node.right, params))
    if isinstance(node, Product):
        return mul(_bind(node.left, params), _bind(node.right, params))
    if isinstance(node, Power):
        return Power(_bind(node.base, params), node.exponent)
    if isinstance(node, ExpNode):
        return ExpNode(_bind(node.arg, params))
    if isinstance(node, Reciprocal):
        return Reciprocal(_bind(node.arg, params))
    return node


def parse(text: str, params: dict[str, float] | None = None) -> Expr:
    """Parse an infix expression in the coordinate ``x``; every other name
    must be supplied through ``params`` and is folded to a constant."""
    parser = _Parser(_tokenize(text))
    node = parser.expr()
    if parser.peek() is not None:
        raise ConfigurationError(f"trailing tokens after expression: {parser.tokens[parser.i:]}")
    return _bind(node, params or {})


def evaluate_checked(node: Expr, x: np.ndarray) -> np.ndarray:
    """Evaluate and reject non-finite samples, naming the first bad point."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        vals = np.asarray(node.evaluate(x), dtype=float)
    if vals.shape != np.shape(x):
        vals = np.broadcast_to(vals, np.shape(x)).copy()
    bad = ~np.isfinite(vals)
    if bad.any():
        where = np.asarray(x)[bad]
        raise EvaluationError(f"expression not finite at x = {where[0]!r}")
    return vals
