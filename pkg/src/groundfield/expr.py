"""A small expression language for scalar potentials u(x) on R^n.

Grammar (precedence from loosest to tightest)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := primary ("^" unary)?          # right associative
    primary := NUMBER | "x1".."xn" | "r" | FUNC "(" expr ")" | "(" expr ")"

``r`` denotes |x|. Functions: exp, log, sqrt, sin, cos, abs. Unary minus binds
looser than ``^`` so ``-2^2`` is -4. Numbers are decimal with an optional
exponent; there is no implicit multiplication.

Derivatives come from :mod:`groundfield.dual`, never from finite differences.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import dual
from .dual import Dual2
from .errors import ExprSyntaxError, UnknownIdentifier, VariableOutOfRange


@dataclass(frozen=True)
class Num:
    value: float

    def __post_init__(self):
        if not np.isfinite(self.value) or self.value < 0:
            raise ValueError("Num literals are finite and non-negative; use num() for signed constants")


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Radius:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Radius, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)
_VAR = re.compile(r"x([1-9][0-9]*)$")


def num(value: float) -> Expr:
    """Signed constant as an AST (negative values become Neg(Num))."""
    value = float(value)
    return Neg(Num(-value)) if value < 0 else Num(value)


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, n):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value or kind != "op":
            raise ExprSyntaxError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def primary(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "ident":
            if val in dual.FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            if val == "r":
                return Radius()
            m = _VAR.match(val)
            if m:
                index = int(m.group(1))
                if self.n is not None and index > self.n:
                    raise VariableOutOfRange(f"{val} used in dimension n={self.n}")
                return Var(index)
            raise UnknownIdentifier(f"unknown identifier {val!r} at position {pos}")
        raise ExprSyntaxError(f"unexpected {val or 'end of input'!r}", pos)


def parse(text: str, n: int | None = None) -> Expr:
    """Parse ``text`` into an AST; variables x_i must satisfy i <= n when n is given."""
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(text, n).parse()


def render(node: Expr) -> str:
    """Canonical fully parenthesised text; ``parse(render(e)) == e``."""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Radius):
        return "r"
    if isinstance(node, Neg):
        return f"(-{render(node.operand)})"
    if isinstance(node, BinOp):
        return f"({render(node.left)} {node.op} {render(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({render(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def max_variable(node: Expr) -> int:
    if isinstance(node, Var):
        return node.index
    if isinstance(node, Neg):
        return max_variable(node.operand)
    if isinstance(node, BinOp):
        return max(max_variable(node.left), max_variable(node.right))
    if isinstance(node, Call):
        return max_variable(node.arg)
    return 0


def is_constant(node: Expr) -> bool:
    if isinstance(node, (Var, Radius)):
        return False
    if isinstance(node, Neg):
        return is_constant(node.operand)
    if isinstance(node, BinOp):
        return is_constant(node.left) and is_constant(node.right)
    if isinstance(node, Call):
        return is_constant(node.arg)
    return True


def is_radial(node: Expr) -> bool:
    """True when the expression depends on x only through r."""
    return max_variable(node) == 0


def scale_arguments(node: Expr, lam: float) -> Expr:
    """The expression for x -> u(lam * x), lam > 0."""
    c = num(lam)
    if isinstance(node, Var):
        return BinOp("*", c, node)
    if isinstance(node, Radius):
        return BinOp("*", c, node)
    if isinstance(node, Neg):
        return Neg(scale_arguments(node.operand, lam))
    if isinstance(node, BinOp):
        return BinOp(node.op, scale_arguments(node.left, lam), scale_arguments(node.right, lam))
    if isinstance(node, Call):
        return Call(node.func, scale_arguments(node.arg, lam))
    return node


def _eval(node, leaves):
    if isinstance(node, Num):
        return Dual2(node.value)
    if isinstance(node, Var):
        return leaves.var(node.index)
    if isinstance(node, Radius):
        return leaves.radius()
    if isinstance(node, Neg):
        return -_eval(node.operand, leaves)
    if isinstance(node, Call):
        return dual.FUNCTIONS[node.func](_eval(node.arg, leaves))
    if isinstance(node, BinOp):
        if node.op == "^" and is_constant(node.right):
            c = float(_eval(node.right, leaves).val)
            if isinstance(node.left, Radius) and c > 0 and c % 2 == 0:
                # r^(2j) is a polynomial, smooth through the origin
                return leaves.radius_sq().power(c / 2)
            return _eval(node.left, leaves).power(c)
        a = _eval(node.left, leaves)
        b = _eval(node.right, leaves)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            return a / b
        return a ** b
    raise TypeError(f"not an expression node: {node!r}")


class _PointLeaves:
    def __init__(self, x, order):
        self.x = np.asarray(x, dtype=float)
        self.order = order
        self._coords = None
        self._r = None

    def var(self, i):
        if i > self.x.shape[-1]:
            raise VariableOutOfRange(f"x{i} evaluated at a point of dimension {self.x.shape[-1]}")
        if self._coords is None:
            self._coords = Dual2.coordinates(self.x, self.order)
        return self._coords[i - 1]

    def radius(self):
        if self._r is None:
            self._r = Dual2.radius(self.x, self.order)
        return self._r

    def radius_sq(self):
        n = self.x.shape[-1]
        total = self.var(1) * self.var(1)
        for i in range(2, n + 1):
            total = total + self.var(i) * self.var(i)
        return total


class _RadialLeaves:
    def __init__(self, r):
        self.r = np.asarray(r, dtype=float)

    def var(self, i):
        raise VariableOutOfRange("radial evaluation of an expression that uses coordinates")

    def radius(self):
        return Dual2(self.r)

    def radius_sq(self):
        return Dual2(self.r * self.r)


def evaluate(node: Expr, x, order: int = 0) -> Dual2:
    """Evaluate at points ``x`` of shape (..., n), propagating derivatives up to ``order``."""
    x = np.asarray(x, dtype=float)
    out = _eval(node, _PointLeaves(x, order))
    batch = x.shape[:-1]
    if out.val.shape != batch:
        # constant subtrees carry no batch dimensions
        n = x.shape[-1]
        out = Dual2(np.broadcast_to(out.val, batch).copy(),
                    None if out.grad is None else np.broadcast_to(out.grad, batch + (n,)).copy(),
                    None if out.hess is None else np.broadcast_to(out.hess, batch + (n, n)).copy(),
                    out.order)
    return out


def evaluate_radial(node: Expr, r):
    """Values of a radial expression as a function of r (no derivatives)."""
    with np.errstate(all="ignore"):
        return _eval(node, _RadialLeaves(r)).val


def eval_u(node: Expr, x):
    with np.errstate(all="ignore"):
        return evaluate(node, x, 0).val


def grad_u(node: Expr, x):
    x = np.asarray(x, dtype=float)
    return evaluate(node, x, 1).gradient(x.shape[-1])


def laplacian_u(node: Expr, x):
    return evaluate(node, x, 2).laplacian
