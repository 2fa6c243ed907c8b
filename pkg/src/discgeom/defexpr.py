"""Defining-function DSL: real-valued expressions in complex variables z1..zn.

Grammar (documented in docs/grammar.md):

    expr     = term (("+" | "-") term)*
    term     = factor (("*" | "/") factor)*
    factor   = "-" factor | power
    power    = atom ["^" exponent]
    exponent = ["-"] NUMBER | "(" ["-"] NUMBER ")"
    atom     = NUMBER | "pi" | "e" | "i" | VARIABLE | PARAMETER
             | FUNCTION "(" expr ")" | "(" expr ")"

Functions: Re, Im, abs, abs2, exp, log, sqrt, conj.  Variables are z1..zn
(1-based).  Parameters are written $name and are real-valued.  There is no
implicit multiplication.  Exponents are numeric literals: integer exponents
apply to any base by repeated multiplication, non-integer exponents require a
provably real nonnegative base (abs, abs2, exp of a real, ...) and evaluate
as exp(a*log x).

A type pass assigns every node "real" or "complex"; the root must be real.
Evaluation is a pure tree walk, generic over the scalar ring: plain floats,
dual numbers, or numpy arrays inside :class:`~discgeom.cnum.Cx` parts.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import scalars as sc
from .cnum import Cx, cexp, cpow_int
from .errors import (
    DimensionError,
    EvalDomainError,
    ExprSyntaxError,
    MissingParameterError,
    RealnessError,
)
from .scalars import Dual

__all__ = [
    "ComplexPoint", "ExprAst", "parse", "evaluate", "pretty",
    "Num", "ImagUnit", "Const", "Var", "Param", "Unary", "Binary", "Pow",
]

ComplexPoint = tuple  # sequence of n complex scalars, n >= 2

_FUNCTIONS = ("Re", "Im", "abs", "abs2", "exp", "log", "sqrt", "conj")
_CONSTANTS = {"pi": np.pi, "e": np.e}


# --- AST nodes ---------------------------------------------------------------
# Nodes compare structurally; the type pass attaches is_real / is_nonneg
# annotations after construction and the tree is then treated as immutable.


@dataclass(eq=True)
class Node:
    is_real: bool = field(default=False, init=False, compare=False, repr=False)
    is_nonneg: bool = field(default=False, init=False, compare=False, repr=False)


@dataclass(eq=True)
class Num(Node):
    value: float


@dataclass(eq=True)
class ImagUnit(Node):
    pass


@dataclass(eq=True)
class Const(Node):
    name: str


@dataclass(eq=True)
class Var(Node):
    index: int  # 1-based


@dataclass(eq=True)
class Param(Node):
    name: str


@dataclass(eq=True)
class Unary(Node):
    op: str  # neg conj re im abs abs2 exp log sqrt
    arg: "AnyNode"


@dataclass(eq=True)
class Binary(Node):
    op: str  # add sub mul div
    lhs: "AnyNode"
    rhs: "AnyNode"


@dataclass(eq=True)
class Pow(Node):
    base: "AnyNode"
    exponent: float


AnyNode = Union[Num, ImagUnit, Const, Var, Param, Unary, Binary, Pow]


@dataclass(eq=True)
class ExprAst:
    """A parsed, type-checked expression over z1..zn."""

    root: AnyNode
    n: int

    def parameters(self):
        names = set()
        _collect_params(self.root, names)
        return names

    def pretty(self) -> str:
        return pretty(self)


def _collect_params(node, out):
    if isinstance(node, Param):
        out.add(node.name)
    elif isinstance(node, Unary):
        _collect_params(node.arg, out)
    elif isinstance(node, Binary):
        _collect_params(node.lhs, out)
        _collect_params(node.rhs, out)
    elif isinstance(node, Pow):
        _collect_params(node.base, out)


# --- lexer -------------------------------------------------------------------

_TOKEN_RE = _re.compile(r"""
    (?P<NUM>(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)
  | (?P<PARAM>\$[A-Za-z_][A-Za-z0-9_]*)
  | (?P<IDENT>[A-Za-z][A-Za-z0-9]*)
  | (?P<OP>[-+*/^()])
  | (?P<WS>\s+)
""", _re.VERBOSE)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "WS":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("END", "", len(text)))
    return tokens


# --- parser ------------------------------------------------------------------

_VAR_RE = _re.compile(r"^z(\d+)$")


class _Parser:
    def __init__(self, tokens, n):
        self.tokens = tokens
        self.i = 0
        self.n = n

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, text, pos = self.peek()
        if kind == "OP" and text == op:
            return self.advance()
        raise ExprSyntaxError(f"expected {op!r}, found {text or 'end of input'!r}",
                              pos, expected=(op,))

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "END":
            raise ExprSyntaxError(f"unexpected trailing input {text!r}", pos,
                                  expected=("end of input",))
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "OP" and text in "+-":
                self.advance()
                rhs = self.term()
                node = Binary("add" if text == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "OP" and text in "*/":
                self.advance()
                rhs = self.factor()
                node = Binary("mul" if text == "*" else "div", node, rhs)
            else:
                return node

    def factor(self):
        kind, text, _ = self.peek()
        if kind == "OP" and text == "-":
            self.advance()
            return Unary("neg", self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "OP" and text == "^":
            self.advance()
            return Pow(base, self.exponent())
        return base

    def exponent(self):
        kind, text, pos = self.peek()
        if kind == "OP" and text == "(":
            self.advance()
            value = self.signed_number()
            self.expect_op(")")
            return value
        return self.signed_number()

    def signed_number(self):
        sign = 1.0
        kind, text, pos = self.peek()
        if kind == "OP" and text == "-":
            self.advance()
            sign = -1.0
            kind, text, pos = self.peek()
        if kind != "NUM":
            raise ExprSyntaxError(
                f"exponent must be a numeric literal, found {text or 'end of input'!r}",
                pos, expected=("number",))
        self.advance()
        return sign * float(text)

    def atom(self):
        kind, text, pos = self.advance()
        if kind == "NUM":
            return Num(float(text))
        if kind == "PARAM":
            return Param(text[1:])
        if kind == "OP" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "IDENT":
            if text in _FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Unary(text.lower() if text in ("Re", "Im") else text, arg)
            if text in _CONSTANTS:
                return Const(text)
            if text == "i":
                return ImagUnit()
            m = _VAR_RE.match(text)
            if m:
                index = int(m.group(1))
                if not 1 <= index <= self.n:
                    raise DimensionError(
                        f"variable z{index} exceeds declared dimension n={self.n}")
                return Var(index)
            raise ExprSyntaxError(f"unknown identifier {text!r}", pos,
                                  expected=_FUNCTIONS + ("pi", "e", "i", "z<j>"))
        raise ExprSyntaxError(f"unexpected token {text or 'end of input'!r}", pos,
                              expected=("number", "identifier", "("))


# --- realness type pass --------------------------------------------------------


def _typecheck(node):
    """Annotate is_real / is_nonneg bottom-up; raise RealnessError on misuse."""
    if isinstance(node, Num):
        node.is_real, node.is_nonneg = True, node.value >= 0
    elif isinstance(node, ImagUnit):
        node.is_real, node.is_nonneg = False, False
    elif isinstance(node, Const):
        node.is_real, node.is_nonneg = True, True
    elif isinstance(node, Var):
        node.is_real, node.is_nonneg = False, False
    elif isinstance(node, Param):
        node.is_real, node.is_nonneg = True, False
    elif isinstance(node, Unary):
        _typecheck(node.arg)
        a = node.arg
        if node.op == "neg":
            node.is_real, node.is_nonneg = a.is_real, False
        elif node.op == "conj":
            node.is_real, node.is_nonneg = a.is_real, a.is_nonneg
        elif node.op == "re":
            node.is_real, node.is_nonneg = True, a.is_real and a.is_nonneg
        elif node.op == "im":
            node.is_real, node.is_nonneg = True, False
        elif node.op in ("abs", "abs2"):
            node.is_real, node.is_nonneg = True, True
        elif node.op == "exp":
            node.is_real = a.is_real
            node.is_nonneg = a.is_real
        elif node.op in ("log", "sqrt"):
            if not a.is_real:
                raise RealnessError(f"{node.op}() requires a real argument, got a "
                                    f"complex one: {pretty_node(a)}")
            node.is_real = True
            node.is_nonneg = node.op == "sqrt"
        else:
            raise AssertionError(node.op)
    elif isinstance(node, Binary):
        _typecheck(node.lhs)
        _typecheck(node.rhs)
        node.is_real = node.lhs.is_real and node.rhs.is_real
        both_nonneg = node.lhs.is_nonneg and node.rhs.is_nonneg
        node.is_nonneg = node.is_real and both_nonneg and node.op in ("add", "mul", "div")
    elif isinstance(node, Pow):
        _typecheck(node.base)
        b = node.base
        if float(node.exponent).is_integer():
            node.is_real = b.is_real
            node.is_nonneg = b.is_nonneg or (b.is_real and int(node.exponent) % 2 == 0)
        else:
            if not (b.is_real and b.is_nonneg):
                raise RealnessError(
                    "pow with non-integer exponent requires a provably real "
                    f"nonnegative base, got: {pretty_node(b)}")
            node.is_real, node.is_nonneg = True, True
    else:
        raise AssertionError(type(node))


def parse(text: str, n: int) -> ExprAst:
    """Parse `text` over variables z1..zn and run the realness type pass."""
    if n < 2:
        raise DimensionError(f"ambient dimension must be >= 2, got {n}")
    root = _Parser(_tokenize(text), n).parse()
    _typecheck(root)
    if not root.is_real:
        raise RealnessError(
            f"expression is not provably real-valued: {pretty_node(root)}")
    return ExprAst(root, n)


# --- pretty printer ------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(node):
    if isinstance(node, Binary):
        return _PREC_ADD if node.op in ("add", "sub") else _PREC_MUL
    if isinstance(node, Unary) and node.op == "neg":
        return _PREC_NEG
    if isinstance(node, Pow):
        return _PREC_POW
    return _PREC_ATOM


def _wrap(node, minimum):
    s = pretty_node(node)
    return f"({s})" if _prec(node) < minimum else s


def pretty_node(node) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, ImagUnit):
        return "i"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Var):
        return f"z{node.index}"
    if isinstance(node, Param):
        return f"${node.name}"
    if isinstance(node, Unary):
        if node.op == "neg":
            return f"-{_wrap(node.arg, _PREC_NEG)}"
        name = {"re": "Re", "im": "Im"}.get(node.op, node.op)
        return f"{name}({pretty_node(node.arg)})"
    if isinstance(node, Binary):
        op = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}[node.op]
        level = _prec(node)
        return f"{_wrap(node.lhs, level)}{op}{_wrap(node.rhs, level + 1)}"
    if isinstance(node, Pow):
        expo = repr(float(node.exponent))
        if node.exponent < 0:
            expo = f"({expo})"
        return f"{_wrap(node.base, _PREC_ATOM)}^{expo}"
    raise AssertionError(type(node))


def pretty(ast: ExprAst) -> str:
    return pretty_node(ast.root)


# --- evaluation ----------------------------------------------------------------


def _strict_value(x):
    """Underlying float for strict-mode checks; None in array mode."""
    while isinstance(x, Dual):
        x = x.value
    if np.ndim(x) != 0:
        return None
    return float(x)


def _as_cx(x):
    return x if isinstance(x, Cx) else Cx(x, 0.0 * x)


def eval_node(node, zs, params, strict=True):
    """Evaluate a type-annotated node.

    Real-typed nodes return a real scalar of the ambient ring; complex-typed
    nodes return a :class:`Cx`.  With strict=True, domain-of-definition
    violations raise :class:`EvalDomainError` naming the subexpression.
    """
    if isinstance(node, Num):
        return node.value
    if isinstance(node, ImagUnit):
        return Cx(0.0, 1.0)
    if isinstance(node, Const):
        return _CONSTANTS[node.name]
    if isinstance(node, Var):
        return zs[node.index - 1]
    if isinstance(node, Param):
        try:
            return params[node.name]
        except KeyError:
            raise MissingParameterError(f"parameter ${node.name} not supplied") from None
    if isinstance(node, Unary):
        a = eval_node(node.arg, zs, params, strict)
        op = node.op
        if op == "neg":
            return -a
        if op == "conj":
            return a.conj() if isinstance(a, Cx) else a
        if op == "re":
            return a.re if isinstance(a, Cx) else a
        if op == "im":
            return a.im if isinstance(a, Cx) else 0.0 * a
        if op == "abs2":
            return a.abs2() if isinstance(a, Cx) else a * a
        if op == "abs":
            if isinstance(a, Cx):
                return a.absval()
            if isinstance(a, Dual):
                return a if sc.scalar_float(a) >= 0 else -a
            return np.abs(a)
        if op == "exp":
            return cexp(a) if isinstance(a, Cx) else sc.exp(a)
        if op == "log":
            if strict:
                v = _strict_value(a)
                if v is not None and v <= 0.0:
                    raise EvalDomainError(f"log of non-positive value {v:g}",
                                          pretty_node(node))
            return sc.log(a)
        if op == "sqrt":
            if strict:
                v = _strict_value(a)
                if v is not None and v < 0.0:
                    raise EvalDomainError(f"sqrt of negative value {v:g}",
                                          pretty_node(node))
            return sc.sqrt(a)
        raise AssertionError(op)
    if isinstance(node, Binary):
        lhs = eval_node(node.lhs, zs, params, strict)
        rhs = eval_node(node.rhs, zs, params, strict)
        op = node.op
        if op in ("add", "sub", "mul"):
            if isinstance(lhs, Cx) != isinstance(rhs, Cx):
                lhs, rhs = _as_cx(lhs), _as_cx(rhs)
            if op == "add":
                return lhs + rhs
            if op == "sub":
                return lhs - rhs
            return lhs * rhs
        # division: guard a vanishing divisor
        if strict:
            v = _strict_value(rhs.abs2() if isinstance(rhs, Cx) else rhs)
            if v is not None and v == 0.0:
                raise EvalDomainError("division by zero", pretty_node(node))
        if isinstance(lhs, Cx) != isinstance(rhs, Cx):
            lhs, rhs = _as_cx(lhs), _as_cx(rhs)
        return lhs / rhs
    if isinstance(node, Pow):
        base = eval_node(node.base, zs, params, strict)
        expo = node.exponent
        if float(expo).is_integer():
            k = int(expo)
            if strict and k < 0:
                v = _strict_value(base.abs2() if isinstance(base, Cx) else base)
                if v is not None and v == 0.0:
                    raise EvalDomainError("zero base with negative exponent",
                                          pretty_node(node))
            return cpow_int(base, k) if isinstance(base, Cx) else base ** k
        if strict:
            v = _strict_value(base)
            if v is not None and v <= 0.0:
                raise EvalDomainError(
                    f"non-integer power of non-positive base {v:g}", pretty_node(node))
        return sc.powr(base, expo)
    raise AssertionError(type(node))


def evaluate(ast: ExprAst, z, params=None) -> float:
    """Evaluate at a point of C^n.  Deterministic; raises on guard violations."""
    params = dict(params or {})
    missing = ast.parameters() - params.keys()
    if missing:
        raise MissingParameterError(
            "missing parameters: " + ", ".join(sorted(missing)))
    if len(z) != ast.n:
        raise DimensionError(f"point has {len(z)} coordinates, expected {ast.n}")
    zs = [Cx.from_complex(c) for c in z]
    result = eval_node(ast.root, zs, params, strict=True)
    return float(result)
