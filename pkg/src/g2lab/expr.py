"""A small expression language for immersion components.

Grammar (``^`` binds tightest and is right-associative, then unary minus,
then ``* /``, then ``+ -``)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?
    atom   := NUMBER | NAME | FUNC "(" expr ")" | "(" expr ")"

Powers must evaluate to integer exponents.  Expressions evaluate on numpy
arrays, so a whole grid is computed in one call.
"""

import re
from dataclasses import dataclass

import numpy as np

from .errors import G2LabError

FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp")
VARIABLES = ("u", "v")


class ParseError(G2LabError, ValueError):
    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = tuple(sorted(expected))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {position}{detail}")


class EvaluationError(G2LabError, ValueError):
    pass


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    func: str
    arg: object


_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


def tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", _byte_offset(text, start),
                             ("number", "name", "operator"))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), _byte_offset(text, start)))
        pos = m.end()
    tokens.append(("end", "", len(text.encode("utf-8"))))
    return tokens


def _byte_offset(text, index):
    return len(text[:index].encode("utf-8"))


class _Parser:
    def __init__(self, text, names):
        self.tokens = tokenize(text)
        self.i = 0
        self.names = names

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.peek()
        if kind == "op" and val == op:
            return self.advance()
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos, (op,))

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos, ("+", "-", "*", "/", "^", "end of input"))
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.advance()
            return Num(float(val))
        if kind == "name":
            self.advance()
            if val in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(val, arg)
            if val in self.names:
                return Var(val)
            raise ParseError(f"unknown identifier {val!r}", pos, tuple(self.names) + FUNCTIONS)
        if kind == "op" and val == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos,
                         ("number", "name", "(", "-"))


def parse_expression(text, params=()):
    """Parse ``text`` into a tree; ``params`` names extra numeric parameters."""
    names = tuple(VARIABLES) + tuple(params)
    return _Parser(text, names).parse()


def to_string(node):
    """Fully parenthesized text that parses back to the same tree."""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_string(node.arg)})"
    if isinstance(node, Call):
        return f"{node.func}({to_string(node.arg)})"
    return f"({to_string(node.left)} {node.op} {to_string(node.right)})"


_NP_FUNCS = {"sin": np.sin, "cos": np.cos, "sinh": np.sinh, "cosh": np.cosh, "exp": np.exp}


def evaluate(node, env):
    """Evaluate on scalars or numpy arrays; ``env`` maps names to values."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Neg):
        return -evaluate(node.arg, env)
    if isinstance(node, Call):
        return _NP_FUNCS[node.func](evaluate(node.arg, env))
    left = evaluate(node.left, env)
    right = evaluate(node.right, env)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        return left / right
    r = np.asarray(right, dtype=float)
    if r.size == 0:
        return left
    k = np.round(r)
    if not np.all(np.abs(r - k) < 1e-12) or not np.all(k == k.flat[0]):
        raise EvaluationError("exponent must be a constant integer")
    k = int(k.flat[0])
    if k < 0:
        return 1.0 / np.power(left, -k)
    return np.power(left, k)


# ---------------------------------------------------------------- derivatives

def _is_const(node, var):
    if isinstance(node, Num):
        return True
    if isinstance(node, Var):
        return node.name != var
    if isinstance(node, Neg):
        return _is_const(node.arg, var)
    if isinstance(node, Call):
        return _is_const(node.arg, var)
    return _is_const(node.left, var) and _is_const(node.right, var)


def _mul(a, b):
    if a == Num(0.0) or b == Num(0.0):
        return Num(0.0)
    if a == Num(1.0):
        return b
    if b == Num(1.0):
        return a
    return BinOp("*", a, b)


def _add(a, b):
    if a == Num(0.0):
        return b
    if b == Num(0.0):
        return a
    return BinOp("+", a, b)


def _sub(a, b):
    if b == Num(0.0):
        return a
    if a == Num(0.0):
        return Neg(b)
    return BinOp("-", a, b)


def differentiate(node, var):
    """Symbolic partial derivative (exponents must be constant in ``var``)."""
    if _is_const(node, var):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0)
    if isinstance(node, Neg):
        return Neg(differentiate(node.arg, var))
    if isinstance(node, Call):
        inner = differentiate(node.arg, var)
        outer = {
            "sin": Call("cos", node.arg),
            "cos": Neg(Call("sin", node.arg)),
            "sinh": Call("cosh", node.arg),
            "cosh": Call("sinh", node.arg),
            "exp": node,
        }[node.func]
        return _mul(outer, inner)
    a, b = node.left, node.right
    if node.op in "+-":
        da, db = differentiate(a, var), differentiate(b, var)
        return _add(da, db) if node.op == "+" else _sub(da, db)
    if node.op == "*":
        return _add(_mul(differentiate(a, var), b), _mul(a, differentiate(b, var)))
    if node.op == "/":
        num = _sub(_mul(differentiate(a, var), b), _mul(a, differentiate(b, var)))
        return BinOp("/", num, BinOp("^", b, Num(2.0)))
    if not _is_const(b, var):
        raise EvaluationError("variable exponents are not supported")
    # d(a^k) = k a^(k-1) da
    return _mul(_mul(b, BinOp("^", a, BinOp("-", b, Num(1.0)))), differentiate(a, var))


@dataclass(frozen=True)
class ImmersionExpr:
    """Seven component trees in u, v and named parameters."""

    components: tuple
    params: tuple = ()   # ((name, value), ...)

    @classmethod
    def from_strings(cls, texts, params=None):
        params = dict(params or {})
        for name in params:
            if name in VARIABLES or name in FUNCTIONS:
                raise ValueError(f"parameter name {name!r} is reserved")
        texts = list(texts)
        if len(texts) != 7:
            raise ValueError(f"an immersion needs 7 component expressions, got {len(texts)}")
        trees = tuple(parse_expression(t, tuple(params)) for t in texts)
        return cls(trees, tuple(sorted((k, float(v)) for k, v in params.items())))

    def to_strings(self):
        return [to_string(c) for c in self.components]

    def __call__(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        env = dict(self.params)
        env["u"] = u
        env["v"] = v
        shape = np.broadcast(u, v).shape
        return np.stack([np.broadcast_to(np.asarray(evaluate(c, env), dtype=float), shape)
                         for c in self.components], axis=-1)

    def derivative(self, var):
        return ImmersionExpr(tuple(differentiate(c, var) for c in self.components), self.params)

