"""Minimal arithmetic grammar for user-supplied metric coefficients.

Grammar: numbers, the variable x1, constants pi and e, operators + - * / ^
(also the unicode multiplication/division signs), parentheses, and the
functions sin cos tan coth sinh cosh sn cn dn sqrt exp log.  Elliptic
functions take the modulus from the `k` parameter supplied alongside the
expression.  Parsing produces an Fn, so derivatives are analytic.
"""
from __future__ import annotations

import re

import numpy as np

from .funcs import (Fn, const, xvar, SIN, COS, TAN, COT, SINH, COSH, COTH,
                    TANH, EXP, SQRT, LOG, POW)
from .specfun import fn_sn, fn_cn, fn_dn

__all__ = ["ExpressionError", "parse_expression"]


class ExpressionError(ValueError):
    """Malformed coefficient expression."""


_TOKEN = re.compile(r"""\s*(?:
    (?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[()+\-*/^×÷])
)""", re.VERBOSE)

_FUNCS1 = {
    "sin": SIN, "cos": COS, "tan": TAN, "cot": COT, "coth": COTH,
    "sinh": SINH, "cosh": COSH, "tanh": TANH, "sqrt": SQRT, "exp": EXP,
    "log": LOG,
}
_ELLIPTIC = {"sn": fn_sn, "cn": fn_cn, "dn": fn_dn}
_CONSTS = {"pi": np.pi, "e": np.e}


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ExpressionError(f"cannot read {text[pos:]!r}")
        pos = m.end()
        if m.group("num"):
            out.append(("num", float(m.group("num"))))
        elif m.group("name"):
            out.append(("name", m.group("name")))
        else:
            op = m.group("op")
            if op in ("**", "^"):
                op = "^"
            elif op == "×":
                op = "*"
            elif op == "÷":
                op = "/"
            out.append(("op", op))
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, tokens, k=None):
        self.toks = tokens
        self.i = 0
        self.k = k

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ExpressionError(f"expected {op!r}, got {val!r}")

    def parse(self):
        e = self.expr()
        if self.peek()[0] != "end":
            raise ExpressionError(f"unexpected trailing {self.peek()[1]!r}")
        return e

    def expr(self):
        node = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.take()
            rhs = self.term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def term(self):
        node = self.power()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.take()
            rhs = self.power()
            node = node * rhs if op == "*" else node / rhs
        return node

    def power(self):
        base = self.unary()
        if self.peek() == ("op", "^"):
            self.take()
            expo = self.unary()
            if not expo.is_const:
                raise ExpressionError("exponent must be a constant")
            ev = expo.const_value
            if ev == int(ev.real) and abs(ev.imag) == 0:
                return base ** int(ev.real)
            return POW(base, float(ev.real))
        return base

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.atom()

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return const(val)
        if kind == "name":
            if val == "x1" or val == "x":
                return xvar()
            if val in _CONSTS:
                return const(_CONSTS[val])
            if val in _FUNCS1:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return _FUNCS1[val](arg)
            if val in _ELLIPTIC:
                if self.k is None:
                    raise ExpressionError(
                        f"{val}(...) needs an elliptic modulus; pass k")
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                if not arg.is_const and not _is_identity(arg):
                    raise ExpressionError(
                        f"{val}(...) supports the bare variable x1 only")
                return _ELLIPTIC[val](self.k)
            raise ExpressionError(f"unknown name {val!r}")
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExpressionError(f"unexpected token {val!r}")


def _is_identity(fn: Fn):
    xs = np.array([0.37, 1.113, 2.71])
    try:
        return bool(np.max(np.abs(np.asarray(fn(xs)) - xs)) < 1e-14)
    except Exception:
        return False


def parse_expression(text, k=None) -> Fn:
    """Parse a coefficient expression into an Fn of x1."""
    if not isinstance(text, str) or not text.strip():
        raise ExpressionError("empty expression")
    return _Parser(_tokenize(text), k).parse()
