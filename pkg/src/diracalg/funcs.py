"""Differentiable coefficient functions and 2x2 matrix functions.

Operators in this package carry their coefficients as `Fn` objects: numpy-
vectorized callables that know their own analytic derivative.  Products,
sums and powers propagate derivatives by the usual calculus rules, so
composed operators can be evaluated and differentiated exactly (to roundoff)
instead of by finite differences.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "Fn", "const", "xvar", "lift", "reflect", "shift",
    "SIN", "COS", "TAN", "COT", "SINH", "COSH", "TANH", "COTH",
    "EXP", "SQRT", "LOG", "POW",
    "Matrix2", "sigma1", "sigma2", "sigma3", "ident2", "zero2",
]


class Fn:
    """A scalar function of one real variable with an analytic derivative.

    `f` maps numpy arrays to numpy arrays (values may be complex).  `d` is
    either the derivative Fn or a thunk producing it lazily.

    Derivative towers built by the arithmetic share subtrees heavily, so
    each node keeps a tiny evaluation cache keyed on the input array;
    without it, deep ladder chains re-walk an exponential number of paths.
    """

    __slots__ = ("f", "_d", "_const", "_cache")

    def __init__(self, f, d=None, const_val=None):
        self.f = f
        self._d = d
        self._const = const_val  # not None iff the function is constant
        self._cache = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self._const is not None:
            return np.full(x.shape, self._const)
        if x.size > 1:
            key = (id(x), x.shape, x.flat[0], x.flat[-1])
            if self._cache is not None and self._cache[0] == key:
                return self._cache[1]
            val = self.f(x)
            self._cache = (key, val)
            return val
        return self.f(x)

    @property
    def deriv(self):
        if callable(self._d) and not isinstance(self._d, Fn):
            self._d = self._d()
        if self._d is None:
            self._d = const(0.0)
        return self._d

    @property
    def is_const(self):
        return self._const is not None

    @property
    def const_value(self):
        return self._const

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = as_fn(other)
        if self.is_const and other.is_const:
            return const(self._const + other._const)
        if self.is_const and self._const == 0:
            return other
        if other.is_const and other._const == 0:
            return self
        return Fn(lambda x, a=self, b=other: a(x) + b(x),
                  lambda a=self, b=other: a.deriv + b.deriv)

    __radd__ = __add__

    def __neg__(self):
        if self.is_const:
            return const(-self._const)
        return Fn(lambda x, a=self: -a(x), lambda a=self: -a.deriv)

    def __sub__(self, other):
        return self + (-as_fn(other))

    def __rsub__(self, other):
        return as_fn(other) + (-self)

    def __mul__(self, other):
        other = as_fn(other)
        if self.is_const and other.is_const:
            return const(self._const * other._const)
        for a, b in ((self, other), (other, self)):
            if a.is_const:
                if a._const == 0:
                    return const(0.0)
                if a._const == 1:
                    return b
                return Fn(lambda x, c=a._const, g=b: c * g(x),
                          lambda c=a._const, g=b: c * g.deriv)
        return Fn(lambda x, a=self, b=other: a(x) * b(x),
                  lambda a=self, b=other: a.deriv * b + a * b.deriv)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_fn(other)
        if other.is_const:
            return self * (1.0 / other._const)
        return Fn(lambda x, a=self, b=other: a(x) / b(x),
                  lambda a=self, b=other: (a.deriv * b - a * b.deriv) / (b * b))

    def __rtruediv__(self, other):
        return as_fn(other) / self

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)):
            raise TypeError("integer powers only; use POW for real exponents")
        if n == 0:
            return const(1.0)
        if n == 1:
            return self
        return Fn(lambda x, a=self, k=n: a(x) ** k,
                  lambda a=self, k=n: k * a ** (k - 1) * a.deriv)


def as_fn(v) -> Fn:
    if isinstance(v, Fn):
        return v
    return const(v)


def const(c) -> Fn:
    c = complex(c)
    if c.imag == 0:
        c = c.real
    return Fn(None, None, const_val=c)


def xvar() -> Fn:
    return Fn(lambda x: x, lambda: const(1.0))


def lift(fvec, dchain):
    """Unary elementwise wrapper: returns g -> Fn(fvec(g(x))) with chain rule.

    `dchain(g)` must return the outer derivative as an Fn of x.
    """
    def wrapper(g):
        g = as_fn(g)
        return Fn(lambda x, g=g: fvec(g(x)),
                  lambda g=g: dchain(g) * g.deriv)
    return wrapper


SIN = lift(np.sin, lambda g: COS(g))
COS = lift(np.cos, lambda g: -SIN(g))
TAN = lift(np.tan, lambda g: 1.0 / COS(g) ** 2)
COT = lift(lambda u: 1.0 / np.tan(u), lambda g: -1.0 / SIN(g) ** 2)
SINH = lift(np.sinh, lambda g: COSH(g))
COSH = lift(np.cosh, lambda g: SINH(g))
TANH = lift(np.tanh, lambda g: 1.0 / COSH(g) ** 2)
COTH = lift(lambda u: np.cosh(u) / np.sinh(u), lambda g: -1.0 / SINH(g) ** 2)
EXP = lift(np.exp, lambda g: EXP(g))
LOG = lift(np.log, lambda g: 1.0 / g)
SQRT = lift(np.sqrt, lambda g: 0.5 / SQRT(g))


def POW(g, alpha):
    """g(x)**alpha for real alpha; g must stay positive on the domain."""
    g = as_fn(g)
    if alpha == 0:
        return const(1.0)
    return Fn(lambda x, g=g, a=alpha: g(x) ** a,
              lambda g=g, a=alpha: a * POW(g, a - 1) * g.deriv)


def reflect(g):
    """x -> g(-x)."""
    g = as_fn(g)
    if g.is_const:
        return g
    return Fn(lambda x, g=g: g(-x), lambda g=g: -reflect(g.deriv))


def shift(g, a):
    """x -> g(x + a)."""
    g = as_fn(g)
    if g.is_const:
        return g
    return Fn(lambda x, g=g, a=a: g(x + a), lambda g=g, a=a: shift(g.deriv, a))


class Matrix2:
    """2x2 matrix with Fn entries."""

    __slots__ = ("a",)

    def __init__(self, a11, a12, a21, a22):
        self.a = (as_fn(a11), as_fn(a12), as_fn(a21), as_fn(a22))

    def __add__(self, other):
        return Matrix2(*(p + q for p, q in zip(self.a, other.a)))

    def __sub__(self, other):
        return Matrix2(*(p - q for p, q in zip(self.a, other.a)))

    def __neg__(self):
        return Matrix2(*(-p for p in self.a))

    def scale(self, c):
        return Matrix2(*(p * c for p in self.a))

    def __matmul__(self, other):
        (a, b, c, d), (e, f, g, h) = self.a, other.a
        return Matrix2(a * e + b * g, a * f + b * h,
                       c * e + d * g, c * f + d * h)

    @property
    def deriv(self):
        return Matrix2(*(p.deriv for p in self.a))

    def apply(self, spinor):
        """Apply to an (Fn, Fn) spinor."""
        u, v = spinor
        a, b, c, d = self.a
        return (a * u + b * v, c * u + d * v)

    def eval(self, x):
        """Evaluate entries on x; returns array of shape (2, 2, len(x))."""
        x = np.asarray(x, dtype=float)
        vals = [np.asarray(p(x), dtype=complex) for p in self.a]
        return np.array(vals).reshape(2, 2, -1)

    def is_zero(self):
        return all(p.is_const and p.const_value == 0 for p in self.a)


def ident2():
    return Matrix2(1.0, 0.0, 0.0, 1.0)


def zero2():
    return Matrix2(0.0, 0.0, 0.0, 0.0)


def sigma1():
    return Matrix2(0.0, 1.0, 1.0, 0.0)


def sigma2():
    return Matrix2(0.0, -1j, 1j, 0.0)


def sigma3():
    return Matrix2(1.0, 0.0, 0.0, -1.0)
