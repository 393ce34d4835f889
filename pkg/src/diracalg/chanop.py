"""Matrix differential operators restricted to a single angular channel.

A separable operator acting on e^{i m x2} spinors reduces to a 2x2 ordinary
differential operator in x1.  Ladder operators shift the channel label m by
one; Hamiltonians preserve it.  Coefficients are carried symbolically (Fn
objects with analytic derivatives), so products of operators and the
identities between them can be checked to roundoff rather than to
discretization error.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .funcs import (Fn, Matrix2, as_fn, const, ident2, zero2, sigma1, sigma2,
                    sigma3, xvar, SIN, COS, SINH, COSH, EXP, POW)

__all__ = [
    "AlgebraClass", "SolutionFamily", "ChannelOperator", "ChannelError",
    "OrderOverflowError", "build_h", "build_ladder", "compose",
    "identity_residual", "probe_spinors", "family_so3_trig",
    "family_so3_sphere", "family_so21", "family_oscillator",
    "family_from_g2", "weight_energy_squared", "casimir_shift",
]

MAX_ORDER = 2


class ChannelError(ValueError):
    """Channel labels of two operators are incompatible."""


class OrderOverflowError(ValueError):
    """A composition would exceed the supported operator order."""


def as_channel(m) -> Fraction:
    """Channel labels are exact rationals (integers or half-integers here)."""
    if isinstance(m, Fraction):
        return m
    if isinstance(m, (int, np.integer)):
        return Fraction(int(m))
    f = Fraction(m).limit_denominator(2)
    if abs(float(f) - float(m)) > 1e-12:
        raise ChannelError(f"channel label {m} is not an exact half-integer")
    return f


@dataclass(frozen=True)
class AlgebraClass:
    """Structure constants selecting so(2,1) (c1=1), so(3) (c1=-1) or the
    oscillator algebra (c1=0), with coupling c3 and mass M."""
    c1: int
    c3: float
    M: float = 0.0

    def __post_init__(self):
        if self.c1 not in (-1, 0, 1):
            raise ValueError("c1 must be -1, 0 or +1")

    @property
    def c2(self) -> float:
        return -4.0 * self.c3 if self.c1 == 0 else 0.0


def weight_energy_squared(cls: AlgebraClass, m, kind: str) -> float:
    """E^2 of a lowest/highest weight state in channel m."""
    m = float(m)
    s = -0.5 if kind == "lowest" else 0.5
    if cls.c1 != 0:
        return -cls.c1 * ((m + s) ** 2 - cls.c3 ** 2) + cls.M ** 2
    return 4.0 * cls.c3 * (m + s) + cls.M ** 2


def casimir_shift(cls: AlgebraClass, m, ordering: str) -> float:
    """Scalar c(m) in the ladder product j j = h_m^2 - (M^2 + c(m));
    ordering 'J-J+' uses (m + 1/2), 'J+J-' uses (m - 1/2)."""
    s = 0.5 if ordering == "J-J+" else -0.5
    m = float(m)
    if cls.c1 != 0:
        return -cls.c1 * ((m + s) ** 2 - cls.c3 ** 2)
    return 4.0 * cls.c3 * (m + s)


@dataclass
class SolutionFamily:
    """Coefficient triple (g1, g2, g3) closing the ladder algebra.

    g1 is 1 for the canonical families; curved-space families built from a
    metric carry g1 = g11^(-1/2).  g2 must be node-less on the open domain.
    """
    cls: AlgebraClass
    g1: Fn
    g2: Fn
    g3: Fn
    domain: tuple
    label: str = "family"

    def __post_init__(self):
        self.g1 = as_fn(self.g1)
        self.g2 = as_fn(self.g2)
        self.g3 = as_fn(self.g3)
        xs = self.sample_points(64)
        g2v = np.asarray(self.g2(xs), dtype=complex)
        if np.any(np.abs(g2v) < 1e-14) or np.any(np.sign(g2v.real[:-1]) != np.sign(g2v.real[1:])):
            raise ValueError(f"{self.label}: g2 must be node-less on the domain")

    def sample_points(self, n=256, margin=0.04):
        a, b = self.domain
        pad = margin * (b - a)
        return np.linspace(a + pad, b - pad, n)

    def validity_residual(self, n=256):
        """Max relative residual of the closure constraints on n samples.

        For g1 = 1 these are the three canonical ODE constraints; in general
        the first is replaced by g1^2 g2'^2 = g2^4 + c1 g2^2.
        """
        xs = self.sample_points(n)
        c1, c3, c2 = self.cls.c1, self.cls.c3, self.cls.c2
        g1, g2, g3 = self.g1, self.g2, self.g3
        r1 = (g1 * g1 * g2.deriv * g2.deriv - (POW_SAFE(g2, 4) + c1 * g2 * g2))
        scale1 = POW_SAFE(g2, 4) + abs(c1) * g2 * g2
        if c1 != 0:
            r2 = g3 * g3 - c3 ** 2 * (g2 * g2 + c1)
            scale2 = const(max(c3 ** 2, 1.0)) * (g2 * g2 + abs(c1))
        else:
            r2 = g3 * g3 * g2 * g2 - c3 ** 2
            scale2 = const(max(c3 ** 2, 1.0))
        res = 0.0
        for r, s in ((r1, scale1), (r2, scale2)):
            rv = np.abs(np.asarray(r(xs), dtype=complex))
            sv = np.abs(np.asarray(s(xs), dtype=complex)) + 1.0
            res = max(res, float(np.max(rv / sv)))
        # c2-consistency of the third constraint for the flat families
        if self.g1.is_const and self.g1.const_value == 1.0:
            r3 = POW_SAFE(g2, 3) * g3 + 0.5 * c2 * g2 * g2 - g3.deriv * g2.deriv
            s3 = POW_SAFE(g2, 3) * g3 + (abs(c2) / 2 + 1) * g2 * g2
            rv = np.abs(np.asarray(r3(xs), dtype=complex))
            sv = np.abs(np.asarray(s3(xs), dtype=complex)) + 1.0
            res = max(res, float(np.max(rv / sv)))
        return res


def POW_SAFE(g, n):
    # small helper: integer power via repeated product (keeps Fn trees tidy)
    out = g
    for _ in range(n - 1):
        out = out * g
    return out


@dataclass
class ChannelOperator:
    """sum_k coeffs[k] d^k/dx1^k acting channel m_in -> m_out."""
    coeffs: tuple
    m_in: Fraction
    m_out: Fraction
    domain: tuple
    label: str = ""

    def __post_init__(self):
        if len(self.coeffs) - 1 > MAX_ORDER:
            raise OrderOverflowError("operator order above 2 is not supported")
        self.m_in = as_channel(self.m_in)
        self.m_out = as_channel(self.m_out)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def apply_fn(self, spinor):
        """Apply to an (Fn, Fn) spinor, returning an (Fn, Fn) spinor."""
        u, v = (as_fn(spinor[0]), as_fn(spinor[1]))
        out_u, out_v = const(0.0), const(0.0)
        du, dv = u, v
        for k, mat in enumerate(self.coeffs):
            if k > 0:
                du, dv = du.deriv, dv.deriv
            pu, pv = mat.apply((du, dv))
            out_u, out_v = out_u + pu, out_v + pv
        return (out_u, out_v)

    def coeff_eval(self, xs):
        """Stack of coefficient-matrix values, shape (order+1, 2, 2, n)."""
        return np.array([mat.eval(xs) for mat in self.coeffs])

    def __add__(self, other):
        self._check_same_channels(other)
        n = max(len(self.coeffs), len(other.coeffs))
        cs = []
        for k in range(n):
            a = self.coeffs[k] if k < len(self.coeffs) else zero2()
            b = other.coeffs[k] if k < len(other.coeffs) else zero2()
            cs.append(a + b)
        return ChannelOperator(tuple(cs), self.m_in, self.m_out, self.domain)

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def scale(self, c):
        return ChannelOperator(tuple(m.scale(c) for m in self.coeffs),
                               self.m_in, self.m_out, self.domain, self.label)

    def _check_same_channels(self, other):
        if self.m_in != other.m_in or self.m_out != other.m_out:
            raise ChannelError(
                f"channel mismatch: ({self.m_in}->{self.m_out}) vs "
                f"({other.m_in}->{other.m_out})")


def identity_operator(domain, m) -> ChannelOperator:
    return ChannelOperator((ident2(),), m, m, domain, "id")


def scalar_operator(value, domain, m) -> ChannelOperator:
    return ChannelOperator((ident2().scale(value),), m, m, domain)


def compose(outer: ChannelOperator, inner: ChannelOperator) -> ChannelOperator:
    """Symbolic product outer . inner via the Leibniz rule."""
    if inner.m_out != outer.m_in:
        raise ChannelError(
            f"cannot compose: inner ends at channel {inner.m_out}, "
            f"outer starts at {outer.m_in}")
    total = outer.order + inner.order
    if total > MAX_ORDER:
        raise OrderOverflowError(
            f"composition order {total} exceeds the supported cap {MAX_ORDER}")
    out = [zero2() for _ in range(total + 1)]
    for j, A in enumerate(outer.coeffs):
        for k, B in enumerate(inner.coeffs):
            Bd = B
            # d^j (B psi^(k)) = sum_i C(j,i) B^(j-i) psi^(k+i)
            for i in range(j, -1, -1):
                out[k + i] = out[k + i] + (A @ Bd).scale(comb(j, i))
                if i > 0:
                    Bd = Bd.deriv
    return ChannelOperator(tuple(out), inner.m_in, outer.m_out, inner.domain)


# -- construction of h_m and the restricted ladder operators ----------------

def build_h(fam: SolutionFamily, m) -> ChannelOperator:
    """i s1 (g1 d + g1'/2) + s2 (g2 m + g3) + M s3 on channel m."""
    m = as_channel(m)
    V = fam.g2 * float(m) + fam.g3
    A1 = Matrix2(0.0, fam.g1 * 1j, fam.g1 * 1j, 0.0)
    half = fam.g1.deriv * 0.5
    A0 = Matrix2(fam.cls.M, 1j * half - 1j * V, 1j * half + 1j * V, -fam.cls.M)
    return ChannelOperator((A0, A1), m, m, fam.domain, f"h[{m}]")


def build_ladder(fam: SolutionFamily, m, direction: str) -> ChannelOperator:
    """Restricted ladder operator.

    direction '+' : j_m^+ = i(g1 d + g1'/2 + g1(g2'(m+1/2)+g3')/g2 - (g2/2) s3),
                    channel m -> m+1;
    direction '-' : the adjoint form, channel m+1 -> m.
    """
    m = as_channel(m)
    F = fam.g1 * (fam.g2.deriv * (float(m) + 0.5) + fam.g3.deriv) / fam.g2
    half = fam.g1.deriv * 0.5
    if direction == "+":
        diag_u = half + F - fam.g2 * 0.5
        diag_d = half + F + fam.g2 * 0.5
        m_in, m_out = m, m + 1
    elif direction == "-":
        diag_u = half - F + fam.g2 * 0.5
        diag_d = half - F - fam.g2 * 0.5
        m_in, m_out = m + 1, m
    else:
        raise ValueError("direction must be '+' or '-'")
    A1 = Matrix2(fam.g1 * 1j, 0.0, 0.0, fam.g1 * 1j)
    A0 = Matrix2(diag_u * 1j, 0.0, 0.0, diag_d * 1j)
    return ChannelOperator((A0, A1), m_in, m_out, fam.domain,
                           f"j{direction}[{m}]")


# -- residual evaluation -----------------------------------------------------

def probe_spinors(domain, count=5, width_frac=0.1, seed=None):
    """Smooth endpoint-safe probe spinors: Gaussian bumps times low-order
    polynomials at fixed interior centers (deterministic unless seeded)."""
    a, b = domain
    L = b - a
    rng = np.random.default_rng(seed) if seed is not None else None
    centers = np.linspace(a + 0.25 * L, b - 0.25 * L, count)
    probes = []
    x = xvar()
    for i, c in enumerate(centers):
        if rng is not None:
            c = a + L * (0.25 + 0.5 * rng.random())
        w = width_frac * L
        bump = EXP((x - c) * (x - c) * (-0.5 / (w * w)))
        poly = (x - c) * (1.0 / w) if i % 3 == 1 else (
            (x - c) * (x - c) * (1.0 / (w * w)) - 1.0 if i % 3 == 2 else const(1.0))
        f = bump * poly
        if i % 2 == 0:
            probes.append((f, f * 0.5))
        else:
            probes.append((f * 0.3, f))
    return probes


@dataclass
class ResidualReport:
    probe_residual: float
    coeff_residual: float = field(default=float("nan"))

    @property
    def residual(self):
        if np.isnan(self.coeff_residual):
            return self.probe_residual
        return max(self.probe_residual, self.coeff_residual)


def coefficient_residual(lhs: ChannelOperator, rhs: ChannelOperator, xs=None):
    """Max pointwise coefficient discrepancy, relative to the local scale."""
    if xs is None:
        a, b = lhs.domain
        pad = 0.04 * (b - a)
        xs = np.linspace(a + pad, b - pad, 256)
    n = max(len(lhs.coeffs), len(rhs.coeffs))
    worst = 0.0
    for k in range(n):
        A = lhs.coeffs[k] if k < len(lhs.coeffs) else zero2()
        B = rhs.coeffs[k] if k < len(rhs.coeffs) else zero2()
        av, bv = A.eval(xs), B.eval(xs)
        scale = 1.0 + np.maximum(np.abs(av), np.abs(bv))
        worst = max(worst, float(np.max(np.abs(av - bv) / scale)))
    return worst


def identity_residual(lhs: ChannelOperator, rhs: ChannelOperator,
                      probes=None, quad_n=2048) -> ResidualReport:
    """max over probes of ||(lhs - rhs) psi||_2 / ||psi||_2, plus the
    pointwise coefficient discrepancy (both operators are symbolic here)."""
    if lhs.m_in != rhs.m_in or lhs.m_out != rhs.m_out:
        raise ChannelError("identity_residual: channel mismatch")
    if probes is None:
        probes = probe_spinors(lhs.domain)
    if not probes:
        raise ValueError("identity_residual needs at least one probe")
    a, b = lhs.domain
    pad = 0.02 * (b - a)
    xs = np.linspace(a + pad, b - pad, quad_n)
    worst = 0.0
    diff = lhs - rhs
    for sp in probes:
        ru, rv = diff.apply_fn(sp)
        num = np.sqrt(np.trapezoid(np.abs(ru(xs)) ** 2 + np.abs(rv(xs)) ** 2, xs))
        pu, pv = as_fn(sp[0]), as_fn(sp[1])
        den = np.sqrt(np.trapezoid(np.abs(pu(xs)) ** 2 + np.abs(pv(xs)) ** 2, xs))
        worst = max(worst, float(num / den))
    return ResidualReport(worst, coefficient_residual(lhs, rhs))


# -- canonical families ------------------------------------------------------

def family_so21(c3, M=0.0, domain=(0.08, 4.0), symmetric=False) -> SolutionFamily:
    """c1 = +1: g2 = 1/sinh, g3 = c3 coth.  `symmetric=True` restricts to a
    reflection-symmetric domain around the (excluded) singular point 0."""
    x = xvar()
    fam_domain = (-domain[1], domain[1]) if symmetric else domain
    return SolutionFamily(AlgebraClass(1, c3, M), const(1.0),
                          1.0 / SINH(x), c3 * (COSH(x) / SINH(x)),
                          fam_domain, "so21")


def family_so3_trig(c3, M=0.0, halfwidth=np.pi / 2) -> SolutionFamily:
    """c1 = -1 canonical form: g2 = 1/cos on (-pi/2, pi/2)."""
    x = xvar()
    return SolutionFamily(AlgebraClass(-1, c3, M), const(1.0),
                          1.0 / COS(x), c3 * (SIN(x) / COS(x)),
                          (-halfwidth, halfwidth), "so3-trig")


def family_so3_sphere(c3, M=0.0) -> SolutionFamily:
    """c1 = -1 shifted form: g2 = 1/sin, g3 = c3 cot on (0, pi)."""
    x = xvar()
    return SolutionFamily(AlgebraClass(-1, c3, M), const(1.0),
                          1.0 / SIN(x), c3 * (COS(x) / SIN(x)),
                          (0.0, np.pi), "so3-sphere")


def family_oscillator(c3, M=0.0, length=8.0) -> SolutionFamily:
    """c1 = 0: g2 = 1/x, g3 = c3 x on (0, length)."""
    x = xvar()
    return SolutionFamily(AlgebraClass(0, c3, M), const(1.0),
                          1.0 / x, c3 * x, (0.0, length), "oscillator")


def family_from_g2(cls: AlgebraClass, g2: Fn, domain, g3_sign=+1.0,
                   label="custom") -> SolutionFamily:
    """Complete a family from g2 alone: g1 from g1^2 = (g2^4+c1 g2^2)/g2'^2
    and g3 from the class relation, positive branches unless g3_sign=-1."""
    g2 = as_fn(g2)
    from .funcs import SQRT
    rad = (POW_SAFE(g2, 4) + cls.c1 * g2 * g2) / (g2.deriv * g2.deriv)
    xs = np.linspace(domain[0] + 1e-3 * (domain[1] - domain[0]),
                     domain[1] - 1e-3 * (domain[1] - domain[0]), 64)
    if np.any(np.asarray(rad(xs), dtype=complex).real < -1e-12):
        raise ValueError("negative radicand for g1^2; incompatible g2/class")
    g1 = SQRT(rad)
    if cls.c1 != 0:
        g3rad = g2 * g2 + cls.c1
    else:
        g3rad = 1.0 / (g2 * g2)
    if np.any(np.asarray(g3rad(xs), dtype=complex).real < -1e-12):
        raise ValueError("negative radicand for g3; incompatible parameters")
    g3 = SQRT(g3rad) * (g3_sign * cls.c3)
    return SolutionFamily(cls, g1, g2, g3, domain, label)
