"""Diagonal metric profiles and the tetrad pipeline to channel Hamiltonians.

A metric diag(g11(x1), eps*g22(x1)) is compatible with a ladder algebra of
class c1 iff g11 = (g22')^2 / (4 g22 (1 + c1 g22)); the induced gauge term is
g3 = c3 sqrt(1/g22 + c1) (c1 != 0) or c3 sqrt(g22) (c1 = 0).  The Hermitian
channel Hamiltonian is i s1 (g1 d + g1'/2) + s2 (m/sqrt(g22) + g3) + M s3
with g1 = g11^(-1/2); tetrads, affine and spin connection are exposed for
inspection.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .funcs import Fn, as_fn, const, SQRT
from .chanop import AlgebraClass, ChannelOperator, SolutionFamily, build_h

__all__ = [
    "MetricProfile", "ValidationReport", "validate_metric",
    "derive_gauge_potential", "TetradData", "tetrad_data",
    "ChannelOperatorFamily", "hamiltonian_from_metric", "flatten_coordinates",
]


@dataclass
class MetricProfile:
    """Diagonal metric diag(g11, eps*g22) with g11, g22 > 0 on the open domain."""
    g11: Fn
    g22: Fn
    domain: tuple
    epsilon: int = +1
    label: str = "metric"

    def __post_init__(self):
        self.g11 = as_fn(self.g11)
        self.g22 = as_fn(self.g22)
        if self.epsilon not in (+1, -1):
            raise ValueError("epsilon must be +1 (space-like x2) or -1 (time-like)")
        xs = self.sample_points(64)
        for name, g in (("g11", self.g11), ("g22", self.g22)):
            v = np.asarray(g(xs), dtype=complex).real
            if np.any(v <= 0):
                raise ValueError(f"{self.label}: {name} must be positive on the domain")

    def sample_points(self, n=256, margin=0.04):
        a, b = self.domain
        pad = margin * (b - a)
        return np.linspace(a + pad, b - pad, n)


@dataclass
class ValidationReport:
    residual: float
    passed: bool
    notes: str = ""
    tolerance: float = 1e-10


def validate_metric(profile: MetricProfile, cls: AlgebraClass,
                    n=256, tol=1e-10) -> ValidationReport:
    """Check g11 = (g22')^2 / (4 g22 (1 + c1 g22)) pointwise (relative)."""
    xs = profile.sample_points(max(n, 64))
    g11 = np.asarray(profile.g11(xs), dtype=complex).real
    g22 = np.asarray(profile.g22(xs), dtype=complex).real
    dg22 = np.asarray(profile.g22.deriv(xs), dtype=complex).real
    denom = 4.0 * g22 * (1.0 + cls.c1 * g22)
    if np.any(np.abs(denom) < 1e-13 * (1.0 + g22 ** 2)):
        return ValidationReport(np.inf, False,
                                "incompatible-metric: 1 + c1*g22 vanishes on the domain")
    resid = np.abs(g11 - dg22 ** 2 / denom) / (1.0 + np.abs(g11))
    r = float(np.max(resid))
    return ValidationReport(r, r <= tol, tolerance=tol)


def derive_gauge_potential(profile: MetricProfile, cls: AlgebraClass,
                           sign=+1.0) -> Fn:
    """g3 from the class relation; positive branch unless sign = -1."""
    rep = validate_metric(profile, cls)
    if not rep.passed:
        raise ValueError(f"metric incompatible with c1={cls.c1}: {rep.notes or rep.residual}")
    if cls.c1 != 0:
        rad = 1.0 / profile.g22 + float(cls.c1)
    else:
        rad = profile.g22
    xs = profile.sample_points(128)
    if np.any(np.asarray(rad(xs), dtype=complex).real < -1e-12):
        raise ValueError("negative radicand in g3; incompatible parameters")
    return SQRT(rad) * (sign * cls.c3)


@dataclass
class TetradData:
    """Appendix-style frame data for diag(g11, eps*g22): tetrads e^a_mu and
    inverses, nonzero Christoffel symbols, omega^{12}_2 and the spin
    connection coefficient Omega_{x2} = omega_factor * sigma3."""
    e: tuple          # (sqrt(g11), sqrt(g22)) as Fn, diagonal entries
    e_inv: tuple
    gamma_1_11: Fn
    gamma_1_22: Fn
    gamma_2_12: Fn
    omega12_2: Fn
    omega_x2_factor: Fn   # multiplies sigma3 in Omega_{x2}; Omega_{x1} = 0
    epsilon: int


def tetrad_data(profile: MetricProfile) -> TetradData:
    g11, g22, eps = profile.g11, profile.g22, profile.epsilon
    e1, e2 = SQRT(g11), SQRT(g22)
    om = -(g22.deriv) / (2.0 * e1 * e2)
    ifac = 1.0 if eps == 1 else 1j   # i^((1-eps)/2)
    return TetradData(
        e=(e1, e2),
        e_inv=(1.0 / e1, 1.0 / e2),
        gamma_1_11=g11.deriv / (2.0 * g11),
        gamma_1_22=-(float(eps)) * g22.deriv / (2.0 * g11),
        gamma_2_12=g22.deriv / (2.0 * g22),
        omega12_2=om,
        omega_x2_factor=om * (-1j * ifac / 2.0),
        epsilon=eps,
    )


class ChannelOperatorFamily:
    """Channel Hamiltonians of a metric: family_for(m) -> ChannelOperator.

    Also exposes the underlying SolutionFamily (g1 = g11^(-1/2),
    g2 = g22^(-1/2), g3) and the tetrad data used to build it.
    """

    def __init__(self, profile, cls, g3, label="metric"):
        self.profile = profile
        self.cls = cls
        g1 = 1.0 / SQRT(profile.g11)
        g2 = 1.0 / SQRT(profile.g22)
        self.solution_family = SolutionFamily(cls, g1, g2, as_fn(g3),
                                              profile.domain, label)
        self.tetrads = tetrad_data(profile)

    def family_for(self, m) -> ChannelOperator:
        return build_h(self.solution_family, m)

    __call__ = family_for


def hamiltonian_from_metric(profile: MetricProfile, cls: AlgebraClass,
                            g3=None, label="metric") -> ChannelOperatorFamily:
    """Hermitian-rescaled channel Hamiltonians for a compatible metric.

    For epsilon = +1 this is (det g)^(1/4) h (det g)^(-1/4) reduced to the
    channel; for epsilon = -1, the time-like reduction with the frequency
    slot in place of m.  g3 may be supplied to pin a sign branch; by default
    the positive branch of the class relation is used.
    """
    if g3 is None:
        g3 = derive_gauge_potential(profile, cls)
    else:
        rep = validate_metric(profile, cls)
        if not rep.passed:
            raise ValueError("metric incompatible with the requested class")
    return ChannelOperatorFamily(profile, cls, g3, label)


@dataclass
class FlattenResult:
    z_of_x: object
    x_of_z: object
    z_range: tuple
    flat_family: SolutionFamily


def flatten_coordinates(profile: MetricProfile, cls: AlgebraClass = None,
                        g3: Fn = None, tol=1e-10, nodes=512) -> FlattenResult:
    """Cumulative quadrature z(x1) with z' = sqrt(g11), its inverse, and the
    canonical coefficients g2 = g22^(-1/2)(x1(z)), g3(x1(z)).

    The inverse is a monotone spline refined by bisection to `tol`; the
    round trip x -> z -> x is accurate to that tolerance.
    """
    a, b = profile.domain
    pad = 1e-9 * (b - a)
    xs = np.linspace(a + pad, b - pad, nodes)
    sq = lambda t: float(np.sqrt(np.asarray(profile.g11(np.array([t])), dtype=complex).real[0]))
    zs = np.zeros_like(xs)
    for i in range(1, len(xs)):
        val, _ = quad(sq, xs[i - 1], xs[i], epsabs=tol / nodes, epsrel=1e-12, limit=200)
        zs[i] = zs[i - 1] + val
    if np.any(np.diff(zs) <= 0):
        raise RuntimeError("flatten_coordinates: non-monotone z(x1)")
    z_spline = CubicSpline(xs, zs)
    x_spline = CubicSpline(zs, xs)

    def z_of_x(x):
        return z_spline(np.asarray(x, dtype=float))

    def x_of_z(z, refine=True):
        z = np.asarray(z, dtype=float)
        x0 = np.clip(x_spline(z), xs[0], xs[-1])
        if not refine:
            return x0
        out = np.atleast_1d(x0).copy()
        zz = np.atleast_1d(z)
        for i, zt in enumerate(zz):
            f = lambda t: float(z_spline(t)) - float(zt)
            lo = max(xs[0], out[i] - 1e-3 * (b - a))
            hi = min(xs[-1], out[i] + 1e-3 * (b - a))
            if f(lo) * f(hi) <= 0:
                out[i] = brentq(f, lo, hi, xtol=tol)
        return out if z.ndim else float(out[0])

    flat = None
    if cls is not None:
        if g3 is None:
            g3 = derive_gauge_potential(profile, cls)
        xi = lambda z: x_of_z(z, refine=False)
        dxdz = 1.0 / SQRT(profile.g11)   # x'(z) = g11^(-1/2) at x(z)

        def through_inverse(fn):
            # fn(x(z)) with the chain-rule derivative, recursively
            fn = as_fn(fn)
            return Fn(lambda z, f=fn: f(xi(np.asarray(z))),
                      lambda f=fn: through_inverse(f.deriv * dxdz))

        g2z = through_inverse(1.0 / SQRT(profile.g22))
        g3z = through_inverse(g3)
        flat = SolutionFamily(cls, const(1.0), g2z, g3z,
                              (float(zs[0]), float(zs[-1])),
                              profile.label + "-flattened")
    return FlattenResult(z_of_x, x_of_z, (float(zs[0]), float(zs[-1])), flat)
