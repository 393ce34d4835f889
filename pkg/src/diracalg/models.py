"""Catalog of concrete systems: closed surfaces, open-cage surfaces, the
radial oscillator, the position-dependent-mass system and the horizon-type
metric.

Each entry carries its metric profile (where one exists), the induced
coefficient family, domain and boundary data, the admissible-channel rule,
and the closed-form weight-state constructor.  Sign branches of square
roots are pinned per model so the operator coefficients match their
standard printed forms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .funcs import Fn, as_fn, const, xvar, SIN, COS, TAN, EXP, POW, SQRT
from .specfun import ellipk, fn_sn, fn_cn, fn_dn
from .chanop import (AlgebraClass, SolutionFamily, as_channel, build_h,
                     family_oscillator)
from .geometry import (MetricProfile, ValidationReport, validate_metric,
                       hamiltonian_from_metric, ChannelOperatorFamily)
from .reps import WeightState, make_weight_state, admissible_weights

__all__ = ["ModelSpec", "catalog", "MODEL_NAMES", "btz_check"]

MODEL_NAMES = ("fullerene", "one-hole", "two-hole", "dirac-oscillator",
               "pdm", "btz-like")


@dataclass
class ModelSpec:
    name: str
    family: SolutionFamily
    domain: tuple
    bc: str
    params: dict
    profile: MetricProfile = None
    admissible_kind: str = "lowest"
    numeric_route: str = "eigensolver"    # or "state-rayleigh"
    eigensolve: bool = True

    @property
    def cls(self) -> AlgebraClass:
        return self.family.cls

    def admissible(self, m_values, kind=None):
        kind = kind or self.admissible_kind
        return admissible_weights(self.cls, m_values, kind,
                                  boundary_rule=self._boundary_rule(kind))

    def _boundary_rule(self, kind):
        c3 = self.cls.c3
        if self.name in ("fullerene", "one-hole", "two-hole"):
            # vanishing at cone points / hole edges: m <= -|c3| + 1/2
            return lambda m, k: float(m) <= -abs(c3) + 0.5 + 1e-12
        if self.name == "dirac-oscillator":
            return lambda m, k: float(m) <= 0.5 + 1e-12
        if self.name == "pdm":
            return lambda m, k: float(m) - 1 > c3 > 0
        return None

    def weight_state(self, m) -> WeightState:
        m = as_channel(m)
        adm = self.admissible([m])
        if not adm:
            raise ValueError(f"channel m={m} not admissible for {self.name}")
        builder = _STATE_BUILDERS[self.name]
        return builder(self, m)

    def channel_operator(self, m):
        return build_h(self.family, m)


def catalog(name, **params) -> ModelSpec:
    """Build a catalog model by name.

    fullerene:        n_defects (default 12) or c3 directly; c3 = n/8
    one-hole:         k in (0,1) (default 0.99), c3 (default 3/2)
    two-hole:         k in (0,1) (default 0.9), c3 (default 3/2)
    dirac-oscillator: c3 < 0 for bound states (default -1), length
    pdm:              m is per-call; k (default 0.9), c3 (default 1/2)
    btz-like:         c3 (default 1); operator construction only
    """
    if name not in MODEL_NAMES:
        raise ValueError(f"unknown model {name!r}; known: {', '.join(MODEL_NAMES)}")
    return _BUILDERS[name](dict(params))


def _c3_from(params, default):
    if "c3" in params and "n_defects" in params:
        raise ValueError("give either c3 or n_defects, not both")
    if "n_defects" in params:
        n = params.pop("n_defects")
        if n <= 0 or int(n) != n:
            raise ValueError("n_defects must be a positive integer")
        return float(n) / 8.0
    return float(params.pop("c3", default))


def _check_k(params, default):
    k = float(params.pop("k", default))
    if not 0.0 < k < 1.0:
        raise ValueError(f"elliptic modulus k={k} must lie in (0, 1)")
    return k


def _reject_unknown(params, name):
    if params:
        raise ValueError(f"unknown parameters for {name}: {sorted(params)}")


def _fullerene(params):
    c3 = _c3_from(params, 1.5)
    M = float(params.pop("M", 0.0))
    _reject_unknown(params, "fullerene")
    x = xvar()
    profile = MetricProfile(const(1.0), SIN(x) ** 2, (0.0, np.pi),
                            label="sphere")
    cls = AlgebraClass(-1, c3, M)
    g3 = COS(x) / SIN(x) * c3
    fam = ChannelOperatorFamily(profile, cls, g3, "fullerene").solution_family
    return ModelSpec("fullerene", fam, (0.0, np.pi), "dirichlet-both",
                     {"c3": c3, "M": M}, profile)


def _one_hole(params):
    c3 = _c3_from(params, 1.5)
    k = _check_k(params, 0.99)
    _reject_unknown(params, "one-hole")
    K = ellipk(k)
    sn, cn, dn = fn_sn(k), fn_cn(k), fn_dn(k)
    g11 = (np.pi * k * k) ** 2 * (cn * sn) ** 2
    theta = np.pi * dn
    g22 = SIN(theta) ** 2
    profile = MetricProfile(g11, g22, (0.0, K), label="one-hole")
    cls = AlgebraClass(-1, c3, 0.0)
    g3 = COS(theta) / SIN(theta) * c3
    fam = ChannelOperatorFamily(profile, cls, g3, "one-hole").solution_family
    spec = ModelSpec("one-hole", fam, (0.0, K), "dirichlet-both",
                     {"c3": c3, "k": k, "K": K}, profile,
                     numeric_route="state-rayleigh")
    return spec


def _two_hole(params):
    c3 = _c3_from(params, 1.5)
    k = _check_k(params, 0.9)
    _reject_unknown(params, "two-hole")
    K = ellipk(k)
    sn, cn, dn = fn_sn(k), fn_cn(k), fn_dn(k)
    profile = MetricProfile((k * cn) ** 2, dn ** 2, (-K, K), label="two-hole")
    cls = AlgebraClass(-1, c3, 0.0)
    g3 = (sn / dn) * (k * c3)
    fam = ChannelOperatorFamily(profile, cls, g3, "two-hole").solution_family
    return ModelSpec("two-hole", fam, (-K, K), "dirichlet-both",
                     {"c3": c3, "k": k, "K": K}, profile,
                     numeric_route="state-rayleigh")


def _oscillator(params):
    c3 = float(params.pop("c3", -1.0))
    length = float(params.pop("length", 8.0 / np.sqrt(max(abs(c3), 0.25))))
    M = float(params.pop("M", 0.0))
    _reject_unknown(params, "dirac-oscillator")
    x = xvar()
    profile = MetricProfile(const(1.0), x * x, (0.0, length),
                            label="plane-polar")
    fam = SolutionFamily(AlgebraClass(0, c3, M), const(1.0), 1.0 / x, c3 * x,
                         (0.0, length), "dirac-oscillator")
    return ModelSpec("dirac-oscillator", fam, (0.0, length),
                     "dirichlet-both", {"c3": c3, "length": length, "M": M},
                     profile)


def _pdm(params):
    c3 = float(params.pop("c3", 0.5))
    k = _check_k(params, 0.9)
    _reject_unknown(params, "pdm")
    K = ellipk(k)
    sn, cn, dn = fn_sn(k), fn_cn(k), fn_dn(k)
    profile = MetricProfile(dn ** 2, sn ** 2, (0.0, 2 * K), label="pdm")
    cls = AlgebraClass(-1, c3, 0.0)
    g3 = (cn / sn) * c3
    fam = ChannelOperatorFamily(profile, cls, g3, "pdm").solution_family
    return ModelSpec("pdm", fam, (0.0, 2 * K), "dirichlet-both",
                     {"c3": c3, "k": k, "K": K}, profile,
                     admissible_kind="highest", numeric_route="state-rayleigh")


def _btz(params):
    c3 = float(params.pop("c3", 1.0))
    domain = params.pop("domain", (1.1, 5.0))
    _reject_unknown(params, "btz-like")
    x = xvar()
    N2 = x * x - 1.0
    profile = MetricProfile(1.0 / N2, N2, domain, epsilon=-1, label="btz-like")
    cls = AlgebraClass(1, c3, 0.0)
    g3 = x / SQRT(N2) * c3       # = c3 N'
    fam = ChannelOperatorFamily(profile, cls, g3, "btz-like").solution_family
    return ModelSpec("btz-like", fam, domain, "dirichlet-both",
                     {"c3": c3}, profile, eigensolve=False,
                     numeric_route="none")


_BUILDERS = {"fullerene": _fullerene, "one-hole": _one_hole,
             "two-hole": _two_hole, "dirac-oscillator": _oscillator,
             "pdm": _pdm, "btz-like": _btz}


# -- closed-form weight states ------------------------------------------------

def _fullerene_state(spec, m):
    c3 = spec.cls.c3
    mf = float(m)
    x = xvar()
    w = TAN(x * 0.5)
    sin = SIN(x)
    u = POW(sin, -mf + 0.5) * POW(w, -c3 - 0.5)
    v = POW(sin, -mf + 0.5) * POW(w, -c3 + 0.5)
    st = make_weight_state(spec.family, m, "lowest", (u, v), "fullerene")
    st.gauge_powers = {"w": "tan(x1/2)", "k_u": 1 - 2 * c3, "k_d": -2 * c3 - 1}
    return st


def _one_hole_state(spec, m):
    c3, k = spec.cls.c3, spec.params["k"]
    mf = float(m)
    sn, cn, dn = fn_sn(k), fn_cn(k), fn_dn(k)
    theta = np.pi * dn
    wI = TAN(theta * 0.5)
    pref = SQRT(cn * sn) * POW(SIN(theta), -mf + 0.5)
    u = pref * POW(wI, -c3 + 0.5)
    v = pref * POW(wI, -c3 - 0.5)
    st = make_weight_state(spec.family, m, "lowest", (u, v), "one-hole")
    st.gauge_powers = {"w": "tan(pi dn/2)", "k_u": 1 - 2 * c3,
                       "k_d": -2 * c3 - 1, "branch": "dn = 1/2"}
    return st


def _two_hole_state(spec, m):
    c3, k = spec.cls.c3, spec.params["k"]
    mf = float(m)
    sn, cn, dn = fn_sn(k), fn_cn(k), fn_dn(k)
    wII = (1.0 - k * sn) / dn
    pref = SQRT(cn) * POW(dn, -mf + 0.5)
    u = pref * POW(wII, -c3 + 0.5)
    v = pref * POW(wII, -c3 - 0.5)
    st = make_weight_state(spec.family, m, "lowest", (u, v), "two-hole")
    st.gauge_powers = {"w": "(1 - k sn)/dn", "k_u": 1 - 2 * c3,
                       "k_d": -2 * c3 - 1, "branch": "sn = 0"}
    return st


def _oscillator_state(spec, m):
    c3 = spec.cls.c3
    mf = float(m)
    x = xvar()
    gauss = EXP(x * x * (0.5 * c3))
    u = gauss * POW(x, -mf)
    v = gauss * POW(x, -mf + 1.0)
    return make_weight_state(spec.family, m, "lowest", (u, v),
                             "dirac-oscillator")


def _pdm_state(spec, m):
    c3, k = spec.cls.c3, spec.params["k"]
    mf = float(m)
    sn, cn, dn = fn_sn(k), fn_cn(k), fn_dn(k)
    q = (1.0 - cn) / (1.0 + cn)
    pref = SQRT(dn) * POW(sn, mf + 0.5) * POW(q, c3 / 2)
    u = pref * POW(q, 0.25)
    v = pref * POW(q, -0.25)
    return make_weight_state(spec.family, m, "highest", (u, v), "pdm")


_STATE_BUILDERS = {"fullerene": _fullerene_state, "one-hole": _one_hole_state,
                   "two-hole": _two_hole_state,
                   "dirac-oscillator": _oscillator_state, "pdm": _pdm_state}


def btz_check(domain=(1.1, 5.0), c3=1.0, n=256):
    """N^2 = -1 + x1^2 with diag(N^-2, -N^2) solves the compatibility
    equation for c1 = +1, and the built operator matches the printed
    coefficients; returns the combined validation report."""
    spec = catalog("btz-like", c3=c3, domain=domain)
    rep = validate_metric(spec.profile, spec.cls, n=n)
    xs = np.linspace(domain[0] + 0.01, domain[1] - 0.01, n)
    # printed form: i s1 (N d + N'/2) + s2 (m/N + c3 N')
    N = np.sqrt(xs ** 2 - 1.0)
    dN = xs / N
    h = spec.channel_operator(Fraction(1))
    A0, A1 = h.coeffs[0].eval(xs), h.coeffs[1].eval(xs)
    worst = 0.0
    worst = max(worst, float(np.max(np.abs(A1[0, 1] - 1j * N))))
    ref01 = 1j * dN / 2 - 1j * (1.0 / N + c3 * dN)
    worst = max(worst, float(np.max(np.abs(A0[0, 1] - ref01))))
    ok = rep.passed and worst <= 1e-10
    return ValidationReport(max(rep.residual, worst), ok,
                            "btz: compatibility + coefficient match",
                            rep.tolerance)
