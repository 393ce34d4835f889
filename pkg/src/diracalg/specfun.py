"""Jacobi elliptic functions sn, cn, dn and the complete elliptic integral K.

Evaluation uses the arithmetic-geometric mean (descending Landen chain),
which stays uniformly accurate over the whole period; series would lose
accuracy near the quarter period where several models place boundaries.

Convention: the modulus argument is k itself, as in sn(x, k), and K(k) =
integral_0^{pi/2} (1 - k^2 sin^2 t)^(-1/2) dt.  (Routines that want the
parameter m = k^2, e.g. scipy's, need the square; conversion happens only
at this module's boundary.)
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .funcs import Fn

__all__ = [
    "EllipticDomainError", "EllipticDivergenceError", "EllipticArgs",
    "ellipk", "jacobi", "jacobi_sn_cn_dn", "fn_sn", "fn_cn", "fn_dn",
]

_EPS = np.finfo(float).eps


class EllipticDomainError(ValueError):
    """Modulus outside [0, 1]."""


class EllipticDivergenceError(ValueError):
    """K(k) requested at k = 1 where the quarter period diverges."""


@dataclass(frozen=True)
class EllipticArgs:
    x: float
    k: float

    def __post_init__(self):
        if not 0.0 <= self.k <= 1.0:
            raise EllipticDomainError(f"modulus k={self.k} outside [0, 1]")


def _check_modulus(k, allow_one=True):
    k = float(k)
    if k < 0.0 or k > 1.0:
        raise EllipticDomainError(f"modulus k={k} outside [0, 1]")
    if k == 1.0 and not allow_one:
        raise EllipticDivergenceError("K(k) diverges as k -> 1")
    return k


def _agm(a, b):
    while abs(a - b) > 4 * _EPS * abs(a):
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    return 0.5 * (a + b)


def ellipk(k):
    """Complete elliptic integral of the first kind, K(k), modulus convention."""
    k = _check_modulus(k, allow_one=False)
    return np.pi / (2.0 * _agm(1.0, np.sqrt((1.0 - k) * (1.0 + k))))


def jacobi_sn_cn_dn(x, k):
    """Jacobi sn, cn, dn at real x (scalar or array) and modulus k in [0, 1]."""
    k = _check_modulus(k)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)

    if k == 0.0:
        sn, cn, dn = np.sin(x), np.cos(x), np.ones_like(x)
    elif k == 1.0:
        sn, cn = np.tanh(x), 1.0 / np.cosh(x)
        dn = cn.copy()
    else:
        sn, cn, dn = _jacobi_agm(x, k)
    if scalar:
        return float(sn[0]), float(cn[0]), float(dn[0])
    return sn, cn, dn


def _jacobi_agm(x, k):
    """Descending Landen chain with backward recurrence; uniformly accurate
    over the period, including the quarter-period neighborhood."""
    kp = np.sqrt((1.0 - k) * (1.0 + k))
    period = 2.0 * np.pi / _agm(1.0, kp)     # 4K
    xr = x - period * np.round(x / period)

    emc = kp * kp
    a = 1.0
    em, en = [], []
    c = 0.5 * (a + np.sqrt(emc))
    for _ in range(24):
        ec = np.sqrt(emc)
        em.append(a)
        en.append(ec)
        c = 0.5 * (a + ec)
        if abs(a - ec) <= 4 * _EPS * a:
            break
        emc = a * ec
        a = c

    u = c * xr
    sn = np.sin(u)
    cn = np.cos(u)
    dn = np.ones_like(u)
    nz = sn != 0.0
    av = np.zeros_like(u)
    cv = np.zeros_like(u)
    av[nz] = cn[nz] / sn[nz]
    cv[nz] = av[nz] * c
    for b_i, e_i in zip(reversed(em), reversed(en)):
        av[nz] = cv[nz] * av[nz]
        cv[nz] = cv[nz] * dn[nz]
        dn[nz] = (e_i + av[nz]) / (b_i + av[nz])
        av[nz] = cv[nz] / b_i
    amp = 1.0 / np.sqrt(cv[nz] ** 2 + 1.0)
    sn_out = sn.copy()
    sn_out[nz] = np.where(sn[nz] < 0, -amp, amp)
    cn_out = cn.copy()
    cn_out[nz] = cv[nz] * sn_out[nz]
    return sn_out, cn_out, dn


def jacobi(args: EllipticArgs):
    """Spec-shaped entry point: jacobi(EllipticArgs(x, k)) -> (sn, cn, dn)."""
    return jacobi_sn_cn_dn(args.x, args.k)


# -- Fn wrappers with the standard derivative identities --------------------

def fn_sn(k) -> Fn:
    k = _check_modulus(k)
    return Fn(lambda x: jacobi_sn_cn_dn(x, k)[0],
              lambda: fn_cn(k) * fn_dn(k))


def fn_cn(k) -> Fn:
    k = _check_modulus(k)
    return Fn(lambda x: jacobi_sn_cn_dn(x, k)[1],
              lambda: -(fn_sn(k) * fn_dn(k)))


def fn_dn(k) -> Fn:
    k = _check_modulus(k)
    return Fn(lambda x: jacobi_sn_cn_dn(x, k)[2],
              lambda: (-k * k) * fn_sn(k) * fn_cn(k))
