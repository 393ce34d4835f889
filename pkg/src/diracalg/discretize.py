"""Grids, banded Hermitian assembly, eigensolver and convergence machinery.

First-derivative terms use centered antisymmetric stencils in the
symmetrized form (f D + D f)/2, so formally self-adjoint operators assemble
to exactly Hermitian matrices; second-order terms use the conservative form
-D(f D) with midpoint coefficients.  Cell-centered grids keep singular
endpoints off-grid and realize vanishing boundary conditions through zero
ghost values.

Naive centered differencing of a first-order operator supports a
high-frequency doubler branch.  For massless channel Hamiltonians the
assembled matrix commutes exactly with T = sigma2 x (-1)^j, so each
physical level appears as a pair of T-parity eigenstates straddling it; the
physical value is recovered as the pair mean and the smooth member of the
pair is kept while its sawtooth partner is flagged spurious (oscillation
sentinel) and excluded from spectrum reports.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eig_banded

from .funcs import zero2
from .chanop import ChannelOperator

__all__ = [
    "Grid", "DiscreteSpinor", "GridClashError", "assemble", "BandedOperator",
    "eigen", "physical_levels", "convergence_study", "rayleigh_quotient",
    "total_variation_ratio", "apply_operator",
]

BCS = ("dirichlet-both", "regular-left-dirichlet-right",
       "dirichlet-left-regular-right")


@dataclass(frozen=True)
class Grid:
    interval: tuple
    n: int
    offset: str = "cell-centered"
    bc: str = "dirichlet-both"

    def __post_init__(self):
        if self.n < 16:
            raise ValueError("grid needs n >= 16")
        if self.offset not in ("cell-centered", "node-centered"):
            raise ValueError(f"unknown offset {self.offset!r}")
        if self.bc not in BCS:
            raise ValueError(f"unknown bc {self.bc!r}")

    @property
    def h(self):
        a, b = self.interval
        if self.offset == "cell-centered":
            return (b - a) / self.n
        return (b - a) / (self.n + 1)

    def points(self):
        a, b = self.interval
        if self.offset == "cell-centered":
            return a + (np.arange(self.n) + 0.5) * self.h
        return a + (np.arange(1, self.n + 1)) * self.h

    def refined(self, factor=2):
        return Grid(self.interval, self.n * factor, self.offset, self.bc)

    def symmetric_about(self, center, tol=1e-12):
        x = self.points()
        return np.max(np.abs((x + x[::-1]) / 2 - center)) < tol


@dataclass
class DiscreteSpinor:
    values: np.ndarray          # shape (n, 2), complex
    grid: Grid

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.n, 2):
            raise ValueError("DiscreteSpinor values must have shape (n, 2)")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite spinor values")

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.h))

    @classmethod
    def from_fn(cls, spinor, grid):
        x = grid.points()
        u = np.asarray(spinor[0](x), dtype=complex)
        v = np.asarray(spinor[1](x), dtype=complex)
        return cls(np.stack([u, v], axis=1), grid)


class GridClashError(ValueError):
    """Operator coefficient not finite at a grid point."""


def _coeff_arrays(op: ChannelOperator, x):
    mats = []
    for k in range(3):
        A = op.coeffs[k] if k < len(op.coeffs) else zero2()
        mats.append(A.eval(x))
    if not all(np.all(np.isfinite(m)) for m in mats):
        raise GridClashError(
            "operator coefficient evaluates non-finite on the grid; "
            "use a cell-centered offset so singular endpoints stay off-grid")
    return mats


@dataclass
class BandedOperator:
    """Hermitian banded matrix in interleaved (point, spinor) ordering."""
    upper: np.ndarray      # shape (bw+1, 2n), scipy eig_banded upper layout
    grid: Grid
    hermitian_defect: float = 0.0

    @property
    def bandwidth(self):
        return self.upper.shape[0] - 1

    def to_dense(self):
        N = self.upper.shape[1]
        bw = self.bandwidth
        M = np.zeros((N, N), dtype=complex)
        for d in range(bw + 1):
            row = self.upper[bw - d]
            idx = np.arange(d, N)
            M[idx - d, idx] = row[d:]
        return M + np.conj(np.triu(M, 1)).T

    def matvec(self, vec):
        bw = self.bandwidth
        out = self.upper[bw] * vec
        for d in range(1, bw + 1):
            row = self.upper[bw - d]
            out[:-d] += row[d:] * vec[d:]
            out[d:] += np.conj(row[d:]) * vec[:-d]
        return out


def assemble(op: ChannelOperator, grid: Grid) -> BandedOperator:
    """Hermitian-symmetrized banded matrix of a channel operator (order <= 2).

    The raw stencil matrix of a formally self-adjoint operator is Hermitian
    already; assembly stores (M + M^H)/2 and reports the defect |M - M^H|.
    """
    if op.order > 2:
        raise ValueError("assemble supports operator order <= 2")
    x = grid.points()
    h = grid.h
    n = grid.n
    A0, A1, A2 = _coeff_arrays(op, x)

    N = 2 * n
    bw = 3
    direct = np.zeros((bw + 1, N), dtype=complex)   # entries with col >= row
    mirror = np.zeros((bw + 1, N), dtype=complex)   # conj of entries below

    def add_entry(i, j, val):
        if j >= i:
            d = j - i
            if d > bw:
                raise ValueError("bandwidth overflow")
            direct[bw - d, j] += val
        else:
            d = i - j
            if d > bw:
                raise ValueError("bandwidth overflow")
            mirror[bw - d, i] += np.conj(val)

    if op.order >= 2:
        xm = np.concatenate(([x[0] - h / 2], x + h / 2))
        fm = -op.coeffs[2].eval(xm)      # conservative coefficient at midpoints
        if np.max(np.abs(fm[0, 1])) > 0 or np.max(np.abs(fm[1, 0])) > 0:
            raise ValueError("off-diagonal second-order coefficients are not "
                             "supported by assemble")
        for s in range(2):
            f = fm[s, s]
            if np.max(np.abs(f)) == 0:
                continue
            for j in range(n):
                add_entry(2 * j + s, 2 * j + s, (f[j] + f[j + 1]) / h ** 2)
                if j + 1 < n:
                    add_entry(2 * j + s, 2 * (j + 1) + s, -f[j + 1] / h ** 2)
                    add_entry(2 * (j + 1) + s, 2 * j + s, -f[j + 1] / h ** 2)
        # first-order remainder A1 - A2' enters the symmetrized stencil below
        dA2 = op.coeffs[2].deriv.eval(x)
        A1 = A1 - dA2

    # first-order part, symmetrized (f D + D f)/2 per spin entry
    for s1 in range(2):
        for s2 in range(2):
            f = A1[s1, s2]
            if np.max(np.abs(f)) == 0:
                continue
            for j in range(n):
                if j + 1 < n:
                    val = (f[j] + f[j + 1]) / (4 * h)
                    add_entry(2 * j + s1, 2 * (j + 1) + s2, val)
                    add_entry(2 * (j + 1) + s1, 2 * j + s2, -(f[j + 1] + f[j]) / (4 * h))

    # zero-order part, minus the A1'/2 the symmetrized stencil already carries
    dA1 = (op.coeffs[1].deriv.eval(x) if op.order >= 1 else np.zeros_like(A0))
    if op.order >= 2:
        dA1 = dA1 - op.coeffs[2].deriv.deriv.eval(x)
    A0eff = A0 - 0.5 * dA1
    for s1 in range(2):
        for s2 in range(2):
            f = A0eff[s1, s2]
            if np.max(np.abs(f)) == 0:
                continue
            for j in range(n):
                add_entry(2 * j + s1, 2 * j + s2, f[j])

    # diagonal entries never receive mirror contributions; split them evenly
    mirror[bw] = np.conj(direct[bw])
    defect = float(np.max(np.abs(direct - mirror)))
    up = 0.5 * (direct + mirror)
    return BandedOperator(up, grid, defect)


def apply_operator(op: ChannelOperator, psi: DiscreteSpinor,
                   stencil_order=2) -> DiscreteSpinor:
    """Matrix-free application with centered stencils of order 2, 4 or 6."""
    x = psi.grid.points()
    h = psi.grid.h
    A0, A1, A2 = _coeff_arrays(op, x)
    vals = psi.values
    out = np.einsum("rsn,ns->nr", A0, vals)
    d1 = _dstencil(vals, h, stencil_order)
    out += np.einsum("rsn,ns->nr", A1, d1)
    if np.max(np.abs(A2)) > 0:
        d2 = _dstencil(d1, h, stencil_order)
        out += np.einsum("rsn,ns->nr", A2, d2)
    return DiscreteSpinor(out, psi.grid)


_STENCILS = {2: ((0.5, 1),), 4: ((2 / 3, 1), (-1 / 12, 2)),
             6: ((3 / 4, 1), (-3 / 20, 2), (1 / 60, 3))}


def _dstencil(vals, h, order):
    out = np.zeros_like(vals)
    for c, k in _STENCILS[order]:
        out[:-k] += c * vals[k:] / h
        out[k:] -= c * vals[:-k] / h
    return out


# -- eigensolver --------------------------------------------------------------

@dataclass
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray      # columns, interleaved ordering
    residuals: np.ndarray


def eigen(banded: BandedOperator, count=None, which="smallest-magnitude",
          window=None, residual_tol=1e-9) -> EigenResult:
    """Eigenpairs of the assembled Hermitian matrix.

    which = 'smallest-magnitude' returns `count` pairs closest to zero;
    which = 'window' returns all pairs with value in `window` = (lo, hi).
    """
    if banded.hermitian_defect > 1e-10:
        raise ValueError(f"matrix not Hermitian (defect {banded.hermitian_defect:.2e})")
    if which == "window":
        lo, hi = window
        w, v = eig_banded(banded.upper, lower=False, select="v",
                          select_range=(lo, hi))
    elif which == "smallest-magnitude":
        if count is None:
            raise ValueError("count required for smallest-magnitude")
        lim = _grow_window(banded, count)
        w, v = eig_banded(banded.upper, lower=False, select="v",
                          select_range=(-lim, lim))
        idx = np.argsort(np.abs(w))[:count]
        idx = idx[np.argsort(w[idx])]
        w, v = w[idx], v[:, idx]
    else:
        raise ValueError(f"unknown selection {which!r}")
    res = np.array([np.linalg.norm(banded.matvec(v[:, i]) - w[i] * v[:, i])
                    for i in range(len(w))])
    if len(w) and np.max(res) > residual_tol * 10:
        raise RuntimeError(
            f"eigensolver residual {np.max(res):.2e} above tolerance")
    return EigenResult(w, v, res)


def _grow_window(banded, count):
    lim = 1.0
    for _ in range(40):
        w = eig_banded(banded.upper, lower=False, select="v",
                       select_range=(-lim, lim), eigvals_only=True)
        if len(w) >= count:
            return lim
        lim *= 2.0
    raise RuntimeError("could not bracket the requested eigenvalue count")


def total_variation_ratio(vec, n):
    """Discrete total variation of an interleaved eigenvector relative to its
    2x-coarsened restriction; sawtooth doubler modes score far above 10."""
    psi = vec.reshape(n, 2)
    tv_f = np.sum(np.abs(np.diff(psi, axis=0)))
    coarse = psi[::2]
    tv_c = np.sum(np.abs(np.diff(coarse, axis=0)))
    return float(tv_f / max(tv_c, 1e-300))


@dataclass
class PhysicalLevel:
    energy: float
    pair: tuple
    vector: np.ndarray
    tv_ratio: float
    spurious_partner_tv: float


def _t_apply(vec, n):
    """T = sigma2 x (-1)^j in the interleaved complex representation."""
    psi = vec.reshape(n, 2)
    sign = ((-1.0) ** np.arange(n))[:, None]
    out = np.empty_like(psi)
    out[:, 0] = -1j * psi[:, 1] * sign[:, 0]
    out[:, 1] = 1j * psi[:, 0] * sign[:, 0]
    return out.reshape(-1)


def physical_levels(banded: BandedOperator, window, tv_bound=10.0):
    """Pair T-parity eigenstates of a massless first-order operator and
    return the physical levels (pair means) with smooth representatives."""
    res = eigen(banded, which="window", window=window)
    n = banded.grid.n
    if len(res.values) == 0:
        return []
    parities = []
    for i in range(len(res.values)):
        v = res.vectors[:, i]
        tv = np.vdot(v, _t_apply(v, n))
        parities.append(float(np.real(tv)))
    order = np.argsort(res.values)
    vals = res.values[order]
    vecs = res.vectors[:, order]
    pars = np.array(parities)[order]
    used = np.zeros(len(vals), bool)
    levels = []
    for i in range(len(vals)):
        if used[i]:
            continue
        # partner: nearest unused eigenvalue with opposite T-parity
        best, bestgap = None, np.inf
        for j in range(len(vals)):
            if j == i or used[j] or pars[i] * pars[j] > 0:
                continue
            gap = abs(vals[j] - vals[i])
            if gap < bestgap:
                best, bestgap = j, gap
        if best is None:
            used[i] = True
            levels.append(PhysicalLevel(vals[i], (vals[i],), vecs[:, i],
                                        total_variation_ratio(vecs[:, i], n),
                                        np.nan))
            continue
        used[i] = used[best] = True
        pair = (vals[i], vals[best])
        # smooth representative: the min-TV combination of the two states
        v1, v2 = vecs[:, i], vecs[:, best]
        cands = [(v1 + v2) / np.sqrt(2), (v1 - v2) / np.sqrt(2),
                 (v1 + 1j * v2) / np.sqrt(2), (v1 - 1j * v2) / np.sqrt(2)]
        tvs = [total_variation_ratio(c, n) for c in cands]
        kmin = int(np.argmin(tvs))
        levels.append(PhysicalLevel(float(np.mean(pair)), pair, cands[kmin],
                                    tvs[kmin], max(tvs)))
    levels.sort(key=lambda L: L.energy)
    # leftover singles duplicating an already-kept level are the exactly
    # degenerate doubler partner; keep one representative
    out = []
    for L in levels:
        if len(L.pair) == 1 and any(
                abs(K.energy - L.energy) <= 1e-6 * (1 + abs(L.energy))
                for K in out):
            continue
        out.append(L)
    return [L for L in out if L.tv_ratio <= tv_bound]


# -- convergence --------------------------------------------------------------

@dataclass
class ConvergenceRow:
    target: float
    values: list
    extrapolated: float
    observed_order: float
    suspicious: bool


def convergence_study(level_fn, grids, targets) -> list:
    """Richardson extrapolation assuming O(h^2) over >= 3 grids with ratio 2.

    `level_fn(grid, target)` returns the level estimate nearest `target` on
    that grid.  Rows flag eigenvalues whose observed order strays from 2 by
    more than 0.5 (spurious-mode suspicion).
    """
    if len(grids) < 3:
        raise ValueError("convergence_study needs at least 3 grids")
    rows = []
    for t in targets:
        vals = [level_fn(g, t) for g in grids]
        e1, e2, e3 = vals[-3], vals[-2], vals[-1]
        extrap = (4 * e3 - e2) / 3.0
        d12, d23 = abs(e1 - e2), abs(e2 - e3)
        if d23 < 1e-14:
            order = 2.0 if d12 < 1e-12 else np.inf
        else:
            order = float(np.log2(d12 / d23))
        rows.append(ConvergenceRow(t, vals, float(extrap), order,
                                   bool(abs(order - 2.0) > 0.5 and d23 > 1e-10)))
    return rows


def rayleigh_quotient(op: ChannelOperator, psi: DiscreteSpinor,
                      window_frac=0.1, stencil_order=2) -> float:
    """Discrete energy functional <psi, H psi>/<psi, psi> over an interior
    window (fixed margins keep boundary layers of singular endpoints out)."""
    n = psi.grid.n
    j0, j1 = int(window_frac * n), int((1 - window_frac) * n)
    Hpsi = apply_operator(op, psi, stencil_order).values
    w = slice(j0, j1)
    num = complex(np.sum(np.conj(psi.values[w]) * Hpsi[w]))
    den = float(np.sum(np.abs(psi.values[w]) ** 2))
    return float(num.real / den)
