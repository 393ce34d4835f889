"""Algebraic spectra: weight states, multiplets, and the ladder recursion.

Weight states are joint eigenstates of the channel Hamiltonian and the
angular label m, annihilated by the lowering (raising) ladder operator.
Multiplets are generated by exact symbolic application of the raising
operator to the closed-form seed; each member is renormalized on a grid and
the chain terminates when the next member is numerically null.

The quantization analysis runs on an exact rational coefficient lattice:
one raising step maps the monomial (r, s) in (g2-power, w-power) to
-(n + r - s) (r-1, s-1) + (n + r) (r+1, s) while the channel label n
increments.  Finite multiplets are exactly the seeds whose lattice empties.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .funcs import Fn, as_fn, const
from .chanop import (AlgebraClass, SolutionFamily, ChannelOperator,
                     as_channel, build_h, build_ladder,
                     weight_energy_squared)
from .discretize import Grid, DiscreteSpinor, rayleigh_quotient, apply_operator

__all__ = [
    "InadmissibleWeightError", "weight_energy", "admissible_weights",
    "WeightState", "Multiplet", "climb", "ladder_recursion",
    "representation_dimension", "LatticeState",
]


class InadmissibleWeightError(ValueError):
    """Weight state would have complex energy or violate boundary conditions."""


def weight_energy(cls: AlgebraClass, m, kind: str) -> float:
    """Nonnegative energy of the lowest/highest weight state in channel m.

    The squared energy follows from the square of the Hamiltonian expressed
    in ladder products; a negative square is rejected as inadmissible.
    """
    if kind not in ("lowest", "highest"):
        raise ValueError("kind must be 'lowest' or 'highest'")
    e2 = weight_energy_squared(cls, m, kind)
    if e2 < -1e-12:
        raise InadmissibleWeightError(
            f"(m={m}, {kind}) has E^2 = {e2:.6g} < 0 for c1={cls.c1}, "
            f"c3={cls.c3}")
    return float(np.sqrt(max(e2, 0.0)))


def _pairing_ok(m: Fraction, c3: float) -> bool:
    """so(3) quantization: m integer <-> c3 half-odd-integer and vice versa;
    equivalently m + c3 is a half-odd integer."""
    t = 2 * (float(m) + c3)
    return abs(t - round(t)) < 1e-9 and round(t) % 2 != 0


@dataclass
class AdmissibleWeight:
    m: Fraction
    kind: str
    energy: float
    note: str = ""


def admissible_weights(cls: AlgebraClass, m_values, kind="lowest",
                       boundary_rule=None):
    """Filter channel labels by reality of the weight energy, the class
    constraints, and an optional model boundary rule.

    c1 = -1 needs |m -/+ 1/2| >= c3 plus the integer/half-integer pairing
    with c3 (finite unitary multiplets); c1 = +1 needs |m -/+ 1/2| <= c3;
    c1 = 0 bound seeds need c3 < 0 and half-odd m <= 1/2 (lowest kind).
    """
    out = []
    s = -0.5 if kind == "lowest" else 0.5
    for m in m_values:
        m = as_channel(m)
        mf = float(m)
        e2 = weight_energy_squared(cls, m, kind)
        if e2 < -1e-12:
            continue
        note = ""
        if cls.c1 == -1:
            if not _pairing_ok(m, cls.c3):
                continue
            note = "pairing: m integer <-> c3 half-integer" \
                if m.denominator == 1 else "pairing: m half-integer <-> c3 integer"
        elif cls.c1 == 0:
            if cls.c3 >= 0:
                continue
            if m.denominator != 2:
                continue
            if kind == "lowest" and mf > 0.5:
                continue
            note = "oscillator: c3 < 0, half-odd m"
        if boundary_rule is not None and not boundary_rule(m, kind):
            continue
        out.append(AdmissibleWeight(m, kind, float(np.sqrt(max(e2, 0.0))), note))
    return out


@dataclass
class WeightState:
    """Closed-form weight state: Fn spinor plus representation metadata."""
    m: Fraction
    kind: str
    spinor: tuple                 # (Fn, Fn)
    energy: float
    family: SolutionFamily
    gauge_powers: dict = field(default_factory=dict)
    label: str = ""

    def sample(self, grid: Grid) -> DiscreteSpinor:
        d = DiscreteSpinor.from_fn(self.spinor, grid)
        nrm = d.norm()
        if nrm == 0:
            raise InadmissibleWeightError("weight state vanishes identically")
        return DiscreteSpinor(d.values / nrm, grid)

    def annihilation_residual(self, grid_n=2048):
        """Relative grid norm of the lowering/raising ladder applied to the
        state; the defining property of a weight vector."""
        fam = self.family
        if self.kind == "lowest":
            op = build_ladder(fam, self.m - 1, "-")
        else:
            op = build_ladder(fam, self.m, "+")
        grid = Grid(fam.domain, grid_n)
        psi = self.sample(grid)
        out = DiscreteSpinor.from_fn(op.apply_fn(self.spinor), grid)
        # relative to the scale of the two ladder pieces separately
        scale = _ladder_piece_scale(op, self.spinor, grid)
        return out.norm() / max(psi.norm() * scale, 1e-300)

    def hamiltonian_residual(self, grid_n=4096, window_frac=0.1):
        """|Rayleigh(h_m, state) - E| plus the windowed eigen-residual."""
        h = build_h(self.family, self.m)
        grid = Grid(self.family.domain, grid_n)
        psi = self.sample(grid)
        e = rayleigh_quotient(h, psi, window_frac)
        return abs(e - self.energy)


def _ladder_piece_scale(op, spinor, grid):
    # typical magnitude of the separate terms of the ladder action, so the
    # annihilation residual measures cancellation quality
    x = grid.points()
    u = as_fn(spinor[0])
    du = u.deriv(x)
    vals = np.abs(np.asarray(du, dtype=complex))
    return float(np.sqrt(np.trapezoid(vals ** 2, x) / (x[-1] - x[0]))) + 1.0


def make_weight_state(fam: SolutionFamily, m, kind, kernel_pair,
                      label="", grid_n=4096) -> WeightState:
    """Build the energy eigenstate in the 2-dim ladder kernel.

    `kernel_pair` = (u, v): Fn components such that (u, 0) and (0, v) span
    the kernel of the annihilating ladder operator in channel m.  The
    Hamiltonian acts on that span as an off-diagonal 2x2 matrix; its
    eigenvector with nonnegative eigenvalue fixes the physical state.
    """
    m = as_channel(m)
    u, v = as_fn(kernel_pair[0]), as_fn(kernel_pair[1])
    h = build_h(fam, m)
    a, b = fam.domain
    xs = np.linspace(a + 0.3 * (b - a), b - 0.3 * (b - a), 7)
    hu = h.apply_fn((u, const(0.0)))   # = (0, c v)
    hv = h.apply_fn((const(0.0), v))   # = (d u, 0)
    cvals = np.asarray(hu[1](xs), dtype=complex) / np.asarray(v(xs), dtype=complex)
    dvals = np.asarray(hv[0](xs), dtype=complex) / np.asarray(u(xs), dtype=complex)
    cc, dd = np.mean(cvals), np.mean(dvals)
    if np.max(np.abs(cvals - cc)) > 1e-8 * (1 + abs(cc)) or \
       np.max(np.abs(dvals - dd)) > 1e-8 * (1 + abs(dd)):
        raise InadmissibleWeightError(
            "kernel pair does not reduce the Hamiltonian to constants")
    e2 = (cc * dd).real
    expected = weight_energy_squared(fam.cls, m, kind)
    if abs(e2 - expected) > 1e-8 * (1 + abs(expected)):
        raise InadmissibleWeightError(
            f"kernel-reduced E^2 = {e2:.9g} disagrees with the algebraic "
            f"value {expected:.9g}")
    if e2 < -1e-12:
        raise InadmissibleWeightError("complex energy")
    E = float(np.sqrt(max(e2, 0.0)))
    if abs(dd) < 1e-13:       # h(0, v) = 0: the zero mode is (0, v)
        alpha, beta = 0.0, 1.0
    elif abs(cc) < 1e-13:     # h(u, 0) = 0: the zero mode is (u, 0)
        alpha, beta = 1.0, 0.0
    else:
        alpha, beta = complex(dd), complex(E)   # solves d*beta=E*alpha, c*alpha=E*beta
        nrm = np.hypot(abs(alpha), abs(beta))
        alpha, beta = alpha / nrm, beta / nrm
    spinor = (u * alpha, v * beta)
    return WeightState(m, kind, spinor, E, fam, label=label)


def boundary_vanishing(state: WeightState, sides=("left", "right"),
                       tol=1e-6, grid_n=4096) -> bool:
    """Check the state's |psi| at the first/last cells is a vanishing
    fraction of its peak (cell-centered endpoint behavior)."""
    grid = Grid(state.family.domain, grid_n)
    psi = state.sample(grid)
    mag = np.sqrt(np.sum(np.abs(psi.values) ** 2, axis=1))
    peak = float(np.max(mag))
    checks = []
    if "left" in sides:
        checks.append(mag[0])
    if "right" in sides:
        checks.append(mag[-1])
    return all(c <= np.sqrt(tol) * peak for c in checks)


@dataclass
class Multiplet:
    base: WeightState
    members: list                 # list of (m, DiscreteSpinor)
    dimension: object             # int or float('inf') marker
    energy: float
    lowest_label: Fraction = None
    highest_label: Fraction = None


def _windowed_norm(d: DiscreteSpinor, frac=0.1):
    n = d.grid.n
    w = slice(int(frac * n), int((1 - frac) * n))
    return float(np.sqrt(np.sum(np.abs(d.values[w]) ** 2) * d.grid.h))


def climb(fam: SolutionFamily, base: WeightState, steps: int,
          grid_n=4096, null_tol=1e-8, resid_tol=1e-6,
          direction="+") -> Multiplet:
    """Repeated exact ladder action on the seed, renormalized per step.

    Terminates early when the next member is numerically null (relative
    interior grid norm <= null_tol; the window keeps endpoint cancellation
    noise of deep ladder chains out of the verdict).  Each member's energy
    is re-measured against the discretized channel Hamiltonian.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    grid = Grid(fam.domain, grid_n)
    m = base.m
    spinor = base.spinor
    disc = base.sample(grid)
    members = [(m, disc)]
    scale = 1.0 / _windowed_norm(DiscreteSpinor.from_fn(spinor, grid))
    spinor = (spinor[0] * scale, spinor[1] * scale)
    for _ in range(steps):
        if direction == "+":
            op = build_ladder(fam, m, "+")
            m_next = m + 1
        else:
            m_next = m - 1
            op = build_ladder(fam, m_next, "-")
        nxt = op.apply_fn(spinor)
        dn = DiscreteSpinor.from_fn(nxt, grid)
        wn = _windowed_norm(dn)
        if wn <= null_tol:
            break
        m = m_next
        scale = 1.0 / wn
        spinor = (nxt[0] * scale, nxt[1] * scale)
        disc = DiscreteSpinor(dn.values / dn.norm(), grid)
        h = build_h(fam, m)
        e = rayleigh_quotient(h, disc)
        if abs(abs(e) - abs(base.energy)) > max(resid_tol, 1e-6 * (1 + abs(e))) * 50:
            raise InadmissibleWeightError(
                f"climbed member at channel {m} lost the multiplet energy: "
                f"{e:.8f} vs {base.energy:.8f}")
        members.append((m, disc))
    dim = len(members) if len(members) <= steps else float("inf")
    lo = min(mm for mm, _ in members)
    hi = max(mm for mm, _ in members)
    return Multiplet(base, members, dim, base.energy, lo, hi)


# -- exact rational recursion -------------------------------------------------

@dataclass
class LatticeState:
    """Sparse rational coefficient lattice over (g2-power, w-power)."""
    coeffs: dict                  # (Fraction, Fraction) -> Fraction
    channel: Fraction

    def is_zero(self):
        return all(c == 0 for c in self.coeffs.values())

    def cleaned(self):
        return {k: v for k, v in self.coeffs.items() if v != 0}


def ladder_recursion(n, r, s, k: int) -> list:
    """k exact raising steps on the monomial g2^r w^s in channel n.

    Returns the list of LatticeState after 0..k applications.  One step maps
    (r', s') to -(n' + r' - s') (r'-1, s'-1) + (n' + r') (r'+1, s') and then
    increments the channel.
    """
    n, r, s = Fraction(n), Fraction(r), Fraction(s)
    state = LatticeState({(r, s): Fraction(1)}, n)
    history = [state]
    for _ in range(k):
        new = {}
        ch = state.channel
        for (rr, ss), cf in state.coeffs.items():
            if cf == 0:
                continue
            c1 = -cf * (ch + rr - ss)
            if c1 != 0:
                key = (rr - 1, ss - 1)
                new[key] = new.get(key, Fraction(0)) + c1
            c2 = cf * (ch + rr)
            if c2 != 0:
                key = (rr + 1, ss)
                new[key] = new.get(key, Fraction(0)) + c2
        state = LatticeState(new, ch + 1)
        history.append(state)
    return history


def recursion_termination(m_highest, c3, k_max=50):
    """First k at which the lattice of the lowest-weight seed empties, or
    None if it survives through k_max (infinite-dimensional)."""
    m_low = -Fraction(m_highest)
    c3 = Fraction(c3).limit_denominator(10 ** 6)
    n, r, s = m_low, m_low - 1 + 2 * c3, 2 * c3 - 1
    hist = ladder_recursion(n, r, s, k_max)
    for k, st in enumerate(hist):
        if k > 0 and st.is_zero():
            return k
    return None


def representation_dimension(m_highest, c3, k_max=50, cross_validate=True):
    """Dimension 2 m + 1 of the finite multiplet with highest weight m, or
    float('inf') when the pairing quantization fails.

    Conditions: 2m a nonnegative integer and m - c3 + 1/2 a nonnegative
    integer (equivalently, the lowest-weight label -m has 2(-m) - 1 a
    nonpositive integer and (m - c3) + 1/2 >= 0 integer).  Always checked
    against the exact recursion when `cross_validate`.
    """
    mh = Fraction(m_highest)
    c3f = Fraction(c3).limit_denominator(10 ** 6)
    two_m = 2 * mh
    cond1 = two_m.denominator == 1 and two_m >= 0
    t = mh - c3f + Fraction(1, 2)
    cond2 = t.denominator == 1 and t >= 0
    if cond1 and cond2:
        d = int(two_m) + 1
    else:
        d = float("inf")
    if cross_validate:
        term = recursion_termination(mh, c3, k_max)
        if d == float("inf"):
            if term is not None:
                raise AssertionError(
                    f"recursion terminated at {term} though the pairing "
                    f"condition fails (m={m_highest}, c3={c3})")
        elif term != d:
            raise AssertionError(
                f"recursion terminated at {term}, expected d={d} "
                f"(m={m_highest}, c3={c3})")
    return d
