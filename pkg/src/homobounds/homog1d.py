"""Exact one-dimensional laboratory.

Periodic piecewise-constant profiles on the unit interval carry joint
indicator data for the two phase sets.  Every weak* limit, the relative
limit b#, the flux limit, and the two-point boundary-value solution are
computed exactly on piecewise-polynomial representations, so convergence
studies measure homogenization error only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .gclosure import PhaseA
from .pairbounds import PhaseB

_SUM_TOL = 1e-14


class TargetOutsideInterval(ValueError):
    pass


@dataclass(frozen=True)
class Profile1D:
    """Unit cell of (length fraction, inA, inB) triples, repeated n times."""

    cells: tuple  # ((frac, inA, inB), ...)
    period_count: int = 1

    def __post_init__(self):
        cells = tuple((float(f), bool(a), bool(b)) for f, a, b in self.cells)
        object.__setattr__(self, "cells", cells)
        if self.period_count < 1:
            raise ValueError("period_count must be >= 1")
        if any(f <= 0 for f, _, _ in cells):
            raise ValueError("cell fractions must be positive")
        if abs(sum(f for f, _, _ in cells) - 1.0) > _SUM_TOL:
            raise ValueError("cell fractions must sum to 1")

    def to_json(self) -> str:
        return json.dumps(
            {
                "cells": [{"len": f, "inA": a, "inB": b} for f, a, b in self.cells],
                "periods": self.period_count,
            }
        )

    @staticmethod
    def from_json(text: str) -> "Profile1D":
        data = json.loads(text)
        cells = tuple((c["len"], c["inA"], c["inB"]) for c in data["cells"])
        return Profile1D(cells, data["periods"])

    @staticmethod
    def from_fractions(thetaA: float, thetaB: float, thetaAB: float, period_count: int = 1) -> "Profile1D":
        """Profile realizing given phase fractions and overlap (up to 4 cells)."""
        pieces = [
            (thetaAB, True, True),
            (thetaA - thetaAB, True, False),
            (thetaB - thetaAB, False, True),
            (1.0 - thetaA - thetaB + thetaAB, False, False),
        ]
        cells = tuple((f, a, b) for f, a, b in pieces if f > _SUM_TOL)
        if not cells:
            raise ValueError("degenerate fractions")
        # renormalize against float drift so the unit-sum invariant is exact
        total = sum(f for f, _, _ in cells)
        cells = tuple((f / total, a, b) for f, a, b in cells)
        return Profile1D(cells, period_count)


@dataclass(frozen=True)
class Source1D:
    """Piecewise-constant right-hand side on [0, 1]."""

    breakpoints: tuple = (0.0, 1.0)
    values: tuple = (1.0,)

    def __post_init__(self):
        bp = tuple(float(x) for x in self.breakpoints)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(bp) != len(self.values) + 1 or bp[0] != 0.0 or bp[-1] != 1.0:
            raise ValueError("breakpoints must span [0, 1] with one value per piece")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise ValueError("breakpoints must increase")

    @staticmethod
    def constant(value: float) -> "Source1D":
        return Source1D((0.0, 1.0), (value,))


def _cell_coefficients(profile: Profile1D, pa: PhaseA, pb: PhaseB):
    a = np.array([pa.a1 if in_a else pa.a2 for _, in_a, _ in profile.cells])
    b = np.array([pb.b1 if in_b else pb.b2 for _, _, in_b in profile.cells])
    f = np.array([f for f, _, _ in profile.cells])
    return f, a, b


def weakstar_limits(profile: Profile1D, pa: PhaseA, pb: PhaseB) -> tuple:
    """Exact cell-weighted limits; independent of the period count.

    Returns (thetaA, thetaB, thetaAB, harmonic a, mean b, lim b/a^2, lim b/a).
    """
    f, a, b = _cell_coefficients(profile, pa, pb)
    theta_a = float(sum(fi for fi, in_a, _ in profile.cells if in_a))
    theta_b = float(sum(fi for fi, _, in_b in profile.cells if in_b))
    theta_ab = float(sum(fi for fi, in_a, in_b in profile.cells if in_a and in_b))
    a_harm = float(1.0 / np.sum(f / a))
    b_mean = float(np.sum(f * b))
    lim_ba2 = float(np.sum(f * b / a**2))
    lim_ba = float(np.sum(f * b / a))
    return theta_a, theta_b, theta_ab, a_harm, b_mean, lim_ba2, lim_ba


def bsharp_1d(pa: PhaseA, pb: PhaseB, thetaAB: float) -> float:
    """Relative limit b# = (harmonic a)^2 lim* b/a^2 as a function of overlap."""
    harm = 1.0 / (pa.thetaA / pa.a1 + (1.0 - pa.thetaA) / pa.a2)
    drop = 1.0 / pa.a1**2 - 1.0 / pa.a2**2
    mix = (
        pb.b2 / pa.a2**2
        + (pb.b1 - pb.b2) / pa.a2**2 * pb.thetaB
        + pb.b2 * drop * pa.thetaA
        - (pb.b2 - pb.b1) * drop * thetaAB
    )
    return float(harm**2 * mix)


def bsharp_flux_1d(pa: PhaseA, pb: PhaseB, thetaAB: float) -> float:
    """Flux limit (harmonic a) lim* b/a; distinct from b# in general."""
    harm = 1.0 / (pa.thetaA / pa.a1 + (1.0 - pa.thetaA) / pa.a2)
    drop = 1.0 / pa.a1 - 1.0 / pa.a2
    mix = (
        pb.b2 / pa.a2
        + (pb.b1 - pb.b2) / pa.a2 * pb.thetaB
        + pb.b2 * drop * pa.thetaA
        - (pb.b2 - pb.b1) * drop * thetaAB
    )
    return float(harm * mix)


def bounds_1d(pa: PhaseA, pb: PhaseB) -> tuple:
    """The four one-dimensional bounds and the optimal pair (l_#, u_#).

    Returns (l1, l2, u1, u2, l_sel, u_sel) where the selected bounds use the
    overlap extremes admissible for the given fractions; b# fills exactly
    [l_sel, u_sel] as the microstructure varies.
    """
    lo, hi = max(0.0, pa.thetaA + pb.thetaB - 1.0), min(pa.thetaA, pb.thetaB)
    harm = 1.0 / (pa.thetaA / pa.a1 + (1.0 - pa.thetaA) / pa.a2)
    drop = 1.0 / pa.a1**2 - 1.0 / pa.a2**2
    l1 = harm**2 * (
        pb.b2 / pa.a2**2 + (pb.b1 - pb.b2) / pa.a2**2 * pb.thetaB + pb.b1 * drop * pa.thetaA
    )
    l2 = harm**2 * (
        pb.b2 / pa.a2**2 + (pb.b1 - pb.b2) / pa.a1**2 * pb.thetaB + pb.b2 * drop * pa.thetaA
    )
    u1 = harm**2 * (
        pb.b2 / pa.a2**2 + (pb.b1 - pb.b2) / pa.a2**2 * pb.thetaB + pb.b2 * drop * pa.thetaA
    )
    u2 = harm**2 * (
        (pb.b2 - pb.b1) / pa.a1**2
        + pb.b1 / pa.a2**2
        + (pb.b1 - pb.b2) / pa.a1**2 * pb.thetaB
        + pb.b1 * drop * pa.thetaA
    )
    l_sel = bsharp_1d(pa, pb, hi)
    u_sel = bsharp_1d(pa, pb, lo)
    return float(l1), float(l2), float(u1), float(u2), float(l_sel), float(u_sel)


def invert_theta_ab(pa: PhaseA, pb: PhaseB, target: float, period_count: int = 1) -> tuple:
    """Overlap fraction and a realizing profile for a target b#.

    b# is affine decreasing in the overlap, so the inversion is a single
    division; the profile lays the four indicator combinations out in one
    unit cell.
    """
    *_, l_sel, u_sel = bounds_1d(pa, pb)
    lo, hi = overlap = (max(0.0, pa.thetaA + pb.thetaB - 1.0), min(pa.thetaA, pb.thetaB))
    slack = 1e-12 * max(1.0, abs(target))
    if not (min(l_sel, u_sel) - slack <= target <= max(l_sel, u_sel) + slack):
        raise TargetOutsideInterval(f"target {target} outside [{l_sel}, {u_sel}]")
    harm = 1.0 / (pa.thetaA / pa.a1 + (1.0 - pa.thetaA) / pa.a2)
    drop = 1.0 / pa.a1**2 - 1.0 / pa.a2**2
    coeff = harm**2 * (pb.b2 - pb.b1) * drop
    if abs(coeff) < 1e-300:
        theta_ab = 0.5 * (lo + hi)  # b# independent of the overlap
    else:
        theta_ab = (bsharp_1d(pa, pb, 0.0) - target) / coeff
        theta_ab = min(max(theta_ab, lo), hi)
    profile = Profile1D.from_fractions(pa.thetaA, pb.thetaB, theta_ab, period_count)
    return float(theta_ab), profile


@dataclass(frozen=True)
class State1D:
    """Exact solution of the two-point problem on one profile."""

    breakpoints: np.ndarray  # merged cell and source breakpoints
    a: np.ndarray  # conductivity per segment
    b: np.ndarray  # density per segment
    sigma_const: float  # sigma(x) = sigma_const - F(x)
    f_at_breaks: np.ndarray  # F at breakpoints (F piecewise linear)
    f_values: np.ndarray  # source value per segment
    z_adjoint: float  # constant adjoint flux a p' - b u'
    energyB: float  # integral of b (u')^2
    fluxB: float  # integral of b u'
    dirichlet_energy: float = field(default=0.0)  # integral of (u')^2

    def u(self, x):
        """Evaluate u at points x (piecewise quadratic, u(0) = u(1) = 0)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(x)
        # integrate u' = (c - F)/a cumulatively over segments
        cum = 0.0
        for i in range(len(self.a)):
            x0, x1 = self.breakpoints[i], self.breakpoints[i + 1]
            f0, fv = self.f_at_breaks[i], self.f_values[i]
            seg = (x >= x0) & (x <= x1) if i == len(self.a) - 1 else (x >= x0) & (x < x1)
            t = x[seg] - x0
            # F(x) = f0 + fv t on the segment
            out[seg] = cum + (self.sigma_const - f0) * t / self.a[i] - fv * t**2 / (2 * self.a[i])
            h = x1 - x0
            cum += (self.sigma_const - f0) * h / self.a[i] - fv * h**2 / (2 * self.a[i])
        return out if out.shape else float(out)

    def u_prime(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        idx = np.clip(np.searchsorted(self.breakpoints, x, side="right") - 1, 0, len(self.a) - 1)
        f_here = self.f_at_breaks[idx] + self.f_values[idx] * (x - self.breakpoints[idx])
        return (self.sigma_const - f_here) / self.a[idx]


def _expand_profile(profile: Profile1D, pa: PhaseA, pb: PhaseB):
    """Breakpoints and per-segment coefficients over [0, 1] with n periods."""
    n = profile.period_count
    fracs, a_cell, b_cell = _cell_coefficients(profile, pa, pb)
    cell_edges = np.concatenate([[0.0], np.cumsum(fracs)])
    cell_edges[-1] = 1.0
    breaks = [0.0]
    a_out, b_out = [], []
    for k in range(n):
        for i in range(len(fracs)):
            breaks.append((k + cell_edges[i + 1]) / n)
            a_out.append(a_cell[i])
            b_out.append(b_cell[i])
    return np.array(breaks), np.array(a_out), np.array(b_out)


def solve_state_exact(profile: Profile1D, pa: PhaseA, pb: PhaseB, source: Source1D) -> State1D:
    """Exact Dirichlet solve of -(a u')' = f with the adjoint flux.

    The flux sigma = c - F is piecewise linear with c fixed by the zero-mean
    condition on u' = sigma/a; all integrals (energy, flux, adjoint
    constant) are evaluated in closed form segment by segment.
    """
    breaks, a_seg, b_seg = _expand_profile(profile, pa, pb)
    # merge in source breakpoints
    merged = np.unique(np.concatenate([breaks, np.array(source.breakpoints)]))
    a_idx = np.clip(np.searchsorted(breaks, merged[:-1], side="right") - 1, 0, len(a_seg) - 1)
    s_idx = np.clip(
        np.searchsorted(np.array(source.breakpoints), merged[:-1], side="right") - 1,
        0,
        len(source.values) - 1,
    )
    a = a_seg[a_idx]
    b = b_seg[a_idx]
    fv = np.array(source.values)[s_idx]
    h = np.diff(merged)

    # F at breakpoints: cumulative integral of f
    f_breaks = np.concatenate([[0.0], np.cumsum(fv * h)])[:-1]

    # c from int sigma/a = 0:  c int 1/a = int F/a ; F linear per segment
    int_inv_a = np.sum(h / a)
    int_f_over_a = np.sum((f_breaks * h + fv * h**2 / 2.0) / a)
    c = float(int_f_over_a / int_inv_a)

    # segmentwise integrals of sigma and sigma^2 with sigma = (c - f0) - fv t
    s0 = c - f_breaks
    int_sigma = s0 * h - fv * h**2 / 2.0
    int_sigma2 = s0**2 * h - s0 * fv * h**2 + fv**2 * h**3 / 3.0

    energy_b = float(np.sum(b / a**2 * int_sigma2))
    flux_b = float(np.sum(b / a * int_sigma))
    dirichlet = float(np.sum(int_sigma2 / a**2))
    # adjoint: p' = z/a + (b/a^2) sigma with int p' = 0
    z = float(-np.sum(b / a**2 * int_sigma) / int_inv_a)

    return State1D(
        breakpoints=merged,
        a=a,
        b=b,
        sigma_const=c,
        f_at_breaks=f_breaks,
        f_values=fv,
        z_adjoint=z,
        energyB=energy_b,
        fluxB=flux_b,
        dirichlet_energy=dirichlet,
    )


def homogenized_energy(profile: Profile1D, pa: PhaseA, pb: PhaseB, source: Source1D) -> float:
    """Limit energy: b# times the Dirichlet integral of the a-harmonic state."""
    theta_a, theta_b, theta_ab, a_harm, _, lim_ba2, _ = weakstar_limits(profile, pa, pb)
    bsh = a_harm**2 * lim_ba2
    flat = Profile1D(((1.0, False, False),), 1)
    pa_flat = PhaseA(a_harm / 2.0, a_harm, 0.0)  # theta 0 puts the medium at a2 = a_harm
    pb_flat = PhaseB(1.0, 1.0, 0.0)
    state = solve_state_exact(flat, pa_flat, pb_flat, source)
    return float(bsh * state.dirichlet_energy)


def convergence_study(profile: Profile1D, pa: PhaseA, pb: PhaseB, source: Source1D, period_counts) -> list:
    """Energy error against the homogenized limit for increasing resolution.

    Returns rows (period_count, epsilon, energy, |energy - limit|, relative).
    """
    target = homogenized_energy(profile, pa, pb, source)
    rows = []
    for n in period_counts:
        state = solve_state_exact(Profile1D(profile.cells, int(n)), pa, pb, source)
        err = abs(state.energyB - target)
        rel = err / abs(target) if target else 0.0
        rows.append((int(n), 1.0 / int(n), state.energyB, err, rel))
    return rows
