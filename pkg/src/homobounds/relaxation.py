"""Desk-scale relaxed design problems on the unit interval.

The classical problems place one or two phase sets by characteristic
functions and minimize a Dirichlet or weighted energy; they have no
minimizers.  Their relaxations replace indicators by volume-fraction fields
and the integrand by its optimal microstructural value: the relative-limit
integrand i# for the single-set problem, and the region-dependent lower
bound l_# for the oscillation-dissipation problem.  Exhaustive enumeration
over small grids provides the independent classical oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .gclosure import PhaseA
from .homog1d import Profile1D, Source1D, solve_state_exact
from .pairbounds import PhaseB

_MEAN_TOL = 1e-12


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class DesignField1D:
    """Piecewise-constant fraction field on a uniform grid over [0, 1]."""

    values: tuple
    volume_target: float = None

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("field needs at least one cell")
        if any(v < 0.0 or v > 1.0 for v in vals):
            raise ValueError("fractions must lie in [0, 1]")
        if self.volume_target is not None:
            mean = sum(vals) / len(vals)
            if abs(mean - self.volume_target) > _MEAN_TOL:
                raise ValueError(
                    f"grid mean {mean} misses the volume target {self.volume_target}"
                )

    @staticmethod
    def constant(value: float, cells: int = 1) -> "DesignField1D":
        return DesignField1D((value,) * cells, value)


@dataclass(frozen=True)
class RelaxedValue:
    value: float
    integrand: tuple  # optimal pointwise coefficient per cell
    regions: tuple  # per-cell microstructure family label
    state_sigma_const: float


def _segment_sigma_integrals(n_cells: int, source: Source1D, inv_a: np.ndarray):
    """Exact per-cell integrals of sigma and sigma^2 on the uniform grid.

    sigma = c - F with F the source antiderivative; c enforces the zero-mean
    condition on u' = sigma / a.  Source breakpoints are merged into the
    grid, and results are re-aggregated per cell.
    """
    grid = np.linspace(0.0, 1.0, n_cells + 1)
    merged = np.unique(np.concatenate([grid, np.array(source.breakpoints)]))
    cell_idx = np.clip(np.searchsorted(grid, merged[:-1], side="right") - 1, 0, n_cells - 1)
    s_idx = np.clip(
        np.searchsorted(np.array(source.breakpoints), merged[:-1], side="right") - 1,
        0,
        len(source.values) - 1,
    )
    fv = np.array(source.values)[s_idx]
    h = np.diff(merged)
    f_breaks = np.concatenate([[0.0], np.cumsum(fv * h)])[:-1]
    inv_a_seg = inv_a[cell_idx]

    int_inv_a = float(np.sum(h * inv_a_seg))
    int_f_over_a = float(np.sum((f_breaks * h + fv * h**2 / 2.0) * inv_a_seg))
    c = int_f_over_a / int_inv_a

    s0 = c - f_breaks
    seg_sigma = s0 * h - fv * h**2 / 2.0
    seg_sigma2 = s0**2 * h - s0 * fv * h**2 + fv**2 * h**3 / 3.0
    cell_sigma = np.zeros(n_cells)
    cell_sigma2 = np.zeros(n_cells)
    np.add.at(cell_sigma, cell_idx, seg_sigma)
    np.add.at(cell_sigma2, cell_idx, seg_sigma2)
    return c, cell_sigma, cell_sigma2


def odp_relaxed_value_1d(theta: DesignField1D, pa: PhaseA, source: Source1D) -> float:
    """Relaxed single-set design value: integral of i#(theta) (u')^2.

    In one dimension the optimal integrand is exact,
        i#(t) = harm(t)^2 (t/a1^2 + (1-t)/a2^2),
    and the state solves with the harmonic-mean coefficient cell by cell.
    """
    t = np.array(theta.values)
    inv_a = t / pa.a1 + (1.0 - t) / pa.a2  # 1/harmonic mean per cell
    weight = t / pa.a1**2 + (1.0 - t) / pa.a2**2  # i# / harm^2
    _, _, cell_sigma2 = _segment_sigma_integrals(len(t), source, inv_a)
    # i# (u')^2 = (i#/harm^2) sigma^2
    return float(np.sum(weight * cell_sigma2))


def _homogenized_dirichlet(inv_a_mean: float, source: Source1D) -> float:
    """Dirichlet integral of the state with the constant coefficient 1/inv_a_mean."""
    _, _, cell_sigma2 = _segment_sigma_integrals(1, source, np.array([inv_a_mean]))
    return float(inv_a_mean**2 * cell_sigma2[0])


def classical_pattern_value(
    maskA, maskB, pa: PhaseA, pb: PhaseB, source: Source1D, periods: int = 1
) -> float:
    """Finite-scale energy of one unit-cell pattern repeated `periods` times.

    maskA/maskB mark the cells carrying a1/b1; the weighted energy
    integral b (u')^2 is evaluated exactly.  As periods grows the value
    approaches the pattern's homogenization limit.
    """
    n = len(maskA)
    cells = tuple((1.0 / n, bool(a), bool(b)) for a, b in zip(maskA, maskB))
    state = solve_state_exact(Profile1D(cells, periods), pa, pb, source)
    return state.energyB


def odp_bruteforce_1d(cells: int, onesA: int, pa: PhaseA, source: Source1D) -> tuple:
    """Exhaustive minimum over periodic unit-cell patterns, homogenized.

    Each placement of the a1-phase on onesA of the uniform cells defines a
    periodic microstructure; its limiting energy is the exact relaxed
    integrand times the Dirichlet integral of the harmonic-mean state.  For
    a single phase set the limit is arrangement-independent, so enumeration
    certifies that no pattern beats the relaxed value at matching fraction.
    Returns (min value, argmin mask).
    """
    if cells > 20:
        raise TooLarge("enumeration is capped at 20 cells")
    if not (0 <= onesA <= cells):
        raise ValueError("onesA out of range")
    theta = onesA / cells
    inv_a_mean = theta / pa.a1 + (1.0 - theta) / pa.a2
    dirichlet = _homogenized_dirichlet(inv_a_mean, source)
    best_val, best_mask = np.inf, None
    for placement in combinations(range(cells), onesA):
        mask = np.zeros(cells, dtype=bool)
        mask[list(placement)] = True
        lim_inv_a2 = float(np.mean(np.where(mask, pa.a1, pa.a2) ** -2.0))
        value = lim_inv_a2 / inv_a_mean**2 * dirichlet
        if value < best_val - 1e-15:
            best_val, best_mask = value, mask.copy()
    return best_val, tuple(bool(x) for x in best_mask)


def _l_sharp_cells(ta: np.ndarray, tb: np.ndarray, pa: PhaseA, pb: PhaseB):
    """Pointwise optimal integrand l_# and the nested-family labels."""
    harm = 1.0 / (ta / pa.a1 + (1.0 - ta) / pa.a2)
    drop = 1.0 / pa.a1**2 - 1.0 / pa.a2**2
    l1 = harm**2 * (pb.b2 / pa.a2**2 + (pb.b1 - pb.b2) / pa.a2**2 * tb + pb.b1 * drop * ta)
    l2 = harm**2 * (pb.b2 / pa.a2**2 + (pb.b1 - pb.b2) / pa.a1**2 * tb + pb.b2 * drop * ta)
    use_l1 = ta <= tb
    lsh = np.where(use_l1, l1, l2)
    labels = tuple("A_subset_B" if flag else "B_subset_A" for flag in use_l1)
    return lsh, labels


def oodp_relaxed_value_1d(
    thetaA: DesignField1D, thetaB: DesignField1D, pa: PhaseA, pb: PhaseB, source: Source1D
) -> RelaxedValue:
    """Relaxed oscillation-dissipation value with per-cell minimizing family.

    The optimal relative limit is the selected one-dimensional lower bound
    l_#; the nested inclusion direction switches across the interface
    {thetaA = thetaB}.
    """
    ta, tb = np.array(thetaA.values), np.array(thetaB.values)
    if len(ta) != len(tb):
        raise ValueError("fields must share the grid")
    inv_a = ta / pa.a1 + (1.0 - ta) / pa.a2
    lsh, labels = _l_sharp_cells(ta, tb, pa, pb)
    c, _, cell_sigma2 = _segment_sigma_integrals(len(ta), source, inv_a)
    value = float(np.sum(lsh * inv_a**2 * cell_sigma2))  # l_# (u')^2
    return RelaxedValue(value, tuple(float(x) for x in lsh), labels, float(c))


def oodp_bruteforce_1d(
    cells: int, onesA: int, onesB: int, pa: PhaseA, pb: PhaseB, source: Source1D
) -> float:
    """Exhaustive minimum over periodic pattern pairs, homogenized.

    Every (A-placement, B-placement) pair on the uniform unit cell defines a
    periodic two-set microstructure whose limiting energy is the relative
    limit b# of the pattern times the harmonic-mean Dirichlet integral.  The
    minimum over all pairs realizes the maximal-overlap (nested) patterns
    and equals the relaxed value at matching constant fractions, which is
    what the enumeration certifies.  B-placements are evaluated in one
    vectorized sweep per A-placement (the limit is affine in the
    B-indicator); ties resolve to the lexicographically first pattern.
    """
    from math import comb

    if comb(cells, onesA) * comb(cells, onesB) > 2_000_000:
        raise TooLarge("pair enumeration is capped at 2e6 combinations")
    theta = onesA / cells
    inv_a_mean = theta / pa.a1 + (1.0 - theta) / pa.a2
    dirichlet = _homogenized_dirichlet(inv_a_mean, source)
    b_masks = np.array(
        [[i in placement for i in range(cells)] for placement in combinations(range(cells), onesB)],
        dtype=float,
    )
    best = np.inf
    for placement in combinations(range(cells), onesA):
        mask = np.zeros(cells, dtype=bool)
        mask[list(placement)] = True
        inv_a2 = np.where(mask, pa.a1, pa.a2) ** -2.0
        # lim* b/a^2: per-cell b2/a^2, lowered by (b2-b1)/a^2 on the B-set
        base = pb.b2 * np.sum(inv_a2) / cells
        values = base - (pb.b2 - pb.b1) * (b_masks @ inv_a2) / cells
        best = min(best, float(values.min()))
    return best / inv_a_mean**2 * dirichlet


def h_monotonicity_check(pa: PhaseA, grid: int = 100) -> dict:
    """Monotonicity of the relaxed integrand map along horizontal segments.

    For N = 2 the scalar component of h(A*) restricted to a segment with
    lambda2 fixed has derivative (2 lambda1 - a2 - abar)/(a2 (a2 - abar)),
    negative throughout the admissible range lambda1 <= abar < a2.  Checked
    on a grid over (thetaA, lambda1).
    """
    thetas = np.linspace(0.01, 0.99, grid)
    worst = -np.inf
    checked = 0
    for theta in thetas:
        abar = pa.a1 * theta + pa.a2 * (1.0 - theta)
        harm = 1.0 / (theta / pa.a1 + (1.0 - theta) / pa.a2)
        for lam1 in np.linspace(harm, abar, grid):
            deriv = (2.0 * lam1 - pa.a2 - abar) / (pa.a2 * (pa.a2 - abar))
            worst = max(worst, deriv)
            checked += 1
    return {"grid_points": checked, "max_derivative": float(worst), "monotone": bool(worst <= 1e-12)}
