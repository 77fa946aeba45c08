"""Optimal trace bounds on the pair (A*, B#).

A* is the effective conductivity of a two-phase mixture, B# the relative
limit of a second two-phase density evaluated along the oscillations of the
first.  Feasible pairs obey a chain of matrix inequalities plus one lower
and one upper trace bound selected by the volume fractions:

    L1 (thetaA <= thetaB),   L2 (thetaB < thetaA),
    U1 (thetaA+thetaB <= 1), U2 (thetaA+thetaB > 1).

All four are linear in B#, so the fibre of admissible B# over a fixed A*
is a closed convex set.  The module evaluates each bound, classifies pairs,
mixes fibre extremes, and evaluates the pointwise energy-density bounds
used by the relaxed design problems.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gclosure import (
    OutsideGSet,
    PhaseA,
    g_membership,
    means,
    theta_from_lower_boundary,
    theta_from_upper_boundary,
)
from .symtensor import SingularFactor, SymTensor, eig, trace_chain

DEFAULT_TOL = 1e-9


class DimensionMismatch(ValueError):
    pass


class NotInRegion(ValueError):
    """Operation requires a pair in a specific (Li, Uj) region."""


@dataclass(frozen=True)
class PhaseB:
    """Second-phase data; b1 = b2 is allowed (constant density)."""

    b1: float
    b2: float
    thetaB: float

    def __post_init__(self):
        if not (0 < self.b1 <= self.b2):
            raise ValueError(f"need 0 < b1 <= b2, got b1={self.b1}, b2={self.b2}")
        if not (0.0 <= self.thetaB <= 1.0):
            raise ValueError(f"thetaB must lie in [0, 1], got {self.thetaB}")

    @property
    def mean(self) -> float:
        return self.b1 * self.thetaB + self.b2 * (1.0 - self.thetaB)


@dataclass(frozen=True)
class PairBoundReport:
    region: str  # L1U1 | L1U2 | L2U1 | L2U2
    chain_slacks: tuple  # 6 reals, see general_chain_check
    li_lhs: float
    li_rhs: float
    li_slack: float
    uj_lhs: float
    uj_rhs: float
    uj_slack: float
    uj_variant_slack: float  # printed-form U2 slack (equals uj_slack off U2)
    verdict: str  # feasible | infeasible | boundary


def classify_region(pa: PhaseA, pb: PhaseB) -> str:
    li = "L1" if pa.thetaA <= pb.thetaB else "L2"
    uj = "U1" if pa.thetaA + pb.thetaB <= 1.0 else "U2"
    return li + uj


def general_chain_check(astar: SymTensor, bsharp: SymTensor, pa: PhaseA, pb: PhaseB) -> tuple:
    """Eigen-slacks of the general bounds chain.

    Six numbers, nonnegative when the chain holds:
      0: min eig of B# - b1 I
      1: min eig of (b2/a1) A* - B#
      2: (b2/a1) (arithmetic mean - max eig A*)
      3: (b2/a1) (a2 - arithmetic mean)       [scalar link, always >= 0]
      4: min eig A* - a1
      5: a2 - max eig A*
    """
    if astar.dim != bsharp.dim:
        raise DimensionMismatch(f"A* is {astar.dim}x{astar.dim}, B# is {bsharp.dim}x{bsharp.dim}")
    _, arith = means(pa)
    ratio = pb.b2 / pa.a1
    lam = eig(astar).values
    mu = eig(bsharp).values
    link = eig(ratio * astar.mat - bsharp.mat).values
    return (
        float(mu[-1] - pb.b1),
        float(link[-1]),
        float(ratio * (arith - lam[0])),
        float(ratio * (pa.a2 - arith)),
        float(lam[-1] - pa.a1),
        float(pa.a2 - lam[0]),
    )


def bound_L_const_b(astar: SymTensor, bsharp: SymTensor, pa: PhaseA, b: float) -> tuple:
    """Constant-density lower trace bound; feasible pairs have lhs <= rhs."""
    n = astar.dim
    i = np.eye(n)
    outer = pa.a2 * i - astar.mat
    if np.abs(outer).max() <= 1e-14 * pa.a2:
        return 0.0, float(n * pa.thetaA * (pa.a2 - pa.a1))  # homogeneous a2 limit
    middle = SymTensor.from_matrix(pa.a2 * bsharp.mat - b * astar.mat)
    lhs = trace_chain([(b, 1), (outer, 1), (middle, -1), (outer, 1)])
    rhs = n * pa.thetaA * (pa.a2 - pa.a1)
    return float(lhs), float(rhs)


def bound_U_const_b(astar: SymTensor, bsharp: SymTensor, pa: PhaseA, b: float) -> tuple:
    """Constant-density upper trace bound; feasible pairs have lhs <= rhs."""
    n = astar.dim
    i = np.eye(n)
    outer = astar.mat - pa.a1 * i
    if np.abs(outer).max() <= 1e-14 * pa.a1:
        return 0.0, float(n * (1.0 - pa.thetaA) * (pa.a2 - pa.a1))  # homogeneous a1 limit
    middle = SymTensor.from_matrix(b * astar.mat - pa.a1 * bsharp.mat)
    lhs = trace_chain([(b, 1), (outer, 1), (middle, -1), (outer, 1)])
    rhs = n * (1.0 - pa.thetaA) * (pa.a2 - pa.a1)
    return float(lhs), float(rhs)


def _lower_trace_sum(astar: SymTensor, pa: PhaseA) -> float:
    """S = tr (A* - a1 I)^-1."""
    return sum(1.0 / (lam - pa.a1) for lam in eig(astar).values)


def bound_L1(astar: SymTensor, bsharp: SymTensor, pa: PhaseA, pb: PhaseB) -> tuple:
    """Lower bound on the region thetaA <= thetaB, eliminated form.

    lhs = tr (B# - b1 I)(A* - a1 I)^-2 >= rhs; equality picks out nested
    microstructures (the A-set inside the B-set).
    """
    n = astar.dim
    i = np.eye(n)
    s = _lower_trace_sum(astar, pa)
    d = pa.a2 - pa.a1
    denom = pa.a2 + pa.a1 * (n - 1)
    lhs = trace_chain([(bsharp.mat - pb.b1 * i, 1), (SymTensor.from_matrix(astar.mat - pa.a1 * i), -2)])
    rhs = (
        n * (pb.b2 - pb.b1) * (1.0 - pb.thetaB) * (pa.a1 * s + 1.0) ** 2 / denom**2
        + (pb.b1 / pa.a1) * (d * s - n) / denom
    )
    return float(lhs), float(rhs)


def bound_U1(astar: SymTensor, bsharp: SymTensor, pa: PhaseA, pb: PhaseB) -> tuple:
    """Upper bound on the region thetaA + thetaB <= 1, eliminated form.

    lhs = tr ((b2/a1) A* - B#)(A* - a1 I)^-2 >= rhs; equality picks out
    disjoint microstructures.
    """
    n = astar.dim
    s = _lower_trace_sum(astar, pa)
    denom = pa.a2 + pa.a1 * (n - 1)
    lhs = trace_chain(
        [((pb.b2 / pa.a1) * astar.mat - bsharp.mat, 1), (SymTensor.from_matrix(astar.mat - pa.a1 * np.eye(n)), -2)]
    )
    rhs = (
        n * (pb.b2 - pb.b1) * pb.thetaB * (pa.a1 * s + 1.0) ** 2 / denom**2
        + n * (pb.b2 / pa.a1) * (pa.a1 * s + 1.0) / denom
    )
    return float(lhs), float(rhs)


def l2_case(pa: PhaseA, pb: PhaseB) -> str:
    """Translated amount selector: case a iff b2/a2^2 <= b1/a1^2."""
    return "a" if pb.b2 / pa.a2**2 <= pb.b1 / pa.a1**2 else "b"


def _l_of_theta(pa: PhaseA, pb: PhaseB, theta: float) -> float:
    return (
        pb.b1 / pa.a1**2 * pb.thetaB
        + pb.b2 / pa.a1**2 * (theta - pb.thetaB)
        + pb.b2 / pa.a2**2 * (1.0 - theta)
    )


def bound_L2(astar: SymTensor, bsharp: SymTensor, pa: PhaseA, pb: PhaseB, tol: float = DEFAULT_TOL) -> tuple:
    """Lower bound on the region thetaB < thetaA.

    Works in flux variables: lhs = tr (A*^-1 B# A*^-1 - c I) Q with the
    resolvent weight Q = (underline(A)_theta^-1 - a2^-1)^2 (A*^-1 - a2^-1)^-2
    and theta recovered from the upper boundary.  Returns (lhs, rhs, case).
    """
    n = astar.dim
    case = l2_case(pa, pb)
    c = min(pb.b1 / pa.a1**2, pb.b2 / pa.a2**2)
    theta = theta_from_upper_boundary(astar, pa, tol)
    ell = _l_of_theta(pa, pb, theta)
    d = pa.a2 - pa.a1

    es = eig(astar)
    lam = np.array(es.values)
    b_in_frame = es.frame.T @ bsharp.mat @ es.frame
    core = np.diag(1.0 / lam) @ b_in_frame @ np.diag(1.0 / lam)  # A*^-1 B# A*^-1 in A* frame
    inv_shift = 1.0 / lam - 1.0 / pa.a2
    harm_inv_shift = theta * d / (pa.a1 * pa.a2)
    weight = harm_inv_shift**2 / inv_shift**2
    lhs = float(np.dot(np.diag(core) - c, weight))

    if case == "a":
        rhs = n * (ell - c) + pb.b2 * d**2 / (pa.a1 * pa.a2) ** 2 * theta * (1.0 - theta) * (n - 1)
    else:
        rhs = n * (ell - c) + (
            pb.b1 * d**2 / pa.a1**4 * theta
            + 2.0 * (pb.b2 / pa.a2**2 - pb.b1 / pa.a1**2) * d / pa.a1
        ) * (1.0 - theta) * (n - 1)
    return float(lhs), float(rhs), case


def theta_star_u2(pa: PhaseA, pb: PhaseB, theta: float) -> float:
    """Scalar weak* limit entering the U2 right-hand side."""
    return (
        pb.b2 / pa.a1**2
        + (pb.b1 - pb.b2) / pa.a1**2 * pb.thetaB
        + pb.b1 * (1.0 / pa.a2**2 - 1.0 / pa.a1**2) * (1.0 - theta)
    )


def bound_U2(astar: SymTensor, bsharp: SymTensor, pa: PhaseA, pb: PhaseB, tol: float = DEFAULT_TOL) -> tuple:
    """Upper bound on the region thetaA + thetaB > 1, both right-hand sides.

    Returns (lhs, rhs_printed, rhs_step).  The two sides differ by
    N b2 (a2-a1)(2 theta - 1)/a1^3: the printed statement carries (1-theta)
    where its own derivation step produces theta.  Feasibility is certified
    against the step form; the printed form is reported alongside.
    """
    n = astar.dim
    theta = theta_from_upper_boundary(astar, pa, tol)
    tstar = theta_star_u2(pa, pb, theta)
    d = pa.a2 - pa.a1

    es = eig(astar)
    ainv = 1.0 / np.array(es.values)
    b_in_frame = es.frame.T @ bsharp.mat @ es.frame
    core = np.diag(ainv) @ b_in_frame @ np.diag(ainv)
    inv_shift = ainv - 1.0 / pa.a2
    harm_inv_shift = theta * d / (pa.a1 * pa.a2)
    weight = harm_inv_shift**2 / inv_shift**2
    lhs = float(np.dot(pb.b2 * pa.a2 / pa.a1**2 * ainv - np.diag(core), weight))

    common = n * (pb.b2 / pa.a1**2 - tstar) - 2.0 * (pb.b2 - pb.b1) * d / pa.a1**3 * (1.0 - theta) * (n - 1)
    rhs_printed = common + n * pb.b2 * d / pa.a1**3 * (1.0 - theta)
    rhs_step = common + n * pb.b2 * d / pa.a1**3 * theta
    return float(lhs), float(rhs_printed), float(rhs_step)


def pair_membership(
    astar: SymTensor,
    bsharp: SymTensor,
    pa: PhaseA,
    pb: PhaseB,
    tol: float = DEFAULT_TOL,
) -> PairBoundReport:
    """Full feasibility verdict for a candidate pair (A*, B#)."""
    region = classify_region(pa, pb)
    chain = general_chain_check(astar, bsharp, pa, pb)

    if pa.thetaA <= 1e-12 or pa.thetaA >= 1.0 - 1e-12:
        # homogeneous A-medium: the fibre collapses to the single point
        # B# = mean(b) I, the trace bounds degenerate to 0 = 0
        g_membership(astar, pa, tol)  # raises DegenerateTheta on mismatch
        gap = float(np.abs(bsharp.mat - pb.mean * np.eye(bsharp.dim)).max())
        ok = gap <= tol and all(s >= -tol for s in chain)
        verdict = "boundary" if ok else "infeasible"
        zero = 0.0 if ok else -np.inf
        return PairBoundReport(region, chain, 0.0, 0.0, zero, 0.0, 0.0, zero, zero, verdict)

    a_report = g_membership(astar, pa, tol)
    if a_report.verdict == "outside":
        return PairBoundReport(
            region, chain, np.nan, np.nan, -np.inf, np.nan, np.nan, -np.inf, -np.inf, "infeasible"
        )
    feasible = all(s >= -tol for s in chain)

    if pb.b2 - pb.b1 <= 1e-14 * pb.b1:
        # degenerate B-phase: the two-phase bounds collapse onto the unique
        # lower-boundary relative limit and would reject the legitimate
        # upper-boundary constructions; the constant-density trace bounds
        # are the valid feasibility test here
        try:
            li_lhs, li_rhs = bound_L_const_b(astar, bsharp, pa, pb.b1)
            uj_lhs, uj_rhs = bound_U_const_b(astar, bsharp, pa, pb.b1)
        except SingularFactor:
            return PairBoundReport(
                region, chain, np.nan, np.nan, -np.inf, np.nan, np.nan, -np.inf, -np.inf, "infeasible"
            )
        li_slack, uj_slack = li_rhs - li_lhs, uj_rhs - uj_lhs
        feasible = feasible and li_slack >= -tol and uj_slack >= -tol
        if not feasible:
            verdict = "infeasible"
        elif min(abs(li_slack), abs(uj_slack)) <= tol:
            verdict = "boundary"
        else:
            verdict = "feasible"
        return PairBoundReport(
            region, chain, li_lhs, li_rhs, li_slack, uj_lhs, uj_rhs, uj_slack, uj_slack, verdict
        )

    try:
        if region.startswith("L1"):
            li_lhs, li_rhs = bound_L1(astar, bsharp, pa, pb)
        else:
            li_lhs, li_rhs, _ = bound_L2(astar, bsharp, pa, pb, tol)
        li_slack = li_lhs - li_rhs
        if region.endswith("U1"):
            uj_lhs, uj_rhs = bound_U1(astar, bsharp, pa, pb)
            uj_slack = uj_lhs - uj_rhs
            variant = uj_slack
        else:
            uj_lhs, printed, step = bound_U2(astar, bsharp, pa, pb, tol)
            uj_rhs = step
            uj_slack = uj_lhs - step
            variant = uj_lhs - printed
    except SingularFactor:
        # an indefinite middle factor already certifies chain violation
        return PairBoundReport(region, chain, np.nan, np.nan, -np.inf, np.nan, np.nan, -np.inf, -np.inf, "infeasible")

    feasible = feasible and li_slack >= -tol and uj_slack >= -tol
    if not feasible:
        verdict = "infeasible"
    elif min(abs(li_slack), abs(uj_slack)) <= tol:
        verdict = "boundary"
    else:
        verdict = "feasible"
    return PairBoundReport(
        region,
        chain,
        float(li_lhs),
        float(li_rhs),
        float(li_slack),
        float(uj_lhs),
        float(uj_rhs),
        float(uj_slack),
        float(variant),
        verdict,
    )


def unit_trace_projector_from_boundary(astar: SymTensor, pa: PhaseA, theta: float) -> np.ndarray:
    """Oscillation-direction matrix recovered from a lower-boundary tensor.

    Inverting the resolvent relation of the lower boundary at fraction theta
    gives the unit-trace matrix M with
        theta M / a1 = (1-theta)(A* - a1 I)^-1 - (a2-a1)^-1 I.
    """
    n = astar.dim
    es = eig(astar)
    inv_shift = 1.0 / (np.array(es.values) - pa.a1)
    diag = pa.a1 / theta * ((1.0 - theta) * inv_shift - 1.0 / (pa.a2 - pa.a1))
    return es.frame @ np.diag(diag) @ es.frame.T


def fibre_extremes_l1u1(astar: SymTensor, pa: PhaseA, pb: PhaseB, tol: float = DEFAULT_TOL) -> tuple:
    """Saturating endpoints of the fibre over A* in the region L1U1.

    Returns (B_low, B_high): the nested-laminate tensor saturating L1 and the
    disjoint-laminate tensor saturating U1, both sharing A*'s eigenframe.
    """
    theta = theta_from_lower_boundary(astar, pa, tol)
    if theta <= 1e-12:
        b_mean = pb.mean
        eye = np.eye(astar.dim)
        return SymTensor.from_matrix(b_mean * eye), SymTensor.from_matrix(b_mean * eye)
    n = astar.dim
    es = eig(astar)
    lam = np.array(es.values)
    d = pa.a2 - pa.a1
    arith_t = pa.a1 * theta + pa.a2 * (1.0 - theta)
    m_diag = np.diag(es.frame.T @ unit_trace_projector_from_boundary(astar, pa, theta) @ es.frame)
    ratio = (lam - pa.a1) ** 2 / (arith_t - pa.a1) ** 2
    b_mean = pb.mean
    low = pb.b1 + (b_mean - pb.b1 + pb.b1 * d**2 / pa.a1**2 * theta * (1.0 - theta) * m_diag) * ratio
    high = pb.b2 - (pb.b2 - b_mean - pb.b2 * d**2 / pa.a1**2 * theta * (1.0 - theta) * m_diag) * ratio
    to_tensor = lambda diag: SymTensor.from_matrix(es.frame @ np.diag(diag) @ es.frame.T)
    return to_tensor(low), to_tensor(high)


def fibre_mix(astar: SymTensor, bsharp: SymTensor, pa: PhaseA, pb: PhaseB, tol: float = DEFAULT_TOL) -> tuple:
    """Mixing weights putting B# between the L1- and U1-saturating extremes.

    beta1 = L1 slack / tr (A*-a1 I)^-2 and beta2 = U1 slack likewise; the
    convex combination (beta2 B_low + beta1 B_high)/(beta1+beta2) reproduces
    any B# on the segment between the extremes.
    """
    if classify_region(pa, pb) != "L1U1":
        raise NotInRegion("fibre mixing is defined in the region L1U1")
    report = pair_membership(astar, bsharp, pa, pb, tol)
    if report.verdict == "infeasible":
        raise NotInRegion("pair is not feasible")
    norm = trace_chain([(SymTensor.from_matrix(astar.mat - pa.a1 * np.eye(astar.dim)), -2)])
    beta1 = report.li_slack / norm
    beta2 = report.uj_slack / norm
    b_low, b_high = fibre_extremes_l1u1(astar, pa, pb, tol)
    return float(beta1), float(beta2), b_low, b_high


def _y_theta(pa: PhaseA, pb: PhaseB, theta: float, m_ab: np.ndarray, m_b: np.ndarray) -> np.ndarray:
    """Oscillation correction matrix for the gradient-side lower bound."""
    d = pa.a2 - pa.a1
    coeff = (
        pb.b1 * d**2 / pa.a1**2 * theta * (1.0 - theta)
        + (pb.b2 - pb.b1) ** 2 / pb.b1 * pb.thetaB * (1.0 - pb.thetaB)
        - 2.0 * (pb.b2 - pb.b1) * d / pa.a1 * theta * (1.0 - pb.thetaB)
    )
    return coeff * m_ab - (pb.b2 - pb.b1) ** 2 / pb.b1 * pb.thetaB * (1.0 - pb.thetaB) * m_b


def _y_prime_theta(pa: PhaseA, pb: PhaseB, theta: float, m1: np.ndarray, m2: np.ndarray) -> np.ndarray:
    """Oscillation correction matrix for the flux-side lower bound.

    Scalar weights are the weak* limits for the nested choice (B-set inside
    the A-set), evaluated exactly from the cell fractions.
    """
    c = min(pb.b1 / pa.a1**2, pb.b2 / pa.a2**2)
    ell = _l_of_theta(pa, pb, theta)
    g1, g2, g3 = pb.b1 / pa.a1**2, pb.b2 / pa.a1**2, pb.b2 / pa.a2**2
    w1, w2, w3 = pb.thetaB, theta - pb.thetaB, 1.0 - theta
    second_moment = g1**2 * w1 + g2**2 * w2 + g3**2 * w3
    l_pp = second_moment - ell**2
    cov = (g1 * w1 + g2 * w2) - theta * ell  # E[f (chi_A - theta)]
    slope = pa.a2 * (1.0 / pa.a1 - 1.0 / pa.a2)
    l_p = l_pp / c**2 - 2.0 * slope / c * cov + slope**2 * theta * (1.0 - theta)
    n = m1.shape[0]
    eye = np.eye(n)
    return c * l_p * (eye - m1) - l_pp / c * (eye - m2)


def energy_density_bounds(
    astar: SymTensor,
    pa: PhaseA,
    pb_or_b,
    vector,
    side: str,
    m_matrix=None,
    tol: float = DEFAULT_TOL,
) -> tuple:
    """Pointwise bounds on the limiting energy density at a given field.

    Constant density b (pb_or_b a scalar): side "lower" or "upper" evaluates
        lower:  (b/a2) {A* + (a2 I - Abar)^-1 (a2 I - A*)^2} v.v
        upper:  (b/a1) {A* + (Abar - a1 I)^-1 (A* - a1 I)^2} v.v
    Two-phase density (pb_or_b a PhaseB): side "gradient_lower" bounds
    B# grad u . grad u from below at v = grad u; side "flux_lower" bounds
    A*^-1 B# A*^-1 sigma . sigma from below at v = sigma.  The oscillation
    matrices default to the isotropic (1/N) I and may be overridden with a
    unit-trace matrix (e.g. a laminate's direction second moment).

    Returns (value, quadratic form matrix).
    """
    report = g_membership(astar, pa, tol)
    if report.verdict == "outside":
        raise OutsideGSet("tensor is outside its phase set")
    n = astar.dim
    v = np.asarray(vector, dtype=float)
    eye = np.eye(n)
    harm, arith = means(pa)
    a = astar.mat

    if np.isscalar(pb_or_b):
        b = float(pb_or_b)
        if side == "lower":
            if pa.thetaA <= 1e-12:
                form = (b / pa.a2) * a  # homogeneous a2 medium: A* = a2 I, correction vanishes
            else:
                form = (b / pa.a2) * (a + (pa.a2 * eye - a) @ (pa.a2 * eye - a) / (pa.a2 - arith))
        elif side == "upper":
            if pa.thetaA >= 1.0 - 1e-12:
                form = (b / pa.a1) * a  # homogeneous a1 medium
            else:
                form = (b / pa.a1) * (a + (a - pa.a1 * eye) @ (a - pa.a1 * eye) / (arith - pa.a1))
        else:
            raise ValueError("constant-density sides are 'lower' and 'upper'")
        return float(v @ form @ v), form

    pb = pb_or_b
    m = np.eye(n) / n if m_matrix is None else np.asarray(m_matrix, dtype=float)
    if side == "gradient_lower":
        theta = theta_from_lower_boundary(astar, pa, tol)
        arith_t = pa.a1 * theta + pa.a2 * (1.0 - theta)
        y = _y_theta(pa, pb, theta, m, m)
        shift = a - pa.a1 * eye
        b_mean = pb.mean
        form = (
            pb.b1 * eye
            + 2.0 * (b_mean - pb.b1) / (arith_t - pa.a1) * shift
            + (y - (b_mean - pb.b1) * eye) @ shift @ shift / (arith_t - pa.a1) ** 2
        )
    elif side == "flux_lower":
        theta = theta_from_upper_boundary(astar, pa, tol)
        c = min(pb.b1 / pa.a1**2, pb.b2 / pa.a2**2)
        ell = _l_of_theta(pa, pb, theta)
        harm_inv_shift = theta * (pa.a2 - pa.a1) / (pa.a1 * pa.a2)
        es = eig(astar)
        inv_shift_diag = 1.0 / np.array(es.values) - 1.0 / pa.a2
        inv_shift = es.frame @ np.diag(inv_shift_diag) @ es.frame.T
        y = _y_prime_theta(pa, pb, theta, m, m)
        form = (
            c * eye
            + 2.0 * (ell - c) / harm_inv_shift * inv_shift
            + (y - (ell - c) * eye) @ inv_shift @ inv_shift / harm_inv_shift**2
        )
    else:
        raise ValueError("two-phase sides are 'gradient_lower' and 'flux_lower'")
    return float(v @ form @ v), form
