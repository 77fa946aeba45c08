"""Phase space of effective tensors for a two-phase conductor.

The attainable set for volume fraction theta is characterized by an
eigenvalue window [harmonic mean, arithmetic mean] together with a lower
and an upper trace inequality.  This module evaluates membership, recovers
the boundary fraction theta from a tensor (closed form on the lower side,
bisection on the upper), and samples the two boundary curves at N = 2 for
phase diagrams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symtensor import SymTensor, eig

_DEGENERATE_THETA = 1e-12


class DegenerateTheta(ValueError):
    """theta in {0, 1} but the tensor is not the homogeneous one."""


class OutsideGSet(ValueError):
    """Tensor violates the phase-space characterization."""


class NoBracket(RuntimeError):
    """Upper-boundary equation has no root in [theta_A, 1)."""


_MIN_CONTRAST = 1e-6  # relative a2/a1 - 1 below this is numerically degenerate


@dataclass(frozen=True)
class PhaseA:
    """Scalar two-phase conductivity data (a1 < a2, fraction of a1)."""

    a1: float
    a2: float
    thetaA: float

    def __post_init__(self):
        if not (0 < self.a1 < self.a2):
            raise ValueError(f"need 0 < a1 < a2, got a1={self.a1}, a2={self.a2}")
        if self.a2 - self.a1 <= _MIN_CONTRAST * self.a1:
            raise ValueError(
                f"phase contrast a2-a1 = {self.a2 - self.a1} is degenerate at tolerance"
            )
        if not (0.0 <= self.thetaA <= 1.0):
            raise ValueError(f"thetaA must lie in [0, 1], got {self.thetaA}")


@dataclass(frozen=True)
class GMembershipReport:
    eigenvalue_window_slacks: tuple  # (lam_i - harm, arith - lam_i) per eigenvalue
    lower_trace_slack: float
    upper_trace_slack: float
    verdict: str  # inside | boundary_lower | boundary_upper | corner | outside


def means(p: PhaseA) -> tuple:
    """(harmonic, arithmetic) means of the two phases at fraction thetaA."""
    harm = 1.0 / (p.thetaA / p.a1 + (1.0 - p.thetaA) / p.a2)
    arith = p.a1 * p.thetaA + p.a2 * (1.0 - p.thetaA)
    return harm, arith


def _trace_bound_slacks(lams, p: PhaseA):
    harm, arith = means(p)
    n = len(lams)
    lower_lhs = sum(1.0 / (lam - p.a1) for lam in lams)
    lower_rhs = 1.0 / (harm - p.a1) + (n - 1) / (arith - p.a1)
    upper_lhs = sum(1.0 / (p.a2 - lam) for lam in lams)
    upper_rhs = 1.0 / (p.a2 - harm) + (n - 1) / (p.a2 - arith)
    return lower_rhs - lower_lhs, upper_rhs - upper_lhs


def g_membership(astar: SymTensor, p: PhaseA, tol: float = 1e-9) -> GMembershipReport:
    """Evaluate the three membership conditions and classify the tensor."""
    lams = eig(astar).values
    harm, arith = means(p)

    if p.thetaA <= _DEGENERATE_THETA or p.thetaA >= 1.0 - _DEGENERATE_THETA:
        # the set degenerates to a single point: a2 I or a1 I
        target = p.a2 if p.thetaA <= _DEGENERATE_THETA else p.a1
        if max(abs(lam - target) for lam in lams) > tol:
            raise DegenerateTheta(
                f"thetaA={p.thetaA} admits only {target}*I, got eigenvalues {lams}"
            )
        window = tuple((0.0, 0.0) for _ in lams)
        return GMembershipReport(window, 0.0, 0.0, "corner")

    window = tuple((lam - harm, arith - lam) for lam in lams)
    window_ok = all(lo >= -tol and hi >= -tol for lo, hi in window)
    # eigenvalues pinned at the phase values make the trace sums blow up;
    # membership then reduces to the window alone
    if any(lam - p.a1 <= 1e-13 * p.a1 or p.a2 - lam <= 1e-13 * p.a2 for lam in lams):
        verdict = "outside"
        return GMembershipReport(window, -np.inf, -np.inf, verdict)

    low_slack, up_slack = _trace_bound_slacks(lams, p)
    if not window_ok or low_slack < -tol or up_slack < -tol:
        verdict = "outside"
    elif abs(low_slack) <= tol and abs(up_slack) <= tol:
        verdict = "corner"
    elif abs(low_slack) <= tol:
        verdict = "boundary_lower"
    elif abs(up_slack) <= tol:
        verdict = "boundary_upper"
    else:
        verdict = "inside"
    return GMembershipReport(window, float(low_slack), float(up_slack), verdict)


def _require_member(astar: SymTensor, p: PhaseA, tol: float = 1e-9):
    report = g_membership(astar, p, tol)
    if report.verdict == "outside":
        raise OutsideGSet(f"tensor is outside the theta={p.thetaA} phase set")
    return report


def theta_from_lower_boundary(astar: SymTensor, p: PhaseA, tol: float = 1e-9) -> float:
    """Fraction theta <= thetaA whose lower boundary passes through astar.

    Closed form in S = tr(astar - a1 I)^-1:
        theta = a1 ((a2-a1) S - N) / ((a2-a1)(a1 S + 1)).
    """
    _require_member(astar, p, tol)
    if p.thetaA >= 1.0 - _DEGENERATE_THETA:
        return 1.0
    lams = eig(astar).values
    n = astar.dim
    s = sum(1.0 / (lam - p.a1) for lam in lams)
    d = p.a2 - p.a1
    theta = p.a1 * (d * s - n) / (d * (p.a1 * s + 1.0))
    return float(min(max(theta, 0.0), p.thetaA))


def upper_boundary_residual(astar_or_trace, p: PhaseA, theta: float) -> float:
    """Residual of the upper-boundary trace equation at a trial theta.

    Positive means the tensor lies above the theta-boundary.  Strictly
    increasing in theta, which justifies bisection.
    """
    if isinstance(astar_or_trace, SymTensor):
        lams = eig(astar_or_trace).values
        t = sum(1.0 / (1.0 / lam - 1.0 / p.a2) for lam in lams)
        n = astar_or_trace.dim
    else:
        t, n = astar_or_trace
    return t - n * p.a1 * p.a2 / (theta * (p.a2 - p.a1)) - (n - 1) * (1.0 - theta) * p.a2 / theta


def theta_from_upper_boundary(astar: SymTensor, p: PhaseA, tol: float = 1e-9) -> float:
    """Fraction theta >= thetaA whose upper boundary passes through astar.

    Bisection on [thetaA, 1 - 1e-9]; the defining residual is monotone.
    """
    _require_member(astar, p, tol)
    lams = eig(astar).values
    n = astar.dim
    if p.thetaA >= 1.0 - _DEGENERATE_THETA:
        return 1.0
    if any(lam >= p.a2 * (1.0 - 1e-14) for lam in lams):
        # an eigenvalue at a2 forces the degenerate boundary theta -> thetaA -> 0
        return float(p.thetaA)
    t = sum(1.0 / (1.0 / lam - 1.0 / p.a2) for lam in lams)
    lo = max(p.thetaA, 1e-12)
    hi = 1.0 - 1e-9
    f_lo = upper_boundary_residual((t, n), p, lo)
    f_hi = upper_boundary_residual((t, n), p, hi)
    if f_lo >= 0:
        # the root cannot sit below thetaA for a member, so a nonnegative
        # residual there is boundary roundoff: the tensor lies on the
        # thetaA-boundary itself
        return float(lo)
    if f_hi < 0:
        # residual at 1 is t - N a1 a2/(a2-a1) >= 0 for any member; a slightly
        # negative f_hi at the clipped endpoint means theta = 1
        if upper_boundary_residual((t, n), p, 1.0) >= -1e-12 * max(1.0, abs(t)):
            return 1.0
        raise NoBracket(f"no root in [{lo}, {hi}]: residuals ({f_lo:.3e}, {f_hi:.3e})")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = upper_boundary_residual((t, n), p, mid)
        if abs(f_mid) <= 1e-12 * max(1.0, abs(t)):
            return float(mid)
        if f_mid < 0:
            lo = mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))


def boundary_curve_sample(p: PhaseA, side: str, count: int) -> list:
    """Sample (lambda1, lambda2) pairs along a boundary curve at N = 2.

    The sweep is linear in the resolvent coordinate (1/(lambda1 - a1) on the
    lower side, 1/(a2 - lambda1) on the upper), which traverses lambda1 over
    [harmonic, arithmetic] and puts the isotropic coated-sphere point at the
    middle sample.
    """
    if count < 2:
        raise ValueError("count must be >= 2")
    if side not in ("lower", "upper"):
        raise ValueError("side must be 'lower' or 'upper'")
    harm, arith = means(p)
    if p.thetaA <= _DEGENERATE_THETA or p.thetaA >= 1.0 - _DEGENERATE_THETA:
        lam = p.a2 if p.thetaA <= _DEGENERATE_THETA else p.a1
        return [(lam, lam)] * count
    pts = []
    if side == "lower":
        r_total = 1.0 / (harm - p.a1) + 1.0 / (arith - p.a1)
        u0, u1 = 1.0 / (harm - p.a1), 1.0 / (arith - p.a1)
        for t in np.linspace(0.0, 1.0, count):
            u = u0 + (u1 - u0) * t
            lam1 = p.a1 + 1.0 / u
            lam2 = p.a1 + 1.0 / (r_total - u)
            pts.append((float(lam1), float(lam2)))
    else:
        r_total = 1.0 / (p.a2 - harm) + 1.0 / (p.a2 - arith)
        u0, u1 = 1.0 / (p.a2 - harm), 1.0 / (p.a2 - arith)
        for t in np.linspace(0.0, 1.0, count):
            u = u0 + (u1 - u0) * t
            lam1 = p.a2 - 1.0 / u
            lam2 = p.a2 - 1.0 / (r_total - u)
            pts.append((float(lam1), float(lam2)))
    return pts
