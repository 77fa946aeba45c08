"""Closed-form laminate constructors for (A*, B#) pairs.

Simple laminates stack the two phases in one direction; rank-p sequential
laminates iterate lamination in p directions with weights m_i and realize
every boundary point of the A* phase set.  For each of the four inclusion
relations between the two microstructure sets there is a linear matrix
relation defining the accompanying relative limit, solved here entrywise in
the laminate eigenframe.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .gclosure import PhaseA, means
from .homog1d import bsharp_1d
from .pairbounds import (
    PhaseB,
    bound_L1,
    bound_L2,
    bound_L_const_b,
    bound_U1,
    bound_U2,
    bound_U_const_b,
    general_chain_check,
)
from .symtensor import SymTensor, eig

RELATIONS = ("A_subset_B", "B_subset_A", "disjoint", "complement_cover", "const_b")

_UNIT_TOL = 1e-12


class OverlapOutOfWindow(ValueError):
    pass


class InconsistentSpec(ValueError):
    pass


class RegionMismatch(ValueError):
    pass


class ChainViolation(RuntimeError):
    """Relation output breaks the general bounds chain; tensor attached."""

    def __init__(self, message, tensor=None):
        super().__init__(message)
        self.tensor = tensor


@dataclass(frozen=True)
class InclusionData:
    """Overlap fraction of the two phase sets with its admissible window."""

    thetaAB: float
    window: tuple  # (max-rule lower, min-rule upper)

    def __post_init__(self):
        lo, hi = self.window
        if not (lo - _UNIT_TOL <= self.thetaAB <= hi + _UNIT_TOL):
            raise OverlapOutOfWindow(f"thetaAB={self.thetaAB} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class LaminateSpec:
    directions: tuple  # unit vectors e_1..e_p
    weights: tuple  # m_1..m_p >= 0, summing to 1
    core_phase: str  # "a1" | "a2"
    relation: str

    def __post_init__(self):
        dirs = tuple(tuple(float(x) for x in d) for d in self.directions)
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.directions) != len(self.weights) or not self.directions:
            raise InconsistentSpec("directions and weights must be nonempty and match")
        for d in self.directions:
            if abs(np.linalg.norm(d) - 1.0) > _UNIT_TOL:
                raise InconsistentSpec(f"direction {d} is not a unit vector")
        if any(w < -_UNIT_TOL for w in self.weights):
            raise InconsistentSpec("weights must be nonnegative")
        if abs(sum(self.weights) - 1.0) > _UNIT_TOL:
            raise InconsistentSpec("weights must sum to 1")
        if self.core_phase not in ("a1", "a2"):
            raise InconsistentSpec("core_phase must be 'a1' or 'a2'")
        if self.relation not in RELATIONS:
            raise InconsistentSpec(f"relation must be one of {RELATIONS}")

    @property
    def dim(self) -> int:
        return len(self.directions[0])

    def direction_moment(self) -> np.ndarray:
        """Unit-trace second moment sum m_i e_i (x) e_i."""
        n = self.dim
        m = np.zeros((n, n))
        for d, w in zip(self.directions, self.weights):
            e = np.asarray(d)
            m += w * np.outer(e, e)
        return m

    def to_json(self) -> str:
        return json.dumps(
            {
                "directions": [list(d) for d in self.directions],
                "weights": list(self.weights),
                "core": self.core_phase,
                "relation": self.relation,
            }
        )

    @staticmethod
    def from_json(text: str) -> "LaminateSpec":
        data = json.loads(text)
        return LaminateSpec(
            tuple(tuple(d) for d in data["directions"]),
            tuple(data["weights"]),
            data["core"],
            data["relation"],
        )


def overlap_window(pa: PhaseA, pb: PhaseB) -> tuple:
    """Admissible range of the overlap fraction of the two phase sets."""
    lo = max(0.0, pa.thetaA + pb.thetaB - 1.0)
    hi = min(pa.thetaA, pb.thetaB)
    return lo, hi


def inclusion_data(pa: PhaseA, pb: PhaseB, thetaAB: float) -> InclusionData:
    """Validated overlap record for the given phases."""
    return InclusionData(float(thetaAB), overlap_window(pa, pb))


def simple_laminate_pair(
    pa: PhaseA, pb: PhaseB, thetaAB: float, axis: int = 0, dim: int = 2
) -> tuple:
    """Rank-1 laminate pair with prescribed overlap fraction.

    A* is diagonal with the harmonic mean on the lamination axis and the
    arithmetic mean elsewhere; B# carries the one-dimensional relative limit
    on the axis and the plain mean elsewhere.
    """
    overlap = inclusion_data(pa, pb, thetaAB)
    thetaAB = overlap.thetaAB
    if not (0 <= axis < dim):
        raise ValueError("axis out of range")
    harm, arith = means(pa)
    a_diag = [arith] * dim
    a_diag[axis] = harm
    b_diag = [pb.mean] * dim
    b_diag[axis] = bsharp_1d(pa, pb, thetaAB)
    return SymTensor.diag(a_diag), SymTensor.diag(b_diag)


def _moment_eigensystem(spec: LaminateSpec):
    es = eig(SymTensor.from_matrix(spec.direction_moment()))
    return np.array(es.values), es.frame


def seq_A(spec: LaminateSpec, pa: PhaseA) -> SymTensor:
    """Effective tensor of a rank-p sequential laminate.

    Core a2 / matrix a1 realizes the lower boundary of the phase set,
    core a1 / matrix a2 the upper one; the formulas are resolvent relations
    in the direction second moment, solved in its eigenframe.
    """
    w, frame = _moment_eigensystem(spec)
    theta, d = pa.thetaA, pa.a2 - pa.a1
    if spec.core_phase == "a2":
        # (1-theta) (A* - a1 I)^-1 = (a2-a1)^-1 I + theta M / a1
        if theta >= 1.0 - _UNIT_TOL:
            diag = np.full_like(w, pa.a1)
        else:
            diag = pa.a1 + (1.0 - theta) / (1.0 / d + theta * w / pa.a1)
    else:
        # theta (A* - a2 I)^-1 = (a1-a2)^-1 I + (1-theta) M / a2
        if theta <= _UNIT_TOL:
            diag = np.full_like(w, pa.a2)
        else:
            diag = pa.a2 + theta / (-1.0 / d + (1.0 - theta) * w / pa.a2)
    return SymTensor.from_matrix(frame @ np.diag(diag) @ frame.T)


def seq_B_const(spec: LaminateSpec, pa: PhaseA, b: float) -> SymTensor:
    """Quasi-sequential relative limit for a constant second density b.

    Defining relation in the laminate frame:
        b (B# - b I)^-1 (Abar - A*)^2 = theta (1-theta) (a2-a1)^2 M.
    Zero-weight directions are 0/0 degenerate and resolve to b.
    """
    w, frame = _moment_eigensystem(spec)
    astar = seq_A(spec, pa)
    a_diag = np.diag(frame.T @ astar.mat @ frame)
    _, arith = means(pa)
    theta, d = pa.thetaA, pa.a2 - pa.a1
    rhs = theta * (1.0 - theta) * d**2 * w
    diag = np.empty_like(w)
    for i, (wi, ai, ri) in enumerate(zip(w, a_diag, rhs)):
        gap = arith - ai
        if ri <= _UNIT_TOL * d**2:
            if abs(gap) > 1e-8 * max(1.0, arith):
                raise InconsistentSpec(
                    f"zero-weight direction {i} has nonzero mean mismatch {gap}"
                )
            diag[i] = b
        else:
            diag[i] = b + b * gap**2 / ri
    return SymTensor.from_matrix(frame @ np.diag(diag) @ frame.T)


def _require_region(relation: str, pa: PhaseA, pb: PhaseB):
    ok = {
        "A_subset_B": pa.thetaA <= pb.thetaB,
        "B_subset_A": pb.thetaB < pa.thetaA,
        "disjoint": pa.thetaA + pb.thetaB <= 1.0,
        "complement_cover": pa.thetaA + pb.thetaB > 1.0,
    }[relation]
    if not ok:
        raise RegionMismatch(
            f"relation {relation} incompatible with thetaA={pa.thetaA}, thetaB={pb.thetaB}"
        )


def seq_B_pp(spec: LaminateSpec, pa: PhaseA, pb: PhaseB, chain_check: bool = True) -> SymTensor:
    """Two-phase sequential relative limit for the spec's inclusion relation.

    Solves the defining linear matrix relation entrywise in the laminate
    frame.  Relations on the lower A*-boundary (A_subset_B, disjoint) need
    core a2; the flux-side relations (B_subset_A, complement_cover) need
    core a1.  The result is checked against the general bounds chain; a
    complement_cover output may legitimately fail it, in which case
    ChainViolation is raised with the tensor attached.
    """
    relation = spec.relation
    if relation == "const_b":
        raise InconsistentSpec("use seq_B_const for the constant-density relation")
    _require_region(relation, pa, pb)
    needed_core = "a2" if relation in ("A_subset_B", "disjoint") else "a1"
    if spec.core_phase != needed_core:
        raise InconsistentSpec(f"relation {relation} needs core {needed_core}")

    w, frame = _moment_eigensystem(spec)
    astar = seq_A(spec, pa)
    a_diag = np.diag(frame.T @ astar.mat @ frame)
    harm, arith = means(pa)
    theta, d = pa.thetaA, pa.a2 - pa.a1
    b_mean = pb.mean
    n = spec.dim

    if relation in ("A_subset_B", "disjoint"):
        ratio = (a_diag - pa.a1) ** 2 / (arith - pa.a1) ** 2
        lam_term = theta * (1.0 - theta) * d**2 / pa.a1**2 * w
        if relation == "A_subset_B":
            diag = pb.b1 + (b_mean - pb.b1 + pb.b1 * lam_term) * ratio
        else:
            diag = pb.b2 - (pb.b2 - b_mean - pb.b2 * lam_term) * ratio
    else:
        inv_shift = 1.0 / a_diag - 1.0 / pa.a2
        harm_inv_shift = theta * d / (pa.a1 * pa.a2)
        ratio = inv_shift**2 / harm_inv_shift**2
        if relation == "B_subset_A":
            c = min(pb.b1 / pa.a1**2, pb.b2 / pa.a2**2)
            ell = (
                pb.b1 / pa.a1**2 * pb.thetaB
                + pb.b2 / pa.a1**2 * (theta - pb.thetaB)
                + pb.b2 / pa.a2**2 * (1.0 - theta)
            )
            bump = (
                c * d**2 / pa.a1**2 * theta * (1.0 - theta)
                + 2.0 * (pb.b2 / pa.a2**2 - c) * d / pa.a1 * (1.0 - theta)
            )
            core = c + (ell - c + bump * (1.0 - w)) * ratio
        else:
            tstar = (
                pb.b2 / pa.a1**2
                + (pb.b1 - pb.b2) / pa.a1**2 * pb.thetaB
                + pb.b1 * (1.0 / pa.a2**2 - 1.0 / pa.a1**2) * (1.0 - theta)
            )
            lead = pb.b2 * pa.a2 / pa.a1**2
            rhs = (lead / harm - tstar) - 2.0 * (pb.b2 - pb.b1) * d / pa.a1**3 * (1.0 - theta) * (1.0 - w)
            core = lead / a_diag - rhs * ratio
        diag = a_diag**2 * core

    bsharp = SymTensor.from_matrix(frame @ np.diag(diag) @ frame.T)
    if chain_check:
        slacks = general_chain_check(astar, bsharp, pa, pb)
        if min(slacks) < -1e-9:
            raise ChainViolation(
                f"relation {relation} output violates the bounds chain (worst slack {min(slacks):.3e})",
                tensor=bsharp,
            )
    return bsharp


def saturation_report(pair, pa: PhaseA, pb_or_b, which_bound: str) -> float:
    """Feasibility slack of one designated bound for a constructed pair.

    which_bound in {"L", "U"} takes a scalar density; {"L1", "L2", "U1",
    "U2_step", "U2_printed"} take a PhaseB.  Positive slack = satisfied.
    """
    astar, bsharp = pair
    if which_bound == "L":
        lhs, rhs = bound_L_const_b(astar, bsharp, pa, float(pb_or_b))
        return rhs - lhs
    if which_bound == "U":
        lhs, rhs = bound_U_const_b(astar, bsharp, pa, float(pb_or_b))
        return rhs - lhs
    pb = pb_or_b
    if which_bound == "L1":
        lhs, rhs = bound_L1(astar, bsharp, pa, pb)
        return lhs - rhs
    if which_bound == "L2":
        lhs, rhs, _ = bound_L2(astar, bsharp, pa, pb)
        return lhs - rhs
    if which_bound == "U1":
        lhs, rhs = bound_U1(astar, bsharp, pa, pb)
        return lhs - rhs
    if which_bound in ("U2_step", "U2_printed"):
        lhs, printed, step = bound_U2(astar, bsharp, pa, pb)
        return lhs - (step if which_bound == "U2_step" else printed)
    raise ValueError(f"unknown bound {which_bound!r}")
