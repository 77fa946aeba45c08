"""Coated-sphere (Hashin-Shtrikman) constructions.

Space-filling coated spheres give explicit isotropic effective tensors m I;
assigning cores and inclusion relations to the two phase sets gives six
closed-form values of the scalar relative limit b#, each saturating one of
the trace bounds.  An independent radial quadrature of the energy integral
over a single coated sphere cross-checks every closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gclosure import PhaseA
from .pairbounds import PhaseB

_RESIDUAL_TOL = 1e-13


class IncompatibleVolumes(ValueError):
    pass


class UnsupportedGeometry(ValueError):
    pass


@dataclass(frozen=True)
class CoatingConfig:
    coreA: str  # "a1" | "a2"
    coreB: str  # "b1" | "b2" | "const"
    inclusion: str  # "B_in_A" | "A_in_B" | "A_in_Bc" | "Ac_in_B" | "none"

    def __post_init__(self):
        if self.coreA not in ("a1", "a2"):
            raise ValueError("coreA must be 'a1' or 'a2'")
        if self.coreB not in ("b1", "b2", "const"):
            raise ValueError("coreB must be 'b1', 'b2', or 'const'")
        if self.inclusion not in ("B_in_A", "A_in_B", "A_in_Bc", "Ac_in_B", "none"):
            raise ValueError(f"unknown inclusion {self.inclusion!r}")


def _check_volumes(cfg: CoatingConfig, pa: PhaseA, pb: PhaseB):
    t_a, t_b = pa.thetaA, pb.thetaB
    ok = {
        "B_in_A": t_b <= t_a,
        "A_in_B": t_a <= t_b,
        "A_in_Bc": t_a + t_b <= 1.0,
        "Ac_in_B": t_a + t_b >= 1.0,
        "none": True,
    }[cfg.inclusion]
    if not ok:
        raise IncompatibleVolumes(
            f"inclusion {cfg.inclusion} incompatible with thetaA={t_a}, thetaB={t_b}"
        )


def hs_m(pa: PhaseA, coreA: str, n: int) -> float:
    """Effective conductivity of coated spheres, solved by bisection.

    Core a1:  (m - a2)/(m + (N-1)a2) = thetaA (a1 - a2)/(a1 + (N-1)a2)
    Core a2:  (m - a1)/(m + (N-1)a1) = (1-thetaA)(a2 - a1)/(a2 + (N-1)a1)
    The root is unique in (a1, a2).
    """
    if n < 2:
        raise ValueError("coated spheres need N >= 2")
    if coreA not in ("a1", "a2"):
        raise ValueError("coreA must be 'a1' or 'a2'")
    theta = pa.thetaA
    if theta <= 0.0:
        return pa.a2
    if theta >= 1.0:
        return pa.a1

    if coreA == "a1":
        rhs = theta * (pa.a1 - pa.a2) / (pa.a1 + (n - 1) * pa.a2)
        resid = lambda m: (m - pa.a2) / (m + (n - 1) * pa.a2) - rhs
    else:
        rhs = (1.0 - theta) * (pa.a2 - pa.a1) / (pa.a2 + (n - 1) * pa.a1)
        resid = lambda m: (m - pa.a1) / (m + (n - 1) * pa.a1) - rhs

    # run to interval collapse: the residual tolerance alone leaves an
    # m-error that tiny phase contrasts amplify past membership tolerances
    lo, hi = pa.a1, pa.a2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 4.0 * np.finfo(float).eps * mid:
            break
        if resid(mid) < 0:
            lo = mid
        else:
            hi = mid
    mid = 0.5 * (lo + hi)
    assert abs(resid(mid)) <= max(_RESIDUAL_TOL, 8 * np.finfo(float).eps)
    return float(mid)


def hs_b(pa: PhaseA, pb_or_b, cfg: CoatingConfig, n: int) -> float:
    """Closed-form relative limit of the coated-sphere construction.

    Constant density b: core a1 saturates the lower trace bound, core a2
    the upper.  Two-phase density: the four core/inclusion assignments
    saturate L2, L1, U1, U2 in turn; at N = 1 they reduce to the
    one-dimensional bounds l2, l1, u1, u2.
    """
    theta = pa.thetaA
    d2 = (pa.a2 - pa.a1) ** 2
    denom1 = ((1.0 - theta) * pa.a1 + (n + theta - 1.0) * pa.a2) ** 2  # core a1
    denom2 = (theta * pa.a2 + (n - theta) * pa.a1) ** 2  # core a2
    swell1 = 1.0 + n * theta * (1.0 - theta) * d2 / denom1
    swell2 = 1.0 + n * theta * (1.0 - theta) * d2 / denom2

    if np.isscalar(pb_or_b):
        if cfg.coreB != "const":
            raise UnsupportedGeometry("scalar density requires coreB='const'")
        b = float(pb_or_b)
        return float(b * (swell1 if cfg.coreA == "a1" else swell2))

    pb = pb_or_b
    _check_volumes(cfg, pa, pb)
    key = (cfg.coreA, cfg.coreB, cfg.inclusion)
    if key == ("a1", "b1", "B_in_A"):
        return float(pb.b2 * swell1 - (pb.b2 - pb.b1) * (n * pa.a2) ** 2 * pb.thetaB / denom1)
    if key == ("a2", "b2", "A_in_B"):
        return float(pb.b1 * swell2 - (pb.b1 - pb.b2) * (n * pa.a1) ** 2 * (1.0 - pb.thetaB) / denom2)
    if key == ("a2", "b1", "A_in_Bc"):
        return float(pb.b2 * swell2 - (pb.b2 - pb.b1) * (n * pa.a1) ** 2 * pb.thetaB / denom2)
    if key == ("a1", "b2", "Ac_in_B"):
        return float(pb.b1 * swell1 - (pb.b1 - pb.b2) * (n * pa.a2) ** 2 * (1.0 - pb.thetaB) / denom1)
    raise UnsupportedGeometry(f"no closed form for configuration {key}")


def radial_profile_coefficients(core_val: float, coat_val: float, core_volume: float, n: int) -> tuple:
    """Matching coefficients (f_core, f_out_const, f_out_decay) of w = y_l f(r).

    f = f_core on the core, f_out_const + f_out_decay / r^N in the coating,
    continuous with continuous flux a (f + r f') across r = core radius.
    """
    r_core_n = core_volume  # radius^N
    # unknowns (b1~, b2~, c~):  b1~ - b2~ - c~/R^N = 0
    #                           core_val b1~ - coat_val b2~ - coat_val (1-N) c~/R^N = 0
    #                           b2~ + c~ = 1
    mat = np.array(
        [
            [1.0, -1.0, -1.0 / r_core_n],
            [core_val, -coat_val, -coat_val * (1.0 - n) / r_core_n],
            [0.0, 1.0, 1.0],
        ]
    )
    sol = np.linalg.solve(mat, np.array([0.0, 0.0, 1.0]))
    return float(sol[0]), float(sol[1]), float(sol[2])


def _b_interface_radius(cfg: CoatingConfig, pa: PhaseA, pb: PhaseB, n: int) -> tuple:
    """Radial B-profile (inner value, outer value, interface radius^N)."""
    key = (cfg.coreA, cfg.coreB, cfg.inclusion)
    if key == ("a1", "b1", "B_in_A"):
        return pb.b1, pb.b2, pb.thetaB
    if key == ("a2", "b2", "A_in_B"):
        return pb.b2, pb.b1, 1.0 - pb.thetaB
    if key == ("a2", "b1", "A_in_Bc"):
        return pb.b1, pb.b2, pb.thetaB
    if key == ("a1", "b2", "Ac_in_B"):
        return pb.b2, pb.b1, 1.0 - pb.thetaB
    raise UnsupportedGeometry(f"configuration {key} is not radially representable")


def hs_radial_oracle(pa: PhaseA, pb_or_b, cfg: CoatingConfig, n: int, quadrature_points: int = 10_000) -> float:
    """Quadrature of the energy integral over one coated sphere.

    With w(y) = y_l f(r) the angular average is exact and
        b# = integral_0^1 B(r) [N f^2 + 2 f f' r + (f')^2 r^2] r^(N-1) dr,
    evaluated by the composite midpoint rule on each smooth piece.  Entirely
    independent of the closed-form algebra it validates.
    """
    if n not in (2, 3):
        raise UnsupportedGeometry("radial oracle supports N = 2 or 3")
    theta = pa.thetaA
    if cfg.coreA == "a1":
        core_val, coat_val, core_vol = pa.a1, pa.a2, theta
    else:
        core_val, coat_val, core_vol = pa.a2, pa.a1, 1.0 - theta
    if core_vol <= 0.0 or core_vol >= 1.0:
        # degenerate coating: homogeneous ball, f is identically 1
        core_vol = None

    if np.isscalar(pb_or_b):
        if cfg.coreB != "const":
            raise UnsupportedGeometry("scalar density requires coreB='const'")
        b_inner = b_outer = float(pb_or_b)
        rb_n = 0.5  # placement irrelevant for a constant density
    else:
        _check_volumes(cfg, pa, pb_or_b)
        b_inner, b_outer, rb_n = _b_interface_radius(cfg, pa, pb_or_b, n)

    if core_vol is None:
        f_core, f_const, f_decay, r_a = 1.0, 1.0, 0.0, 1.0
    else:
        f_core, f_const, f_decay = radial_profile_coefficients(core_val, coat_val, core_vol, n)
        r_a = core_vol ** (1.0 / n)
    r_b = min(max(rb_n, 0.0), 1.0) ** (1.0 / n)

    def density(r):
        # gradient magnitude factor: N f^2 + 2 f f' r + (f')^2 r^2
        inside = r < r_a
        f = np.where(inside, f_core, f_const + f_decay / r**n)
        fp = np.where(inside, 0.0, -n * f_decay / r ** (n + 1))
        return (n * f**2 + 2.0 * f * fp * r + fp**2 * r**2) * r ** (n - 1)

    edges = sorted({0.0, r_a, r_b, 1.0})
    total = 0.0
    for lo, hi in zip(edges, edges[1:]):
        if hi - lo < 1e-15:
            continue
        pts = max(64, int(round(quadrature_points * (hi - lo))))
        r = lo + (np.arange(pts) + 0.5) * (hi - lo) / pts
        b_here = b_inner if hi <= r_b + 1e-15 else b_outer
        total += b_here * np.sum(density(r)) * (hi - lo) / pts
    return float(total)
