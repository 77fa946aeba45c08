import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homobounds.gclosure import (
    DegenerateTheta,
    PhaseA,
    boundary_curve_sample,
    g_membership,
    means,
    theta_from_lower_boundary,
    theta_from_upper_boundary,
    upper_boundary_residual,
)
from homobounds.symtensor import SymTensor


class TestPhaseA:
    def test_rejects_reversed(self):
        with pytest.raises(ValueError):
            PhaseA(2.0, 1.0, 0.5)

    def test_rejects_degenerate_contrast(self):
        with pytest.raises(ValueError):
            PhaseA(1.0, 1.0000001, 0.5)


class TestMeans:
    def test_half(self, pa_half):
        assert means(pa_half) == pytest.approx((4 / 3, 1.5))

    def test_pure_a2(self):
        assert means(PhaseA(1, 2, 0.0)) == pytest.approx((2.0, 2.0))

    def test_pure_a1(self):
        assert means(PhaseA(1, 2, 1.0)) == pytest.approx((1.0, 1.0))


class TestMembership:
    def test_simple_laminate_corner(self, pa_half):
        report = g_membership(SymTensor.diag([4 / 3, 1.5]), pa_half)
        assert report.verdict == "corner"
        assert report.lower_trace_slack == pytest.approx(0.0, abs=1e-12)
        assert report.upper_trace_slack == pytest.approx(0.0, abs=1e-12)

    def test_isotropic_upper(self, pa_half):
        report = g_membership(SymTensor.diag([10 / 7, 10 / 7]), pa_half)
        assert report.verdict == "boundary_upper"
        assert report.upper_trace_slack == pytest.approx(0.0, abs=1e-12)
        assert report.lower_trace_slack > 0

    def test_harmonic_isotropic_outside(self, pa_half):
        report = g_membership(SymTensor.diag([4 / 3, 4 / 3]), pa_half)
        assert report.verdict == "outside"
        assert report.lower_trace_slack == pytest.approx(5.0 - 6.0)

    def test_degenerate_theta(self):
        report = g_membership(SymTensor.diag([2.0, 2.0]), PhaseA(1, 2, 0.0))
        assert report.verdict == "corner"
        with pytest.raises(DegenerateTheta):
            g_membership(SymTensor.diag([1.5, 1.5]), PhaseA(1, 2, 0.0))


class TestThetaRecovery:
    def test_simple_laminate(self, pa_half):
        assert theta_from_lower_boundary(SymTensor.diag([4 / 3, 1.5]), pa_half) == pytest.approx(0.5)
        assert theta_from_upper_boundary(SymTensor.diag([4 / 3, 1.5]), pa_half) == pytest.approx(0.5)

    def test_isotropic_lower(self, pa_half):
        # closed form: S = 14/3, theta = (S-2)/(S+1) = 8/17
        theta = theta_from_lower_boundary(SymTensor.diag([10 / 7, 10 / 7]), pa_half)
        assert theta == pytest.approx(8 / 17, abs=1e-12)
        # the recovered theta satisfies the lower boundary equality
        harm_t = 1.0 / (theta / 1.0 + (1.0 - theta) / 2.0)
        arith_t = theta + 2.0 * (1.0 - theta)
        lhs = 2.0 / (10 / 7 - 1.0)
        rhs = 1.0 / (harm_t - 1.0) + 1.0 / (arith_t - 1.0)
        assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_homogeneous_edges(self):
        assert theta_from_lower_boundary(SymTensor.diag([2.0, 2.0]), PhaseA(1, 2, 0.0)) == 0.0
        assert theta_from_upper_boundary(SymTensor.diag([1.0, 1.0]), PhaseA(1, 2, 1.0)) == 1.0

    def test_upper_isotropic(self):
        theta = theta_from_upper_boundary(SymTensor.diag([1.2, 1.2]), PhaseA(1, 2, 0.75))
        assert theta == pytest.approx(0.75, abs=1e-10)

    @given(st.floats(min_value=0.05, max_value=0.95), st.integers(min_value=0, max_value=1000))
    @settings(max_examples=60, deadline=None)
    def test_lower_round_trip(self, theta, seed):
        # build a tensor on the theta lower boundary, then recover theta
        pa = PhaseA(1.0, 2.0, theta)
        rng = np.random.default_rng(seed)
        lam1, lam2 = boundary_curve_sample(pa, "lower", 11)[int(rng.integers(0, 11))]
        recovered = theta_from_lower_boundary(SymTensor.diag([lam1, lam2]), pa)
        assert recovered == pytest.approx(theta, abs=1e-10)

    def test_upper_residual_monotone(self, pa_half):
        astar = SymTensor.diag([1.4, 1.45])
        values = [upper_boundary_residual(astar, pa_half, t) for t in np.linspace(0.5, 0.999, 40)]
        assert all(b > a for a, b in zip(values, values[1:]))


class TestBoundarySampling:
    def test_lower_endpoints(self, pa_half):
        pts = boundary_curve_sample(pa_half, "lower", 3)
        assert pts[0] == pytest.approx((4 / 3, 1.5))
        assert pts[-1] == pytest.approx((1.5, 4 / 3))
        for lam1, lam2 in pts:
            assert g_membership(SymTensor.diag([lam1, lam2]), pa_half).verdict in ("boundary_lower", "corner")

    def test_degenerate(self):
        pts = boundary_curve_sample(PhaseA(1, 2, 0.0), "lower", 3)
        assert pts == [(2.0, 2.0)] * 3

    def test_upper_midpoint_isotropic(self, pa_half):
        pts = boundary_curve_sample(pa_half, "upper", 3)
        assert pts[1] == pytest.approx((10 / 7, 10 / 7))
        for lam1, lam2 in pts:
            assert g_membership(SymTensor.diag([lam1, lam2]), pa_half).verdict in ("boundary_upper", "corner")

    def test_every_sample_on_matching_boundary(self):
        pa = PhaseA(1.0, 3.0, 0.35)
        for side, verdicts in (("lower", ("boundary_lower", "corner")), ("upper", ("boundary_upper", "corner"))):
            for lam1, lam2 in boundary_curve_sample(pa, side, 25):
                report = g_membership(SymTensor.diag([lam1, lam2]), pa, tol=1e-10)
                assert report.verdict in verdicts
