import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modnav import (
    GammaEval,
    RotationSchedule,
    Variant,
    angle_between,
    axis_angle_rotation,
    basis_2d,
    basis_3d,
    basis_3d_rotated,
    manipulate_basis,
    prestep_basis_3d,
    rotate_basis_2d,
    rotation_2d,
    rotation_angle,
)
from modnav.errors import (
    DegenerateGradientError,
    DegenerateVariantError,
    DomainError,
    NonUnitAxisError,
    ZeroFieldError,
)


def ge(*gradient, value=2.0):
    grad = np.asarray(gradient, dtype=float)
    return GammaEval(value, grad, float(np.linalg.norm(grad)))


def assert_orthonormal(E, tol=1e-10):
    d = E.shape[0]
    assert np.abs(E.T @ E - np.eye(d)).max() <= tol


class TestBasis2D:
    def test_axis_aligned_gradient(self):
        E = basis_2d(ge(0.5556, 0.0))
        assert E[:, 0] == pytest.approx([1.0, 0.0])
        assert E[:, 1] == pytest.approx([0.0, -1.0])

    def test_vertical_gradient(self):
        E = basis_2d(ge(0.0, 1.0))
        assert E[:, 0] == pytest.approx([0.0, 1.0])
        assert E[:, 1] == pytest.approx([1.0, 0.0])

    def test_three_four_five(self):
        E = basis_2d(ge(3.0, 4.0))
        assert E[:, 0] == pytest.approx([0.6, 0.8])
        assert E[:, 1] == pytest.approx([0.8, -0.6])
        assert_orthonormal(E)

    def test_degenerate_gradient(self):
        with pytest.raises(DegenerateGradientError):
            basis_2d(ge(0.0, 0.0))


class TestPrestep3D:
    def test_xy_axis_gradient(self):
        E = prestep_basis_3d(ge(1.0, 0.0, 0.0), Variant.XY)
        assert E[:, 0] == pytest.approx([1.0, 0.0, 0.0])
        assert E[:, 1] == pytest.approx([0.0, -1.0, 0.0])
        assert E[:, 2] == pytest.approx([0.0, 0.0, 1.0])

    def test_xy_degenerate_for_z_gradient(self):
        with pytest.raises(DegenerateVariantError):
            prestep_basis_3d(ge(0.0, 0.0, 1.0), Variant.XY)

    def test_xz_handles_z_gradient(self):
        E = prestep_basis_3d(ge(0.0, 0.0, 1.0), Variant.XZ)
        assert E[:, 0] == pytest.approx([0.0, 0.0, 1.0])
        assert_orthonormal(E)

    @pytest.mark.parametrize("variant", list(Variant))
    def test_first_column_is_inplane_gradient(self, variant, rng):
        g = ge(*rng.normal(size=3))
        E = prestep_basis_3d(g, variant)
        i, j = variant.pair
        pair = np.zeros(3)
        pair[[i, j]] = g.gradient[[i, j]]
        pair /= np.linalg.norm(pair)
        assert E[:, 0] == pytest.approx(pair)
        assert_orthonormal(E)


class TestBasis3D:
    def test_axis_gradient_closed_form(self):
        E = basis_3d(ge(1.0, 0.0, 0.0), Variant.XY)
        assert E[:, 0] == pytest.approx([1.0, 0.0, 0.0])
        assert E[:, 1] == pytest.approx([0.0, -1.0, 0.0])
        assert E[:, 2] == pytest.approx([0.0, 0.0, 1.0])
        assert_orthonormal(E)

    def test_y_gradient(self):
        E = basis_3d(ge(0.0, 1.0, 0.0), Variant.XY)
        assert E[:, 0] == pytest.approx([0.0, 1.0, 0.0])
        assert_orthonormal(E)

    def test_first_column_is_unit_gradient(self, rng):
        for _ in range(50):
            g = ge(*rng.normal(size=3))
            for variant in Variant:
                E = basis_3d(g, variant)
                e1 = g.gradient / g.gradient_norm
                assert np.abs(E[:, 0] - e1).max() < 1e-12
                assert_orthonormal(E)

    def test_closed_form_agrees_with_rotation_path(self, rng):
        for _ in range(200):
            g = ge(*rng.normal(size=3))
            closed = basis_3d(g, Variant.XY)
            rotated = basis_3d_rotated(g, Variant.XY)
            assert np.abs(closed - rotated).max() < 1e-12

    def test_degenerate_gradient(self):
        with pytest.raises(DegenerateGradientError):
            basis_3d(ge(0.0, 0.0, 0.0))


class TestRotationAngle:
    SCHED = RotationSchedule(delta1=0.5, delta2=2.0)

    def test_headon_quarter_turn(self):
        assert rotation_angle(math.pi, 4.0, self.SCHED, 1) == pytest.approx(math.pi / 4)

    def test_vanishes_on_boundary(self):
        assert rotation_angle(math.pi, 1.0, self.SCHED, 1) == 0.0
        assert rotation_angle(math.pi, 1.0, self.SCHED, -1) == 0.0

    def test_far_field_saturation(self):
        theta = rotation_angle(math.pi / 2, 1e300, self.SCHED, -1)
        assert theta == pytest.approx(-math.pi / 4)

    def test_bounded_by_delta1_pi(self):
        for gamma in (1.0, 1.5, 4.0, 1e9):
            theta = rotation_angle(math.pi, gamma, self.SCHED, 1)
            assert abs(theta) <= 0.5 * math.pi + 1e-12

    def test_per_axis_override(self):
        sched = RotationSchedule(delta1=0.5, delta2=2.0, per_axis=((2, 0.25, 4.0),))
        base = rotation_angle(math.pi, 4.0, sched, 1, axis=3)
        overridden = rotation_angle(math.pi, 4.0, sched, 1, axis=2)
        assert base == pytest.approx(math.pi / 4)
        assert overridden == pytest.approx(0.25 * math.pi * (1 - 4 ** (-0.25)))


class TestRotate2D:
    def test_quarter_turn_of_identity(self):
        E = rotate_basis_2d(np.eye(2), math.pi / 2)
        assert E[:, 0] == pytest.approx([0.0, 1.0], abs=1e-15)
        assert E[:, 1] == pytest.approx([-1.0, 0.0], abs=1e-15)

    def test_zero_angle_is_identity(self):
        E = basis_2d(ge(3.0, 4.0))
        assert np.array_equal(rotate_basis_2d(E, 0.0), E)

    def test_eighth_turn_from_axis_gradient(self):
        E = rotate_basis_2d(basis_2d(ge(1.0, 0.0)), math.pi / 4)
        assert E[:, 0] == pytest.approx([math.sqrt(2) / 2, math.sqrt(2) / 2])

    @settings(deadline=None, max_examples=100)
    @given(st.floats(-math.pi, math.pi), st.floats(-10, 10), st.floats(-10, 10))
    def test_rotation_inverse(self, theta, g1, g2):
        if math.hypot(g1, g2) < 1e-6:
            return
        E = basis_2d(ge(g1, g2))
        back = rotate_basis_2d(rotate_basis_2d(E, theta), -theta)
        assert np.abs(back - E).max() < 1e-12


class TestAxisAngle:
    def test_zero_angle_identity(self):
        assert np.abs(axis_angle_rotation((0, 0, 1.0), 0.0) - np.eye(3)).max() < 1e-15

    def test_axis_is_invariant(self):
        R = axis_angle_rotation((0, 0, 1.0), 1.234)
        assert R @ np.array([0, 0, 1.0]) == pytest.approx([0, 0, 1.0])

    def test_proper_rotation(self):
        axis = np.array([1.0, 2.0, -0.5])
        axis /= np.linalg.norm(axis)
        R = axis_angle_rotation(axis, 0.7)
        assert np.abs(R.T @ R - np.eye(3)).max() < 1e-12
        assert np.linalg.det(R) == pytest.approx(1.0)

    def test_x_axis_quarter_turn(self):
        R = axis_angle_rotation((1.0, 0, 0), math.pi / 2)
        out = R @ np.array([0, 1.0, 0])
        assert abs(out @ np.array([1.0, 0, 0])) < 1e-15
        assert np.linalg.norm(out) == pytest.approx(1.0)

    def test_matches_2d_convention_about_z(self):
        # Right-handed convention: rotation about +z restricted to the plane
        # must equal the anticlockwise 2-D rotation.
        for theta in (-1.0, 0.3, 2.5):
            R3 = axis_angle_rotation((0, 0, 1.0), theta)
            assert np.abs(R3[:2, :2] - rotation_2d(theta)).max() < 1e-15

    def test_rejects_non_unit_axis(self):
        with pytest.raises(NonUnitAxisError):
            axis_angle_rotation((1.0, 1.0, 0.0), 0.5)


class TestManipulateBasis:
    SCHED = RotationSchedule(delta1=0.5, delta2=2.0)

    def test_identity_on_boundary(self):
        g = ge(3.0, 4.0, value=1.0)
        E = basis_2d(g)
        out = manipulate_basis(E, np.array([1.0, 0.3]), g, self.SCHED, 1)
        assert np.abs(out - E).max() < 1e-15

    def test_headon_quarter_turn_2d(self):
        g = ge(-1.0, 0.0, value=4.0)
        E = basis_2d(g)
        out = manipulate_basis(E, np.array([2.0, 0.0]), g, self.SCHED, 1)
        expected = rotate_basis_2d(E, math.pi / 4)
        assert np.abs(out - expected).max() < 1e-12

    def test_aligned_field_no_rotation(self):
        g = ge(1.0, 1.0, value=7.0)
        E = basis_2d(g)
        out = manipulate_basis(E, 5.0 * E[:, 0], g, self.SCHED, -1)
        assert np.abs(out - E).max() < 1e-12

    def test_3d_rotation_about_e3_fixes_e3(self):
        g = ge(-1.0, 0.2, 0.1, value=4.0)
        E = basis_3d(g)
        sched = RotationSchedule(delta1=0.5, delta2=2.0, axes=(3,))
        out = manipulate_basis(E, np.array([1.0, 0.0, 0.0]), g, sched, 1)
        assert np.abs(out[:, 2] - E[:, 2]).max() < 1e-15
        assert_orthonormal(out)

    def test_zero_field_rejected(self):
        g = ge(1.0, 0.0)
        with pytest.raises(ZeroFieldError):
            manipulate_basis(basis_2d(g), np.zeros(2), g, self.SCHED, 1)

    def test_near_boundary_manipulation_is_small(self, rng):
        # The manipulated frame converges to the original as gamma drops to 1.
        for gamma in (1.0 + 1e-8, 1.001, 1.1, 2.0, 10.0):
            grad = rng.normal(size=2)
            g = ge(*grad, value=gamma)
            E = basis_2d(g)
            f = rng.normal(size=2)
            out = manipulate_basis(E, f, g, self.SCHED, 1)
            bound = 0.5 * math.pi * (1.0 - gamma ** (-0.5)) * 2.0
            assert np.abs(out - E).max() <= bound + 1e-12


class TestRotationSchedule:
    def test_rejects_bad_delta1(self):
        with pytest.raises(DomainError):
            RotationSchedule(delta1=0.0)
        with pytest.raises(DomainError):
            RotationSchedule(delta1=1.5)

    def test_rejects_bad_delta2(self):
        with pytest.raises(DomainError):
            RotationSchedule(delta2=0.5)

    def test_rejects_bad_axis(self):
        with pytest.raises(DomainError):
            RotationSchedule(axes=(1,))


def test_angle_between_clamps_roundoff():
    v = np.array([1.0, 1.0]) / math.sqrt(2)
    assert angle_between(1e3 * v, v) == pytest.approx(0.0, abs=1e-7)
    assert angle_between(-v, v) == pytest.approx(math.pi)
