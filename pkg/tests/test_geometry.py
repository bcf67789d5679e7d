import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modnav import ObstacleSpec, Region, gamma_eval, region_classify, surface_outline
from modnav.errors import DimensionError, DomainError


def finite_diff_gradient(obs, point, h_scale=1e-6):
    point = np.asarray(point, dtype=float)
    out = np.empty(point.size)
    for i in range(point.size):
        h = h_scale * max(1.0, abs(point[i]))
        hi, lo = point.copy(), point.copy()
        hi[i] += h
        lo[i] -= h
        out[i] = (gamma_eval(obs, hi).value - gamma_eval(obs, lo).value) / (2 * h)
    return out


class TestGammaEval:
    def test_boundary_point(self, disc):
        assert gamma_eval(disc, (-9.0, 3.6)).value == pytest.approx(1.0, abs=1e-12)

    def test_outside_value_and_gradient(self, disc):
        g = gamma_eval(disc, (-18.0, 0.0))
        assert g.value == pytest.approx(6.25, abs=1e-12)
        assert g.gradient == pytest.approx([-18.0 / 12.96, 0.0], abs=1e-12)
        fd = finite_diff_gradient(disc, (-18.0, 0.0))
        assert np.abs(fd - g.gradient).max() < 1e-6

    def test_center_is_global_minimum(self, disc):
        g = gamma_eval(disc, (-9.0, 0.0))
        assert g.value == 0.0
        assert np.all(g.gradient == 0.0)
        assert g.gradient_norm == 0.0

    def test_gradient_norm_matches_gradient(self, disc):
        g = gamma_eval(disc, (1.0, 2.0))
        assert g.gradient_norm == pytest.approx(np.linalg.norm(g.gradient), rel=1e-15)

    def test_dimension_mismatch(self, disc):
        with pytest.raises(DimensionError):
            gamma_eval(disc, (1.0, 2.0, 3.0))

    def test_non_finite_point(self, disc):
        with pytest.raises(DomainError):
            gamma_eval(disc, (np.nan, 0.0))

    def test_scale_consistency(self, disc):
        near = gamma_eval(disc, (-9.0 + 1.3, 0.7)).value
        far = gamma_eval(disc, (-9.0 + 2.6, 1.4)).value
        assert far == pytest.approx(4.0 * near, rel=1e-12)


@st.composite
def obstacle_and_offset(draw):
    dim = draw(st.integers(2, 3))
    exps = tuple(draw(st.sampled_from([1, 2, 3, 8])) for _ in range(dim))
    radii = tuple(draw(st.floats(0.5, 4.0)) for _ in range(dim))
    center = tuple(draw(st.floats(-5.0, 5.0)) for _ in range(dim))
    offset = tuple(
        draw(st.floats(0.2, 5.0)) * draw(st.sampled_from([-1.0, 1.0]))
        for _ in range(dim)
    )
    return ObstacleSpec.from_radii(center, radii, exps), offset


class TestGradientProperties:
    @settings(deadline=None, max_examples=150)
    @given(obstacle_and_offset())
    def test_analytic_matches_finite_difference(self, case):
        obs, offset = case
        point = np.asarray(obs.center) + np.asarray(offset)
        analytic = gamma_eval(obs, point).gradient
        fd = finite_diff_gradient(obs, point)
        scale = max(np.abs(analytic).max(), 1e-12)
        assert np.abs(fd - analytic).max() / scale < 1e-6

    @settings(deadline=None, max_examples=100)
    @given(obstacle_and_offset(), st.floats(1.05, 5.0))
    def test_radially_monotone(self, case, factor):
        obs, offset = case
        direction = np.asarray(offset) / np.linalg.norm(offset)
        c = np.asarray(obs.center)
        near = gamma_eval(obs, c + direction).value
        far = gamma_eval(obs, c + factor * direction).value
        assert far > near


class TestRegionClassify:
    def test_boundary(self, disc):
        assert region_classify(gamma_eval(disc, (-9.0, 3.6))) is Region.BOUNDARY

    def test_outside(self, disc):
        assert region_classify(gamma_eval(disc, (-18.0, 0.0))) is Region.OUTSIDE

    def test_inside(self, disc):
        assert region_classify(gamma_eval(disc, (-9.0, 2.0))) is Region.INSIDE

    def test_tolerance_band(self, disc):
        g = gamma_eval(disc, (-9.0, 3.6))
        assert region_classify(g, boundary_tol=1e-3) is Region.BOUNDARY

    def test_invalid_tolerance(self, disc):
        with pytest.raises(DomainError):
            region_classify(gamma_eval(disc, (0.0, 0.0)), boundary_tol=0.0)


class TestObstacleSpec:
    def test_rejects_nonpositive_scale(self):
        with pytest.raises(DomainError, match="positive"):
            ObstacleSpec(center=(0, 0), axis_scales=(0.0, 1.0), exponents=(1, 1))

    def test_rejects_zero_exponent(self):
        with pytest.raises(DomainError):
            ObstacleSpec(center=(0, 0), axis_scales=(1.0, 1.0), exponents=(0, 1))

    def test_rejects_mismatched_lengths(self):
        with pytest.raises(DimensionError):
            ObstacleSpec(center=(0, 0, 0), axis_scales=(1.0, 1.0), exponents=(1, 1))

    def test_rejects_unsupported_dimension(self):
        with pytest.raises(DimensionError):
            ObstacleSpec(center=(0.0,), axis_scales=(1.0,), exponents=(1,))

    def test_from_radii(self):
        obs = ObstacleSpec.from_radii((0.0, 0.0), (3.6, 3.6), (1, 1))
        assert obs.axis_scales == pytest.approx((12.96, 12.96))
        obs8 = ObstacleSpec.from_radii((0.0, 0.0), (3.6, 3.6), (8, 8))
        assert obs8.axis_scales[0] == pytest.approx(3.6**16)
        assert obs8.radii == pytest.approx((3.6, 3.6))


def test_surface_outline_lies_on_level_set(disc):
    pts = surface_outline(disc, samples=64)
    vals = [gamma_eval(disc, p).value for p in pts]
    assert np.abs(np.asarray(vals) - 1.0).max() < 1e-9
