import numpy as np
import pytest
from numpy.testing import assert_allclose

from hdunif import (DimensionMismatch, DomainError, ZeroVector, apply_rotation,
                    normalize_to_sphere, random_rotation, rayleigh_standardized,
                    sample_uniform_sphere, spherical_sample,
                    tangent_normal_decompose, unit_vector)

from conftest import axis


class TestNormalize:
    def test_scaling(self):
        assert_allclose(normalize_to_sphere([3.0, 4.0]), [0.6, 0.8], atol=1e-15)

    def test_axis_case(self):
        assert_allclose(normalize_to_sphere([0.0, 0.0, 5.0]), [0.0, 0.0, 1.0], atol=1e-15)

    def test_equal_components(self):
        assert_allclose(normalize_to_sphere([1.0, 1.0, 1.0, 1.0]), [0.5] * 4, atol=1e-15)

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            normalize_to_sphere([0.0, 0.0])

    def test_idempotent(self, rng):
        for _ in range(25):
            x = normalize_to_sphere(rng.standard_normal(6))
            assert np.max(np.abs(normalize_to_sphere(x) - x)) <= 1e-14


class TestUnitVector:
    def test_accepts_near_unit(self):
        v = unit_vector([1.0 + 5e-9, 0.0])
        assert_allclose(np.linalg.norm(v), 1.0, atol=1e-15)

    def test_rejects_far_from_unit(self):
        with pytest.raises(DomainError):
            unit_vector([1.0, 1.0])

    def test_rejects_dimension_one(self):
        with pytest.raises(DomainError):
            unit_vector([1.0])


class TestSphericalSample:
    def test_validates_rows(self, rng):
        x = sample_uniform_sphere(10, 4, rng)
        out = spherical_sample(x)
        assert_allclose(np.linalg.norm(out, axis=1), 1.0, atol=1e-14)

    def test_rejects_nonunit_rows(self):
        with pytest.raises(DomainError):
            spherical_sample(np.ones((3, 3)))


class TestTangentNormal:
    def test_x_equals_theta(self):
        tn = tangent_normal_decompose(axis(3), axis(3))
        assert tn.u == 1.0 and tn.v == 0.0
        assert_allclose(tn.s, np.zeros(3))

    def test_orthogonal(self):
        tn = tangent_normal_decompose(axis(3, 1), axis(3))
        assert tn.u == 0.0 and tn.v == 1.0
        assert_allclose(tn.s, axis(3, 1))

    def test_reconstruction_example(self):
        x = np.array([0.6, 0.8, 0.0])
        tn = tangent_normal_decompose(x, axis(3))
        assert_allclose([tn.u, tn.v], [0.6, 0.8], atol=1e-15)
        assert_allclose(tn.s, axis(3, 1), atol=1e-15)
        assert np.linalg.norm(tn.u * axis(3) + tn.v * tn.s - x) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            tangent_normal_decompose(axis(3), axis(4))

    def test_reconstruction_property(self, rng):
        for _ in range(120):
            p = int(rng.integers(2, 12))
            x = normalize_to_sphere(rng.standard_normal(p))
            theta = normalize_to_sphere(rng.standard_normal(p))
            tn = tangent_normal_decompose(x, theta)
            assert np.linalg.norm(tn.u * theta + tn.v * tn.s - x) <= 1e-12
            if tn.v > 0:
                assert abs(tn.s @ theta) <= 1e-12
            assert abs(tn.u ** 2 + tn.v ** 2 - 1.0) <= 1e-12


class TestRotations:
    def test_orthogonal_and_special(self, rng):
        for p in [2, 3, 17]:
            q = random_rotation(p, rng)
            assert np.max(np.abs(q.T @ q - np.eye(p))) <= 1e-10
            assert_allclose(np.linalg.det(q), 1.0, atol=1e-10)

    def test_preserves_norm(self, rng):
        q = random_rotation(5, rng)
        assert_allclose(np.linalg.norm(q @ axis(5)), 1.0, atol=1e-12)

    def test_distinct_seeds(self):
        q1 = random_rotation(4, np.random.default_rng(1))
        q2 = random_rotation(4, np.random.default_rng(2))
        assert np.linalg.norm(q1 - q2) > 0

    def test_identity_application(self, rng):
        x = sample_uniform_sphere(8, 5, rng)
        assert_allclose(apply_rotation(x, np.eye(5)), x)

    def test_negation(self, rng):
        x = sample_uniform_sphere(6, 2, rng)
        assert_allclose(apply_rotation(x, -np.eye(2)), -x)

    def test_rows_stay_unit(self, rng):
        x = sample_uniform_sphere(30, 7, rng)
        q = random_rotation(7, rng)
        assert np.max(np.abs(np.linalg.norm(apply_rotation(x, q), axis=1) - 1.0)) <= 1e-12

    def test_dimension_mismatch(self, rng):
        with pytest.raises(DimensionMismatch):
            apply_rotation(sample_uniform_sphere(4, 3, rng), np.eye(5))

    def test_rayleigh_invariance(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 30))
            p = int(rng.integers(2, 15))
            x = sample_uniform_sphere(n, p, rng)
            q = random_rotation(p, rng)
            assert abs(rayleigh_standardized(apply_rotation(x, q))
                       - rayleigh_standardized(x)) <= 1e-12
