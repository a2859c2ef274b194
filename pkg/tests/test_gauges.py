import numpy as np
import pytest
from matplotlib.path import Path as MplPath

from semiradius import (
    NotABounded,
    a_adjoint,
    a_crawford,
    a_numerical_radius,
    a_opnorm,
    a_spectral_radius,
    build_weight,
    is_a_normaloid,
    numerical_range_polygon,
    tilde,
    wrap,
)
from semiradius.gauges import (
    SweepConfig,
    lambda_max_hermitian_fast,
    matrix_opnorm,
    matrix_radius,
)

from conftest import random_instance
from oracles import brute_force_omega, dense_sweep_omega


class TestOpnorm:
    def test_identity(self):
        for seed in range(4):
            w, _ = random_instance(seed, 3)
            assert a_opnorm(wrap(np.eye(3), w)) == pytest.approx(1.0, abs=1e-12)

    def test_nonzero_matrix_zero_seminorm(self, proj10):
        assert a_opnorm(wrap([[0, 0], [1, 0]], proj10)) == 0.0

    def test_nilpotent_identity_weight(self, eye2):
        assert a_opnorm(wrap([[0, 1], [0, 0]], eye2)) == pytest.approx(1.0)

    def test_refuses_leak(self, proj10):
        with pytest.raises(NotABounded):
            a_opnorm(wrap([[0, 1], [0, 0]], proj10))


class TestRadius:
    def test_nilpotent_is_half_norm(self, eye2):
        omega, _ = a_numerical_radius(wrap([[0, 1], [0, 0]], eye2))
        assert omega == pytest.approx(0.5, abs=1e-9)

    def test_identity(self):
        w, _ = random_instance(2, 3)
        omega, _ = a_numerical_radius(wrap(np.eye(3), w))
        assert omega == pytest.approx(1.0, abs=1e-9)

    def test_jordan_block(self, eye2):
        # disk of radius 1/2 about 1: radius = 1.5, verified by the
        # brute-force quadratic form oracle
        op = wrap([[1, 1], [0, 1]], eye2)
        omega, _ = a_numerical_radius(op)
        assert omega == pytest.approx(1.5, abs=1e-9)
        oracle = brute_force_omega(np.array([[1.0, 1], [0, 1]]), n_samples=20000, seed=3)
        assert omega == pytest.approx(oracle, abs=1e-6)

    def test_error_bound_reported(self, eye2):
        omega, prof = a_numerical_radius(wrap([[0, 1], [0, 0]], eye2))
        meta = prof.sweep_meta
        assert meta["error_bound"] <= meta["norm_bound"] * meta["refine_tol"] ** 2 / 8 + 1e-30
        assert meta["grid"] == 720

    def test_matches_independent_dense_sweep(self):
        for seed in range(6):
            w, op = random_instance(seed, 3)
            omega, _ = a_numerical_radius(op)
            assert omega == pytest.approx(dense_sweep_omega(tilde(op).mat), abs=1e-10)


class TestCrawford:
    def test_identity_distance_one(self, eye2):
        assert a_crawford(wrap(np.eye(2), eye2)) == pytest.approx(1.0, abs=1e-9)

    def test_symmetric_segment_contains_origin(self, eye2):
        assert a_crawford(wrap(np.diag([1.0, -1.0]), eye2)) == pytest.approx(0.0, abs=1e-9)

    def test_shifted_segment(self, eye2):
        assert a_crawford(wrap(np.diag([2.0, 3.0]), eye2)) == pytest.approx(2.0, abs=1e-9)

    def test_zero_iff_origin_inside_polygon(self):
        for seed in range(8):
            w, op = random_instance(seed, 3)
            crawford = a_crawford(op)
            prof = numerical_range_polygon(op, 360)
            pts = np.stack([prof.polygon.real, prof.polygon.imag], axis=1)
            inside = MplPath(pts).contains_point((0.0, 0.0), radius=1e-7)
            if crawford > 1e-7:
                assert not inside
            else:
                assert MplPath(pts).contains_point((0.0, 0.0), radius=-1e-6) or inside


class TestSpectralRadius:
    def test_nilpotent(self, eye2):
        assert a_spectral_radius(wrap([[0, 1], [0, 0]], eye2)) == 0.0

    def test_diagonal(self, eye2):
        assert a_spectral_radius(wrap(np.diag([2.0, 1.0]), eye2)) == pytest.approx(2.0)

    def test_antidiagonal(self, eye2):
        assert a_spectral_radius(wrap([[0, 4], [1, 0]], eye2)) == pytest.approx(2.0)

    def test_bounded_by_radius(self):
        for seed in range(10):
            w, op = random_instance(seed, 4)
            omega, _ = a_numerical_radius(op)
            assert a_spectral_radius(op) <= omega + 1e-8


class TestNormaloid:
    def test_hermitian_is_normaloid(self, eye2):
        assert is_a_normaloid(wrap([[1.0, 2.0], [2.0, -1.0]], eye2))

    def test_nilpotent_is_not(self, eye2):
        assert not is_a_normaloid(wrap([[0, 1], [0, 0]], eye2))

    def test_identity_is(self, eye3):
        assert is_a_normaloid(wrap(np.eye(3), eye3))


class TestPolygon:
    def test_segment_endpoints_recovered(self, eye2):
        prof = numerical_range_polygon(wrap(np.diag([1j, -1j]), eye2), 64)
        assert np.max(np.abs(prof.polygon - 1j)) >= 0  # sanity: complex points
        assert np.isclose(np.max(prof.polygon.imag), 1.0, atol=1e-9)
        assert np.isclose(np.min(prof.polygon.imag), -1.0, atol=1e-9)
        assert np.max(np.abs(prof.polygon.real)) <= 1e-9

    def test_nilpotent_disk_vertices(self, eye2):
        prof = numerical_range_polygon(wrap([[0, 1], [0, 0]], eye2), 128)
        assert np.allclose(np.abs(prof.polygon), 0.5, atol=1e-6)

    def test_vertices_lie_inside_radius(self):
        for seed in range(6):
            w, op = random_instance(seed, 4)
            prof = numerical_range_polygon(op, 240)
            assert np.max(np.abs(prof.polygon)) <= prof.omega + 1e-8
            assert np.max(np.abs(prof.polygon)) >= prof.omega - 1e-3


class TestSeminormAxioms:
    def test_subadditive_and_homogeneous(self):
        rng = np.random.default_rng(0)
        for seed in range(6):
            w, op1 = random_instance(seed, 4)
            m1 = tilde(op1).mat
            m2 = rng.standard_normal(m1.shape) + 1j * rng.standard_normal(m1.shape)
            c = complex(rng.standard_normal(), rng.standard_normal())
            assert matrix_radius(m1 + m2) <= matrix_radius(m1) + matrix_radius(m2) + 1e-9
            assert matrix_radius(c * m1) == pytest.approx(abs(c) * matrix_radius(m1), abs=1e-9)

    def test_equivalence_band(self):
        for seed in range(12):
            w, op = random_instance(seed, 4)
            omega, _ = a_numerical_radius(op)
            nrm = a_opnorm(op)
            assert 0.5 * nrm - 1e-9 <= omega <= nrm + 1e-9

    def test_adjoint_symmetry(self):
        for seed in range(8):
            w, op = random_instance(seed, 4)
            adj = a_adjoint(op)
            assert a_numerical_radius(adj)[0] == pytest.approx(
                a_numerical_radius(op)[0], abs=1e-9
            )
            assert a_opnorm(adj) == pytest.approx(a_opnorm(op), abs=1e-9)


class TestFastEigenvaluePath:
    def test_matches_lapack(self, rng):
        for r in (1, 2, 3, 4):
            m = rng.standard_normal((40, r, r)) + 1j * rng.standard_normal((40, r, r))
            h = 0.5 * (m + m.conj().transpose(0, 2, 1))
            fast = lambda_max_hermitian_fast(h)
            exact = np.linalg.eigvalsh(h)[..., -1]
            assert np.allclose(fast, exact, atol=1e-9)

    def test_scalar_and_multiple_of_identity(self):
        h = np.array([[[2.0 + 0j]]])
        assert lambda_max_hermitian_fast(h)[0] == pytest.approx(2.0)
        h3 = np.broadcast_to(1.5 * np.eye(3, dtype=complex), (4, 3, 3))
        assert np.allclose(lambda_max_hermitian_fast(np.ascontiguousarray(h3)), 1.5)


def test_zero_operator_gauges(proj10):
    op = wrap(np.zeros((2, 2)), proj10)
    assert a_opnorm(op) == 0.0
    omega, prof = a_numerical_radius(op)
    assert omega == pytest.approx(0.0, abs=1e-15)
    assert prof.crawford == 0.0
