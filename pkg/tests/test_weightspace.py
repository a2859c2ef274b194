import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from semiradius import (
    ANullVector,
    ContextMismatch,
    DimensionMismatch,
    NotHermitian,
    NotPSD,
    ZeroWeight,
    a_inner,
    a_norm,
    a_normalize,
    build_weight,
)


class TestBuildWeight:
    def test_identity(self):
        w = build_weight(np.eye(2))
        assert w.rank == 2
        assert np.allclose(w.proj, np.eye(2))
        assert np.allclose(w.pinv, np.eye(2))

    def test_rank_one_projector(self):
        w = build_weight(np.diag([1.0, 0.0]))
        assert w.rank == 1
        assert np.allclose(w.pinv, np.diag([1.0, 0.0]))
        assert np.allclose(w.proj, np.diag([1.0, 0.0]))

    def test_pinv_matches_inverse_oracle(self):
        a = np.array([[2.0, 1.0], [1.0, 2.0]])
        w = build_weight(a)
        assert w.rank == 2
        # brute-force inverse oracle
        assert np.allclose(w.pinv, np.linalg.inv(a), atol=1e-12)
        assert np.allclose(w.pinv, np.array([[2.0, -1.0], [-1.0, 2.0]]) / 3.0, atol=1e-12)

    def test_reconstruction_and_cached_identities(self, rng):
        g = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
        a = g @ g.conj().T
        w = build_weight(a)
        scale = w.lam_max
        assert np.allclose(w.eigvecs @ np.diag(w.eigvals) @ w.eigvecs.conj().T, a,
                           atol=1e-12 * scale)
        assert np.allclose(w.proj @ w.proj, w.proj, atol=1e-10 * scale)
        assert np.allclose(w.proj, w.proj.conj().T, atol=1e-10 * scale)
        assert np.allclose(a @ w.pinv @ a, a, atol=1e-10 * scale)
        assert np.allclose(w.half @ w.half, a, atol=1e-10 * scale)
        assert np.allclose(w.pinv @ a, w.proj, atol=1e-10 * scale)
        assert np.allclose(a @ w.pinv, w.proj, atol=1e-10 * scale)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            build_weight(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_rejects_indefinite(self):
        with pytest.raises(NotPSD):
            build_weight(np.diag([1.0, -1.0]))

    def test_rejects_zero(self):
        with pytest.raises(ZeroWeight):
            build_weight(np.zeros((2, 2)))

    def test_rejects_nonsquare(self):
        with pytest.raises(DimensionMismatch):
            build_weight(np.ones((2, 3)))

    def test_negative_roundoff_clamped(self):
        a = np.diag([1.0, -1e-14])
        w = build_weight(a)
        assert w.rank == 1
        assert w.eigvals[-1] == 0.0

    def test_rank_tol_override(self):
        w = build_weight(np.diag([1.0, 1e-6]), rank_tol=1e-3)
        assert w.rank == 1
        w2 = build_weight(np.diag([1.0, 1e-6]))
        assert w2.rank == 2


class TestVectorGeometry:
    def test_inner_kernel_component_invisible(self, proj10):
        x = proj10.vector([1, 5])
        y = proj10.vector([1, 7])
        assert a_inner(x, y) == pytest.approx(1.0)

    def test_inner_orthonormal(self, eye2):
        assert a_inner(eye2.vector([1, 0]), eye2.vector([0, 1])) == 0.0

    def test_inner_direct_evaluation(self):
        w = build_weight([[2.0, 1.0], [1.0, 2.0]])
        assert a_inner(w.vector([1, 0]), w.vector([0, 1])) == pytest.approx(1.0)

    def test_inner_context_mismatch(self, eye2, proj10):
        with pytest.raises(ContextMismatch):
            a_inner(eye2.vector([1, 0]), proj10.vector([1, 0]))

    def test_norm_kernel_vector(self, proj10):
        assert a_norm(proj10.vector([0, 9])) == 0.0

    def test_norm_euclidean(self, eye2):
        assert a_norm(eye2.vector([3, 4])) == pytest.approx(5.0)

    def test_norm_direct(self):
        w = build_weight(np.diag([4.0, 1.0]))
        assert a_norm(w.vector([1, 1])) == pytest.approx(np.sqrt(5.0))

    def test_norm_equals_half_image_norm(self, rng):
        g = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
        w = build_weight(g @ g.conj().T)
        x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        assert a_norm(w.vector(x)) == pytest.approx(
            np.linalg.norm(w.half @ x), abs=1e-10 * w.lam_max
        )

    def test_normalize_examples(self, eye2, proj10):
        assert np.allclose(a_normalize(eye2.vector([2, 0])).entries, [1, 0])
        assert np.allclose(a_normalize(proj10.vector([2, 7])).entries, [1, 3.5])
        w = build_weight(np.diag([4.0, 0.0]))
        assert np.allclose(a_normalize(w.vector([1, 0])).entries, [0.5, 0])

    def test_normalize_null_vector(self, proj10):
        with pytest.raises(ANullVector):
            a_normalize(proj10.vector([0, 1]))
        with pytest.raises(ANullVector):
            a_normalize(proj10.vector([0, 0]))

    def test_null_cone_is_projector_kernel(self, rng):
        g = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
        w = build_weight(g @ g.conj().T)
        for _ in range(20):
            x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            null = np.linalg.norm(w.proj @ x) <= 1e-8
            assert (a_norm(w.vector(x)) <= 1e-8 * np.sqrt(w.lam_max)) == null
        # an exact kernel vector
        kernel = (np.eye(4) - w.proj) @ x
        assert a_norm(w.vector(kernel)) <= 1e-7 * np.linalg.norm(kernel + 1e-30)

    def test_vector_dimension_check(self, eye2):
        with pytest.raises(DimensionMismatch):
            eye2.vector([1, 2, 3])


_entry = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


@st.composite
def psd_with_vectors(draw):
    n = draw(st.integers(2, 4))
    rank = draw(st.integers(1, n))
    gr = draw(arrays(np.float64, (n, rank), elements=_entry))
    gi = draw(arrays(np.float64, (n, rank), elements=_entry))
    xr = draw(arrays(np.float64, (n,), elements=_entry))
    xi = draw(arrays(np.float64, (n,), elements=_entry))
    yr = draw(arrays(np.float64, (n,), elements=_entry))
    yi = draw(arrays(np.float64, (n,), elements=_entry))
    g = gr + 1j * gi
    a = g @ g.conj().T
    if np.linalg.norm(a, 2) < 1e-6:
        a = a + np.eye(n)
    return a, xr + 1j * xi, yr + 1j * yi


@settings(max_examples=60, deadline=None)
@given(psd_with_vectors())
def test_inner_conjugate_symmetry_and_cauchy_schwarz(data):
    a, xv, yv = data
    w = build_weight(a)
    x, y = w.vector(xv), w.vector(yv)
    assert a_inner(x, y) == pytest.approx(np.conj(a_inner(y, x)), abs=1e-9 * w.lam_max)
    lhs = abs(a_inner(x, y))
    rhs = a_norm(x) * a_norm(y)
    assert lhs <= rhs + 1e-10 * w.lam_max * max(1.0, np.linalg.norm(xv) * np.linalg.norm(yv))


@settings(max_examples=60, deadline=None)
@given(psd_with_vectors())
def test_self_inner_is_real_nonnegative(data):
    a, xv, _ = data
    w = build_weight(a)
    val = a_inner(w.vector(xv), w.vector(xv))
    assert abs(val.imag) <= 1e-12 * w.lam_max * max(1.0, np.linalg.norm(xv) ** 2)
    assert val.real >= -1e-12 * w.lam_max * max(1.0, np.linalg.norm(xv) ** 2)
