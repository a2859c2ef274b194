"""Operators relative to a weight: classification, adjoints and lifts.

An operator T is *A-bounded* when it maps the null space of the weight
into itself (residual ``||A^(1/2) T (I - P)||`` vanishes) and
*A-adjointable* when the range of ``T* A`` stays inside the range of A
(residual ``||(I - P) T* A||`` vanishes).  In finite dimensions the two
classes coincide because the range of A is closed; both residuals are
kept so the agreement can be asserted.

The *lift* of an A-bounded T is the rank x rank matrix representing its
compression to range coordinates, rescaled so the weighted geometry
becomes the ordinary Euclidean one:

    lift(T) = L^(1/2) Qr* T Qr L^(-1/2),

with Qr the retained eigenvectors and L the retained eigenvalues.  Its
spectral norm equals the A-operator seminorm of T and its numerical
radius equals the weighted numerical radius, which is what every gauge
downstream computes on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NotAAdjointable,
    NotABounded,
    ZeroRank,
)
from .weightspace import Weight, _hermitize, _readonly

DEFAULT_CLASS_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SemiOperator:
    """A square matrix bound to a weight, with classification flags.

    ``class_residuals`` holds the two membership residuals
    (boundedness, adjointability) evaluated at construction.
    """

    mat: np.ndarray
    context: Weight
    is_a_bounded: bool
    is_a_adjointable: bool
    class_residuals: tuple[float, float]
    class_tol: float


@dataclass(frozen=True, eq=False)
class TildeLift:
    """The rank x rank matrix acting on range coordinates."""

    mat: np.ndarray
    context: Weight


def wrap(t, w: Weight, class_tol: float = DEFAULT_CLASS_TOL) -> SemiOperator:
    """Bind a matrix to a weight and classify it.

    Raises:
        DimensionMismatch
    """
    m = np.asarray(t, dtype=complex)
    if m.shape != (w.n, w.n):
        raise DimensionMismatch(f"operator shape {m.shape} vs weight dimension {w.n}")
    comp = np.eye(w.n) - w.proj
    tnorm = float(np.linalg.norm(m, 2))
    res_bounded = float(np.linalg.norm(w.half @ m @ comp, 2))
    res_adjoint = float(np.linalg.norm(comp @ m.conj().T @ w.mat, 2))
    bounded = res_bounded <= class_tol * np.sqrt(w.lam_max) * tnorm
    adjointable = res_adjoint <= class_tol * w.lam_max * tnorm
    return SemiOperator(
        mat=_readonly(m),
        context=w,
        is_a_bounded=bounded,
        is_a_adjointable=adjointable,
        class_residuals=(res_bounded, res_adjoint),
        class_tol=class_tol,
    )


def require_bounded(op: SemiOperator) -> SemiOperator:
    if not op.is_a_bounded:
        raise NotABounded(
            f"operator leaks the weight null space (residual {op.class_residuals[0]:.3e})"
        )
    return op


def require_adjointable(op: SemiOperator) -> SemiOperator:
    if not op.is_a_adjointable:
        raise NotAAdjointable(
            f"range of T*A leaves the weight range (residual {op.class_residuals[1]:.3e})"
        )
    return op


def a_adjoint(op: SemiOperator) -> SemiOperator:
    """Distinguished adjoint ``pinv(A) T* A``.

    Applying it twice compresses to the range: the double adjoint equals
    ``P T P``.

    Raises:
        NotAAdjointable
    """
    require_adjointable(op)
    w = op.context
    return wrap(w.pinv @ op.mat.conj().T @ w.mat, w, op.class_tol)


def tilde(op: SemiOperator) -> TildeLift:
    """Lift to range coordinates.

    Raises:
        NotABounded, ZeroRank
    """
    require_bounded(op)
    w = op.context
    if w.rank == 0:
        raise ZeroRank("weight has rank zero; no lift exists")
    qr = w.range_vecs
    s = np.sqrt(w.range_vals)
    m = (s[:, None] * (qr.conj().T @ op.mat @ qr)) / s[None, :]
    return TildeLift(mat=_readonly(m), context=w)


def operator_from_lift(w: Weight, m) -> SemiOperator:
    """Pull a rank x rank matrix back to the range-supported operator with that lift."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (w.rank, w.rank):
        raise DimensionMismatch(f"lift shape {m.shape} vs weight rank {w.rank}")
    qr = w.range_vecs
    s = np.sqrt(w.range_vals)
    t = (qr / s[None, :]) @ m @ (s[:, None] * qr.conj().T)
    return wrap(t, w)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via phase-fixed QR of a complex Gaussian."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))[None, :]


def a_unitary_from_unitary(w: Weight, v) -> SemiOperator:
    """Range-supported operator whose lift is the given unitary.

    Such operators preserve the weight (``U* A U = A``) and satisfy both
    defining identities of weighted unitarity.
    """
    v = np.asarray(v, dtype=complex)
    if v.shape != (w.rank, w.rank):
        raise DimensionMismatch(f"unitary shape {v.shape} vs weight rank {w.rank}")
    dev = np.linalg.norm(v.conj().T @ v - np.eye(w.rank), 2)
    if dev > 1e-10 * max(1.0, float(np.linalg.norm(v, 2)) ** 2):
        raise ValueError(f"matrix is not unitary (deviation {dev:.3e})")
    return operator_from_lift(w, v)


def is_a_selfadjoint(op: SemiOperator, tol: float = 1e-10) -> bool:
    """Whether ``A T`` is self-adjoint, i.e. ``A T = T* A`` within tolerance."""
    w = op.context
    at = w.mat @ op.mat
    scale = w.lam_max * float(np.linalg.norm(op.mat, 2))
    return float(np.linalg.norm(at - at.conj().T, 2)) <= tol * scale


def is_a_positive(op: SemiOperator, tol: float = 1e-10) -> bool:
    """Whether ``A T`` is positive semi-definite within tolerance."""
    w = op.context
    at = w.mat @ op.mat
    scale = w.lam_max * float(np.linalg.norm(op.mat, 2))
    if float(np.linalg.norm(at - at.conj().T, 2)) > tol * scale:
        return False
    lam_min = float(np.linalg.eigvalsh(_hermitize(at))[0])
    return lam_min >= -tol * scale


def is_a_unitary(op: SemiOperator, tol: float = 1e-9) -> bool:
    """Check both defining identities of weighted unitarity.

    ``adj(U) U = P`` and ``adj(adj(U)) adj(U) = P`` where P projects
    onto the range of the weight.

    Raises:
        NotAAdjointable
    """
    require_adjointable(op)
    w = op.context
    us = a_adjoint(op)
    uss = a_adjoint(us)
    scale = max(1.0, float(np.linalg.norm(us.mat @ op.mat, 2)))
    first = float(np.linalg.norm(us.mat @ op.mat - w.proj, 2))
    second = float(np.linalg.norm(uss.mat @ us.mat - w.proj, 2))
    return first <= tol * scale and second <= tol * scale
