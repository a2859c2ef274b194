"""Weights and the vector geometry they induce.

A weight is a Hermitian positive semi-definite matrix A.  It defines the
semi-inner product ``<x|y>_A = y* A x`` and the seminorm ``||x||_A``,
which vanishes exactly on the null space of A.  Everything downstream
(operator classification, lifts, gauges) reads the spectral data cached
here: eigendecomposition, numerical rank, pseudoinverse, principal
square root and range projector.  All derived matrices are computed
eagerly at construction so later operations are pure reads; instances
are immutable and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ANullVector,
    ContextMismatch,
    DimensionMismatch,
    NotHermitian,
    NotPSD,
    ZeroWeight,
)

# Round-off bands for accepting a candidate weight, relative to its 2-norm.
HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10

# Numerical rank threshold: factor * n * lambda_max * machine epsilon.
DEFAULT_RANK_TOL_FACTOR = 100.0


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def _hermitize(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2.0


@dataclass(frozen=True, eq=False)
class Weight:
    """A PSD weight with its cached spectral decomposition.

    Attributes:
        n: ambient dimension.
        mat: the n x n weight matrix.
        eigvecs: unitary matrix, columns ordered by descending eigenvalue.
        eigvals: nonnegative eigenvalues, descending.
        rank: numerical rank (eigenvalues above ``rank_tol``).
        rank_tol: threshold separating retained from discarded eigenvalues.
        half: principal square root of the weight.
        pinv: Moore-Penrose inverse.
        proj: orthogonal projector onto the range.
    """

    n: int
    mat: np.ndarray
    eigvecs: np.ndarray
    eigvals: np.ndarray
    rank: int
    rank_tol: float
    half: np.ndarray
    pinv: np.ndarray
    proj: np.ndarray

    @property
    def range_vecs(self) -> np.ndarray:
        """Orthonormal basis of the range (first ``rank`` eigenvectors)."""
        return self.eigvecs[:, : self.rank]

    @property
    def range_vals(self) -> np.ndarray:
        """Retained eigenvalues, descending."""
        return self.eigvals[: self.rank]

    @property
    def lam_max(self) -> float:
        return float(self.eigvals[0])

    def vector(self, entries) -> "AVector":
        return AVector(np.asarray(entries, dtype=complex), self)


@dataclass(frozen=True, eq=False)
class AVector:
    """A vector bound to the weight that measures it."""

    entries: np.ndarray
    context: Weight

    def __post_init__(self):
        entries = _readonly(np.asarray(self.entries, dtype=complex))
        object.__setattr__(self, "entries", entries)
        if entries.shape != (self.context.n,):
            raise DimensionMismatch(
                f"vector has shape {entries.shape}, weight dimension is {self.context.n}"
            )


def build_weight(
    m,
    rank_tol_factor: float = DEFAULT_RANK_TOL_FACTOR,
    rank_tol: float | None = None,
) -> Weight:
    """Validate a candidate weight matrix and cache its spectral data.

    The candidate must be Hermitian within ``1e-10 * ||m||`` and have no
    eigenvalue below ``-1e-10 * ||m||``; round-off negatives are clamped
    to zero.  ``rank_tol`` defaults to
    ``rank_tol_factor * n * lambda_max * eps`` and can be overridden.

    Raises:
        NotHermitian, NotPSD, ZeroWeight, DimensionMismatch
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"weight must be square, got shape {a.shape}")
    n = a.shape[0]
    scale = float(np.linalg.norm(a, 2)) if n else 0.0
    if scale == 0.0:
        raise ZeroWeight("weight matrix is zero")
    if np.linalg.norm(a - a.conj().T, 2) > HERMITIAN_TOL * scale:
        raise NotHermitian("weight is not Hermitian within tolerance")

    vals, vecs = np.linalg.eigh(_hermitize(a))
    # stable descending order keeps the natural basis on tied eigenvalues
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    if vals[-1] < -PSD_TOL * scale:
        raise NotPSD(f"eigenvalue {vals[-1]:.3e} below -{PSD_TOL:.0e}*scale")
    vals = np.clip(vals, 0.0, None)

    if rank_tol is None:
        rank_tol = rank_tol_factor * n * vals[0] * np.finfo(float).eps
    rank = int(np.count_nonzero(vals > rank_tol))
    if rank == 0:
        raise ZeroWeight("weight has numerical rank zero")

    qr = vecs[:, :rank]
    vr = vals[:rank]
    # derived matrices use only the retained spectrum: a sub-threshold
    # eigenvalue would otherwise be amplified by the square root into a
    # spurious null-space component
    half = _hermitize(qr @ (np.sqrt(vr)[:, None] * qr.conj().T))
    pinv = _hermitize(qr @ ((1.0 / vr)[:, None] * qr.conj().T))
    proj = _hermitize(qr @ qr.conj().T)

    return Weight(
        n=n,
        mat=_readonly(a),
        eigvecs=_readonly(vecs),
        eigvals=_readonly(vals),
        rank=rank,
        rank_tol=float(rank_tol),
        half=_readonly(half),
        pinv=_readonly(pinv),
        proj=_readonly(proj),
    )


def same_context(x: AVector, y: AVector) -> Weight:
    if x.context is not y.context:
        raise ContextMismatch("vectors are bound to different weights")
    return x.context


def a_inner(x: AVector, y: AVector) -> complex:
    """Semi-inner product ``<x|y>_A = y* A x`` (conjugate-linear in y)."""
    w = same_context(x, y)
    return complex(np.vdot(y.entries, w.mat @ x.entries))


def a_norm(x: AVector) -> float:
    """Seminorm ``||x||_A = <x|x>_A^(1/2)``, clamped at zero."""
    w = x.context
    val = np.vdot(x.entries, w.mat @ x.entries).real
    return float(np.sqrt(max(val, 0.0)))


def a_normalize(x: AVector) -> AVector:
    """Rescale to unit seminorm.

    Raises:
        ANullVector: if x lies in the null cone of the seminorm.
    """
    nrm = a_norm(x)
    scale = np.sqrt(x.context.lam_max) * float(np.linalg.norm(x.entries))
    if nrm <= 1e-12 * scale or nrm == 0.0:
        raise ANullVector("vector has zero seminorm; cannot normalize")
    return AVector(x.entries / nrm, x.context)
