"""Scalar gauges of a weighted operator, computed on its lift.

The weighted numerical range of an A-bounded operator equals the
classical numerical range of its lift, which is convex.  Its support
function in the direction ``exp(-i theta)`` is

    h(theta) = lambda_max( (exp(i theta) M + exp(-i theta) M*) / 2 ),

so the weighted numerical radius is ``max_theta h`` and the weighted
Crawford number (distance from the origin to the range) is
``max(0, -min_theta h)``.  Both extrema are located on a coarse angular
grid and then polished by lock-step golden-section refinement; the
reported error bound is ``||M|| * dtheta^2 / 8`` for the final bracket
width ``dtheta``.

The operator seminorm is the largest singular value of the lift and the
weighted spectral radius is the largest eigenvalue modulus of the lift.
Everything here is a pure function of immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .semiop import SemiOperator, TildeLift, require_bounded, tilde

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - np.sqrt(5.0)) / 2.0

# Cap on the number of grid-local extrema polished per sweep; the global
# extremum always sits in one of the retained (largest) brackets.
_MAX_BRACKETS = 64


@dataclass(frozen=True)
class SweepConfig:
    """Angular sweep parameters.

    grid: number of coarse angles on [0, 2pi).
    refine_tol: golden-section bracket width target (radians).
    """

    grid: int = 720
    refine_tol: float = 1e-7


DEFAULT_SWEEP = SweepConfig()


@dataclass(frozen=True, eq=False)
class RangeProfile:
    """Sampled support function of a weighted numerical range.

    polygon holds boundary points (top-eigenvector expectation values),
    ordered by sweep angle; omega and crawford are the refined extrema.
    sweep_meta records grid size, refinement iterations and the error
    bound on the reported gauges.
    """

    thetas: np.ndarray
    support: np.ndarray
    omega: float
    crawford: float
    polygon: np.ndarray
    sweep_meta: dict


def _theta_grid(k: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(k) / k


def _herm_stack(m: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    ph = np.exp(1j * np.asarray(thetas, dtype=float))
    return 0.5 * (ph[:, None, None] * m + np.conj(ph)[:, None, None] * m.conj().T)


def matrix_support(m: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Support values h(theta) at the given angles (LAPACK precision)."""
    stack = _herm_stack(m, np.atleast_1d(thetas))
    return np.linalg.eigvalsh(stack)[..., -1]


def lambda_max_hermitian_fast(hs: np.ndarray) -> np.ndarray:
    """Largest eigenvalue of stacked Hermitian matrices.

    Closed forms for orders 1..3 (trigonometric method), LAPACK beyond.
    Accuracy can degrade to ~1e-10 relative near eigenvalue coalescence,
    so this is for coarse scans only; polished values go through
    ``matrix_support``.
    """
    r = hs.shape[-1]
    if r == 1:
        return hs[..., 0, 0].real
    if r == 2:
        a = hs[..., 0, 0].real
        c = hs[..., 1, 1].real
        b = hs[..., 0, 1]
        mid = 0.5 * (a + c)
        rad = np.sqrt((0.5 * (a - c)) ** 2 + (b * np.conj(b)).real)
        return mid + rad
    if r == 3:
        a = hs[..., 0, 0].real
        b = hs[..., 1, 1].real
        c = hs[..., 2, 2].real
        d = hs[..., 0, 1]
        f = hs[..., 0, 2]
        e = hs[..., 1, 2]
        q = (a + b + c) / 3.0
        aa, bb, cc = a - q, b - q, c - q
        p1 = (d * np.conj(d) + e * np.conj(e) + f * np.conj(f)).real
        p2 = aa * aa + bb * bb + cc * cc + 2.0 * p1
        p = np.sqrt(np.maximum(p2, 0.0) / 6.0)
        det = (
            aa * (bb * cc - (e * np.conj(e)).real)
            - (d * (np.conj(d) * cc - e * np.conj(f))).real
            + (f * (np.conj(d) * np.conj(e) - bb * np.conj(f))).real
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            rr = np.where(p > 0.0, det / np.maximum(p, 1e-300) ** 3 / 2.0, 0.0)
        rr = np.clip(rr, -1.0, 1.0)
        phi = np.arccos(rr) / 3.0
        return q + np.where(p > 0.0, 2.0 * p * np.cos(phi), 0.0)
    return np.linalg.eigvalsh(hs)[..., -1]


def matrix_support_fast(m: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Support values using the fast eigenvalue path; scan accuracy only."""
    return lambda_max_hermitian_fast(_herm_stack(m, np.atleast_1d(thetas)))


def _local_extrema(h: np.ndarray, find_max: bool) -> np.ndarray:
    g = h if find_max else -h
    mask = (g >= np.roll(g, 1)) & (g >= np.roll(g, -1))
    idx = np.nonzero(mask)[0]
    if len(idx) > _MAX_BRACKETS:
        order = np.argsort(-g[idx], kind="stable")
        idx = np.sort(idx[order[:_MAX_BRACKETS]])
    return idx


def golden_refine(
    f: Callable[[np.ndarray], np.ndarray],
    lo: np.ndarray,
    hi: np.ndarray,
    tol: float,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Lock-step golden-section maximization over equal-width brackets.

    One batched evaluation of ``f`` per iteration; returns the refined
    abscissae, values, and iteration count.
    """
    a = np.asarray(lo, dtype=float).copy()
    b = np.asarray(hi, dtype=float).copy()
    width = float(b[0] - a[0]) if len(a) else 0.0
    if width <= tol or len(a) == 0:
        mid = 0.5 * (a + b)
        return mid, f(mid) if len(a) else np.empty(0), 0
    n_iter = int(np.ceil(np.log(tol / width) / np.log(_INVPHI)))
    h = b - a
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc = f(c)
    fd = f(d)
    for _ in range(n_iter):
        right = fd > fc
        a = np.where(right, c, a)
        b = np.where(right, b, d)
        h = b - a
        c = a + _INVPHI2 * h
        d = a + _INVPHI * h
        carried = np.where(right, fd, fc)
        probe = np.where(right, d, c)
        fp = f(probe)
        fc = np.where(right, carried, fp)
        fd = np.where(right, fp, carried)
    take_c = fc >= fd
    return np.where(take_c, c, d), np.where(take_c, fc, fd), n_iter


def _refined_extremum(
    m: np.ndarray,
    thetas: np.ndarray,
    h: np.ndarray,
    cfg: SweepConfig,
    find_max: bool,
) -> tuple[float, float, int]:
    """Polish the grid extremum of h; returns (theta, value, iterations)."""
    idx = _local_extrema(h, find_max)
    delta = 2.0 * np.pi / len(thetas)
    lo = thetas[idx] - delta
    hi = thetas[idx] + delta
    sign = 1.0 if find_max else -1.0
    f = lambda ths: sign * matrix_support(m, ths)
    th, vals, iters = golden_refine(f, lo, hi, cfg.refine_tol)
    vals = sign * vals
    if find_max:
        j = int(np.argmax(vals))
        best = max(float(vals[j]), float(h.max()))
    else:
        j = int(np.argmin(vals))
        best = min(float(vals[j]), float(h.min()))
    return float(th[j]), best, iters


def matrix_radius(m: np.ndarray, cfg: SweepConfig | None = None) -> float:
    """Numerical radius of a plain matrix via the refined support sweep."""
    cfg = cfg or DEFAULT_SWEEP
    if m.shape[0] == 0:
        return 0.0
    thetas = _theta_grid(cfg.grid)
    h = matrix_support(m, thetas)
    _, omega, _ = _refined_extremum(m, thetas, h, cfg, find_max=True)
    return omega


def matrix_min_support(m: np.ndarray, cfg: SweepConfig | None = None) -> float:
    cfg = cfg or DEFAULT_SWEEP
    thetas = _theta_grid(cfg.grid)
    h = matrix_support(m, thetas)
    _, low, _ = _refined_extremum(m, thetas, h, cfg, find_max=False)
    return low


def matrix_crawford(m: np.ndarray, cfg: SweepConfig | None = None) -> float:
    """Distance from the origin to the (convex) numerical range."""
    if m.shape[0] == 0:
        return 0.0
    return max(0.0, -matrix_min_support(m, cfg))


def matrix_opnorm(m: np.ndarray) -> float:
    if m.shape[0] == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def matrix_spectral_radius(m: np.ndarray) -> float:
    if m.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def matrix_profile(m: np.ndarray, cfg: SweepConfig | None = None) -> RangeProfile:
    """Full sampled profile: support values, boundary polygon, gauges."""
    cfg = cfg or DEFAULT_SWEEP
    thetas = _theta_grid(cfg.grid)
    stack = _herm_stack(m, thetas)
    vals, vecs = np.linalg.eigh(stack)
    h = vals[..., -1]
    top = vecs[..., :, -1]
    mv = np.einsum("ij,kj->ki", m, top)
    polygon = np.einsum("ki,ki->k", np.conj(top), mv)

    _, omega, it_max = _refined_extremum(m, thetas, h, cfg, find_max=True)
    _, low, it_min = _refined_extremum(m, thetas, h, cfg, find_max=False)
    crawford = max(0.0, -low)
    norm_bound = matrix_opnorm(m)
    meta = {
        "grid": cfg.grid,
        "refine_tol": cfg.refine_tol,
        "refinements": it_max + it_min,
        "error_bound": norm_bound * cfg.refine_tol**2 / 8.0,
        "norm_bound": norm_bound,
    }
    return RangeProfile(
        thetas=thetas,
        support=h,
        omega=omega,
        crawford=crawford,
        polygon=polygon,
        sweep_meta=meta,
    )


# --- operator-level gauges ---------------------------------------------------

def a_opnorm(op: SemiOperator) -> float:
    """Weighted operator seminorm: largest singular value of the lift.

    Raises:
        NotABounded
    """
    require_bounded(op)
    return matrix_opnorm(tilde(op).mat)


def a_numerical_radius(
    op: SemiOperator, sweep_cfg: SweepConfig | None = None
) -> tuple[float, RangeProfile]:
    """Weighted numerical radius together with the sampled range profile.

    Raises:
        NotABounded
    """
    require_bounded(op)
    profile = matrix_profile(tilde(op).mat, sweep_cfg)
    return profile.omega, profile


def a_crawford(op: SemiOperator, sweep_cfg: SweepConfig | None = None) -> float:
    """Weighted Crawford number: distance from 0 to the weighted range.

    Raises:
        NotABounded
    """
    require_bounded(op)
    return matrix_crawford(tilde(op).mat, sweep_cfg)


def a_spectral_radius(op: SemiOperator) -> float:
    """Weighted spectral radius: largest eigenvalue modulus of the lift.

    Raises:
        NotABounded
    """
    require_bounded(op)
    return matrix_spectral_radius(tilde(op).mat)


def is_a_normaloid(op: SemiOperator, tol: float = 1e-8) -> bool:
    """Whether the weighted radius attains the weighted seminorm.

    Raises:
        NotABounded
    """
    require_bounded(op)
    m = tilde(op).mat
    nrm = matrix_opnorm(m)
    return abs(matrix_radius(m) - nrm) <= tol * max(nrm, 1.0)


def numerical_range_polygon(op: SemiOperator, grid: int = 720) -> RangeProfile:
    """Boundary polygon of the weighted numerical range at the given grid size.

    Raises:
        NotABounded
    """
    require_bounded(op)
    return matrix_profile(tilde(op).mat, SweepConfig(grid=grid))
