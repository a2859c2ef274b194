"""Weighted rank-one operators ``x (x) y : z -> <z|y>_A x``.

Realized by the matrix ``x (Ay)*``; the lift of such an operator is the
ordinary rank-one matrix built from the range coordinates of x and y,
which gives closed forms for both gauges:

    seminorm = ||x||_A ||y||_A
    radius   = (|<x|y>_A| + ||x||_A ||y||_A) / 2

The radius uses the modulus of the semi-inner product so the gauge is a
nonnegative real; the sweep cross-validates the closed form in tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .semiop import SemiOperator, wrap
from .weightspace import AVector, a_inner, a_norm, same_context


@dataclass(frozen=True, eq=False)
class ARankOne:
    """A weighted rank-one operator with its realized matrix."""

    x: AVector
    y: AVector
    op: SemiOperator


def make_rank_one(x: AVector, y: AVector) -> ARankOne:
    """Build ``x (x) y``; always A-bounded and A-adjointable.

    Raises:
        ContextMismatch
    """
    w = same_context(x, y)
    mat = np.outer(x.entries, np.conj(w.mat @ y.entries))
    return ARankOne(x=x, y=y, op=wrap(mat, w))


def rank_one_norm(op: ARankOne) -> float:
    """Closed-form weighted seminorm ``||x||_A ||y||_A``."""
    return a_norm(op.x) * a_norm(op.y)


def rank_one_radius(op: ARankOne) -> float:
    """Closed-form weighted numerical radius."""
    return 0.5 * (abs(a_inner(op.x, op.y)) + a_norm(op.x) * a_norm(op.y))


def rank_one_adjoint(op: ARankOne) -> np.ndarray:
    """Matrix of the weighted adjoint, ``(P y) (x) x`` as a matrix."""
    w = op.x.context
    return np.outer(w.proj @ op.y.entries, np.conj(w.mat @ op.x.entries))
