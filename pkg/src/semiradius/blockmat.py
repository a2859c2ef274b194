"""Operator matrices over the inflated weight diag(A, ..., A).

A d x d array of n x n blocks acts on the d-fold direct sum carrying
the block-diagonal weight.  The inflated weight's spectral data is
assembled from the base weight by replication (never by re-decomposing
the nd x nd matrix): eigenvalues are the base ones repeated d times and
then stably sorted back into descending order; the sorting permutation
is kept so the lift can be read in block coordinates, where it equals
the block assembly of the blockwise lifts.

The check_* functions evaluate the inflated-radius inequalities
(diagonal and pinched lower bounds, Crawford-type bounds, triangular
bounds, phase rotation and unitary invariance, the off-diagonal
sandwich) and report signed slacks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import certify
from .errors import (
    ContextMismatch,
    DimensionMismatch,
    NotAAdjointable,
    NotUpperTriangular,
    PreconditionNotParallel,
)
from .gauges import (
    SweepConfig,
    matrix_crawford,
    matrix_opnorm,
    matrix_radius,
)
from .semiop import (
    DEFAULT_CLASS_TOL,
    SemiOperator,
    a_adjoint,
    a_unitary_from_unitary,
    haar_unitary,
    require_adjointable,
    require_bounded,
    tilde,
    wrap,
)
from .weightspace import Weight, _readonly

DEFAULT_SLACK_TOL = 1e-8
EQUALITY_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class BoundSlack:
    name: str
    bound: float
    slack: float


@dataclass(frozen=True, eq=False)
class BlockCheckReport:
    """Outcome of one inequality battery on a block instance."""

    check: str
    value: float
    bounds: tuple[BoundSlack, ...]
    tol: float
    extras: dict

    @property
    def min_slack(self) -> float:
        return min((b.slack for b in self.bounds), default=0.0)

    @property
    def passed(self) -> bool:
        return self.min_slack >= -self.tol

    def to_jsonable(self) -> dict:
        return {
            "check": self.check,
            "value": self.value,
            "bounds": [
                {"name": b.name, "bound": b.bound, "slack": b.slack} for b in self.bounds
            ],
            "min_slack": self.min_slack,
            "tol": self.tol,
            "passed": self.passed,
            "extras": self.extras,
        }


@dataclass(frozen=True, eq=False)
class BlockOperator:
    """d x d blocks over a base weight, with the inflated operator cached.

    ``positions`` maps each retained sorted coordinate of the inflated
    weight to its block coordinate (block index * base rank + offset).
    """

    d: int
    blocks: tuple
    base: Weight
    weight: Weight
    op: SemiOperator
    positions: np.ndarray


def inflate_weight(w: Weight, d: int) -> tuple[Weight, np.ndarray]:
    """Block-diagonal weight on the d-fold sum, assembled by replication."""
    n = w.n
    vals = np.concatenate([w.eigvals] * d)
    order = np.argsort(-vals, kind="stable")
    nd = n * d
    qb = np.zeros((nd, nd), dtype=complex)
    ks, js = divmod(order, n)
    for s in range(nd):
        qb[ks[s] * n : (ks[s] + 1) * n, s] = w.eigvecs[:, js[s]]
    eye = np.eye(d)
    big = Weight(
        n=nd,
        mat=_readonly(np.kron(eye, w.mat)),
        eigvecs=_readonly(qb),
        eigvals=_readonly(vals[order]),
        rank=d * w.rank,
        rank_tol=w.rank_tol,
        half=_readonly(np.kron(eye, w.half)),
        pinv=_readonly(np.kron(eye, w.pinv)),
        proj=_readonly(np.kron(eye, w.proj)),
    )
    retained = order[: d * w.rank]
    kk, jj = divmod(retained, n)
    positions = kk * w.rank + jj
    return big, positions


def build_block(blocks, w: Weight, class_tol: float = DEFAULT_CLASS_TOL) -> BlockOperator:
    """Assemble a block operator and its inflated form.

    Raises:
        DimensionMismatch
    """
    rows = [[np.asarray(b, dtype=complex) for b in row] for row in blocks]
    d = len(rows)
    if any(len(row) != d for row in rows):
        raise DimensionMismatch("block array must be square")
    for i, row in enumerate(rows):
        for j, b in enumerate(row):
            if b.shape != (w.n, w.n):
                raise DimensionMismatch(
                    f"block ({i},{j}) has shape {b.shape}, expected {(w.n, w.n)}"
                )
    big, positions = inflate_weight(w, d)
    inflated = wrap(np.block(rows), big, class_tol)
    frozen = tuple(tuple(_readonly(b) for b in row) for row in rows)
    return BlockOperator(d=d, blocks=frozen, base=w, weight=big, op=inflated, positions=positions)


def tilde_blocks(b: BlockOperator) -> np.ndarray:
    """Lift of the inflated operator, reordered to block coordinates."""
    m = tilde(b.op).mat
    out = np.zeros_like(m)
    out[np.ix_(b.positions, b.positions)] = m
    return out


def assemble_blockwise_tilde(b: BlockOperator) -> np.ndarray:
    """Block assembly of the blockwise lifts (for comparison with the above)."""
    w = b.base
    return np.block(
        [[tilde(wrap(blk, w)).mat for blk in row] for row in b.blocks]
    )


def block_a_adjoint(b: BlockOperator) -> BlockOperator:
    """Blockwise adjoint: entry (i, j) is the adjoint of block (j, i).

    Raises:
        NotAAdjointable: naming the first offending block.
    """
    w = b.base
    ops = [[wrap(blk, w) for blk in row] for row in b.blocks]
    for i in range(b.d):
        for j in range(b.d):
            if not ops[i][j].is_a_adjointable:
                raise NotAAdjointable(f"block ({i},{j}) admits no weighted adjoint")
    adj = [[a_adjoint(ops[j][i]).mat for j in range(b.d)] for i in range(b.d)]
    return build_block(adj, w)


def _scale(*vals: float) -> float:
    return max([abs(v) for v in vals] + [1e-12])


def _bounded_block_ops(b: BlockOperator) -> list[list[SemiOperator]]:
    ops = [[wrap(blk, b.base) for blk in row] for row in b.blocks]
    for row in ops:
        for op in row:
            require_bounded(op)
    return ops


def check_sandwich(
    t12: SemiOperator,
    t21: SemiOperator,
    sweep: SweepConfig | None = None,
    tol: float = DEFAULT_SLACK_TOL,
) -> BlockCheckReport:
    """Off-diagonal sandwich: half the seminorm of the sum is a lower
    bound for the inflated radius of [[0, T12], [adj(T21), 0]], and half
    the seminorm sum an upper bound.

    Raises:
        NotAAdjointable, ContextMismatch
    """
    require_adjointable(t12)
    require_adjointable(t21)
    w = t12.context
    if w is not t21.context:
        raise ContextMismatch("operators are bound to different weights")
    zero = np.zeros((w.n, w.n))
    b = build_block([[zero, t12.mat], [a_adjoint(t21).mat, zero]], w)
    value = matrix_radius(tilde(b.op).mat, sweep)
    lower = 0.5 * matrix_opnorm(tilde(wrap(t12.mat + t21.mat, w)).mat)
    n12 = matrix_opnorm(tilde(t12).mat)
    n21 = matrix_opnorm(tilde(t21).mat)
    upper = 0.5 * (n12 + n21)
    bounds = (
        BoundSlack("lower", lower, value - lower),
        BoundSlack("upper", upper, upper - value),
    )
    return BlockCheckReport(
        check="sandwich",
        value=value,
        bounds=bounds,
        tol=tol * _scale(value, lower, upper),
        extras={"lower": lower, "upper": upper, "norm12": n12, "norm21": n21},
    )


def check_parallel_equality(
    t12: SemiOperator,
    t21: SemiOperator,
    beta_star: float,
    sweep: SweepConfig | None = None,
    tol: float = EQUALITY_TOL,
    certify_cfg: certify.CertifyConfig | None = None,
    verdict: certify.Verdict | None = None,
) -> BlockCheckReport:
    """For a seminorm-parallel pair with witness phase exp(2i beta*),
    the phased sandwich radius equals half the seminorm sum exactly.

    A previously computed parallelism verdict can be passed to skip the
    internal recomputation.

    Raises:
        PreconditionNotParallel, NotAAdjointable
    """
    require_adjointable(t12)
    require_adjointable(t21)
    if verdict is None:
        verdict = certify.norm_parallel(t12, t21, certify_cfg)
    if not verdict.holds:
        raise PreconditionNotParallel(
            f"pair is not seminorm-parallel (margin {verdict.margin:.3e})"
        )
    w = t12.context
    zero = np.zeros((w.n, w.n))
    phase = np.exp(-2j * beta_star)
    b = build_block([[zero, t12.mat], [phase * a_adjoint(t21).mat, zero]], w)
    value = matrix_radius(tilde(b.op).mat, sweep)
    target = 0.5 * (matrix_opnorm(tilde(t12).mat) + matrix_opnorm(tilde(t21).mat))
    bounds = (
        BoundSlack("attains", target, value - target),
        BoundSlack("bounded", target, target - value),
    )
    return BlockCheckReport(
        check="parallel_equality",
        value=value,
        bounds=bounds,
        tol=tol * _scale(value, target),
        extras={"target": target, "beta_star": beta_star, "parallel_margin": verdict.margin},
    )


def check_pinch(
    b: BlockOperator,
    sweep: SweepConfig | None = None,
    tol: float = DEFAULT_SLACK_TOL,
) -> BlockCheckReport:
    """Inflated radius dominates every diagonal radius, every
    row/column-deleted compression, and every 2 x 2 principal
    compression.

    Raises:
        NotABounded
    """
    ops = _bounded_block_ops(b)
    value = matrix_radius(tilde(b.op).mat, sweep)
    bounds = []
    for i in range(b.d):
        wi = matrix_radius(tilde(ops[i][i]).mat, sweep)
        bounds.append(BoundSlack(f"diag_{i}", wi, value - wi))
    zero = np.zeros((b.base.n, b.base.n))
    for i in range(b.d):
        cut = [
            [zero if (r == i or c == i) else b.blocks[r][c] for c in range(b.d)]
            for r in range(b.d)
        ]
        si = build_block(cut, b.base)
        wsi = matrix_radius(tilde(si.op).mat, sweep)
        bounds.append(BoundSlack(f"deleted_{i}", wsi, value - wsi))
    for i in range(b.d):
        for j in range(i + 1, b.d):
            comp = build_block(
                [[b.blocks[i][i], b.blocks[i][j]], [b.blocks[j][i], b.blocks[j][j]]],
                b.base,
            )
            wc = matrix_radius(tilde(comp.op).mat, sweep)
            bounds.append(BoundSlack(f"compression_{i}{j}", wc, value - wc))
    return BlockCheckReport(
        check="pinch",
        value=value,
        bounds=tuple(bounds),
        tol=tol * _scale(value, *(x.bound for x in bounds)),
        extras={},
    )


def check_crawford_bound(
    b: BlockOperator,
    sweep: SweepConfig | None = None,
    tol: float = DEFAULT_SLACK_TOL,
) -> BlockCheckReport:
    """Crawford-type lower bounds for the inflated radius.

    For each pair i < j the bound combines the Crawford number of the
    mean diagonal with the radius of the (anti)symmetrized off-diagonal
    pair; applied directly for d = 2 and to all pairs for d > 2.

    Raises:
        NotABounded
    """
    ops = _bounded_block_ops(b)
    w = b.base
    value = matrix_radius(tilde(b.op).mat, sweep)
    bounds = []
    for k in range(b.d):
        wk = matrix_radius(tilde(ops[k][k]).mat, sweep)
        bounds.append(BoundSlack(f"diag_{k}", wk, value - wk))
    for i in range(b.d):
        for j in range(i + 1, b.d):
            mean = wrap((b.blocks[i][i] + b.blocks[j][j]) / 2.0, w)
            m2 = matrix_crawford(tilde(mean).mat, sweep) ** 2
            plus = wrap((b.blocks[i][j] + b.blocks[j][i]) / 2.0, w)
            minus = wrap((b.blocks[i][j] - b.blocks[j][i]) / 2.0, w)
            alpha = float(np.sqrt(m2 + matrix_radius(tilde(plus).mat, sweep) ** 2))
            beta = float(np.sqrt(m2 + matrix_radius(tilde(minus).mat, sweep) ** 2))
            bounds.append(BoundSlack(f"alpha_{i}{j}", alpha, value - alpha))
            bounds.append(BoundSlack(f"beta_{i}{j}", beta, value - beta))
    return BlockCheckReport(
        check="crawford",
        value=value,
        bounds=tuple(bounds),
        tol=tol * _scale(value, *(x.bound for x in bounds)),
        extras={},
    )


def check_triangular(
    b: BlockOperator,
    sweep: SweepConfig | None = None,
    tol: float = DEFAULT_SLACK_TOL,
    zero_tol: float = 1e-12,
) -> BlockCheckReport:
    """Upper-triangular bounds: diagonal radii and half the seminorm of
    every strictly-upper block.

    Raises:
        NotUpperTriangular, NotABounded
    """
    for i in range(b.d):
        for j in range(i):
            blk = b.blocks[i][j]
            if float(np.linalg.norm(blk, 2)) > zero_tol * max(
                1.0, float(np.linalg.norm(b.op.mat, 2))
            ):
                raise NotUpperTriangular(f"block ({i},{j}) below the diagonal is nonzero")
    ops = _bounded_block_ops(b)
    value = matrix_radius(tilde(b.op).mat, sweep)
    bounds = []
    for k in range(b.d):
        wk = matrix_radius(tilde(ops[k][k]).mat, sweep)
        bounds.append(BoundSlack(f"diag_{k}", wk, value - wk))
    for i in range(b.d):
        for j in range(i + 1, b.d):
            half_norm = 0.5 * matrix_opnorm(tilde(ops[i][j]).mat)
            bounds.append(BoundSlack(f"half_norm_{i}{j}", half_norm, value - half_norm))
    return BlockCheckReport(
        check="triangular",
        value=value,
        bounds=tuple(bounds),
        tol=tol * _scale(value, *(x.bound for x in bounds)),
        extras={},
    )


def check_phase_invariance(
    b: BlockOperator,
    sweep: SweepConfig | None = None,
    tol: float = DEFAULT_SLACK_TOL,
    unitary_seed: int = 0,
) -> BlockCheckReport:
    """Phase rotation of a 2 x 2 block matrix leaves the inflated radius
    unchanged, as does conjugation by a generated inflated unitary.

    Raises:
        DimensionMismatch, NotABounded
    """
    if b.d != 2:
        raise DimensionMismatch("phase invariance check applies to 2 x 2 block matrices")
    _bounded_block_ops(b)
    value = matrix_radius(tilde(b.op).mat, sweep)
    rotated = build_block(
        [
            [b.blocks[0][0], 1j * b.blocks[0][1]],
            [-1j * b.blocks[1][0], b.blocks[1][1]],
        ],
        b.base,
    )
    rot_value = matrix_radius(tilde(rotated.op).mat, sweep)

    rng = np.random.default_rng(unitary_seed)
    u = a_unitary_from_unitary(b.weight, haar_unitary(b.weight.rank, rng))
    conj = wrap(a_adjoint(u).mat @ b.op.mat @ u.mat, b.weight)
    conj_value = matrix_radius(tilde(conj).mat, sweep)

    bounds = (
        BoundSlack("phase_ge", rot_value, value - rot_value),
        BoundSlack("phase_le", rot_value, rot_value - value),
        BoundSlack("unitary_ge", conj_value, value - conj_value),
        BoundSlack("unitary_le", conj_value, conj_value - value),
    )
    return BlockCheckReport(
        check="phase",
        value=value,
        bounds=bounds,
        tol=tol * _scale(value, rot_value, conj_value),
        extras={"rotated": rot_value, "conjugated": conj_value},
    )


def check_block_adjoint(b: BlockOperator, tol: float = 1e-10) -> BlockCheckReport:
    """Blockwise adjoint assembly agrees with the inflated-level formula.

    Raises:
        NotAAdjointable
    """
    blockwise = block_a_adjoint(b).op.mat
    inflated = a_adjoint(require_adjointable(b.op)).mat
    dev = float(np.linalg.norm(blockwise - inflated, 2))
    scale = _scale(float(np.linalg.norm(inflated, 2)))
    bounds = (BoundSlack("blockwise_vs_inflated", dev, tol * scale - dev),)
    return BlockCheckReport(
        check="adjoint",
        value=dev,
        bounds=bounds,
        tol=0.0,
        extras={"deviation": dev, "scale": scale},
    )
