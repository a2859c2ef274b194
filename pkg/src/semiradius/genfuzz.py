"""Deterministic random instances and the theorem-battery runner.

Every instance is drawn from a counter-based stream keyed by
``(seed, check label, instance index)``, so shards of a campaign can be
executed in any order, serially or in parallel, and still reproduce the
serial output bit for bit.

Generators produce members of the classes they claim by construction:
adjointable operators via the range/null-space splitting
``pinv(A) M A + (I-P) N (I-P)``, weighted unitaries by pulling a Haar
unitary back through the lift, parallel pairs as phased multiples plus
null-space junk, and orthogonal pairs from lifts whose two leading
diagonal entries pin the radius from below for every perturbation.
"""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass, field, replace

import numpy as np

from . import blockmat, certify, schema
from .errors import BadRank, UnknownCheckName, ZeroRank
from .gauges import matrix_opnorm, matrix_radius
from .rankone import make_rank_one, rank_one_norm, rank_one_radius
from .semiop import (
    SemiOperator,
    a_adjoint,
    a_unitary_from_unitary,
    haar_unitary,
    operator_from_lift,
    tilde,
    wrap,
)
from .weightspace import Weight, build_weight

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class GenConfig:
    """Instance stream configuration.

    rank=None draws the weight rank uniformly in [1, n] per instance;
    scale normalizes weights to unit top eigenvalue and operators to
    unit seminorm.
    """

    seed: int
    n: int = 3
    rank: int | None = None
    trials: int = 100
    scale: bool = True


def instance_rng(seed: int, label: str, index: int) -> np.random.Generator:
    """Counter-based generator for one instance of one labelled stream."""
    ss = np.random.SeedSequence(
        entropy=int(seed) & _MASK64, spawn_key=(zlib.crc32(label.encode()), int(index))
    )
    return np.random.Generator(np.random.Philox(ss))


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _draw_rank(cfg: GenConfig, rng: np.random.Generator, low: int = 1) -> int:
    if cfg.rank is not None:
        return cfg.rank
    return int(rng.integers(low, cfg.n + 1))


_COND_CAP = 1e10


def gen_weight(cfg: GenConfig, index: int = 0) -> Weight:
    """PSD weight of the target rank from a Gaussian factor.

    Draws whose retained spectrum is conditioned worse than 1e10 are
    rejected and redrawn from the same stream, so every later residual
    test stays far from its tolerance.

    Raises:
        BadRank
    """
    rng = instance_rng(cfg.seed, "weight", index)
    rank = _draw_rank(cfg, rng)
    if not 1 <= rank <= cfg.n:
        raise BadRank(f"rank {rank} outside [1, {cfg.n}]")
    for _ in range(64):
        g = _complex_gaussian(rng, (cfg.n, rank))
        a = g @ g.conj().T
        vals = np.linalg.eigvalsh(a)
        lam_min, lam_max = float(vals[cfg.n - rank]), float(vals[-1])
        if lam_min < lam_max / _COND_CAP:
            continue
        if cfg.scale:
            a = a / lam_max
        w = build_weight(a)
        if w.rank != rank:
            raise BadRank(f"achieved rank {w.rank} != target {rank}")
        return w
    raise BadRank("could not draw a well-conditioned weight")


def gen_adjointable(cfg: GenConfig, w: Weight, index: int = 0, label: str = "adjointable") -> SemiOperator:
    """Adjointable operator by construction (range + null-space parts).

    The range part is the pseudoinverse conjugation ``pinv(A) M A``
    evaluated spectrally (entrywise eigenvalue scaling of the
    compression of M), which is the cancellation-free form of the same
    operator; the null part never touches the range.
    """
    rng = instance_rng(cfg.seed, label, index)
    comp = np.eye(w.n) - w.proj
    m = _complex_gaussian(rng, (w.n, w.n))
    nl = _complex_gaussian(rng, (w.n, w.n))
    qr = w.range_vecs
    b = qr.conj().T @ m @ qr
    c = b * (w.range_vals[None, :] / w.range_vals[:, None])
    t = qr @ c @ qr.conj().T + comp @ nl @ comp
    op = wrap(t, w)
    if cfg.scale:
        nrm = matrix_opnorm(tilde(op).mat)
        if nrm > 1e-12:
            op = wrap(t / nrm, w)
    return op


def gen_a_unitary(cfg: GenConfig, w: Weight, index: int = 0) -> SemiOperator:
    """Weighted unitary: Haar unitary pulled back through the lift.

    Raises:
        ZeroRank
    """
    if w.rank < 1:
        raise ZeroRank("weight has rank zero")
    rng = instance_rng(cfg.seed, "aunitary", index)
    return a_unitary_from_unitary(w, haar_unitary(w.rank, rng))


def _null_junk(rng: np.random.Generator, w: Weight, magnitude: float) -> np.ndarray:
    comp = np.eye(w.n) - w.proj
    return magnitude * (comp @ _complex_gaussian(rng, (w.n, w.n)) @ comp)


def gen_parallel_pair(cfg: GenConfig, w: Weight, index: int = 0) -> tuple[SemiOperator, SemiOperator]:
    """Radius- and seminorm-parallel pair: a phased multiple plus
    gauge-invisible null-space junk."""
    rng = instance_rng(cfg.seed, "parallel", index)
    t = gen_adjointable(cfg, w, index, label="parallel_base")
    c = 0.25 + 1.5 * rng.random()
    psi = 2.0 * np.pi * rng.random()
    s = c * np.exp(1j * psi) * t.mat + _null_junk(rng, w, 0.5)
    return t, wrap(s, w)


def gen_orthogonal_pair(
    cfg: GenConfig, w: Weight, index: int = 0, certify_cfg: certify.CertifyConfig | None = None
) -> tuple[SemiOperator, SemiOperator]:
    """Radius-orthogonal pair, validated against the certifier.

    The lifts carry equal leading diagonal entries of opposite sign for
    the first operator and equal entries for the second, which pins
    ``radius(T + gamma S) >= radius(T)`` for every gamma; a shared
    unitary conjugation hides the structure without changing gauges.
    """
    rng = instance_rng(cfg.seed, "orthogonal", index)
    r = w.rank
    for _ in range(4):
        if r == 1:
            t = gen_adjointable(cfg, w, index, label="orthogonal_base")
            s = wrap(_null_junk(rng, w, 1.0), w)
        else:
            mt = np.zeros((r, r), dtype=complex)
            mt[0, 0], mt[1, 1] = 1.0, -1.0
            if r > 2:
                rest = _complex_gaussian(rng, (r - 2, r - 2))
                rest *= 0.5 / max(matrix_radius(rest), 1e-12)
                mt[2:, 2:] = rest
            s_val = (0.3 + 1.2 * rng.random()) * np.exp(2j * np.pi * rng.random())
            ms = np.zeros((r, r), dtype=complex)
            ms[0, 0] = ms[1, 1] = s_val
            if r > 2:
                ms[2:, 2:] = 0.3 * abs(s_val) * _complex_gaussian(rng, (r - 2, r - 2))
            v0 = haar_unitary(r, rng)
            t = operator_from_lift(w, v0 @ mt @ v0.conj().T)
            s = operator_from_lift(w, v0 @ ms @ v0.conj().T)
        if certify.wa_orthogonal(t, s, certify_cfg).holds:
            return t, s
    raise RuntimeError("orthogonal pair generation failed validation")


def _gen_normaloid(cfg: GenConfig, w: Weight, rng: np.random.Generator) -> SemiOperator:
    """Operator with a normal lift, hence radius equal to seminorm."""
    v = haar_unitary(w.rank, rng)
    d = _complex_gaussian(rng, w.rank)
    m = v @ np.diag(d) @ v.conj().T
    if cfg.scale:
        m = m / max(float(np.max(np.abs(d))), 1e-12)
    return operator_from_lift(w, m)


def _gen_square_null(cfg: GenConfig, w: Weight, rng: np.random.Generator) -> SemiOperator:
    """Operator whose weighted square vanishes (rank-one nilpotent lift)."""
    r = w.rank
    if r == 1:
        return operator_from_lift(w, np.zeros((1, 1), dtype=complex))
    a = _complex_gaussian(rng, r)
    b = _complex_gaussian(rng, r)
    b = b - (np.vdot(a, b) / np.vdot(a, a)) * a
    m = np.outer(a, np.conj(b))
    nrm = matrix_opnorm(m)
    if cfg.scale and nrm > 1e-12:
        m = m / nrm
    return operator_from_lift(w, m)


# --- campaign checks ---------------------------------------------------------

@dataclass(frozen=True)
class CheckOutcome:
    slacks: dict
    tol: float
    payload: dict


def _payload(w: Weight, **mats) -> dict:
    out = {"n": w.n, "A": w.mat}
    out.update(mats)
    return out


def _check_equivalentsemi(cfg: GenConfig, idx: int) -> CheckOutcome:
    w = gen_weight(cfg, idx)
    t = gen_adjointable(cfg, w, idx)
    m = tilde(t).mat
    nrm = matrix_opnorm(m)
    omega = matrix_radius(m)
    return CheckOutcome(
        {"lower": omega - 0.5 * nrm, "upper": nrm - omega},
        1e-8,
        _payload(w, T=t.mat),
    )


def _check_lift(cfg: GenConfig, idx: int) -> CheckOutcome:
    w = gen_weight(cfg, idx)
    t = gen_adjointable(cfg, w, idx)
    m = tilde(t).mat
    roundtrip = tilde(operator_from_lift(w, m)).mat
    trip_dev = float(np.linalg.norm(roundtrip - m, 2))
    norm_dev = abs(matrix_opnorm(m) - float(np.linalg.svd(m, compute_uv=False)[0]))
    adj_dev = float(np.linalg.norm(tilde(a_adjoint(t)).mat - m.conj().T, 2))
    scale = max(matrix_opnorm(m), 1.0)
    return CheckOutcome(
        {
            "roundtrip": 1e-9 * scale - trip_dev,
            "opnorm": 1e-10 * scale - norm_dev,
            "adjoint_lift": 1e-9 * scale - adj_dev,
        },
        0.0,
        _payload(w, T=t.mat),
    )


def _check_adjoint_symmetry(cfg: GenConfig, idx: int) -> CheckOutcome:
    w = gen_weight(cfg, idx)
    t = gen_adjointable(cfg, w, idx)
    m = tilde(t).mat
    madj = tilde(a_adjoint(t)).mat
    scale = max(matrix_opnorm(m), 1.0)
    return CheckOutcome(
        {
            "radius": 1e-8 * scale - abs(matrix_radius(m) - matrix_radius(madj)),
            "opnorm": 1e-8 * scale - abs(matrix_opnorm(m) - matrix_opnorm(madj)),
        },
        0.0,
        _payload(w, T=t.mat),
    )


def _check_rankone(cfg: GenConfig, idx: int) -> CheckOutcome:
    w = gen_weight(cfg, idx)
    rng = instance_rng(cfg.seed, "rankone_vecs", idx)
    x = w.vector(_complex_gaussian(rng, w.n))
    y = w.vector(_complex_gaussian(rng, w.n))
    op = make_rank_one(x, y)
    m = tilde(op.op).mat
    scale = max(rank_one_norm(op), 1.0)
    return CheckOutcome(
        {
            "norm": 1e-9 * scale - abs(rank_one_norm(op) - matrix_opnorm(m)),
            "radius": 1e-8 * scale - abs(rank_one_radius(op) - matrix_radius(m)),
        },
        0.0,
        _payload(w, x=x.entries, y=y.entries),
    )


def _check_aunitary(cfg: GenConfig, idx: int) -> CheckOutcome:
    w = gen_weight(cfg, idx)
    t = gen_adjointable(cfg, w, idx)
    u = gen_a_unitary(cfg, w, idx)
    conj = wrap(a_adjoint(u).mat @ t.mat @ u.mat, w)
    before = matrix_radius(tilde(t).mat)
    after = matrix_radius(tilde(conj).mat)
    scale = max(before, 1.0)
    return CheckOutcome(
        {"invariance": 1e-8 * scale - abs(before - after)},
        0.0,
        _payload(w, T=t.mat, U=u.mat),
    )


def _report_outcome(w: Weight, rep: blockmat.BlockCheckReport, **mats) -> CheckOutcome:
    slacks = {b.name: b.slack for b in rep.bounds}
    return CheckOutcome(slacks, rep.tol, _payload(w, **mats))


def _check_sandwich(cfg: GenConfig, idx: int) -> CheckOutcome:
    w = gen_weight(cfg, idx)
    t12 = gen_adjointable(cfg, w, idx, label="sandwich12")
    t21 = gen_adjointable(cfg, w, idx, label="sandwich21")
    rep = blockmat.check_sandwich(t12, t21)
    return _report_outcome(w, rep, T12=t12.mat, T21=t21.mat)


def _random_blocks(cfg: GenConfig, w: Weight, idx: int, d: int, label: str):
    return [
        [gen_adjointable(cfg, w, idx, label=f"{label}{i}{j}").mat for j in range(d)]
        for i in range(d)
    ]


def _check_pinch(cfg: GenConfig, idx: int) -> CheckOutcome:
    w = gen_weight(cfg, idx)
    blocks = _random_blocks(cfg, w, idx, 3, "pinch")
    rep = blockmat.check_pinch(blockmat.build_block(blocks, w))
    return _report_outcome(w, rep, blocks=np.array(blocks))


def _check_crawford(cfg: GenConfig, idx: int) -> CheckOutcome:
    w = gen_weight(cfg, idx)
    d = 2 if idx % 2 == 0 else 3
    blocks = _random_blocks(cfg, w, idx, d, "crawford")
    rep = blockmat.check_crawford_bound(blockmat.build_block(blocks, w))
    return _report_outcome(w, rep, blocks=np.array(blocks))


def _check_triangular(cfg: GenConfig, idx: int) -> CheckOutcome:
    w = gen_weight(cfg, idx)
    d = 2 + idx % 2
    zero = np.zeros((w.n, w.n), dtype=complex)
    blocks = [
        [
            gen_adjointable(cfg, w, idx, label=f"tri{i}{j}").mat if j >= i else zero
            for j in range(d)
        ]
        for i in range(d)
    ]
    rep = blockmat.check_triangular(blockmat.build_block(blocks, w))
    return _report_outcome(w, rep, blocks=np.array(blocks))


def _check_phase(cfg: GenConfig, idx: int) -> CheckOutcome:
    w = gen_weight(cfg, idx)
    blocks = _random_blocks(cfg, w, idx, 2, "phase")
    rep = blockmat.check_phase_invariance(blockmat.build_block(blocks, w), unitary_seed=idx)
    return _report_outcome(w, rep, blocks=np.array(blocks))


def _check_parallel_equality(cfg: GenConfig, idx: int) -> CheckOutcome:
    w = gen_weight(cfg, idx)
    t, s = gen_parallel_pair(cfg, w, idx)
    verdict = certify.norm_parallel(t, s)
    beta_star = float(np.angle(verdict.witness["lambda"]) / 2.0)
    rep = blockmat.check_parallel_equality(t, s, beta_star, verdict=verdict)
    return _report_outcome(w, rep, T12=t.mat, T21=s.mat)


def _check_bridge(cfg: GenConfig, idx: int) -> CheckOutcome:
    rng = instance_rng(cfg.seed, "bridge", idx)
    base = cfg
    if base.rank is None:
        rank = int(rng.integers(min(2, cfg.n), cfg.n + 1))
        base = replace(cfg, rank=rank)
    w = gen_weight(base, idx)
    t = _gen_normaloid(base, w, rng) if idx % 2 == 0 else _gen_square_null(base, w, rng)
    s = gen_adjointable(base, w, idx, label="bridge_s")
    ok = certify.normaloid_bridge_check(t, s)
    return CheckOutcome(
        {"conformance": 0.0 if ok else -1.0},
        0.0,
        _payload(w, T=t.mat, S=s.mat),
    )


CHECKS = {
    "equivalentsemi": _check_equivalentsemi,
    "lift": _check_lift,
    "adjoint_symmetry": _check_adjoint_symmetry,
    "rankone": _check_rankone,
    "aunitary": _check_aunitary,
    "sandwich": _check_sandwich,
    "pinch": _check_pinch,
    "crawford": _check_crawford,
    "triangular": _check_triangular,
    "phase": _check_phase,
    "parallel_equality": _check_parallel_equality,
    "bridge": _check_bridge,
}

NEAR_TIGHT_BAND = 1e-4


@dataclass
class CheckReport:
    trials: int = 0
    tol: float = 0.0
    min_slack: float | None = None
    near_tight: int = 0
    failures: list = field(default_factory=list)
    runtime: float = 0.0


@dataclass
class CampaignReport:
    seed: int
    config: dict
    checks: dict
    failing: bool

    def to_jsonable(self, include_runtime: bool = True) -> dict:
        checks = {}
        for name, rep in self.checks.items():
            entry = {
                "trials": rep.trials,
                "tol": rep.tol,
                "min_slack": rep.min_slack,
                "near_tight": rep.near_tight,
                "failures": rep.failures,
            }
            if include_runtime:
                entry["runtime"] = rep.runtime
            checks[name] = entry
        return {
            "seed": self.seed,
            "config": self.config,
            "checks": checks,
            "failing": self.failing,
        }

    def canonical_json(self) -> str:
        """Runtime-free canonical serialization for determinism comparisons."""
        import json

        return json.dumps(self.to_jsonable(include_runtime=False),
                          sort_keys=True, separators=(",", ":"))


def _run_shard(cfg: GenConfig, name: str, indices: range) -> CheckReport:
    fn = CHECKS[name]
    rep = CheckReport()
    start = time.perf_counter()
    for idx in indices:
        out = fn(cfg, idx)
        rep.trials += 1
        # max over trials: order-independent, so sharding cannot change it
        rep.tol = max(rep.tol, out.tol)
        for slack_name, slack in out.slacks.items():
            slack = float(slack)
            if rep.min_slack is None or slack < rep.min_slack:
                rep.min_slack = slack
            if -out.tol <= slack < NEAR_TIGHT_BAND:
                rep.near_tight += 1
            if slack < -out.tol:
                rep.failures.append(
                    {
                        "index": idx,
                        "slack_name": slack_name,
                        "slack": slack,
                        "instance": schema.encode_payload(out.payload),
                    }
                )
    rep.runtime = time.perf_counter() - start
    return rep


def _merge(parts: list[CheckReport]) -> CheckReport:
    rep = CheckReport()
    for p in parts:
        rep.trials += p.trials
        rep.tol = max(rep.tol, p.tol)
        if p.min_slack is not None:
            rep.min_slack = p.min_slack if rep.min_slack is None else min(rep.min_slack, p.min_slack)
        rep.near_tight += p.near_tight
        rep.failures.extend(p.failures)
        rep.runtime += p.runtime
    rep.failures.sort(key=lambda f: (f["index"], f["slack_name"]))
    return rep


def run_campaign(
    cfg: GenConfig,
    checks: list[str] | None = None,
    workers: int = 1,
) -> CampaignReport:
    """Run the named checks over the instance stream.

    Sharding across workers is by index residue; the merge is
    associative and order-independent, so worker count never changes
    the report (runtime aside).

    Raises:
        UnknownCheckName
    """
    names = list(CHECKS) if checks is None else list(checks)
    for name in names:
        if name not in CHECKS:
            raise UnknownCheckName(f"unknown check {name!r}; known: {sorted(CHECKS)}")
    workers = max(1, int(workers))
    results: dict[str, CheckReport] = {}
    if workers == 1:
        for name in names:
            results[name] = _merge([_run_shard(cfg, name, range(cfg.trials))])
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            for name in names:
                shards = [
                    pool.submit(_run_shard, cfg, name, range(wk, cfg.trials, workers))
                    for wk in range(workers)
                ]
                results[name] = _merge([s.result() for s in shards])
    failing = any(rep.failures for rep in results.values())
    return CampaignReport(
        seed=cfg.seed,
        config={"n": cfg.n, "rank": cfg.rank, "trials": cfg.trials, "scale": cfg.scale},
        checks=results,
        failing=failing,
    )
