"""Acceptance battery.

Each test covers one numbered criterion at its stated tolerance and
prints a single PASS line with the observed extremes when it succeeds.
Oracles live in oracles.py and stay independent of the sweep/refinement
code they check.
"""

import time

import numpy as np
import pytest

from semiradius import (
    a_adjoint,
    a_numerical_radius,
    a_opnorm,
    bj_orthogonal,
    check_parallel_equality,
    make_rank_one,
    norm_parallel,
    rank_one_norm,
    rank_one_radius,
    tilde,
    vec_parallel,
    wa_orthogonal,
    wa_parallel,
    wrap,
)
from semiradius.gauges import matrix_opnorm, matrix_radius
from semiradius.genfuzz import (
    GenConfig,
    gen_adjointable,
    gen_orthogonal_pair,
    gen_weight,
    instance_rng,
    run_campaign,
)

from oracles import brute_force_omega, dense_sweep_omega, gamma_grid_min


def _passed(k, msg):
    print(f"ACCEPTANCE {k} PASS - {msg}")


def _instances(seed, count, dims, normalize=True):
    """Deterministic (weight, operator) stream over mixed dimensions."""
    meta = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(meta.choice(dims))
        rank = int(meta.integers(1, n + 1))
        cfg = GenConfig(seed=seed, n=n, rank=rank)
        w = gen_weight(cfg, i)
        t = gen_adjointable(cfg, w, i)
        if normalize:
            nrm = a_opnorm(t)
            assert nrm > 1e-8
            t = wrap(t.mat / nrm, w)
        out.append((w, t))
    return out


class TestCriterion01EquivalenceBand:
    def test_radius_between_half_and_full_seminorm(self):
        start = time.perf_counter()
        lo_slack = hi_slack = np.inf
        for w, t in _instances(1001, 1000, (2, 3, 4, 5, 6)):
            omega, _ = a_numerical_radius(t)
            lo_slack = min(lo_slack, omega - 0.5)
            hi_slack = min(hi_slack, 1.0 - omega)
            assert 0.5 - 1e-8 <= omega <= 1.0 + 1e-8
        elapsed = time.perf_counter() - start
        assert elapsed < 30.0, f"equivalence band took {elapsed:.1f}s"
        _passed(1, f"1000 instances, band slacks >= ({lo_slack:.2e}, {hi_slack:.2e}), "
                   f"{elapsed:.1f}s")


class TestCriterion02LiftFidelity:
    def test_gauges_match_lift_and_adjoint_lift_is_conjugate(self):
        worst_r = worst_n = worst_adj = 0.0
        for w, t in _instances(1002, 1000, (2, 3, 4, 5, 6)):
            m = tilde(t).mat
            omega, _ = a_numerical_radius(t)
            worst_r = max(worst_r, abs(omega - dense_sweep_omega(m, grid=1000)))
            worst_n = max(worst_n, abs(a_opnorm(t) - np.linalg.svd(m, compute_uv=False)[0]))
            worst_adj = max(
                worst_adj, float(np.linalg.norm(tilde(a_adjoint(t)).mat - m.conj().T, 2))
            )
            assert worst_r <= 1e-9 and worst_n <= 1e-10 and worst_adj <= 1e-9
        _passed(2, f"1000 instances, radius dev {worst_r:.2e}, seminorm dev {worst_n:.2e}, "
                   f"adjoint-lift dev {worst_adj:.2e}")


class TestCriterion03RankOneClosedForms:
    def test_closed_forms_match_sweep(self):
        worst_n = worst_r = 0.0
        meta = np.random.default_rng(1003)
        for i in range(500):
            n = int(meta.choice((2, 3, 4, 5, 6)))
            rank = int(meta.integers(1, n + 1))
            cfg = GenConfig(seed=1003, n=n, rank=rank)
            w = gen_weight(cfg, i)
            rng = instance_rng(1003, "c3_vectors", i)
            x = w.vector(_unit(rng, n))
            y = w.vector(_unit(rng, n))
            op = make_rank_one(x, y)
            worst_n = max(worst_n, abs(rank_one_norm(op) - a_opnorm(op.op)))
            worst_r = max(worst_r, abs(rank_one_radius(op) - a_numerical_radius(op.op)[0]))
            assert worst_n <= 1e-9 and worst_r <= 1e-8
        _passed(3, f"500 instances, norm dev {worst_n:.2e} <= 1e-9, "
                   f"radius dev {worst_r:.2e} <= 1e-8")


class TestCriterion04RadiusOracle:
    def test_sweep_matches_projected_gradient_multistart(self):
        worst = 0.0
        for i, (w, t) in enumerate(_instances(1004, 200, (2, 3))):
            m = tilde(t).mat
            omega, _ = a_numerical_radius(t)
            oracle = brute_force_omega(m, n_samples=100_000, seed=i)
            gap = abs(omega - oracle) / omega
            worst = max(worst, gap)
            assert gap <= 1e-6, f"instance {i}: sweep {omega}, oracle {oracle}"
        _passed(4, f"200 instances, worst relative gap {worst:.2e} <= 1e-6")


class TestCriterion05OrthogonalityOracle:
    def test_certifiers_match_grid_oracle(self):
        worst_bj = worst_wa = 0.0
        meta = np.random.default_rng(1005)
        for i in range(200):
            n = int(meta.choice((2, 3)))
            rank = int(meta.integers(1, n + 1))
            cfg = GenConfig(seed=1005, n=n, rank=rank)
            w = gen_weight(cfg, i)
            if i % 4 == 0 and rank >= 2:
                t, s = gen_orthogonal_pair(cfg, w, i)
            else:
                t = gen_adjointable(cfg, w, i, label="c5_t")
                s = gen_adjointable(cfg, w, i, label="c5_s")
            mt, ms = tilde(t).mat, tilde(s).mat

            vb = bj_orthogonal(t, s)
            nt, ns = matrix_opnorm(mt), matrix_opnorm(ms)
            _, gb = gamma_grid_min(mt, ms, "opnorm", 2 * nt / ns + 1)
            dev = abs(vb.margin - (gb - nt))
            worst_bj = max(worst_bj, dev)
            assert dev <= 1e-6
            assert vb.holds == (gb - nt >= -vb.tolerances["decision_tol"])

            vw = wa_orthogonal(t, s)
            rt, rs = matrix_radius(mt), matrix_radius(ms)
            _, gw = gamma_grid_min(mt, ms, "radius", 2 * rt / rs + 1, scan=64)
            dev = abs(vw.margin - (gw - rt))
            worst_wa = max(worst_wa, dev)
            assert dev <= 1e-6
            assert vw.holds == (gw - rt >= -vw.tolerances["decision_tol"])
        _passed(5, f"200 pairs, margin deviations bj {worst_bj:.2e}, wa {worst_wa:.2e} <= 1e-6")


class TestCriterion06RankOneParallelism:
    def test_vector_parallelism_iff_square_radius_parallelism(self):
        disagreements = 0
        meta = np.random.default_rng(1006)
        for i in range(400):
            n = int(meta.choice((2, 3)))
            rank = int(meta.integers(1, n + 1))
            cfg = GenConfig(seed=1006, n=n, rank=rank)
            w = gen_weight(cfg, i)
            rng = instance_rng(1006, "c6_vectors", i)
            x = w.vector(_unit(rng, n))
            if i >= 300:
                # constructed collinear pair modulo the null space
                c = (0.3 + 2.0 * rng.random()) * np.exp(2j * np.pi * rng.random())
                junk = (np.eye(n) - w.proj) @ _unit(rng, n)
                y = w.vector(c * x.entries + junk)
            else:
                y = w.vector(_unit(rng, n))
            vp = vec_parallel(x, y, tol=1e-7)
            wp = wa_parallel(make_rank_one(x, x).op, make_rank_one(y, y).op)
            if vp.holds != wp.holds:
                disagreements += 1
        assert disagreements == 0
        _passed(6, "400 pairs (300 random + 100 collinear), zero disagreements at tol 1e-7")


class TestCriterion07BlockInequalityBattery:
    def test_five_hundred_instances_per_theorem(self):
        start = time.perf_counter()
        names = ["sandwich", "pinch", "crawford", "triangular", "phase", "aunitary"]
        worst = {}
        for n, seed in ((2, 1107), (3, 1108)):
            report = run_campaign(GenConfig(seed=seed, n=n, trials=250), checks=names)
            assert not report.failing, {
                k: v.failures[:1] for k, v in report.checks.items() if v.failures
            }
            for name, rep in report.checks.items():
                assert rep.min_slack >= -rep.tol
                worst[name] = min(worst.get(name, np.inf), rep.min_slack)
        elapsed = time.perf_counter() - start
        assert elapsed < 180.0, f"battery took {elapsed:.1f}s"
        summary = ", ".join(f"{k}={v:.1e}" for k, v in worst.items())
        _passed(7, f"500 instances/theorem, min slacks {summary}, {elapsed:.1f}s")


class TestCriterion08ParallelEquality:
    def test_phased_sandwich_attains_half_seminorm_sum(self):
        from semiradius.genfuzz import gen_parallel_pair

        worst = 0.0
        meta = np.random.default_rng(1008)
        for i in range(100):
            n = int(meta.choice((2, 3)))
            cfg = GenConfig(seed=1008, n=n)
            w = gen_weight(cfg, i)
            t, s = gen_parallel_pair(cfg, w, i)
            verdict = norm_parallel(t, s)
            assert verdict.holds
            beta = float(np.angle(verdict.witness["lambda"]) / 2.0)
            rep = check_parallel_equality(t, s, beta, verdict=verdict)
            gap = abs(rep.value - rep.extras["target"])
            worst = max(worst, gap)
            assert gap <= 1e-7
        _passed(8, f"100 constructed pairs, worst equality gap {worst:.2e} <= 1e-7")


class TestCriterion09BridgePropositions:
    def test_implications_never_violated(self):
        report = run_campaign(GenConfig(seed=1009, n=3, trials=200), checks=["bridge"])
        rep = report.checks["bridge"]
        assert rep.trials == 200
        assert not report.failing, rep.failures[:2]
        assert rep.min_slack >= 0.0
        _passed(9, "200 hypothesis-bearing instances, zero implication violations")


class TestCriterion10Determinism:
    def test_reports_identical_across_runs_and_sharding(self):
        cfg = GenConfig(seed=2026, n=3, trials=4)
        first = run_campaign(cfg, workers=1).canonical_json()
        second = run_campaign(cfg, workers=1).canonical_json()
        sharded = run_campaign(cfg, workers=4).canonical_json()
        assert first == second
        assert first == sharded
        _passed(10, f"full battery x3 runs byte-identical ({len(first)} bytes)")


def _unit(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)
