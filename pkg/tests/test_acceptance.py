"""Acceptance gate. Each test records one PASS/FAIL line; conftest.py prints
them in the terminal summary."""

import itertools
import random
import time
from fractions import Fraction

import numpy as np
import pytest

import oracles
from ifsad.cli import main
from ifsad.fusion import ifwg_fuse, rank
from ifsad.fuzzifier import Fuzzifier
from ifsad.graph_metrics import build_snapshot, compute_characteristics
from ifsad.partition import ClusterConfig, fit_partition, make_partition
from ifsad.pipeline import ABNORMAL, CharacteristicMatrix, PipelineConfig, baseline_predictions, detect, evaluate
from ifsad.synthetic import generate_sequence

SEEDS = range(20)
RESULT_LINES: list[str] = []


def report(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    RESULT_LINES.append(line)
    print("\n" + line)
    assert ok, detail


def random_fuzzifier(rng, alpha, beta):
    m = int(rng.integers(1, 9))
    scale = 10.0 ** rng.uniform(-3, 3)
    centers = np.sort(rng.uniform(-1, 1, m)) * scale
    if m > 1 and np.min(np.diff(centers)) < 1e-6 * scale:
        centers = np.linspace(-scale, scale, m)
    pad = scale * rng.uniform(0.01, 0.5)
    return Fuzzifier(make_partition(centers, centers[0] - pad, centers[-1] + pad), alpha, beta)


def test_ifs_validity():
    rng = np.random.default_rng(0)
    n_parts, per_part = 25_000, 4
    start = time.perf_counter()
    worst_sum, worst_neg = -np.inf, np.inf
    for _ in range(n_parts):
        alpha = rng.uniform(0, 0.9)
        beta = rng.uniform(0, 1) or 1.0
        f = random_fuzzifier(rng, alpha, beta)
        span = f.partition.domain_hi - f.partition.domain_lo
        x = f.partition.domain_lo + span * rng.uniform(-3, 4, per_part)
        t = f.fuzzify_array(x)
        worst_sum = max(worst_sum, float(np.max(t[..., 0] + t[..., 1])))
        worst_neg = min(worst_neg, float(np.min(t[..., :2])))
    elapsed = time.perf_counter() - start
    ok = worst_neg >= 0 and worst_sum <= 1 + 1e-12 and elapsed < 10
    report(
        "IFS validity",
        ok,
        f"{n_parts * per_part} draws, min(mu, gamma)={worst_neg:.3g}, "
        f"max(mu+gamma)={worst_sum!r}, {elapsed:.2f}s (limit 10s)",
    )


def dyadic_fuzzifier(rng, alpha):
    # centres on a power-of-two grid, so every midpoint is exact in floating point
    m = int(rng.integers(2, 9))
    ints = np.sort(rng.choice(2**20, m, replace=False)) - 2**19
    v = ints * 2.0 ** int(rng.integers(-20, 11))
    return Fuzzifier(make_partition(v, v[0] - 1.0, v[-1] + 1.0), alpha, 0.5)


def test_membership_rules():
    rng = np.random.default_rng(1)
    err_center = err_mid = 0.0
    for _ in range(2000):
        alpha = rng.uniform(0, 0.9)
        f = dyadic_fuzzifier(rng, alpha)
        v = f.centers
        err_center = max(err_center, float(np.max(np.abs(np.diag(f.memberships(v)) - 1))))
        for i in range(len(v)):
            gaps = [abs(v[j] - v[i]) for j in (i - 1, i + 1) if 0 <= j < len(v)]
            nb = min(gaps)
            mids = np.array([v[i] - nb / 2, v[i] + nb / 2])
            got = f.memberships(mids)[:, i]
            err_mid = max(err_mid, float(np.max(np.abs(got - (1 - alpha) / 2))))
    ok = err_center <= 1e-12 and err_mid <= 1e-12
    report("membership rules", ok, f"max |mu(v_i) - 1|={err_center:.3g}, max |mu(mid) - (1-a)/2|={err_mid:.3g} (tol 1e-12)")


def valid_triple(rng):
    mu = float(rng.uniform())
    kind = rng.integers(4)
    if kind == 0:
        mu = float(rng.choice([0.0, 1.0]))
    gamma = float(rng.uniform(0, 1 - mu))
    if kind == 1:
        gamma = 1 - mu
    if Fraction(mu) + Fraction(gamma) > 1:
        gamma = 0.0
    return (mu, gamma, 1 - mu - gamma)


def test_ifwg_oracle():
    rng = np.random.default_rng(2)
    err = 0.0
    exact = True
    for _ in range(20_000):
        p = int(rng.integers(1, 5))
        col = [valid_triple(rng) for _ in range(p)]
        w = rng.uniform(0.01, 1, p)
        w /= w.sum()
        got = ifwg_fuse(col, w)
        mu, gamma = oracles.ifwg_direct(col, w)
        err = max(err, abs(got.mu - mu), abs(got.gamma - gamma))
        t = col[0]
        same = ifwg_fuse([t] * p, w)
        one = ifwg_fuse([t], [1.0])
        exact &= (same.mu, same.gamma) == t[:2] and (one.mu, one.gamma) == t[:2]
    ok = err <= 1e-12 and exact
    report("IFWG oracle", ok, f"max deviation {err:.3g} (tol 1e-12); idempotency and p=1 identity exact: {exact}")


RANK_FIXTURES = [
    [(0.9, 0.05), (0.2, 0.7), (0.4, 0.4), (0.5, 0.2), (0.6, 0.3)],
    [(0.3, 0.3), (0.3, 0.3), (0.0, 0.0), (0.2, 0.2), (0.1, 0.1)],
    [(0.45, 0.15), (0.5, 0.2), (0.4, 0.1), (0.7, 0.1), (0.0, 1.0)],
    [(1.0, 0.0), (0.0, 0.0), (0.0, 1.0), (0.5, 0.5), (0.25, 0.25)],
    [(0.6, 0.2), (0.7, 0.3), (0.55, 0.15), (0.65, 0.25), (0.4, 0.0)],
]


def test_ranking_oracle():
    checked = mismatches = 0
    for fixture in RANK_FIXTURES:
        for perm in itertools.permutations(fixture):
            checked += 1
            mismatches += list(rank(perm).order) != oracles.pairwise_rank(perm)
    report("ranking oracle", mismatches == 0, f"{checked} permutations, {mismatches} mismatches")


def test_graph_metric_oracles():
    rng = random.Random(11)
    start = time.perf_counter()
    err = 0.0
    for _ in range(200):
        edges = oracles.random_small_graph(rng, max_nodes=8)
        got = np.array(compute_characteristics(build_snapshot(edges)))
        err = max(err, float(np.max(np.abs(got - oracles.all_characteristics(edges)))))
    elapsed = time.perf_counter() - start
    ok = err <= 1e-9 and elapsed < 30
    report("graph metric oracles", ok, f"200 graphs, 11 metrics, max deviation {err:.3g} (tol 1e-9), {elapsed:.2f}s (limit 30s)")


def test_fcm_behaviour():
    rng = np.random.default_rng(3)
    rises = runs = 0
    for _ in range(300):
        x = np.concatenate([rng.normal(rng.uniform(-5, 5), rng.uniform(0.1, 2), rng.integers(5, 40)) for _ in range(3)])
        for m in (2, 3, 4):
            h = np.array(fit_partition(x, m, ClusterConfig(method="fcm")).objective_history)
            runs += 1
            rises += bool(np.any(np.diff(h) > 1e-12 * h[0]))
    center_err = 0.0
    for _ in range(200):
        a = rng.uniform(-100, 100)
        b = a + rng.uniform(1, 100)
        x = [a] * int(rng.integers(1, 30)) + [b] * int(rng.integers(1, 30))
        for method in ("fcm", "ifcm"):
            p = fit_partition(x, 2, ClusterConfig(method=method))
            center_err = max(center_err, float(np.max(np.abs(p.centers - [a, b]))))
    ok = rises == 0 and center_err <= 1e-6
    report("FCM behaviour", ok, f"{rises}/{runs} objective histories rose; point-mass centre error {center_err:.3g} (tol 1e-6)")


@pytest.fixture(scope="module")
def synthetic_suite():
    start = time.perf_counter()
    suite = []
    for seed in SEEDS:
        seq = generate_sequence(seed)
        suite.append((CharacteristicMatrix.from_snapshots(seq.snapshots), np.asarray(seq.labels)))
    return suite, time.perf_counter() - start


def run_accuracy(c, labels, m):
    model, results = detect(c, PipelineConfig(m=m, alpha=0.2, beta=0.5, weights="uniform"))
    return model, evaluate([r.binary_abnormal for r in results], labels).a


def test_synthetic_end_to_end(synthetic_suite):
    suite, build_time = synthetic_suite
    start = time.perf_counter()
    acc, node, diam = [], [], []
    for c, labels in suite:
        model, a = run_accuracy(c, labels, 3)
        acc.append(a)
        for name, sink in (("node_size", node), ("diameter_max", diam)):
            preds = [p == ABNORMAL for p in baseline_predictions(model, c, name)]
            sink.append(evaluate(preds, labels).a)
    elapsed = build_time + time.perf_counter() - start
    mean, mnode, mdiam = np.mean(acc), np.mean(node), np.mean(diam)
    ok = mean >= 0.90 and mean > mnode and mean > mdiam and elapsed < 120
    report(
        "synthetic end-to-end",
        ok,
        f"mean accuracy {mean:.4f} over {len(acc)} seeds (min {min(acc):.2f}); "
        f"node_size {mnode:.4f}, diameter_max {mdiam:.4f}; {elapsed:.1f}s (limit 120s)",
    )


def test_sweep_m3_vs_m8(synthetic_suite):
    suite, _ = synthetic_suite
    a3 = [run_accuracy(c, labels, 3)[1] for c, labels in suite]
    a8 = [run_accuracy(c, labels, 8)[1] for c, labels in suite]
    wins = sum(x >= y for x, y in zip(a3, a8))
    ok = np.mean(a3) >= np.mean(a8)
    report("sweep m=3 vs m=8", ok, f"mean accuracy {np.mean(a3):.4f} at m=3, {np.mean(a8):.4f} at m=8; m=3 >= m=8 on {wins}/{len(a3)} seeds")


def test_determinism(tmp_path):
    data = tmp_path / "data"
    assert main(["synth", "-o", str(data), "--seed", "5"]) == 0
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        code = main([
            "detect", "--edges", str(data / "edges.txt"), "--labels", str(data / "labels.csv"),
            "--window", "60", "-o", str(out), "--svg", "--sweep", "2..4",
        ])
        assert code == 0
        outs.append(out)
    files = sorted(p.name for p in outs[0].iterdir())
    same = all((outs[0] / f).read_bytes() == (outs[1] / f).read_bytes() for f in files)
    ok = same and len(files) == 5
    report("determinism", ok, f"{len(files)} report files ({', '.join(files)}) byte-identical: {same}")
