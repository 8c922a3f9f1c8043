"""Acceptance suite: one test per criterion, summarized at the end of the pytest run."""

import time

import numpy as np
import pytest

from varlp.cli import main
from varlp.config import bundled_configs, load_config
from varlp.criteria import FAILS, e1_lower_bound_constant, hardy_condition, log_scan, monotone_implication_25
from varlp.criteria import condition_E, sawyer_modular
from varlp.exponents import ExponentFunction
from varlp.harness import CONSISTENT, TestFamily, estimate_norm_ratio, generate_family, verify_theorem
from varlp.operators import DyadicLattice, hilbert, level_decomposition, maximal_bounded
from varlp.spaces import GridFunction, holder_check, luxemburg_norm, modular
from varlp.weights import Weight

ONE = Weight.constant(1.0)
P2 = ExponentFunction.constant(2.0)
AFFINE = ExponentFunction.affine(2.0, 1.0, (0.0, 0.5))


def test_criterion_1_norm_golden_values():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for i in range(100):
        f = GridFunction((0, 1), rng.uniform(-5, 5, 512))
        pc = float(rng.uniform(1.1, 8.0))
        classical = (np.sum(np.abs(f.values) ** pc) * f.h) ** (1 / pc)
        worst = max(worst, abs(luxemburg_norm(f, ExponentFunction.constant(pc)) / classical - 1))
    two_piece = ExponentFunction.piecewise([0.0, 0.5, 1.0], [2.0, 3.0])
    golden = luxemburg_norm(GridFunction.constant(2.0, (0, 1), 512), two_piece)
    elapsed = time.perf_counter() - start
    assert worst <= 1e-6
    assert abs(golden - 2.0) <= 1e-9
    assert elapsed < 5.0


def _seeded_suite():
    suite = []
    for seed in range(5):
        for interval in ((0.0, 1.0), (0.0, 0.5)):
            suite += [f for _, f in generate_family(TestFamily("random-steps", seed, 10), (interval, 256))]
    return suite


def test_criterion_2_unit_ball_identity():
    exps = {(0.0, 1.0): [P2, ExponentFunction.piecewise([0.0, 0.5, 1.0], [2.0, 3.0]),
                         ExponentFunction.affine(1.5, 2.0, (0.0, 1.0))],
            (0.0, 0.5): [AFFINE, ExponentFunction.constant(1.3)]}
    bad = 0
    for f in _seeded_suite():
        for p in exps[f.interval]:
            s = modular(f * (1 / luxemburg_norm(f, p)), p)
            bad += not (0.9999 <= s <= 1.0001)
    assert bad == 0


def test_criterion_3_holder_property():
    rng = np.random.default_rng(3)
    violations = 0
    for _ in range(1000):
        n = int(rng.integers(8, 129))
        f = GridFunction((0, 0.5), rng.normal(size=n) * np.exp(rng.uniform(-3, 3)))
        g = GridFunction((0, 0.5), rng.normal(size=n) * np.exp(rng.uniform(-3, 3)))
        violations += holder_check(f, g, AFFINE).ratio > 1.0
    assert violations == 0


def _dyadic_maximal(f):
    """Max over dyadic ancestors of the block averages, by reshaping."""
    out = np.zeros(f.n)
    d = 0
    while 2 ** d <= f.n:
        block = f.n // 2 ** d
        avgs = np.abs(f.values).reshape(2 ** d, block).mean(axis=1)
        out = np.maximum(out, np.repeat(avgs, block))
        d += 1
    return out


def test_criterion_4_dyadic_decomposition():
    start = time.perf_counter()
    n, violations = 256, 0
    fams = [f for s in range(5) for _, f in generate_family(TestFamily("random-steps", 100 + s, 10), ((0, 1), n))]
    assert len(fams) == 50
    for f in fams:
        lat = DyadicLattice.for_grid(f)
        M = _dyadic_maximal(f)
        owner = np.zeros(n, dtype=int)
        lo, hi = int(np.floor(np.log2(M.min()))) - 1, int(np.ceil(np.log2(M.max()))) + 1
        for k in range(lo, hi + 1):
            level_set = M > 2.0 ** k
            if not level_set.any():
                continue
            dec = level_decomposition(f, lat, 0.0, k)
            cover = np.zeros(n, dtype=int)
            for iv, shard in zip(dec.maximal_intervals, dec.shards):
                cover[iv.cells[0]:iv.cells[1]] += 1
                violations += not np.all((shard >= iv.cells[0]) & (shard < iv.cells[1]))
                owner[shard] += 1
            violations += int(np.any(cover > 1))                     # I_j^k pairwise disjoint
            violations += int(np.any((cover > 0) != level_set))      # union equals the level set
        violations += int(np.any(owner > 1))                         # E_j^k disjoint over all (j, k)
    elapsed = time.perf_counter() - start
    assert violations == 0
    assert elapsed < 10.0


def test_criterion_5_indicator_pointwise():
    rng = np.random.default_rng(5)
    n = 128
    for _ in range(20):
        a, b = sorted(rng.choice(n + 1, 2, replace=False))
        alpha = float(rng.choice([0.0, 0.1, 0.25, 0.5, 0.75, 0.9]))
        chi = GridFunction.indicator(a / n, b / n, (0, 1), n)
        M = maximal_bounded(chi, None, alpha).values
        inside = M[a:b]
        assert np.all(inside == ((b - a) / n) ** alpha)


def test_criterion_6_sawyer_baseline():
    rep = sawyer_modular(ONE, ONE, P2, 0.0, (0, 1), n=128)
    assert abs(rep.best_constant - 1.0) <= 1e-6
    cfg = load_config("bundled:T1.1")
    assert cfg.resolutions == [256, 512]
    ver = verify_theorem("T1.1", cfg)
    r256, r512 = (r for _, r, _ in ver.refinement)
    assert ver.verdict == CONSISTENT and abs(r512 / r256 - 1) <= 0.10


def test_criterion_7_hardy_bracket():
    v = Weight.power(-1.0)
    D = hardy_condition(v, ONE, P2, P2, "D")
    assert abs(D.best_constant - 1.0) <= 1e-4
    fam = TestFamily("power", params={"gammas": [-0.3, -0.4, -0.45, -0.48]})
    est = estimate_norm_ratio("hardy", v, ONE, P2, fam, (0, 1), 4096)
    assert 1.8 <= est.sup_ratio <= 2.0
    assert D.best_constant <= est.sup_ratio


def test_criterion_8_divergence_detection():
    cfg = load_config("bundled:T1.1-failing").model_dump()
    cfg["resolutions"] = [128, 512]
    rep = verify_theorem("T1.1", cfg)
    assert rep.criteria[0]["verdict"] == FAILS
    ext = {n: r for n, r, _ in rep.family_tables["extremal"]}
    assert ext[512] / ext[128] >= 2.0
    assert rep.verdict == CONSISTENT


@pytest.mark.parametrize("a,c,p", [(0.1, 1.0, 2.0), (0.2, 1.0, 2.0), (0.3, 2.0, 2.0), (0.4, 1.0, 3.0)])
def test_criterion_9_increasing_weight_chain(a, c, p):
    v = Weight.power(a, c, monotone="increasing")
    w = Weight.power(a, 1.0, monotone="increasing")
    P = ExponentFunction.constant(p)
    ts = log_scan(1e-3, 1e3, 61)
    assert condition_E(v, w, P, "E1", ts).verdict == "holds"
    assert np.isfinite(monotone_implication_25(v, w, ts).best_constant)
    K = e1_lower_bound_constant(v, w, P, ts)
    assert np.isfinite(K.best_constant)
    for t, e1 in zip(ts, K.extra["e1"]):
        assert e1 >= v(t) / (K.best_constant * w(t / 4)) * (1 - 1e-12)
    K2 = e1_lower_bound_constant(v, w, P, log_scan(1e-3, 1e3, 121))
    assert abs(K2.best_constant / K.best_constant - 1) <= 0.10


def test_criterion_10_hilbert_accuracy():
    n = 400
    f = GridFunction.indicator(0.0, 1.0, (-1.0, 3.0), n)
    x = f.midpoints
    H = hilbert(f).values
    far = (np.abs(x) >= f.h) & (np.abs(x - 1) >= f.h)
    assert np.max(np.abs(H[far] - np.log(np.abs(x[far] / (x[far] - 1))))) <= 1e-6
    assert abs(hilbert(f, [0.5])[0]) <= 1e-12


def _run_suite(out):
    codes = {}
    for name in bundled_configs():
        cfg = load_config(f"bundled:{name}")
        cmd = "verify" if cfg.theorem else "check"
        codes[name] = main([cmd, "--config", f"bundled:{name}", "--out", str(out / name)])
    return codes


def test_criterion_11_determinism(tmp_path):
    first, second = _run_suite(tmp_path / "a"), _run_suite(tmp_path / "b")
    assert first == second
    files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*.json"))
    assert len(files) == len(bundled_configs())
    for rel in files:
        assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes(), rel
