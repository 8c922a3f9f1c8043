"""Norm-ratio estimation over test families and per-theorem consistency reports.

A norm-ratio estimate is a sup over finitely many inputs, hence only ever a
lower bound for an operator norm. Verification here means consistency: a
finite criterion should come with ratios that settle under refinement, a
failed one with ratios that blow up along the designed witness family.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import criteria as cr
from .config import ExperimentConfig
from .exponents import check_constant_outside, check_log_holder, conjugate
from .operators import (
    DyadicLattice,
    hardy,
    hilbert,
    maximal_bounded,
    maximal_dyadic,
    maximal_M,
    maximal_window,
)
from .spaces import GridFunction, luxemburg_norm, norm_from_terms, weighted_norm
from .weights import Weight, power_cells, weight_norm

__all__ = [
    "TestFamily",
    "NormRatio",
    "VerificationReport",
    "generate_family",
    "apply_operator",
    "estimate_norm_ratio",
    "verify_theorem",
    "CONSISTENT",
    "INCONSISTENT",
    "HYPOTHESIS_VIOLATED",
    "GROWTH",
]

CONSISTENT = "CONSISTENT"
INCONSISTENT = "INCONSISTENT"
HYPOTHESIS_VIOLATED = "HYPOTHESIS-VIOLATED"

# ratio increase across the resolution sweep that counts as blow-up
GROWTH = 2.0


@dataclass(frozen=True)
class TestFamily:
    kind: str
    seed: int = 0
    count: int = 8
    params: dict = field(default_factory=dict)

    __test__ = False


def _workers():
    env = os.environ.get("VARLP_THREADS")
    return max(1, int(env)) if env else None


def _snap(edges, x):
    return int(np.clip(np.searchsorted(edges, x), 1, len(edges) - 2))


def _random_steps(rng, interval, n):
    """Cell averages of one continuous random step function, so that members
    at different resolutions discretize the same function."""
    pieces = int(rng.integers(8, 65))
    cuts = np.concatenate([[interval[0]], np.sort(rng.uniform(interval[0], interval[1], pieces - 1)), [interval[1]]])
    heights = np.exp(rng.uniform(np.log(1e-2), np.log(1e2), pieces))
    edges = np.linspace(interval[0], interval[1], n + 1)
    mass = np.interp(edges, cuts, np.concatenate([[0.0], np.cumsum(heights * np.diff(cuts))]))
    return GridFunction(tuple(interval), np.diff(mass) / np.diff(edges))


def _power(gamma, interval, n):
    edges = np.linspace(interval[0], interval[1], n + 1)
    u = Weight.power(gamma, 1.0, (0.0, np.inf) if interval[0] >= 0 else (-np.inf, np.inf), "none")
    vals = np.asarray(u.moment(edges[:-1], edges[1:], 1.0), dtype=float) / (edges[1] - edges[0])
    return GridFunction(tuple(interval), vals)


def _extremal_intervals(interval, count):
    lo, hi = interval
    return [(lo, lo + (hi - lo) / 2 ** k) for k in range(count)]


def generate_family(spec: TestFamily, grid, w: Weight = None, p=None):
    """Deterministic list of ``(id, GridFunction)`` on ``grid = (interval, n)``.

    Extremal members are ``chi_I w^-p'`` with w^-p' sampled at midpoints,
    divided by ``beta = ||1/w||_{p'(J)}`` when 1 < beta < inf.
    """
    interval, n = tuple(map(float, grid[0])), int(grid[1])
    kind, out = spec.kind, []
    if kind == "random-steps":
        for i in range(spec.count):
            rng = np.random.default_rng([spec.seed, i])
            out.append((f"random-steps:{spec.seed}:{i}", _random_steps(rng, interval, n)))
    elif kind == "power":
        gammas = spec.params.get("gammas", [-0.5 + e for e in (0.2, 0.1, 0.05, 0.02)])
        out = [(f"power:{g:g}", _power(g, interval, n)) for g in gammas]
    elif kind == "indicators":
        ivs = spec.params.get("intervals")
        if ivs is None:
            rng = np.random.default_rng(spec.seed)
            ivs = [tuple(sorted(rng.uniform(*interval, 2))) for _ in range(spec.count)]
        edges = np.linspace(*interval, n + 1)
        for a, b in ivs:
            i0, i1 = _snap(edges, a) - 1, max(_snap(edges, b), _snap(edges, a))
            vals = np.zeros(n)
            vals[i0:i1] = 1.0
            out.append((f"indicator:[{a:g},{b:g}]", GridFunction(interval, vals)))
    elif kind in ("extremal", "normalized"):
        if w is None or p is None:
            raise ValueError("extremal families need w and p")
        ivs = spec.params.get("intervals") or _extremal_intervals(interval, spec.count)
        g = GridFunction.constant(0.0, interval, n)
        mids = g.midpoints
        with np.errstate(divide="ignore", over="ignore"):
            smid = np.power(w(mids), -conjugate(p)(mids))
        beta = weight_norm(w.reciprocal(), conjugate(p), interval)
        scale = beta if 1.0 < beta < np.inf else 1.0
        for a, b in ivs:
            chi = GridFunction.indicator(a, b, interval, n).values
            vals = np.where(chi > 0, chi * smid, 0.0) / scale
            out.append((f"extremal:[{a:g},{b:g}]", GridFunction(interval, vals)))
    else:
        raise ValueError(f"unknown family kind {kind!r}")
    return out


def apply_operator(op, f: GridFunction, alpha=0.0, v=None, w=None) -> GridFunction:
    if op == "identity":
        return f
    if op == "maximal_bounded":
        return maximal_bounded(f, None, alpha)
    if op == "maximal_dyadic":
        return maximal_dyadic(f, DyadicLattice.for_grid(f), alpha)
    if op == "maximal_window":
        return maximal_window(f, "halfline" if f.interval[0] >= 0 else "line", alpha)
    if op == "maximal_M":
        return maximal_M(f)
    if op == "hilbert":
        return hilbert(f)
    if op in ("hardy", "hardy_dual"):
        return hardy(f, v, w, "forward" if op == "hardy" else "dual")
    raise ValueError(f"unknown operator {op!r}")


@dataclass
class NormRatio:
    sup_ratio: float
    argmax: str
    skipped: int
    ratios: dict


def _hardy_ratio(f, v, w, p, q, op):
    """``||H f||_q / ||f||_p``, with the forward tail beyond the grid in closed form."""
    Hf = apply_operator(op, f, v=v, w=w)
    den = luxemburg_norm(f, p)
    if den == 0:
        return None
    vals, exps, meas = np.abs(Hf.values), q(Hf.midpoints), np.full(f.n, f.h)
    if op == "hardy":
        total = abs(float(np.sum(f.values * power_cells(w, 1.0, f.edges)) * f.h))
        if total > 0:
            qc = q.params["value"] if q.form == "constant" else (q.tail[1] if q.tail else None)
            if qc is None:
                raise ValueError("forward Hardy ratio needs q constant beyond the grid")
            m = float(v.moment(f.interval[1], np.inf, qc))
            vals, exps, meas = np.append(vals, total), np.append(exps, qc), np.append(meas, m)
            if not np.isfinite(m):
                return np.inf
    return norm_from_terms(vals, exps, meas) / den


def estimate_norm_ratio(T, v: Weight, w: Weight, p, family, J, n=None, alpha=0.0, q=None) -> NormRatio:
    """``sup ||v T f|| / ||w f||`` over the family (``||H_{v,w} f||_q / ||f||_p`` for Hardy ids).

    ``family`` is a TestFamily (generated on J with n cells) or a list of
    ``(id, GridFunction)``. Members with a zero denominator are skipped.
    """
    q = p if q is None else q
    members = generate_family(family, (J, n), w, p) if isinstance(family, TestFamily) else list(family)
    if not members:
        raise ValueError("empty family")

    def one(item):
        fid, f = item
        if T in ("hardy", "hardy_dual"):
            return fid, _hardy_ratio(f, v, w, p, q, T)
        den = weighted_norm(f, w, p)
        if den == 0:
            return fid, None
        num = weighted_norm(apply_operator(T, f, alpha), v, p)
        return fid, num / den

    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        results = list(pool.map(one, members))
    ratios = {fid: r for fid, r in results if r is not None}
    skipped = len(results) - len(ratios)
    if not ratios:
        raise ValueError("every family member has a zero denominator")
    best = max(ratios, key=lambda k: ratios[k])
    return NormRatio(float(ratios[best]), best, skipped, ratios)


@dataclass
class VerificationReport:
    theorem: str
    criteria: list
    refinement: list
    family_tables: dict
    hypotheses: dict
    verdict: str
    narrative: str

    def to_dict(self):
        return {
            "theorem": self.theorem,
            "criteria": self.criteria,
            "refinement": self.refinement,
            "family_tables": self.family_tables,
            "hypotheses": self.hypotheses,
            "verdict": self.verdict,
            "narrative": self.narrative,
        }


_OPERATOR = {"T1.1": "maximal_bounded", "C1.1": "maximal_bounded", "T1.2": "maximal_window",
             "T1.3": "maximal_window", "TA": "hardy", "T2.1": "maximal_M", "T2.2": "maximal_M"}


def _criteria_for(theorem, cfg: ExperimentConfig, v, w, p, q, alpha):
    J = cfg.domain.interval
    res = cfg.resolutions
    if theorem == "T1.1":
        return [cr.refine(cr.sawyer_modular, res, v, w, p, alpha, J)]
    if theorem == "C1.1":
        return [cr.refine(cr.trace_condition, res, v, p, alpha, J)]
    if theorem in ("T1.2", "T1.3"):
        dom = "halfline" if theorem == "T1.2" else "line"
        fam = cfg.scan.intervals if isinstance(cfg.scan.intervals, list) else None
        return [cr.sawyer_norm(v, w, p, alpha, dom, cfg.domain.a, fam)]
    if theorem == "TA":
        direction = "Dprime" if cfg.operator.id == "hardy_dual" else "D"
        return [cr.hardy_condition(v, w, p, q, direction, cfg.t_scan())]
    ts = cfg.t_scan()
    if theorem == "T2.1":
        e2 = cr.condition_E(v, w, p, "E2", ts)
        dual = cr._scan_report("condition_E:E2_dual", lambda t: cr.condition_E_at(t, v, w, p, "E2_dual"), ts)
        return [cr.condition_E(v, w, p, "E1", ts), e2, dual, cr.condition_pointwise_22(v, w, ts)]
    if theorem == "T2.2":
        return [cr.condition_E(v, w, p, "E1", ts)]
    raise ValueError(f"unknown theorem {theorem!r}")


def _hypotheses(theorem, cfg, v, w, p, q, reports):
    hyp = {}
    for rep in reports:
        hyp.update(rep.extra.get("hypotheses", {}))
    if theorem in ("T2.1", "T2.2"):
        a = cfg.domain.a
        hyp["log_holder"] = bool(check_log_holder(p, (0.0, a)).holds)
        hyp["constant_outside"] = p.form == "constant" or bool(check_constant_outside(p, a))
    if theorem == "T2.2":
        hyp["increasing"] = v.monotone == "increasing" and w.monotone == "increasing"
    keys = ("log_holder", "doubling", "constant_outside", "p_minus_gt_1", "p_le_q", "increasing")
    ok = all(bool(hyp[k]) for k in keys if k in hyp)
    return hyp, ok


def verify_theorem(theorem, config) -> VerificationReport:
    """Criterion, hypothesis checks and norm ratios at every configured resolution."""
    cfg = config if isinstance(config, ExperimentConfig) else ExperimentConfig.model_validate(config)
    theorem = theorem or cfg.theorem
    p, q = cfg.p(), cfg.q()
    v, w = cfg.weight("v"), cfg.weight("w")
    alpha = cfg.operator.alpha
    op = _OPERATOR[theorem]
    if theorem == "TA" and cfg.operator.id == "hardy_dual":
        op = "hardy_dual"
    if theorem in ("T2.1", "T2.2") and cfg.operator.id in ("hilbert", "maximal_M"):
        op = cfg.operator.id
    if theorem == "C1.1":
        w = Weight.constant(1.0, w.domain)
    reports = _criteria_for(theorem, cfg, v, w, p, q, alpha)
    hyp, hyp_ok = _hypotheses(theorem, cfg, v, w, p, q, reports)

    families = cfg.families or [TestFamily("random-steps", cfg.seed, 8)]
    J = cfg.domain.interval
    refinement, tables = [], {}
    for n in cfg.resolutions:
        best, arg = -np.inf, None
        for fs in families:
            fam = TestFamily(fs.kind, fs.seed, fs.count, dict(fs.params)) if not isinstance(fs, TestFamily) else fs
            est = estimate_norm_ratio(op, v, w, p, fam, J, n, alpha, q)
            tables.setdefault(fam.kind, []).append([int(n), est.sup_ratio, est.argmax])
            if est.sup_ratio > best:
                best, arg = est.sup_ratio, est.argmax
        refinement.append([int(n), best, arg])

    if theorem == "T2.1":
        decisive = [reports[0], reports[2], reports[3]]
        finite = all(r.verdict == cr.HOLDS for r in decisive)
    else:
        finite = all(r.verdict == cr.HOLDS for r in reports)
    ratios = [r for _, r, _ in refinement]
    stable = all(abs(b / a - 1.0) <= cr.STABILITY for a, b in zip(ratios, ratios[1:]))
    witness_kind = "extremal" if "extremal" in tables else ("normalized" if "normalized" in tables else None)
    series = [r for _, r, _ in tables[witness_kind]] if witness_kind else ratios
    growth = series[-1] / series[0] if series[0] > 0 else np.inf

    if finite:
        verdict = CONSISTENT if stable else INCONSISTENT
        narrative = (f"criterion finite; ratio {'stable' if stable else 'unstable'} across "
                     f"n={cfg.resolutions} ({ratios[0]:.6g} -> {ratios[-1]:.6g})")
    elif theorem == "T2.1":
        verdict = CONSISTENT
        narrative = "sufficient condition not met; the imported sufficient condition makes no prediction"
    else:
        verdict = CONSISTENT if growth >= GROWTH else INCONSISTENT
        narrative = (f"criterion fails; {witness_kind or 'family'} ratio grows x{growth:.3g} "
                     f"across n={cfg.resolutions}")
    if not hyp_ok:
        narrative = f"hypotheses violated ({verdict} otherwise): " + narrative
        verdict = HYPOTHESIS_VIOLATED
    if theorem == "T2.1":
        narrative += "; conclusion imported sufficient condition"
    return VerificationReport(theorem, [r.to_dict() for r in reports], refinement, tables, hyp, verdict, narrative)
