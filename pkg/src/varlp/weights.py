"""Weights, the dual weight sigma = w^(-p'), weight measures and the doubling test."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exponents import DomainError, ExponentFunction, conjugate
from .spaces import GridFunction, norm_from_terms, DEFAULT_TOL

__all__ = [
    "Weight",
    "DoublingReport",
    "sigma",
    "power_cells",
    "measure_of",
    "check_doubling",
    "window_extrema",
    "weight_norm",
]

_MONOTONE = ("increasing", "decreasing", "none")


def _abs_power_primitive(x, g):
    """A primitive of |x|^g, vanishing at 0 when g > -1."""
    x = np.asarray(x, dtype=float)
    g = np.asarray(g, dtype=float)
    ax = np.abs(x)
    sgn = np.sign(x)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        log_branch = sgn * np.log(ax)
        pow_branch = sgn * np.power(ax, g + 1.0) / (g + 1.0)
        out = np.where(g == -1.0, log_branch, pow_branch)
        inf_val = np.where(g >= -1.0, sgn * np.inf, 0.0)
    return np.where(np.isinf(x), inf_val, out)


def _abs_power_integral(lo, hi, g):
    """Exact ``int_lo^hi |x|^g dx`` for lo <= hi (inf when divergent)."""
    lo, hi, g = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (lo, hi, g)))
    with np.errstate(invalid="ignore"):
        val = _abs_power_primitive(hi, g) - _abs_power_primitive(lo, g)
    crosses = (lo <= 0) & (hi >= 0) & (g <= -1.0)
    val = np.where(crosses, np.inf, val)
    return np.where(hi > lo, val, 0.0)


@dataclass(frozen=True, eq=False)
class Weight:
    """A nonnegative weight ``c_i |x|^beta_i`` on the pieces ``[b_i, b_{i+1})``.

    Power weights, piecewise-power weights and tabulated step weights are all
    stored this way. Outside its domain the weight is extended by zero.
    ``monotone`` is declared metadata, checked by a scan at construction.
    """

    breaks: np.ndarray
    coefs: np.ndarray
    exps: np.ndarray
    monotone: str = "none"
    form: str = "piecewise-power"

    def __post_init__(self):
        b = np.asarray(self.breaks, dtype=float)
        c = np.asarray(self.coefs, dtype=float)
        e = np.asarray(self.exps, dtype=float)
        if b.ndim != 1 or len(b) != len(c) + 1 or c.shape != e.shape:
            raise ValueError("need len(breaks) == len(coefs) + 1 == len(exps) + 1")
        if np.any(np.diff(b) <= 0):
            raise ValueError("breaks must be strictly increasing")
        if np.any(c < 0) or np.any(np.isnan(c)):
            raise ValueError("weights are nonnegative")
        if self.monotone not in _MONOTONE:
            raise ValueError(f"monotone must be one of {_MONOTONE}")
        object.__setattr__(self, "breaks", b)
        object.__setattr__(self, "coefs", c)
        object.__setattr__(self, "exps", e)
        if self.monotone != "none":
            self._validate_monotone()

    # constructors ------------------------------------------------------

    @classmethod
    def power(cls, beta, c=1.0, domain=(0.0, np.inf), monotone=None):
        """``c |x|^beta``; monotonicity is inferred when not given."""
        if monotone is None:
            lo = domain[0]
            if beta == 0 or c == 0:
                monotone = "increasing"
            elif lo >= 0:
                monotone = "increasing" if beta > 0 else "decreasing"
            else:
                monotone = "none"
        return cls(np.array(domain, dtype=float), np.array([c], dtype=float),
                   np.array([beta], dtype=float), monotone, "power")

    @classmethod
    def constant(cls, c=1.0, domain=(0.0, np.inf)):
        return cls.power(0.0, c, domain)

    @classmethod
    def piecewise_power(cls, breaks, coefs, exps, monotone="none"):
        return cls(np.asarray(breaks, float), np.asarray(coefs, float),
                   np.asarray(exps, float), monotone, "piecewise-power")

    @classmethod
    def tabulated(cls, f: GridFunction, monotone="none"):
        return cls(f.edges, np.abs(f.values), np.zeros(f.n), monotone, "tabulated")

    # derived weights ---------------------------------------------------

    def _derive(self, coefs, exps, monotone="none"):
        return Weight(self.breaks, coefs, exps, monotone, self.form)

    def reciprocal(self):
        with np.errstate(divide="ignore"):
            c = 1.0 / self.coefs
        flip = {"increasing": "decreasing", "decreasing": "increasing"}.get(self.monotone, "none")
        return self._derive(c, -self.exps, flip)

    def times_power(self, gamma):
        """``w(x) |x|^gamma``."""
        return self._derive(self.coefs, self.exps + gamma)

    def scaled(self, c):
        return self._derive(self.coefs * c, self.exps, self.monotone)

    # evaluation --------------------------------------------------------

    @property
    def domain(self):
        return float(self.breaks[0]), float(self.breaks[-1])

    def _piece(self, x):
        return np.clip(np.searchsorted(self.breaks, x, side="right") - 1, 0, len(self.coefs) - 1)

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        x = np.atleast_1d(np.asarray(x, dtype=float))
        i = self._piece(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = self.coefs[i] * np.power(np.abs(x), self.exps[i])
        v = np.where(self.coefs[i] == 0, 0.0, v)
        lo, hi = self.domain
        v = np.where((x < lo) | (x > hi), 0.0, v)
        return float(v[0]) if scalar else v

    def singular_points(self):
        """Points where the weight vanishes or blows up like a power: ``[(x0, order)]``."""
        out = []
        for i in range(len(self.coefs)):
            if self.exps[i] != 0 and self.breaks[i] <= 0 <= self.breaks[i + 1] and self.coefs[i] > 0:
                out.append((0.0, float(self.exps[i])))
        return out

    def moment(self, a, b, e=1.0):
        """Exact ``int_a^b w(x)^e dx`` (vectorized; ``e`` broadcasts with a, b)."""
        a, b, e = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, e)))
        if e.ndim == 0 or np.all(e == e.flat[0]):
            fast = self._fast_moment(a, b, float(e.flat[0]) if e.size else 1.0)
            if fast is not None:
                return fast
        total = np.zeros(a.shape)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            for i in range(len(self.coefs)):
                lo = np.maximum(a, self.breaks[i])
                hi = np.minimum(b, self.breaks[i + 1])
                ce = np.power(self.coefs[i], e)
                piece = _abs_power_integral(lo, hi, self.exps[i] * e)
                # a zero coefficient with e > 0 contributes nothing, even on a divergent piece
                contrib = np.where((hi > lo) & (ce != 0), ce * piece, 0.0)
                total = total + np.where(np.isnan(contrib), np.inf, contrib)
        return total

    def _fast_moment(self, a, b, e):
        if np.any(self.exps != 0) or not np.isfinite(self.breaks).all():
            return None
        with np.errstate(divide="ignore", over="ignore"):
            dens = np.power(self.coefs, e)
        if np.any(np.isinf(dens)):
            return None
        cum = np.concatenate([[0.0], np.cumsum(dens * np.diff(self.breaks))])
        Fa = np.interp(a, self.breaks, cum)
        Fb = np.interp(b, self.breaks, cum)
        return np.where(b > a, Fb - Fa, 0.0)

    def integral(self, a, b):
        return self.moment(a, b, 1.0)

    def to_grid(self, f_or_interval, n=None) -> GridFunction:
        """Midpoint samples of the weight on a grid."""
        if isinstance(f_or_interval, GridFunction):
            interval, n = f_or_interval.interval, f_or_interval.n
        else:
            interval = f_or_interval
        return GridFunction.from_callable(self, interval, n)

    def _validate_monotone(self):
        lo, hi = self.domain
        pts = []
        for i in range(len(self.coefs)):
            l, h = self.breaks[i], self.breaks[i + 1]
            if np.isfinite(l) and np.isfinite(h):
                pts.append(np.linspace(l, h, 33)[:-1])
            else:
                l2 = l if np.isfinite(l) else -1e8
                h2 = h if np.isfinite(h) else 1e8
                if l2 >= 0:
                    pts.append(np.geomspace(max(l2, 1e-8), h2, 65)[:-1])
                elif h2 <= 0:
                    pts.append(-np.geomspace(max(-h2, 1e-8), -l2, 65)[::-1][1:])
                else:
                    pts.append(np.concatenate([-np.geomspace(1e-8, -l2, 33)[::-1], np.geomspace(1e-8, h2, 33)]))
        x = np.unique(np.concatenate(pts))
        x = x[(x > lo) | ((x == lo) & (lo != 0 or np.all(self.exps >= 0)))]
        v = self(x)
        d = np.diff(v)
        slack = 1e-12 * np.maximum(np.abs(v[1:]), np.abs(v[:-1]))
        ok = np.all(d >= -slack) if self.monotone == "increasing" else np.all(d <= slack)
        if not ok:
            raise ValueError(f"weight is not {self.monotone} on a cell scan of its domain")


def power_cells(w: Weight, e_cells, edges, e_at=None):
    """Cellwise averages of ``w^e``: midpoint samples, except on cells touching a
    singular point of w, where the exact power integral is used with the
    exponent frozen at ``e_at(x0)`` (or the cell exponent when not given)."""
    edges = np.asarray(edges, dtype=float)
    e_cells = np.broadcast_to(np.asarray(e_cells, dtype=float), (len(edges) - 1,)).copy()
    mids = 0.5 * (edges[:-1] + edges[1:])
    wm = w(mids)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.where(wm == 0, np.where(e_cells < 0, np.inf, np.where(e_cells == 0, 1.0, 0.0)),
                       np.power(wm, e_cells))
    for x0, _order in w.singular_points():
        touch = np.nonzero((edges[:-1] <= x0) & (edges[1:] >= x0))[0]
        for k in touch:
            ek = e_cells[k] if e_at is None else float(e_at(x0))
            width = edges[k + 1] - edges[k]
            out[k] = float(w.moment(edges[k], edges[k + 1], ek)) / width
    return out


def sigma(w: Weight, p: ExponentFunction, J, n: int = 512) -> GridFunction:
    """``w^(-p'(x))`` cellwise on an n-cell grid of J (``inf`` where w vanishes
    so that sigma is not integrable on the cell)."""
    pc = conjugate(p)
    edges = np.linspace(J[0], J[1], n + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    vals = power_cells(w, -pc(mids), edges, e_at=lambda x0: -_exp_at(pc, x0))
    return GridFunction(tuple(J), vals)


def _exp_at(p, x0):
    lo, hi = p.domain
    return p(min(max(x0, lo), hi))


def measure_of(u: Weight, E) -> float:
    """``u(E)`` for an interval ``(a, b)`` or a list of disjoint intervals."""
    if len(E) == 2 and np.ndim(E[0]) == 0:
        E = [E]
    return float(sum(float(u.integral(a, b)) for a, b in E))


@dataclass
class DoublingReport:
    holds: bool
    best_b: float
    witness: tuple
    scan: dict


def check_doubling(u: Weight, J, x_points=257, r_points=65, r_min=None) -> DoublingReport:
    """Largest ``u(I(x,2r) & J) / u(I(x,r) & J)`` over an (x, r) scan.

    ``x_points`` / ``r_points`` are counts (x linear over J, r geometric in
    ``[r_min, |J|)``) or explicit sequences. Null windows (0/0) are skipped.
    """
    lo, hi = float(J[0]), float(J[1])
    length = hi - lo
    if float(u.integral(lo, hi)) == 0:
        raise ValueError("degenerate weight: u(J) = 0")
    xs = np.linspace(lo, hi, x_points) if np.ndim(x_points) == 0 else np.asarray(x_points, float)
    if np.ndim(r_points) == 0:
        rmin = length * 2.0 ** -12 if r_min is None else r_min
        rs = np.geomspace(rmin, length, r_points + 1)[:-1]
    else:
        rs = np.asarray(r_points, float)
    if np.any(rs <= 0) or np.any(rs >= length):
        raise ValueError("radii must lie in (0, |J|)")
    X, R = np.meshgrid(xs, rs, indexing="ij")
    num = u.integral(np.clip(X - 2 * R, lo, hi), np.clip(X + 2 * R, lo, hi))
    den = u.integral(np.clip(X - R, lo, hi), np.clip(X + R, lo, hi))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(den > 0, num / den, np.where(num > 0, np.inf, -np.inf))
    flat = int(np.argmax(ratio))
    i, j = np.unravel_index(flat, ratio.shape)
    best = float(ratio[i, j]) if ratio[i, j] > -np.inf else 0.0
    scan = {"x_points": len(xs), "r_points": len(rs), "r_range": [float(rs.min()), float(rs.max())]}
    return DoublingReport(bool(np.isfinite(best)), best, (float(xs[i]), float(rs[j])), scan)


def window_extrema(w: Weight, x: float, mode: str = "sup") -> float:
    """``w_-([x/4, 4x])`` or ``w_+([x/4, 4x])`` over the window within the domain."""
    if x <= 0:
        raise DomainError("window extrema need x > 0")
    if mode not in ("inf", "sup"):
        raise ValueError("mode is 'inf' or 'sup'")
    lo, hi = w.domain
    a, b = max(x / 4.0, lo), min(4.0 * x, hi)
    if a > b:
        raise DomainError(f"window [{x / 4}, {4 * x}] misses the weight domain")
    vals = []
    for i in range(len(w.coefs)):
        l, h = max(a, w.breaks[i]), min(b, w.breaks[i + 1])
        if l > h or (l == h and l != a):
            continue
        with np.errstate(divide="ignore"):
            ends = w.coefs[i] * np.power(np.abs([l, h]), w.exps[i])
        vals.extend(np.where(w.coefs[i] == 0, 0.0, ends).tolist())
    return float(min(vals) if mode == "inf" else max(vals))


def weight_norm(w: Weight, p: ExponentFunction, interval, n: int = 512, tol=DEFAULT_TOL) -> float:
    """``||w||_{L^p(.)(a, b)}`` for a weight, via exact cell moments.

    Wherever p is constant (a constant exponent, or beyond the tail
    compactum) the modular of that stretch is one closed-form power moment,
    so unbounded intervals are handled without truncation. Elsewhere the
    interval is cut into n cells with the exponent frozen at the midpoint
    (at the singular point for cells touching one). Returns ``inf`` when the
    weight is not p-integrable there.
    """
    a, b = float(interval[0]), float(interval[1])
    if not b > a:
        return 0.0
    segments = []
    if p.form == "constant":
        segments.append((a, b, None))
    elif p.tail is not None:
        clo, chi = p.compactum
        if a < clo:
            segments.append((a, min(b, clo), None))
        if b > clo and a < chi:
            segments.append((max(a, clo), min(b, chi), "grid"))
        if b > chi:
            segments.append((max(a, chi), b, None))
    else:
        if not (np.isfinite(a) and np.isfinite(b)):
            raise DomainError("variable exponent without a tail on an unbounded interval")
        segments.append((a, b, "grid"))
    exps, moms = [], []
    for lo, hi, kind in segments:
        if kind is None:
            pc = p.params["value"] if p.form == "constant" else p.tail[1]
            exps.append(np.array([pc]))
            moms.append(np.atleast_1d(w.moment(lo, hi, pc)))
        else:
            edges = np.linspace(lo, hi, n + 1)
            e = p(0.5 * (edges[:-1] + edges[1:]))
            for x0, _ in w.singular_points():
                touch = (edges[:-1] <= x0) & (edges[1:] >= x0)
                e = np.where(touch, _exp_at(p, x0), e)
            exps.append(e)
            moms.append(w.moment(edges[:-1], edges[1:], e))
    e = np.concatenate(exps)
    m = np.concatenate(moms)
    if np.any(np.isinf(m)):
        return np.inf
    return norm_from_terms(np.ones_like(m), e, m, tol)
