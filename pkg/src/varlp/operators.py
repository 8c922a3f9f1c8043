"""Discretized maximal, singular and Hardy operators on step functions.

Every operator here is exact on the class of step functions it is given:
interval suprema are reduced to finite candidate sets that provably contain
the optimum, and integrals come from the piecewise-linear primitive.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .exponents import DomainError
from .spaces import AlignmentError, GridFunction
from .weights import Weight, power_cells

__all__ = [
    "DyadicLattice",
    "DyadicInterval",
    "DyadicDecomposition",
    "interval_average_table",
    "maximal_bounded",
    "maximal_dyadic",
    "maximal_shifted",
    "level_decomposition",
    "maximal_window",
    "maximal_M",
    "hilbert",
    "hardy",
    "shift_samples",
]


@dataclass(frozen=True)
class DyadicLattice:
    """D(S) - t: binary subdivisions of ``root`` down to ``depth``, shifted by ``-shift``."""

    root: tuple
    depth: int
    shift: float = 0.0

    def __post_init__(self):
        lo, hi = self.root
        if not hi > lo or self.depth < 0:
            raise ValueError("lattice needs a nondegenerate root and depth >= 0")

    @classmethod
    def for_grid(cls, f: GridFunction, shift=0.0):
        depth = int(np.log2(f.n))
        if 2 ** depth != f.n:
            raise AlignmentError(f"grid of {f.n} cells is not a power of two")
        return cls(f.interval, depth, shift)

    @property
    def length(self):
        return self.root[1] - self.root[0]

    @property
    def shift_window(self):
        return self.length / 16.0


@dataclass(frozen=True)
class DyadicInterval:
    level: int
    index: int
    cells: tuple
    bounds: tuple


@dataclass
class DyadicDecomposition:
    level: int
    maximal_intervals: list = field(default_factory=list)
    shards: list = field(default_factory=list)


def _abs_primitive(f):
    return np.concatenate([[0.0], np.cumsum(np.abs(f.values) * f.h)])


def interval_average_table(f: GridFunction, alpha=0.0):
    """``A[i, j] = |I|^(alpha-1) int_I |f|`` for node pairs i < j (``-inf`` elsewhere)."""
    F = _abs_primitive(f)
    e = f.edges
    with np.errstate(divide="ignore", invalid="ignore"):
        A = (F[None, :] - F[:, None]) / np.power(e[None, :] - e[:, None], 1.0 - alpha)
    n1 = len(e)
    A[np.tril_indices(n1)] = -np.inf
    return A


def _rectangle_max(A):
    """``P[L, R] = max_{i <= L, j >= R} A[i, j]``."""
    B = np.maximum.accumulate(A[:, ::-1], axis=1)[:, ::-1]
    return np.maximum.accumulate(B, axis=0)


def _half_interval_max(f, F, x, J, alpha):
    """Best average over intervals with one endpoint at x and the other at a node."""
    e = f.edges
    Fx = np.interp(x, e, F)
    d = x[:, None] - e[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        left = (Fx[:, None] - F[None, :]) / np.power(d, 1.0 - alpha)
        right = (F[None, :] - Fx[:, None]) / np.power(-d, 1.0 - alpha)
    left = np.where(d > 0, left, -np.inf)
    right = np.where(d < 0, right, -np.inf)
    return np.maximum(left.max(axis=1), right.max(axis=1))


def _check_alpha(alpha):
    if not 0.0 <= alpha < 1.0:
        raise ValueError("alpha must satisfy 0 <= alpha < 1")


def maximal_bounded(f: GridFunction, J=None, alpha=0.0, points=None):
    """Fractional maximal function ``M_alpha^(J) f``; J defaults to the grid interval
    and must otherwise be grid-aligned (the result then lives on J).

    The sup runs over intervals whose endpoints are grid nodes or the
    evaluation point itself; for step functions this is the exact sup over
    all subintervals of J. Returns a GridFunction of midpoint values when
    ``points`` is None, else an array at the given points.
    """
    _check_alpha(alpha)
    if J is not None:
        f = f.restrict(J)
    x = f.midpoints if points is None else np.atleast_1d(np.asarray(points, dtype=float))
    lo, hi = f.interval
    if np.any((x < lo) | (x > hi)):
        raise DomainError("evaluation points must lie in the grid interval")
    F = _abs_primitive(f)
    P = _rectangle_max(interval_average_table(f, alpha))
    e = f.edges
    L = np.searchsorted(e, x, side="right") - 1
    R = np.searchsorted(e, x, side="left")
    L = np.clip(L, 0, f.n)
    R = np.clip(R, 0, f.n)
    best = np.maximum(P[L, R], _half_interval_max(f, F, x, None, alpha))
    best = np.maximum(best, 0.0)
    return f.like(best) if points is None else best


def _dyadic_levels(f: GridFunction, lat: DyadicLattice, alpha):
    if not f.aligned_with(GridFunction(lat.root, np.zeros(f.n))):
        raise AlignmentError("grid must span the lattice root")
    if f.n % (2 ** lat.depth):
        raise AlignmentError(f"{f.n} cells cannot resolve lattice depth {lat.depth}")
    F = _abs_primitive(f)
    out = []
    for d in range(lat.depth + 1):
        block = f.n // 2 ** d
        nodes = F[::block]
        length = lat.length / 2 ** d
        out.append(np.diff(nodes) / length ** (1.0 - alpha))
    return out


def maximal_dyadic(f: GridFunction, lat: DyadicLattice = None, alpha=0.0) -> GridFunction:
    """``M^(d),S_alpha f`` in O(n * depth); a nonzero lattice shift defers to K_t."""
    _check_alpha(alpha)
    lat = DyadicLattice.for_grid(f) if lat is None else lat
    if lat.shift != 0.0:
        return maximal_shifted(f, lat, alpha)
    best = np.zeros(f.n)
    for d, vals in enumerate(_dyadic_levels(f, lat, alpha)):
        best = np.maximum(best, np.repeat(vals, f.n // 2 ** d))
    return f.like(best)


def maximal_shifted(f: GridFunction, lat: DyadicLattice, alpha=0.0) -> GridFunction:
    """``K_t f``: sup over intervals of D(S) - t that stay inside S and contain x."""
    _check_alpha(alpha)
    t = lat.shift
    if not abs(t) < lat.shift_window:
        raise DomainError(f"shift {t} outside (-|S|/16, |S|/16)")
    if t == 0.0:
        return maximal_dyadic(f, lat, alpha)
    lo, hi = lat.root
    x = f.midpoints
    F = _abs_primitive(f)
    e = f.edges
    best = np.zeros(f.n)
    slack = 1e-12 * lat.length
    for d in range(lat.depth + 1):
        length = lat.length / 2 ** d
        k = np.floor((x - lo + t) / length)
        a = lo + k * length - t
        b = a + length
        inside = (a >= lo - slack) & (b <= hi + slack)
        mass = np.interp(b, e, F) - np.interp(a, e, F)
        vals = np.where(inside, mass / length ** (1.0 - alpha), 0.0)
        best = np.maximum(best, vals)
    return f.like(best)


def shift_samples(lat: DyadicLattice, count=64):
    """Equispaced shifts strictly inside the admissible window."""
    w = lat.shift_window
    return -w + (np.arange(count) + 0.5) * (2 * w / count)


def level_decomposition(f: GridFunction, lat: DyadicLattice, alpha, k) -> DyadicDecomposition:
    """Maximal lattice intervals with average above ``2^k`` and their shards
    ``E = I & {2^k < M f <= 2^(k+1)}``, as cell index sets."""
    _check_alpha(alpha)
    levels = _dyadic_levels(f, lat, alpha)
    M = np.zeros(f.n)
    for d, vals in enumerate(levels):
        M = np.maximum(M, np.repeat(vals, f.n // 2 ** d))
    thr = 2.0 ** k
    covered = np.zeros(1, dtype=bool)
    out = DyadicDecomposition(level=k)
    lo = lat.root[0]
    for d, vals in enumerate(levels):
        if d > 0:
            covered = np.repeat(covered, 2)
        hit = vals > thr
        new = hit & ~covered
        block = f.n // 2 ** d
        length = lat.length / 2 ** d
        for idx in np.nonzero(new)[0]:
            i0, i1 = int(idx * block), int((idx + 1) * block)
            out.maximal_intervals.append(DyadicInterval(
                d, int(idx), (i0, i1), (float(lo + idx * length), float(lo + (idx + 1) * length))))
            cells = np.arange(i0, i1)
            out.shards.append(cells[M[i0:i1] <= 2.0 * thr])
        covered = covered | hit
    return out


def maximal_window(f: GridFunction, domain="halfline", alpha=0.0, points=None):
    """``sup_h (2h)^(alpha-1) int_{(x-h, x+h) & domain} |f|`` for compactly supported f.

    Between consecutive breakpoints ``h = |x - node|`` (and ``h = x`` on the
    half-line) the window mass is affine in h, so the sup is attained at a
    breakpoint; the candidate set is therefore exact, also for points far
    outside the support.
    """
    _check_alpha(alpha)
    if domain not in ("halfline", "line"):
        raise ValueError("domain is 'halfline' or 'line'")
    if domain == "halfline" and f.interval[0] < 0:
        raise DomainError("half-line operator needs a grid inside [0, inf)")
    x = f.midpoints if points is None else np.atleast_1d(np.asarray(points, dtype=float))
    if domain == "halfline" and np.any(x < 0):
        raise DomainError("half-line operator evaluated at a negative point")
    e = f.edges
    F = _abs_primitive(f)
    H = np.abs(x[:, None] - e[None, :])
    if domain == "halfline":
        H = np.concatenate([H, x[:, None]], axis=1)
    H = np.where(H > 0, H, np.nan)
    left = x[:, None] - H
    if domain == "halfline":
        left = np.maximum(left, 0.0)
    mass = np.interp(x[:, None] + H, e, F, left=0.0, right=F[-1]) - np.interp(left, e, F, left=0.0, right=F[-1])
    with np.errstate(invalid="ignore"):
        vals = mass / np.power(2.0 * H, 1.0 - alpha)
    best = np.nanmax(np.where(np.isnan(vals), -np.inf, vals), axis=1)
    best = np.maximum(best, 0.0)
    return f.like(best) if points is None else best


def maximal_M(f: GridFunction, J_sup=None, points=None):
    """Hardy-Littlewood maximal function over finite intervals of the half-line.

    Inside the support hull this is :func:`maximal_bounded` with alpha = 0
    (clipping an interval to the hull keeps its mass and shrinks it). Outside,
    the best interval runs from x to a grid node, a closed-form tail.
    """
    if f.interval[0] < 0:
        raise DomainError("the half-line maximal operator needs a grid inside [0, inf)")
    if J_sup is not None:
        f = f.restrict(J_sup)
    if points is None:
        return maximal_bounded(f, None, 0.0)
    x = np.atleast_1d(np.asarray(points, dtype=float))
    if np.any(x < 0):
        raise DomainError("evaluation points must be >= 0")
    lo, hi = f.interval
    out = np.zeros_like(x)
    inner = (x >= lo) & (x <= hi)
    if np.any(inner):
        out[inner] = maximal_bounded(f, None, 0.0, x[inner])
    F = _abs_primitive(f)
    e = f.edges
    right = x > hi
    if np.any(right):
        xr = x[right][:, None]
        out[right] = ((F[-1] - F[None, :]) / (xr - e[None, :])).max(axis=1)
    left = x < lo
    if np.any(left):
        xl = x[left][:, None]
        out[left] = (F[None, :] / (e[None, :] - xl)).max(axis=1)
    return out


def hilbert(f: GridFunction, points=None):
    """Principal-value ``int f(t) / (x - t) dt`` of a step function, in closed form.

    Summing ``c (ln|x-a| - ln|x-b|)`` over cells telescopes into a sum over
    the jumps of f. Points that sit exactly on a jump are moved to the
    midpoint of the cell to their right (with a warning).
    """
    e = f.edges
    c = np.concatenate([[0.0], f.values, [0.0]])
    jumps = np.diff(c)
    if points is None:
        x = f.midpoints
    else:
        x = np.atleast_1d(np.asarray(points, dtype=float)).copy()
        on_node = np.isin(x, e[jumps != 0])
        if np.any(on_node):
            idx = np.searchsorted(e, x[on_node])
            idx = np.clip(idx, 0, f.n - 1)
            warnings.warn(f"{int(on_node.sum())} evaluation point(s) on a jump moved to cell midpoints",
                          RuntimeWarning, stacklevel=2)
            x[on_node] = f.midpoints[idx]
    live = jumps != 0
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(x[:, None] - e[None, live]))
    vals = logs @ jumps[live]
    return f.like(vals) if points is None else vals


def hardy(f: GridFunction, v: Weight, w: Weight, direction="forward", points=None):
    """``v(x) int_0^x f w`` (forward) or ``v(x) int_x^inf f w`` (dual).

    ``f w`` is integrated exactly as a step function, with exact cell
    averages of w next to its singular points.
    """
    if direction not in ("forward", "dual"):
        raise ValueError("direction is 'forward' or 'dual'")
    fw = f.values * power_cells(w, 1.0, f.edges)
    fw = np.where(f.values == 0, 0.0, fw)
    F = np.concatenate([[0.0], np.cumsum(fw * f.h)])
    x = f.midpoints if points is None else np.atleast_1d(np.asarray(points, dtype=float))
    run = np.interp(x, f.edges, F, left=0.0, right=F[-1])
    inner = run if direction == "forward" else F[-1] - run
    vx = v(x)
    vals = np.where(inner == 0, 0.0, vx * inner)
    return f.like(vals) if points is None else vals
