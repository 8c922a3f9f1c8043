"""Step functions on uniform grids, modulars and Luxemburg norms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from .exponents import ExponentFunction, conjugate, DomainError

__all__ = [
    "AlignmentError",
    "NormOverflowError",
    "GridFunction",
    "modular",
    "norm_from_terms",
    "luxemburg_norm",
    "weighted_norm",
    "pairing",
    "holder_check",
    "HolderReport",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-9


class AlignmentError(ValueError):
    """Two grids, or a grid and an interval, do not line up."""


class NormOverflowError(ArithmeticError):
    """The modular is infinite for every scaling."""


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A step function, constant on each of ``n`` equal cells of ``interval``."""

    interval: tuple
    values: np.ndarray

    def __post_init__(self):
        lo, hi = float(self.interval[0]), float(self.interval[1])
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or len(vals) < 1:
            raise ValueError("values must be a non-empty 1-d array")
        if not (np.isfinite(lo) and np.isfinite(hi) and hi > lo):
            raise DomainError(f"grid interval must be bounded with r > l, got {self.interval}")
        if np.any(np.isnan(vals)):
            raise ValueError("values must not be NaN")
        object.__setattr__(self, "interval", (lo, hi))
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, func, interval, n):
        """Sample ``func`` at the cell midpoints."""
        lo, hi = interval
        mids = lo + (np.arange(n) + 0.5) * (hi - lo) / n
        return cls((lo, hi), np.asarray(func(mids), dtype=float) * np.ones(n))

    @classmethod
    def constant(cls, c, interval, n):
        return cls(interval, np.full(n, float(c)))

    @classmethod
    def indicator(cls, a, b, interval, n, height=1.0):
        """``height * chi_[a,b]`` as cell averages (exact when a, b are nodes)."""
        lo, hi = interval
        edges = np.linspace(lo, hi, n + 1)
        overlap = np.clip(np.minimum(edges[1:], b) - np.maximum(edges[:-1], a), 0, None)
        return cls(interval, height * overlap / np.diff(edges))

    @property
    def n(self):
        return len(self.values)

    @property
    def h(self):
        return (self.interval[1] - self.interval[0]) / self.n

    @property
    def edges(self):
        return np.linspace(self.interval[0], self.interval[1], self.n + 1)

    @property
    def midpoints(self):
        return self.interval[0] + (np.arange(self.n) + 0.5) * self.h

    def like(self, values):
        return GridFunction(self.interval, values)

    def aligned_with(self, other):
        return (self.n == other.n
                and np.isclose(self.interval[0], other.interval[0], rtol=0, atol=1e-12 * self.h)
                and np.isclose(self.interval[1], other.interval[1], rtol=0, atol=1e-12 * self.h))

    def _check(self, other):
        if not self.aligned_with(other):
            raise AlignmentError(f"grids differ: {self.interval}/{self.n} vs {other.interval}/{other.n}")

    def cell_range(self, J):
        """Indices ``(i0, i1)`` of the cells making up the grid-aligned interval J."""
        if J is None:
            return 0, self.n
        lo, hi = self.interval
        a, b = (np.asarray(J, dtype=float) - lo) / self.h
        i0, i1 = int(round(a)), int(round(b))
        if abs(a - i0) > 1e-9 or abs(b - i1) > 1e-9 or not 0 <= i0 < i1 <= self.n:
            raise AlignmentError(f"interval {J} is not grid-aligned within {self.interval}")
        return i0, i1

    def restrict(self, J):
        i0, i1 = self.cell_range(J)
        lo = self.interval[0]
        return GridFunction((lo + i0 * self.h, lo + i1 * self.h), self.values[i0:i1])

    def cumulative(self):
        """Primitive of the step function at the nodes (starts at 0)."""
        return np.concatenate([[0.0], np.cumsum(self.values * self.h)])

    def primitive(self, x):
        """Exact ``int_lo^x f`` for arbitrary x (zero extension outside the grid)."""
        F = self.cumulative()
        return np.interp(x, self.edges, F, left=0.0, right=F[-1])

    def integral(self, a=None, b=None):
        lo, hi = self.interval
        a = lo if a is None else a
        b = hi if b is None else b
        return self.primitive(b) - self.primitive(a)

    def __abs__(self):
        return self.like(np.abs(self.values))

    def __neg__(self):
        return self.like(-self.values)

    def _binary(self, other, op):
        if isinstance(other, GridFunction):
            self._check(other)
            other = other.values
        with np.errstate(invalid="ignore"):
            out = op(self.values, other)
        return self.like(np.nan_to_num(out, nan=0.0, posinf=np.inf, neginf=-np.inf))

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, other):
        # 0 * inf is taken as 0: a null cell stays null whatever the weight
        return self._binary(other, np.multiply)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, np.divide)


def _cell_measures(f: GridFunction, mu):
    if mu is None:
        return np.full(f.n, f.h)
    if isinstance(mu, GridFunction):
        f._check(mu)
        return mu.values * f.h
    edges = f.edges
    return np.asarray(mu.integral(edges[:-1], edges[1:]), dtype=float)


def _parts(f, p, J, mu):
    if J is not None:
        i0, i1 = f.cell_range(J)
        meas = _cell_measures(f, mu)[i0:i1]
        f = f.restrict(J)
    else:
        meas = _cell_measures(f, mu)
    return np.abs(f.values), p(f.midpoints), meas


def modular(f: GridFunction, p: ExponentFunction, J=None, mu=None) -> float:
    """``sum_cells |f|^p(mid) * mu(cell)``; ``mu`` defaults to Lebesgue measure."""
    vals, exps, meas = _parts(f, p, J, mu)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where((vals == 0) | (meas == 0), 0.0, np.power(vals, exps) * meas)
    return float(np.sum(terms))


def norm_from_terms(values, exponents, measures, tol=DEFAULT_TOL) -> float:
    """Luxemburg norm of the modular ``lam -> sum_i m_i (|v_i|/lam)^e_i``.

    Works in ``s = log(lam)``, where ``log S(e^s)`` decreases with slope
    between ``-max e`` and ``-min e``; that slope bound gives an exact
    bracket, refined by Brent's method to relative accuracy ``tol``.
    """
    v = np.abs(np.asarray(values, dtype=float)).ravel()
    e = np.broadcast_to(np.asarray(exponents, dtype=float), v.shape).ravel()
    m = np.broadcast_to(np.asarray(measures, dtype=float), v.shape).ravel()
    live = (v > 0) & (m > 0)
    if not np.any(live):
        return 0.0
    v, e, m = v[live], e[live], m[live]
    if np.any(np.isinf(v)) or np.any(np.isinf(m)):
        raise NormOverflowError("modular is infinite at every scaling (bracket (0, inf))")
    base = e * np.log(v) + np.log(m)

    def F(s):
        return float(logsumexp(base - e * s))

    emin, emax = float(e.min()), float(e.max())
    f0 = F(0.0)
    if f0 == 0.0:
        return 1.0
    lo, hi = sorted([f0 / emax, f0 / emin])
    pad = 1e-12 * max(1.0, abs(lo), abs(hi))
    lo, hi = lo - pad, hi + pad
    if F(lo) < 0 or F(hi) > 0:
        raise NormOverflowError(f"no sign change on bracket [{np.exp(lo)}, {np.exp(hi)}]")
    s = brentq(F, lo, hi, xtol=tol * 0.25, rtol=4 * np.finfo(float).eps, maxiter=200)
    return float(np.exp(s))


def luxemburg_norm(f: GridFunction, p: ExponentFunction, J=None, mu=None, tol=DEFAULT_TOL) -> float:
    """``inf {lam > 0 : S_p(f / lam) <= 1}``, 0 for the zero function."""
    vals, exps, meas = _parts(f, p, J, mu)
    return norm_from_terms(vals, exps, meas, tol)


def weighted_norm(f: GridFunction, w, p: ExponentFunction, J=None, tol=DEFAULT_TOL) -> float:
    """``||w f||_{p(.)}`` with w sampled at midpoints; ``inf`` if w blows up where f != 0."""
    wv = w.values if isinstance(w, GridFunction) else np.asarray(w(f.midpoints), dtype=float)
    if isinstance(w, GridFunction):
        f._check(w)
    prod = f * wv
    if J is not None:
        i0, i1 = f.cell_range(J)
        bad = np.isinf(prod.values[i0:i1]).any()
    else:
        bad = np.isinf(prod.values).any()
    if bad:
        return np.inf
    return luxemburg_norm(prod, p, J, tol=tol)


def pairing(f: GridFunction, g: GridFunction, J=None) -> float:
    """Exact ``int_J f g`` for aligned step functions."""
    f._check(g)
    i0, i1 = f.cell_range(J)
    return float(np.sum(f.values[i0:i1] * g.values[i0:i1]) * f.h)


@dataclass
class HolderReport:
    lhs: float
    rhs: float
    ratio: float


def holder_check(f: GridFunction, g: GridFunction, p: ExponentFunction, J=None) -> HolderReport:
    """Compare ``int |f g|`` with ``2 ||f||_p ||g||_p'``."""
    lhs = pairing(abs(f), abs(g), J)
    rhs = 2.0 * luxemburg_norm(f, p, J) * luxemburg_norm(g, conjugate(p), J)
    ratio = 0.0 if lhs == 0 else lhs / rhs
    return HolderReport(lhs, rhs, ratio)
