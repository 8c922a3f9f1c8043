"""Variable exponents p(.) and their regularity checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "DomainError",
    "InvalidExponentError",
    "ExponentFunction",
    "LogHolderReport",
    "Ineq11Report",
    "conjugate",
    "inf_sup_on",
    "check_log_holder",
    "check_constant_outside",
    "check_ineq_1_1",
]

_FORMS = ("constant", "affine", "piecewise", "tabulated", "conjugate")


class DomainError(ValueError):
    """A point or interval lies outside the domain of an object."""


class InvalidExponentError(ValueError):
    """The exponent violates 1 < p_- <= p_+ < inf."""


def _as_interval(E):
    lo, hi = float(E[0]), float(E[1])
    if hi < lo:
        raise DomainError(f"empty interval [{lo}, {hi}]")
    return lo, hi


@dataclass(frozen=True, eq=False)
class ExponentFunction:
    """A variable exponent on an interval (possibly unbounded).

    Use the classmethod constructors rather than the raw initializer.
    Piecewise forms are left-closed/right-open on their cells, with the last
    cell closed. A ``tail=(a, p_c)`` clause forces ``p == p_c`` outside the
    compactum ``[max(domain_lo, -a), a]``.
    """

    form: str
    params: dict
    domain: tuple = (-np.inf, np.inf)
    tail: Optional[tuple] = None
    _base: Optional["ExponentFunction"] = field(default=None, repr=False)

    def __post_init__(self):
        if self.form not in _FORMS:
            raise ValueError(f"unknown exponent form {self.form!r}")
        lo, hi = self.domain
        if not lo < hi:
            raise DomainError(f"degenerate domain {self.domain}")
        if self.tail is not None:
            a, pc = self.tail
            if a <= 0:
                raise ValueError("tail radius must be positive")
            if not 1.0 < pc < np.inf:
                raise InvalidExponentError(f"tail exponent {pc} not in (1, inf)")
        pm, pp = inf_sup_on(self, self.domain)
        if not (pm > 1.0 and pp < np.inf):
            raise InvalidExponentError(
                f"need 1 < p_- <= p_+ < inf, got p_-={pm}, p_+={pp}")

    # constructors ------------------------------------------------------

    @classmethod
    def constant(cls, value, domain=(-np.inf, np.inf)):
        return cls("constant", {"value": float(value)}, tuple(map(float, domain)))

    @classmethod
    def affine(cls, c0, c1, domain, tail=None):
        """``p(x) = c0 + c1 * x`` on a bounded domain (or any domain with a tail)."""
        domain = tuple(map(float, domain))
        if c1 != 0 and tail is None and not np.all(np.isfinite(domain)):
            raise InvalidExponentError("non-constant affine exponent needs a bounded domain or a tail")
        return cls("affine", {"c0": float(c0), "c1": float(c1)}, domain,
                   None if tail is None else tuple(map(float, tail)))

    @classmethod
    def piecewise(cls, breaks, values, tail=None, domain=None):
        breaks = np.asarray(breaks, dtype=float)
        values = np.asarray(values, dtype=float)
        if breaks.ndim != 1 or len(breaks) != len(values) + 1:
            raise ValueError("piecewise needs len(breaks) == len(values) + 1")
        if np.any(np.diff(breaks) <= 0):
            raise ValueError("breaks must be strictly increasing")
        if domain is None:
            domain = (breaks[0], breaks[-1])
        return cls("piecewise", {"breaks": breaks, "values": values},
                   tuple(map(float, domain)),
                   None if tail is None else tuple(map(float, tail)))

    @classmethod
    def tabulated(cls, xs, ps, tail=None, domain=None):
        """Linear interpolation through the samples ``(xs, ps)``."""
        xs = np.asarray(xs, dtype=float)
        ps = np.asarray(ps, dtype=float)
        if xs.ndim != 1 or xs.shape != ps.shape or len(xs) < 2:
            raise ValueError("tabulated needs matching 1-d samples, at least two")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("sample nodes must be strictly increasing")
        if domain is None:
            domain = (xs[0], xs[-1])
        return cls("tabulated", {"xs": xs, "ps": ps}, tuple(map(float, domain)),
                   None if tail is None else tuple(map(float, tail)))

    def with_tail(self, a, p_c):
        return ExponentFunction(self.form, self.params, self.domain,
                                (float(a), float(p_c)), self._base)

    # evaluation --------------------------------------------------------

    @property
    def compactum(self):
        """The set outside of which the tail clause holds, or None."""
        if self.tail is None:
            return None
        a = self.tail[0]
        return (max(self.domain[0], -a), a)

    @property
    def is_constant(self):
        return self.form == "constant" or (
            self.form == "conjugate" and self._base.is_constant)

    def _core(self, x):
        if self.form == "constant":
            return np.full_like(x, self.params["value"])
        if self.form == "affine":
            return self.params["c0"] + self.params["c1"] * x
        if self.form == "piecewise":
            breaks, values = self.params["breaks"], self.params["values"]
            idx = np.searchsorted(breaks, x, side="right") - 1
            idx = np.clip(idx, 0, len(values) - 1)
            return values[idx]
        if self.form == "tabulated":
            return np.interp(x, self.params["xs"], self.params["ps"])
        base = self._base(x)
        return base / (base - 1.0)

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        x = np.atleast_1d(np.asarray(x, dtype=float))
        lo, hi = self.domain
        if np.any((x < lo) | (x > hi)) or np.any(np.isnan(x)):
            raise DomainError(f"point outside exponent domain [{lo}, {hi}]")
        out = self._core(x)
        if self.tail is not None:
            clo, chi = self.compactum
            out = np.where((x < clo) | (x > chi), self.tail[1], out)
        return float(out[0]) if scalar else out

    def eval(self, x):
        return self(x)

    def __repr__(self):
        return f"ExponentFunction(form={self.form!r}, domain={self.domain}, tail={self.tail})"


def _core_inf_sup(p, lo, hi):
    if p.form == "constant":
        v = p.params["value"]
        return v, v
    if p.form == "affine":
        if p.params["c1"] == 0:
            return p.params["c0"], p.params["c0"]
        a = p.params["c0"] + p.params["c1"] * lo
        b = p.params["c0"] + p.params["c1"] * hi
        return min(a, b), max(a, b)
    if p.form == "piecewise":
        breaks, values = p.params["breaks"], p.params["values"]
        i0 = np.clip(np.searchsorted(breaks, lo, side="right") - 1, 0, len(values) - 1)
        i1 = np.clip(np.searchsorted(breaks, hi, side="right") - 1, 0, len(values) - 1)
        touched = values[i0:i1 + 1]
        return float(touched.min()), float(touched.max())
    if p.form == "tabulated":
        xs, ps = p.params["xs"], p.params["ps"]
        inside = ps[(xs > lo) & (xs < hi)]
        ends = np.interp([lo, hi], xs, ps)
        allv = np.concatenate([inside, ends])
        return float(allv.min()), float(allv.max())
    bm, bp = inf_sup_on(p._base, (lo, hi))
    # t -> t/(t-1) is decreasing on (1, inf)
    return bp / (bp - 1.0), bm / (bm - 1.0)


def inf_sup_on(p: ExponentFunction, E):
    """Return ``(p_-(E), p_+(E))``, exact for every structured form."""
    lo, hi = _as_interval(E)
    dlo, dhi = p.domain
    lo, hi = max(lo, dlo), min(hi, dhi)
    if lo > hi:
        raise DomainError(f"{E} does not meet the exponent domain {p.domain}")
    if p.tail is None:
        return _core_inf_sup(p, lo, hi)
    clo, chi = p.compactum
    vals = []
    if lo < clo or hi > chi:
        vals += [p.tail[1], p.tail[1]]
    clo2, chi2 = max(lo, clo), min(hi, chi)
    if clo2 <= chi2:
        vals += list(_core_inf_sup(p, clo2, chi2))
    return float(min(vals)), float(max(vals))


def conjugate(p: ExponentFunction) -> ExponentFunction:
    """Pointwise conjugate ``p/(p-1)``; conjugating twice returns ``p`` itself."""
    pm, _ = inf_sup_on(p, p.domain)
    if pm <= 1.0:
        raise InvalidExponentError("p_- <= 1: conjugate exponent is unbounded")
    tail = None if p.tail is None else (p.tail[0], p.tail[1] / (p.tail[1] - 1.0))
    if p.form == "constant":
        v = p.params["value"]
        return ExponentFunction.constant(v / (v - 1.0), p.domain)
    if p.form == "conjugate":
        return p._base
    if p.form == "piecewise":
        vals = p.params["values"]
        return ExponentFunction.piecewise(p.params["breaks"], vals / (vals - 1.0),
                                          tail=tail, domain=p.domain)
    return ExponentFunction("conjugate", {}, p.domain, tail, _base=p)


def _has_jump(p, lo, hi):
    if p.form == "conjugate":
        return _has_jump(p._base, lo, hi)
    if p.form == "piecewise":
        breaks, values = p.params["breaks"], p.params["values"]
        inner = (breaks[1:-1] > lo) & (breaks[1:-1] <= hi)
        jumps = values[1:] != values[:-1]
        if np.any(inner & jumps):
            return True
    if p.tail is not None:
        clo, chi = p.compactum
        for edge in (clo, chi):
            if lo < edge < hi and edge not in p.domain:
                inner_val = p._core(np.array([edge]))[0]
                if inner_val != p.tail[1]:
                    return True
    return False


@dataclass
class LogHolderReport:
    holds: bool
    best_c: float
    witness: tuple
    structural_jump: bool
    resolution: int


def check_log_holder(p: ExponentFunction, J, pair_resolution: int = 512) -> LogHolderReport:
    """Scan ``|p(x)-p(y)| * (-ln|x-y|)`` over grid pairs with ``0 < |x-y| <= 1/2``.

    The grid has ``pair_resolution`` equal cells on ``J``, so doubling the
    resolution nests the pair set and ``best_c`` can only grow.
    """
    lo, hi = _as_interval(J)
    if not np.isfinite([lo, hi]).all():
        raise DomainError("log-Holder scan needs a bounded interval")
    if pair_resolution < 2:
        raise ValueError("pair_resolution must be >= 2")
    x = np.linspace(lo, hi, pair_resolution + 1)
    px = p(x)
    dist = np.abs(x[:, None] - x[None, :])
    ok = (dist > 0) & (dist <= 0.5)
    with np.errstate(divide="ignore"):
        vals = np.where(ok, np.abs(px[:, None] - px[None, :]) * -np.log(np.where(ok, dist, 1.0)), -np.inf)
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    best = float(vals[i, j]) if np.isfinite(vals[i, j]) else 0.0
    witness = (float(x[i]), float(x[j])) if best > 0 else (float(x[0]), float(x[1]))
    jump = _has_jump(p, lo, hi)
    return LogHolderReport(not jump and np.isfinite(best), best, witness, jump, pair_resolution)


def check_constant_outside(p: ExponentFunction, a: float) -> bool:
    """True iff p is a single constant on its domain outside ``[max(lo, -a), a]``.

    Decided by the exact inf/sup of the structured form on each outer piece.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    dlo, dhi = p.domain
    clo = max(dlo, -a)
    pieces = [(l, h) for l, h in [(dlo, min(clo, dhi)), (max(a, dlo), dhi)] if h > l]
    seen = set()
    for piece in pieces:
        m, M = inf_sup_on(p, piece)
        if m != M:
            return False
        seen.add(m)
    return len(seen) <= 1


@dataclass
class Ineq11Report:
    best_C: float
    witness: tuple
    resolution: int


def check_ineq_1_1(r: ExponentFunction, mu, J, resolution: int = 256) -> Ineq11Report:
    """Best constant in ``mu(I)^(r_-(I) - r_+(I)) <= C`` over grid intervals of J.

    ``mu`` is anything with a vectorized ``integral(a, b)`` method, such as a
    :class:`varlp.weights.Weight`.
    """
    lo, hi = _as_interval(J)
    edges = np.linspace(lo, hi, resolution + 1)
    total = float(mu.integral(lo, hi))
    if total == 0:
        raise ValueError("degenerate measure: mu(J) = 0")
    cell = np.array([inf_sup_on(r, (edges[k], edges[k + 1])) for k in range(resolution)])
    n = resolution
    masses = mu.integral(edges[:, None], edges[None, :])
    best, wit = -np.inf, (lo, hi)
    for s in range(n):
        rmin = np.minimum.accumulate(cell[s:, 0])
        rmax = np.maximum.accumulate(cell[s:, 1])
        m = masses[s, s + 1:]
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.where(rmax > rmin, np.power(m, rmin - rmax), 1.0)
        vals = np.where(np.isnan(vals), np.inf, vals)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, wit = float(vals[k]), (float(edges[s]), float(edges[s + 1 + k]))
    return Ineq11Report(best, wit, resolution)
