import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from varlp.exponents import DomainError, ExponentFunction, conjugate
from varlp.spaces import GridFunction, norm_from_terms, weighted_norm
from varlp.weights import Weight, check_doubling, measure_of, sigma, weight_norm, window_extrema

P2 = ExponentFunction.constant(2.0)
HALF = Weight.piecewise_power([0.0, 0.5, 1.0], [1.0, 0.0], [0.0, 0.0])


def test_sigma_examples():
    assert np.all(sigma(Weight.constant(1.0), P2, (0, 1), 16).values == 1.0)
    assert np.allclose(sigma(Weight.constant(2.0), P2, (0, 1), 16).values, 0.25)
    s = sigma(Weight.power(1.0), P2, (0, 1), 16)
    assert np.allclose(s.values[1:], s.midpoints[1:] ** -2)
    # the cell at the singular point carries the exact, divergent integral
    assert s.values[0] == np.inf


def test_sigma_infinite_on_null_cells():
    s = sigma(HALF, P2, (0, 1), 8)
    assert np.all(np.isinf(s.values[4:])) and np.all(s.values[:4] == 1.0)


def test_measure_examples():
    assert measure_of(Weight.constant(1.0), (0, 0.5)) == 0.5
    assert measure_of(Weight.power(1.0), (0, 1)) == pytest.approx(0.5, abs=1e-15)
    assert measure_of(HALF, (0.25, 0.75)) == pytest.approx(0.25)


@settings(max_examples=50, deadline=None)
@given(cuts=st.lists(st.integers(0, 64), min_size=3, max_size=8, unique=True))
def test_measure_additive(cuts):
    cuts = sorted(cuts)
    u = Weight.power(-0.5)
    pieces = [(a / 64, b / 64) for a, b in zip(cuts, cuts[1:])]
    assert measure_of(u, pieces) == pytest.approx(measure_of(u, (cuts[0] / 64, cuts[-1] / 64)), rel=1e-12)


def test_doubling_examples():
    const = check_doubling(Weight.constant(1.0), (0, 1))
    assert const.holds and const.best_b == pytest.approx(2.0, abs=1e-9)
    lin = check_doubling(Weight.power(1.0), (0, 1))
    assert lin.holds and lin.best_b == pytest.approx(4.0, abs=1e-9)
    bad = check_doubling(HALF, (0, 1), x_points=[0.2, 0.5, 0.8], r_points=[0.05, 0.2])
    assert not bad.holds and bad.witness == (0.8, 0.2)


def test_doubling_monotone_under_refinement():
    u = Weight.piecewise_power([0.0, 0.3, 1.0], [1.0, 5.0], [0.5, 0.0])
    xs = np.linspace(0, 1, 17)
    b1 = check_doubling(u, (0, 1), x_points=xs, r_points=8).best_b
    b2 = check_doubling(u, (0, 1), x_points=np.linspace(0, 1, 33), r_points=8).best_b
    assert b2 >= b1 - 1e-15


def test_doubling_degenerate():
    with pytest.raises(ValueError):
        check_doubling(Weight.constant(0.0), (0, 1))


def test_window_extrema_examples():
    w = Weight.power(1.0)
    assert window_extrema(w, 1.0, "inf") == 0.25
    assert window_extrema(Weight.power(2.0), 1.0, "sup") == 16.0
    assert window_extrema(Weight.constant(3.0), 2.0, "inf") == 3.0
    assert window_extrema(Weight.constant(3.0), 2.0, "sup") == 3.0
    with pytest.raises(DomainError):
        window_extrema(Weight.constant(1.0, (0, 1)), 10.0)


def test_declared_monotonicity_validated():
    with pytest.raises(ValueError):
        Weight.power(-1.0, monotone="increasing")
    assert Weight.power(0.3).monotone == "increasing"


def test_sigma_times_w_identity():
    w = Weight.power(0.3)
    p = ExponentFunction.affine(2.0, 1.0, (0.0, 1.0))
    n = 256
    s = sigma(w, p, (0.25, 1.0), n)
    lhs = weighted_norm(s, w, p)
    mids = s.midpoints
    rhs = norm_from_terms(w(mids) ** (1 - conjugate(p)(mids)), p(mids), np.full(n, s.h))
    assert lhs == pytest.approx(rhs, rel=1e-9)


def test_weight_norm_closed_forms():
    assert weight_norm(Weight.power(-1.0), P2, (3.0, np.inf)) == pytest.approx(3 ** -0.5, rel=1e-10)
    assert weight_norm(Weight.constant(1.0), P2, (0.0, 4.0)) == pytest.approx(2.0, rel=1e-10)
    assert weight_norm(Weight.power(-0.5), P2, (0.0, 1.0)) == np.inf
