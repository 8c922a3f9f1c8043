import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from varlp.exponents import ExponentFunction
from varlp.spaces import (
    AlignmentError,
    GridFunction,
    NormOverflowError,
    holder_check,
    luxemburg_norm,
    modular,
    norm_from_terms,
    pairing,
    weighted_norm,
)
from varlp.weights import Weight

P2 = ExponentFunction.constant(2.0)
TWO_PIECE = ExponentFunction.piecewise([0.0, 0.5, 1.0], [2.0, 3.0])
VAR = ExponentFunction.affine(2.0, 1.0, (0.0, 1.0))


def steps(seed, n=64, interval=(0.0, 1.0)):
    rng = np.random.default_rng(seed)
    return GridFunction(interval, rng.uniform(-3, 3, n))


def test_modular_examples():
    one = GridFunction.constant(1.0, (0, 1), 32)
    assert modular(one, VAR) == pytest.approx(1.0, abs=1e-14)
    x = GridFunction.from_callable(lambda t: t, (0, 1), 256)
    assert modular(x, P2) == pytest.approx(1 / 3, abs=1e-5)
    assert modular(GridFunction.constant(2.0, (0, 0.5), 8), ExponentFunction.constant(3.0)) == pytest.approx(4.0)


def test_modular_alignment_error():
    f = GridFunction.constant(1.0, (0, 1), 8)
    with pytest.raises(AlignmentError):
        modular(f, P2, J=(0.0, 0.3))
    with pytest.raises(AlignmentError):
        modular(f, P2, mu=GridFunction.constant(1.0, (0, 1), 16))


def test_norm_examples():
    one = GridFunction.constant(1.0, (0, 1), 64)
    assert luxemburg_norm(one, P2) == pytest.approx(1.0, abs=1e-9)
    assert luxemburg_norm(GridFunction.constant(2.0, (0, 1), 64), TWO_PIECE) == pytest.approx(2.0, abs=1e-9)
    assert luxemburg_norm(one, ExponentFunction.constant(4.0)) == pytest.approx(1.0, abs=1e-9)
    assert luxemburg_norm(one * 3.7, VAR) == pytest.approx(3.7 * luxemburg_norm(one, VAR), rel=1e-9)
    assert luxemburg_norm(one * 0.0, VAR) == 0.0


def test_norm_overflow_signal():
    with pytest.raises(NormOverflowError):
        norm_from_terms([np.inf], [2.0], [1.0])


def test_weighted_norm_examples():
    f = GridFunction.constant(1.0, (0, 1), 64)
    assert weighted_norm(f, Weight.constant(1.0), P2) == pytest.approx(luxemburg_norm(f, P2))
    assert weighted_norm(f, Weight.constant(2.0), P2) == pytest.approx(2.0, abs=1e-9)
    g = GridFunction.from_callable(lambda t: t ** -0.5, (0, 1), 128)
    assert weighted_norm(g, Weight.power(0.5), P2) == pytest.approx(1.0, abs=1e-9)


def test_weighted_norm_infinite_signal():
    f = GridFunction.constant(1.0, (0, 1), 8)
    assert weighted_norm(f, GridFunction((0, 1), [np.inf] + [1.0] * 7), P2) == np.inf


def test_pairing_examples():
    one = GridFunction.constant(1.0, (0, 1), 16)
    assert pairing(one, one) == pytest.approx(1.0)
    assert pairing(GridFunction.indicator(0, 0.5, (0, 1), 16), one * 3.0) == pytest.approx(1.5)
    x = GridFunction.from_callable(lambda t: t, (0, 1), 256)
    assert pairing(x, x) == pytest.approx(1 / 3, abs=1e-5)


def test_holder_examples():
    one = GridFunction.constant(1.0, (0, 1), 16)
    assert holder_check(one, one, P2).ratio == pytest.approx(0.5)
    assert holder_check(one * 0.0, one, P2).ratio == 0.0


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 10 ** 6), c=st.floats(-50, 50).filter(lambda c: abs(c) > 1e-3))
def test_homogeneity(seed, c):
    f = steps(seed)
    assert luxemburg_norm(f * c, VAR) == pytest.approx(abs(c) * luxemburg_norm(f, VAR), rel=1e-8)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_unit_ball(seed):
    f = steps(seed)
    lam = luxemburg_norm(f, VAR)
    assert abs(modular(f * (1 / lam), VAR) - 1.0) <= 1e-8


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_monotonicity(seed):
    f = steps(seed)
    g = abs(f) + np.random.default_rng(seed + 1).uniform(0, 1, f.n)
    assert luxemburg_norm(f, VAR) <= luxemburg_norm(g, VAR) + 1e-9


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10 ** 6), pc=st.floats(1.2, 6.0))
def test_constant_exponent_agreement(seed, pc):
    f = steps(seed)
    classical = (np.sum(np.abs(f.values) ** pc) * f.h) ** (1 / pc)
    assert luxemburg_norm(f, ExponentFunction.constant(pc)) == pytest.approx(classical, rel=1e-6)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_holder_ratio_bounded(seed):
    f, g = steps(seed, 32, (0, 0.5)), steps(seed + 7, 32, (0, 0.5))
    p = ExponentFunction.affine(2.0, 1.0, (0.0, 0.5))
    assert holder_check(f, g, p).ratio <= 1.0
