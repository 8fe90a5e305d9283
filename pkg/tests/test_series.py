import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankel_verify.errors import (
    CompositionWithNonvanishingInnerConstant,
    DivisionBySeriesWithVanishingConstantTerm,
    InvalidQParameter,
    SqrtOfNonpositiveConstantTerm,
)
from hankel_verify.series import (
    QParameter,
    TruncatedSeries,
    add,
    compose,
    derivative,
    div,
    mul,
    q_derivative,
    q_number,
    sqrt,
)


def S(*coeffs, order=None):
    return TruncatedSeries.from_coeffs(coeffs, order)


finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)
unit = st.floats(-1, 1, allow_nan=False)
# real and imaginary parts in [-1, 1]
unit_complexes = st.builds(complex, unit, unit)


def series_strategy(order=6, lead=None, unit=False):
    coeff = unit_complexes if unit else complexes
    head = st.just(lead) if lead is not None else coeff
    return st.builds(
        lambda c0, rest: TruncatedSeries.from_coeffs([c0, *rest]),
        head,
        st.lists(coeff, min_size=order, max_size=order),
    )


def test_series_order_invariant():
    s = S(1, 2, 3)
    assert s.order == 2 and len(s.coeffs) == 3
    assert not s.coeffs.flags.writeable


class TestAdd:
    def test_cancellation(self):
        assert add(S(1, 1), S(1, -1)).allclose(S(2, 0))

    def test_identity(self):
        s = S(1, 2j, -3)
        assert add(S(0, 0, 0), s).allclose(s)

    def test_min_order(self):
        out = add(S(1, 2, 3), S(1, 1))
        assert out.order == 1
        assert out.allclose(S(2, 3))


class TestMul:
    def test_difference_of_squares(self):
        assert mul(S(1, 1, 0), S(1, -1, 0)).allclose(S(1, 0, -1))

    def test_identity(self):
        s = S(0.5, 2, -1j, 4)
        assert mul(s, S(1, 0, 0, 0)).allclose(s)

    def test_square_of_trinomial(self):
        assert mul(S(1, 1, 1), S(1, 1, 1)).allclose(S(1, 2, 3))

    @given(series_strategy(), series_strategy())
    def test_matches_convolution(self, a, b):
        expected = np.convolve(a.coeffs, b.coeffs)[: a.order + 1]
        assert np.allclose(mul(a, b).coeffs, expected, atol=1e-12)


class TestDiv:
    def test_geometric(self):
        assert div(S(1, 0, 0, 0), S(1, -1, 0, 0)).allclose(S(1, 1, 1, 1))

    def test_self(self):
        a = S(2, 1j, 3, -1)
        assert div(a, a).allclose(S(1, 0, 0, 0))

    def test_caratheodory_extreme_point(self):
        assert div(S(1, 1, 0), S(1, -1, 0)).allclose(S(1, 2, 2))

    def test_vanishing_constant_term(self):
        with pytest.raises(DivisionBySeriesWithVanishingConstantTerm):
            div(S(1, 0), S(1e-11, 1))

    @given(series_strategy(unit=True), series_strategy(order=6, lead=1.0, unit=True),
           st.floats(0.5, 1.0), st.floats(0, 2 * math.pi))
    def test_roundtrip(self, a, b, r, phase):
        b = TruncatedSeries(np.concatenate(([r * np.exp(1j * phase)], b.coeffs[1:])))
        back = mul(div(a, b), b)
        assert np.max(np.abs(back.coeffs - a.coeffs)) <= 1e-12


class TestCompose:
    def test_substitution(self):
        assert compose(S(1, 1, 0), S(0, 0, 1)).allclose(S(1, 0, 1))

    def test_identity_outer(self):
        s = S(0, 2, -1, 3j)
        assert compose(S(0, 1, 0, 0), s).allclose(s)

    def test_geometric_half(self):
        outer = S(1, 1, 1)
        assert compose(outer, S(0, 0.5, 0)).allclose(S(1, 0.5, 0.25))

    def test_nonvanishing_inner(self):
        with pytest.raises(CompositionWithNonvanishingInnerConstant):
            compose(S(1, 1), S(0.1, 1))

    @given(series_strategy(order=5), series_strategy(order=5, lead=0.0))
    def test_against_pointwise_evaluation(self, outer, inner):
        # at small z the truncation error is O(z^6)
        z = 1e-2
        lhs = np.polyval(compose(outer, inner).coeffs[::-1], z)
        w = np.polyval(inner.coeffs[::-1], z)
        rhs = np.polyval(outer.coeffs[::-1], w)
        scale = 1 + np.sum(np.abs(outer.coeffs)) * (1 + np.sum(np.abs(inner.coeffs))) ** 6
        assert abs(lhs - rhs) <= 1e-11 * scale


def _binomial(alpha, n):
    out = 1.0
    for k in range(n):
        out *= (alpha - k) / (k + 1)
    return out


class TestSqrt:
    def test_binomial_series(self):
        out = sqrt(S(1, 1, 0, 0, 0, 0))
        expected = [_binomial(0.5, n) for n in range(6)]
        assert np.allclose(out.coeffs, expected, atol=1e-15)
        assert out.allclose(S(1, 0.5, -0.125, 1 / 16, -5 / 128, 7 / 256))

    def test_one(self):
        assert sqrt(S(1, 0, 0)).allclose(S(1, 0, 0))

    def test_inverse_of_square(self):
        assert sqrt(mul(S(1, 1), S(1, 1))).allclose(S(1, 1))

    @pytest.mark.parametrize("c0", [0.0, -1.0, 1j])
    def test_rejects_nonpositive(self, c0):
        with pytest.raises(SqrtOfNonpositiveConstantTerm):
            sqrt(S(c0, 1))

    @given(series_strategy(unit=True), st.floats(0.5, 4))
    def test_square_roundtrip(self, a, c0):
        a = TruncatedSeries(np.concatenate(([c0], a.coeffs[1:])))
        s = sqrt(a)
        assert s.coeffs[0] == pytest.approx(math.sqrt(c0))
        assert np.max(np.abs(mul(s, s).coeffs - a.coeffs)) <= 1e-12


class TestQCalculus:
    def test_q_parameter_domain(self):
        for bad in (0.0, 1.0, -0.5, 1.5):
            with pytest.raises(InvalidQParameter):
                QParameter(bad)
        assert float(QParameter(0.25)) == 0.25

    def test_q_number(self):
        assert q_number(1, 0.3) == 1.0
        assert q_number(4, 0.5) == 1.875
        for n in range(1, 10):
            assert q_number(n, 1 - 1e-8) == pytest.approx(n, abs=1e-6)

    def test_q_derivative_monomial(self):
        out = q_derivative(TruncatedSeries.monomial(2, order=4), 0.5)
        assert out.order == 3
        assert out.allclose(S(0, 1.5, 0, 0))

    def test_q_derivative_constant(self):
        assert q_derivative(S(3, 0, 0), 0.5).allclose(S(0, 0))
        assert q_derivative(S(3), 0.5).allclose(S(0))

    def test_q_derivative_matches_difference_quotient(self):
        rng = np.random.default_rng(7)
        for q in (0.2, 0.5, 0.8):
            c = rng.normal(size=7) + 1j * rng.normal(size=7)
            f = TruncatedSeries(c)
            for z in (0.3, -0.2 + 0.4j):
                quotient = (np.polyval(c[::-1], z) - np.polyval(c[::-1], q * z)) / ((1 - q) * z)
                assert np.polyval(q_derivative(f, q).coeffs[::-1], z) == pytest.approx(quotient, abs=1e-12)

    def test_q_derivative_limit(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            f = TruncatedSeries(rng.uniform(-1, 1, 9) + 1j * rng.uniform(-1, 1, 9))
            diff = q_derivative(f, 1 - 1e-8).coeffs - derivative(f).coeffs
            assert np.max(np.abs(diff)) < 1e-6

    def test_q_derivative_linear(self):
        rng = np.random.default_rng(3)
        a = TruncatedSeries(rng.normal(size=8))
        b = TruncatedSeries(rng.normal(size=8))
        alpha, beta = 2.0, -0.5
        lhs = q_derivative(alpha * a + beta * b, 0.4).coeffs
        rhs = (alpha * q_derivative(a, 0.4) + beta * q_derivative(b, 0.4)).coeffs
        assert np.allclose(lhs, rhs, rtol=0, atol=1e-14)

    def test_q_derivative_coefficientwise(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            deg = int(rng.integers(0, 9))
            f = TruncatedSeries(rng.normal(size=deg + 1))
            for q in np.arange(1, 10) / 10:
                out = q_derivative(f, q)
                for n in range(1, deg + 1):
                    assert out[n - 1] == pytest.approx(q_number(n, q) * f[n], rel=1e-15, abs=1e-300)


def test_operators_delegate():
    a, b = S(1, 2, 3), S(2, -1, 0)
    assert (a + b).allclose(add(a, b))
    assert (a * b).allclose(mul(a, b))
    assert (a / b).allclose(div(a, b))
    assert (1 - a).allclose(S(0, -2, -3))
    assert (2 * a).allclose(S(2, 4, 6))


@settings(max_examples=50)
@given(series_strategy(order=4), series_strategy(order=4))
def test_add_commutes(a, b):
    assert add(a, b).allclose(add(b, a), atol=0)
