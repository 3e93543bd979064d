"""Constellation, encoding-pair, and scaling-law unit tests."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from layeralign import ConfigError
from layeralign.constellation import (
    Constellation,
    EncodingPair,
    ScalingLaw,
    build_constellation,
    draw_symbols,
    encode_antenna,
)


class TestConstellation:
    def test_points_q1(self):
        np.testing.assert_array_equal(Constellation(1).points, [-1.0, 0.0, 1.0])

    def test_points_scaled(self):
        np.testing.assert_array_equal(
            Constellation(2, A=3.0).points, [-6.0, -3.0, 0.0, 3.0, 6.0]
        )

    def test_cardinality_and_power(self):
        c = Constellation(10, A=100.0)
        assert c.cardinality == 21
        assert c.power == 1_000_000.0

    @pytest.mark.parametrize("Q", [0, -1, 2.5, "3", True])
    def test_bad_Q_rejected(self, Q):
        with pytest.raises(ConfigError):
            Constellation(Q)

    @pytest.mark.parametrize("A", [0.0, -1.0, float("nan"), float("inf")])
    def test_bad_A_rejected(self, A):
        with pytest.raises(ConfigError):
            Constellation(2, A=A)

    def test_build_coerces(self):
        c = build_constellation(np.int64(3), 2)
        assert c.Q == 3 and c.A == 2.0


class TestEncodingPair:
    """Injectivity of (u, v) -> a*u + b*v on the symbol grid."""

    def test_rational_ratio_collides(self):
        # u + 2v: (2, 0) and (0, 1) hit the same level once Q >= 2
        assert not EncodingPair(1.0, 2.0).is_uniquely_decodable(2)
        assert EncodingPair(1.0, 2.0).min_gap(2) == 0.0

    def test_sum_collides_even_at_q1(self):
        assert not EncodingPair(1.0, 1.0).is_uniquely_decodable(1)

    def test_irrational_ratio_is_injective(self):
        assert EncodingPair(1.0, math.sqrt(2)).is_uniquely_decodable(4, tol=1e-9)

    def test_stacked_integer_pair_is_injective(self):
        # b = 2Q + 1 interleaves the two streams without overlap
        assert EncodingPair(1.0, 5.0).is_uniquely_decodable(2)
        assert EncodingPair(1.0, 5.0).min_gap(2) == pytest.approx(1.0)

    def test_levels_grid(self):
        lv = EncodingPair(1.0, 5.0).levels(2)
        assert lv.shape == (25,)
        assert lv[0] == -12.0 and lv[-1] == 12.0
        assert np.all(np.diff(lv) >= 0)

    @pytest.mark.parametrize("a,b", [(0.0, 1.0), (1.0, 0.0), (float("nan"), 1.0)])
    def test_degenerate_coefficients_rejected(self, a, b):
        with pytest.raises(ConfigError):
            EncodingPair(a, b)

    @given(
        a=st.floats(min_value=0.1, max_value=4.0),
        b=st.floats(min_value=0.1, max_value=4.0),
        Q=st.integers(min_value=1, max_value=4),
    )
    @settings(max_examples=60, deadline=None)
    def test_levels_bounded(self, a, b, Q):
        lv = EncodingPair(a, b).levels(Q)
        assert np.max(np.abs(lv)) <= (abs(a) + abs(b)) * Q + 1e-12


class TestEncodeAntenna:
    def test_scalar_and_broadcast(self):
        pair = EncodingPair(1.0, 5.0)
        assert encode_antenna(2, -1, pair, A=3.0) == 3.0 * (2 - 5)
        out = encode_antenna(np.array([1, 0]), np.array([0, 2]), pair)
        np.testing.assert_allclose(out, [1.0, 10.0])

    def test_range_check(self):
        pair = EncodingPair(1.0, 5.0)
        with pytest.raises(ConfigError):
            encode_antenna(3, 0, pair, Q=2)

    def test_gaussian_symbols_pass_through(self):
        pair = EncodingPair(1.0, 5.0)
        out = encode_antenna(1 + 1j, 0 - 2j, pair, Q=2)
        assert out == (1 + 1j) + 5.0 * (0 - 2j)


class TestScalingLaw:
    def test_amplitude_power(self):
        law = ScalingLaw(2.0)
        assert law.amplitude(3) == 9.0
        assert law.power(3) == 9.0 ** 2 * 9.0
        assert law.power(3, streams=2) == 2 * 9.0 ** 2 * 9.0

    @pytest.mark.parametrize("Q", [2, 3, 4, 6, 8])
    @pytest.mark.parametrize("k", [0.5, 1.0, 2.0, 3.0])
    def test_nominal_min_distance_is_unit(self, Q, k):
        assert ScalingLaw(k).nominal_min_distance(Q) == pytest.approx(1.0, rel=1e-12)

    def test_negative_exponent_rejected(self):
        with pytest.raises(ConfigError):
            ScalingLaw(-0.5)


class TestDrawSymbols:
    def test_real_bounds_and_determinism(self):
        a = draw_symbols(np.random.default_rng(3), 4, size=1000)
        b = draw_symbols(np.random.default_rng(3), 4, size=1000)
        np.testing.assert_array_equal(a, b)
        assert a.min() >= -4 and a.max() <= 4
        # all levels actually show up at this sample size
        assert set(np.unique(a)) == set(range(-4, 5))

    def test_complex_box(self):
        z = draw_symbols(np.random.default_rng(0), 2, size=500, field="complex")
        assert z.dtype.kind == "c"
        assert np.max(np.abs(z.real)) <= 2 and np.max(np.abs(z.imag)) <= 2
        assert np.all(z.real == np.rint(z.real)) and np.all(z.imag == np.rint(z.imag))

    def test_unknown_field(self):
        with pytest.raises(ConfigError):
            draw_symbols(np.random.default_rng(0), 2, field="quaternion")
