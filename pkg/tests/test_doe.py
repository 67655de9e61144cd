"""Program-matrix construction, coding and design properties."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from edmlab.doe import (
    DesignSpec,
    FactorLevels,
    build_full_factorial,
    code_level,
    decode_level,
)
from edmlab.errors import CapacityError, ValidationError

from .oracles import full_factorial_enumeration


def spec_for(k, replicates=1, center_points=0, seed=None):
    return DesignSpec(
        factors=[FactorLevels(f"f{i}", float(i), float(i + 10)) for i in range(k)],
        replicates=replicates,
        center_points=center_points,
        shuffle_seed=seed,
    )


class TestCoding:
    def test_midpoint(self):
        assert code_level(6, 2, 10) == 0.0

    def test_high_endpoint(self):
        assert code_level(10, 2, 10) == 1.0

    def test_hand_value(self):
        assert code_level(4, 2, 10) == pytest.approx(-0.5, abs=1e-15)

    def test_decode(self):
        assert decode_level(0, 2, 10) == 6.0
        assert decode_level(-1, 2, 10) == 2.0
        assert decode_level(0.25, 0, 8) == 5.0

    def test_bad_levels(self):
        with pytest.raises(ValidationError):
            code_level(1, 5, 5)
        with pytest.raises(ValidationError):
            decode_level(0, 7, 3)

    @given(
        st.floats(-1e6, 1e6),
        st.floats(-1e6, 1e6),
        st.floats(0, 1),
    )
    @settings(max_examples=200, deadline=None)
    def test_round_trip(self, low, span, t):
        if not span > 1e-6:
            return
        high = low + span
        x = low + t * span
        back = decode_level(code_level(x, low, high), low, high)
        # 1e-12 relative to the coding scale: x itself can sit arbitrarily
        # close to zero inside a wide range, where cancellation is unavoidable
        scale = max(abs(x), (high - low) / 2.0)
        assert abs(back - x) <= 1e-12 * scale


class TestFullFactorial:
    def test_two_factor_yates_order(self):
        m = build_full_factorial(spec_for(2))
        assert [r.coded_levels for r in m.rows] == [
            [-1, -1],
            [1, -1],
            [-1, 1],
            [1, 1],
        ]

    def test_single_factor_endpoints(self):
        spec = DesignSpec(factors=[FactorLevels("I", 2, 10)])
        m = build_full_factorial(spec)
        assert [r.natural_levels[0] for r in m.rows] == [2.0, 10.0]

    def test_three_factor_two_reps_one_center(self):
        m = build_full_factorial(spec_for(3, replicates=2, center_points=1))
        assert len(m.rows) == 18
        non_center = [r for r in m.rows if not r.is_center]
        assert len(non_center) == 16
        cols = np.array([r.coded_levels for r in non_center])
        # verified against direct enumeration
        expected = np.repeat(np.array(full_factorial_enumeration(3), dtype=float), 2, axis=0)
        np.testing.assert_array_equal(cols, expected)
        for i, j in itertools.combinations(range(3), 2):
            assert np.dot(cols[:, i], cols[:, j]) == 0.0
        assert np.all(cols.sum(axis=0) == 0.0)

    def test_replicates_blocked_per_design_point(self):
        m = build_full_factorial(spec_for(2, replicates=3))
        runs = [r.run_index for r in m.rows]
        reps = [r.replicate_index for r in m.rows]
        assert runs == [1, 1, 1, 2, 2, 2, 3, 3, 3, 4, 4, 4]
        assert reps == [1, 2, 3] * 4

    def test_center_rows_decode_to_midpoints(self):
        spec = DesignSpec(
            factors=[FactorLevels("a", 2, 10), FactorLevels("b", 0, 8)], center_points=2
        )
        m = build_full_factorial(spec)
        centers = [r for r in m.rows if r.is_center]
        assert len(centers) == 2
        assert centers[0].natural_levels == [6.0, 4.0]
        assert centers[0].run_index == 5 and centers[1].run_index == 6

    @pytest.mark.parametrize("k", range(1, 7))
    @pytest.mark.parametrize("r", (1, 2, 3))
    def test_orthogonality_and_balance(self, k, r):
        m = build_full_factorial(spec_for(k, replicates=r))
        cols = np.array([row.coded_levels for row in m.rows])
        assert cols.shape == (r * 2**k, k)
        for i, j in itertools.combinations(range(k), 2):
            assert np.dot(cols[:, i], cols[:, j]) == 0.0
        for i in range(k):
            assert (cols[:, i] == -1).sum() == r * 2 ** (k - 1)
            assert (cols[:, i] == 1).sum() == r * 2 ** (k - 1)

    def test_determinism(self):
        a = build_full_factorial(spec_for(4, replicates=2, center_points=3))
        b = build_full_factorial(spec_for(4, replicates=2, center_points=3))
        assert a.to_dict() == b.to_dict()

    def test_shuffle_is_seeded_and_off_by_default(self):
        base = build_full_factorial(spec_for(3))
        s1 = build_full_factorial(spec_for(3, seed=99))
        s2 = build_full_factorial(spec_for(3, seed=99))
        assert s1.to_dict() == s2.to_dict()
        assert sorted(map(str, s1.to_dict()["rows"])) == sorted(map(str, base.to_dict()["rows"]))

    def test_capacity_limits(self):
        with pytest.raises(CapacityError):
            build_full_factorial(spec_for(9))
        with pytest.raises(CapacityError):
            build_full_factorial(DesignSpec(factors=[]))

    def test_invalid_spec(self):
        with pytest.raises(ValidationError):
            build_full_factorial(
                DesignSpec(factors=[FactorLevels("a", 5, 5)])
            )
        with pytest.raises(ValidationError):
            build_full_factorial(
                DesignSpec(
                    factors=[FactorLevels("a", 0, 1), FactorLevels("a", 0, 2)]
                )
            )
        with pytest.raises(ValidationError):
            build_full_factorial(spec_for(2, replicates=0))
