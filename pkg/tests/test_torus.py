"""Sparse coefficient calculus: exact norms, lattice bijections, phase
multipliers, and the JSON-lines stream format."""

import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tflab.corpus import random_torus_coefficients
from tflab.torus import (
    LatticeBijection,
    TorusCoefficients,
    coefficients_from_jsonl,
    coefficients_to_jsonl,
    identity_bijection,
    negation_bijection,
    pair_swap_bijection,
    permutation_bijection,
    shear_bijection,
    shift_bijection,
    torus_canonical_transform,
    torus_norm,
    torus_propagator,
)

QS = [1.0, 1.5, 2.0, 4.0, math.inf]


class TestCoefficients:
    def test_scalar_keys_normalize(self):
        c = TorusCoefficients(1, {3: 2.0, (4,): 1.0})
        assert c.value_at((3,)) == 2.0
        assert c.value_at((4,)) == 1.0
        assert c.value_at((5,)) == 0.0
        assert len(c) == 2

    def test_validation(self):
        with pytest.raises(ValueError):
            TorusCoefficients(2, {(1,): 1.0})  # wrong dimension
        with pytest.raises(ValueError):
            TorusCoefficients(1, {(1,): complex(math.nan, 0.0)})
        with pytest.raises(ValueError):
            TorusCoefficients(1, {(1,): 1.0, 1: 2.0})  # same frequency twice


class TestNorm:
    def test_hand_values(self):
        c = TorusCoefficients(1, {(0,): 3.0, (5,): 4.0})
        assert torus_norm(c, 2.0) == pytest.approx(5.0, rel=1e-15)
        assert torus_norm(c, 1.0) == pytest.approx(7.0, rel=1e-15)
        assert torus_norm(c, math.inf) == 4.0
        assert torus_norm(c, 1.5) == pytest.approx((3.0**1.5 + 4.0**1.5) ** (2.0 / 3.0), rel=1e-14)

    def test_empty_and_bad_exponent(self):
        empty = TorusCoefficients(1, {})
        assert torus_norm(empty, 2.0) == 0.0
        with pytest.raises(ValueError):
            torus_norm(empty, 0.5)

    @given(
        st.dictionaries(
            st.integers(-40, 40),
            st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False),
            min_size=1,
            max_size=12,
        ),
        st.sampled_from([1.0, 2.0, math.inf]),
        st.integers(-100, 100),
    )
    def test_shift_invariance(self, d, q, offset):
        c = TorusCoefficients(1, {(k,): v for k, v in d.items()})
        moved = torus_canonical_transform(shift_bijection(offset), c)
        assert torus_norm(moved, q) == pytest.approx(torus_norm(c, q), rel=1e-12, abs=1e-300)


class TestBijections:
    def test_all_families_are_isometries(self):
        one_d = [
            identity_bijection(1),
            negation_bijection(1),
            shift_bijection(3),
            pair_swap_bijection(),
        ]
        for c in random_torus_coefficients(1, 10, seed=1):
            for bij in one_d:
                out = torus_canonical_transform(bij, c)
                assert len(out) == len(c)
                for q in QS:
                    assert torus_norm(out, q) == pytest.approx(torus_norm(c, q), rel=1e-15)
        two_d = [shear_bijection(), permutation_bijection((1, 0)), shift_bijection((2, -5))]
        for c in random_torus_coefficients(2, 10, seed=2):
            for bij in two_d:
                out = torus_canonical_transform(bij, c)
                for q in QS:
                    assert torus_norm(out, q) == pytest.approx(torus_norm(c, q), rel=1e-15)

    def test_pullback_semantics(self):
        """Output at xi carries the input value at forward(xi)."""
        c = TorusCoefficients(1, {(2,): 1.0 + 2.0j, (-1,): -3.0})
        out = torus_canonical_transform(shift_bijection(3), c)
        assert out.value_at((-1,)) == 1.0 + 2.0j  # forward(-1) = 2
        assert out.value_at((-4,)) == -3.0  # forward(-4) = -1
        assert len(out) == 2

    def test_pair_swap_is_an_involution(self):
        c = random_torus_coefficients(1, 1, seed=3)[0]
        bij = pair_swap_bijection()
        twice = torus_canonical_transform(bij, torus_canonical_transform(bij, c))
        assert twice.coeffs == c.coeffs

    def test_shear_hand_example(self):
        c = TorusCoefficients(2, {(5, 2): 1.0})
        out = torus_canonical_transform(shear_bijection(), c)
        # forward(3, 2) = (5, 2)
        assert out.value_at((3, 2)) == 1.0

    def test_non_bijection_detected(self):
        bad = LatticeBijection("halve", lambda k: (2 * k[0],), lambda k: (k[0] // 2,))
        c = TorusCoefficients(1, {(3,): 1.0})
        with pytest.raises(ValueError, match="not a bijection"):
            torus_canonical_transform(bad, c)

    def test_dimension_mismatch_detected(self):
        # a 1D shift applied to 2D coefficients returns short vectors
        c = TorusCoefficients(2, {(3, 1): 1.0})
        with pytest.raises(ValueError, match="dimension"):
            torus_canonical_transform(shift_bijection(3), c)

    def test_permutation_validation(self):
        with pytest.raises(ValueError):
            permutation_bijection((0, 0))


class TestPropagator:
    def test_preserves_every_norm(self):
        for c in random_torus_coefficients(2, 5, seed=4):
            out = torus_propagator(0.5, 0.7, c)
            for q in QS:
                assert torus_norm(out, q) == pytest.approx(torus_norm(c, q), rel=1e-14)

    def test_phases(self):
        c = TorusCoefficients(1, {(0,): 1.0, (3,): 1.0})
        out = torus_propagator(2.0, 0.7, c)
        assert out.value_at((0,)) == pytest.approx(1.0)  # |0|^2 = 0
        assert out.value_at((3,)) == pytest.approx(complex(math.cos(6.3), math.sin(6.3)), rel=1e-14)

    def test_alpha_zero_is_global_phase(self):
        c = TorusCoefficients(1, {(0,): 2.0, (5,): 1.0j})
        out = torus_propagator(0.0, 1.3, c)
        phase = complex(math.cos(1.3), math.sin(1.3))
        for k, v in c.items():
            assert out.value_at(k) == pytest.approx(v * phase, rel=1e-14)

    def test_negative_alpha_fixes_origin(self):
        c = TorusCoefficients(1, {(0,): 2.0})
        out = torus_propagator(-1.0, 0.9, c)
        assert out.value_at((0,)) == pytest.approx(2.0)

    def test_composition_in_time(self):
        c = random_torus_coefficients(1, 1, seed=5)[0]
        a = torus_propagator(2.0, 0.4, torus_propagator(2.0, 0.3, c))
        b = torus_propagator(2.0, 0.7, c)
        for k, v in a.items():
            assert v == pytest.approx(b.value_at(k), rel=1e-13)


class TestJsonl:
    def test_round_trip(self):
        c = random_torus_coefficients(2, 1, seed=6)[0]
        back = coefficients_from_jsonl(coefficients_to_jsonl(c))
        assert back.dim == 2
        assert back.coeffs == c.coeffs

    def test_lines_are_sorted_and_parseable(self):
        c = TorusCoefficients(1, {(4,): 1.0, (-2,): 2.0, (0,): 3.0})
        text = coefficients_to_jsonl(c)
        keys = [json.loads(line)["xi"] for line in text.splitlines()]
        assert keys == [[-2], [0], [4]]

    def test_empty_stream(self):
        empty = TorusCoefficients(3, {})
        assert coefficients_to_jsonl(empty) == ""
        back = coefficients_from_jsonl("", dim=3)
        assert back.dim == 3 and len(back) == 0
        with pytest.raises(ValueError):
            coefficients_from_jsonl("")

    def test_blank_lines_skipped(self):
        text = '\n{"xi": [1], "re": 2.0, "im": 0.0}\n\n'
        c = coefficients_from_jsonl(text)
        assert c.value_at((1,)) == 2.0

    def test_malformed_line_raises(self):
        with pytest.raises(json.JSONDecodeError):
            coefficients_from_jsonl("not json\n")
        with pytest.raises(KeyError):
            coefficients_from_jsonl('{"frequency": [1]}\n')
