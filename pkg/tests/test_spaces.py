"""Mixed lattice norms, the frequency partition, and scaling-table helpers."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tflab.corpus import bump_plateaus, random_bandlimited
from tflab.grid import GridSpec, SampledField, SupportBox, forward_fourier, lp_norm
from tflab.spaces import (
    INNER_X,
    INNER_XI,
    NormSpec,
    UniformPartition,
    build_partition,
    conjugate_exponent,
    fit_loglog_slope,
    fourier_lebesgue_norm,
    mixed_norm,
    modulation_norm,
    partition_norm_modulation,
    partition_norm_wiener,
    partition_pieces,
    support_scaling_table,
    wiener_norm,
)
from tflab.stft import StftArray, Window, make_window


def random_stft(spec, seed=0):
    rng = np.random.default_rng(seed)
    shape = spec.shape + spec.shape
    return StftArray(spec, "custom", rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def random_field(spec, seed=0):
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(spec.shape) + 1j * rng.standard_normal(spec.shape)
    return SampledField(spec, vals)


class _ConstWeight:
    """weight == 1 everywhere, for checking the weighted path is a no-op."""

    def sample_x(self, pts):
        return np.ones(np.asarray(pts).shape[:-1])

    sample_xi = sample_x


class TestConjugateExponent:
    def test_values(self):
        assert conjugate_exponent(1.0) == math.inf
        assert conjugate_exponent(math.inf) == 1.0
        assert conjugate_exponent(2.0) == 2.0
        assert conjugate_exponent(4.0) == pytest.approx(4.0 / 3.0)

    def test_rejects_bad_exponent(self):
        for bad in (0.5, 0.0, -1.0, math.nan):
            with pytest.raises(ValueError):
                conjugate_exponent(bad)

    @given(st.floats(min_value=1.0, max_value=50.0))
    def test_holder_relation(self, p):
        pc = conjugate_exponent(p)
        inv = 0.0 if math.isinf(pc) else 1.0 / pc
        assert 1.0 / p + inv == pytest.approx(1.0, abs=1e-12)


class TestNormSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            NormSpec(0.5, 2.0)
        with pytest.raises(ValueError):
            NormSpec(2.0, 0.0)
        with pytest.raises(ValueError):
            NormSpec(2.0, 2.0, ordering=3)


class TestMixedNorm:
    def test_single_entry_hand_value(self):
        """One nonzero sample: the norm is |v| h^{1/p} (dxi)^{1/q}."""
        spec = GridSpec(1, 2.0, 8)
        vals = np.zeros((8, 8), dtype=complex)
        vals[3, 5] = 2.0 - 1.0j
        s = StftArray(spec, "custom", vals)
        h, dxi = spec.step, spec.dual_step
        v = abs(vals[3, 5])
        for ordering in (INNER_X, INNER_XI):
            got = mixed_norm(s, NormSpec(2.0, 3.0, ordering))
            assert got == pytest.approx(v * h ** (1 / 2) * dxi ** (1 / 3), rel=1e-13)
        assert mixed_norm(s, NormSpec(math.inf, 1.0, INNER_X)) == pytest.approx(v * dxi)
        assert mixed_norm(s, NormSpec(1.0, math.inf, INNER_X)) == pytest.approx(v * h)
        assert mixed_norm(s, NormSpec(math.inf, math.inf, INNER_XI)) == pytest.approx(v)

    def test_orderings_agree_when_exponents_match(self):
        spec = GridSpec(1, 2.0, 8)
        s = random_stft(spec, 1)
        for p in (1.0, 3.0, math.inf):
            a = mixed_norm(s, NormSpec(p, p, INNER_X))
            b = mixed_norm(s, NormSpec(p, p, INNER_XI))
            assert a == pytest.approx(b, rel=1e-13)

    def test_nested_loop_oracle(self):
        """Both orderings against explicit nested loops on an 8x8 array."""
        spec = GridSpec(1, 2.0, 8)
        s = random_stft(spec, 2)
        a = np.abs(s.values)
        h, dxi = spec.step, spec.dual_step
        p, q = 2.0, 3.0
        inner_x = [(sum(a[m, k] ** p for m in range(8)) * h) ** (1 / p) for k in range(8)]
        mod = (sum(c**q for c in inner_x) * dxi) ** (1 / q)
        inner_xi = [(sum(a[m, k] ** q for k in range(8)) * dxi) ** (1 / q) for m in range(8)]
        wie = (sum(c**p for c in inner_xi) * h) ** (1 / p)
        assert mixed_norm(s, NormSpec(p, q, INNER_X)) == pytest.approx(mod, rel=1e-12)
        assert mixed_norm(s, NormSpec(p, q, INNER_XI)) == pytest.approx(wie, rel=1e-12)

    def test_nested_loop_oracle_with_sup(self):
        spec = GridSpec(1, 2.0, 8)
        s = random_stft(spec, 3)
        a = np.abs(s.values)
        h, dxi = spec.step, spec.dual_step
        # p = inf inner, q = 2 outer, modulation ordering
        inner = a.max(axis=0)
        ref = (np.sum(inner**2) * dxi) ** 0.5
        assert mixed_norm(s, NormSpec(math.inf, 2.0, INNER_X)) == pytest.approx(ref, rel=1e-12)
        # q = inf inner, p = 1 outer, amalgam ordering
        ref2 = np.sum(a.max(axis=1)) * h
        assert mixed_norm(s, NormSpec(1.0, math.inf, INNER_XI)) == pytest.approx(ref2, rel=1e-12)

    def test_iterated_norm_directions(self):
        """Swapping to the larger inner exponent first never increases the norm."""
        spec = GridSpec(1, 2.0, 8)
        for seed in range(4):
            s = random_stft(spec, 10 + seed)
            for p, q in [(1.0, 2.0), (2.0, 4.0), (1.0, math.inf), (1.5, 3.0)]:
                m = mixed_norm(s, NormSpec(p, q, INNER_X))
                w = mixed_norm(s, NormSpec(p, q, INNER_XI))
                assert m <= w * (1 + 1e-12)  # p <= q
                m2 = mixed_norm(s, NormSpec(q, p, INNER_X))
                w2 = mixed_norm(s, NormSpec(q, p, INNER_XI))
                assert w2 <= m2 * (1 + 1e-12)  # inner exponent now smaller

    @settings(max_examples=40)
    @given(
        st.floats(min_value=0.01, max_value=100.0),
        st.floats(min_value=-math.pi, max_value=math.pi),
        st.sampled_from([(1.0, 2.0), (2.0, 2.0), (3.0, 1.5), (math.inf, 1.0)]),
    )
    def test_absolute_homogeneity(self, mag, angle, pq):
        spec = GridSpec(1, 2.0, 8)
        s = random_stft(spec, 4)
        c = mag * complex(math.cos(angle), math.sin(angle))
        scaled = StftArray(spec, "custom", c * s.values)
        p, q = pq
        base = mixed_norm(s, NormSpec(p, q, INNER_X))
        assert mixed_norm(scaled, NormSpec(p, q, INNER_X)) == pytest.approx(abs(c) * base, rel=1e-10)

    def test_constant_weight_is_identity(self):
        spec = GridSpec(1, 6.0, 32)
        f = random_field(spec, 5)
        w = make_window(spec, "gaussian")
        plain = modulation_norm(f, w, 2.0, 3.0)
        weighted = modulation_norm(f, w, 2.0, 3.0, weight=_ConstWeight())
        assert abs(plain - weighted) <= 1e-15 * plain


class TestNormIdentities:
    def test_energy_norm_factorizes(self):
        """The (2,2) norm splits into (2 pi)^{n/2} times the two L2 norms."""
        for spec, seed in [(GridSpec(1, 8.0, 64), 6), (GridSpec(2, 4.0, 16), 7)]:
            f = random_field(spec, seed)
            w = make_window(spec, "gaussian")
            got = modulation_norm(f, w, 2.0, 2.0)
            target = (2 * math.pi) ** (spec.dim / 2) * lp_norm(f, 2.0) * lp_norm(w.field, 2.0)
            assert got == pytest.approx(target, rel=1e-12)

    def test_amalgam_is_transform_side_modulation(self):
        """Ordering-2 norm of f equals (2 pi)^{-n} times the swapped-exponent
        ordering-1 norm of the transformed pair."""
        for spec, seed in [(GridSpec(1, 8.0, 64), 8), (GridSpec(2, 3.0, 8), 9)]:
            f = random_field(spec, seed)
            w = make_window(spec, "gaussian")
            fhat = forward_fourier(f)
            what = Window(forward_fourier(w.field))
            for p, q in [(2.0, 3.0), (1.0, math.inf)]:
                lhs = wiener_norm(f, w, p, q)
                rhs = modulation_norm(fhat, what, q, p) / (2 * math.pi) ** spec.dim
                assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_fourier_lebesgue_gaussian(self):
        spec = GridSpec(1, 12.0, 128)
        x = spec.axis()
        f = SampledField(spec, np.exp(-(x**2) / 2.0))
        # transform is sqrt(2 pi) e^{-xi^2/2}; its L2 norm is sqrt(2 pi) pi^{1/4}
        assert fourier_lebesgue_norm(f, 2.0) == pytest.approx(
            math.sqrt(2 * math.pi) * math.pi**0.25, rel=1e-10
        )
        assert fourier_lebesgue_norm(f, math.inf) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-10)

    def test_fourier_lebesgue_rejects_bad_weight(self):
        spec = GridSpec(1, 4.0, 16)
        f = random_field(spec, 20)

        class Bad:
            def sample_xi(self, pts):
                return np.zeros(np.asarray(pts).shape[:-1])

        with pytest.raises(ValueError):
            fourier_lebesgue_norm(f, 2.0, weight=Bad())


class TestPartition:
    def test_translates_cover_the_frequency_box(self):
        dual = GridSpec(1, 4.0, 32).dual()
        part = build_partition(dual)
        ks = part.translates[:, 0]
        assert ks.min() <= -dual.half_width and ks.max() >= dual.half_width

    def test_sum_is_one(self):
        dual = GridSpec(1, 4.0, 32).dual()
        part = build_partition(dual)
        pts = dual.nodes()
        assert np.abs(part.sum_at(pts) - 1.0).max() < 1e-14

    def test_pieces_reassemble(self):
        spec = GridSpec(1, 8.0, 128)
        f = random_bandlimited(spec, 1, seed=3)[0].field
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # reassembly holds with or without edge mass
            _, pieces = partition_pieces(f)
        total = sum(p.values for p in pieces)
        assert np.abs(total - f.values).max() < 1e-13 * np.abs(f.values).max()

    def test_rough_field_still_reassembles(self):
        # the unit sum covers the whole box, so even a white spectrum comes back
        spec = GridSpec(1, 4.0, 32)
        f = random_field(spec, 40)
        with pytest.warns(UserWarning):
            _, pieces = partition_pieces(f)
        total = sum(p.values for p in pieces)
        assert np.abs(total - f.values).max() < 1e-12 * np.abs(f.values).max()

    def test_pure_tone_splits_between_two_neighbours(self):
        """A spectrum at half-integer frequency meets exactly two translates."""
        spec = GridSpec(1, 2.0 * math.pi, 32)  # dual step exactly 1/2
        x = spec.axis()
        f = SampledField(spec, np.exp(1j * 0.5 * x))
        part, pieces = partition_pieces(f)
        norms = np.array([lp_norm(p, 2.0) for p in pieces])
        live = np.nonzero(norms > 1e-12 * norms.max())[0]
        assert len(live) == 2
        assert set(part.translates[live, 0]) == {0, 1}
        for idx in live:  # each carries half the tone
            assert np.abs(pieces[idx].values - 0.5 * f.values).max() < 1e-12
        # hand values for the decomposition norms
        l2 = lp_norm(f, 2.0)
        assert partition_norm_modulation(f, 2.0, 1.0) == pytest.approx(l2, rel=1e-12)
        assert partition_norm_modulation(f, 2.0, math.inf) == pytest.approx(0.5 * l2, rel=1e-12)
        assert partition_norm_wiener(f, 2.0, 1.0) == pytest.approx(l2, rel=1e-12)

    def test_edge_band_mass_warns(self):
        spec = GridSpec(1, 2.0 * math.pi, 32)  # frequency box [-8, 8)
        x = spec.axis()
        f = SampledField(spec, np.exp(1j * 7.5 * x))
        with pytest.warns(UserWarning, match="edge"):
            partition_pieces(f)

    def test_well_localized_spectrum_is_silent(self):
        spec = GridSpec(1, 2.0 * math.pi, 32)
        x = spec.axis()
        f = SampledField(spec, np.exp(-(x**2) / 2.0))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            partition_pieces(f)

    def test_explicit_partition_validation(self):
        with pytest.raises(ValueError):
            UniformPartition(np.zeros((0, 1), dtype=int))
        with pytest.raises(ValueError):
            UniformPartition(np.array([1, 2, 3]))


class TestSupportScalingTable:
    def test_rows_and_ratios(self):
        spec = GridSpec(1, 16.0, 256)
        members = [(m.field, m.support) for m in bump_plateaus(spec, [2.0, 4.0, 8.0])]
        w = make_window(spec, "compact_bump", radius=1.0)
        rows = support_scaling_table(members, w, 1.0, math.inf)
        assert len(rows) == 3
        vols = [r["fattened_volume"] for r in rows]
        assert vols == sorted(vols)
        for r in rows:
            assert r["ratio_w_over_m"] > 0
            assert r["ratio_m_over_w"] == pytest.approx(1.0 / r["ratio_w_over_m"], rel=1e-12)

    def test_undeclared_support_rejected(self):
        spec = GridSpec(1, 8.0, 64)
        f = random_field(spec, 30)  # nonzero everywhere
        box = SupportBox((-1.0,), (1.0,))
        w = make_window(spec, "gaussian")
        with pytest.raises(ValueError):
            support_scaling_table([(f, box)], w, 2.0, 2.0)


class TestSlopeFit:
    def test_exact_power_law(self):
        xs = np.array([1.0, 2.0, 4.0, 8.0])
        ys = 3.0 * xs**1.7
        assert fit_loglog_slope(xs, ys) == pytest.approx(1.7, abs=1e-12)

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            fit_loglog_slope([1.0], [2.0])
