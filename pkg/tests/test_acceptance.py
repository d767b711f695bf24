"""Acceptance gate: one test per shipped guarantee, at its stated tolerance.

Each test prints a single ``[Ann] PASS/FAIL`` line (visible under ``-s`` and
in failure output) and then asserts. Heavy paths reuse the experiment
runners from tflab.experiments; the final test re-derives every core
identity from scratch with explicit loops and quadrature sums so the FFT
paths are checked against code that shares nothing with them.

Run order matters only for the wall-clock budget asserted at the end.
"""

import math
import time

import numpy as np

from tflab.corpus import mixed_corpus
from tflab.experiments import ExperimentContext, run_experiment
from tflab.grid import GridSpec, SampledField, forward_fourier, lp_norm
from tflab.operators import (
    GaborCoefficients,
    GaborSystem,
    KNSymbol,
    gabor_synthesize,
    kohn_nirenberg_apply,
)
from tflab.spaces import INNER_X, INNER_XI, NormSpec, mixed_norm, modulation_norm
from tflab.stft import StftArray, make_window, stft

MODULE_START = time.perf_counter()


def _report(tag: str, ok: bool, detail: str) -> None:
    line = f"[{tag}] {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    assert ok, line


def _run(name: str, **options):
    ctx = ExperimentContext(seed=7, options={k: str(v) for k, v in options.items()})
    t0 = time.perf_counter()
    res = run_experiment(name, ctx)
    return res, time.perf_counter() - t0


def _check(res, name: str):
    [c] = [c for c in res.checks if c.name == name]
    return c


def _random_field(spec: GridSpec, seed: int) -> SampledField:
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(spec.shape) + 1j * rng.standard_normal(spec.shape)
    return SampledField(spec, vals)


def _gabor_direct_deviation(seed: int) -> float:
    """Synthesis vs an explicit 3x3 sum of shifted, modulated atoms."""
    spec = GridSpec(1, 4.0, 32)
    atom = make_window(spec, "gaussian").field
    alpha = round(1.0 / spec.step) * spec.step
    beta = round(1.0 / spec.dual_step) * spec.dual_step
    system = GaborSystem(atom, alpha, beta)
    rng = np.random.default_rng(seed)
    c = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    got = gabor_synthesize(system, GaborCoefficients((-1,), (-1,), c)).values
    x = spec.axis()
    n = spec.points
    ref = np.zeros(n, dtype=complex)
    for ji, j in enumerate((-1, 0, 1)):
        shift = int(round(alpha * j / spec.step))
        atom_j = atom.values[(np.arange(n) - shift) % n]
        for ki, k in enumerate((-1, 0, 1)):
            ref += c[ji, ki] * np.exp(1j * beta * k * x) * atom_j
    return float(np.abs(got - ref).max())


def _quantization_double_sum_deviation(points: int, seed: int) -> float:
    """Symbol quantization vs the explicit double sum over (x_m, xi_k)."""
    spec = GridSpec(1, 4.0, points)
    f = _random_field(spec, seed)
    func = lambda x, xi: 1.0 / (1.0 + x[..., 0] ** 2 + xi[..., 0] ** 2)
    got = kohn_nirenberg_apply(KNSymbol("rational", func), f).values
    fhat = forward_fourier(f)
    xs, xis = spec.axis(), fhat.spec.axis()
    ref = np.empty(points, dtype=complex)
    for m in range(points):
        acc = 0.0 + 0.0j
        for k in range(points):
            acc += np.exp(1j * xs[m] * xis[k]) * fhat.values[k] / (
                1.0 + xs[m] ** 2 + xis[k] ** 2
            )
        ref[m] = acc * spec.dual_step / (2.0 * math.pi)
    return float(np.abs(got - ref).max())


def test_01_exact_lattice_isometries():
    res, dt = _run("torus-isometry")  # defaults: 100 sets, q in {1, 3/2, 2, 4, inf}
    families = {r["parameter"] for r in res.rows if r["parameter"].startswith("bijection=")}
    bij = _check(res, "bijection_norm_deviation").value
    prop = _check(res, "propagator_norm_deviation").value
    ok = res.passed and bij <= 1e-15 and prop <= 1e-15 and len(families) >= 5 and dt < 1.0
    _report(
        "A01",
        ok,
        f"norm deviation {max(bij, prop):.1e} over {len(families)} bijection families "
        f"+ unimodular flows, {dt:.2f}s",
    )


def test_02_transform_covariance():
    res, dt = _run("fourier-covariance")  # defaults: 10 members, N=256, 1D
    dev = _check(res, "max_deviation").value
    ok = res.passed and dev < 1e-6 and len(res.rows) == 10 and dt < 10.0
    _report("A02", ok, f"max lattice deviation {dev:.1e} over {len(res.rows)} members, {dt:.1f}s")


def test_03_energy_norm_ratio_uniform():
    spec = GridSpec(1, 16.0, 256)
    window = make_window(spec, "gaussian")
    members = mixed_corpus(spec, seed=5, per_family=4)
    ratios = np.array(
        [modulation_norm(m.field, window, 2.0, 2.0) / lp_norm(m.field, 2.0) for m in members]
    )
    cv = float(ratios.std() / ratios.mean())
    ok = cv < 0.01
    _report("A03", ok, f"(2,2)-norm / energy ratio cv {cv:.1e} across {len(members)} members")


def test_04_three_norm_equivalence():
    res, dt = _run("thm1-equivalence")
    cmax = _check(res, "max_two_sided_constant").value
    drift = _check(res, "refinement_drift").value
    ok = res.passed and math.isfinite(cmax) and drift < 0.10
    _report(
        "A04",
        ok,
        f"two-sided constants <= {cmax:.2f}, refinement drift {drift:.1e}, {dt:.1f}s",
    )


def test_05_support_scaling_slopes():
    res, dt = _run("omega-scaling")  # defaults: N=2048, widths 2,4,8,16
    s_unbal = _check(res, "slope_p1_qinf").value
    s_diag = _check(res, "abs_slope_p2_q2").value
    ok = res.passed and s_unbal <= 1.1 and s_diag <= 0.05 and dt < 120.0
    _report(
        "A05",
        ok,
        f"(1,inf) slope {s_unbal:.3f} <= 1.1, diagonal |slope| {s_diag:.1e} <= 0.05, {dt:.1f}s",
    )


def test_06_phase_change_growth():
    res, _ = _run("bh-growth")
    flat1 = _check(res, "affine_flat_q1").value
    growth = _check(res, "square_growth_q1").value
    flat2 = _check(res, "affine_flat_q2").value
    sq2 = _check(res, "square_flat_q2").value
    ok = flat1 < 1.05 and growth >= 2.0 and flat2 < 1.01 and sq2 < 1.01 and res.passed
    _report(
        "A06",
        ok,
        f"affine flat {flat1:.3f}/{flat2:.3f}, square growth {growth:.2f} at q=1, "
        f"square flat {sq2:.3f} at q=2",
    )


def test_07_hilbert_identities():
    res, _ = _run("hilbert-identities")
    worst = max(c.value for c in res.checks)
    ok = res.passed and worst <= 1e-10
    _report("A07", ok, f"worst identity deviation {worst:.1e} <= 1e-10")


def test_08_gabor_synthesis_bound():
    res, dt = _run("gabor-bounds")  # defaults: 20 draws, (2,2), (3,3/2), (4,4)
    worst = max(c.value for c in res.checks)
    oracle = _gabor_direct_deviation(42)
    ok = res.passed and math.isfinite(worst) and oracle <= 1e-10
    _report(
        "A08",
        ok,
        f"worst synthesis/coefficient ratio {worst:.2f} bounded, "
        f"direct-sum oracle {oracle:.1e} <= 1e-10, {dt:.1f}s",
    )


def test_09_reflection_decomposition():
    res, _ = _run("hom-reflection")
    dev2 = _check(res, "decomposition_deviation").value
    even = _check(res, "even_ratio_deviation").value
    drift = _check(res, "ratio_refinement_drift").value
    ok = res.passed and dev2 <= 1e-9 and even <= 1e-9 and drift <= 0.10
    _report(
        "A09",
        ok,
        f"off-axis reassembly {dev2:.1e}, even-field ratio off by {even:.1e}, "
        f"general-field drift {drift:.1e}",
    )


def test_10_composed_transform():
    res, dt = _run("fio-compose")
    ident = _check(res, "identity_deviation").value
    ratio = _check(res, "max_localized_ratio").value
    drift = _check(res, "refinement_drift").value
    kn_dev = _quantization_double_sum_deviation(32, seed=11)
    ok = (
        res.passed
        and ident <= 1e-9
        and kn_dev <= 1e-9
        and math.isfinite(ratio)
        and drift <= 0.10
    )
    _report(
        "A10",
        ok,
        f"unit symbol + identity map off by {ident:.1e}, double-sum oracle {kn_dev:.1e}, "
        f"localized ratio {ratio:.2f} with drift {drift:.1e}, {dt:.1f}s",
    )


def test_11_weighted_chain():
    res, dt = _run("weighted-embeddings")  # defaults: powers -1, 0, 1 at p=4
    const_dev = _check(res, "constant_weight_identity").value
    worst = _check(res, "max_chain_ratio").value
    ok = res.passed and const_dev <= 1e-15 and math.isfinite(worst)
    _report(
        "A11",
        ok,
        f"chain ratios <= {worst:.2f}, unit weight reproduces unweighted to "
        f"{const_dev:.1e}, {dt:.1f}s",
    )


def test_12_brute_force_oracles():
    # (a) transform vs explicit quadrature sum, 1D and 2D
    dft_dev = 0.0
    for spec in (GridSpec(1, 4.0, 16), GridSpec(2, 3.0, 8)):
        f = _random_field(spec, 31)
        x = spec.nodes().reshape(-1, spec.dim)
        xi = spec.dual().nodes().reshape(-1, spec.dim)
        ref = (spec.cell_volume * (np.exp(-1j * (xi @ x.T)) @ f.values.ravel())).reshape(
            spec.shape
        )
        got = forward_fourier(f).values
        dft_dev = max(dft_dev, float(np.abs(got - ref).max() / np.abs(ref).max()))

    # (b) windowed transform vs the O(N^3) double sum with periodic translates
    spec = GridSpec(1, 4.0, 16)
    f = _random_field(spec, 32)
    w = make_window(spec, "triangular", radius=2.0)
    n = spec.points
    t = spec.axis()
    xi = spec.dual().axis()
    dft = np.exp(-1j * np.outer(xi, t))
    ref = np.empty((n, n), dtype=complex)
    for m in range(n):
        shifted = w.field.values[(np.arange(n) - m + n // 2) % n]
        ref[m] = spec.cell_volume * (dft @ (f.values * np.conjugate(shifted)))
    stft_dev = float(np.abs(stft(f, w).values - ref).max())

    # (c) nested mixed norms vs explicit loops, both orderings
    rng = np.random.default_rng(33)
    spec8 = GridSpec(1, 2.0, 8)
    vals = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    s = StftArray(spec8, "custom", vals)
    a = np.abs(vals)
    h, dxi = spec8.step, spec8.dual_step
    p, q = 2.0, 3.0
    inner_x = [(sum(a[m, k] ** p for m in range(8)) * h) ** (1 / p) for k in range(8)]
    mod_ref = (sum(c**q for c in inner_x) * dxi) ** (1 / q)
    inner_xi = [(sum(a[m, k] ** q for k in range(8)) * dxi) ** (1 / q) for m in range(8)]
    wie_ref = (sum(c**p for c in inner_xi) * h) ** (1 / p)
    mixed_dev = max(
        abs(mixed_norm(s, NormSpec(p, q, INNER_X)) / mod_ref - 1.0),
        abs(mixed_norm(s, NormSpec(p, q, INNER_XI)) / wie_ref - 1.0),
    )

    # (d) and (e): lattice synthesis and symbol quantization
    gabor_dev = _gabor_direct_deviation(34)
    kn_dev = _quantization_double_sum_deviation(16, seed=35)

    total = time.perf_counter() - MODULE_START
    ok = (
        dft_dev <= 1e-12
        and stft_dev <= 1e-10
        and mixed_dev <= 1e-12
        and gabor_dev <= 1e-10
        and kn_dev <= 1e-12
        and total < 600.0
    )
    _report(
        "A12",
        ok,
        f"oracle deviations: transform {dft_dev:.1e}, windowed {stft_dev:.1e}, "
        f"mixed-norm {mixed_dev:.1e}, synthesis {gabor_dev:.1e}, quantization {kn_dev:.1e}; "
        f"acceptance wall time {total:.0f}s < 600s",
    )
