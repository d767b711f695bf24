"""Moderate weights on phase space and the weighted norm inequalities.

A weight here is a strictly positive function of ``(x, xi)`` in separable
(product) form; moderateness against a submultiplicative comparison weight is
sampled on lattice points rather than proven.  The module also carries the
exponent arithmetic validators for the weighted embedding chains and for the
product/convolution bounds, plus the experiment-level ratio computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .grid import GridSpec, SampledField, forward_fourier, inverse_fourier, lp_norm

__all__ = [
    "Weight",
    "constant_weight",
    "bracket_power_weight",
    "separable_weight",
    "custom_weight",
    "fourier_side_weight",
    "check_moderate",
    "validate_embedding_exponents",
    "validate_product_exponents",
    "validate_convolution_exponents",
    "weighted_lp_norm",
    "weighted_embedding_chain_test",
    "product_bound_test",
    "convolution_bound_test",
]


def _ones(points: np.ndarray) -> np.ndarray:
    return np.ones(np.asarray(points).shape[:-1])


def _bracket(points: np.ndarray, s: float) -> np.ndarray:
    r = np.sqrt(np.sum(np.asarray(points, dtype=float) ** 2, axis=-1))
    return (1.0 + r) ** s


@dataclass(frozen=True)
class Weight:
    """Separable phase-space weight ``omega(x, xi) = x_factor(x) xi_factor(xi)``.

    Both factors are callables on point arrays of shape (..., n); ``degree``
    declares the polynomial growth used for the default comparison weight.
    """

    kind: str
    x_factor: Callable[[np.ndarray], np.ndarray]
    xi_factor: Callable[[np.ndarray], np.ndarray]
    degree: float = 0.0

    def sample_x(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(self.x_factor(points), dtype=float)

    def sample_xi(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(self.xi_factor(points), dtype=float)

    def sample_joint(self, x_points: np.ndarray, xi_points: np.ndarray) -> np.ndarray:
        return self.sample_x(x_points) * self.sample_xi(xi_points)


def constant_weight() -> Weight:
    return Weight("constant", _ones, _ones, 0.0)


def bracket_power_weight(s: float, part: str = "xi") -> Weight:
    """``(1 + |.|)^s`` in the chosen variable (``'x'``, ``'xi'``, or ``'both'``)."""
    if part == "x":
        return Weight(f"bracket_x({s})", lambda p: _bracket(p, s), _ones, abs(s))
    if part == "xi":
        return Weight(f"bracket_xi({s})", _ones, lambda p: _bracket(p, s), abs(s))
    if part == "both":
        return Weight(
            f"bracket_both({s})", lambda p: _bracket(p, s), lambda p: _bracket(p, s), abs(s)
        )
    raise ValueError(f"part must be 'x', 'xi' or 'both', got {part!r}")


def separable_weight(s_x: float, s_xi: float) -> Weight:
    return Weight(
        f"separable({s_x},{s_xi})",
        lambda p: _bracket(p, s_x),
        lambda p: _bracket(p, s_xi),
        abs(s_x) + abs(s_xi),
    )


def custom_weight(kind: str, x_factor=None, xi_factor=None, degree: float = 0.0) -> Weight:
    return Weight(kind, x_factor or _ones, xi_factor or _ones, degree)


def fourier_side_weight(w: Weight) -> Weight:
    """The weight matching ``w`` across the transform: ``w0(xi, -x) = w(x, xi)``.

    For separable weights this swaps the factors and reflects the new x part;
    it is the weight under which the amalgam norm of ``f`` and the modulation
    norm of ``Ff`` (with swapped exponents) are exactly proportional.
    """
    return Weight(
        f"fourier_side({w.kind})",
        lambda p: np.asarray(w.xi_factor(p), dtype=float),
        lambda p: np.asarray(w.x_factor(-np.asarray(p, dtype=float)), dtype=float),
        w.degree,
    )


def check_moderate(
    omega: Weight,
    v: Weight | None,
    grid: GridSpec,
    sample_count: int = 400,
    seed: int = 0,
) -> float:
    """Sampled moderateness constant: worst ``omega(z+y) / (omega(z) v(y))``.

    Pairs ``z, y`` are drawn from the product lattice of ``grid`` with its
    dual.  When ``v`` is omitted, the polynomial comparison weight
    ``(1+|.|)^degree`` in both variables is used.  Values at or below 1 mean
    the sampled points never violate moderateness with constant 1; the return
    value is the smallest constant consistent with the sample.
    """
    if v is None:
        v = separable_weight(omega.degree, omega.degree)
    rng = np.random.default_rng(seed)
    n = grid.dim
    xs = grid.axis()
    xis = grid.dual_axis()
    zx = xs[rng.integers(0, xs.size, size=(sample_count, n))]
    zxi = xis[rng.integers(0, xis.size, size=(sample_count, n))]
    yx = xs[rng.integers(0, xs.size, size=(sample_count, n))]
    yxi = xis[rng.integers(0, xis.size, size=(sample_count, n))]
    num = omega.sample_joint(zx + yx, zxi + yxi)
    den = omega.sample_joint(zx, zxi) * v.sample_joint(yx, yxi)
    if np.any(den <= 0.0) or np.any(~np.isfinite(den)):
        raise ValueError("comparison weight must be positive and finite on the sample")
    return float(np.max(num / den))


# ---------------------------------------------------------------------------
# exponent arithmetic

def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


def validate_embedding_exponents(p: float, q: float, p1: float, p2: float,
                                 q1: float, q2: float) -> None:
    """Constraints for the weighted chain: p1 <= min(q,q'), p2 >= max(q,q'),
    q1 <= min(p,p'), q2 >= max(p,p')."""
    from .spaces import conjugate_exponent

    pc, qc = conjugate_exponent(p), conjugate_exponent(q)
    checks = [
        (p1 <= min(q, qc) + 1e-12, f"p1 = {p1} must be <= min(q, q') = {min(q, qc)}"),
        (p2 >= max(q, qc) - 1e-12, f"p2 = {p2} must be >= max(q, q') = {max(q, qc)}"),
        (q1 <= min(p, pc) + 1e-12, f"q1 = {q1} must be <= min(p, p') = {min(p, pc)}"),
        (q2 >= max(p, pc) - 1e-12, f"q2 = {q2} must be >= max(p, p') = {max(p, pc)}"),
    ]
    for ok, msg in checks:
        if not ok:
            raise ValueError(msg)


def validate_product_exponents(ps: Sequence[float], qs: Sequence[float],
                               p0: float, q0: float, tol: float = 1e-12) -> None:
    """Multiplication exponent law: sum 1/p_j = 1/p0 and sum 1/q_j = (N-1) + 1/q0."""
    N = len(ps)
    if len(qs) != N or N < 1:
        raise ValueError("need matching nonempty exponent lists")
    if abs(sum(_inv(p) for p in ps) - _inv(p0)) > tol:
        raise ValueError(f"product p-law violated: sum 1/p_j = {sum(_inv(p) for p in ps)} != 1/p0 = {_inv(p0)}")
    if abs(sum(_inv(q) for q in qs) - (N - 1 + _inv(q0))) > tol:
        raise ValueError(
            f"product q-law violated: sum 1/q_j = {sum(_inv(q) for q in qs)} != N-1+1/q0 = {N - 1 + _inv(q0)}"
        )


def validate_convolution_exponents(ps: Sequence[float], qs: Sequence[float],
                                   p0: float, q0: float, tol: float = 1e-12) -> None:
    """Convolution exponent law: sum 1/p_j = (N-1) + 1/p0 and sum 1/q_j = 1/q0."""
    N = len(ps)
    if len(qs) != N or N < 1:
        raise ValueError("need matching nonempty exponent lists")
    if abs(sum(_inv(p) for p in ps) - (N - 1 + _inv(p0))) > tol:
        raise ValueError(
            f"convolution p-law violated: sum 1/p_j = {sum(_inv(p) for p in ps)} != N-1+1/p0 = {N - 1 + _inv(p0)}"
        )
    if abs(sum(_inv(q) for q in qs) - _inv(q0)) > tol:
        raise ValueError(f"convolution q-law violated: sum 1/q_j = {sum(_inv(q) for q in qs)} != 1/q0 = {_inv(q0)}")


# ---------------------------------------------------------------------------
# weighted norms and the chain/bound experiments

def weighted_lp_norm(f: SampledField, p: float, weight: Weight) -> float:
    """Quadrature norm of ``f . omega_0`` with the weight's x factor."""
    factors = weight.sample_x(f.spec.nodes())
    if np.any(factors <= 0):
        raise ValueError("weights must be strictly positive")
    return lp_norm(SampledField(f.spec, f.values * factors), p)


def weighted_embedding_chain_test(
    f: SampledField,
    window,
    p: float,
    q: float,
    weight: Weight,
    q1: float | None = None,
    q2: float | None = None,
    p1: float | None = None,
    p2: float | None = None,
) -> dict:
    """Ratio table for the four embedding chains at one field.

    The x-weighted lines compare modulation/amalgam norms against the weighted
    L^p norm; the xi-weighted lines against the weighted transform-side L^q
    norm.  Chain exponents default to the extreme admissible values
    ``q1 = min(p,p'), q2 = max(p,p'), p1 = min(q,q'), p2 = max(q,q')``.
    Returned ratios are of the form ``embedded-norm / embedding-norm``, so the
    inequalities predict each is bounded by a constant over a corpus.
    """
    from .spaces import conjugate_exponent, modulation_norm, wiener_norm, fourier_lebesgue_norm

    pc, qc = conjugate_exponent(p), conjugate_exponent(q)
    q1 = min(p, pc) if q1 is None else q1
    q2 = max(p, pc) if q2 is None else q2
    p1 = min(q, qc) if p1 is None else p1
    p2 = max(q, qc) if p2 is None else p2
    validate_embedding_exponents(p, q, p1, p2, q1, q2)

    x_weight = Weight(f"xonly({weight.kind})", weight.x_factor, _ones, weight.degree)
    xi_weight = Weight(f"xionly({weight.kind})", _ones, weight.xi_factor, weight.degree)

    lp_w = weighted_lp_norm(f, p, x_weight)
    flq_w = fourier_lebesgue_norm(f, q, xi_weight)
    out = {
        "lp_over_m_pq1": lp_w / modulation_norm(f, window, p, q1, x_weight),
        "m_pq2_over_lp": modulation_norm(f, window, p, q2, x_weight) / lp_w,
        "flq_over_m_p1q": flq_w / modulation_norm(f, window, p1, q, xi_weight),
        "m_p2q_over_flq": modulation_norm(f, window, p2, q, xi_weight) / flq_w,
        "lp_over_w_pq1": lp_w / wiener_norm(f, window, p, q1, x_weight),
        "w_pq2_over_lp": wiener_norm(f, window, p, q2, x_weight) / lp_w,
        "flq_over_w_p1q": flq_w / wiener_norm(f, window, p1, q, xi_weight),
        "w_p2q_over_flq": wiener_norm(f, window, p2, q, xi_weight) / flq_w,
    }
    for key, val in out.items():
        if not math.isfinite(val):
            raise ValueError(f"chain ratio {key} is not finite")
    return out


def _sampled_weight_compat_product(w0: Weight, w1: Weight, w2: Weight,
                                   grid: GridSpec, seed: int = 1) -> float:
    """Worst sampled ``w0(x, xi1+xi2) / (w1(x,xi1) w2(x,xi2))``."""
    rng = np.random.default_rng(seed)
    n = grid.dim
    xs, xis = grid.axis(), grid.dual_axis()
    x = xs[rng.integers(0, xs.size, size=(400, n))]
    a = xis[rng.integers(0, xis.size, size=(400, n))]
    b = xis[rng.integers(0, xis.size, size=(400, n))]
    num = w0.sample_x(x) * w0.sample_xi(a + b)
    den = w1.sample_x(x) * w1.sample_xi(a) * w2.sample_x(x) * w2.sample_xi(b)
    return float(np.max(num / den))


def _sampled_weight_compat_convolution(w0: Weight, w1: Weight, w2: Weight,
                                       grid: GridSpec, seed: int = 1) -> float:
    """Worst sampled ``w0(x1+x2, xi) / (w1(x1,xi) w2(x2,xi))``."""
    rng = np.random.default_rng(seed)
    n = grid.dim
    xs, xis = grid.axis(), grid.dual_axis()
    a = xs[rng.integers(0, xs.size, size=(400, n))]
    b = xs[rng.integers(0, xs.size, size=(400, n))]
    xi = xis[rng.integers(0, xis.size, size=(400, n))]
    num = w0.sample_x(a + b) * w0.sample_xi(xi)
    den = w1.sample_x(a) * w1.sample_xi(xi) * w2.sample_x(b) * w2.sample_xi(xi)
    return float(np.max(num / den))


def product_bound_test(
    f1: SampledField,
    f2: SampledField,
    window,
    exponents: dict,
    weights: tuple[Weight, Weight, Weight] | None = None,
    use_amalgam: bool = False,
) -> dict:
    """Two-factor multiplication bound: product norm over the factor norms.

    ``exponents`` carries p0, q0, p1, q1, p2, q2 satisfying the product law;
    weights default to unweighted.  Returns the ratio together with the
    sampled weight-compatibility constant.
    """
    from .spaces import modulation_norm, wiener_norm

    ps = (exponents["p1"], exponents["p2"])
    qs = (exponents["q1"], exponents["q2"])
    validate_product_exponents(ps, qs, exponents["p0"], exponents["q0"])
    w0, w1, w2 = weights or (constant_weight(),) * 3
    compat = _sampled_weight_compat_product(w0, w1, w2, f1.spec)
    norm = wiener_norm if use_amalgam else modulation_norm
    num = norm(f1 * f2, window, exponents["p0"], exponents["q0"], w0)
    d1 = norm(f1, window, ps[0], qs[0], w1)
    d2 = norm(f2, window, ps[1], qs[1], w2)
    if d1 == 0.0 or d2 == 0.0:
        raise ValueError("factor norm vanishes; ratio undefined")
    return {"ratio": num / (d1 * d2), "weight_compat": compat}


def convolution_bound_test(
    f1: SampledField,
    f2: SampledField,
    window,
    exponents: dict,
    weights: tuple[Weight, Weight, Weight] | None = None,
    use_amalgam: bool = False,
) -> dict:
    """Two-factor convolution bound, with the convolution done by transform
    multiplication (exact for the periodic quadrature)."""
    from .spaces import modulation_norm, wiener_norm

    ps = (exponents["p1"], exponents["p2"])
    qs = (exponents["q1"], exponents["q2"])
    validate_convolution_exponents(ps, qs, exponents["p0"], exponents["q0"])
    w0, w1, w2 = weights or (constant_weight(),) * 3
    compat = _sampled_weight_compat_convolution(w0, w1, w2, f1.spec)
    conv = inverse_fourier(
        SampledField(
            forward_fourier(f1).spec,
            forward_fourier(f1).values * forward_fourier(f2).values,
        )
    )
    norm = wiener_norm if use_amalgam else modulation_norm
    num = norm(conv, window, exponents["p0"], exponents["q0"], w0)
    d1 = norm(f1, window, ps[0], qs[0], w1)
    d2 = norm(f2, window, ps[1], qs[1], w2)
    if d1 == 0.0 or d2 == 0.0:
        raise ValueError("factor norm vanishes; ratio undefined")
    return {"ratio": num / (d1 * d2), "weight_compat": compat}
