"""Operators acting on grid fields: multipliers, coordinate changes on the
frequency side, half-line projectors, reflections, Gabor superpositions, step
multipliers, and oscillatory-integral operators.

The frequency-side coordinate change is implemented literally as

    inverse_fourier . (compose with psi) . forward_fourier,

with the composition step evaluating the trigonometric interpolant of the
transform.  Points that a map carries outside the box evaluate to zero; a
warning fires only when such points would have carried non-negligible values,
so well-chosen experiments run warning-free.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bumps import smooth_plateau_profile
from .grid import (
    GridSpec,
    SampledField,
    band_limited_interpolate,
    forward_fourier,
    inverse_fourier,
)
from .spaces import (
    INNER_X,
    INNER_XI,
    conjugate_exponent,
    fourier_lebesgue_norm,
    modulation_norm,
    wiener_norm,
)
from .stft import Window

__all__ = [
    "ChangeOfVariables",
    "affine_map",
    "two_slope_map",
    "arctan_perturbed_map",
    "fourier_multiplier",
    "propagator",
    "change_of_variables_apply",
    "canonical_transform",
    "localized_ratio",
    "beurling_helson_growth",
    "hilbert_transform",
    "half_line_projector",
    "even_reflection_ratio",
    "homogeneous_reflection_apply",
    "homogeneous_reflection_decompose",
    "GaborSystem",
    "GaborCoefficients",
    "gabor_synthesize",
    "gabor_coeff_norm",
    "gabor_atom_norm_exponent",
    "StepMultiplier",
    "step_multiplier",
    "step_multiplier_apply",
    "sinusoidal_factors",
    "KNSymbol",
    "kohn_nirenberg_apply",
    "fio_compose",
    "perturbed_linear_transform",
    "perturbed_linear_test",
    "multiplication_multiplier_duality",
]


# ---------------------------------------------------------------------------
# coordinate changes

@dataclass(frozen=True)
class ChangeOfVariables:
    """A map of the underlying variable, ``func`` acting on point arrays (..., n)."""

    name: str
    func: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray] | None = None


def affine_map(a, b=0.0, name: str | None = None) -> ChangeOfVariables:
    """x -> A x + b with A a scalar or (n, n) matrix."""
    A = np.atleast_2d(np.asarray(a, dtype=float))
    if abs(np.linalg.det(A)) < 1e-14:
        raise ValueError("affine map must be invertible")
    Ainv = np.linalg.inv(A)
    bvec = np.asarray(b, dtype=float)

    def fwd(pts):
        return pts @ A.T + bvec

    def inv(pts):
        return (pts - bvec) @ Ainv.T

    return ChangeOfVariables(name or f"affine({a},{b})", fwd, inv)


def two_slope_map(a: float, b: float) -> ChangeOfVariables:
    """1D positively homogeneous map: a*x for x >= 0, b*x for x < 0."""
    if a <= 0 or b <= 0:
        raise ValueError("slopes must be positive for a bijection fixing orientation")

    def fwd(pts):
        return np.where(pts >= 0, a * pts, b * pts)

    def inv(pts):
        return np.where(pts >= 0, pts / a, pts / b)

    return ChangeOfVariables(f"two_slope({a},{b})", fwd, inv)


def arctan_perturbed_map(eps: float = 0.1, flat_radius: float = 40.0,
                         edge_width: float = 2.0) -> ChangeOfVariables:
    """1D map x + eps*arctan(x), tapered to the identity outside a fixed ball.

    The taper keeps the map equal to the identity far out, so every grid node
    of a large box maps into the box and coverage stays exact under grid
    refinement.  Monotone (hence bijective) for eps < 1.
    """
    if not 0 <= eps < 1:
        raise ValueError("eps must lie in [0, 1) to keep the map monotone")

    def fwd(pts):
        taper = smooth_plateau_profile(pts, flat_radius, edge_width)
        return pts + eps * np.arctan(pts) * taper

    return ChangeOfVariables(f"arctan_perturbed({eps})", fwd, None)


# ---------------------------------------------------------------------------
# Fourier multipliers

def fourier_multiplier(symbol, f: SampledField) -> SampledField:
    """Apply ``m(D)``: multiply the transform by ``symbol`` and invert.

    ``symbol`` is a callable on frequency points of shape (..., n) (or an
    array already sampled on the dual lattice).
    """
    fhat = forward_fourier(f)
    if callable(symbol):
        m = np.asarray(symbol(fhat.spec.nodes()), dtype=np.complex128)
    else:
        m = np.asarray(symbol, dtype=np.complex128)
    if m.shape != fhat.spec.shape:
        raise ValueError(f"multiplier shape {m.shape} does not match the dual lattice {fhat.spec.shape}")
    if not np.all(np.isfinite(m.view(np.float64))):
        raise ValueError("multiplier samples must be finite")
    return inverse_fourier(SampledField(fhat.spec, m * fhat.values))


def _radial_phase(xi: np.ndarray, alpha: float) -> np.ndarray:
    """|xi|^alpha with the origin conventions used by the propagators.

    0^alpha is 0 for alpha > 0 and 1 for alpha == 0; for alpha < 0 the origin
    phase is forced to 0 so the multiplier value there is 1.
    """
    r = np.sqrt(np.sum(np.asarray(xi, dtype=float) ** 2, axis=-1))
    origin = r == 0.0
    if alpha > 0:
        out = r**alpha
    elif alpha == 0:
        out = np.ones_like(r)
    else:
        with np.errstate(divide="ignore"):
            out = np.where(origin, 0.0, r**alpha)
    return out


def propagator(alpha: float, t: float, f: SampledField) -> SampledField:
    """Unitary multiplier ``exp(i t |xi|^alpha)`` applied to ``f``."""
    return fourier_multiplier(lambda xi: np.exp(1j * t * _radial_phase(xi, alpha)), f)


# ---------------------------------------------------------------------------
# composition with a map, on either side of the transform

def _evaluate_zero_extended(f: SampledField, pts: np.ndarray,
                            mass_tol: float = 1e-10) -> np.ndarray:
    """Interpolate ``f`` at ``pts``, zeroing points outside the closed box.

    Extension by zero is trustworthy exactly when the field has decayed by
    the box edge, so a coverage warning fires only if points land outside
    while the outermost sample shells still carry relative mass above
    ``mass_tol``.
    """
    L = f.spec.half_width
    inside = np.max(np.abs(pts), axis=-1) <= L + 1e-12
    vals = np.zeros(pts.shape[0], dtype=np.complex128)
    if inside.any():
        vals[inside] = band_limited_interpolate(f, pts[inside])
    if not inside.all():
        peak = float(np.abs(f.values).max())
        edge = f.boundary_peak(shells=2)
        if edge > mass_tol * max(1.0, peak):
            warnings.warn(
                f"map carries {int((~inside).sum())} points outside the box while "
                f"the field still has boundary mass {edge:.2e}; they were zeroed",
                stacklevel=3,
            )
    return vals


def change_of_variables_apply(psi: ChangeOfVariables, f: SampledField) -> SampledField:
    """Pullback ``f o psi`` sampled on the grid of ``f`` (zero-extension outside)."""
    spec = f.spec
    pts = np.asarray(psi.func(spec.nodes().reshape(-1, spec.dim)), dtype=float)
    if pts.shape != (spec.points**spec.dim, spec.dim):
        raise ValueError(f"map {psi.name} returned points of shape {pts.shape}")
    vals = _evaluate_zero_extended(f, pts)
    return SampledField(spec, vals.reshape(spec.shape))


def canonical_transform(psi: ChangeOfVariables, f: SampledField) -> SampledField:
    """The transform-side pullback ``F^{-1} [ (Ff) o psi ]``."""
    return inverse_fourier(change_of_variables_apply(psi, forward_fourier(f)))


def localized_ratio(
    op: Callable[[SampledField], SampledField],
    f: SampledField,
    chi_in: SampledField,
    chi_out: SampledField,
    w: Window,
    p: float,
    q: float,
) -> float:
    """Cutoff-localized operator norm ratio ``||chi_out . T(chi_in f)|| / ||chi_in f||``.

    Both norms are modulation-type with the same window and exponents; the
    denominator must not vanish.
    """
    g = chi_in * f
    den = modulation_norm(g, w, p, q)
    if den == 0.0:
        raise ValueError("localized ratio undefined: the cutoff annihilates the field")
    num = modulation_norm(chi_out * op(g), w, p, q)
    return num / den


def beurling_helson_growth(
    phase: Callable[[np.ndarray], np.ndarray],
    chi: SampledField,
    q: float,
    lambdas: Sequence[float],
) -> list[tuple[float, float]]:
    """Growth curve ``lambda -> || chi e^{i lambda phase} ||_{FL^q}``.

    Flat curves witness boundedness of the composition operator family; for
    non-affine phases and q != 2 the curve grows, which is the quantitative
    obstruction to boundedness.
    """
    nodes = chi.spec.nodes()
    ph = np.asarray(phase(nodes[..., 0] if chi.spec.dim == 1 else nodes), dtype=float)
    out = []
    for lam in lambdas:
        g = SampledField(chi.spec, chi.values * np.exp(1j * lam * ph))
        out.append((float(lam), fourier_lebesgue_norm(g, q)))
    return out


# ---------------------------------------------------------------------------
# Hilbert transform and half-line spectral projectors (1D)

def hilbert_transform(f: SampledField) -> SampledField:
    """``H f = F^{-1}[-i sgn(xi) Ff]`` with ``sgn(0) = 0``; one dimension only."""
    if f.spec.dim != 1:
        raise ValueError("the Hilbert transform is implemented in one dimension")
    return fourier_multiplier(lambda xi: -1j * np.sign(xi[..., 0]), f)


def half_line_projector(f: SampledField, side: str) -> SampledField:
    """Frequency projector onto a half line, built from the Hilbert transform.

    ``side='neg'`` gives ``-(i H f - f)/2`` and ``side='pos'`` gives
    ``(i H f + f)/2``; the two sum to the identity, and each is idempotent on
    mean-zero fields (the shared frequency origin carries weight 1/2).
    """
    hf = hilbert_transform(f).values
    if side == "neg":
        vals = -(1j * hf - f.values) / 2.0
    elif side == "pos":
        vals = (1j * hf + f.values) / 2.0
    else:
        raise ValueError(f"side must be 'neg' or 'pos', got {side!r}")
    return SampledField(f.spec, vals)


# ---------------------------------------------------------------------------
# reflections through |x|

def homogeneous_reflection_apply(S, T, f: SampledField) -> SampledField:
    """Sample ``x -> f(S x + T(|x_1|, ..., |x_n|))`` on the grid of ``f``."""
    n = f.spec.dim
    S = np.broadcast_to(np.atleast_2d(np.asarray(S, dtype=float)), (n, n))
    T = np.broadcast_to(np.atleast_2d(np.asarray(T, dtype=float)), (n, n))
    pts = f.spec.nodes().reshape(-1, n)
    target = pts @ S.T + np.abs(pts) @ T.T
    vals = _evaluate_zero_extended(f, target)
    return SampledField(f.spec, vals.reshape(f.spec.shape))


def homogeneous_reflection_decompose(S, T, f: SampledField) -> list[tuple[tuple, SampledField]]:
    """Split the reflection into 2^n signed-orthant pieces.

    Piece ``theta`` is ``f(A_theta x)`` cut off to the open orthant where
    ``(-1)^theta_i x_i > 0`` for every axis, with ``A_theta = S + T D_theta``;
    away from the coordinate hyperplanes the pieces sum to the direct
    application.  Raises when any ``A_theta`` is singular.
    """
    n = f.spec.dim
    S = np.broadcast_to(np.atleast_2d(np.asarray(S, dtype=float)), (n, n))
    T = np.broadcast_to(np.atleast_2d(np.asarray(T, dtype=float)), (n, n))
    pts = f.spec.nodes().reshape(-1, n)
    pieces = []
    for bits in np.ndindex(*(2,) * n):
        signs = np.array([(-1.0) ** b for b in bits])
        A = S + T * signs[None, :]
        if abs(np.linalg.det(A)) < 1e-12:
            raise ValueError(f"signed matrix for orthant {bits} is singular")
        mask = np.all(pts * signs[None, :] > 0.0, axis=1)
        vals = np.zeros(pts.shape[0], dtype=np.complex128)
        if mask.any():
            vals[mask] = _evaluate_zero_extended(f, pts[mask] @ A.T)
        pieces.append((bits, SampledField(f.spec, vals.reshape(f.spec.shape))))
    return pieces


def even_reflection_ratio(f: SampledField, w: Window, p: float, q: float) -> float:
    """Norm ratio ``||f(|.|)|| / ||f||`` in the modulation norm (equals 1 on even fields)."""
    n = f.spec.dim
    g = homogeneous_reflection_apply(np.zeros((n, n)), np.eye(n), f)
    den = modulation_norm(f, w, p, q)
    if den == 0.0:
        raise ValueError("norm ratio undefined for the zero field")
    return modulation_norm(g, w, p, q) / den


# ---------------------------------------------------------------------------
# Gabor superpositions

@dataclass(frozen=True)
class GaborSystem:
    """Finite lattice of time-frequency atoms ``e^{i beta k . x} chi(x - alpha j)``.

    ``alpha`` must be a multiple of the grid step and ``beta`` a multiple of
    the dual-grid step, so atom translations and modulations are exact lattice
    operations.
    """

    atom: SampledField
    alpha: float
    beta: float

    def __post_init__(self):
        spec = self.atom.spec
        if abs(self.alpha / spec.step - round(self.alpha / spec.step)) > 1e-9:
            raise ValueError("alpha must be a multiple of the grid step")
        if abs(self.beta / spec.dual_step - round(self.beta / spec.dual_step)) > 1e-9:
            raise ValueError("beta must be a multiple of the dual-grid step")

    @property
    def spec(self) -> GridSpec:
        return self.atom.spec

    def translation_roll(self, j: np.ndarray) -> tuple:
        return tuple(int(round(self.alpha * ji / self.spec.step)) for ji in j)


@dataclass(frozen=True)
class GaborCoefficients:
    """Coefficient array over the index box ``j_start + [0, shape_j) x k_start + [0, shape_k)``.

    ``values[j..., k...]`` has the translation indices leading and the
    modulation indices trailing, one axis per dimension.
    """

    j_start: tuple
    k_start: tuple
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        n = len(self.j_start)
        if len(self.k_start) != n or v.ndim != 2 * n:
            raise ValueError("coefficient array rank must be twice the lattice dimension")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "j_start", tuple(int(x) for x in self.j_start))
        object.__setattr__(self, "k_start", tuple(int(x) for x in self.k_start))

    @property
    def dim(self) -> int:
        return len(self.j_start)

    def j_indices(self) -> np.ndarray:
        n = self.dim
        axes = [self.j_start[i] + np.arange(self.values.shape[i]) for i in range(n)]
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)

    def k_indices(self) -> np.ndarray:
        n = self.dim
        axes = [self.k_start[i] + np.arange(self.values.shape[n + i]) for i in range(n)]
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)


def gabor_synthesize(system: GaborSystem, coeffs: GaborCoefficients) -> SampledField:
    """Superposition ``sum_{j,k} c_{jk} e^{i beta k . x} chi(x - alpha j)``."""
    spec = system.spec
    n = spec.dim
    if coeffs.dim != n:
        raise ValueError("coefficient dimension does not match the atom's grid")
    js = coeffs.j_indices()
    ks = coeffs.k_indices()
    c = coeffs.values.reshape(js.shape[0], ks.shape[0])
    nodes = spec.nodes().reshape(-1, n)
    # rolled atoms (J, N^n) and modulation phases (K, N^n)
    atoms = np.empty((js.shape[0], nodes.shape[0]), dtype=np.complex128)
    for i, j in enumerate(js):
        atoms[i] = np.roll(system.atom.values, system.translation_roll(j),
                           axis=tuple(range(n))).ravel()
    phases = np.exp(1j * system.beta * (nodes @ ks.T)).T
    vals = np.einsum("jk,kn,jn->n", c, phases, atoms, optimize=True)
    return SampledField(spec, vals.reshape(spec.shape))


def gabor_coeff_norm(coeffs: GaborCoefficients, p: float, q: float, ordering: int = INNER_X) -> float:
    """Sequence norm of the coefficients (counting measure, no cell factors).

    Ordering 1 nests ell^p over translations inside ell^q over modulations;
    ordering 2 nests ell^q over modulations inside ell^p over translations.
    """
    if not (p >= 1 and q >= 1):
        raise ValueError("exponents must satisfy p, q >= 1")
    n = coeffs.dim
    a = np.abs(coeffs.values)
    j_axes = tuple(range(n))
    k_axes = tuple(range(n, 2 * n))

    def seq_reduce(arr, expo, axes):
        if math.isinf(expo):
            return arr.max(axis=axes)
        return np.sum(arr**expo, axis=axes) ** (1.0 / expo)

    if ordering == INNER_X:
        inner = seq_reduce(a, p, j_axes)
        return float(seq_reduce(inner, q, tuple(range(inner.ndim))))
    if ordering == INNER_XI:
        inner = seq_reduce(a, q, k_axes)
        return float(seq_reduce(inner, p, tuple(range(inner.ndim))))
    raise ValueError(f"ordering must be {INNER_X} or {INNER_XI}")


def gabor_atom_norm_exponent(p: float, q: float) -> float:
    """The single exponent controlling the atom norm in the synthesis bound:
    min(p, p', q, q')."""
    return min(p, conjugate_exponent(p), q, conjugate_exponent(q))


# ---------------------------------------------------------------------------
# step multipliers on a cube tiling

@dataclass(frozen=True)
class StepMultiplier:
    """Multiplier constant (or smooth) on each cube of a side-``side`` tiling.

    kind ``step``: value ``coeffs[j]`` on the half-open cube ``[j*side, (j+1)*side)^n``
    (indices relative to ``j_start``).  kind ``smooth``: value ``factor(j, x)``
    there, with ``factor`` uniformly bounded together with its first two
    finite differences.
    """

    kind: str
    side: float
    j_start: tuple
    coeffs: np.ndarray | None = None
    factor: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if self.kind not in ("step", "smooth"):
            raise ValueError(f"kind must be 'step' or 'smooth', got {self.kind!r}")
        if self.side <= 0:
            raise ValueError("cube side must be positive")
        if self.kind == "step":
            if self.coeffs is None:
                raise ValueError("step multiplier needs a coefficient array")
            c = np.asarray(self.coeffs, dtype=np.complex128).copy()
            if not np.all(np.isfinite(c.view(np.float64))):
                raise ValueError("step coefficients must be finite (ell^inf)")
            c.setflags(write=False)
            object.__setattr__(self, "coeffs", c)
        elif self.factor is None:
            raise ValueError("smooth multiplier needs a factor callable")
        object.__setattr__(self, "j_start", tuple(int(x) for x in self.j_start))

    def sample(self, spec: GridSpec) -> np.ndarray:
        """Multiplier values at the grid nodes."""
        n = spec.dim
        pts = spec.nodes().reshape(-1, n)
        cell = np.floor(pts / self.side).astype(int)
        rel = cell - np.asarray(self.j_start, dtype=int)[None, :]
        if self.kind == "step":
            shape = self.coeffs.shape
            if np.any(rel < 0) or any(np.any(rel[:, i] >= shape[i]) for i in range(n)):
                raise ValueError("grid extends beyond the coefficient tiling")
            out = self.coeffs[tuple(rel[:, i] for i in range(n))]
        else:
            out = np.asarray(self.factor(cell, pts), dtype=np.complex128)
        return out.reshape(spec.shape)


def step_multiplier(side: float, j_start, coeffs) -> StepMultiplier:
    return StepMultiplier("step", side, tuple(j_start), np.asarray(coeffs))


def sinusoidal_factors(amplitude: float = 0.3, frequency: float = 1.0) -> Callable:
    """Smooth per-cube factors ``1 + amplitude sin(frequency sum(x) + sum(j))``.

    Bounded with uniformly bounded derivatives across cubes, as required of
    the smooth multiplier class.
    """

    def factor(cell: np.ndarray, pts: np.ndarray) -> np.ndarray:
        return 1.0 + amplitude * np.sin(frequency * pts.sum(axis=-1) + cell.sum(axis=-1))

    return factor


def step_multiplier_apply(mult: StepMultiplier, f: SampledField) -> SampledField:
    """Pointwise multiplication by the sampled cube multiplier."""
    return SampledField(f.spec, mult.sample(f.spec) * f.values)


# ---------------------------------------------------------------------------
# quantization-style oscillatory operators

def _check_tame_samples(a: np.ndarray, steps: Sequence[float], bound: float, what: str) -> None:
    """Boundedness proxy: |a| and its first/second centered differences
    (scaled by the lattice steps) must stay below ``bound``."""
    if not np.all(np.isfinite(a.view(np.float64) if a.dtype == np.complex128 else a)):
        raise ValueError(f"{what} has non-finite samples")
    worst = float(np.abs(a).max())
    for ax, step in enumerate(steps):
        d1 = (np.roll(a, -1, axis=ax) - np.roll(a, 1, axis=ax))[
            tuple(slice(1, -1) if i == ax else slice(None) for i in range(a.ndim))
        ] / (2.0 * step)
        d2 = (np.roll(a, -1, axis=ax) - 2.0 * a + np.roll(a, 1, axis=ax))[
            tuple(slice(1, -1) if i == ax else slice(None) for i in range(a.ndim))
        ] / step**2
        worst = max(worst, float(np.abs(d1).max()), float(np.abs(d2).max()))
    if worst > bound:
        raise ValueError(
            f"{what} fails the tameness check: sampled magnitude/difference {worst:.3g} "
            f"exceeds the declared bound {bound:.3g}"
        )


@dataclass(frozen=True)
class KNSymbol:
    """Symbol ``a(x, xi)`` for the quantization ``f -> (2pi)^{-n} sum_k e^{i x.xi_k} a(x, xi_k) Ff(xi_k) dxi``.

    ``func(x_pts, xi_pts)`` must broadcast; ``derivative_bound`` declares the
    constant against which sampled magnitudes and centered differences up to
    order two are checked.
    """

    name: str
    func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    derivative_bound: float = 50.0


def kohn_nirenberg_apply(symbol: KNSymbol, f: SampledField) -> SampledField:
    """Apply the quantized operator by direct frequency summation."""
    spec = f.spec
    n = spec.dim
    fhat = forward_fourier(f)
    x_nodes = spec.nodes()
    xi_nodes = fhat.spec.nodes()
    a = np.asarray(
        symbol.func(
            x_nodes.reshape(spec.shape + (1,) * n + (n,)),
            xi_nodes.reshape((1,) * n + spec.shape + (n,)),
        ),
        dtype=np.complex128,
    )
    full_shape = spec.shape + spec.shape
    a = np.broadcast_to(a, full_shape)
    steps = [spec.step] * n + [spec.dual_step] * n
    _check_tame_samples(np.ascontiguousarray(a), steps, symbol.derivative_bound, f"symbol {symbol.name}")
    # quadrature factor (dxi / 2pi)^n with dxi the dual-grid spacing
    factor = (spec.dual_step / (2.0 * math.pi)) ** n
    if n == 1:
        phases = np.exp(1j * np.outer(spec.axis(), fhat.spec.axis()))
        vals = factor * np.sum(phases * a * fhat.values[None, :], axis=1)
        return SampledField(spec, vals)
    flat_x = x_nodes.reshape(-1, n)
    flat_xi = xi_nodes.reshape(-1, n)
    fh = fhat.values.ravel()
    a_flat = a.reshape(flat_x.shape[0], flat_xi.shape[0])
    vals = np.empty(flat_x.shape[0], dtype=np.complex128)
    for i in range(flat_x.shape[0]):
        phase = np.exp(1j * (flat_xi @ flat_x[i]))
        vals[i] = factor * np.sum(phase * a_flat[i] * fh)
    return SampledField(spec, vals.reshape(spec.shape))


def fio_compose(symbol: KNSymbol, psi: ChangeOfVariables, f: SampledField) -> SampledField:
    """Oscillatory-integral operator factored as quantization after the
    frequency-side coordinate change."""
    return kohn_nirenberg_apply(symbol, canonical_transform(psi, f))


# ---------------------------------------------------------------------------
# perturbed linear coordinate changes via the substitution formula

def perturbed_linear_transform(
    a_matrix,
    delta: Callable[[np.ndarray], np.ndarray],
    f: SampledField,
    ddelta: Callable[[np.ndarray], np.ndarray] | None = None,
    max_perturbation: float = 0.1,
) -> SampledField:
    """Frequency-side coordinate change whose *inverse* map is ``A xi + delta(xi)``.

    No inversion is performed: substituting ``eta = psi(xi)`` turns
    ``F^{-1}[(Ff) o psi]`` into a weighted oscillatory sum over the dual grid,

        out(x) = (2pi)^{-n} sum_k e^{i x . psiinv(xi_k)} |det Dpsiinv(xi_k)| Ff(xi_k) dxi,

    with ``psiinv = A . + delta``.  The sampled Jacobian of ``delta`` must stay
    below ``max_perturbation`` in operator norm (Frobenius bound), keeping the
    full map bi-Lipschitz.
    """
    spec = f.spec
    n = spec.dim
    A = np.broadcast_to(np.atleast_2d(np.asarray(a_matrix, dtype=float)), (n, n))
    if abs(np.linalg.det(A)) < 1e-12:
        raise ValueError("linear part must be invertible")
    fhat = forward_fourier(f)
    xi = fhat.spec.nodes().reshape(-1, n)
    d = np.asarray(delta(xi), dtype=float).reshape(-1, n)
    if ddelta is not None:
        jac = np.asarray(ddelta(xi), dtype=float).reshape(-1, n, n)
    else:
        jac = _difference_jacobian(delta, xi, fhat.spec.step)
    frob = np.sqrt(np.sum(jac**2, axis=(1, 2)))
    worst = float(frob.max())
    if worst >= max_perturbation:
        raise ValueError(
            f"perturbation Jacobian reaches {worst:.3g} >= allowed {max_perturbation:.3g}"
        )
    psiinv = xi @ A.T + d
    dets = np.abs(np.linalg.det(A[None, :, :] + jac))
    x_nodes = spec.nodes().reshape(-1, n)
    factor = (spec.dual_step / (2.0 * math.pi)) ** n
    weights = dets * fhat.values.ravel()
    vals = factor * (np.exp(1j * (x_nodes @ psiinv.T)) @ weights)
    return SampledField(spec, vals.reshape(spec.shape))


def _difference_jacobian(delta: Callable, pts: np.ndarray, step: float) -> np.ndarray:
    n = pts.shape[1]
    jac = np.empty((pts.shape[0], n, n))
    for ax in range(n):
        e = np.zeros(n)
        e[ax] = step
        jac[:, :, ax] = (np.asarray(delta(pts + e)) - np.asarray(delta(pts - e))) / (2.0 * step)
    return jac


def perturbed_linear_test(
    a_matrix,
    delta,
    f: SampledField,
    chi_in: SampledField,
    chi_out: SampledField,
    w: Window,
    p: float,
    q: float,
    ddelta=None,
) -> float:
    """Localized norm ratio of the perturbed-linear coordinate change."""
    op = lambda g: perturbed_linear_transform(a_matrix, delta, g, ddelta=ddelta)
    return localized_ratio(op, f, chi_in, chi_out, w, p, q)


# ---------------------------------------------------------------------------
# multiplication vs multiplier duality

def multiplication_multiplier_duality(
    f: SampledField,
    profile: Callable[[np.ndarray], np.ndarray],
    w: Window,
    p: float,
    q: float,
) -> tuple[float, float]:
    """The two sides of the multiplication/multiplier norm correspondence.

    Side one measures multiplication by ``profile`` in the modulation norm;
    side two measures the same symbol acting as a Fourier multiplier on the
    inverse transform, in the amalgam norm with swapped exponents and the
    transform-matched window.  Their ratio is the fixed constant ``(2pi)^n``
    for every field.
    """
    spec = f.spec
    m = np.asarray(profile(spec.nodes()), dtype=np.complex128)
    side1 = modulation_norm(SampledField(spec, m * f.values), w, p, q)
    g = inverse_fourier(f)
    mg = fourier_multiplier(lambda xi: profile(xi), g)
    w2 = Window(inverse_fourier(w.field), kind=f"inv_fourier({w.kind})")
    side2 = wiener_norm(mg, w2, q, p)
    return side1, side2
