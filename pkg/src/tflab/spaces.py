"""Mixed-norm function space norms built on the sampled STFT.

Two iterated-norm orderings appear throughout:

* ordering 1: inner L^p in the translation variable x, outer L^q in the
  frequency xi — the modulation-type norm;
* ordering 2: inner L^q in xi, outer L^p in x — the amalgam-type norm.

Integrals are quadrature sums with the lattice cell measures (``h^n`` in x,
``(pi/L)^n`` in xi); essential suprema become maxima over the samples.  A
uniform unit-lattice partition of the frequency axis (tensor-product triangle
bumps) gives the discretized decomposition norms that are equivalent to the
STFT versions on compactly supported fields.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grid import GridSpec, SampledField, SupportBox, forward_fourier, inverse_fourier, lp_norm
from .stft import StftArray, Window, stft

__all__ = [
    "NormSpec",
    "UniformPartition",
    "mixed_norm",
    "modulation_norm",
    "wiener_norm",
    "fourier_lebesgue_norm",
    "build_partition",
    "partition_pieces",
    "partition_norm_modulation",
    "partition_norm_wiener",
    "support_scaling_table",
    "fit_loglog_slope",
    "conjugate_exponent",
]

INNER_X = 1  # inner x, outer xi (modulation ordering)
INNER_XI = 2  # inner xi, outer x (amalgam ordering)


def _check_exponent(p: float, name: str) -> float:
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise ValueError(f"{name} must satisfy 1 <= {name} <= inf, got {p}")
    return p


def conjugate_exponent(p: float) -> float:
    """Hoelder conjugate with the usual conventions 1' = inf, inf' = 1."""
    p = _check_exponent(p, "p")
    if math.isinf(p):
        return 1.0
    if p == 1.0:
        return math.inf
    return p / (p - 1.0)


@dataclass(frozen=True)
class NormSpec:
    """Exponents, ordering, and optional weight for a mixed lattice norm."""

    p: float
    q: float
    ordering: int = INNER_X
    weight: object | None = None  # duck-typed: exposes sample_x / sample_xi

    def __post_init__(self):
        _check_exponent(self.p, "p")
        _check_exponent(self.q, "q")
        if self.ordering not in (INNER_X, INNER_XI):
            raise ValueError(f"ordering must be {INNER_X} or {INNER_XI}, got {self.ordering}")


def _reduce(a: np.ndarray, expo: float, cell: float, axes: tuple) -> np.ndarray:
    """One quadrature L^expo reduction over the given axes."""
    if math.isinf(expo):
        return a.max(axis=axes)
    return (np.sum(a**expo, axis=axes) * cell) ** (1.0 / expo)


def _weight_array(s: StftArray, weight) -> np.ndarray | None:
    if weight is None:
        return None
    g = s.grid
    wx = np.asarray(weight.sample_x(g.nodes()), dtype=float)
    wxi = np.asarray(weight.sample_xi(g.dual().nodes()), dtype=float)
    if np.any(wx <= 0) or np.any(wxi <= 0):
        raise ValueError("weights must be strictly positive")
    return np.multiply.outer(wx, wxi)


def mixed_norm(s: StftArray, spec: NormSpec) -> float:
    """Iterated quadrature norm of an STFT array under a :class:`NormSpec`."""
    n = s.grid.dim
    a = np.abs(s.values)
    w = _weight_array(s, spec.weight)
    if w is not None:
        a = a * w
    x_axes = tuple(range(n))
    xi_axes = tuple(range(n, 2 * n))
    if spec.ordering == INNER_X:
        inner = _reduce(a, spec.p, s.x_cell, x_axes)  # indexed by xi
        return float(_reduce(inner, spec.q, s.xi_cell, tuple(range(inner.ndim))))
    inner = _reduce(a, spec.q, s.xi_cell, xi_axes)  # indexed by x
    return float(_reduce(inner, spec.p, s.x_cell, tuple(range(inner.ndim))))


def modulation_norm(f: SampledField, w: Window, p: float, q: float, weight=None) -> float:
    """STFT norm with inner L^p in x and outer L^q in xi."""
    return mixed_norm(stft(f, w), NormSpec(p, q, INNER_X, weight))


def wiener_norm(f: SampledField, w: Window, p: float, q: float, weight=None) -> float:
    """STFT norm with inner L^q in xi and outer L^p in x (amalgam ordering)."""
    return mixed_norm(stft(f, w), NormSpec(p, q, INNER_XI, weight))


def fourier_lebesgue_norm(f: SampledField, q: float, weight=None) -> float:
    """Quadrature L^q norm of the Fourier transform, optionally xi-weighted."""
    _check_exponent(q, "q")
    fhat = forward_fourier(f)
    if weight is None:
        return lp_norm(fhat, q)
    factors = np.asarray(weight.sample_xi(fhat.spec.nodes()), dtype=float)
    if np.any(factors <= 0):
        raise ValueError("weights must be strictly positive")
    return lp_norm(SampledField(fhat.spec, fhat.values * factors), q)


# ---------------------------------------------------------------------------
# uniform frequency partition

def _triangle(u: np.ndarray) -> np.ndarray:
    return np.maximum(1.0 - np.abs(u), 0.0)


def _triangle_tensor(points: np.ndarray) -> np.ndarray:
    """Tensor-product triangle bump at points of shape (..., n); support [-1,1]^n."""
    return np.prod(_triangle(points), axis=-1)


@dataclass(frozen=True)
class UniformPartition:
    """Integer translates of the tensor triangle bump covering a frequency box.

    The translates sum to one at every point of the covered box, so the
    sampled pieces reassemble the field exactly up to rounding.
    """

    translates: np.ndarray  # (K, n) integer vectors

    def __post_init__(self):
        t = np.asarray(self.translates, dtype=int)
        if t.ndim != 2 or t.shape[0] == 0:
            raise ValueError("translates must be a nonempty (K, n) integer array")
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "translates", t)

    def profile(self, points: np.ndarray) -> np.ndarray:
        return _triangle_tensor(points)

    def sum_at(self, points: np.ndarray) -> np.ndarray:
        """Partition-of-unity sum over the translates at the given points."""
        pts = np.asarray(points, dtype=float)
        out = np.zeros(pts.shape[:-1])
        for k in self.translates:
            out += _triangle_tensor(pts - k)
        return out


def build_partition(dual_spec: GridSpec) -> UniformPartition:
    """Translate set covering the whole frequency box of ``dual_spec``."""
    xi_max = dual_spec.half_width
    lo, hi = math.floor(-xi_max), math.ceil(xi_max)
    axis = np.arange(lo, hi + 1)
    grids = np.meshgrid(*([axis] * dual_spec.dim), indexing="ij")
    ks = np.stack([g.ravel() for g in grids], axis=-1)
    return UniformPartition(ks)


def partition_pieces(
    f: SampledField, partition: UniformPartition | None = None
) -> tuple[UniformPartition, list[SampledField]]:
    """Frequency-localized pieces ``u_k`` with ``sum_k u_k = f``.

    Each piece is the inverse transform of the triangle factor ``Phi(. - k)``
    applied to ``Ff``; a warning is raised when the transform carries
    non-negligible mass in the outermost unit band of the frequency box,
    since mass there sits against the lattice's periodic edge.
    """
    fhat = forward_fourier(f)
    dual = fhat.spec
    if partition is None:
        partition = build_partition(dual)
    nodes = dual.nodes()
    peak = float(np.abs(fhat.values).max())
    if peak > 0.0:
        edge = np.max(np.abs(nodes), axis=-1) > dual.half_width - 1.0
        if edge.any() and float(np.abs(fhat.values[edge]).max()) > 1e-8 * peak:
            warnings.warn(
                "frequency content near the edge of the covered range; "
                "partition pieces may alias",
                stacklevel=2,
            )
    pieces = []
    for k in partition.translates:
        factor = _triangle_tensor(nodes - k)
        if not factor.any():
            pieces.append(None)
            continue
        pieces.append(inverse_fourier(SampledField(dual, fhat.values * factor)))
    zero = SampledField(f.spec, np.zeros(f.spec.shape))
    return partition, [p if p is not None else zero for p in pieces]


def partition_norm_modulation(f: SampledField, p: float, q: float,
                              partition: UniformPartition | None = None) -> float:
    """Decomposition norm: ell^q over translates of the L^p piece norms."""
    _check_exponent(p, "p")
    _check_exponent(q, "q")
    _, pieces = partition_pieces(f, partition)
    piece_norms = np.array([lp_norm(u, p) for u in pieces])
    if math.isinf(q):
        return float(piece_norms.max())
    return float(np.sum(piece_norms**q) ** (1.0 / q))


def partition_norm_wiener(f: SampledField, p: float, q: float,
                          partition: UniformPartition | None = None) -> float:
    """Decomposition norm: L^p of the pointwise ell^q stack of the pieces."""
    _check_exponent(p, "p")
    _check_exponent(q, "q")
    _, pieces = partition_pieces(f, partition)
    stack = np.abs(np.stack([u.values for u in pieces]))
    if math.isinf(q):
        pointwise = stack.max(axis=0)
    else:
        pointwise = np.sum(stack**q, axis=0) ** (1.0 / q)
    return lp_norm(SampledField(f.spec, pointwise), p)


# ---------------------------------------------------------------------------
# support-growth ratio tables

def support_scaling_table(
    members: Sequence[tuple[SampledField, SupportBox]],
    window: Window,
    p: float,
    q: float,
) -> list[dict]:
    """Norm ratios against fattened support measure for compactly supported fields.

    For each (field, support) pair the STFT is computed once and reduced under
    both orderings; rows carry the fattened support volume ``|Omega~|`` (margin
    1, matching a window of support radius 1) and both ratio directions.
    """
    rows = []
    for idx, (f, box) in enumerate(members):
        if not box.contains_support(f):
            raise ValueError(f"member {idx} is not supported in its declared box")
        s = stft(f, window)
        m = mixed_norm(s, NormSpec(p, q, INNER_X))
        w = mixed_norm(s, NormSpec(p, q, INNER_XI))
        if m == 0.0 or w == 0.0:
            raise ValueError(f"member {idx} has vanishing norm")
        rows.append(
            {
                "member_id": idx,
                "fattened_volume": box.fattened_volume(1.0),
                "modulation": m,
                "wiener": w,
                "ratio_w_over_m": w / m,
                "ratio_m_over_w": m / w,
            }
        )
    return rows


def fit_loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    if lx.size < 2:
        raise ValueError("need at least two points to fit a slope")
    return float(np.polyfit(lx, ly, 1)[0])
