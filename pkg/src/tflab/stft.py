"""Short-time Fourier transforms on grid fields.

The transform of ``f`` against a window ``w`` is

    V_w f(x, xi) = integral f(t) conj(w(t - x)) e^{-i xi.t} dt,

sampled on the full product lattice (every grid node x) x (every dual node
xi).  Window translates use the periodic roll of the sampled window, which
makes the discrete transform exactly covariant under on-grid time-frequency
shifts and makes the Fourier-side identity

    |V_w f(x, xi)| = (2pi)^{-n} |V_{Fw} Ff(xi, -x)|

hold at the lattice level up to float rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import (
    GridSpec,
    SampledField,
    forward_fourier,
    specs_compatible,
    _BLOB_MAGIC,
    _BLOB_STFT,
)

__all__ = [
    "Window",
    "StftArray",
    "make_window",
    "stft",
    "check_fourier_covariance",
    "time_frequency_shift",
    "stft_to_blob",
    "stft_from_blob",
]


@dataclass(frozen=True)
class Window:
    """A nonzero window field, optionally with a declared compact support radius."""

    field: SampledField
    kind: str = "custom"
    support_radius: float | None = None

    def __post_init__(self):
        if not np.any(self.field.values):
            raise ValueError("window must not be identically zero")
        if self.support_radius is not None:
            r = float(self.support_radius)
            if r <= 0:
                raise ValueError("support_radius must be positive")
            nodes = self.field.spec.nodes()
            outside = np.max(np.abs(nodes), axis=-1) >= r
            if np.any(np.abs(self.field.values[outside]) > 0.0):
                raise ValueError(f"window of kind {self.kind!r} has mass outside radius {r}")

    @property
    def spec(self) -> GridSpec:
        return self.field.spec


def _gaussian_profile(r2: np.ndarray) -> np.ndarray:
    return np.exp(-r2 / 2.0)


def _bump_profile(u2: np.ndarray) -> np.ndarray:
    """C-infinity bump of ``|t/r|^2``: exp(1 - 1/(1-u^2)) inside, hard 0 outside."""
    out = np.zeros_like(u2)
    inside = u2 < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - u2[inside]))
    return out


def make_window(spec: GridSpec, kind: str = "gaussian", radius: float = 1.0) -> Window:
    """Sample one of the built-in windows on ``spec``.

    kinds: ``gaussian`` (e^{-|t|^2/2}), ``compact_bump`` (smooth, hard-zero
    outside ``radius``), ``triangular`` (tensor product of max(1-|t|,0),
    support radius 1).
    """
    nodes = spec.nodes()
    if kind == "gaussian":
        vals = _gaussian_profile(np.sum(nodes**2, axis=-1))
        return Window(SampledField(spec, vals), kind=kind)
    if kind == "compact_bump":
        vals = _bump_profile(np.sum((nodes / radius) ** 2, axis=-1))
        return Window(SampledField(spec, vals), kind=kind, support_radius=radius)
    if kind == "triangular":
        vals = np.prod(np.maximum(1.0 - np.abs(nodes), 0.0), axis=-1)
        return Window(SampledField(spec, vals), kind=kind, support_radius=1.0)
    raise ValueError(f"unknown window kind {kind!r}")


@dataclass(frozen=True)
class StftArray:
    """STFT samples on the product lattice (grid nodes) x (dual nodes).

    ``values`` has shape ``grid.shape + grid.shape``: the leading ``dim`` axes
    index the translation x, the trailing ``dim`` axes the frequency xi.
    """

    grid: GridSpec
    window_kind: str
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != self.grid.shape + self.grid.shape:
            raise ValueError(f"stft values shape {v.shape} does not match {self.grid.shape * 2}")
        if v is self.values:
            v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def x_cell(self) -> float:
        return self.grid.cell_volume

    @property
    def xi_cell(self) -> float:
        return self.grid.dual_step**self.grid.dim


def _rolled_conj_window(w: np.ndarray, shift_index: tuple) -> np.ndarray:
    """conj(w(t - x_m)) sampled at the nodes, via periodic index shift.

    With nodes t_j = -L + j h and x_m = -L + m h, the translate evaluates to
    the stored sample at index (j - m + N/2) mod N along each axis.
    """
    N = w.shape[0]
    idx = [(np.arange(N) - m + N // 2) % N for m in shift_index]
    return np.conjugate(w[np.ix_(*idx)] if w.ndim > 1 else w[idx[0]])


def stft(f: SampledField, w: Window) -> StftArray:
    """Sample ``V_w f`` on the full product lattice.

    One length-N FFT per translation node: the t-integral for fixed x is the
    forward transform of ``f * conj(w(. - x))``.
    """
    if not specs_compatible(f.spec, w.spec):
        raise ValueError("stft requires the field and window to share a grid")
    spec = f.spec
    n, N = spec.dim, spec.points
    wv = w.field.values
    if n == 1:
        j = np.arange(N)
        shifted = wv[(j[None, :] - j[:, None] + N // 2) % N]  # [m, t]
        prod = f.values[None, :] * np.conjugate(shifted)
        alt = np.where(j % 2 == 0, 1.0, -1.0)
        sign = (-1.0) ** (N // 2)
        vals = spec.step * sign * alt[None, :] * np.fft.fft(alt[None, :] * prod, axis=1)
        return StftArray(spec, w.kind, vals)
    # n >= 2: loop translations, batch the FFT over the trailing axes
    out = np.empty(spec.shape + spec.shape, dtype=np.complex128)
    for m in np.ndindex(spec.shape):
        g = f.values * _rolled_conj_window(wv, m)
        out[m] = forward_fourier(SampledField(spec, g)).values
    return StftArray(spec, w.kind, out)


def check_fourier_covariance(f: SampledField, w: Window) -> float:
    """Largest deviation in the transform-side STFT identity.

    Compares ``|V_w f(x, xi)|`` against ``(2pi)^{-n} |V_{Fw} Ff(xi, -x)|``
    over the whole product lattice, where the second transform is taken on the
    dual grid with the transformed window.
    """
    n = f.spec.dim
    a = np.abs(stft(f, w).values)
    fhat = forward_fourier(f)
    what = Window(forward_fourier(w.field), kind=f"fourier({w.kind})")
    b = np.abs(stft(fhat, what).values) / (2.0 * math.pi) ** n
    # reindex b[k, (N-m) % N] -> [m, k] one axis pair at a time
    N = f.spec.points
    neg = (-np.arange(N)) % N
    if n == 1:
        b = b[:, neg].T
    else:
        for ax in range(n):
            b = np.take(b, neg, axis=n + ax)
        order = tuple(range(n, 2 * n)) + tuple(range(n))
        b = np.transpose(b, order)
    return float(np.abs(a - b).max())


def time_frequency_shift(
    f: SampledField,
    x_shift,
    xi_shift,
    *,
    allow_offgrid: bool = False,
) -> SampledField:
    """Apply ``M_eta T_y``: translate by ``y = x_shift``, then modulate by ``eta``.

    Exact (roll + phase) when ``y`` is a multiple of the grid step and ``eta``
    a dual node; off-grid translations require ``allow_offgrid`` and go
    through the trigonometric interpolant.
    """
    spec = f.spec
    y = np.broadcast_to(np.asarray(x_shift, dtype=float), (spec.dim,))
    eta = np.broadcast_to(np.asarray(xi_shift, dtype=float), (spec.dim,))
    steps = y / spec.step
    on_grid = np.allclose(steps, np.round(steps), atol=1e-9)
    if on_grid:
        vals = np.roll(f.values, tuple(int(r) for r in np.round(steps)), axis=tuple(range(spec.dim)))
    elif allow_offgrid:
        from .grid import band_limited_interpolate

        pts = spec.nodes().reshape(-1, spec.dim) - y[None, :]
        vals = band_limited_interpolate(f, pts, periodic=True).reshape(spec.shape)
    else:
        raise ValueError("translation is not a multiple of the grid step; pass allow_offgrid=True")
    dual_steps = eta / spec.dual_step
    if not allow_offgrid and not np.allclose(dual_steps, np.round(dual_steps), atol=1e-9):
        raise ValueError("modulation is not on the dual grid; pass allow_offgrid=True")
    nodes = spec.nodes()
    phase = np.exp(1j * np.tensordot(nodes, eta, axes=([-1], [0])))
    return SampledField(spec, phase * vals)


def stft_to_blob(s: StftArray) -> bytes:
    """Blob with the field header plus the window tag; payload is the 2n-d array."""
    import struct

    tag = s.window_kind.encode()
    head = _BLOB_MAGIC + struct.pack("<BId", _BLOB_STFT, s.grid.dim, s.grid.half_width)
    head += struct.pack("<II", s.grid.points, len(tag)) + tag
    flat = s.values.ravel()
    payload = np.empty(flat.size * 2, dtype="<f8")
    payload[0::2] = flat.real
    payload[1::2] = flat.imag
    return head + payload.tobytes()


def stft_from_blob(blob: bytes) -> StftArray:
    import struct

    if blob[:4] != _BLOB_MAGIC:
        raise ValueError("not a tflab blob")
    if len(blob) < 25:
        raise ValueError("truncated blob: header incomplete")
    kind, dim, L = struct.unpack_from("<BId", blob, 4)
    if kind != _BLOB_STFT:
        raise ValueError(f"blob holds kind {kind}, not an stft array")
    N, taglen = struct.unpack_from("<II", blob, 17)
    tag = blob[25 : 25 + taglen].decode()
    spec = GridSpec(dim, L, N)
    raw = np.frombuffer(blob, dtype="<f8", offset=25 + taglen)
    count = N ** (2 * dim)
    if raw.size != 2 * count:
        raise ValueError("blob payload size does not match header")
    vals = (raw[0::2] + 1j * raw[1::2]).reshape(spec.shape + spec.shape)
    return StftArray(spec, tag, vals)
