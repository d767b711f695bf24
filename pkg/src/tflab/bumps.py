"""Smooth compactly supported profiles shared by cutoffs, corpora, and maps.

Everything is built from the C-infinity step sigma(t) = exp(-1/t) for t > 0
(zero otherwise), so the profiles are exactly zero outside their declared
support rather than merely small.
"""

from __future__ import annotations

import numpy as np

from .grid import GridSpec, SampledField

__all__ = ["smooth_step", "smooth_plateau_profile", "plateau_field"]


def smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity transition: 0 for t <= 0, 1 for t >= 1, monotone between."""
    t = np.asarray(t, dtype=float)
    lo = np.zeros_like(t)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(t > 0.0, np.exp(-1.0 / np.clip(t, 1e-300, None)), 0.0)
        b = np.where(t < 1.0, np.exp(-1.0 / np.clip(1.0 - t, 1e-300, None)), 0.0)
    denom = a + b
    out = np.divide(a, denom, out=lo, where=denom > 0.0)
    out[t >= 1.0] = 1.0
    out[t <= 0.0] = 0.0
    return out


def smooth_plateau_profile(r: np.ndarray, flat_radius: float, edge_width: float) -> np.ndarray:
    """1 for |r| <= flat_radius, 0 for |r| >= flat_radius + edge_width, smooth between."""
    if flat_radius < 0 or edge_width <= 0:
        raise ValueError("flat_radius must be >= 0 and edge_width > 0")
    return smooth_step((flat_radius + edge_width - np.abs(r)) / edge_width)


def plateau_field(spec: GridSpec, width: float, edge_width: float = 0.5,
                  center=0.0) -> SampledField:
    """Smoothed indicator of a centered cube of the given total width.

    The profile equals 1 on the inner cube, decays smoothly across
    ``edge_width``, and is exactly zero outside the cube of side ``width``;
    the declared support box is therefore ``center +- width/2`` per axis.
    """
    if width <= 2 * edge_width:
        raise ValueError("width must exceed twice the edge width")
    nodes = spec.nodes()
    c = np.broadcast_to(np.asarray(center, dtype=float), (spec.dim,))
    vals = np.ones(spec.shape)
    for ax in range(spec.dim):
        r = np.abs(nodes[..., ax] - c[ax])
        vals = vals * smooth_plateau_profile(r, width / 2.0 - edge_width, edge_width)
    return SampledField(spec, vals)
