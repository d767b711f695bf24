"""Deterministic corpora of well-behaved test fields.

Every family is seeded, and every member must be negligible near the box
boundary (relative to its peak) — a member that is not raises
:class:`CoverageError`, since periodic-lattice quadrature silently wraps
whatever mass reaches the edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bumps import plateau_field
from .grid import GridSpec, SampledField, SupportBox, inverse_fourier
from .operators import GaborCoefficients, GaborSystem, gabor_synthesize
from .stft import make_window
from .torus import TorusCoefficients

__all__ = [
    "CoverageError",
    "Member",
    "gaussians",
    "modulated_gaussians",
    "bump_plateaus",
    "random_bandlimited",
    "gabor_random",
    "mixed_corpus",
    "random_torus_coefficients",
]


class CoverageError(RuntimeError):
    """A corpus member carries significant mass at the box boundary."""


@dataclass(frozen=True)
class Member:
    member_id: str
    field: SampledField
    support: SupportBox | None = None


def _checked(member: Member, tol: float = 1e-12) -> Member:
    if not member.field.well_decayed(tol):
        raise CoverageError(
            f"corpus member {member.member_id} has boundary mass "
            f"{member.field.boundary_peak():.3e}; enlarge the box or shrink the member"
        )
    return member


def gaussians(spec: GridSpec, count: int, seed: int = 0, spread: float = 2.0) -> list[Member]:
    """Off-center Gaussians with mildly varying widths."""
    rng = np.random.default_rng(seed)
    nodes = spec.nodes()
    out = []
    for i in range(count):
        c = rng.uniform(-spread, spread, size=spec.dim)
        sigma = rng.uniform(0.7, 1.6)
        r2 = np.sum((nodes - c) ** 2, axis=-1)
        f = SampledField(spec, np.exp(-r2 / (2.0 * sigma**2)))
        out.append(_checked(Member(f"gauss{i}", f)))
    return out


def modulated_gaussians(spec: GridSpec, count: int, seed: int = 0,
                        max_freq: float = 4.0) -> list[Member]:
    """Gaussians carried to on-grid frequencies (so shifts stay exact)."""
    rng = np.random.default_rng(seed)
    nodes = spec.nodes()
    dxi = spec.dual_step
    max_steps = max(1, int(max_freq / dxi))
    out = []
    for i in range(count):
        c = rng.uniform(-1.5, 1.5, size=spec.dim)
        xi0 = dxi * rng.integers(-max_steps, max_steps + 1, size=spec.dim)
        sigma = rng.uniform(0.8, 1.4)
        r2 = np.sum((nodes - c) ** 2, axis=-1)
        phase = np.tensordot(nodes, xi0, axes=([-1], [0]))
        f = SampledField(spec, np.exp(-r2 / (2.0 * sigma**2)) * np.exp(1j * phase))
        out.append(_checked(Member(f"modgauss{i}", f)))
    return out


def bump_plateaus(spec: GridSpec, widths, edge_width: float = 0.5) -> list[Member]:
    """Smoothed indicators of centered cubes, with their support boxes."""
    out = []
    for w in widths:
        f = plateau_field(spec, float(w), edge_width)
        box = SupportBox((-w / 2.0,) * spec.dim, (w / 2.0,) * spec.dim)
        out.append(_checked(Member(f"plateau{w:g}", f, box)))
    return out


def random_bandlimited(spec: GridSpec, count: int, seed: int = 0,
                       band: float | None = None) -> list[Member]:
    """Smooth random fields: tapered random spectra, enveloped to decay.

    The spectrum is Gaussian-tapered inside ``band`` (default an eighth of the
    frequency box) and the result is multiplied by a wide plateau so members
    vanish at the boundary exactly.
    """
    rng = np.random.default_rng(seed)
    dual = spec.dual()
    band = band if band is not None else dual.half_width / 8.0
    xi = dual.nodes()
    r2 = np.sum(xi**2, axis=-1)
    taper = np.exp(-r2 / (2.0 * (band / 2.0) ** 2)) * (np.sqrt(r2) <= band)
    envelope = plateau_field(spec, 1.2 * spec.half_width, 0.15 * spec.half_width)
    out = []
    for i in range(count):
        coeffs = rng.standard_normal(dual.shape) + 1j * rng.standard_normal(dual.shape)
        g = inverse_fourier(SampledField(dual, coeffs * taper))
        vals = g.values * envelope.values
        peak = np.abs(vals).max()
        f = SampledField(spec, vals / peak)
        out.append(_checked(Member(f"bandlim{i}", f)))
    return out


def gabor_random(spec: GridSpec, count: int, seed: int = 0,
                 j_half: int = 4, k_half: int = 4) -> list[Member]:
    """Random finite Gabor superpositions of a Gaussian atom."""
    rng = np.random.default_rng(seed)
    atom = make_window(spec, "gaussian").field
    alpha = round(1.0 / spec.step) * spec.step
    beta = round(1.0 / spec.dual_step) * spec.dual_step
    if alpha == 0.0 or beta == 0.0:
        raise ValueError("grid too coarse for a unit-scale Gabor lattice")
    system = GaborSystem(atom, alpha, beta)
    out = []
    shape = (2 * j_half + 1,) * spec.dim + (2 * k_half + 1,) * spec.dim
    for i in range(count):
        c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        coeffs = GaborCoefficients((-j_half,) * spec.dim, (-k_half,) * spec.dim, c)
        f = gabor_synthesize(system, coeffs)
        peak = np.abs(f.values).max()
        out.append(_checked(Member(f"gabor{i}", SampledField(spec, f.values / peak))))
    return out


def mixed_corpus(spec: GridSpec, seed: int = 0, per_family: int = 3) -> list[Member]:
    """A small cross-family corpus used by the ratio experiments."""
    members = []
    members += gaussians(spec, per_family, seed)
    members += modulated_gaussians(spec, per_family, seed + 1)
    members += random_bandlimited(spec, per_family, seed + 2)
    return members


def random_torus_coefficients(dim: int, count: int, seed: int = 0,
                              support: int = 24, box: int = 40) -> list[TorusCoefficients]:
    """Random finitely supported coefficient maps on the integer lattice."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n_terms = int(rng.integers(1, support + 1))
        keys = set()
        while len(keys) < n_terms:
            keys.add(tuple(int(x) for x in rng.integers(-box, box + 1, size=dim)))
        vals = rng.standard_normal(len(keys)) + 1j * rng.standard_normal(len(keys))
        out.append(TorusCoefficients(dim, dict(zip(sorted(keys), vals))))
    return out
