"""Sparse Fourier-coefficient calculus on the torus.

Fields on the n-torus are represented by finitely many Fourier coefficients
indexed by integer frequency vectors.  In this setting the modulation,
amalgam, and Fourier-Lebesgue norms all coincide with the plain ``ell^q``
norm of the coefficient sequence, so norms are exact sums — no quadrature —
and lattice bijections act as exact permutations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

__all__ = [
    "TorusCoefficients",
    "LatticeBijection",
    "torus_norm",
    "torus_canonical_transform",
    "torus_propagator",
    "coefficients_to_jsonl",
    "coefficients_from_jsonl",
    "identity_bijection",
    "negation_bijection",
    "shift_bijection",
    "permutation_bijection",
    "shear_bijection",
    "pair_swap_bijection",
]


@dataclass(frozen=True)
class TorusCoefficients:
    """Finitely supported coefficient map ``integer frequency -> complex``."""

    dim: int
    coeffs: Mapping[tuple, complex]

    def __post_init__(self):
        clean = {}
        for k, v in self.coeffs.items():
            key = tuple(int(x) for x in (k if isinstance(k, Iterable) else (k,)))
            if len(key) != self.dim:
                raise ValueError(f"frequency {key} does not have dimension {self.dim}")
            val = complex(v)
            if not (math.isfinite(val.real) and math.isfinite(val.imag)):
                raise ValueError(f"coefficient at {key} is not finite")
            if key in clean:
                raise ValueError(f"duplicate frequency {key}")
            clean[key] = val
        object.__setattr__(self, "coeffs", clean)

    def items(self):
        return self.coeffs.items()

    def __len__(self):
        return len(self.coeffs)

    def value_at(self, key: tuple) -> complex:
        return self.coeffs.get(tuple(key), 0.0 + 0.0j)


def torus_norm(c: TorusCoefficients, q: float) -> float:
    """Exact ``ell^q`` norm of the coefficients (max for ``q = inf``)."""
    if not q >= 1.0:
        raise ValueError(f"torus norms require q >= 1, got {q}")
    if not c.coeffs:
        return 0.0
    mags = np.abs(np.fromiter(c.coeffs.values(), dtype=np.complex128, count=len(c.coeffs)))
    if math.isinf(q):
        return float(mags.max())
    return float(np.sum(mags**q) ** (1.0 / q))


@dataclass(frozen=True)
class LatticeBijection:
    """A bijection of the integer frequency lattice with an explicit inverse."""

    name: str
    forward: Callable[[tuple], tuple]
    inverse: Callable[[tuple], tuple]


def _as_int_tuple(x, dim: int, what: str) -> tuple:
    t = tuple(int(v) for v in (x if isinstance(x, Iterable) else (x,)))
    if len(t) != dim:
        raise ValueError(f"{what} returned a vector of dimension {len(t)}, expected {dim}")
    return t


def torus_canonical_transform(bij: LatticeBijection, c: TorusCoefficients) -> TorusCoefficients:
    """Pullback along a lattice bijection: output at ``xi`` is the input at ``psi(xi)``.

    The output support is the image of the input support under the inverse
    map; the forward/inverse pair is verified on the support and any collision
    (a non-injective inverse) raises.
    """
    out = {}
    for eta, v in c.items():
        xi = _as_int_tuple(bij.inverse(eta), c.dim, f"{bij.name}.inverse")
        back = _as_int_tuple(bij.forward(xi), c.dim, f"{bij.name}.forward")
        if back != eta:
            raise ValueError(
                f"{bij.name} is not a bijection on the support: forward(inverse({eta})) = {back}"
            )
        if xi in out:
            raise ValueError(f"{bij.name}.inverse collides at {xi}")
        out[xi] = v
    return TorusCoefficients(c.dim, out)


def torus_propagator(alpha: float, t: float, c: TorusCoefficients) -> TorusCoefficients:
    """Multiply each coefficient by ``exp(i t |xi|^alpha)``.

    The origin uses the same conventions as the grid-side propagator:
    ``|0|^alpha`` is 0 for ``alpha > 0``, 1 for ``alpha = 0``, and for
    ``alpha < 0`` the multiplier at the origin is 1.  All multiplier values
    are unimodular, so every ``ell^q`` norm is preserved exactly.
    """
    out = {}
    for k, v in c.items():
        r = math.sqrt(sum(x * x for x in k))
        if r == 0.0:
            expo = 0.0 if alpha < 0 else (1.0 if alpha == 0 else 0.0)
        else:
            expo = r**alpha
        out[k] = v * complex(math.cos(t * expo), math.sin(t * expo))
    return TorusCoefficients(c.dim, out)


# ---------------------------------------------------------------------------
# built-in bijection families

def identity_bijection(dim: int) -> LatticeBijection:
    return LatticeBijection("identity", lambda k: k, lambda k: k)


def negation_bijection(dim: int) -> LatticeBijection:
    neg = lambda k: tuple(-x for x in k)
    return LatticeBijection("negation", neg, neg)


def shift_bijection(offset) -> LatticeBijection:
    off = tuple(int(x) for x in (offset if isinstance(offset, Iterable) else (offset,)))

    def fwd(k):
        return tuple(x + o for x, o in zip(k, off))

    def inv(k):
        return tuple(x - o for x, o in zip(k, off))

    return LatticeBijection(f"shift{off}", fwd, inv)


def permutation_bijection(perm) -> LatticeBijection:
    perm = tuple(int(x) for x in perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValueError(f"{perm} is not a permutation")
    invp = tuple(perm.index(i) for i in range(len(perm)))

    def fwd(k):
        return tuple(k[p] for p in perm)

    def inv(k):
        return tuple(k[p] for p in invp)

    return LatticeBijection(f"permute{perm}", fwd, inv)


def shear_bijection() -> LatticeBijection:
    """2D shear (k1, k2) -> (k1 + k2, k2)."""

    def fwd(k):
        return (k[0] + k[1], k[1])

    def inv(k):
        return (k[0] - k[1], k[1])

    return LatticeBijection("shear", fwd, inv)


def pair_swap_bijection() -> LatticeBijection:
    """1D involution swapping each even integer with its successor."""

    def fwd(k):
        (x,) = k
        return (x + 1,) if x % 2 == 0 else (x - 1,)

    return LatticeBijection("pair_swap", fwd, fwd)


# ---------------------------------------------------------------------------
# JSON-lines serialization

def coefficients_to_jsonl(c: TorusCoefficients) -> str:
    """One JSON object per coefficient: ``{"xi": [...], "re": r, "im": i}``."""
    lines = []
    for k in sorted(c.coeffs):
        v = c.coeffs[k]
        lines.append(json.dumps({"xi": list(k), "re": v.real, "im": v.imag}))
    return "\n".join(lines) + ("\n" if lines else "")


def coefficients_from_jsonl(text: str, dim: int | None = None) -> TorusCoefficients:
    coeffs = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        key = tuple(int(x) for x in obj["xi"])
        if dim is None:
            dim = len(key)
        coeffs[key] = complex(float(obj["re"]), float(obj["im"]))
    if dim is None:
        raise ValueError("empty coefficient stream with no dimension hint")
    return TorusCoefficients(dim, coeffs)
