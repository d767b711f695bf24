"""tflab: a numerical laboratory for time-frequency function spaces.

Sampled fields on symmetric boxes, a phase-exact discrete Fourier pair,
short-time transforms with mixed-norm (modulation / amalgam) functionals,
frequency-side coordinate changes and multiplier operators, torus coefficient
calculus, and polynomial weights -- plus a registry of named experiments
driven by the ``tflab`` command line tool.
"""

from .grid import (
    GridSpec,
    SampledField,
    SupportBox,
    band_limited_interpolate,
    field_from_blob,
    field_to_blob,
    forward_fourier,
    inverse_fourier,
    lp_norm,
    specs_compatible,
)
from .spaces import (
    INNER_X,
    INNER_XI,
    NormSpec,
    conjugate_exponent,
    fourier_lebesgue_norm,
    mixed_norm,
    modulation_norm,
    wiener_norm,
)
from .stft import StftArray, Window, make_window, stft, time_frequency_shift

__version__ = "0.1.0"

__all__ = [
    "GridSpec",
    "SampledField",
    "SupportBox",
    "band_limited_interpolate",
    "field_from_blob",
    "field_to_blob",
    "forward_fourier",
    "inverse_fourier",
    "lp_norm",
    "specs_compatible",
    "INNER_X",
    "INNER_XI",
    "NormSpec",
    "conjugate_exponent",
    "fourier_lebesgue_norm",
    "mixed_norm",
    "modulation_norm",
    "wiener_norm",
    "StftArray",
    "Window",
    "make_window",
    "stft",
    "time_frequency_shift",
    "__version__",
]
