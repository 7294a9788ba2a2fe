r"""Sandwich bounds and closed-form rates for ellipsoid sampling widths.

The worst-case error of the best (possibly adaptive, nonlinear) method
using ``m`` linear measurements on a weighted ``ell^2`` ellipsoid is pinched
between consecutive entries of the non-increasing rearrangement of the
weights: ``w*_{2m+1} <= eps_m <= w*_{m+1}``.  For the two Sobolev families
the weights are the reciprocals of the class weights, and the sandwich is
computed from a provably complete prefix of their rearrangement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .indexsets import AnisotropyMixed, AnisotropySum, mixed_sublevel, sum_sublevel
from .sobolev import SmoothnessClass, class_weight

__all__ = ["WeightSpectrum", "weight_spectrum", "width_sandwich", "width_rate"]

_DEFAULT_ENUM_CAP = 2_000_000


@dataclass(frozen=True)
class WeightSpectrum:
    """First ``K`` values of the non-increasing reciprocal-weight sequence.

    The generator enumerates the sublevel set ``{weight <= radius}`` with
    the radius doubled until the set holds more than ``2K`` indices, so
    every omitted index has a reciprocal weight below the last kept value:
    the prefix is globally correct.
    """

    values: np.ndarray
    descriptor: dict

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if np.any(np.diff(vals) > 0):
            raise ValueError("spectrum must be non-increasing")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)


def weight_spectrum(
    cls: SmoothnessClass, count: int, enum_cap: int = _DEFAULT_ENUM_CAP
) -> WeightSpectrum:
    """The ``count`` largest reciprocal weights of the class."""
    if count < 1:
        raise ValueError(f"need count >= 1, got {count}")
    radius = 2.0
    while True:
        if isinstance(cls, AnisotropyMixed):
            sub = mixed_sublevel(radius, cls, max_size=enum_cap)
        elif isinstance(cls, AnisotropySum):
            sub = sum_sublevel(radius, cls, max_size=enum_cap)
        else:
            raise TypeError(f"unknown smoothness class {type(cls)!r}")
        if len(sub) > 2 * count:
            break
        radius *= 2.0
    weights = np.sort(np.array([class_weight(n, cls) for n in sub]))[:count]
    params = list(cls.alpha) if isinstance(cls, AnisotropyMixed) else list(cls.beta)
    descriptor = {
        "kind": "mixed" if isinstance(cls, AnisotropyMixed) else "sum",
        "params": params,
        "radius": radius,
        "enumerated": len(sub),
        "count": count,
    }
    return WeightSpectrum(values=1.0 / weights, descriptor=descriptor)


def width_sandwich(spectrum: WeightSpectrum, m: int) -> tuple[float, float]:
    """``(w*_{2m+1}, w*_{m+1})``: lower and upper bounds on the m-width."""
    if m < 0:
        raise ValueError(f"need m >= 0, got {m}")
    if 2 * m + 1 > len(spectrum):
        raise ValueError(f"spectrum of length {len(spectrum)} too short for m={m}")
    return float(spectrum.values[2 * m]), float(spectrum.values[m])


def width_rate(cls: SmoothnessClass, m: float) -> float:
    """Constant-free closed-form width rate at budget ``m >= 2``."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    if isinstance(cls, AnisotropyMixed):
        h = cls.min_exponent
        p = cls.min_multiplicity
        return float((math.log(m) ** (p - 1) / m) ** h)
    if isinstance(cls, AnisotropySum):
        return float(m ** -cls.harmonic_exponent)
    raise TypeError(f"unknown smoothness class {type(cls)!r}")
