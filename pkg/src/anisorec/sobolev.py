r"""Finitely supported periodic functions and anisotropic Sobolev norms.

A function is represented purely by its finite complex coefficient map over
``Z^d`` in the orthonormal basis ``phi_n(x) = (2*pi)**(-d/2) * exp(i n.x)``
on ``[-pi, pi)^d``.  Every quantity downstream (norms, errors, samples) is
then exactly computable; quadrature never enters the rate experiments.

Evaluation is direct summation over the support; at desk scale this is
cheap and keeps correctness trivially auditable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from .indexsets import (
    AnisotropyMixed,
    AnisotropySum,
    IndexSet,
    MultiIndex,
    _canonical_key,
    mixed_weight,
    sum_weight,
)
from .rng import make_rng

__all__ = [
    "SmoothnessClass",
    "class_weight",
    "PeriodicFunction",
    "evaluate",
    "sobolev_norm",
    "l2_error",
    "generate_extremal",
    "generate_sparse",
]

SmoothnessClass = Union[AnisotropyMixed, AnisotropySum]


def class_weight(n: Sequence[int], cls: SmoothnessClass) -> float:
    """The (un-squared) Sobolev weight of ``n`` for either smoothness family."""
    if isinstance(cls, AnisotropyMixed):
        return mixed_weight(n, cls)
    if isinstance(cls, AnisotropySum):
        return sum_weight(n, cls)
    raise TypeError(f"unknown smoothness class {type(cls)!r}")


@dataclass(frozen=True)
class PeriodicFunction:
    """A trigonometric polynomial given by finitely many coefficients.

    ``coeffs`` maps multi-indices to complex values and is stored in
    canonical order; treat instances as immutable.
    """

    dim: int
    coeffs: dict

    def __init__(self, dim: int, coeffs: Mapping[MultiIndex, complex]):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        canon: dict[MultiIndex, complex] = {}
        for n in sorted((tuple(int(v) for v in k) for k in coeffs), key=_canonical_key):
            if len(n) != dim:
                raise ValueError(f"index {n} has length != {dim}")
            canon[n] = complex(coeffs[n])
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "coeffs", canon)

    @property
    def support_size(self) -> int:
        return len(self.coeffs)

    def support_array(self) -> np.ndarray:
        if not self.coeffs:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.array(list(self.coeffs.keys()), dtype=np.int64)

    def coeff_array(self) -> np.ndarray:
        return np.array(list(self.coeffs.values()), dtype=complex)

    def coeff_vector(self, indexset: IndexSet) -> np.ndarray:
        """Coefficients restricted to ``indexset``, in its canonical order."""
        return np.array([self.coeffs.get(n, 0.0) for n in indexset], dtype=complex)

    def restricted(self, indexset: IndexSet, complement: bool = False) -> "PeriodicFunction":
        """Coefficients inside ``indexset`` (or outside, when ``complement``)."""
        kept = {
            n: c for n, c in self.coeffs.items() if (n in indexset) != complement
        }
        return PeriodicFunction(self.dim, kept)

    def to_json(self) -> str:
        """JSON ``{dim, entries: [[n...], re, im], ...}`` in canonical order."""
        entries = [[list(n), c.real, c.imag] for n, c in self.coeffs.items()]
        return json.dumps({"dim": self.dim, "entries": entries})

    @classmethod
    def from_json(cls, text: str) -> "PeriodicFunction":
        data = json.loads(text)
        coeffs = {tuple(n): complex(re, im) for n, re, im in data["entries"]}
        return cls(data["dim"], coeffs)


def evaluate(f: PeriodicFunction, x: Sequence[float]) -> complex:
    """Pointwise value ``sum_n c_n (2*pi)**(-d/2) exp(i n.x)``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (f.dim,):
        raise ValueError(f"point has shape {x.shape}, expected ({f.dim},)")
    return complex(evaluate_grid(f, x[None, :])[0])


def evaluate_grid(f: PeriodicFunction, points: np.ndarray) -> np.ndarray:
    """Vectorized evaluation over an ``(m, d)`` array of points."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != f.dim:
        raise ValueError(f"points must be (m, {f.dim}), got {points.shape}")
    if not f.coeffs:
        return np.zeros(points.shape[0], dtype=complex)
    phases = points @ f.support_array().T
    return (np.exp(1j * phases) @ f.coeff_array()) * (2.0 * math.pi) ** (-f.dim / 2.0)


def sobolev_norm(f: PeriodicFunction, cls: SmoothnessClass) -> float:
    """Exact anisotropic Sobolev norm from the squared, weighted coefficients."""
    if cls.dim != f.dim:
        raise ValueError(f"class dimension {cls.dim} != function dimension {f.dim}")
    total = 0.0
    for n, c in f.coeffs.items():
        total += class_weight(n, cls) ** 2 * abs(c) ** 2
    return math.sqrt(total)


def l2_error(f: PeriodicFunction, g: PeriodicFunction) -> float:
    """``L^2`` distance, exact by Parseval on the union of supports."""
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    total = 0.0
    for n in f.coeffs.keys() | g.coeffs.keys():
        total += abs(f.coeffs.get(n, 0.0) - g.coeffs.get(n, 0.0)) ** 2
    return math.sqrt(total)


def generate_extremal(
    cls: SmoothnessClass,
    support: IndexSet,
    decay_margin: float = 0.5,
    seed: int = 0,
) -> PeriodicFunction:
    """Random-phase test function with near-extremal coefficient decay.

    Coefficients follow ``weight(n)**-(1 + decay_margin)`` with seeded
    uniform phases, then the whole map is rescaled so the Sobolev norm for
    ``cls`` is exactly 1.  Deterministic given the seed.
    """
    if len(support) == 0:
        raise ValueError("support must be non-empty")
    if decay_margin <= 0:
        raise ValueError(f"decay_margin must be > 0, got {decay_margin}")
    rng = make_rng(seed)
    weights = np.array([class_weight(n, cls) for n in support])
    phases = np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, len(support)))
    raw = phases * weights ** -(1.0 + decay_margin)
    scale = 1.0 / math.sqrt(float(np.sum(weights**2 * np.abs(raw) ** 2)))
    return PeriodicFunction(support.dim, dict(zip(support, scale * raw)))


def generate_sparse(support: IndexSet, s: int, seed: int = 0) -> PeriodicFunction:
    """Exactly ``s``-sparse function with unit-magnitude random-phase coefficients.

    Indices are drawn uniformly without replacement from ``support``;
    deterministic given the seed.
    """
    if not 1 <= s <= len(support):
        raise ValueError(f"need 1 <= s <= |support| = {len(support)}, got {s}")
    rng = make_rng(seed)
    picks = rng.choice(len(support), size=s, replace=False)
    phases = np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, s))
    coeffs = {support.indices[i]: phases[k] for k, i in enumerate(sorted(picks))}
    return PeriodicFunction(support.dim, coeffs)
