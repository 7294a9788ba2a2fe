r"""Frequency multi-indices, hyperbolic crosses and sublevel-set counting.

A multi-index is a tuple ``n`` in ``Z^d``.  Two anisotropic weight families
drive everything in this package:

* product weights ``prod_j (1 + |n_j|)**alpha_j`` (dominating mixed
  smoothness), and
* sum weights ``1 + sum_j |n_j|**beta_j`` (classical anisotropic
  smoothness).

This module enumerates the hyperbolic cross ``{n : prod_j (1 + |n_j|) <= r}``
exactly in integer arithmetic, counts weighted sublevel sets
``{n : weight(n) < r}`` by recursive slicing over the last coordinate (no
full box scans), and materializes sublevel sets ``{n : weight(n) <= limit}``
for width computations and test-function supports.

Counting uses the strict inequality ``< r``; the hyperbolic cross and the
sublevel enumerators use the non-strict ``<= r``.  Both conventions are part
of the contract and are tested separately.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "CapExceededError",
    "MultiIndex",
    "AnisotropyMixed",
    "AnisotropySum",
    "IndexSet",
    "hc_weight",
    "mixed_weight",
    "sum_weight",
    "hyperbolic_cross",
    "hyperbolic_cross_size",
    "count_mixed",
    "count_sum",
    "mixed_sublevel",
    "sum_sublevel",
]

MultiIndex = tuple[int, ...]


class CapExceededError(RuntimeError):
    """An enumeration would exceed the configured size cap."""


def _validate_exponents(values: Sequence[float], name: str) -> tuple[float, ...]:
    vec = tuple(float(v) for v in values)
    if not vec:
        raise ValueError(f"{name} must have length >= 1")
    if any(not math.isfinite(v) or v <= 0 for v in vec):
        raise ValueError(f"all {name} entries must be finite and > 0, got {vec}")
    return vec


@dataclass(frozen=True)
class AnisotropyMixed:
    """Smoothness exponents for the product-weight family.

    ``min_exponent`` is the smallest exponent and ``min_multiplicity`` the
    number of coordinates attaining it; together they govern the decay rates
    of everything downstream.
    """

    alpha: tuple[float, ...]

    def __init__(self, alpha: Sequence[float]):
        object.__setattr__(self, "alpha", _validate_exponents(alpha, "alpha"))

    @property
    def dim(self) -> int:
        return len(self.alpha)

    @property
    def min_exponent(self) -> float:
        return min(self.alpha)

    @property
    def min_multiplicity(self) -> int:
        lo = self.min_exponent
        return sum(1 for a in self.alpha if a == lo)


@dataclass(frozen=True)
class AnisotropySum:
    """Smoothness exponents for the sum-weight family.

    ``harmonic_exponent`` is ``(sum_j 1/beta_j)**-1``, the aggregate that
    sets the decay rate for this family.
    """

    beta: tuple[float, ...]

    def __init__(self, beta: Sequence[float]):
        object.__setattr__(self, "beta", _validate_exponents(beta, "beta"))

    @property
    def dim(self) -> int:
        return len(self.beta)

    @property
    def harmonic_exponent(self) -> float:
        return 1.0 / sum(1.0 / b for b in self.beta)


def hc_weight(n: Sequence[int]) -> int:
    """Integer product weight ``prod_j (1 + |n_j|)``."""
    w = 1
    for v in n:
        w *= 1 + abs(int(v))
    return w


def mixed_weight(n: Sequence[int], aniso: AnisotropyMixed) -> float:
    """Product weight ``prod_j (1 + |n_j|)**alpha_j`` (always >= 1)."""
    if len(n) != aniso.dim:
        raise ValueError(f"index length {len(n)} != dimension {aniso.dim}")
    w = 1.0
    for v, a in zip(n, aniso.alpha):
        w *= (1.0 + abs(v)) ** a
    return w


def sum_weight(n: Sequence[int], aniso: AnisotropySum) -> float:
    """Sum weight ``1 + sum_j |n_j|**beta_j`` (always >= 1)."""
    if len(n) != aniso.dim:
        raise ValueError(f"index length {len(n)} != dimension {aniso.dim}")
    return 1.0 + sum(abs(v) ** b for v, b in zip(n, aniso.beta))


def _canonical_key(n: MultiIndex) -> tuple[int, MultiIndex]:
    return (hc_weight(n), n)


@dataclass(frozen=True)
class IndexSet:
    """A finite, duplicate-free, canonically ordered set of multi-indices.

    The canonical order sorts by ``(hc_weight(n), n)``; it fixes the column
    order of every measurement matrix built on the set, so cardinality and
    iteration order are reproducible across runs.
    """

    dim: int
    indices: tuple[MultiIndex, ...]
    _members: frozenset = field(repr=False, compare=False, default=frozenset())

    def __init__(self, dim: int, indices: Sequence[Sequence[int]]):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        canon = sorted((tuple(int(v) for v in n) for n in indices), key=_canonical_key)
        for n in canon:
            if len(n) != dim:
                raise ValueError(f"index {n} has length != {dim}")
        members = frozenset(canon)
        if len(members) != len(canon):
            raise ValueError("duplicate multi-indices")
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "indices", tuple(canon))
        object.__setattr__(self, "_members", members)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.indices)

    def __contains__(self, n) -> bool:
        return tuple(n) in self._members

    def as_array(self) -> np.ndarray:
        """(len, dim) int array in canonical order."""
        if not self.indices:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.array(self.indices, dtype=np.int64)

    def to_json(self) -> str:
        """JSON array of integer arrays, one row per multi-index."""
        return json.dumps([list(n) for n in self.indices])

    @classmethod
    def from_json(cls, text: str, dim: int | None = None) -> "IndexSet":
        rows = json.loads(text)
        if dim is None:
            if not rows:
                raise ValueError("cannot infer dimension from an empty set")
            dim = len(rows[0])
        return cls(dim, [tuple(row) for row in rows])


# ---------------------------------------------------------------------------
# Hyperbolic cross (integer product weight, non-strict <= r)
# ---------------------------------------------------------------------------


def _hc_size(d: int, budget: int) -> int:
    # number of n in Z^d with prod (1 + |n_j|) <= budget
    if budget < 1:
        return 0
    if d == 1:
        return 2 * budget - 1
    total = _hc_size(d - 1, budget)  # n_d = 0
    for t in range(2, budget + 1):
        total += 2 * _hc_size(d - 1, budget // t)
    return total


def hyperbolic_cross_size(d: int, r: float) -> int:
    """Cardinality of the order-``r`` hyperbolic cross without enumeration."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if r < 0:
        raise ValueError("order must be >= 0")
    return _hc_size(d, math.floor(r))


def _hc_enumerate(d: int, budget: int) -> list[MultiIndex]:
    if budget < 1:
        return []
    if d == 1:
        return [(k,) for k in range(-(budget - 1), budget)]
    out: list[MultiIndex] = []
    for k in range(-(budget - 1), budget):
        rest = _hc_enumerate(d - 1, budget // (1 + abs(k)))
        out.extend((k,) + tail for tail in rest)
    return out


def hyperbolic_cross(d: int, r: float, max_size: int | None = None) -> IndexSet:
    """All ``n`` in ``Z^d`` with ``prod_j (1 + |n_j|) <= r``.

    The weight is an integer, so the comparison is exact for any real ``r``;
    the set is empty for ``r < 1``.  Raises :class:`CapExceededError` when
    the cardinality would exceed ``max_size``.
    """
    size = hyperbolic_cross_size(d, r)
    if max_size is not None and size > max_size:
        raise CapExceededError(
            f"hyperbolic cross of order {r} in dimension {d} has {size} "
            f"indices, exceeding the cap {max_size}"
        )
    return IndexSet(d, _hc_enumerate(d, math.floor(r)))


# ---------------------------------------------------------------------------
# Sublevel-set counting by recursive coordinate slicing
# ---------------------------------------------------------------------------


def _max_base(budget: float, expo: float, strict: bool) -> int:
    """Largest integer t >= 1 with t**expo < budget (or <= when not strict).

    A float-power guess is corrected by explicit boundary checks, so exact
    integer ties are resolved by the same ``t**expo`` comparison the
    brute-force oracles use.
    """
    if budget <= 0 or (budget < 1 if not strict else budget <= 1):
        return 0
    t = int(math.ceil(budget ** (1.0 / expo))) + 1
    if strict:
        while t >= 1 and t**expo >= budget:
            t -= 1
        while (t + 1) ** expo < budget:
            t += 1
    else:
        while t >= 1 and t**expo > budget:
            t -= 1
        while (t + 1) ** expo <= budget:
            t += 1
    return t


def _max_base_vec(budgets: np.ndarray, expo: float, strict: bool) -> np.ndarray:
    """Vectorized :func:`_max_base` over an array of budgets."""
    budgets = np.asarray(budgets, dtype=float)
    safe = np.maximum(budgets, 0.0)
    t = np.ceil(safe ** (1.0 / expo)).astype(np.int64) + 1
    for _ in range(64):
        powed = t.astype(float) ** expo
        over = (t >= 1) & ((powed >= budgets) if strict else (powed > budgets))
        if not over.any():
            break
        t = t - over
    for _ in range(64):
        powed = (t + 1).astype(float) ** expo
        under = (powed < budgets) if strict else (powed <= budgets)
        if not under.any():
            break
        t = t + under
    return np.maximum(t, 0)


def _leaf_mixed(budgets: np.ndarray, expo: float, strict: bool, signed: bool) -> np.ndarray:
    k = _max_base_vec(budgets, expo, strict)
    if signed:
        return np.where(k > 0, 2 * k - 1, 0)
    return k


def _count_mixed_rec(budget: float, expos: tuple[float, ...], strict: bool, signed: bool) -> int:
    if len(expos) == 1:
        return int(_leaf_mixed(np.array([budget]), expos[0], strict, signed)[0])
    e0 = expos[0]
    kmax = _max_base(budget, e0, strict)
    if kmax == 0:
        return 0
    if len(expos) == 2:
        ts = np.arange(1, kmax + 1, dtype=float)
        leaf = _leaf_mixed(budget / ts**e0, expos[1], strict, signed)
        mult = np.ones(kmax, dtype=np.int64)
        if signed:
            mult[1:] = 2
        return int(np.sum(mult * leaf))
    total = 0
    for t in range(1, kmax + 1):
        mult = 2 if (signed and t > 1) else 1
        total += mult * _count_mixed_rec(budget / float(t) ** e0, expos[1:], strict, signed)
    return total


def count_mixed(d: int, r: float, aniso: AnisotropyMixed, positive_only: bool = False) -> int:
    """Count ``n`` with ``prod_j (1 + |n_j|)**alpha_j < r`` (strict).

    Counts over ``Z^d`` by default, or over the nonnegative cone when
    ``positive_only``.  Recursive slicing over coordinates (largest exponent
    first) keeps moderate dimensions fast without box scans.
    """
    if d != aniso.dim:
        raise ValueError(f"dimension {d} != anisotropy dimension {aniso.dim}")
    expos = tuple(sorted(aniso.alpha, reverse=True))
    return _count_mixed_rec(float(r), expos, strict=True, signed=not positive_only)


def _leaf_sum(budgets: np.ndarray, expo: float, strict: bool) -> np.ndarray:
    # count over Z of |n|**expo < budget (or <=): the origin plus signed pairs
    k = _max_base_vec(budgets, expo, strict)
    zero_ok = (budgets > 0) if strict else (budgets >= 0)
    return zero_ok.astype(np.int64) + 2 * k


def _count_sum_rec(budget: float, expos: tuple[float, ...], strict: bool) -> int:
    if len(expos) == 1:
        return int(_leaf_sum(np.array([budget]), expos[0], strict)[0])
    e0 = expos[0]
    kmax = _max_base(budget, e0, strict)
    if len(expos) == 2:
        ts = np.arange(0, kmax + 1, dtype=float)
        leaf = _leaf_sum(budget - ts**e0, expos[1], strict)
        mult = np.ones(kmax + 1, dtype=np.int64)
        mult[1:] = 2
        return int(np.sum(mult * leaf))
    total = _count_sum_rec(budget, expos[1:], strict)
    for t in range(1, kmax + 1):
        total += 2 * _count_sum_rec(budget - float(t) ** e0, expos[1:], strict)
    return total


def count_sum(d: int, r: float, aniso: AnisotropySum) -> int:
    """Count ``n`` in ``Z^d`` with ``sum_j |n_j|**beta_j < r`` (strict)."""
    if d != aniso.dim:
        raise ValueError(f"dimension {d} != anisotropy dimension {aniso.dim}")
    expos = tuple(sorted(aniso.beta, reverse=True))
    return _count_sum_rec(float(r), expos, strict=True)


# ---------------------------------------------------------------------------
# Sublevel-set enumeration (non-strict <= limit), for spectra and supports
# ---------------------------------------------------------------------------


def _mixed_sublevel_enum(limit: float, expos: tuple[float, ...]) -> list[MultiIndex]:
    kmax = _max_base(limit, expos[0], strict=False)
    if len(expos) == 1:
        return [(n,) for n in range(-(kmax - 1) if kmax else 0, kmax)] if kmax else []
    out: list[MultiIndex] = []
    for n in range(-(kmax - 1), kmax):
        rest = _mixed_sublevel_enum(limit / (1.0 + abs(n)) ** expos[0], expos[1:])
        out.extend((n,) + tail for tail in rest)
    return out


def mixed_sublevel(limit: float, aniso: AnisotropyMixed, max_size: int | None = None) -> IndexSet:
    """All ``n`` with ``prod_j (1 + |n_j|)**alpha_j <= limit``."""
    size = _count_mixed_rec(float(limit), aniso.alpha, strict=False, signed=True)
    if max_size is not None and size > max_size:
        raise CapExceededError(f"mixed sublevel set has {size} > {max_size} indices")
    return IndexSet(aniso.dim, _mixed_sublevel_enum(float(limit), aniso.alpha))


def _sum_sublevel_enum(budget: float, expos: tuple[float, ...]) -> list[MultiIndex]:
    kmax = _max_base(budget, expos[0], strict=False)
    lo = -kmax if budget >= 0 else 1
    if len(expos) == 1:
        return [(n,) for n in range(-kmax, kmax + 1)] if budget >= 0 else []
    out: list[MultiIndex] = []
    if budget < 0:
        return out
    for n in range(lo, kmax + 1):
        rest = _sum_sublevel_enum(budget - float(abs(n)) ** expos[0], expos[1:])
        out.extend((n,) + tail for tail in rest)
    return out


def sum_sublevel(limit: float, aniso: AnisotropySum, max_size: int | None = None) -> IndexSet:
    """All ``n`` with ``1 + sum_j |n_j|**beta_j <= limit``."""
    budget = float(limit) - 1.0
    size = _count_sum_rec(budget, aniso.beta, strict=False)
    if max_size is not None and size > max_size:
        raise CapExceededError(f"sum sublevel set has {size} > {max_size} indices")
    return IndexSet(aniso.dim, _sum_sublevel_enum(budget, aniso.beta))
