r"""Rearrangements, sequence norms and best s-term error evaluators.

Sequences are finitely supported complex maps ``index -> value``; plain
iterables of values are also accepted (treated as indexed by position).
All norms are computed on the finite support.  ``q = math.inf`` selects the
sup norm wherever a summability exponent appears; logarithms are natural
throughout.

The tail formula ``sigma_s = (sum_{i>s} |c*_i|**q)**(1/q)`` over the
non-increasing rearrangement ``c*`` is the workhorse; its equivalence with
the support-minimization definition is enforced by an exhaustive oracle in
the test suite.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "rearrange",
    "lq_norm",
    "weak_lorentz_norm",
    "best_s_term_error",
    "stechkin_rhs",
]


def _items(c) -> list[tuple[object, complex]]:
    if isinstance(c, Mapping):
        return list(c.items())
    return list(enumerate(c))


def rearrange(c: Mapping | Iterable) -> np.ndarray:
    """Magnitudes sorted non-increasingly (ties broken by index order).

    The result holds the same multiset of magnitudes as the input; the
    deterministic tie-break matters only for support-selection logic built
    on top.
    """
    items = _items(c)
    items.sort(key=lambda kv: kv[0])
    mags = np.abs(np.array([v for _, v in items], dtype=complex))
    order = np.argsort(-mags, kind="stable")
    return mags[order]


def lq_norm(c: Mapping | Iterable, q: float) -> float:
    """The ell^q norm for ``q`` in ``(0, inf]``; the sup norm at ``q = inf``."""
    if q <= 0:
        raise ValueError(f"q must be positive, got {q}")
    mags = np.abs(np.array([v for _, v in _items(c)], dtype=complex))
    if mags.size == 0:
        return 0.0
    if math.isinf(q):
        return float(mags.max())
    return float(np.sum(mags**q) ** (1.0 / q))


def weak_lorentz_norm(c: Mapping | Iterable, p: float, a: float = 0.0) -> float:
    r"""Weak Lorentz norm ``sup_i |c*_i| i^{1/p} (max(1, log i))^{-a/p}``.

    ``a = 0`` recovers the weak-``ell^p`` quasinorm.
    """
    if p <= 0 or math.isinf(p):
        raise ValueError(f"p must be in (0, inf), got {p}")
    if a < 0:
        raise ValueError(f"a must be >= 0, got {a}")
    mags = rearrange(c)
    if mags.size == 0:
        return 0.0
    i = np.arange(1, mags.size + 1, dtype=float)
    factors = i ** (1.0 / p) * np.maximum(1.0, np.log(i)) ** (-a / p)
    return float(np.max(mags * factors))


def best_s_term_error(c: Mapping | Iterable, s: int, q: float) -> float:
    """The ell^q norm of the tail after removing the ``s`` largest magnitudes.

    ``s = 0`` gives the full norm; the error is zero once ``s`` reaches the
    support size.
    """
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    if q <= 0:
        raise ValueError(f"q must be positive, got {q}")
    tail = rearrange(c)[s:]
    if tail.size == 0:
        return 0.0
    if math.isinf(q):
        return float(tail.max())
    return float(np.sum(tail**q) ** (1.0 / q))


def stechkin_rhs(s: float, p: float, q: float, a: float, norm_value: float) -> float:
    r"""Right-hand side of the weak-Lorentz tail bound.

    Evaluates ``norm_value * max(1, s)^{1/q - 1/p} *
    (max(1, log(max(1, s))))^{a/p}``, with the ``1/q`` term dropped when
    ``q = inf``.  Requires ``0 < p < q <= inf`` and ``a >= 0``.
    """
    if p <= 0 or math.isinf(p):
        raise ValueError(f"p must be in (0, inf), got {p}")
    if p >= q:
        raise ValueError(f"need p < q, got p={p}, q={q}")
    if a < 0:
        raise ValueError(f"a must be >= 0, got {a}")
    if norm_value < 0:
        raise ValueError(f"norm_value must be >= 0, got {norm_value}")
    se = max(1.0, float(s))
    inv_q = 0.0 if math.isinf(q) else 1.0 / q
    power = se ** (inv_q - 1.0 / p)
    logpart = max(1.0, math.log(se)) ** (a / p)
    return norm_value * power * logpart
