r"""The universal reconstruction pipeline and its parameter schedule.

Given only a sample budget ``m``, the ambient dimension and a failure
probability, the planner derives a sparsity level ``s``, a hyperbolic-cross
order ``r = ceil(s**u(m))``, the truncation set, and the regularization
weight at the upper end of its admissible interval.  Reconstruction then
assembles the scaled measurement system on the planned set, solves the
square-root LASSO and rescales the minimizer into coefficient space.  None
of these steps sees a smoothness parameter: the same pipeline serves every
anisotropy, which is the whole point.

``u`` is a nondecreasing schedule (double-log by default) controlling how
aggressively the truncation order grows relative to the sparsity level; the
effective budget ``m_tilde = m / (log^3(m) u(m) + log(1/epsilon))`` is the
natural abscissa for rate plots.  All logarithms are natural.

The planner's leading constant defaults to 1.0 as a stand-in for an
unquantified theory constant; experiment configs may override it (the value
is echoed in every output).  The index-set cap, absent from the theory, is
mandatory engineering: when ``r`` would blow past it the order is shrunk to
the largest feasible value and the plan is flagged ``capped``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .indexsets import (
    AnisotropyMixed,
    AnisotropySum,
    IndexSet,
    hyperbolic_cross,
    hyperbolic_cross_size,
)
from .rng import PRNG_IDENTITY
from .sensing import MeasurementOperator, SampleSet, lambda_upper_bound
from .sobolev import PeriodicFunction, SmoothnessClass
from .srlasso import SolverConfig, SolverResult, solve

__all__ = [
    "USchedule",
    "RecoveryConfig",
    "RecoveryPlan",
    "RecoveryResult",
    "u_value",
    "m_tilde",
    "plan",
    "reconstruct",
    "run_recovery",
    "theoretical_rate",
]

# schedule kinds: "loglog", "log", "const:<v>", or an explicit step table
USchedule = Union[str, Sequence[tuple[float, float]]]


@dataclass(frozen=True)
class RecoveryConfig:
    epsilon: float = 0.5
    u: USchedule = "loglog"
    c_prime: float = 1.0
    max_index_set_size: int = 20000
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if self.c_prime <= 0:
            raise ValueError(f"c_prime must be > 0, got {self.c_prime}")
        if self.max_index_set_size < 1:
            raise ValueError("max_index_set_size must be >= 1")
        _parse_u(self.u)  # validate eagerly

    def describe(self) -> dict:
        u = self.u if isinstance(self.u, str) else [list(row) for row in self.u]
        return {
            "epsilon": self.epsilon,
            "u": u,
            "c_prime": self.c_prime,
            "max_index_set_size": self.max_index_set_size,
            "solver": {
                "max_iters": self.solver.max_iters,
                "tol": self.solver.tol,
                "step_scale": self.solver.step_scale,
            },
            "prng": PRNG_IDENTITY,
        }


def _parse_u(u: USchedule):
    if isinstance(u, str):
        if u in ("loglog", "log"):
            return
        if u.startswith("const:"):
            v = float(u.split(":", 1)[1])
            if v <= 0:
                raise ValueError(f"constant schedule value must be > 0, got {v}")
            return
        raise ValueError(f"unknown schedule {u!r}; use 'loglog', 'log', 'const:V' or a table")
    table = [(float(m), float(v)) for m, v in u]
    if not table or any(v <= 0 for _, v in table):
        raise ValueError("schedule table must be non-empty with positive values")
    if sorted(table) != table or any(
        v2 < v1 for (_, v1), (_, v2) in zip(table, table[1:])
    ):
        raise ValueError("schedule table must be nondecreasing")


def u_value(cfg: RecoveryConfig, m: float) -> float:
    """Schedule value at budget ``m`` (nondecreasing in ``m``)."""
    if m <= 1:
        raise ValueError(f"need m > 1, got {m}")
    u = cfg.u
    if isinstance(u, str):
        if u == "loglog":
            return max(1.0, math.log(math.log(m)))
        if u == "log":
            return math.log(m + 1.0)
        return float(u.split(":", 1)[1])
    value = u[0][1]
    for threshold, v in u:
        if m >= threshold:
            value = v
    return float(value)


def m_tilde(m: float, cfg: RecoveryConfig) -> float:
    """Effective budget ``m / (log^3(m) u(m) + log(1/epsilon))``."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    return m / (math.log(m) ** 3 * u_value(cfg, m) + math.log(1.0 / cfg.epsilon))


@dataclass(frozen=True)
class RecoveryPlan:
    """Derived parameters the reconstruction map uses for one budget."""

    m: int
    s: int
    r: int
    lam: float
    index_set: IndexSet
    m_tilde: float
    capped: bool

    def __post_init__(self):
        if self.s < 1 or self.r < 1:
            raise ValueError("plan requires s >= 1 and r >= 1")
        upper = lambda_upper_bound(self.s)
        if not 0.0 < self.lam <= upper * (1.0 + 1e-12):
            raise ValueError(f"lam={self.lam} outside admissible interval (0, {upper}]")

    @property
    def n_modes(self) -> int:
        return len(self.index_set)

    def to_json(self) -> str:
        return json.dumps(
            {
                "m": self.m,
                "s": self.s,
                "r": self.r,
                "lambda": self.lam,
                "N": self.n_modes,
                "m_tilde": self.m_tilde,
                "capped": self.capped,
                "prng": PRNG_IDENTITY,
                "indices": [list(n) for n in self.index_set],
            },
            sort_keys=True,
        )


def _sparsity_level(m: int, d: int, cfg: RecoveryConfig) -> int:
    u = u_value(cfg, m)
    log_m = math.log(m)
    inner = math.log(2.0) + u * log_m + (d - 1) * math.log(1.0 + u * log_m)
    denom = cfg.c_prime * (math.log(2.0 * m) ** 2 * inner + math.log(1.0 / cfg.epsilon))
    s = max(int(math.floor(m / denom)), 1)
    return min(s, m)


def plan(m: int, d: int, cfg: RecoveryConfig | None = None) -> RecoveryPlan:
    """Derive the full parameter schedule for budget ``m`` in dimension ``d``.

    Capping never fails: when the planned cross exceeds the configured size
    cap, the order shrinks to the largest feasible value and the plan is
    flagged.
    """
    cfg = cfg or RecoveryConfig()
    if m < 2 or d < 1:
        raise ValueError(f"need m >= 2 and d >= 1, got m={m}, d={d}")
    s = _sparsity_level(m, d, cfg)
    r = max(int(math.ceil(float(s) ** u_value(cfg, m))), 1)
    capped = False
    if hyperbolic_cross_size(d, r) > cfg.max_index_set_size:
        capped = True
        lo, hi = 1, r  # size(1) = 1 <= cap, so lo is always feasible
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if hyperbolic_cross_size(d, mid) <= cfg.max_index_set_size:
                lo = mid
            else:
                hi = mid - 1
        r = lo
    index_set = hyperbolic_cross(d, r, max_size=cfg.max_index_set_size)
    return RecoveryPlan(
        m=m,
        s=s,
        r=r,
        lam=lambda_upper_bound(s),
        index_set=index_set,
        m_tilde=m_tilde(m, cfg),
        capped=capped,
    )


@dataclass(frozen=True)
class RecoveryResult:
    f_sharp: PeriodicFunction
    solver: SolverResult
    plan: RecoveryPlan


def run_recovery(
    samples: SampleSet,
    values: np.ndarray,
    recovery_plan: RecoveryPlan,
    cfg: RecoveryConfig | None = None,
) -> RecoveryResult:
    """Reconstruct from raw sample values, keeping solver diagnostics.

    ``values`` holds the un-normalized function samples ``f(x_i)``; the
    routine forms ``b = values / sqrt(m)``, solves the square-root LASSO on
    the planned index set with the planned weight, and rescales the
    minimizer by ``(2*pi)**(d/2)`` into Fourier coefficients.
    """
    cfg = cfg or RecoveryConfig()
    values = np.asarray(values, dtype=complex)
    if values.shape != (recovery_plan.m,):
        raise ValueError(f"values has shape {values.shape}, expected ({recovery_plan.m},)")
    if samples.size != recovery_plan.m:
        raise ValueError("sample count does not match the plan")
    b = values / math.sqrt(recovery_plan.m)
    op = MeasurementOperator(samples, recovery_plan.index_set, scaled=True)
    result = solve(op, b, recovery_plan.lam, cfg.solver)
    factor = (2.0 * math.pi) ** (samples.dim / 2.0)
    coeffs = {
        n: factor * z
        for n, z in zip(recovery_plan.index_set, result.z_sharp)
        if z != 0.0
    }
    return RecoveryResult(
        f_sharp=PeriodicFunction(samples.dim, coeffs),
        solver=result,
        plan=recovery_plan,
    )


def reconstruct(
    samples: SampleSet,
    values: np.ndarray,
    recovery_plan: RecoveryPlan,
    cfg: RecoveryConfig | None = None,
) -> PeriodicFunction:
    """Smoothness-blind reconstruction map; see :func:`run_recovery`."""
    return run_recovery(samples, values, recovery_plan, cfg).f_sharp


def theoretical_rate(m_tilde_value: float, cls: SmoothnessClass) -> float:
    """Constant-free error rate at effective budget ``m_tilde_value``.

    ``(log^{p-1}(mt)/mt)**h`` for the product family with minimum exponent
    ``h`` of multiplicity ``p``; ``mt**-g`` for the sum family with harmonic
    exponent ``g``.
    """
    if m_tilde_value < 2.0:
        raise ValueError(f"need m_tilde >= 2, got {m_tilde_value}")
    if isinstance(cls, AnisotropyMixed):
        h = cls.min_exponent
        p = cls.min_multiplicity
        return float((math.log(m_tilde_value) ** (p - 1) / m_tilde_value) ** h)
    if isinstance(cls, AnisotropySum):
        return float(m_tilde_value ** -cls.harmonic_exponent)
    raise TypeError(f"unknown smoothness class {type(cls)!r}")
