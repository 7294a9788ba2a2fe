r"""Random sampling, Fourier measurement operators and recovery certificates.

Samples are i.i.d. uniform on ``[-pi, pi)^d``.  The measurement matrix for
an index set ``Lambda`` has rows indexed by sample points and columns by
frequencies; in scaled form every entry is ``exp(i n.x_i) / sqrt(m)``, so
all entries have modulus exactly ``1/sqrt(m)``.  The operator is applied
matrix-free; a dense copy is materialized only for small systems (the
brute-force restricted-isometry check and debugging exports).

The certificate evaluator turns a null-space-property constant pair
``(rho, tau)`` into the closed-form error bounds for square-root LASSO
solutions.  The standard bridge is used throughout: a restricted isometry
constant ``delta_{2s} <= 1/4`` (verified here by enumeration at tiny sizes)
yields the property with ``rho = sqrt(2)/3`` and ``tau = 2*sqrt(5)/3``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .indexsets import IndexSet
from .rng import PRNG_IDENTITY, make_rng
from .sobolev import PeriodicFunction, evaluate_grid

__all__ = [
    "SampleSet",
    "MeasurementOperator",
    "draw_uniform_samples",
    "sample_vector",
    "apply",
    "adjoint",
    "truncation_error_vector",
    "rip_constant_bruteforce",
    "srlasso_error_certificate",
    "recovery_constants",
    "lambda_upper_bound",
    "RNSP_RHO",
    "RNSP_TAU",
    "DENSE_LIMIT",
]

# rNSP constants inherited from the delta_{2s} <= 1/4 restricted isometry bridge
RNSP_RHO = math.sqrt(2.0) / 3.0
RNSP_TAU = 2.0 * math.sqrt(5.0) / 3.0

# dense materialization allowed up to this many matrix entries
DENSE_LIMIT = 1_000_000

# row-chunked products keep at most this many transient entries
_CHUNK_ENTRIES = 4_000_000


@dataclass(frozen=True)
class SampleSet:
    """``m`` sample points in ``[-pi, pi)^d``, immutable after creation.

    ``seed`` records the generator key when the set came from
    :func:`draw_uniform_samples`; hand-built point sets carry ``None``.
    """

    dim: int
    points: np.ndarray = field(compare=False)
    seed: int | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.dim or pts.shape[0] < 1:
            raise ValueError(f"points must be (m>=1, {self.dim}), got {pts.shape}")
        if np.any(pts < -math.pi) or np.any(pts >= math.pi):
            raise ValueError("coordinates must lie in [-pi, pi)")
        pts = pts.copy()
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def to_json(self) -> str:
        import json

        return json.dumps(
            {
                "dim": self.dim,
                "seed": self.seed,
                "prng": PRNG_IDENTITY if self.seed is not None else None,
                "points": self.points.tolist(),
            }
        )


def draw_uniform_samples(m: int, d: int, seed: int) -> SampleSet:
    """``m`` i.i.d. uniform points on ``[-pi, pi)^d`` from the seeded generator."""
    if m < 1 or d < 1:
        raise ValueError("need m >= 1 and d >= 1")
    rng = make_rng(seed)
    pts = rng.uniform(-math.pi, math.pi, size=(m, d))
    return SampleSet(dim=d, points=pts, seed=int(seed))


def sample_vector(f: PeriodicFunction, samples: SampleSet) -> np.ndarray:
    """Normalized sample vector ``(f(x_i) / sqrt(m))_i``."""
    if f.dim != samples.dim:
        raise ValueError("dimension mismatch")
    return evaluate_grid(f, samples.points) / math.sqrt(samples.size)


@dataclass(frozen=True)
class MeasurementOperator:
    """Subsampled Fourier operator on an index set, applied matrix-free.

    ``scaled=True`` gives the unit-modulus form with entries
    ``exp(i n.x_i)/sqrt(m)``; ``scaled=False`` divides by ``(2*pi)**(d/2)``
    so columns sample the orthonormal basis functions directly.
    """

    samples: SampleSet
    indexset: IndexSet
    scaled: bool = True

    def __post_init__(self):
        if self.samples.dim != self.indexset.dim:
            raise ValueError("sample and index-set dimensions differ")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.samples.size, len(self.indexset))

    @property
    def _prefactor(self) -> float:
        m, _ = self.shape
        base = 1.0 / math.sqrt(m)
        if not self.scaled:
            base *= (2.0 * math.pi) ** (-self.samples.dim / 2.0)
        return base

    @cached_property
    def _cached_phase(self) -> np.ndarray | None:
        m, n = self.shape
        if m * n > _CHUNK_ENTRIES:
            return None
        return np.exp(1j * (self.samples.points @ self.indexset.as_array().T))

    def _phase_chunks(self):
        cached = self._cached_phase
        if cached is not None:
            yield 0, self.samples.size, cached
            return
        m, n = self.shape
        step = max(1, _CHUNK_ENTRIES // max(n, 1))
        freqs = self.indexset.as_array().T
        for lo in range(0, m, step):
            hi = min(m, lo + step)
            yield lo, hi, np.exp(1j * (self.samples.points[lo:hi] @ freqs))

    def apply(self, z: np.ndarray) -> np.ndarray:
        """Forward product with a coefficient vector of length ``N``."""
        z = np.asarray(z, dtype=complex)
        m, n = self.shape
        if z.shape != (n,):
            raise ValueError(f"vector has shape {z.shape}, expected ({n},)")
        out = np.empty(m, dtype=complex)
        for lo, hi, block in self._phase_chunks():
            out[lo:hi] = block @ z
        return out * self._prefactor

    def adjoint(self, w: np.ndarray) -> np.ndarray:
        """Conjugate-transpose product with a sample vector of length ``m``."""
        w = np.asarray(w, dtype=complex)
        m, n = self.shape
        if w.shape != (m,):
            raise ValueError(f"vector has shape {w.shape}, expected ({m},)")
        out = np.zeros(n, dtype=complex)
        for lo, hi, block in self._phase_chunks():
            out += block.conj().T @ w[lo:hi]
        return out * self._prefactor

    def norm_bound(self) -> float:
        """Provable upper bound on the spectral norm."""
        m, n = self.shape
        return math.sqrt(n) * self._prefactor * math.sqrt(m)

    def dense(self) -> np.ndarray:
        """Dense matrix copy; refused beyond ``DENSE_LIMIT`` entries."""
        m, n = self.shape
        if m * n > DENSE_LIMIT:
            raise ValueError(f"dense materialization of {m}x{n} exceeds {DENSE_LIMIT} entries")
        out = np.empty((m, n), dtype=complex)
        for lo, hi, block in self._phase_chunks():
            out[lo:hi] = block
        return out * self._prefactor

    def export_csv(self, path) -> None:
        """Write the dense matrix as CSV (re+im pairs) for external inspection."""
        mat = self.dense()
        cols: list[np.ndarray] = []
        for j in range(mat.shape[1]):
            cols.extend([mat[:, j].real, mat[:, j].imag])
        np.savetxt(path, np.column_stack(cols), delimiter=",")


def apply(op: MeasurementOperator, z: np.ndarray) -> np.ndarray:
    return op.apply(z)


def adjoint(op: MeasurementOperator, w: np.ndarray) -> np.ndarray:
    return op.adjoint(w)


def truncation_error_vector(
    f: PeriodicFunction, samples: SampleSet, indexset: IndexSet
) -> np.ndarray:
    """Normalized samples of the part of ``f`` outside ``indexset``.

    Exactly zero when the support of ``f`` lies inside the set, and the
    residual ``v`` in the decomposition ``b = A f_Lambda + v`` otherwise.
    """
    return sample_vector(f.restricted(indexset, complement=True), samples)


def rip_constant_bruteforce(op: MeasurementOperator, s: int) -> float:
    """Restricted isometry constant ``delta_s`` by exhaustive enumeration.

    Scans every size-``s`` column subset of the scaled operator and records
    the worst spectral deviation of the Gram block from the identity.  Only
    feasible at tiny sizes; refuses ``N > 16`` or ``s > 3``.
    """
    m, n = op.shape
    if n > 16 or s > 3:
        raise ValueError(f"brute-force restricted isometry capped at N<=16, s<=3; got N={n}, s={s}")
    if not 1 <= s <= n:
        raise ValueError(f"need 1 <= s <= N = {n}")
    mat = MeasurementOperator(op.samples, op.indexset, scaled=True).dense()
    delta = 0.0
    for subset in itertools.combinations(range(n), s):
        block = mat[:, subset]
        eigs = np.linalg.eigvalsh(block.conj().T @ block)
        delta = max(delta, eigs[-1] - 1.0, 1.0 - eigs[0])
    return float(delta)


def recovery_constants(rho: float, tau: float) -> tuple[float, float, float, float]:
    """Closed-form constants of the stable-recovery bounds for ``(rho, tau)``."""
    if not 0.0 < rho < 1.0:
        raise ValueError(f"need 0 < rho < 1, got {rho}")
    if tau <= 0.0:
        raise ValueError(f"need tau > 0, got {tau}")
    c1 = 2.0 * (1.0 + rho) / (1.0 - rho)
    c2 = 4.0 * tau / (1.0 - rho)
    c3 = 2.0 * (1.0 + rho) ** 2 / (1.0 - rho)
    c4 = 2.0 * tau * (3.0 + rho) / (1.0 - rho)
    return c1, c2, c3, c4


def lambda_upper_bound(s: int, rho: float = RNSP_RHO, tau: float = RNSP_TAU) -> float:
    """Largest admissible regularization weight at sparsity ``s``."""
    if s < 1:
        raise ValueError(f"need s >= 1, got {s}")
    d_const = (1.0 + rho) / ((3.0 + rho) * tau)
    return d_const / math.sqrt(s)


def srlasso_error_certificate(
    rho: float,
    tau: float,
    lam: float,
    s: int,
    sigma_s1: float,
    h_norm: float,
) -> tuple[float, float]:
    """Certified ``(l1, l2)`` error bounds for a square-root LASSO minimizer.

    ``sigma_s1`` is the best s-term error of the target in ell^1 and
    ``h_norm`` the 2-norm of the measurement perturbation.  Raises when the
    weight lies outside its admissible interval ``(0, D/sqrt(s)]``.
    """
    c1, c2, c3, c4 = recovery_constants(rho, tau)
    if s < 1:
        raise ValueError(f"need s >= 1, got {s}")
    if sigma_s1 < 0 or h_norm < 0:
        raise ValueError("sigma_s1 and h_norm must be >= 0")
    upper = lambda_upper_bound(s, rho, tau)
    if not 0.0 < lam <= upper * (1.0 + 1e-12):
        raise ValueError(f"lambda={lam} outside admissible interval (0, {upper}]")
    sqrt_s = math.sqrt(s)
    bound_l1 = c1 * sigma_s1 + 0.5 * (c1 / lam + c2 * sqrt_s) * h_norm
    bound_l2 = c3 * sigma_s1 / sqrt_s + 0.5 * (c3 / (sqrt_s * lam) + c4) * h_norm
    return bound_l1, bound_l2
