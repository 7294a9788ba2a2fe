"""Shared brute-force oracles for the test suite.

These deliberately avoid the library's recursive/sorted code paths: counting
runs over explicit coordinate boxes, best s-term errors minimize over all
supports, and the square-root LASSO oracle is exact blockwise coordinate
descent with a golden-section line search.
"""

import itertools
import math

import numpy as np
import pytest


def box_indices(ranges):
    return itertools.product(*ranges)


def brute_hyperbolic_cross(d, r):
    """Box enumeration of {n : prod(1+|n_j|) <= r}."""
    bound = int(math.ceil(r)) + 1
    out = set()
    for n in box_indices([range(-bound, bound + 1)] * d):
        if math.prod(1 + abs(v) for v in n) <= r:
            out.add(n)
    return out


def brute_count_mixed(d, r, alpha, positive_only=False):
    """Box count of {n : prod (1+|n_j|)**alpha_j < r} with per-axis boxes."""
    if r <= 1:
        return 0
    ranges = []
    for a in alpha:
        bound = int(math.ceil(r ** (1.0 / a))) + 1
        ranges.append(range(0, bound + 1) if positive_only else range(-bound, bound + 1))
    count = 0
    for n in box_indices(ranges):
        w = 1.0
        for v, a in zip(n, alpha):
            w *= (1.0 + abs(v)) ** a
        if w < r:
            count += 1
    return count


def brute_count_sum(d, r, beta):
    """Box count of {n : sum |n_j|**beta_j < r} with per-axis boxes."""
    if r <= 0:
        return 0
    ranges = []
    for b in beta:
        bound = int(math.ceil(r ** (1.0 / b))) + 1
        ranges.append(range(-bound, bound + 1))
    count = 0
    for n in box_indices(ranges):
        if sum(abs(v) ** b for v, b in zip(n, beta)) < r:
            count += 1
    return count


def brute_best_s_term(values, s, q):
    """Minimize ||c - w||_q over all supports of size <= s, exhaustively."""
    values = list(values)
    n = len(values)
    best = math.inf
    for keep in itertools.combinations(range(n), min(s, n)):
        dropped = [abs(values[i]) for i in range(n) if i not in keep]
        if math.isinf(q):
            err = max(dropped, default=0.0)
        else:
            err = sum(v**q for v in dropped) ** (1.0 / q) if dropped else 0.0
        best = min(best, err)
    return best


_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(fn, lo, hi, tol=1e-13, iters=200):
    a, b = lo, hi
    c = b - _GOLD * (b - a)
    d = a + _GOLD * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if b - a < tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLD * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLD * (b - a)
            fd = fn(d)
    return (a + b) / 2.0


def srlasso_bruteforce(matrix, b, lam, sweeps=4000):
    """Exact block coordinate descent on the real-imaginary parametrization.

    Each complex coordinate is minimized globally: the optimal phase aligns
    with the column-residual correlation, and the magnitude is found by a
    fine golden-section search on the resulting 1-D convex profile.  Valid
    as an oracle when the optimal residual is nonzero (the caller asserts
    this); returns (z, objective).
    """
    m, n = matrix.shape
    z = np.zeros(n, dtype=complex)
    resid = b.astype(complex).copy()
    col_sq = np.sum(np.abs(matrix) ** 2, axis=0)
    prev = math.inf
    for _ in range(sweeps):
        for i in range(n):
            col = matrix[:, i]
            rho = resid + col * z[i]
            corr = np.vdot(col, rho)
            amp = abs(corr)
            if amp == 0.0:
                w = 0.0
            else:
                phase = corr / amp
                tmax = amp / col_sq[i]

                def profile(t):
                    return lam * t + np.linalg.norm(rho - col * (phase * t))

                t = _golden_min(profile, 0.0, tmax)
                if profile(0.0) <= profile(t):
                    t = 0.0
                w = phase * t
            z[i] = w
            resid = rho - col * w
        obj = lam * float(np.sum(np.abs(z))) + float(np.linalg.norm(resid))
        if abs(prev - obj) < 1e-15 * max(1.0, obj):
            break
        prev = obj
    final = lam * float(np.sum(np.abs(z))) + float(np.linalg.norm(b - matrix @ z))
    return z, final


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)
