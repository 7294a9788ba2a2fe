import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anisorec.seqtools import (
    best_s_term_error,
    lq_norm,
    rearrange,
    stechkin_rhs,
    weak_lorentz_norm,
)
from conftest import brute_best_s_term

complex_values = st.complex_numbers(
    min_magnitude=0.0, max_magnitude=1e6, allow_nan=False, allow_infinity=False
)


class TestRearrange:
    def test_mixed_signs_and_complex(self):
        out = rearrange({1: 3, 2: -1, 3: 2j})
        assert np.allclose(out, [3.0, 2.0, 1.0])

    def test_empty(self):
        assert rearrange({}).size == 0

    def test_ties_preserved(self):
        assert np.allclose(rearrange({1: 1, 2: 1}), [1.0, 1.0])

    @given(st.lists(complex_values, max_size=30))
    def test_preserves_lq_norms(self, values):
        seq = dict(enumerate(values))
        for q in (0.5, 1.0, 2.0, math.inf):
            assert lq_norm(seq, q) == pytest.approx(lq_norm(list(rearrange(seq)), q), abs=1e-9, rel=1e-9)


class TestLqNorm:
    def test_examples(self):
        assert lq_norm([3, 4], 2) == pytest.approx(5.0)
        assert lq_norm([3, 4], math.inf) == 4.0
        assert lq_norm([], 1) == 0.0
        assert lq_norm([], math.inf) == 0.0

    def test_rejects_bad_q(self):
        with pytest.raises(ValueError):
            lq_norm([1.0], 0.0)


class TestWeakLorentz:
    def test_critical_decay_has_unit_norm(self):
        c = [i**-0.5 for i in range(1, 101)]
        assert weak_lorentz_norm(c, 2, 0) == pytest.approx(1.0, abs=1e-12)

    def test_single_entry(self):
        assert weak_lorentz_norm([5], 1, 3) == pytest.approx(5.0)

    def test_flat_pair(self):
        assert weak_lorentz_norm([1, 1], 2, 0) == pytest.approx(math.sqrt(2.0))

    def test_a_zero_reduces_to_weak_p(self):
        vals = [4.0, 2.0, 1.0, 0.5]
        mags = rearrange(vals)
        expect = max(m * (i + 1) ** (1 / 1.5) for i, m in enumerate(mags))
        assert weak_lorentz_norm(vals, 1.5, 0) == pytest.approx(expect)


class TestBestSTerm:
    def test_examples(self):
        assert best_s_term_error([3, 1, 2], 1, 2) == pytest.approx(math.sqrt(5.0))
        assert best_s_term_error([3, 1, 2], 2, 1) == pytest.approx(1.0)
        assert best_s_term_error([3, 1, 2], 0, math.inf) == pytest.approx(3.0)

    def test_zero_beyond_support(self):
        assert best_s_term_error([3, 1, 2], 3, 2) == 0.0
        assert best_s_term_error([3, 1, 2], 10, 2) == 0.0

    def test_matches_exhaustive_oracle(self, rng):
        for _ in range(40):
            n = int(rng.integers(1, 11))
            values = rng.normal(size=n) + 1j * rng.normal(size=n)
            seq = dict(enumerate(values))
            for s in range(4):
                for q in (1.0, 2.0):
                    assert best_s_term_error(seq, s, q) == pytest.approx(
                        brute_best_s_term(values, s, q), abs=1e-12
                    )

    @given(st.lists(complex_values, max_size=20), st.integers(0, 21))
    def test_monotone_in_s(self, values, s):
        for q in (1.0, 2.0, math.inf):
            assert best_s_term_error(values, s + 1, q) <= best_s_term_error(values, s, q) + 1e-12
            assert best_s_term_error(values, s, q) <= lq_norm(values, q) + 1e-12


class TestStechkin:
    def test_all_clamps_active(self):
        assert stechkin_rhs(0, 1, 2, 0, 1.0) == pytest.approx(1.0)

    def test_real_s_example(self):
        # direct evaluation at s = e^2: (e^2)^(1/2 - 1) * (log e^2)^1 = 2/e
        assert stechkin_rhs(math.e**2, 1, 2, 1, 1.0) == pytest.approx(0.7357588823428847)

    def test_q_infinity(self):
        assert stechkin_rhs(4, 1, math.inf, 0, 3.0) == pytest.approx(0.75)

    def test_rejects_p_ge_q(self):
        with pytest.raises(ValueError):
            stechkin_rhs(1, 2.0, 2.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            stechkin_rhs(1, 3.0, 2.0, 0.0, 1.0)

    @pytest.mark.parametrize("p,q,a", [(1.0, 2.0, 0.0), (1.0, 2.0, 1.0), (2 / 3, 1.0, 0.5)])
    def test_forward_ratio_bounded(self, p, q, a):
        # synthetic worst-case sequence with unit weak Lorentz norm
        n = 20000
        i = np.arange(1, n + 1, dtype=float)
        c = i ** (-1.0 / p) * np.maximum(1.0, np.log(i)) ** (a / p)
        mags = np.sort(c)[::-1]
        powers = mags**q
        tails = np.concatenate([np.cumsum(powers[::-1])[::-1], [0.0]])
        worst = 0.0
        for s in range(0, 10001):
            sigma = tails[s] ** (1.0 / q)
            worst = max(worst, sigma / stechkin_rhs(s, p, q, a, 1.0))
        assert worst <= 100.0

    @given(st.lists(complex_values, min_size=1, max_size=60))
    @settings(max_examples=50)
    def test_converse_direction(self, values):
        p, q, a = 1.0, 2.0, 0.5
        best_c = 0.0
        for s in range(len(values)):
            denom = stechkin_rhs(s, p, q, a, 1.0)
            best_c = max(best_c, best_s_term_error(values, s, q) / denom)
        assert weak_lorentz_norm(values, p, a) <= 2 ** (1 / p + 1 / q) * best_c + 1e-9
