import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rel
from hypunivalent.errors import DivergenceError, DomainError, PoleError, RangeError
from hypunivalent.numerics import (ConvergenceClass, EvalConfig, EvalResult,
                                   SeriesParams, convergence_class, gamma_quotient,
                                   gamma_ratio, gauss2f1_at_minus1,
                                   gauss2f1_terminating_at_minus1, gen_binomial,
                                   log_pochhammer, pfq, pochhammer, sum_accelerated,
                                   sum_series)


class TestPochhammer:
    def test_examples(self):
        assert pochhammer(2, 3) == 24
        assert pochhammer(-7.3, 0) == 1
        assert pochhammer(1, 5) == 120

    def test_negative_integer_base_hits_zero(self):
        assert pochhammer(-2, 3) == 0.0
        assert pochhammer(-2, 2) == 2.0

    def test_overflow_is_range_error(self):
        with pytest.raises(RangeError):
            pochhammer(1e3, 400)

    def test_rejects_negative_order(self):
        with pytest.raises(DomainError):
            pochhammer(1.0, -1)

    @given(st.floats(-50, 50, allow_nan=False), st.integers(0, 60))
    def test_recurrence(self, a, n):
        lhs = pochhammer(a, n + 1)
        rhs = pochhammer(a, n) * (a + n)
        assert lhs == pytest.approx(rhs, rel=4e-16 * (n + 2), abs=1e-300)

    def test_modulus_bound_for_complex_arguments(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            a = complex(rng.normal(0, 3), rng.normal(0, 3))
            n = int(rng.integers(0, 31))
            direct = 1 + 0j
            for k in range(n):
                direct *= a + k
            assert pochhammer(abs(a), n) >= abs(direct) * (1 - 1e-12)


class TestLogPochhammer:
    def test_examples(self, oracle):
        assert log_pochhammer(1, 0) == 0.0
        assert log_pochhammer(2, 3) == pytest.approx(math.log(24), rel=1e-14)
        assert log_pochhammer(0.5, 10) == pytest.approx(oracle["log_pochhammer_half_10"], rel=1e-12)
        direct = math.prod(0.5 + k for k in range(10))
        assert math.exp(log_pochhammer(0.5, 10)) == pytest.approx(direct, rel=1e-12)

    @pytest.mark.parametrize("a", [0.0, -1.5])
    def test_domain(self, a):
        with pytest.raises(DomainError):
            log_pochhammer(a, 3)

    @given(st.floats(1e-3, 20), st.integers(0, 50))
    def test_agrees_with_linear(self, a, n):
        assert math.exp(log_pochhammer(a, n)) == pytest.approx(pochhammer(a, n), rel=1e-10)


class TestGammaRatio:
    def test_examples(self):
        assert gamma_ratio([3.7], [3.7]) == 1.0
        assert gamma_ratio([5], [4]) == pytest.approx(4, rel=1e-14)
        assert gamma_ratio([4, 2], [3, 3]) == pytest.approx(1.5, rel=1e-14)

    @pytest.mark.parametrize("args", [([0.0], [1.0]), ([1.0], [-2.5])])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            gamma_ratio(*args)

    def test_quotient_handles_negative_arguments(self):
        # Gamma(-0.5)/Gamma(1.5) = (-2 sqrt(pi)) / (sqrt(pi)/2) = -4
        assert gamma_quotient(-0.5, 1.5) == pytest.approx(-4.0, rel=1e-14)
        with pytest.raises(PoleError):
            gamma_quotient(-2.0, 1.0)


def test_gen_binomial_examples():
    assert gen_binomial(1, 2) == 1
    assert gen_binomial(2, 1) == -2
    assert gen_binomial(0.5, 3) == pytest.approx(-0.3125, rel=1e-15)
    assert gen_binomial(-3, 4) == 0.0


class TestTerminatingGauss:
    def test_examples(self, oracle):
        assert gauss2f1_terminating_at_minus1(0, 12.0, -0.5) == 1.0
        assert gauss2f1_terminating_at_minus1(1, 2, 3) == pytest.approx(5 / 3, rel=1e-15)
        assert gauss2f1_terminating_at_minus1(3, 1.5, 4.0) == pytest.approx(
            oracle["terminating_3_1.5_4"], rel=1e-14)

    def test_pole(self):
        with pytest.raises(PoleError):
            gauss2f1_terminating_at_minus1(3, 1.0, -1.0)

    @given(st.integers(0, 25), st.floats(0.1, 10), st.floats(0.1, 10))
    def test_matches_generic_series(self, n, b, c):
        direct = gauss2f1_terminating_at_minus1(n, b, c)
        generic = pfq(SeriesParams([-n, b], [c]), -1.0)
        assert generic.converged
        assert rel(direct, generic.value) <= 1e-12


class TestGaussAtMinusOne:
    def test_a_zero(self):
        assert gauss2f1_at_minus1(0, 3.3, 1.7).value == 1.0

    def test_log_two(self, oracle):
        res = gauss2f1_at_minus1(1, 1, 2)
        assert res.converged
        assert rel(res.value, oracle["gauss_minus1_1_1_2"]) <= 1e-12

    def test_high_precision_oracle(self, oracle):
        res = gauss2f1_at_minus1(0.5, 0.5, 1.5)
        assert rel(res.value, oracle["gauss_minus1_0.5_0.5_1.5"]) <= 1e-12

    def test_abel_sum_of_oscillating_series(self):
        assert gauss2f1_at_minus1(1, 2, 2).value == pytest.approx(0.5, rel=1e-13)

    def test_classically_divergent_case(self, oracle):
        res = gauss2f1_at_minus1(2.5, 0.7, 1.3)
        assert rel(res.value, oracle["gauss_minus1_2.5_0.7_1.3"]) <= 1e-12

    def test_pole(self):
        with pytest.raises(PoleError):
            gauss2f1_at_minus1(1, 1, -3)


class TestPfq:
    def test_zero_argument_is_exactly_one(self):
        res = pfq(SeriesParams([3, 4, 5], [0.5]), 0.0)
        assert res == EvalResult(1.0, 1, True, 0.0)

    def test_geometric(self):
        res = pfq(SeriesParams([1], []), 0.5)
        assert res.converged
        assert res.value == pytest.approx(2.0, rel=1e-12)

    def test_cubic_split_at_one(self, oracle):
        p = SeriesParams([1, 1 / 3, 2 / 3, 1], [5 / 3, 2, 7 / 3])
        res = pfq(p, 1.0)
        assert res.converged
        assert rel(res.value, oracle["cubic_1_1_5"]) <= 1e-12

    @pytest.mark.parametrize("key,params,z", [
        ("pfq_alt_0.5_0.5_1.5", ([0.5, 0.5], [1.5]), -1.0),
        ("pfq_2f1_0.3_0.2_0.1_m1", ([0.3, 0.2], [0.1]), -1.0),
        ("pfq_2f1_0.5_0.7_0.4_m1", ([0.5, 0.7], [0.4]), -1.0),
        ("pfq_3f2_half", ([1.5, 2.5, 0.5], [3.5, 1.25]), 0.5),
        ("pfq_1f1_m1", ([2.5], [0.5]), -1.0),
    ])
    def test_against_oracle(self, oracle, key, params, z):
        res = pfq(SeriesParams(*params), z)
        assert rel(res.value, oracle[key]) <= 1e-10

    def test_conditional_is_flagged(self):
        p = SeriesParams([0.5, 0.7], [0.4])
        assert convergence_class(p, -1) is ConvergenceClass.CONDITIONAL

    def test_divergent_raises(self):
        with pytest.raises(DivergenceError):
            pfq(SeriesParams([2, 2], [1]), 1.0)

    def test_terminating_divergent_class_still_sums(self):
        # finite polynomial: (1 - z)^3 at z = 1 is 0
        assert pfq(SeriesParams([-3, 1], [1]), 1.0).value == 0.0

    def test_argument_range(self):
        with pytest.raises(DomainError):
            pfq(SeriesParams([1], [2]), 1.5)

    def test_bad_denominator(self):
        with pytest.raises(PoleError):
            SeriesParams([1], [-2])

    def test_parameter_count_bound(self):
        with pytest.raises(DomainError):
            SeriesParams([1] * 9, [])

    def test_unconverged_uses_whole_budget(self):
        cfg = EvalConfig(max_terms=50)
        res = pfq(SeriesParams([1], []), 0.999, cfg)
        assert not res.converged
        assert res.terms_used == cfg.max_terms

    def test_slow_unit_argument_needs_tail(self):
        # excess 0.3: sum_n (1/2)_n (1)_n/((2.8)_n n!) converges like n^-1.3
        p = SeriesParams([0.5, 1.0], [1.8])
        res = pfq(p, 1.0)
        exact = math.gamma(1.8) * math.gamma(0.3) / (math.gamma(1.3) * math.gamma(0.8))
        assert res.converged
        assert rel(res.value, exact) <= 1e-11


class TestTruncationRule:
    def test_respects_min_terms(self):
        terms = [1.0] + [1e-30] * 50
        res = sum_series(terms, EvalConfig(min_terms=8))
        assert res.terms_used == 8 and res.converged

    def test_transient_small_terms_do_not_stop(self):
        # two tiny terms then a large one: needs three in a row
        terms = [1.0] * 9 + [1e-20, 1e-20, 0.5] + [1e-20] * 3
        res = sum_series(terms, EvalConfig())
        assert res.value == pytest.approx(9.5)
        assert res.terms_used == 15

    def test_finite_sequence_is_exact(self):
        res = sum_series([1.0, 2.0, 3.0], EvalConfig())
        assert res.converged and res.error_estimate == 0.0 and res.value == 6.0

    def test_accelerated_divergent_alternating(self):
        # sum (-2)^n "=" 1/3 as the generalized sum
        gen = ((-2.0) ** n for n in range(200))
        res = sum_accelerated(gen, EvalConfig())
        assert res.value == pytest.approx(1 / 3, rel=1e-12)


class TestConfig:
    def test_defaults(self):
        cfg = EvalConfig()
        assert (cfg.rel_tol, cfg.min_terms, cfg.max_terms, cfg.abs_slack) == (1e-12, 8, 100000, 1e-9)

    @pytest.mark.parametrize("kw", [dict(rel_tol=0), dict(rel_tol=1.0), dict(min_terms=10, max_terms=5),
                                    dict(abs_slack=-1e-3), dict(max_terms=0)])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            EvalConfig(**kw)

    def test_frozen(self):
        with pytest.raises(AttributeError):
            EvalConfig().rel_tol = 1e-3


class TestConvergenceClass:
    def test_p_le_q(self):
        for z in (-1, -0.3, 0, 0.9, 1):
            assert convergence_class(SeriesParams([1, 2], [3, 4]), z) is ConvergenceClass.ABSOLUTE

    def test_unit_argument(self):
        assert convergence_class(SeriesParams([1, 1], [3]), 1) is ConvergenceClass.ABSOLUTE
        assert convergence_class(SeriesParams([2, 2], [1]), 1) is ConvergenceClass.DIVERGENT

    def test_conditional_only_at_minus_one(self):
        p = SeriesParams([1, 1], [1.5])
        assert convergence_class(p, -1) is ConvergenceClass.CONDITIONAL
        assert convergence_class(p, 1) is ConvergenceClass.DIVERGENT
