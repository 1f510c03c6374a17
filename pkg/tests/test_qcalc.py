import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qeuler.errors import DomainError, NonConvergenceError, PoleError
from qeuler.qcalc import (
    E_q,
    TruncationPolicy,
    e_q,
    q_binomial,
    q_binomial_general,
    q_factorial,
    q_number,
    q_pochhammer,
    q_pochhammer_infinite,
    q_pochhammer_real_order,
)


def test_truncation_policy_validation():
    TruncationPolicy()
    with pytest.raises(DomainError):
        TruncationPolicy(tol=0.0)
    with pytest.raises(DomainError):
        TruncationPolicy(tol=1.5)
    with pytest.raises(DomainError):
        TruncationPolicy(max_terms=0)


class TestQNumber:
    def test_zero(self):
        assert q_number(0, 0.5) == 0.0

    def test_two(self):
        assert q_number(2, 0.5) == pytest.approx(1.5, rel=1e-15)

    def test_geometric_sum(self):
        # direct sum oracle: 1 + 0.9 + 0.81
        assert q_number(3, 0.9) == pytest.approx(2.71, rel=1e-14)

    def test_classical_limit(self):
        for n in range(1, 13):
            assert q_number(n, 1 - 1e-6) == pytest.approx(n, abs=1e-4)

    def test_domain(self):
        with pytest.raises(DomainError):
            q_number(2, 1.0)
        with pytest.raises(DomainError):
            q_number(2, 0.0)


class TestQFactorial:
    def test_empty_product(self):
        assert q_factorial(0, 0.5) == 1.0

    def test_small(self):
        # [1]*[2] = 1 * 1.5 and 1 * 1.5 * 1.75 (exact dyadic values)
        assert q_factorial(2, 0.5) == pytest.approx(1.5, rel=1e-15)
        assert q_factorial(3, 0.5) == pytest.approx(2.625, rel=1e-15)

    def test_product_of_q_numbers(self):
        q = 0.7
        for n in range(8):
            direct = math.prod(q_number(k, q) for k in range(1, n + 1))
            assert q_factorial(n, q) == pytest.approx(direct, rel=1e-13)

    def test_pochhammer_consistency(self):
        for q in (0.1, 0.5, 0.9, 0.99):
            for n in range(13):
                assert q_factorial(n, q) == pytest.approx(
                    q_pochhammer(q, q, n) / (1 - q) ** n, rel=1e-13
                )

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            q_factorial(-1, 0.5)


class TestQPochhammer:
    def test_empty(self):
        assert q_pochhammer(0.3, 0.5, 0) == 1.0

    def test_two_factors(self):
        assert q_pochhammer(0.5, 0.5, 2) == pytest.approx(0.375, rel=1e-15)

    def test_unit_argument_vanishes(self):
        for n in (1, 3, 7):
            assert q_pochhammer(1.0, 0.7, n) == 0.0

    def test_complex(self):
        val = q_pochhammer(0.3 + 0.2j, 0.5, 3)
        direct = (1 - (0.3 + 0.2j)) * (1 - (0.3 + 0.2j) * 0.5) * (1 - (0.3 + 0.2j) * 0.25)
        assert val == pytest.approx(direct, rel=1e-14)

    def test_against_mpmath(self):
        for a in (-1.2, 0.4, 2.5):
            for q in (0.3, 0.8):
                for n in (0, 1, 5, 11):
                    assert q_pochhammer(a, q, n) == pytest.approx(
                        float(mpmath.qp(a, q, n)), rel=1e-13
                    )


class TestQPochhammerInfinite:
    def test_zero_argument(self):
        assert q_pochhammer_infinite(0.0, 0.5) == 1.0

    def test_unit_argument(self):
        assert q_pochhammer_infinite(1.0, 0.5) == 0.0

    def test_long_product_oracle(self):
        # direct 200-factor product
        direct = math.prod(1 - 0.5 * 0.5**k for k in range(200))
        assert q_pochhammer_infinite(0.5, 0.5) == pytest.approx(direct, rel=1e-13)

    def test_against_mpmath(self):
        for a in (-0.8, 0.25, 0.9):
            for q in (0.2, 0.6, 0.95):
                assert q_pochhammer_infinite(a, q) == pytest.approx(
                    float(mpmath.qp(a, q)), rel=1e-12
                )

    def test_complex_against_mpmath(self):
        val = q_pochhammer_infinite(0.4 + 0.3j, 0.6)
        ref = complex(mpmath.qp(mpmath.mpc(0.4, 0.3), 0.6))
        assert val == pytest.approx(ref, rel=1e-12)

    def test_nonconvergence_cap(self):
        with pytest.raises(NonConvergenceError):
            q_pochhammer_infinite(0.5, 1 - 1e-6, TruncationPolicy(max_terms=100))


class TestQPochhammerRealOrder:
    def test_order_zero(self):
        assert q_pochhammer_real_order(0.4, 0.5, 0.0) == pytest.approx(1.0, rel=1e-13)

    def test_integer_order_consistency(self):
        assert q_pochhammer_real_order(0.3, 0.5, 2) == pytest.approx(
            q_pochhammer(0.3, 0.5, 2), rel=1e-12
        )
        for a in (-1.5, 0.7):
            for alpha in (1, 3, 6):
                assert q_pochhammer_real_order(a, 0.6, alpha) == pytest.approx(
                    q_pochhammer(a, 0.6, alpha), rel=1e-12
                )

    def test_index_addition(self):
        # (a;q)_{1.5} (a q^{1.5};q)_{0.5} = (a;q)_2
        a, q = 0.3, 0.5
        lhs = q_pochhammer_real_order(a, q, 1.5) * q_pochhammer_real_order(
            a * q**1.5, q, 0.5
        )
        assert lhs == pytest.approx(q_pochhammer(a, q, 2), rel=1e-12)

    def test_pole(self):
        # a q^alpha = q^{-1} makes the denominator product vanish
        q = 0.5
        with pytest.raises(PoleError):
            q_pochhammer_real_order(q**-3, q, 2.0)


class TestQBinomial:
    def test_k_zero(self):
        for n in (0, 1, 9):
            assert q_binomial(n, 0, 0.5) == pytest.approx(1.0, rel=1e-15)

    def test_known_values(self):
        assert q_binomial(2, 1, 0.5) == pytest.approx(1.5, rel=1e-14)
        # exact rational value 35/16
        assert q_binomial(4, 2, 0.5) == pytest.approx(2.1875, rel=1e-14)

    def test_symmetry(self):
        for n in range(9):
            for k in range(n + 1):
                assert q_binomial(n, k, 0.7) == pytest.approx(
                    q_binomial(n, n - k, 0.7), rel=1e-12
                )

    def test_k_beyond_n(self):
        with pytest.raises(DomainError):
            q_binomial(3, 4, 0.5)


class TestQBinomialGeneral:
    def test_k_zero(self):
        assert q_binomial_general(2.7, 0, 0.5) == 1.0

    def test_integer_consistency(self):
        assert q_binomial_general(3, 1, 0.5) == pytest.approx(
            q_binomial(3, 1, 0.5), rel=1e-12
        )
        for n in range(9):
            for k in range(n + 1):
                assert q_binomial_general(float(n), k, 0.6) == pytest.approx(
                    q_binomial(n, k, 0.6), rel=1e-11
                )

    def test_real_order_value(self):
        # q-falling-factorial oracle: prod_i [alpha-i]_q / [i+1]_q
        assert q_binomial_general(2.5, 2, 0.5) == pytest.approx(
            1.4191197709602383, rel=1e-13
        )

    def test_falling_factorial_oracle(self):
        q = 0.7
        for alpha in (0.3, 1.8, 4.2):
            for k in range(6):
                oracle = math.prod(
                    q_number(alpha - i, q) / q_number(i + 1, q) for i in range(k)
                )
                assert q_binomial_general(alpha, k, q) == pytest.approx(oracle, rel=1e-11)


def _e_q_series(xi, q, terms=300):
    tot, term = 0.0, 1.0
    for n in range(terms):
        tot += term
        term *= xi * (1 - q) / (1 - q ** (n + 1))
    return tot


def _E_q_series(xi, q, terms=300):
    tot, term = 0.0, 1.0
    for n in range(terms):
        tot += term
        term *= q**n * xi * (1 - q) / (1 - q ** (n + 1))
    return tot


class TestQExponentials:
    def test_at_zero(self):
        assert e_q(0.0, 0.5) == 1.0
        assert E_q(0.0, 0.5) == 1.0

    def test_e_q_series_oracle(self):
        assert e_q(1.0, 0.5) == pytest.approx(3.462746619455064, rel=1e-12)
        for q in (0.3, 0.8):
            for frac in (-0.8, 0.3, 0.9):
                xi = frac / (1 - q)
                assert e_q(xi, q) == pytest.approx(_e_q_series(xi, q), rel=1e-12)

    def test_E_q_series_oracle(self):
        assert E_q(-0.5, 0.5) == pytest.approx(0.5775761901732048, rel=1e-12)
        for q in (0.3, 0.8):
            for xi in (-3.0, -0.5, 0.7, 5.0):
                assert E_q(xi, q) == pytest.approx(_E_q_series(xi, q), rel=1e-12)

    def test_domain_edge(self):
        with pytest.raises(DomainError):
            e_q(2.0, 0.5)
        assert e_q(1.999, 0.5) > 100.0

    def test_inverse_pair(self):
        assert e_q(1.0, 0.5) * E_q(-1.0, 0.5) == pytest.approx(1.0, abs=1e-12)
        for q in (0.1, 0.5, 0.9, 0.99):
            for frac in (-0.8, -0.2, 0.4, 0.95):
                xi = frac / (1 - q)
                assert e_q(xi, q) * E_q(-xi, q) == pytest.approx(1.0, abs=1e-11)


@settings(deadline=None, max_examples=150)
@given(
    a=st.floats(-2.0, 2.0),
    q=st.floats(0.05, 0.95),
    n=st.integers(0, 10),
    k=st.integers(0, 10),
)
def test_pochhammer_splitting_property(a, q, n, k):
    # (a;q)_{n+k} = (a;q)_n (a q^n;q)_k
    lhs = q_pochhammer(a, q, n + k)
    rhs = q_pochhammer(a, q, n) * q_pochhammer(a * q**n, q, k)
    assert lhs == pytest.approx(rhs, rel=1e-11, abs=1e-13)


@settings(deadline=None, max_examples=100)
@given(q=st.floats(0.05, 0.99), frac=st.floats(-0.95, 0.95))
def test_q_exponential_inverse_property(q, frac):
    xi = frac / (1 - q)
    assert e_q(xi, q) * E_q(-xi, q) == pytest.approx(1.0, abs=1e-11)
