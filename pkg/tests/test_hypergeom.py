import math

import mpmath
import pytest
import scipy.special
from hypothesis import given, settings
from hypothesis import strategies as st

from qeuler.errors import DivergenceError, DomainError, PoleError, ZeroDenominatorError
from qeuler.hypergeom import (
    QPower,
    SeriesSpec,
    f_rs,
    heine_transform_residual,
    laguerre_poly,
    phi_rs,
    q_hermite_2d,
    wall_poly,
    wall_poly_scaled,
    wall_reflection_residual,
)
from qeuler.qcalc import q_binomial, q_pochhammer, q_pochhammer_infinite


class TestSeriesSpec:
    def test_termination_from_qpower(self):
        spec = SeriesSpec((QPower(-3), 0.4), (0.7,), 0.5, 0.2)
        assert spec.terminates_at == 3

    def test_termination_from_float(self):
        q = 0.5
        spec = SeriesSpec((q**-4, 0.4), (0.7,), q, 0.2)
        assert spec.terminates_at == 4

    def test_termination_at_one(self):
        spec = SeriesSpec((1.0, 0.4), (0.7,), 0.5, 0.2)
        assert spec.terminates_at == 0

    def test_no_termination(self):
        spec = SeriesSpec((0.4, 0.6), (0.7,), 0.5, 0.2)
        assert spec.terminates_at is None

    def test_zero_numerator_ignored(self):
        # (0;q)_k = 1 never terminates the series
        spec = SeriesSpec((0.0, QPower(-2)), (0.7,), 0.5, 0.2)
        assert spec.terminates_at == 2

    def test_q_validated(self):
        with pytest.raises(DomainError):
            SeriesSpec((0.4,), (0.7,), 1.2, 0.2)


class TestPhiRs:
    def test_unit_numerator_gives_one(self):
        # (1;q)_k = 0 for k >= 1: only the k = 0 term survives
        spec = SeriesSpec((1.0, 0.3), (0.8,), 0.5, 0.9)
        assert phi_rs(spec) == 1.0 + 0.0j

    def test_vandermonde_paper_instance(self):
        # 2phi1(q^-n, b; c | q; q) = (c/b;q)_n b^n / (c;q)_n at n=2, b=0.4, c=0.7, q=0.5
        q, n, b, c = 0.5, 2, 0.4, 0.7
        lhs = phi_rs(SeriesSpec((QPower(-n), b), (c,), q, q))
        rhs = q_pochhammer(c / b, q, n) * b**n / q_pochhammer(c, q, n)
        assert lhs.real == pytest.approx(rhs, rel=1e-13)
        assert lhs.imag == 0.0

    def test_terminating_3phi2_direct_sum(self):
        # independent (m+1)-term evaluation
        q, m = 0.6, 4
        nums = (QPower(-m), 0.5, 0.3)
        dens = (0.8, 0.9)
        arg = 0.45
        total = 0.0
        for k in range(m + 1):
            total += (
                q_pochhammer(q**-m, q, k)
                * q_pochhammer(0.5, q, k)
                * q_pochhammer(0.3, q, k)
                / (q_pochhammer(0.8, q, k) * q_pochhammer(0.9, q, k))
                * arg**k
                / q_pochhammer(q, q, k)
            )
        assert phi_rs(SeriesSpec(nums, dens, q, arg)).real == pytest.approx(
            total, rel=1e-11
        )

    def test_against_mpmath_nonterminating(self):
        # 1phi1 has the (-1)^k q^C(k,2) factor; 0phi1 doubles it
        q = 0.4
        ref = complex(mpmath.qhyper([0.3], [0.7], q, 0.25))
        assert phi_rs(SeriesSpec((0.3,), (0.7,), q, 0.25)) == pytest.approx(
            ref, rel=1e-12
        )
        ref2 = complex(mpmath.qhyper([0.2, 0.5], [0.6], q, 0.8))
        assert phi_rs(SeriesSpec((0.2, 0.5), (0.6,), q, 0.8)) == pytest.approx(
            ref2, rel=1e-12
        )

    def test_divergence_r_eq_s_plus_one(self):
        with pytest.raises(DivergenceError):
            phi_rs(SeriesSpec((0.3, 0.5), (0.7,), 0.5, 1.0))

    def test_divergence_r_above_s_plus_one(self):
        with pytest.raises(DivergenceError):
            phi_rs(SeriesSpec((0.3, 0.5), (), 0.5, 0.5))

    def test_zero_denominator(self):
        # denominator parameter q^-2 hits a zero factor at k = 3 before the
        # series terminates at k = 5
        with pytest.raises(ZeroDenominatorError):
            phi_rs(SeriesSpec((QPower(-5), 0.3), (QPower(-2),), 0.5, 0.2))

    def test_terminating_equals_truncated_loop(self):
        # the terminating factor hits exactly zero, so summing further terms
        # changes nothing
        q, n = 0.7, 5
        spec = SeriesSpec((QPower(-n), 0.4), (0.6,), q, 0.3)
        val = phi_rs(spec)
        term = 1.0 + 0j
        total = term
        for k in range(n + 3):
            num = (1 - q ** (k - n)) * (1 - 0.4 * q**k)
            term *= num / (1 - 0.6 * q**k) * 0.3 / (1 - q ** (k + 1))
            total += term
            if k >= n:
                assert term == 0.0
        assert val == pytest.approx(total, rel=1e-14)


class TestFRs:
    def test_terminates_at_zero(self):
        assert f_rs((-0.0,), (1.5,), 0.7) == 1.0

    def test_1f1_hand_expansion(self):
        # 1 - 2 + 0.5
        assert f_rs((-2.0,), (1.0,), 1.0) == pytest.approx(-0.5, rel=1e-14)

    def test_0f0_is_exp(self):
        assert f_rs((), (), 0.7) == pytest.approx(math.exp(0.7), rel=1e-12)

    def test_2f1_against_mpmath(self):
        val = f_rs((0.3, 0.8), (1.2,), 0.5)
        assert val == pytest.approx(float(mpmath.hyp2f1(0.3, 0.8, 1.2, 0.5)), rel=1e-12)

    def test_divergence(self):
        with pytest.raises(DivergenceError):
            f_rs((0.3, 0.8), (1.2,), 1.0)


class TestWallPoly:
    def test_degree_zero(self):
        assert wall_poly(0, 0.4, 0.3, 0.5) == 1.0

    def test_degree_one_hand_expansion(self):
        q, a, x = 0.5, 0.3, 0.4
        assert wall_poly(1, x, a, q) == pytest.approx(1 - x / (1 - a * q), rel=1e-14)

    def test_at_zero(self):
        for n in (0, 1, 4, 9):
            assert wall_poly(n, 0.0, 0.3, 0.5) == pytest.approx(1.0, rel=1e-14)

    def test_matches_phi_rs(self):
        for q in (0.3, 0.7):
            for n in range(7):
                for a in (0.2, 0.8):
                    for x in (0.1, 0.6):
                        series = phi_rs(
                            SeriesSpec((QPower(-n), 0.0), (a * q,), q, q * x)
                        )
                        assert wall_poly(n, x, a, q) == pytest.approx(
                            series.real, rel=1e-11, abs=1e-13
                        )

    def test_matches_mpmath(self):
        q, n, a, x = 0.99, 10, 0.99**3, 0.45
        ref = complex(mpmath.qhyper([q**-n, 0], [a * q], q, q * x)).real
        assert wall_poly(n, x, a, q) == pytest.approx(ref, rel=1e-10)

    def test_2phi0_representation(self):
        # P_n(x; a|q) = 2phi0(q^-n, 1/x; - | q; x/a) / (q^-n / a; q)_n
        q, n, a, x = 0.6, 3, 0.7, 0.35
        pref = q_pochhammer(q**-n / a, q, n)
        series = phi_rs(SeriesSpec((QPower(-n), 1 / x), (), q, x / a))
        assert wall_poly(n, x, a, q) == pytest.approx(series.real / pref, rel=1e-11)

    def test_pole_parameter(self):
        with pytest.raises(ZeroDenominatorError):
            wall_poly(3, 0.4, 0.5**-1, 0.5)

    def test_laguerre_limit(self):
        q = 1 - 1e-5
        for n in range(7):
            for alpha in (0, 1, 2):
                for x in (0.1, 0.5, 1.0, 2.0):
                    lhs = wall_poly(n, x * (1 - q), q**alpha, q)
                    rhs = (
                        math.factorial(n)
                        / math.prod(alpha + 1 + i for i in range(n))
                        * laguerre_poly(n, alpha, x)
                        if n
                        else 1.0
                    )
                    assert lhs == pytest.approx(rhs, abs=1e-3)


class TestWallPolyScaled:
    def test_reduces_at_N_zero(self):
        q, n, x = 0.5, 4, 0.3
        assert wall_poly_scaled(n, 0, x, q) == pytest.approx(
            wall_poly(n, x, 1.0, q) * q_pochhammer(q, q, n), rel=1e-12
        )

    def test_out_of_range(self):
        with pytest.raises(PoleError):
            wall_poly_scaled(3, 4, 0.2, 0.5)


class TestWallReflection:
    def test_degenerate_N_zero(self):
        assert wall_reflection_residual(4, 0, 0.2, 0.5) == pytest.approx(0.0, abs=1e-13)

    def test_paper_grid_points(self):
        assert wall_reflection_residual(3, 1, 0.2, 0.5) < 1e-10
        assert wall_reflection_residual(4, 2, 0.1, 0.7) < 1e-10

    def test_full_grid(self):
        for q in (0.4, 0.6, 0.9):
            for n in range(7):
                for N in range(n + 1):
                    assert wall_reflection_residual(n, N, 0.25, q) < 1e-10

    def test_N_above_n(self):
        with pytest.raises(PoleError):
            wall_reflection_residual(2, 3, 0.2, 0.5)


class TestHeineTransform:
    def test_degree_zero(self):
        assert heine_transform_residual(0, 0.3, 0.5, 0.9, 0.4, 0.6) == pytest.approx(
            0.0, abs=1e-15
        )

    def test_generic_instance(self):
        assert heine_transform_residual(3, 0.3, 0.5, 0.9, 0.4, 0.6) < 1e-10

    def test_pgf_parameter_instance(self):
        # the parameter pattern used to close the generating function:
        # alpha=t, beta=q^-m t xi, gamma=q^(1-m) xi, tau=q/t
        q, m, t, lam = 0.5, 2, 0.8, 0.3
        xi = (1 - q) * lam
        res = heine_transform_residual(
            m, t, q**-m * t * xi, q ** (1 - m) * xi, q / t, q
        )
        assert res < 1e-10

    def test_grid(self):
        for q in (0.4, 0.7):
            for n in (1, 2, 4):
                assert heine_transform_residual(n, 0.25, 0.45, 0.65, 0.35, q) < 1e-10

    def test_zero_beta_rejected(self):
        with pytest.raises(ZeroDenominatorError):
            heine_transform_residual(2, 0.3, 0.0, 0.9, 0.4, 0.6)


class TestLaguerre:
    def test_degree_zero(self):
        assert laguerre_poly(0, 0.5, 2.0) == 1.0

    def test_degree_one(self):
        assert laguerre_poly(1, 0.0, 0.7) == pytest.approx(1 - 0.7, rel=1e-14)

    def test_hand_expansion(self):
        assert laguerre_poly(2, 0.0, 1.0) == pytest.approx(-0.5, rel=1e-14)

    def test_against_scipy(self):
        for n in range(8):
            for alpha in (0.0, 0.5, 2.0):
                for x in (0.2, 1.0, 3.5):
                    assert laguerre_poly(n, alpha, x) == pytest.approx(
                        float(scipy.special.eval_genlaguerre(n, alpha, x)), rel=1e-11
                    )

    def test_alpha_domain(self):
        with pytest.raises(DomainError):
            laguerre_poly(2, -1.0, 0.5)


class TestQHermite2D:
    def test_m_zero(self):
        z, zeta = 0.4 + 0.2j, 0.3 - 0.5j
        for j in range(4):
            assert q_hermite_2d(0, j, z, zeta, 0.5) == pytest.approx(
                zeta**j, rel=1e-13
            )

    def test_one_one_hand_expansion(self):
        q = 0.35
        z, zeta = 0.7 + 0.1j, 0.2 + 0.4j
        assert q_hermite_2d(1, 1, z, zeta, q) == pytest.approx(
            z * zeta - (1 - q), rel=1e-13
        )

    def test_origin_single_term(self):
        q = 0.5
        # only the k = min(m, j) term survives at z = zeta = 0
        expected = q_binomial(2, 2, q) ** 2 * q ** 1 * q_pochhammer(q, q, 2)
        assert q_hermite_2d(2, 2, 0.0, 0.0, q) == pytest.approx(expected, rel=1e-13)

    def test_symmetric_in_degree_swap(self):
        q = 0.6
        z, zeta = 0.5 + 0.3j, -0.2 + 0.7j
        assert q_hermite_2d(3, 2, z, zeta, q) == pytest.approx(
            q_hermite_2d(2, 3, zeta, z, q), rel=1e-12
        )


def test_q_binomial_theorem():
    # sum_n a^n / (q;q)_n = 1 / (a;q)_inf on the well-conditioned grid
    pairs = [(q, a) for q in (0.1, 0.3, 0.5, 0.7) for a in (-0.9, -0.5, 0.3, 0.9)]
    pairs += [(0.9, 0.3), (0.9, 0.9), (0.99, 0.6)]
    for q, a in pairs:
        target = 1.0 / q_pochhammer_infinite(a, q)
        total, term, n = 0.0, 1.0, 0
        while abs(term) > 1e-17 * (1 + abs(total)) and n < 20000:
            total += term
            n += 1
            term *= a / (1 - q**n)
        assert total == pytest.approx(target, rel=1e-11), (q, a)


@settings(deadline=None, max_examples=60)
@given(
    n=st.integers(0, 6),
    x=st.floats(0.0, 0.9),
    a=st.floats(0.05, 0.9),
    q=st.floats(0.1, 0.9),
)
def test_wall_poly_matches_series_property(n, x, a, q):
    series = phi_rs(SeriesSpec((QPower(-n), 0.0), (a * q,), q, q * x))
    assert wall_poly(n, x, a, q) == pytest.approx(series.real, rel=1e-10, abs=1e-11)
