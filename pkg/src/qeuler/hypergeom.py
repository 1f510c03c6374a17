"""Basic and classical hypergeometric series, Wall and Laguerre polynomials.

The central object is the basic hypergeometric series

    r_phi_s(a_1..a_r; b_1..b_s | q; z)
        = sum_k  (a_1..a_r; q)_k / (b_1..b_s; q)_k
                 * ((-1)**k q**C(k,2))**(1+s-r) * z**k / (q; q)_k

which terminates whenever some numerator parameter equals ``q**(-n)`` for a
natural n.  Parameters that are exact integer powers of q should be passed
as :class:`QPower` so the terminating factor ``1 - q**(k-n)`` hits zero
exactly; raw floats are matched against ``q**(-n)`` within 1e-12 as a
fallback.

Also provided: the little q-Laguerre (Wall) polynomials, their
denominator-cleared variant at parameter ``q**(-N)``, the classical
Laguerre polynomials, the 2D complex q-orthogonal polynomials, and
residual evaluators for the Wall reflection identity and the finite Heine
transformation (used as numerical test oracles).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (
    DivergenceError,
    DomainError,
    NonConvergenceError,
    PoleError,
    ZeroDenominatorError,
)
from .numerics import KahanSum
from .qcalc import DEFAULT_POLICY, TruncationPolicy, check_q, q_binomial, q_pochhammer

__all__ = [
    "QPower",
    "SeriesSpec",
    "phi_rs",
    "f_rs",
    "wall_poly",
    "wall_poly_scaled",
    "wall_reflection_residual",
    "heine_transform_residual",
    "laguerre_poly",
    "q_hermite_2d",
]

_MATCH_TOL = 1e-12


@dataclass(frozen=True)
class QPower:
    """A series parameter known symbolically to equal q**exponent."""

    exponent: int


def _param_value(p, q: float):
    return q**p.exponent if isinstance(p, QPower) else p


def _param_factor(p, q: float, k: int):
    """The factor 1 - p q**k, exact when p is a QPower."""
    if isinstance(p, QPower):
        return 1.0 - q ** (p.exponent + k)
    return 1.0 - p * q**k


def _neg_power_index(p, q: float) -> int | None:
    """n >= 0 with p == q**(-n), or None."""
    if isinstance(p, QPower):
        return -p.exponent if p.exponent <= 0 else None
    z = complex(p)
    if z.real <= 0.0 or abs(z.imag) > _MATCH_TOL * abs(z):
        return None
    n = round(-math.log(z.real) / math.log(q))
    if n >= 0 and abs(z.real * q**n - 1.0) <= _MATCH_TOL:
        return n
    return None


@dataclass(frozen=True)
class SeriesSpec:
    """Parameters of a basic hypergeometric series r_phi_s(...; q; argument)."""

    numerators: tuple
    denominators: tuple
    q: float
    argument: complex

    def __post_init__(self):
        check_q(self.q)
        object.__setattr__(self, "numerators", tuple(self.numerators))
        object.__setattr__(self, "denominators", tuple(self.denominators))

    @property
    def terminates_at(self) -> int | None:
        """Index n of the last nonzero term, or None for a full series."""
        hits = [m for m in (_neg_power_index(p, self.q) for p in self.numerators)
                if m is not None]
        return min(hits) if hits else None


def phi_rs(spec: SeriesSpec, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """Evaluate the basic hypergeometric series described by ``spec``.

    Terminating series are summed exactly over k = 0..n.  Non-terminating
    series require |argument| < 1 when r = s + 1 (and any argument for
    r <= s); they are summed with compensated accumulation until the
    relative term size stays below ``policy.tol``.
    """
    q = spec.q
    r, s = len(spec.numerators), len(spec.denominators)
    excess = 1 + s - r
    z = complex(spec.argument)
    stop = spec.terminates_at
    if stop is None:
        if r == s + 1 and abs(z) >= 1.0:
            raise DivergenceError(f"r = s+1 series needs |argument| < 1, got {abs(z)}")
        if r > s + 1 and z != 0:
            raise DivergenceError("r > s+1 series diverges unless terminating")
    total = KahanSum(complex(1.0))
    term = complex(1.0)
    k = 0
    quiet = 0
    while True:
        if stop is not None:
            if k >= stop:
                break
        elif k >= policy.max_terms:
            raise NonConvergenceError(f"series exceeded {policy.max_terms} terms")
        num = 1.0
        for a in spec.numerators:
            num *= _param_factor(a, q, k)
        den = 1.0
        for b in spec.denominators:
            den *= _param_factor(b, q, k)
        if den == 0:
            raise ZeroDenominatorError(
                f"denominator factor vanished at k={k} before termination"
            )
        step = num / den * z / (1.0 - q ** (k + 1))
        if excess:
            step *= (-(q**k)) ** excess
        term = term * step
        k += 1
        total.add(term)
        if stop is None:
            if abs(term) <= policy.tol * (1.0 + abs(total.value)):
                quiet += 1
                if quiet >= 2:
                    break
            else:
                quiet = 0
    return total.value


def f_rs(numerators, denominators, x: float,
         policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Classical hypergeometric series sum_k (a1)_k..(ar)_k/((b1)_k..(bs)_k) x**k/k!.

    Terminates when a numerator is a non-positive integer; otherwise the
    usual convergence constraints apply (all x for r <= s, |x| < 1 for
    r = s + 1).
    """
    numerators = tuple(float(a) for a in numerators)
    denominators = tuple(float(b) for b in denominators)
    r, s = len(numerators), len(denominators)
    stops = [int(-a) for a in numerators if a <= 0 and a == int(a)]
    stop = min(stops) if stops else None
    if stop is None:
        if r == s + 1 and abs(x) >= 1.0:
            raise DivergenceError(f"r = s+1 series needs |x| < 1, got {x!r}")
        if r > s + 1 and x != 0:
            raise DivergenceError("r > s+1 series diverges unless terminating")
    total = KahanSum(1.0)
    term = 1.0
    k = 0
    quiet = 0
    while True:
        if stop is not None:
            if k >= stop:
                break
        elif k >= policy.max_terms:
            raise NonConvergenceError(f"series exceeded {policy.max_terms} terms")
        num = 1.0
        for a in numerators:
            num *= a + k
        den = 1.0
        for b in denominators:
            den *= b + k
        if den == 0:
            raise ZeroDenominatorError(f"denominator factor vanished at k={k}")
        term = term * num / den * x / (k + 1)
        k += 1
        total.add(term)
        if stop is None:
            if abs(term) <= policy.tol * (1.0 + abs(total.value)):
                quiet += 1
                if quiet >= 2:
                    break
            else:
                quiet = 0
    return total.value


def wall_poly(n: int, x: float, a: float, q: float) -> float:
    """Little q-Laguerre (Wall) polynomial P_n(x; a | q).

    Equals the terminating series 2_phi_1(q**-n, 0; a q | q; q x) with
    n + 1 terms; P_0 = 1 and P_n(0; a | q) = 1.  Evaluated through the
    three-term recurrence

        -x P_k = A_k P_{k+1} - (A_k + C_k) P_k + C_k P_{k-1},
        A_k = q**k (1 - a q**(k+1)),   C_k = a q**k (1 - q**k),

    which stays accurate for q near 1 where the series loses digits to
    cancellation (its terms grow past 1e9 while the value stays O(1)).
    """
    check_q(q)
    if n < 0 or n != int(n):
        raise DomainError(f"degree must be a non-negative integer, got {n!r}")
    if n == 0:
        return 1.0
    den = 1.0 - a * q
    if den == 0.0:
        raise ZeroDenominatorError("Wall parameter hit a q = 1")
    prev, cur = 1.0, 1.0 - x / den
    for k in range(1, n):
        big_a = q**k * (1.0 - a * q ** (k + 1))
        if big_a == 0.0:
            raise ZeroDenominatorError(f"Wall parameter hit a q**{k + 1} = 1")
        big_c = a * q**k * (1.0 - q**k)
        prev, cur = cur, ((big_a + big_c - x) * cur - big_c * prev) / big_a
    return cur


def wall_poly_scaled(n: int, N: int, x: float, q: float) -> float:
    """P_n(x; q**-N | q) * (q**(1-N); q)_n, evaluated termwise.

    For 1 <= N <= n the Wall polynomial at parameter ``q**-N`` has a pole
    exactly cancelled by the vanishing factor ``(q**(1-N); q)_n``; clearing
    the denominator inside the series leaves the finite sum

        sum_{k=N}^{n} (q**-n; q)_k (q**(1+k-N); q)_{n-k} (q x)**k / (q; q)_k

    which this function computes directly.  N = 0 reduces to
    ``P_n(x; 1 | q) * (q; q)_n``.
    """
    check_q(q)
    if N < 0 or N > n:
        raise PoleError(f"need 0 <= N <= n, got N={N}, n={n}")
    total = KahanSum()
    for k in range(N, n + 1):
        t = (q * x) ** k / q_pochhammer(q, q, k)
        for i in range(k):
            t *= 1.0 - q ** (i - n)
        for i in range(n - k):
            t *= 1.0 - q ** (1 + k - N + i)
        total.add(t)
    return total.value


def wall_reflection_residual(n: int, N: int, x: float, q: float) -> float:
    """|LHS - RHS| of the Wall reflection identity at parameter q**-N.

    Both sides are scaled by the shared factor ``(q**(1-N); q)_n`` (which
    vanishes for 1 <= N <= n, where the raw identity reads pole = pole):

        P_n(x; q**-N | q) (q**(1-N); q)_n
            = x**N (-1)**N q**(N(N+1-2n)/2) (q**(N+1); q)_{n-N}
              * P_{n-N}(x; q**N | q).

    Raises PoleError for N > n, where the right-hand side degenerates.
    """
    if N > n or N < 0:
        raise PoleError(f"reflection residual needs 0 <= N <= n, got N={N}, n={n}")
    lhs = wall_poly_scaled(n, N, x, q)
    sign = -1.0 if N % 2 else 1.0
    rhs = (
        x**N
        * sign
        * q ** ((N * (N + 1 - 2 * n)) // 2)
        * q_pochhammer(q ** (N + 1), q, n - N)
        * wall_poly(n - N, x, q**N, q)
    )
    return abs(lhs - rhs)


def heine_transform_residual(n: int, alpha: complex, beta: complex, gamma: complex,
                             tau: complex, q: float,
                             policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """|LHS - RHS| of the finite Heine transformation

        3_phi_2(q**-n, alpha, beta; gamma, q**(1-n)/tau | q; q)
            = (alpha tau; q)_n / (tau; q)_n
              * 3_phi_2(q**-n, gamma/beta, alpha; gamma, alpha tau | q;
                        beta tau q**n).

    Parameters must avoid zero denominators on either side.
    """
    check_q(q)
    if beta == 0:
        raise ZeroDenominatorError("beta must be nonzero (gamma/beta on the RHS)")
    den = q_pochhammer(tau, q, n)
    if den == 0:
        raise ZeroDenominatorError("(tau; q)_n vanished")
    lhs = phi_rs(
        SeriesSpec((QPower(-n), alpha, beta), (gamma, q ** (1 - n) / tau), q, q),
        policy,
    )
    rhs = (
        q_pochhammer(alpha * tau, q, n)
        / den
        * phi_rs(
            SeriesSpec((QPower(-n), gamma / beta, alpha), (gamma, alpha * tau), q,
                       beta * tau * q**n),
            policy,
        )
    )
    return abs(lhs - rhs)


def _rising(a: float, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= a + i
    return out


def laguerre_poly(n: int, alpha: float, x: float) -> float:
    """Generalized Laguerre polynomial L_n^(alpha)(x), alpha > -1.

    Direct terminating sum ((alpha+1)_n / n!) * 1F1(-n; alpha+1; x).
    """
    if alpha <= -1:
        raise DomainError(f"Laguerre order requires alpha > -1, got {alpha!r}")
    if n < 0 or n != int(n):
        raise DomainError(f"degree must be a non-negative integer, got {n!r}")
    return _rising(alpha + 1.0, n) / math.factorial(n) * f_rs((-float(n),), (alpha + 1.0,), x)


def q_hermite_2d(m: int, j: int, z: complex, zeta: complex, q: float) -> complex:
    """2D complex q-orthogonal polynomial H_{m,j}(z, zeta | q).

    Direct double-index sum
    sum_{k=0}^{min(m,j)} [m,k]_q [j,k]_q (-1)**k q**C(k,2) (q; q)_k
    z**(m-k) zeta**(j-k).
    """
    check_q(q)
    z = complex(z)
    zeta = complex(zeta)
    total = KahanSum(complex(0.0))
    for k in range(min(m, j) + 1):
        sign = -1.0 if k % 2 else 1.0
        total.add(
            q_binomial(m, k, q)
            * q_binomial(j, k, q)
            * sign
            * q ** (k * (k - 1) // 2)
            * q_pochhammer(q, q, k)
            * z ** (m - k)
            * zeta ** (j - k)
        )
    return total.value
