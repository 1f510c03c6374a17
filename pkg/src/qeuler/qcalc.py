"""Scalar q-calculus primitives.

Everything here assumes a deformation parameter ``0 < q < 1``.  The basic
objects are

* the q-number ``[a]_q = (1 - q**a) / (1 - q)``,
* the q-shifted factorial (q-Pochhammer symbol)
  ``(a; q)_n = prod_{k<n} (1 - a q**k)`` together with its infinite and
  real-order extensions,
* q-factorials and q-binomial coefficients,
* the two q-exponentials ``e_q`` and ``E_q`` with
  ``e_q(x) * E_q(-x) = 1``.

All functions are pure, operate in double precision, and are safe to call
concurrently.  Infinite products are truncated under a
:class:`TruncationPolicy`; when every factor is a positive real the product
is evaluated as an exponentiated sum of ``log1p`` terms, which keeps long
truncations (several hundred thousand factors for q near 1) from
accumulating rounding or underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonConvergenceError, PoleError

__all__ = [
    "TruncationPolicy",
    "DEFAULT_POLICY",
    "q_number",
    "q_factorial",
    "q_pochhammer",
    "q_pochhammer_infinite",
    "q_pochhammer_real_order",
    "q_binomial",
    "q_binomial_general",
    "e_q",
    "E_q",
]


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping contract for infinite products and non-terminating series.

    ``tol`` is a relative tolerance; ``max_terms`` caps the number of
    factors/terms before :class:`NonConvergenceError` is raised.
    """

    tol: float = 1e-14
    max_terms: int = 10_000

    def __post_init__(self):
        if not (0.0 < self.tol < 1.0):
            raise DomainError(f"tol must lie in (0, 1), got {self.tol!r}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms!r}")


DEFAULT_POLICY = TruncationPolicy()


def check_q(q: float) -> None:
    """Raise DomainError unless 0 < q < 1."""
    if not (0.0 < q < 1.0):
        raise DomainError(f"q must lie in (0, 1), got {q!r}")


def _check_nat(n: int, name: str = "n") -> None:
    if n != int(n) or n < 0:
        raise DomainError(f"{name} must be a non-negative integer, got {n!r}")


def q_number(a: float, q: float) -> float:
    """[a]_q = (1 - q**a) / (1 - q).

    Tends to ``a`` as q -> 1; for integer n >= 0 equals the geometric sum
    ``1 + q + ... + q**(n-1)``.
    """
    check_q(q)
    return (1.0 - q**a) / (1.0 - q)


def q_factorial(n: int, q: float) -> float:
    """[n]_q! = (q; q)_n / (1 - q)**n, the q-analogue of n!."""
    check_q(q)
    _check_nat(n)
    return q_pochhammer(q, q, n) / (1.0 - q) ** n


def q_pochhammer(a, q: float, n: int):
    """(a; q)_n = prod_{k=0}^{n-1} (1 - a q**k); empty product is 1.

    ``a`` may be real or complex; the return type follows the input.
    """
    check_q(q)
    _check_nat(n)
    out = 1.0
    qk = 1.0
    for _ in range(n):
        out = out * (1.0 - a * qk)
        qk *= q
    return out


def _truncation_length(mod: float, q: float, policy: TruncationPolicy) -> int:
    """Number of leading factors of (a;q)_inf with |a| q**k >= tol (1 - q)."""
    threshold = policy.tol * (1.0 - q)
    if mod < threshold:
        return 0
    k = math.floor(math.log(threshold / mod) / math.log(q)) + 1
    return max(k, 1)


def q_pochhammer_infinite(a, q: float, policy: TruncationPolicy = DEFAULT_POLICY):
    """(a; q)_inf truncated once the omitted log-tail is below ``policy.tol``.

    The factors ``1 - a q**k`` are dropped as soon as ``|a| q**k`` falls
    under ``tol * (1 - q)``; the geometric tail then bounds the error in
    the log of the product by ``tol``.  Raises NonConvergenceError when
    more than ``policy.max_terms`` factors would be needed.
    """
    check_q(q)
    if a == 0:
        return 1.0
    terms = _truncation_length(abs(a), q, policy)
    if terms > policy.max_terms:
        raise NonConvergenceError(
            f"(a;q)_inf needs {terms} factors at q={q!r}, cap is {policy.max_terms}"
        )
    if terms == 0:
        return 1.0
    powers = np.exp(np.arange(terms) * math.log(q))
    if isinstance(a, complex):
        return complex(np.prod(1.0 - a * powers))
    factors = 1.0 - a * powers
    if np.all(factors > 0.0):
        # positive real factors: sum log1p terms to dodge underflow
        return float(math.exp(np.sum(np.log1p(-a * powers))))
    return float(np.prod(factors))


def q_pochhammer_real_order(a, q: float, alpha: float,
                            policy: TruncationPolicy = DEFAULT_POLICY):
    """(a; q)_alpha = (a; q)_inf / (a q**alpha; q)_inf for real-valued alpha.

    Defined whenever ``a q**alpha != q**(-n)`` for every natural n;
    otherwise the denominator product vanishes and PoleError is raised.
    Agrees with :func:`q_pochhammer` for integer alpha >= 0.
    """
    check_q(q)
    num = q_pochhammer_infinite(a, q, policy)
    den = q_pochhammer_infinite(a * q**alpha, q, policy)
    if den == 0:
        raise PoleError(f"(a q**alpha; q)_inf vanishes for a={a!r}, alpha={alpha!r}")
    return num / den


def q_binomial(n: int, k: int, q: float) -> float:
    """Gaussian binomial coefficient (q; q)_n / ((q; q)_{n-k} (q; q)_k)."""
    check_q(q)
    _check_nat(n, "n")
    _check_nat(k, "k")
    if k > n:
        raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    return q_pochhammer(q, q, n) / (q_pochhammer(q, q, n - k) * q_pochhammer(q, q, k))


def q_binomial_general(alpha: float, k: int, q: float) -> float:
    """q-binomial coefficient with arbitrary real upper index.

    Computed as ``(-1)**k q**(k alpha - C(k,2)) (q**-alpha; q)_k / (q; q)_k``;
    agrees with :func:`q_binomial` when alpha is an integer >= k.
    """
    check_q(q)
    _check_nat(k, "k")
    sign = -1.0 if k % 2 else 1.0
    scale = q ** (k * alpha - k * (k - 1) / 2.0)
    return sign * scale * q_pochhammer(q ** (-alpha), q, k) / q_pochhammer(q, q, k)


def e_q(xi: float, q: float, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Small q-exponential e_q(xi) = 1 / ((1-q) xi; q)_inf.

    Equals ``sum_n xi**n / [n]_q!`` on its domain ``|xi| < 1/(1-q)``.
    """
    check_q(q)
    if abs(xi) * (1.0 - q) >= 1.0:
        raise DomainError(f"e_q requires |xi| < 1/(1-q); got xi={xi!r}, q={q!r}")
    return 1.0 / q_pochhammer_infinite((1.0 - q) * xi, q, policy)


def E_q(xi: float, q: float, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Big q-exponential E_q(xi) = (-(1-q) xi; q)_inf, entire in xi.

    Satisfies ``e_q(xi) * E_q(-xi) = 1`` wherever e_q converges.
    """
    check_q(q)
    return q_pochhammer_infinite(-(1.0 - q) * xi, q, policy)
