"""The generalized Euler distribution P(lambda; q, m).

A point z in the complex plane together with a deformation parameter
``0 < q < 1`` and an index ``m = 0, 1, 2, ...`` defines a photon-counting
distribution over j = 0, 1, 2, ... whose mass function is built from
squared Wall polynomials:

    p_j = q**(2 C(min(m,j),2)) ((1-q) lam)**|m-j|
          / (N_{q,m}(lam) q**(m j) (q;q)_j (q;q)_m)
          * ((q;q)_max(m,j) / (q;q)_|m-j|
             * P_min(m,j)((1-q) lam; q**|m-j| | q))**2,

with lam = |z|**2 restricted to ``0 <= lam < q**m / (1-q)``.  At m = 0 this
is the classical Euler distribution ``lam**j / [j]_q! * E_q(-lam)``; as
q -> 1 it tends to a Laguerre-weighted generalization of the Poisson law.

Internally every formula is regrouped around the rescaled parameter
``u = (1-q) lam / q**m`` in [0, 1), which pairs the exploding ``q**(-m j)``
factor with the matching powers of lam and keeps all intermediates inside
double range over the supported envelope (m <= 60, q >= 0.05).

The statistics exposed here (mean, variance, Mandel parameter) are those
of the q-number ``[X]_q`` of the count X, matching the number-operator
moments the distribution models.
"""

from __future__ import annotations

import cmath
import math
import random
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, NonConvergenceError
from .hypergeom import wall_poly, wall_poly_scaled, laguerre_poly
from .numerics import KahanSum
from .qcalc import (
    TruncationPolicy,
    _truncation_length,
    check_q,
    q_number,
    q_pochhammer,
    q_pochhammer_infinite,
)

__all__ = [
    "GenEulerParams",
    "PmfTable",
    "SampleStream",
    "coefficient",
    "normalization",
    "pmf",
    "pmf_table",
    "pgf",
    "pgf_bruteforce",
    "pgf_head_cancellation",
    "pmf_classical_limit",
    "pgf_classical_limit",
    "mean",
    "variance",
    "mandel_q",
    "moments_bruteforce",
    "cdf",
    "quantile",
    "sample",
]

M_MAX = 60
Q_MIN = 0.05

_LOG_DBL_MAX = 709.0


@dataclass(frozen=True)
class GenEulerParams:
    """The triple (q, m, lambda) identifying one distribution.

    ``lam`` is the squared modulus of the coherent-state label; it must
    satisfy ``0 <= lam < q**m / (1-q)``.  The envelope ``q >= 0.05`` and
    ``m <= 60`` keeps every internal quantity within double precision.
    """

    q: float
    m: int
    lam: float

    def __post_init__(self):
        if not (Q_MIN <= self.q < 1.0):
            raise DomainError(f"q must lie in [{Q_MIN}, 1), got {self.q!r}")
        if self.m != int(self.m) or not (0 <= self.m <= M_MAX):
            raise DomainError(f"m must be an integer in [0, {M_MAX}], got {self.m!r}")
        if not (0.0 <= self.lam < self.domain_max):
            raise DomainError(
                f"lambda must lie in [0, q**m/(1-q)) = [0, {self.domain_max!r}), "
                f"got {self.lam!r}"
            )

    @property
    def domain_max(self) -> float:
        return self.q**self.m / (1.0 - self.q)

    @classmethod
    def from_zmod(cls, q: float, m: int, zmod: float) -> "GenEulerParams":
        """Build from |z| instead of lambda = |z|**2."""
        return cls(q, m, zmod * zmod)


def _policy(q: float) -> TruncationPolicy:
    # (u; q)_inf needs ~ln(1/(tol(1-q)))/(1-q) factors, so scale the cap as q -> 1
    return TruncationPolicy(tol=1e-14, max_terms=max(10_000, int(60.0 / (1.0 - q))))


def _qpow(q: float, exponent: float) -> float:
    """q**exponent with an overflow guard (exponent may be negative)."""
    logval = exponent * math.log(q)
    if logval > _LOG_DBL_MAX:
        raise OverflowError(
            f"q**{exponent} exceeds double range for q={q!r}"
        )
    return q**exponent


@lru_cache(maxsize=4096)
def _scaled_inverse_norm(q: float, m: int, u: float) -> float:
    """(u; q)_inf / (u q; q)_m  ==  1 / (q**m * N_{q,m}(lam))."""
    return q_pochhammer_infinite(u, q, _policy(q)) / q_pochhammer(u * q, q, m)


def normalization(lam: float, q: float, m: int,
                  policy: TruncationPolicy | None = None) -> float:
    """Normalization factor N_{q,m}(lambda) of the coherent-state expansion.

    N = (q**(1-m) (1-q) lam; q)_m / (q**m (q**-m (1-q) lam; q)_inf),
    strictly positive on 0 <= lam < q**m/(1-q) and equal to q**-m at
    lam = 0; for m = 0 it reduces to e_q(lam).
    """
    check_q(q)
    if m != int(m) or m < 0:
        raise DomainError(f"m must be a non-negative integer, got {m!r}")
    u = (1.0 - q) * lam / q**m
    if lam < 0.0 or u >= 1.0:
        raise DomainError(
            f"lambda must lie in [0, q**m/(1-q)), got lam={lam!r} (q={q!r}, m={m})"
        )
    pol = policy or _policy(q)
    num = q_pochhammer(u * q, q, m)
    den = q_pochhammer_infinite(u, q, pol)
    return num / (q**m * den)


def pmf(j: int, params: GenEulerParams) -> float:
    """Probability mass at count j.

    Evaluated in the u-regrouped form (u = (1-q) lam / q**m):

        j >= m:  u**(j-m) (u;q)_inf / (uq;q)_m
                 * (q;q)_j / ((q;q)_{j-m}**2 (q;q)_m) * P_m(xi; q**(j-m)|q)**2
        j <  m:  q**((m-j)**2 - j + m) u**(m-j) (u;q)_inf / (uq;q)_m
                 * (q;q)_m / ((q;q)_j (q;q)_{m-j}**2) * P_j(xi; q**(m-j)|q)**2

    with xi = (1-q) lam.  All factors are non-negative, so no sign is lost
    squaring the Wall polynomial values.
    """
    if j != int(j) or j < 0:
        raise DomainError(f"j must be a non-negative integer, got {j!r}")
    q, m, lam = params.q, params.m, params.lam
    xi = (1.0 - q) * lam
    u = xi / q**m
    inv_norm = _scaled_inverse_norm(q, m, u)
    if j >= m:
        return (
            u ** (j - m)
            * inv_norm
            * q_pochhammer(q, q, j)
            / (q_pochhammer(q, q, j - m) ** 2 * q_pochhammer(q, q, m))
            * wall_poly(m, xi, q ** (j - m), q) ** 2
        )
    return (
        q ** ((m - j) ** 2 - j + m)
        * u ** (m - j)
        * inv_norm
        * q_pochhammer(q, q, m)
        / (q_pochhammer(q, q, j) * q_pochhammer(q, q, m - j) ** 2)
        * wall_poly(j, xi, q ** (m - j), q) ** 2
    )


def coefficient(j: int, z: complex, q: float, m: int) -> complex:
    """Coherent-state expansion coefficient C_j^{q,m}(z).

    Carries the sign (-1)**min(m,j) and the phase e^{i (m-j) arg z}; its
    squared modulus reproduces pmf(j) * N_{q,m}(|z|**2).  For m = 0 and
    real z >= 0 it reduces to z**j / sqrt([j]_q!).  Raises OverflowError
    if the paired power of q would leave double range.
    """
    check_q(q)
    if m != int(m) or m < 0 or j != int(j) or j < 0:
        raise DomainError("m and j must be non-negative integers")
    z = complex(z)
    lam = abs(z) ** 2
    xi = (1.0 - q) * lam
    u = xi * _qpow(q, -float(m))
    d = abs(m - j)
    lo = min(m, j)
    exponent = -m / 2.0 if j >= m else ((m - j) ** 2 - j) / 2.0
    mag = (
        u ** (d / 2.0)
        * _qpow(q, exponent)
        * q_pochhammer(q, q, max(m, j))
        / (
            q_pochhammer(q, q, d)
            * math.sqrt(q_pochhammer(q, q, m) * q_pochhammer(q, q, j))
        )
        * wall_poly(lo, xi, q**d, q)
    )
    sign = -1.0 if lo % 2 else 1.0
    return sign * mag * cmath.exp(1j * (m - j) * cmath.phase(z))


@dataclass(frozen=True)
class PmfTable:
    """Truncated PMF: probabilities for j = 0..len-1 plus a tail bound.

    ``tail_bound`` is a geometric estimate of the omitted mass, kept below
    the tolerance the table was built with; the stored probabilities plus
    the tail account for the full unit mass.
    """

    params: GenEulerParams
    probs: tuple
    tail_bound: float

    def cumulative(self) -> list:
        out = []
        acc = KahanSum()
        for p in self.probs:
            acc.add(p)
            out.append(acc.value)
        return out


def _wall_tail_envelope(q: float, m: int, u: float) -> float:
    """Uniform bound on |P_m(xi; q**(j-m) | q)| over all j > m.

    Termwise: |(q**-m; q)_k| (q xi)**k <= (q;q)_m / (q;q)_{m-k}
    * q**(k(k+1)/2) u**k, and (a q; q)_k >= (q; q)_k for the parameter
    a = q**(j-m) <= 1.
    """
    total = 0.0
    for k in range(m + 1):
        total += (
            q_pochhammer(q, q, m)
            / q_pochhammer(q, q, m - k)
            * q ** (k * (k + 1) // 2)
            * u**k
            / q_pochhammer(q, q, k) ** 2
        )
    return total


@lru_cache(maxsize=256)
def _log_qq_inf(q: float) -> float:
    """log (q; q)_inf via a log1p sum (no underflow for q near 1)."""
    pol = _policy(q)
    terms = _truncation_length(q, q, pol)
    powers = np.exp(np.arange(1, terms + 1) * math.log(q))
    return float(np.sum(np.log1p(-powers)))


@lru_cache(maxsize=512)
def _pmf_table_cached(params: GenEulerParams, tol: float) -> PmfTable:
    q, m = params.q, params.m
    xi = (1.0 - q) * params.lam
    u = xi / q**m
    if u == 0.0:
        return PmfTable(params, tuple([0.0] * m + [1.0]), 0.0)
    cap = 100 * (m + 1) + 1000
    inv_norm = _scaled_inverse_norm(q, m, u)
    if inv_norm <= 0.0 or not math.isfinite(inv_norm):
        raise NonConvergenceError(
            f"normalization factor out of double range at q={q!r}, lam={params.lam!r}"
        )
    base = inv_norm / q_pochhammer(q, q, m)
    # rigorous envelope for the omitted mass: for i > j,
    #   p_i <= base * u**(i-m) (q;q)_j / (q;q)_inf**2 * B**2
    # with B the uniform Wall bound; tracked in log space so q near 1 cannot
    # overflow the (q;q)_inf**-2 factor
    log_const = (
        math.log(base)
        + 2.0 * math.log(_wall_tail_envelope(q, m, u))
        - 2.0 * _log_qq_inf(q)
        - math.log(1.0 - u)
        + math.log(u)
    )
    log_tol = math.log(tol)
    probs = [pmf(j, params) for j in range(m)]
    # w_j = u**(j-m) (q;q)_j / (q;q)_{j-m}**2 carries the whole j-dependence
    # of p_j apart from the squared Wall value: p_j = base * w_j * P**2
    w = q_pochhammer(q, q, m)
    log_qq_jm = 0.0
    j = m
    probs.append(base * w * wall_poly(m, xi, 1.0, q) ** 2)
    while True:
        if j >= cap:
            raise NonConvergenceError(
                f"PMF table exceeded {cap} entries before meeting tol={tol!r}"
            )
        if not math.isfinite(w):
            raise NonConvergenceError(
                f"PMF recurrence left double range at j={j} (q={q!r})"
            )
        if w == 0.0:
            tail = 0.0
            break
        log_tail = log_const + math.log(w) + 2.0 * log_qq_jm
        if j >= m + 3 and log_tail < log_tol:
            tail = math.exp(log_tail)
            break
        j += 1
        w *= u * (1.0 - q**j) / (1.0 - q ** (j - m)) ** 2
        log_qq_jm += math.log1p(-(q ** (j - m)))
        probs.append(base * w * wall_poly(m, xi, q ** (j - m), q) ** 2)
    total = KahanSum()
    for p in probs:
        total.add(p)
    if abs(total.value + tail - 1.0) > 1e-9 + tol:
        raise NonConvergenceError(
            f"PMF normalization check failed: sum+tail = {total.value + tail!r}"
        )
    return PmfTable(params, tuple(probs), tail)


def pmf_table(params: GenEulerParams, tol: float = 1e-10) -> PmfTable:
    """Adaptive PMF table with omitted mass below ``tol``.

    The support is extended past j = m until the successive-term ratio is
    sustained below 1 and the geometric tail estimate drops under ``tol``;
    NonConvergenceError is raised past 100 (m+1) + 1000 entries.
    """
    if not (0.0 < tol <= 1e-3):
        raise DomainError(f"tol must lie in (0, 1e-3], got {tol!r}")
    return _pmf_table_cached(params, float(tol))


def pgf(t: float, params: GenEulerParams) -> float:
    """Probability generating function G(t) = E(t**X), |t| <= 1, closed form.

    G(t) = t**m (u; q)_inf / (t u; q)_inf
           * 3_phi_2(q**-m, q/t, t; q**(1-m) xi, q | q; q xi)

    where xi = (1-q) lam and u = xi / q**m.  The terminating 3_phi_2 is
    summed exactly over its m + 1 terms with the numerator
    ``(q**-m; q)_k (q xi)**k`` pre-paired into ``(-1)**k q**(k(k+1)/2) u**k
    (q;q)_m / (q;q)_{m-k}`` and the ``t**m (q/t; q)_k`` factor expanded in
    powers of t, so no intermediate overflows and no division by t occurs.
    At t = 0 the series value p_0 is returned directly.
    """
    if abs(t) > 1.0:
        raise DomainError(f"p.g.f. defined for |t| <= 1, got t={t!r}")
    q, m, lam = params.q, params.m, params.lam
    if t == 0.0:
        return pmf(0, params)
    u = (1.0 - q) * lam / q**m
    pol = _policy(q)
    pref = q_pochhammer_infinite(u, q, pol) / q_pochhammer_infinite(t * u, q, pol)
    # t**m (q/t; q)_k is expanded as t**(m-k) prod_{i<=k} (t - q**i), so no
    # 1/t appears and the t -> 0 limit is graceful
    total = KahanSum()
    for k in range(m + 1):
        term = (
            (-1.0 if k % 2 else 1.0)
            * q ** (k * (k + 1) // 2)
            * u**k
            * t ** (m - k)
            * q_pochhammer(q, q, m)
            / q_pochhammer(q, q, m - k)
            * q_pochhammer(t, q, k)
            / (q_pochhammer(u * q, q, k) * q_pochhammer(q, q, k) ** 2)
        )
        for i in range(1, k + 1):
            term *= t - q**i
        total.add(term)
    return pref * total.value


def pgf_bruteforce(t: float, params: GenEulerParams, tol: float = 1e-12) -> float:
    """G(t) summed termwise from an adaptive PMF table; oracle for pgf()."""
    if abs(t) > 1.0:
        raise DomainError(f"p.g.f. defined for |t| <= 1, got t={t!r}")
    table = pmf_table(params, tol)
    acc = KahanSum()
    tj = 1.0
    for j, p in enumerate(table.probs):
        if j:
            tj *= t
        acc.add(tj * p)
    return acc.value


def pgf_head_cancellation(t: float, params: GenEulerParams) -> float:
    """Residual of the j < m head of the pre-normalization p.g.f. sum.

    The head appears twice with opposite signs in the rearranged sum, once
    through the Wall polynomials at parameter q**(m-j) and once through the
    denominator-cleared Wall values at parameter q**(j-m); the difference
    is identically zero in exact arithmetic.  Returned scaled by the
    largest term magnitude (which exceeds 1 only for q close to 1, where
    the raw terms blow up while still cancelling pairwise), so the value
    is directly comparable to a fixed tolerance.
    """
    q, m, lam = params.q, params.m, params.lam
    xi = (1.0 - q) * lam
    u = xi / q**m
    acc = KahanSum()
    scale = 1.0
    for j in range(m):
        direct = (
            t**j
            * u ** (m - j)
            * q ** ((m - j) ** 2 - j)
            * q_pochhammer(q, q, m) ** 2
            / (q_pochhammer(q, q, j) * q_pochhammer(q, q, m - j) ** 2)
            * wall_poly(j, xi, q ** (m - j), q) ** 2
        )
        cleared = (
            t**j
            * u ** (j - m)
            * _qpow(q, -m)
            * wall_poly_scaled(m, m - j, xi, q) ** 2
            / q_pochhammer(q, q, j)
        )
        scale = max(scale, abs(direct), abs(cleared))
        acc.add(direct - cleared)
    return acc.value / scale


def pmf_classical_limit(j: int, lam: float, m: int) -> float:
    """q -> 1 limit of the PMF: a Laguerre-weighted generalized Poisson law.

    lam**|m-j| e**(-lam) / j! * (min(m,j)! L_min(m,j)^(|m-j|)(lam) / sqrt(m!))**2
    """
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam!r}")
    if m != int(m) or m < 0 or j != int(j) or j < 0:
        raise DomainError("m and j must be non-negative integers")
    if lam == 0.0:
        return 1.0 if j == m else 0.0
    lo = min(m, j)
    d = abs(m - j)
    lag = laguerre_poly(lo, float(d), lam)
    logw = (
        d * math.log(lam)
        - lam
        - math.lgamma(j + 1)
        - math.lgamma(m + 1)
        + 2.0 * math.lgamma(lo + 1)
    )
    return math.exp(logw) * lag * lag


def pgf_classical_limit(t: float, lam: float, m: int) -> float:
    """q -> 1 limit of the p.g.f.: t**m exp(lam (t-1)) L_m(lam (2 - t - 1/t)).

    Singular at t = 0 through the 1/t in the Laguerre argument; values of
    |t| below 1e-8 are rejected rather than continued.
    """
    if abs(t) > 1.0:
        raise DomainError(f"p.g.f. defined for |t| <= 1, got t={t!r}")
    if abs(t) < 1e-8:
        raise DomainError("classical p.g.f. is singular at t = 0")
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam!r}")
    return t**m * math.exp(lam * (t - 1.0)) * laguerre_poly(m, 0.0, lam * (2.0 - (t + 1.0 / t)))


def mean(params: GenEulerParams) -> float:
    """E([X]_q) = lam + [m]_q."""
    return params.lam + q_number(params.m, params.q)


def variance(params: GenEulerParams) -> float:
    """Var([X]_q) = lam**2 q**m (1 + q - 2 q**-m) + lam q**m (2 [m]_q + q**m).

    Grouped as lam**2 (q**m (1+q) - 2) + lam (2 q**m [m]_q + q**(2m)) so no
    negative power of q appears.
    """
    q, m, lam = params.q, params.m, params.lam
    qm = q**m
    return lam * lam * (qm * (1.0 + q) - 2.0) + lam * (2.0 * qm * q_number(m, q) + qm * qm)


def mandel_q(params: GenEulerParams) -> float:
    """Mandel parameter (variance - mean) / mean of the q-number statistics.

    Negative values flag sub-Poissonian (antibunched) counting, zero
    Poissonian, positive super-Poissonian.  Undefined at the point mass
    m = 0, lam = 0.
    """
    mu = mean(params)
    if mu == 0.0:
        raise ZeroDivisionError("Mandel parameter undefined at m = 0, lambda = 0")
    return (variance(params) - mu) / mu


def moments_bruteforce(params: GenEulerParams, tol: float = 1e-12) -> tuple:
    """(mean, variance) of [X]_q summed termwise from a PMF table."""
    q = params.q
    table = pmf_table(params, tol)
    mu_acc = KahanSum()
    for j, p in enumerate(table.probs):
        mu_acc.add(q_number(j, q) * p)
    mu = mu_acc.value
    var_acc = KahanSum()
    for j, p in enumerate(table.probs):
        dev = q_number(j, q) - mu
        var_acc.add(dev * dev * p)
    return mu, var_acc.value


def cdf(j: int, params: GenEulerParams) -> float:
    """P(X <= j), the running sum of the PMF."""
    if j != int(j) or j < 0:
        raise DomainError(f"j must be a non-negative integer, got {j!r}")
    acc = KahanSum()
    for i in range(j + 1):
        acc.add(pmf(i, params))
    return acc.value


def quantile(u: float, params: GenEulerParams) -> int:
    """Smallest j with cdf(j) > u, for u in [0, 1)."""
    if not (0.0 <= u < 1.0):
        raise DomainError(f"quantile level must lie in [0, 1), got {u!r}")
    tol = min(1e-12, (1.0 - u) / 4.0)
    table = pmf_table(params, tol)
    cum = table.cumulative()
    idx = bisect_right(cum, u)
    return min(idx, len(cum) - 1)


@dataclass
class SampleStream:
    """Seeded draw stream; identical seeds replay identical sequences.

    Draws by inversion of a cached PMF table.  The stream owns mutable
    generator state: do not share one instance across threads.
    """

    params: GenEulerParams
    seed: int
    _rng: random.Random = field(init=False, repr=False)
    _cum: list = field(init=False, repr=False)

    def __post_init__(self):
        if self.seed != int(self.seed) or not (0 <= self.seed < 2**64):
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        self._rng = random.Random(self.seed)
        self._cum = pmf_table(self.params, 1e-12).cumulative()

    def draw(self) -> int:
        u = self._rng.random()
        idx = bisect_right(self._cum, u)
        return min(idx, len(self._cum) - 1)


def sample(stream: SampleStream, n: int) -> list:
    """Draw n counts from the stream by CDF inversion."""
    if n < 0:
        raise DomainError(f"sample size must be >= 0, got {n!r}")
    return [stream.draw() for _ in range(n)]
