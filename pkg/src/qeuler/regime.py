"""Photon-counting regime analysis on the coherent-state label plane.

For m >= 1 the Mandel parameter of the distribution shares its sign with
the downward parabola

    P(lam) = lam**2 q**m (1 + q - 2 q**-m)
             + lam (q**m (2 [m]_q + q**m) - 1) - [m]_q,

so the (q, m, lam) space splits into sub-Poissonian, Poissonian and
super-Poissonian regions according to the sign of P.  Whether P ever
becomes positive is governed by its discriminant Delta, which factors
through a cubic in zeta = q**m: super-Poissonian windows exist only for
q above the critical value Q_CRITICAL = (5 sqrt(5) - 2) / 11 and index m
not exceeding the threshold m_threshold(q) derived from the cubic's root
in (0, q) (obtained by the trigonometric form of Cardano's method in the
irreducible case).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, RootNotInIntervalError
from .gen_euler import GenEulerParams, moments_bruteforce
from .qcalc import check_q, q_number

__all__ = [
    "Q_CRITICAL",
    "Regime",
    "CubicCoeffs",
    "RegimeInterval",
    "RegimeReport",
    "sign_poly",
    "sign_poly_discriminant",
    "cubic_delta",
    "cardano_discriminant",
    "threshold_root",
    "m_threshold",
    "lambda_roots",
    "classify",
    "classify_from_moments",
    "report",
]

#: Deformation threshold (5 sqrt(5) - 2) / 11 above which super-Poissonian
#: windows can open.
Q_CRITICAL = (5.0 * math.sqrt(5.0) - 2.0) / 11.0

BOUNDARY_TOL = 1e-10


class Regime(enum.Enum):
    SUB_POISSONIAN = "sub-poissonian"
    POISSONIAN = "poissonian"
    SUPER_POISSONIAN = "super-poissonian"


@dataclass(frozen=True)
class CubicCoeffs:
    """Coefficients of the cubic delta(zeta) = a zeta**3 + b zeta**2 + c zeta + d."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_q(cls, q: float) -> "CubicCoeffs":
        check_q(q)
        return cls(
            a=(1.0 + q) ** 2,
            b=(q - 3.0) * (1.0 + q),
            c=(q - 1.0) * (3.0 * q + 1.0),
            d=7.0 - q * (6.0 + q),
        )

    def evaluate(self, zeta: float) -> float:
        return ((self.a * zeta + self.b) * zeta + self.c) * zeta + self.d


def _check_m(m: int, minimum: int = 1) -> None:
    if m != int(m) or m < minimum:
        raise DomainError(f"m must be an integer >= {minimum}, got {m!r}")


def sign_poly(lam: float, q: float, m: int) -> float:
    """P(lam); its sign is the sign of the Mandel parameter (m >= 1).

    The leading coefficient q**m (1+q) - 2 is negative for every m >= 1,
    q in (0, 1), and P(0) = -[m]_q < 0.
    """
    check_q(q)
    _check_m(m)
    qm = q**m
    return (
        lam * lam * (qm * (1.0 + q) - 2.0)
        + lam * (qm * (2.0 * q_number(m, q) + qm) - 1.0)
        - q_number(m, q)
    )


def sign_poly_discriminant(q: float, m: int) -> float:
    """Discriminant Delta of P(lam) in lam.

    Delta = q**2m (2 [m]_q + q**m)**2 + 4 [m]_q (q**(m+1) - 2)
            - 2 q**2m + 1,
    which also equals (q**m - 1) / (1-q)**2 * cubic_delta(q, m).
    """
    check_q(q)
    _check_m(m, minimum=0)
    qm = q**m
    mq = q_number(m, q)
    return qm * qm * (2.0 * mq + qm) ** 2 + 4.0 * mq * (qm * q - 2.0) - 2.0 * qm * qm + 1.0


def cubic_delta(q: float, m: int) -> float:
    """delta = (1+q)**2 q**3m + (q-3)(q+1) q**2m + (q-1)(3q+1) q**m + 7 - q(6+q).

    Cubic in zeta = q**m with :class:`CubicCoeffs`; its m -> inf limit
    7 - q(6+q) is positive throughout q in (0, 1).
    """
    check_q(q)
    _check_m(m, minimum=0)
    qm = q**m
    return (
        (1.0 + q) ** 2 * qm**3
        + (q - 3.0) * (q + 1.0) * qm**2
        + (q - 1.0) * (3.0 * q + 1.0) * qm
        + 7.0
        - q * (6.0 + q)
    )


def _cardano_alpha_beta(q: float) -> tuple:
    co = CubicCoeffs.from_q(q)
    a, b, c, d = co.a, co.b, co.c, co.d
    alpha = (2.0 * b**3 - 9.0 * a * b * c + 27.0 * a * a * d) / (27.0 * a**3)
    beta = (3.0 * a * c - b * b) / (3.0 * a * a)
    return alpha, beta


def cardano_discriminant(q: float) -> float:
    """Cardano discriminant alpha**2 + 4 beta**3 / 27 of the depressed cubic.

    Non-negative for q below Q_CRITICAL (no root of delta inside (0, q)),
    negative above it (irreducible case, three real roots).
    """
    check_q(q)
    alpha, beta = _cardano_alpha_beta(q)
    return alpha * alpha + 4.0 * beta**3 / 27.0


def _bisect_root(q: float) -> float:
    # the sought root is the middle of the three, bracketed by the cubic's
    # two turning points (where delta is positive resp. negative)
    coeffs = CubicCoeffs.from_q(q)
    a, b, c = 3.0 * coeffs.a, 2.0 * coeffs.b, coeffs.c
    disc = math.sqrt(b * b - 4.0 * a * c)
    lo = (-b - disc) / (2.0 * a)
    hi = (-b + disc) / (2.0 * a)
    if lo > hi:
        lo, hi = hi, lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if coeffs.evaluate(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def threshold_root(q: float) -> float:
    """Middle root of the cubic delta(zeta), defined for q > Q_CRITICAL.

    Trigonometric solution of the irreducible cubic: with
    theta = arccos(3 sqrt(3) alpha / (2 beta sqrt(-beta))), the root is
    -b/(3a) + 2 sqrt(-beta/3) cos(theta/3 + 4 pi/3).  Within 1e-6 of
    Q_CRITICAL the formula degenerates and turning-point bisection is used
    instead.

    delta is negative exactly between this root and the next one above it,
    so q**m values falling in that window mark indices with
    super-Poissonian windows.  The root always lies in (0, 1); it drops
    below q (and m_threshold becomes positive) only once q is large enough
    that delta(q) < 0.
    """
    check_q(q)
    if q <= Q_CRITICAL:
        raise DomainError(f"cubic has no real root for q <= {Q_CRITICAL!r}, got {q!r}")
    if q - Q_CRITICAL < 1e-6:
        return _bisect_root(q)
    coeffs = CubicCoeffs.from_q(q)
    alpha, beta = _cardano_alpha_beta(q)
    arg = 3.0 * math.sqrt(3.0) * alpha / (2.0 * beta * math.sqrt(-beta))
    if abs(arg) > 1.0 + 1e-12:
        raise RootNotInIntervalError(f"arccos argument {arg!r} out of range at q={q!r}")
    arg = max(-1.0, min(1.0, arg))
    theta = math.acos(arg)
    root = -coeffs.b / (3.0 * coeffs.a) + 2.0 * math.sqrt(-beta / 3.0) * math.cos(
        theta / 3.0 + 4.0 * math.pi / 3.0
    )
    if not (0.0 < root < 1.0):
        raise RootNotInIntervalError(f"cubic root {root!r} not inside (0, 1)")
    return root


def m_threshold(q: float) -> int | None:
    """Largest index with a super-Poissonian window, None for q <= Q_CRITICAL.

    floor(log(threshold_root(q)) / log(q)); non-decreasing in q.  Equals 0
    on the narrow band just above Q_CRITICAL where the cubic root still
    exceeds q, meaning no index m >= 1 opens a window yet.
    """
    check_q(q)
    if q <= Q_CRITICAL:
        return None
    return math.floor(math.log(threshold_root(q)) / math.log(q))


def lambda_roots(q: float, m: int) -> tuple | None:
    """The two real roots of P(lam) as (lambda_plus, lambda_minus).

    None when the discriminant is <= 0.  Ordered lambda_plus <
    lambda_minus: the counting is sub-Poissonian below lambda_plus and
    above lambda_minus, super-Poissonian in between.  Computed with the
    cancellation-free quadratic formula.
    """
    check_q(q)
    _check_m(m)
    disc = sign_poly_discriminant(q, m)
    if disc <= 0.0:
        return None
    qm = q**m
    a = qm * (1.0 + q) - 2.0
    b = qm * (2.0 * q_number(m, q) + qm) - 1.0
    c = -q_number(m, q)
    s = math.sqrt(disc)
    t = -0.5 * (b + math.copysign(s, b)) if b != 0.0 else 0.5 * s
    r1, r2 = t / a, c / t
    return (min(r1, r2), max(r1, r2))


def _band(lam: float) -> float:
    return BOUNDARY_TOL * max(1.0, lam * lam)


def classify(lam: float, q: float, m: int) -> Regime:
    """Regime at (q, m, lam) via the sign of P(lam).

    m = 0 counting is sub-Poissonian for every lam > 0 (Mandel parameter
    (q-1) lam); the lam = 0 point mass is reported as Poissonian, the
    limit of the vanishing Mandel parameter.  Values of |P| below
    1e-10 * max(1, lam**2) map to the measure-zero Poissonian boundary.
    """
    check_q(q)
    _check_m(m, minimum=0)
    if not (0.0 <= lam < q**m / (1.0 - q)):
        raise DomainError(
            f"lambda must lie in [0, q**m/(1-q)), got lam={lam!r} (q={q!r}, m={m})"
        )
    if m == 0:
        return Regime.POISSONIAN if lam == 0.0 else Regime.SUB_POISSONIAN
    value = sign_poly(lam, q, m)
    if abs(value) < _band(lam):
        return Regime.POISSONIAN
    return Regime.SUPER_POISSONIAN if value > 0.0 else Regime.SUB_POISSONIAN


def classify_from_moments(lam: float, q: float, m: int, tol: float = 1e-12) -> Regime:
    """Regime from the sign of the brute-force Mandel parameter.

    Independent of :func:`classify`: the mean and variance are summed
    termwise from the PMF table and the same boundary band is applied on
    the P(lam) scale (Mandel parameter times the mean).
    """
    params = GenEulerParams(q, m, lam)
    mu, var = moments_bruteforce(params, tol)
    if mu == 0.0:
        return Regime.POISSONIAN
    value = var - mu  # equals P(lam) in exact arithmetic
    if abs(value) < _band(lam):
        return Regime.POISSONIAN
    return Regime.SUPER_POISSONIAN if value > 0.0 else Regime.SUB_POISSONIAN


@dataclass(frozen=True)
class RegimeInterval:
    lo: float
    hi: float
    regime: Regime


@dataclass(frozen=True)
class RegimeReport:
    """Full regime analysis of one (q, m) pair.

    ``intervals`` partitions [0, domain_max); the lambda roots (when
    present) are the Poissonian boundaries between them, also exposed as
    |z| thresholds through their square roots.
    """

    q: float
    m: int
    discriminant: float
    delta: float
    cardano_disc: float
    q_critical: float
    m_q: int | None
    zeta: float | None
    lambda_plus: float | None
    lambda_minus: float | None
    zmod_plus: float | None
    zmod_minus: float | None
    domain_max: float
    intervals: tuple


def report(q: float, m: int) -> RegimeReport:
    """Aggregate discriminants, thresholds, roots and regime intervals."""
    check_q(q)
    _check_m(m, minimum=0)
    domain = q**m / (1.0 - q)
    disc = sign_poly_discriminant(q, m)
    delta = cubic_delta(q, m)
    cardano = cardano_discriminant(q)
    above = q > Q_CRITICAL
    zeta = threshold_root(q) if above else None
    m_q = m_threshold(q) if above else None
    roots = lambda_roots(q, m) if m >= 1 else None
    if roots is None:
        lam_p = lam_m = None
        intervals = (RegimeInterval(0.0, domain, Regime.SUB_POISSONIAN),)
    else:
        lam_p, lam_m = roots
        cut_p = min(max(lam_p, 0.0), domain)
        cut_m = min(max(lam_m, 0.0), domain)
        pieces = [
            RegimeInterval(0.0, cut_p, Regime.SUB_POISSONIAN),
            RegimeInterval(cut_p, cut_m, Regime.SUPER_POISSONIAN),
            RegimeInterval(cut_m, domain, Regime.SUB_POISSONIAN),
        ]
        intervals = tuple(p for p in pieces if p.hi > p.lo)
    return RegimeReport(
        q=q,
        m=m,
        discriminant=disc,
        delta=delta,
        cardano_disc=cardano,
        q_critical=Q_CRITICAL,
        m_q=m_q,
        zeta=zeta,
        lambda_plus=lam_p,
        lambda_minus=lam_m,
        zmod_plus=math.sqrt(lam_p) if lam_p is not None and lam_p >= 0 else None,
        zmod_minus=math.sqrt(lam_m) if lam_m is not None and lam_m >= 0 else None,
        domain_max=domain,
        intervals=intervals,
    )
