"""Numerical invariant suites behind the ``verify`` CLI command.

Each suite replays one family of identities or cross-checks on a fixed
grid and reports the worst residual against its tolerance.  All suites
are deterministic (fixed seeds) so repeated runs produce identical
output.  ``level="quick"`` shrinks the grids; ``level="full"`` runs the
complete set.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from . import gen_euler, hypergeom, qcalc, regime
from .gen_euler import GenEulerParams

__all__ = ["SuiteResult", "run_suites", "all_passed"]


@dataclass(frozen=True)
class SuiteResult:
    name: str
    points: int
    max_residual: float
    threshold: float
    passed: bool
    first_failure: str = ""


class _Tracker:
    def __init__(self, name: str, threshold: float):
        self.name = name
        self.threshold = threshold
        self.points = 0
        self.worst = 0.0
        self.first_failure = ""

    def check(self, residual: float, label: str) -> None:
        self.points += 1
        if residual > self.worst or math.isnan(residual):
            self.worst = residual
        if (residual > self.threshold or math.isnan(residual)) and not self.first_failure:
            self.first_failure = label

    def expect(self, ok: bool, label: str) -> None:
        self.check(0.0 if ok else 1.0, label)

    def result(self) -> SuiteResult:
        return SuiteResult(
            name=self.name,
            points=self.points,
            max_residual=self.worst,
            threshold=self.threshold,
            passed=self.worst <= self.threshold and not self.first_failure,
            first_failure=self.first_failure,
        )


def _rel(a: float, b: float) -> float:
    if a == b:
        return 0.0
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def _qp(a, q, n):
    return qcalc.q_pochhammer(a, q, n)


def _min_factor(a, q, n) -> float:
    """Smallest |1 - a q**k| over k < n; guards degenerate grid points."""
    if n <= 0:
        return 1.0
    return min(abs(1.0 - a * q**k) for k in range(n))


def _suite_q_identities(level: str) -> SuiteResult:
    t = _Tracker("q-pochhammer-identities", 1e-11)
    qs = (0.1, 0.3, 0.5, 0.7, 0.9, 0.99) if level == "full" else (0.3, 0.7, 0.99)
    top = 12 if level == "full" else 6
    avals = (-2.0, -0.5, 0.3, 0.9, 1.7)
    for q in qs:
        for n in range(top + 1):
            for k in range(top + 1):
                for a in avals:
                    label = f"q={q} n={n} k={k} a={a}"
                    if k <= n:
                        den = _qp(a, q, k)
                        if abs(den) > 1e-9:
                            t.check(_rel(_qp(a * q**k, q, n - k), _qp(a, q, n) / den),
                                    "id-shift " + label)
                        t.check(
                            _rel(
                                _qp(q**-n, q, k),
                                _qp(q, q, n) / _qp(q, q, n - k)
                                * (-1.0) ** k * q ** (k * (k - 1) // 2 - n * k),
                            ),
                            "id-negexp " + label,
                        )
                    den = _qp(a, q, n)
                    if abs(den) > 1e-9:
                        t.check(
                            _rel(_qp(a * q**n, q, k), _qp(a, q, k) * _qp(a * q**k, q, n) / den),
                            "id-swap " + label,
                        )
                    t.check(
                        _rel(_qp(a, q, n + k), _qp(a, q, n) * _qp(a * q**n, q, k)),
                        "id-split " + label,
                    )
                    if a != 0:
                        t.check(
                            _rel(
                                _qp(a, q, n),
                                _qp(q ** (1 - n) / a, q, n) * (-a) ** n
                                * q ** (n * (n - 1) // 2),
                            ),
                            "id-reverse " + label,
                        )
                        # skip configurations where a factor on either side
                        # vanishes (e.g. a == q): both sides are rounding
                        # noise and a relative comparison is meaningless
                        degenerate = min(
                            _min_factor(q ** (1 - k) / a, q, n),
                            _min_factor(a * q**-n, q, k),
                            _min_factor(q / a, q, n),
                        ) < 1e-9
                        if not degenerate:
                            t.check(
                                _rel(
                                    _qp(a * q**-n, q, k),
                                    _qp(q / a, q, n) / _qp(q ** (1 - k) / a, q, n)
                                    * _qp(a, q, k) * q ** (-n * k),
                                ),
                                "id-negshift " + label,
                            )
    return t.result()


def _suite_q_number_limit(level: str) -> SuiteResult:
    t = _Tracker("q-number-classical-limit", 1e-4)
    for n in range(1, 13):
        t.check(abs(qcalc.q_number(n, 1.0 - 1e-6) - n), f"n={n}")
    return t.result()


def _suite_q_exponentials(level: str) -> SuiteResult:
    t = _Tracker("q-exponential-inverse-pair", 1e-11)
    qs = (0.1, 0.3, 0.5, 0.7, 0.9, 0.99) if level == "full" else (0.3, 0.7, 0.99)
    for q in qs:
        for frac in (-0.8, -0.3, 0.2, 0.7, 0.95):
            xi = frac / (1.0 - q)
            t.check(abs(qcalc.e_q(xi, q) * qcalc.E_q(-xi, q) - 1.0), f"q={q} xi={xi}")
    return t.result()


def _suite_q_factorial(level: str) -> SuiteResult:
    t = _Tracker("q-factorial-consistency", 1e-13)
    for q in (0.1, 0.5, 0.9, 0.99):
        for n in range(13):
            t.check(
                _rel(qcalc.q_factorial(n, q), _qp(q, q, n) / (1.0 - q) ** n),
                f"q={q} n={n}",
            )
    return t.result()


def _suite_q_binomial_theorem(level: str) -> SuiteResult:
    # negative a with q near 1 needs cancellation beyond doubles: keep the
    # grid to well-conditioned pairs
    t = _Tracker("q-binomial-theorem", 1e-11)
    pairs = [(q, a) for q in (0.1, 0.3, 0.5, 0.7) for a in (-0.9, -0.5, 0.3, 0.6, 0.9)]
    pairs += [(q, a) for q in (0.9, 0.99) for a in (0.3, 0.6, 0.9)]
    for q, a in pairs:
        target = 1.0 / qcalc.q_pochhammer_infinite(a, q)
        acc, term, n = 0.0, 1.0, 0
        while abs(term) > 1e-17 * (1.0 + abs(acc)) and n < 20000:
            acc += term
            n += 1
            term *= a / (1.0 - q**n)
        t.check(_rel(acc, target), f"q={q} a={a}")
    return t.result()


def _suite_wall_laguerre(level: str) -> SuiteResult:
    t = _Tracker("wall-laguerre-limit", 1e-3)
    q = 1.0 - 1e-5
    degrees = range(7) if level == "full" else range(4)
    for n in degrees:
        for alpha in (0, 1, 2):
            for x in (0.1, 0.5, 1.0, 2.0):
                wall_val = hypergeom.wall_poly(n, x * (1.0 - q), q**alpha, q)
                lag = (
                    math.factorial(n)
                    / hypergeom._rising(alpha + 1.0, n)
                    * hypergeom.laguerre_poly(n, float(alpha), x)
                )
                t.check(abs(wall_val - lag), f"n={n} alpha={alpha} x={x}")
    return t.result()


def _suite_vandermonde(level: str) -> SuiteResult:
    # terminating 2phi1 at argument q; degree graded with q because the
    # alternating (q**-n; q)_k growth exceeds double cancellation room at
    # small q: n <= 10 is testable at 1e-11 only for q >= 0.95
    t = _Tracker("phi21-terminating-evaluation", 1e-11)
    rng = random.Random(20260810)
    reps = 4 if level == "full" else 1
    grid = ((0.5, 4), (0.8, 7), (0.9, 8), (0.95, 10), (0.98, 10))
    for q, top in grid:
        for n in range(top + 1):
            for _ in range(reps):
                b = rng.uniform(0.1, 0.7)
                c = rng.uniform(0.1, 0.7)
                lhs = hypergeom.phi_rs(
                    hypergeom.SeriesSpec((hypergeom.QPower(-n), b), (c,), q, q)
                )
                rhs = _qp(c / b, q, n) * b**n / _qp(c, q, n)
                t.check(
                    abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)),
                    f"q={q} n={n} b={b:.3f} c={c:.3f}",
                )
    return t.result()


def _suite_wall_reflection(level: str) -> SuiteResult:
    t = _Tracker("wall-reflection-identity", 1e-10)
    tops = 7 if level == "full" else 4
    for q in (0.3, 0.5, 0.7, 0.9):
        for n in range(tops):
            for N in range(n + 1):
                for x in (0.1, 0.2, 0.5):
                    if q <= 0.3 and n >= 6 and x >= 0.5:
                        # series terms peak past 1e6 there; the identity
                        # cannot be resolved to 1e-10 in doubles
                        continue
                    t.check(
                        hypergeom.wall_reflection_residual(n, N, x, q),
                        f"n={n} N={N} x={x} q={q}",
                    )
    return t.result()


def _suite_heine(level: str) -> SuiteResult:
    t = _Tracker("finite-heine-transformation", 1e-10)
    rng = random.Random(4059)
    cases = [(3, 0.3, 0.5, 0.9, 0.4, 0.6)]
    for m, (q, tt, lam) in enumerate([(0.5, 0.8, 0.3), (0.7, -0.6, 0.5), (0.9, 0.4, 1.0)], start=2):
        xi = (1.0 - q) * lam
        cases.append((m, tt, q**-m * tt * xi, q ** (1 - m) * xi, q / tt, q))
    count = 12 if level == "full" else 4
    for _ in range(count):
        cases.append(
            (
                rng.randint(0, 5),
                rng.uniform(0.1, 0.9),
                rng.uniform(0.1, 0.9),
                rng.uniform(0.1, 0.9),
                rng.uniform(0.1, 0.9),
                rng.choice((0.4, 0.6, 0.8)),
            )
        )
    for n, alpha, beta, gamma, tau, q in cases:
        t.check(
            hypergeom.heine_transform_residual(n, alpha, beta, gamma, tau, q),
            f"n={n} q={q}",
        )
    return t.result()


def _grid(level: str):
    qs = (0.3, 0.6, 0.9, 0.99)
    ms = (0, 1, 2, 5, 10) if level == "full" else (0, 2, 10)
    fracs = (0.25, 0.5, 0.75)
    for q in qs:
        for m in ms:
            for f in fracs:
                yield GenEulerParams(q, m, f * q**m / (1.0 - q))


def _suite_head_cancellation(level: str) -> SuiteResult:
    t = _Tracker("pgf-head-cancellation", 1e-9)
    ms = (1, 2, 3, 5) if level == "full" else (1, 3, 5)
    for q in (0.3, 0.6, 0.9, 0.99):
        for m in ms:
            for f in (0.25, 0.5, 0.75):
                params = GenEulerParams(q, m, f * q**m / (1.0 - q))
                for tt in (-1.0, -0.5, 0.3, 0.7, 1.0):
                    t.check(
                        abs(gen_euler.pgf_head_cancellation(tt, params)),
                        f"q={q} m={m} f={f} t={tt}",
                    )
    return t.result()


def _suite_normalization(level: str) -> SuiteResult:
    t = _Tracker("pmf-normalization", 1e-9)
    for params in _grid(level):
        table = gen_euler.pmf_table(params, 1e-10)
        total = sum(table.probs) + table.tail_bound
        t.check(abs(total - 1.0), f"{params}")
        t.expect(all(p >= 0.0 for p in table.probs), f"nonneg {params}")
    return t.result()


def _suite_pgf_agreement(level: str) -> SuiteResult:
    t = _Tracker("pgf-closed-vs-bruteforce", 1e-9)
    for params in _grid(level):
        for tt in (-1.0, -0.5, 0.0, 0.3, 0.7, 1.0):
            closed = gen_euler.pgf(tt, params)
            brute = gen_euler.pgf_bruteforce(tt, params)
            t.check(abs(closed - brute) / max(1.0, abs(closed), abs(brute)),
                    f"{params} t={tt}")
    return t.result()


def _suite_mean(level: str) -> SuiteResult:
    t = _Tracker("mean-closed-vs-bruteforce", 1e-9)
    for params in _grid(level):
        mu, _ = gen_euler.moments_bruteforce(params)
        t.check(abs(gen_euler.mean(params) - mu), f"{params}")
    return t.result()


def _suite_variance(level: str) -> SuiteResult:
    t = _Tracker("variance-closed-vs-bruteforce", 1e-8)
    for params in _grid(level):
        _, var = gen_euler.moments_bruteforce(params)
        t.check(abs(gen_euler.variance(params) - var), f"{params}")
    return t.result()


def _suite_pgf_moment_relations(level: str) -> SuiteResult:
    t = _Tracker("pgf-moment-relations", 1e-9)
    for params in _grid(level):
        q = params.q
        gq = gen_euler.pgf(q, params)
        gq2 = gen_euler.pgf(q * q, params)
        mean_from_pgf = (1.0 - gq) / (1.0 - q)
        var_from_pgf = (gq2 - gq * gq) / (1.0 - q) ** 2
        t.check(abs(mean_from_pgf - gen_euler.mean(params)) * 10.0, f"mean {params}")
        t.check(abs(var_from_pgf - gen_euler.variance(params)), f"var {params}")
    return t.result()


def _suite_euler_reduction(level: str) -> SuiteResult:
    t = _Tracker("euler-distribution-reduction", 1e-10)
    for q in (0.3, 0.6, 0.9, 0.99):
        for f in (0.25, 0.5, 0.75):
            lam = f / (1.0 - q)
            params = GenEulerParams(q, 0, lam)
            for j in range(13):
                closed = lam**j / qcalc.q_factorial(j, q) * qcalc.E_q(-lam, q)
                t.check(abs(gen_euler.pmf(j, params) - closed) * 10.0, f"pmf q={q} j={j}")
            for tt in (-1.0, -0.5, 0.3, 0.7, 1.0):
                ref = qcalc.q_pochhammer_infinite((1.0 - q) * lam, q) / \
                    qcalc.q_pochhammer_infinite((1.0 - q) * lam * tt, q)
                t.check(abs(gen_euler.pgf(tt, params) - ref), f"pgf q={q} t={tt}")
            t.check(
                abs(gen_euler.mandel_q(params) - (q - 1.0) * lam),
                f"mandel q={q} lam={lam}",
            )
    return t.result()


def _suite_classical_limit(level: str) -> SuiteResult:
    t = _Tracker("classical-poisson-limit", 5e-3)
    q = 1.0 - 1e-4
    ms = (0, 1, 2, 3) if level == "full" else (0, 2)
    for m in ms:
        for lam in (0.2, 0.8):
            params = GenEulerParams(q, m, lam)
            for j in range(13):
                t.check(
                    abs(gen_euler.pmf(j, params) - gen_euler.pmf_classical_limit(j, lam, m)),
                    f"pmf m={m} lam={lam} j={j}",
                )
            for tt in (-1.0, -0.5, 0.3, 0.7, 1.0):
                t.check(
                    abs(gen_euler.pgf(tt, params) - gen_euler.pgf_classical_limit(tt, lam, m)),
                    f"pgf m={m} lam={lam} t={tt}",
                )
    return t.result()


def _suite_point_mass(level: str) -> SuiteResult:
    t = _Tracker("point-mass-at-index-m", 1e-12)
    for q in (0.3, 0.6, 0.9):
        for m in (0, 1, 2, 5, 10):
            params = GenEulerParams(q, m, 0.0)
            for j in range(m + 4):
                expected = 1.0 if j == m else 0.0
                t.check(abs(gen_euler.pmf(j, params) - expected), f"q={q} m={m} j={j}")
            t.expect(gen_euler.quantile(0.0, params) == m, f"quantile q={q} m={m}")
    return t.result()


def _suite_delta_identities(level: str) -> SuiteResult:
    t = _Tracker("discriminant-identities", 1e-10)
    qs = [0.2 + 0.05 * i for i in range(16)]
    tops = 21 if level == "full" else 11
    for q in qs:
        for m in range(1, tops):
            disc = regime.sign_poly_discriminant(q, m)
            qm = q**m
            a = qm * (1.0 + q) - 2.0
            b = qm * (2.0 * qcalc.q_number(m, q) + qm) - 1.0
            c = -qcalc.q_number(m, q)
            t.check(_rel(disc, b * b - 4.0 * a * c), f"quad q={q} m={m}")
            t.check(
                _rel(disc, (qm - 1.0) / (1.0 - q) ** 2 * regime.cubic_delta(q, m)),
                f"cubic q={q} m={m}",
            )
            t.check(
                _rel(
                    regime.cubic_delta(q, m),
                    regime.CubicCoeffs.from_q(q).evaluate(qm),
                ),
                f"horner q={q} m={m}",
            )
    return t.result()


def _suite_dichotomy(level: str) -> SuiteResult:
    t = _Tracker("discriminant-sign-dichotomy", 0.0)
    for q in (0.2, 0.5, 0.7, 0.8, regime.Q_CRITICAL):
        for m in range(1, 31):
            t.expect(regime.sign_poly_discriminant(q, m) < 0.0, f"low q={q} m={m}")
    for q in (0.85, 0.9, 0.95, 0.99):
        m_q = regime.m_threshold(q)
        for m in range(1, 41):
            disc = regime.sign_poly_discriminant(q, m)
            if abs(disc) <= 1e-12:
                continue
            t.expect((disc > 0.0) == (m <= m_q), f"high q={q} m={m}")
    return t.result()


def _suite_cardano(level: str) -> SuiteResult:
    t = _Tracker("cubic-root-residuals", 1e-10)
    for q in (0.85, 0.9, 0.95, 0.99):
        zeta = regime.threshold_root(q)
        t.check(abs(regime.CubicCoeffs.from_q(q).evaluate(zeta)), f"residual q={q}")
        t.check(abs(zeta - regime._bisect_root(q)), f"bisection q={q}")
        t.expect(0.0 < zeta < q, f"interval q={q}")
    return t.result()


def _suite_cardano_sign(level: str) -> SuiteResult:
    t = _Tracker("cardano-discriminant-sign-flip", 0.0)
    t.expect(regime.cardano_discriminant(regime.Q_CRITICAL - 1e-3) > 0.0, "below q0")
    t.expect(regime.cardano_discriminant(regime.Q_CRITICAL + 1e-3) < 0.0, "above q0")
    t.expect(regime.cardano_discriminant(0.5) > 0.0, "q=0.5")
    t.expect(regime.cardano_discriminant(0.95) < 0.0, "q=0.95")
    return t.result()


def _suite_lambda_roots(level: str) -> SuiteResult:
    t = _Tracker("sign-poly-root-residuals", 1e-9)
    for q in (0.85, 0.9, 0.95, 0.99):
        m_q = regime.m_threshold(q)
        for m in range(1, min(m_q, 8) + 1):
            roots = regime.lambda_roots(q, m)
            t.expect(roots is not None, f"exists q={q} m={m}")
            if roots is None:
                continue
            lam_p, lam_m = roots
            t.check(abs(regime.sign_poly(lam_p, q, m)), f"res+ q={q} m={m}")
            t.check(abs(regime.sign_poly(lam_m, q, m)), f"res- q={q} m={m}")
            t.expect(lam_p < lam_m, f"order q={q} m={m}")
            mid = 0.5 * (lam_p + lam_m)
            t.expect(regime.sign_poly(mid, q, m) > 0.0, f"mid q={q} m={m}")
            domain = q**m / (1.0 - q)
            t.expect(0.0 < lam_p and lam_m < domain, f"inside q={q} m={m}")
    return t.result()


def _suite_classifier(level: str) -> SuiteResult:
    t = _Tracker("classifier-vs-moment-oracle", 0.0)
    rng = random.Random(987654321)
    want = 200 if level == "full" else 50
    done = 0
    while done < want:
        q = rng.uniform(0.3, 0.99)
        m = rng.randint(0, 8)
        lam = rng.uniform(0.02, 0.95) * q**m / (1.0 - q)
        if m >= 1 and abs(regime.sign_poly(lam, q, m)) < 1e-8 * max(1.0, lam * lam):
            continue
        t.expect(
            regime.classify(lam, q, m) == regime.classify_from_moments(lam, q, m),
            f"q={q:.4f} m={m} lam={lam:.4f}",
        )
        done += 1
    return t.result()


def _suite_sampling(level: str) -> SuiteResult:
    t = _Tracker("sampling-moment-recovery", 1.0)
    points = [(0.6, 1, 0.5), (0.9, 2, 2.0), (0.35, 0, 1.0)]
    n = 100_000
    if level != "full":
        points = points[:1]
        n = 20_000
    for q, m, lam in points:
        params = GenEulerParams(q, m, lam)
        stream = gen_euler.SampleStream(params, seed=12345)
        draws = gen_euler.sample(stream, n)
        replay = gen_euler.sample(gen_euler.SampleStream(params, seed=12345), n)
        t.expect(draws == replay, f"replay q={q} m={m}")
        emp = sum(qcalc.q_number(j, q) for j in draws) / n
        se = math.sqrt(gen_euler.variance(params) / n)
        t.check(abs(emp - gen_euler.mean(params)) / (4.0 * se), f"mean q={q} m={m}")
    return t.result()


_SUITES = (
    _suite_q_identities,
    _suite_q_number_limit,
    _suite_q_exponentials,
    _suite_q_factorial,
    _suite_q_binomial_theorem,
    _suite_wall_laguerre,
    _suite_vandermonde,
    _suite_wall_reflection,
    _suite_heine,
    _suite_head_cancellation,
    _suite_normalization,
    _suite_pgf_agreement,
    _suite_mean,
    _suite_variance,
    _suite_pgf_moment_relations,
    _suite_euler_reduction,
    _suite_classical_limit,
    _suite_point_mass,
    _suite_delta_identities,
    _suite_dichotomy,
    _suite_cardano,
    _suite_cardano_sign,
    _suite_lambda_roots,
    _suite_classifier,
    _suite_sampling,
)


def run_suites(level: str = "quick") -> list:
    """Run every suite at the given level; returns a list of SuiteResult."""
    if level not in ("quick", "full"):
        raise ValueError(f"level must be 'quick' or 'full', got {level!r}")
    return [suite(level) for suite in _SUITES]


def all_passed(results) -> bool:
    return all(r.passed for r in results)
