"""Command-line surface: evaluate, tabulate, classify, sample, verify.

Every command emits machine-readable CSV or JSON on stdout with floats
printed to 17 significant digits (exact round-trip), LF line endings and
no timestamps, so identical flags produce byte-identical output.  Exit
codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import sys

from . import verify as verify_mod
from .errors import DomainError
from .gen_euler import GenEulerParams, SampleStream, mandel_q, mean, pmf_table, sample, variance
from .qcalc import q_number
from .regime import (
    Q_CRITICAL,
    CubicCoeffs,
    cardano_discriminant,
    classify,
    m_threshold,
    report,
    threshold_root,
)

__all__ = ["main"]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _json_value(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, dict):
        inner = ", ".join(f"{_json_value(k)}: {_json_value(v)}" for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def _emit_json(obj) -> None:
    sys.stdout.write(_json_value(obj) + "\n")


def _emit_csv(header, rows) -> None:
    out = sys.stdout
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")


def _params_from_args(args) -> GenEulerParams:
    if args.zmod is not None:
        if args.zmod < 0:
            raise DomainError(f"zmod must be >= 0, got {args.zmod!r}")
        return GenEulerParams.from_zmod(args.q, args.m, args.zmod)
    return GenEulerParams(args.q, args.m, args.lam)


def _add_param_flags(parser, with_lambda=True) -> None:
    parser.add_argument("--q", type=float, required=True, help="deformation parameter in [0.05, 1)")
    parser.add_argument("--m", type=int, required=True, help="index in [0, 60]")
    if with_lambda:
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument("--lambda", dest="lam", type=float, help="squared label modulus |z|**2")
        group.add_argument("--zmod", type=float, help="label modulus |z| (squared internally)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")


def _cmd_pmf(args) -> int:
    params = _params_from_args(args)
    if not (0.0 < args.tol <= 1e-3):
        raise DomainError(f"tol must lie in (0, 1e-3], got {args.tol!r}")
    table = pmf_table(params, args.tol)
    cum = table.cumulative()
    if args.format == "json":
        _emit_json(
            {
                "q": params.q,
                "m": params.m,
                "lambda": params.lam,
                "tol": args.tol,
                "probs": list(table.probs),
                "cumulative": cum,
                "tail_bound": table.tail_bound,
            }
        )
    else:
        rows = [[j, p, c] for j, (p, c) in enumerate(zip(table.probs, cum))]
        rows.append(["tail_bound", table.tail_bound, ""])
        _emit_csv(("j", "pmf", "cumulative"), rows)
    return 0


def _cmd_moments(args) -> int:
    params = _params_from_args(args)
    mu = mean(params)
    var = variance(params)
    mandel = mandel_q(params) if mu > 0 else None
    regime_name = classify(params.lam, params.q, params.m).value
    record = {
        "q": params.q,
        "m": params.m,
        "lambda": params.lam,
        "mean": mu,
        "variance": var,
        "mandel_q": mandel,
        "regime": regime_name,
    }
    if args.format == "json":
        _emit_json(record)
    else:
        _emit_csv(tuple(record), [list(record.values())])
    return 0


def _cmd_classify(args) -> int:
    params = _params_from_args(args)
    rep = report(params.q, params.m)
    point_regime = classify(params.lam, params.q, params.m).value
    scalars = {
        "q": rep.q,
        "m": rep.m,
        "lambda": params.lam,
        "regime": point_regime,
        "discriminant": rep.discriminant,
        "delta": rep.delta,
        "cardano_disc": rep.cardano_disc,
        "q_critical": rep.q_critical,
        "m_q": rep.m_q,
        "zeta": rep.zeta,
        "lambda_plus": rep.lambda_plus,
        "lambda_minus": rep.lambda_minus,
        "zmod_plus": rep.zmod_plus,
        "zmod_minus": rep.zmod_minus,
        "domain_max": rep.domain_max,
    }
    intervals = [
        {"lo": iv.lo, "hi": iv.hi, "regime": iv.regime.value} for iv in rep.intervals
    ]
    if args.format == "json":
        _emit_json({**scalars, "intervals": intervals})
    else:
        header = tuple(scalars) + ("interval_lo", "interval_hi", "interval_regime")
        rows = [
            list(scalars.values()) + [iv["lo"], iv["hi"], iv["regime"]]
            for iv in intervals
        ]
        _emit_csv(header, rows)
    return 0


def _cmd_phase_diagram(args) -> int:
    if not (0.05 <= args.q_min <= args.q_max <= 0.999):
        raise DomainError(
            f"q range must satisfy 0.05 <= q_min <= q_max <= 0.999, "
            f"got [{args.q_min!r}, {args.q_max!r}]"
        )
    if not (1 <= args.steps <= 10**6):
        raise DomainError(f"steps must lie in [1, 1e6], got {args.steps!r}")
    rows = []
    for i in range(args.steps):
        if args.steps == 1:
            q = args.q_min
        else:
            q = args.q_min + i * (args.q_max - args.q_min) / (args.steps - 1)
        disc = cardano_discriminant(q)
        if q > Q_CRITICAL:
            zeta = threshold_root(q)
            residual = abs(CubicCoeffs.from_q(q).evaluate(zeta))
            if residual >= 1e-9:
                raise ArithmeticError(f"cubic root residual {residual!r} at q={q!r}")
            m_q = m_threshold(q)
        else:
            zeta = None
            m_q = None
        rows.append({"q": q, "cardano_disc": disc, "zeta": zeta, "m_q": m_q})
    if args.format == "json":
        _emit_json(rows)
    else:
        _emit_csv(
            ("q", "cardano_disc", "zeta", "m_q"),
            [[r["q"], r["cardano_disc"], r["zeta"], r["m_q"]] for r in rows],
        )
    return 0


def _cmd_sample(args) -> int:
    params = _params_from_args(args)
    if args.n < 1:
        raise DomainError(f"n must be >= 1, got {args.n!r}")
    stream = SampleStream(params, args.seed)
    draws = sample(stream, args.n)
    q = params.q
    emp_mean = sum(q_number(j, q) for j in draws) / args.n
    summary = {
        "q": params.q,
        "m": params.m,
        "lambda": params.lam,
        "n": args.n,
        "seed": args.seed,
        "mean_q_number": emp_mean,
        "expected_mean": mean(params),
    }
    if args.format == "json":
        _emit_json({**summary, "draws": draws})
    else:
        rows = [[i, d] for i, d in enumerate(draws)]
        rows.append(["mean_q_number", emp_mean])
        rows.append(["expected_mean", mean(params)])
        _emit_csv(("index", "draw"), rows)
    return 0


def _cmd_verify(args) -> int:
    results = verify_mod.run_suites(args.level)
    ok = verify_mod.all_passed(results)
    first_failed = next((r.name for r in results if not r.passed), None)
    if args.format == "json":
        _emit_json(
            {
                "level": args.level,
                "pass": ok,
                "first_failed": first_failed,
                "suites": [
                    {
                        "name": r.name,
                        "points": r.points,
                        "max_residual": r.max_residual,
                        "threshold": r.threshold,
                        "pass": r.passed,
                        "first_failure": r.first_failure or None,
                    }
                    for r in results
                ],
            }
        )
    else:
        rows = [
            [r.name, r.points, r.max_residual, r.threshold, r.passed, r.first_failure]
            for r in results
        ]
        _emit_csv(
            ("name", "points", "max_residual", "threshold", "pass", "first_failure"),
            rows,
        )
    if not ok:
        print(f"verification failed: {first_failed}", file=sys.stderr)
        return 1
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qeuler",
        description="Generalized Euler photon-counting distribution toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pmf", help="tabulate the probability mass function")
    _add_param_flags(p)
    p.add_argument("--tol", type=float, default=1e-10, help="omitted-mass bound")
    p.set_defaults(func=_cmd_pmf)

    p = sub.add_parser("moments", help="mean, variance, Mandel parameter, regime")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("classify", help="regime report for (q, m) and one point")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("phase-diagram", help="cubic discriminant, root and threshold index over a q grid")
    p.add_argument("--q-min", type=float, required=True)
    p.add_argument("--q-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_phase_diagram)

    p = sub.add_parser("sample", help="seeded draws by CDF inversion")
    _add_param_flags(p)
    p.add_argument("--n", type=int, required=True, help="number of draws")
    p.add_argument("--seed", type=int, required=True, help="64-bit unsigned seed")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("verify", help="run the numerical invariant suites")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, OverflowError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
