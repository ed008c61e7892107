"""Command-line driver for path generation and verification suites.

Subcommands: generate, verify-law, verify-modulus, verify-etemadi, bounds.
Every stochastic run requires an explicit --seed (there is no ambient
entropy) and echoes its full configuration into the output, so any output
file can be regenerated exactly from its own header.  Exit status is 0 only
when every check in the run passed (or all files were written); usage and
validation problems exit 2, runtime failures exit 1.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .etemadi import etemadi_suite
from .modulus import interval_tail_bound, modulus_tail_term, modulus_tail_suite
from .noise import NoiseSource
from .path import build_path
from .verify import law_suite

_SEED_MAX = 1 << 64


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < _SEED_MAX:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit int")
    return value


def _float_list(text: str) -> list:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _int_list(text: str) -> list:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _write_text(out: str, text: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", newline="\n") as fh:
        fh.write(text)


def _emit_report(report, args) -> int:
    if args.format != "json":
        raise ValueError("verification reports are JSON only (--format json)")
    _write_text(args.out, report.to_json() + "\n")
    return 0 if report.passed else 1


def cmd_generate(args) -> int:
    if args.format != "csv":
        raise ValueError("generate writes CSV only (--format csv)")
    if args.paths < 1:
        raise ValueError("need at least one path")
    if args.seed + args.paths > _SEED_MAX:
        raise ValueError("seed range exceeds unsigned 64-bit integers")
    if args.out == "-":
        raise ValueError("generate writes files; pass --out PATH")
    base = Path(args.out)
    for i in range(args.paths):
        seed = args.seed + i
        path = build_path(args.horizon, args.level, NoiseSource(seed))
        target = base if args.paths == 1 else base.with_name(
            f"{base.stem}.seed{seed}{base.suffix}"
        )
        with open(target, "w", newline="\n") as fh:
            path.to_csv(fh)
    return 0


def cmd_verify_law(args) -> int:
    report = law_suite(
        n_paths=args.paths,
        base_seed=args.seed,
        horizon=args.horizon,
        level=args.level,
        workers=args.workers,
    )
    return _emit_report(report, args)


def cmd_verify_modulus(args) -> int:
    report = modulus_tail_suite(
        window_level=args.level,
        measure_level=args.measure_level,
        n_paths=args.paths,
        base_seed=args.seed,
        alphas=args.alphas,
        horizon=args.horizon,
        workers=args.workers,
    )
    return _emit_report(report, args)


def cmd_verify_etemadi(args) -> int:
    report = etemadi_suite(
        alphas=args.alphas,
        seed=args.seed,
        exact_max_n=args.max_n,
        mc_trials=args.trials,
        gaussian_n=args.gaussian_n,
        gaussian_trials=args.gaussian_trials,
    )
    return _emit_report(report, args)


def cmd_bounds(args) -> int:
    if not args.alphas or any(a <= 0 for a in args.alphas):
        raise ValueError("alpha grid must be non-empty and positive")
    if args.max_n < 1:
        raise ValueError("aggregate tail table needs max-n >= 1")
    rows = []
    for n in args.levels:
        for a in args.alphas:
            rows.append(("interval-tail", n, a, interval_tail_bound(n, a)))
    for n in range(1, args.max_n + 1):
        rows.append(("aggregate-tail", n, None, modulus_tail_term(n)))
    echo = (
        f"levels={','.join(map(str, args.levels))}"
        f" alphas={','.join(repr(a) for a in args.alphas)}"
        f" max-n={args.max_n}"
    )
    if args.format == "csv":
        lines = [f"# dyadicbm-bounds {echo}", "kind,n,alpha,value"]
        for kind, n, a, v in rows:
            alpha = "" if a is None else repr(a)
            lines.append(f"{kind},{n},{alpha},{v:.17g}")
        _write_text(args.out, "\n".join(lines) + "\n")
    else:
        import json

        payload = {
            "config": {
                "levels": args.levels,
                "alphas": args.alphas,
                "max_n": args.max_n,
            },
            "rows": [
                {"kind": kind, "n": n, "alpha": a, "value": v}
                for kind, n, a, v in rows
            ],
        }
        _write_text(args.out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyadicbm",
        description="Brownian paths on dyadic grids: generation and "
        "statistical verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, seeded=True):
        if seeded:
            p.add_argument("--seed", type=_u64, required=True,
                           help="base seed (required; no ambient entropy)")
        p.add_argument("--out", default="-", help="output path ('-' = stdout)")

    g = sub.add_parser("generate", help="write path CSV files")
    add_common(g)
    g.add_argument("--horizon", type=int, default=1)
    g.add_argument("--level", type=int, required=True)
    g.add_argument("--paths", type=int, default=1)
    g.add_argument("--format", choices=["csv", "json"], default="csv")
    g.set_defaults(func=cmd_generate)

    vl = sub.add_parser("verify-law", help="marginal/covariance/increment checks")
    add_common(vl)
    vl.add_argument("--paths", type=int, default=None)
    vl.add_argument("--horizon", type=int, default=None)
    vl.add_argument("--level", type=int, default=None)
    vl.add_argument("--workers", type=int, default=1)
    vl.add_argument("--format", choices=["csv", "json"], default="json")
    vl.set_defaults(func=cmd_verify_law)

    vm = sub.add_parser("verify-modulus", help="oscillation tail checks")
    add_common(vm)
    vm.add_argument("--level", type=int, default=None,
                    help="window level n")
    vm.add_argument("--measure-level", type=int, default=None,
                    help="grid level m >= n used for the maxima")
    vm.add_argument("--paths", type=int, default=None)
    vm.add_argument("--horizon", type=int, default=None)
    vm.add_argument("--alphas", type=_float_list, default=None)
    vm.add_argument("--workers", type=int, default=1)
    vm.add_argument("--format", choices=["csv", "json"], default="json")
    vm.set_defaults(func=cmd_verify_modulus)

    ve = sub.add_parser("verify-etemadi", help="maximal-inequality checks")
    add_common(ve)
    ve.add_argument("--alphas", type=_float_list, default=None)
    ve.add_argument("--max-n", type=int, default=None,
                    help="largest step count for exact enumeration")
    ve.add_argument("--trials", type=int, default=None)
    ve.add_argument("--gaussian-n", type=int, default=None,
                    help="step count for the Gaussian Monte Carlo checks")
    ve.add_argument("--gaussian-trials", type=int, default=None)
    ve.add_argument("--format", choices=["csv", "json"], default="json")
    ve.set_defaults(func=cmd_verify_etemadi)

    b = sub.add_parser("bounds", help="print tail bound tables")
    add_common(b, seeded=False)
    b.add_argument("--levels", type=_int_list, default=[0, 1, 2, 4, 8])
    b.add_argument("--alphas", type=_float_list, default=[0.5, 0.75, 1.0])
    b.add_argument("--max-n", type=int, default=30)
    b.add_argument("--format", choices=["csv", "json"], default="csv")
    b.set_defaults(func=cmd_bounds)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
