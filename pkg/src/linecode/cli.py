"""Command line entry point: ``linecode <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import bounds
from .codefile import CONSTRUCTIONS, format_vector, load_code, make_code, read_vector, save_code
from .decoder import (
    DEFAULT_SAMPLES,
    Decoder,
    Exhaustive,
    Sampled,
    count_effective_sets,
    default_strategy,
)
from .errors import InconsistencyError, LinecodeError
from .evalcode import code_parameters, encode, monomial_count
from .experiments import collision_experiment, corrupt, curve_csv, simulate, verify_code

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _strategy(args, code):
    if args.strategy == "exhaustive":
        return Exhaustive()
    if args.strategy == "sampled":
        return Sampled(args.samples, args.seed)
    return default_strategy(code.n, code.m, code.d, args.seed)


def _summary(code) -> dict:
    params = code_parameters(code)
    params["effective_sets"] = count_effective_sets(code.n, code.m, code.d)
    return params


def cmd_mkcode(args) -> int:
    code = make_code(args.q, args.n, args.m, args.d, args.construction, args.seed)
    summary = " ".join(f"{k}={v}" for k, v in _summary(code).items()) + "\n"
    if args.out is None or args.out == "-":
        sys.stdout.write(save_code(code, None))
        sys.stderr.write(summary)
    else:
        save_code(code, args.out)
        sys.stdout.write(summary)
    return EXIT_OK


def cmd_encode(args) -> int:
    code = load_code(args.code)
    if args.message:
        message = read_vector(args.message, code.q, code.dimension)
    else:
        rng = np.random.default_rng(args.seed)
        message = tuple(int(v) for v in rng.integers(0, code.q, size=code.dimension))
        if args.message_out:
            Path(args.message_out).write_text(format_vector(message))
        else:
            sys.stderr.write("message: " + format_vector(message))
    _emit(format_vector(encode(code, message)), args.out)
    return EXIT_OK


def cmd_corrupt(args) -> int:
    code = load_code(args.code)
    word = read_vector(args.input, code.q, code.length)
    received, _ = corrupt(word, args.t, code.q, np.random.default_rng(args.seed))
    _emit(format_vector(received), args.out)
    return EXIT_OK


def cmd_decode(args) -> int:
    code = load_code(args.code)
    received = read_vector(args.input, code.q, code.length)
    report = Decoder(code, _strategy(args, code)).decode(received)
    _emit(json.dumps(report.to_dict(top=args.top), indent=1) + "\n", args.out)
    return EXIT_OK


def _shape_from(args):
    if args.code:
        code = load_code(args.code)
        return code.q, code.n, code.m, code.d, code
    if args.q is None or args.n is None:
        raise LinecodeError("give --code or at least --q and --n")
    return args.q, args.n, args.m, args.d, None


def cmd_analyze(args) -> int:
    q, n, m, d, code = _shape_from(args)
    pc = bounds.point_count_comparison(q, n)
    report: dict = {
        "q": q,
        "n": n,
        "config_points": pc.config_points,
        "weil_bound": round(pc.weil_bound, 4),
        "exceeds_weil_bound": pc.exceeds,
    }
    if m is not None and d is not None:
        f = bounds.RadiusPolynomial(n, m, d)
        max_f, k0 = f.maximum()
        report.update({
            "m": m,
            "d": d,
            "length": n * m,
            "dimension": monomial_count(d),
            "effective_sets": count_effective_sets(n, m, d),
            "f": {str(k): v for k, v in f.table()},
            "max_f": max_f,
            "argmax_k": k0,
            "distance_lower_bound": n * m - max_f,
            "two_effective_sets_hypothesis": m >= d + 2 or n >= d + 2,
        })
    if code is not None and args.collisions:
        rows = collision_experiment(code, args.collisions, args.trials, args.seed)
        report["collisions"] = [
            {"rank": r.rank, "symmetric_difference": r.symmetric_difference,
             "predicted": r.predicted, "observed": r.observed, "within_3sd": r.within_3sd}
            for r in rows
        ]
    _emit(json.dumps(report, indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_mindist(args) -> int:
    if args.code:
        code = load_code(args.code)
    else:
        code = make_code(args.q, args.n, args.m, args.d, args.construction, args.seed)
    d_min = bounds.min_distance_bruteforce(code)
    bound = code_parameters(code)["distance_lower_bound"]
    _emit(f"d_min={d_min} bound={bound}\n", args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    code = load_code(args.code)
    t_max = code.length if args.t_max is None else args.t_max
    points = simulate(code, range(args.t_min, t_max + 1), args.trials, args.seed,
                      _strategy(args, code), args.jobs)
    _emit(curve_csv(points), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    code = load_code(args.code)
    checks = verify_code(code, seed=args.seed)
    lines = [f"{'PASS' if c.ok else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if c.detail else "")
             for c in checks]
    if args.lemmas:
        lem = bounds.check_tableau_lemmas()
        checks.append(lem)
        lines.append(f"{'PASS' if lem.ok else 'FAIL'}  tableau statements ({lem.tableaux} tableaux)")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(c.ok for c in checks) else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="linecode", description="Codes from configurations of lines over F_q.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="output file (default: stdout)")

    def decoding(sp):
        sp.add_argument("--strategy", choices=("auto", "exhaustive", "sampled"), default="auto")
        sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                        help="effective sets examined by the sampled strategy")

    sp = sub.add_parser("mkcode", help="construct a code and write its JSON file")
    for flag in ("--q", "--n", "--m", "--d"):
        sp.add_argument(flag, type=int, required=True)
    sp.add_argument("--construction", choices=CONSTRUCTIONS, default="grid")
    common(sp)
    sp.set_defaults(func=cmd_mkcode)

    sp = sub.add_parser("encode", help="encode a coefficient vector")
    sp.add_argument("--code", required=True)
    sp.add_argument("--message", help="CSV coefficient vector (default: random from --seed)")
    sp.add_argument("--message-out", help="where to save a randomly drawn message")
    common(sp)
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("corrupt", help="add an error of exact weight t")
    sp.add_argument("--code", required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--t", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_corrupt)

    sp = sub.add_parser("decode", help="majority-vote decode a received word")
    sp.add_argument("--code", required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--top", type=int, default=10, help="vote histogram entries to print")
    decoding(sp)
    common(sp)
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("analyze", help="closed-form quantities and point counts")
    sp.add_argument("--code")
    for flag in ("--q", "--n", "--m", "--d"):
        sp.add_argument(flag, type=int)
    sp.add_argument("--collisions", type=int, default=0,
                    help="number of random effective-set pairs for the collision experiment")
    sp.add_argument("--trials", type=int, default=100_000)
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("mindist", help="brute-force minimum distance next to the bound")
    sp.add_argument("--code")
    for flag in ("--q", "--n", "--m", "--d"):
        sp.add_argument(flag, type=int)
    sp.add_argument("--construction", choices=CONSTRUCTIONS, default="grid")
    common(sp)
    sp.set_defaults(func=cmd_mindist)

    sp = sub.add_parser("simulate", help="decoding success rate against error weight")
    sp.add_argument("--code", required=True)
    sp.add_argument("--t-min", type=int, default=0)
    sp.add_argument("--t-max", type=int)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--jobs", type=int, default=1)
    decoding(sp)
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="run the invariant suites on a code")
    sp.add_argument("--code", required=True)
    sp.add_argument("--lemmas", action="store_true", help="also check the tableau statements")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "mindist" and not args.code and None in (args.q, args.n, args.m, args.d):
        sys.stderr.write("linecode mindist: give --code or all of --q --n --m --d\n")
        return EXIT_USAGE
    try:
        return args.func(args)
    except InconsistencyError as exc:
        sys.stderr.write(f"linecode {args.command}: internal invariant violated: {exc}\n")
        return EXIT_INTERNAL
    except LinecodeError as exc:
        sys.stderr.write(f"linecode {args.command}: {exc}\n")
        if "exceed the guard" in str(exc):
            sys.stderr.write("try smaller parameters (q, d) or the sampled strategy\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
