"""Command-line entry points for the three verification workflows.

    cullen-lehmer bounds       run the exclusion cascade, print each step
    cullen-lehmer exceptional  enumerate exceptional-prime candidates and
                               check uniqueness over a range of n
    cullen-lehmer screen       refute the Lehmer necessary conditions on a
                               set of n by residue witness search

Every flag can also be set through an environment variable with the
CULLEN_ prefix (flag --trial-limit  ->  CULLEN_TRIAL_LIMIT); explicit
flags win.  Exit codes: 0 clean, 1 a check failed (uniqueness violation,
incomplete cascade, undecided n), 2 usage or configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import os
import sys
from pathlib import Path

from . import arith, bounds, exceptional, screen, structure

ENV_PREFIX = "CULLEN_"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _env(name: str, default, cast):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if raw is None:
        return default
    try:
        if cast is bool:
            return raw.strip().lower() in ("1", "true", "yes", "on")
        return cast(raw)
    except ValueError:
        print(
            f"invalid value {raw!r} for {ENV_PREFIX}{name.upper().replace('-', '_')}",
            file=sys.stderr,
        )
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cullen-lehmer",
        description="Screens Cullen numbers n*2^n + 1 against the Lehmer totient condition.",
        epilog=f"Every flag has an environment override: {ENV_PREFIX}<FLAG> "
        f"(e.g. {ENV_PREFIX}TRIAL_LIMIT); explicit flags win.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument(
            "--format",
            choices=("human", "jsonl", "csv"),
            default=_env("format", "human", str),
            help="report format (default human)",
        )
        p.add_argument(
            "--output",
            default=_env("output", None, str),
            help="write records to this file instead of stdout; for screen this "
            "is also the resumable results file",
        )
        p.add_argument(
            "--min-omega",
            type=int,
            default=_env("min-omega", bounds.LEHMER_MIN_OMEGA, int),
            help="distinct-prime-factor lower bound for Lehmer numbers (default 14)",
        )
        p.add_argument(
            "--workers",
            type=int,
            default=_env("workers", 1, int),
            help="worker processes for scans and screens (default 1)",
        )

    p_bounds = sub.add_parser("bounds", help="run the exclusion cascade")
    common(p_bounds)

    p_exc = sub.add_parser("exceptional", help="exceptional-prime candidates and uniqueness")
    common(p_exc)
    p_exc.add_argument(
        "--n-max",
        type=int,
        default=_env("n-max", 10_000, int),
        help="scan 3 <= n <= n_max (default 10000)",
    )

    p_scr = sub.add_parser("screen", help="witness-search a set of n")
    common(p_scr)
    p_scr.add_argument(
        "--set",
        dest="which_set",
        choices=("pow23", "range", "file"),
        default=_env("set", "pow23", str),
        help="pow23: n = 2^a*3^b <= n-max; range: 1..n-max; file: one n per line",
    )
    p_scr.add_argument(
        "--n-max", type=int, default=_env("n-max", 3000, int), help="range cap (default 3000)"
    )
    p_scr.add_argument("--n-file", default=_env("n-file", None, str), help="file of n values")
    p_scr.add_argument(
        "--trial-limit",
        type=int,
        default=_env("trial-limit", screen.DEFAULT_TRIAL_LIMIT, int),
        help="scan prime witnesses up to this bound (default 10^6)",
    )
    p_scr.add_argument(
        "--rho-budget",
        type=int,
        default=_env("rho-budget", arith.DEFAULT_RHO_BUDGET, int),
        help="iteration budget for cycle factoring (default 10^6)",
    )
    p_scr.add_argument(
        "--cn-cap",
        type=int,
        default=_env("cn-cap", structure.DEFAULT_CN_CAP, int),
        help="materialize C_n only for n up to this cap (default 300000)",
    )
    p_scr.add_argument(
        "--mr-rounds",
        type=int,
        default=_env("mr-rounds", arith.DEFAULT_MR_ROUNDS, int),
        help="probable-prime rounds above the deterministic range (default 64)",
    )
    p_scr.add_argument(
        "--resume",
        action="store_true",
        default=_env("resume", False, bool),
        help="reuse matching records already in --output",
    )
    p_scr.add_argument(
        "--allow-undecided",
        action="store_true",
        default=_env("allow-undecided", False, bool),
        help="exit 0 even when some n stay undecided",
    )
    return parser


def _config_digest(args) -> str:
    payload = dict(sorted(vars(args).items()))
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, default=str).encode()
    ).hexdigest()[:12]


def _config_line(args) -> str:
    """The full effective run configuration with a stable hash, embedded in
    every report so runs can be matched to their settings."""
    shown = " ".join(f"{k}={v}" for k, v in sorted(vars(args).items()))
    return f"run config: {shown} (hash {_config_digest(args)})"


class _Emitter:
    """Streams records in the chosen format to stdout or a file."""

    def __init__(self, fmt: str, output: str | None):
        self.fmt = fmt
        self.fh = open(output, "w", encoding="utf-8") if output else sys.stdout
        self.owns = output is not None
        self._csv = csv.writer(self.fh) if fmt == "csv" else None
        self._csv_header_done = False

    def record(self, d: dict, human: str) -> None:
        if self.fmt == "jsonl":
            self.fh.write(json.dumps(d, sort_keys=True) + "\n")
        elif self.fmt == "csv":
            if not self._csv_header_done:
                self._csv.writerow(sorted(d))
                self._csv_header_done = True
            self._csv.writerow([d[k] for k in sorted(d)])
        else:
            self.fh.write(human + "\n")
        self.fh.flush()

    def line(self, text: str) -> None:
        # summary lines; in structured formats they go to stderr so the
        # record stream stays machine-readable
        if self.fmt == "human":
            self.fh.write(text + "\n")
            self.fh.flush()
        else:
            print(text, file=sys.stderr)

    def close(self) -> None:
        if self.owns:
            self.fh.close()


def cmd_bounds(args) -> int:
    chain = bounds.refine_chain(args.min_omega)
    emitter = _Emitter(args.format, args.output)
    try:
        emitter.line(_config_line(args))
        digest = _config_digest(args)
        for step in chain.steps:
            d = dataclasses.asdict(step)
            d["assumptions"] = list(step.assumptions)
            d["config_hash"] = digest
            emitter.record(
                d,
                f"[{step.anchor}] {step.label}: {step.detail}"
                + (
                    f"  (n_bound {step.n_bound} <= stated {step.stated_n_bound})"
                    if step.n_bound and step.stated_n_bound
                    else ""
                )
                + f"  [assuming: {', '.join(step.assumptions)}]",
            )
        if chain.complete:
            ff = chain.final_form
            emitter.line(
                f"final form: n = 2^α·3^β, n < {ff.n_max:,}, k ≤ {ff.k_max} "
                f"(computed n < {ff.n_max_computed:,})"
            )
            return EXIT_OK
        emitter.line(f"chain incomplete (min_omega = {chain.min_omega})")
        return EXIT_CHECK_FAILED
    finally:
        emitter.close()


def cmd_exceptional(args) -> int:
    if args.n_max < 3:
        print("--n-max must be >= 3", file=sys.stderr)
        return EXIT_USAGE
    emitter = _Emitter(args.format, args.output)
    try:
        emitter.line(_config_line(args))
        rows = exceptional.scan_exceptional(3, args.n_max)
        for inst, cands in rows:
            for c in cands:
                d = {
                    "n": inst.n,
                    "w": c.w,
                    "rho": c.rho,
                    "exponent": c.exponent,
                    "p": c.p,
                    "p_bits": c.p.bit_length(),
                    "is_prime": c.is_prime,
                    "certainty": arith.prime_certainty(c.p) if c.is_prime else "composite",
                    "bound_ok": c.bound_ok,
                }
                emitter.record(
                    d,
                    f"n={inst.n}: w={c.w} rho={c.rho} p={c.rho}*2^{c.exponent}+1 "
                    f"({c.p.bit_length()} bits) prime={c.is_prime} bound_ok={c.bound_ok}",
                )
        violations = exceptional.uniqueness_scan(args.n_max, workers=args.workers)
        emitter.line(
            f"{len(violations)} uniqueness violations in 3..{args.n_max}"
            + (f": {violations}" if violations else "")
        )
        return EXIT_CHECK_FAILED if violations else EXIT_OK
    finally:
        emitter.close()


def cmd_screen(args) -> int:
    if args.which_set == "file":
        if not args.n_file:
            print("--set file requires --n-file", file=sys.stderr)
            return EXIT_USAGE
        try:
            text = Path(args.n_file).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"cannot read {args.n_file}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        try:
            n_values = [int(line) for line in text.split()]
        except ValueError:
            print(f"{args.n_file} must contain one integer per line", file=sys.stderr)
            return EXIT_USAGE
    elif args.which_set == "range":
        n_values = list(range(1, args.n_max + 1))
    else:
        n_values = screen.enumerate_2a3b(args.n_max)
    if not n_values or min(n_values) < 1:
        print("no valid n to screen (need n >= 1)", file=sys.stderr)
        return EXIT_USAGE
    if args.resume and not args.output:
        print("--resume requires --output", file=sys.stderr)
        return EXIT_USAGE

    cfg = screen.ScreenConfig(
        trial_limit=args.trial_limit,
        rho_budget=args.rho_budget,
        min_omega=args.min_omega,
        cn_cap=args.cn_cap,
        mr_rounds=args.mr_rounds,
    )
    cfg_hash = screen.config_hash(cfg)

    stream_fmt = args.format if args.output is None else "human"
    emitter = _Emitter(stream_fmt, None)

    def show(v: screen.Verdict) -> None:
        d = screen.record_dict(v, cfg_hash)
        emitter.record(
            d,
            f"n={v.n}: {v.status}"
            + (f" witness={v.witness}" if v.witness else "")
            + f"  ({v.reason})"
            + f"  [trial<={v.trial_limit_used}, rho={v.rho_budget_used}, {v.elapsed:.2f}s]",
        )

    report = screen.screen_set(
        n_values,
        cfg,
        workers=args.workers,
        output_path=args.output,
        resume=args.resume,
        on_verdict=show if args.output is None else None,
    )
    if args.output is not None:
        for v in report.verdicts:
            show(v)

    emitter.line(_config_line(args))
    emitter.line(
        f"screened {len(report.verdicts)} values (config {report.config_hash}, "
        f"{report.reused} reused, {report.computed} computed, {report.elapsed:.1f}s)"
    )
    for status in sorted(report.counts):
        emitter.line(f"  {status}: {report.counts[status]}")
    if report.undecided:
        emitter.line(f"undecided n: {report.undecided}")
    else:
        emitter.line("undecided n: none")
    if report.undecided and not args.allow_undecided:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors already; normalize --help's 0
        return int(exc.code or 0)
    handlers = {"bounds": cmd_bounds, "exceptional": cmd_exceptional, "screen": cmd_screen}
    try:
        return handlers[args.command](args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main() -> None:
    try:
        sys.exit(main())
    except BrokenPipeError:
        # downstream consumer (e.g. head) closed the pipe; not an error
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        sys.exit(0)


if __name__ == "__main__":
    console_main()
