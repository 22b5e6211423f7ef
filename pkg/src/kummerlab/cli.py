"""``kummerlab`` command line: ``count``, ``sweep`` and ``verify``.

Exit status is 0 when every row matches (or every suite passes), 1 on a
verification failure and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from . import counting, suites
from .fpcore import KummerlabError, primes_up_to, validate_primes
from .models import ModelId, ModelInstance

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(KummerlabError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    primes: tuple[int, ...] = ()
    model: ModelId | None = None
    suites: tuple[str, ...] = ()
    params: str | None = None
    sample: int | None = None
    seed: int = 0
    jobs: int = 1
    out: str | None = None
    fmt: str = "csv"


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def parse_param_ranges(text: str | None, p: int, arity: int) -> list[range]:
    """``"2,3"``, ``"1-5,all"`` or ``"all"`` into one range per parameter (values inclusive)."""
    if text is None or text.strip() == "all":
        return [range(p)] * arity
    fields = [f.strip() for f in text.split(",")]
    if len(fields) != arity:
        raise UsageError(f"expected {arity} parameter field(s), got {text!r}")
    out = []
    for f in fields:
        try:
            if f in ("all", "*"):
                out.append(range(p))
            elif "-" in f[1:]:
                lo, hi = (int(x) for x in f.split("-", 1))
                out.append(range(lo % p, hi % p + 1))
            else:
                v = int(f) % p
                out.append(range(v, v + 1))
        except ValueError:
            raise UsageError(f"bad parameter field {f!r}") from None
    return out


def _resolve_primes(args) -> tuple[int, ...]:
    values: list[int] = []
    if args.p is not None:
        values.append(args.p)
    if args.primes:
        values.extend(_parse_int_list(args.primes))
    if args.primes_up_to is not None:
        values.extend(primes_up_to(args.primes_up_to))
        if not values:
            raise UsageError(f"no odd primes up to {args.primes_up_to}")
    try:
        return tuple(validate_primes(values))
    except KummerlabError as exc:
        raise UsageError(str(exc)) from None


def build_config(args) -> RunConfig:
    primes = _resolve_primes(args)
    model = None
    if getattr(args, "model", None) is not None:
        try:
            model = ModelId.from_tag(args.model)
        except KummerlabError as exc:
            raise UsageError(str(exc)) from None
    chosen: tuple[str, ...] = ()
    if args.command == "verify":
        names: list[str] = []
        for item in args.suite or ["all"]:
            names.extend(n.strip() for n in item.split(",") if n.strip())
        if "all" in names:
            names = list(suites.SUITES)
        unknown = [n for n in names if n not in suites.SUITES]
        if unknown:
            raise UsageError(f"unknown suite(s) {', '.join(unknown)}; expected {', '.join(suites.SUITES)}")
        chosen = tuple(dict.fromkeys(names))
    else:
        if model is None:
            raise UsageError(f"{args.command} needs --model")
        if not primes:
            raise UsageError(f"{args.command} needs --p, --primes or --primes-up-to")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    if args.sample is not None and args.sample < 1:
        raise UsageError("--sample must be positive")
    if not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    return RunConfig(
        command=args.command,
        primes=primes,
        model=model,
        suites=chosen,
        params=getattr(args, "params", None),
        sample=args.sample,
        seed=args.seed,
        jobs=args.jobs,
        out=args.out,
        fmt=args.format,
    )


@contextlib.contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _filter_for(ranges: list[range]):
    return lambda params: all(v in r for v, r in zip(params, ranges))


def cmd_count(cfg: RunConfig) -> int:
    model = cfg.model
    reps = []
    for p in cfg.primes:
        ranges = parse_param_ranges(cfg.params, p, len(model.param_names))
        if any(len(r) != 1 for r in ranges):
            raise UsageError("count needs one value per parameter; use sweep for ranges")
        try:
            m = ModelInstance(model, p, tuple(r[0] for r in ranges))
        except KummerlabError as exc:
            raise UsageError(str(exc)) from None
        reps.append(counting.report(m))
    with _output(cfg.out) as fh:
        counting.write_reports(reps, fh, cfg.fmt)
    return EXIT_OK if all(r.match for r in reps) else EXIT_FAILURE


def default_sample(model: ModelId, p: int, tuples: int) -> int | None:
    """Sample size used when the exhaustive grid exceeds the limit and none was requested."""
    cells = p ** model.dimension
    if tuples * cells <= suites.EXHAUSTIVE_LIMIT:
        return None
    return max(1, suites.EXHAUSTIVE_LIMIT // cells)


def _sweep_reports(cfg: RunConfig):
    for p in cfg.primes:
        ranges = parse_param_ranges(cfg.params, p, len(cfg.model.param_names))
        keep = _filter_for(ranges)
        sample = cfg.sample
        if sample is None:
            tuples = 1
            for r in ranges:
                tuples *= len(r)
            sample = default_sample(cfg.model, p, tuples)
            if sample is not None:
                print(f"p={p}: grid too large for exhaustive mode; sampling {sample} tuples (seed {cfg.seed})", file=sys.stderr)
        yield from counting.sweep(cfg.model, p, keep, cfg.jobs, sample=sample, seed=cfg.seed)


def cmd_sweep(cfg: RunConfig) -> int:
    ok = True

    def tracked():
        nonlocal ok
        for r in _sweep_reports(cfg):
            ok = ok and r.match
            yield r

    with _output(cfg.out) as fh:
        counting.write_reports(tracked(), fh, cfg.fmt)
    return EXIT_OK if ok else EXIT_FAILURE


def cmd_verify(cfg: RunConfig) -> tuple[int, list[suites.SuiteResult]]:
    results = []
    primes = list(cfg.primes) or None
    for name in cfg.suites:
        res = suites.run_suite(name, primes=primes, seed=cfg.seed, jobs=cfg.jobs)
        results.append(res)
        print(res.summary())
        for case in res.failures[:20]:
            print("  failure " + json.dumps(case, default=str, sort_keys=True))
        if len(res.failures) > 20:
            print(f"  ... {len(res.failures) - 20} more failures")
    if cfg.out is not None:
        with _output(cfg.out) as fh:
            for res in results:
                fh.write(json.dumps(res.to_dict(), default=str) + "\n")
    status = EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE
    return status, results


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="a single odd prime")
    common.add_argument("--primes", help="comma-separated odd primes")
    common.add_argument("--primes-up-to", type=int, metavar="BOUND", help="all odd primes up to BOUND")
    common.add_argument("--sample", type=int, help="number of seeded random parameter tuples")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled modes (default 0)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "jsonl"), default="csv")

    parser = argparse.ArgumentParser(prog="kummerlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    models = ", ".join(m.value for m in ModelId)
    for name, helptext in (("count", "count points of one model instance"), ("sweep", "count over a parameter grid")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("--model", required=True, help=f"one of: {models}")
        sp.add_argument("--params", help='comma-separated values, "a-b" ranges or "all"')
    vp = sub.add_parser("verify", parents=[common], help="run verification suites")
    vp.add_argument("--suite", action="append", help=f"suite name(s) or all: {', '.join(suites.SUITES)}")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage and 0 after --help.
        return int(exc.code or 0)
    try:
        cfg = build_config(args)
        if cfg.command == "count":
            return cmd_count(cfg)
        if cfg.command == "sweep":
            return cmd_sweep(cfg)
        return cmd_verify(cfg)[0]
    except UsageError as exc:
        print(f"kummerlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
