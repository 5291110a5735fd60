"""Command-line entry point: headless runs, the live server, log analysis,
and trace replay.

Exit codes: 0 success, 1 I/O or environment failure, 2 usage error,
3 replay mismatch.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from brainb import storage
from brainb.analysis import (
    Cohort,
    averaged_curves,
    cohort_stats,
    export_cohort_csv,
    export_curves_csv,
    export_histogram_csv,
    size_histogram,
)
from brainb.config import ConfigError, SessionConfig, load_config_file, with_overrides
from brainb.logkit import LogParseError, LogRecord, parse_log_file, write_log
from brainb.session import finalize, new_session, run_tick
from brainb.usersim import (
    AbsentModel,
    CapacityModel,
    LaggedNoisyModel,
    PerfectModel,
    PointerModel,
    run_session,
    session_rngs,
)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_MISMATCH = 3


class UsageError(ValueError):
    pass


def _default_out_dir() -> str:
    return os.environ.get("BRAINB_OUT", ".")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brainb",
        description="Adaptive pursuit-tracking benchmark: scripted runs, live serving, analysis.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", metavar="FILE", help="key = value config file")
        p.add_argument(
            "--set",
            metavar="KEY=VALUE",
            action="append",
            default=[],
            dest="sets",
            help="override one config field (repeatable)",
        )
        p.add_argument("--out", metavar="DIR", default=_default_out_dir(),
                       help="output directory (default: $BRAINB_OUT or .)")

    p_run = sub.add_parser("run", help="run scripted headless sessions")
    add_config_flags(p_run)
    p_run.add_argument("--model", choices=("perfect", "absent", "lagged", "capacity"),
                       default="capacity")
    p_run.add_argument("--seed", type=int, default=None, help="single seed")
    p_run.add_argument("--seeds", metavar="A..B", default=None,
                       help="inclusive seed range, e.g. 1..10")
    p_run.add_argument("--duration-ticks", type=int, default=None)
    p_run.add_argument("--latency-ticks", type=int, default=0)
    p_run.add_argument("--noise-sigma", type=float, default=0.0)
    p_run.add_argument("--capacity-bps", type=int, default=25_000)
    p_run.add_argument("--reacquire-ticks", type=int, default=25)
    p_run.add_argument("--drift-rate", type=float, default=8.0)
    p_run.add_argument("--quiet", action="store_true", help="skip per-run result lines")

    p_serve = sub.add_parser("serve", help="serve live sessions over the local socket")
    add_config_flags(p_serve)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8787)
    p_serve.add_argument("--turbo", action="store_true",
                         help="no inter-tick sleep (automated clients)")
    p_serve.add_argument("--max-sessions", type=int, default=None)

    p_an = sub.add_parser("analyze", help="aggregate a directory of logs")
    p_an.add_argument("logdir", help="directory containing .log files")
    p_an.add_argument("--out", metavar="DIR", default=_default_out_dir())
    p_an.add_argument("--label", default="cohort")

    p_rp = sub.add_parser("replay", help="re-execute a recorded trace and compare logs")
    p_rp.add_argument("trace", help="pointer trace file")
    p_rp.add_argument("--meta", default=None, help="config sidecar (default: <trace>.meta)")
    p_rp.add_argument("--log", default=None, help="log to compare against (default: <trace>.log)")
    return parser


def _parse_sets(pairs: list[str]) -> dict[str, object]:
    overrides: dict[str, object] = {}
    for pair in pairs:
        if "=" not in pair:
            raise UsageError(f"--set needs KEY=VALUE, got {pair!r}")
        key, _, value = pair.partition("=")
        overrides[key.strip()] = value.strip()
    return overrides


def _build_config(args: argparse.Namespace) -> SessionConfig:
    config = SessionConfig()
    if args.config:
        config = with_overrides(config, load_config_file(args.config))
    sets = _parse_sets(args.sets)
    if sets:
        config = with_overrides(config, sets)
    direct: dict[str, object] = {}
    if getattr(args, "duration_ticks", None) is not None:
        direct["duration_ticks"] = args.duration_ticks
    if getattr(args, "seed", None) is not None:
        direct["rng_seed"] = args.seed
    if direct:
        config = with_overrides(config, direct)
    return config


def _parse_seed_range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise UsageError(f"--seeds needs A..B, got {text!r}")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"--seeds needs integer bounds, got {text!r}") from None
    if b < a:
        raise UsageError(f"--seeds range is empty: {text!r}")
    return list(range(a, b + 1))


def _build_model(args: argparse.Namespace) -> PointerModel:
    if args.model == "perfect":
        return PerfectModel()
    if args.model == "absent":
        return AbsentModel()
    if args.model == "lagged":
        return LaggedNoisyModel(
            latency_ticks=args.latency_ticks, noise_sigma=args.noise_sigma
        )
    return CapacityModel(
        capacity_bps=args.capacity_bps,
        reacquire_ticks=args.reacquire_ticks,
        latency_ticks=args.latency_ticks,
        noise_sigma=args.noise_sigma,
        drift_rate=args.drift_rate,
    )


def cmd_run(args: argparse.Namespace) -> int:
    if args.seed is not None and args.seeds is not None:
        raise UsageError("--seed and --seeds are mutually exclusive")
    config = _build_config(args)
    seeds = _parse_seed_range(args.seeds) if args.seeds is not None else [config.rng_seed]
    for seed in seeds:
        run_config = with_overrides(config, {"rng_seed": seed})
        model = _build_model(args)  # fresh model per run: models carry state
        outcome = run_session(run_config, model, seed)
        paths = storage.write_run(
            args.out, storage.run_stem(seed), run_config, outcome.result, outcome.trace
        )
        log.info("seed %d -> %s", seed, paths.log)
        if not args.quiet:
            print(f"U R about {outcome.result.record.kilobytes:.6g} Kilobytes")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from brainb.server import serve  # deferred: keeps --help snappy

    config = _build_config(args)
    try:
        serve(
            config,
            host=args.host,
            port=args.port,
            out_dir=args.out,
            turbo=args.turbo,
            max_sessions=args.max_sessions,
        )
    except OSError as exc:
        print(f"brainb serve: cannot listen on {args.host}:{args.port}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    logdir = Path(args.logdir)
    if not logdir.is_dir():
        print(f"brainb analyze: not a directory: {logdir}", file=sys.stderr)
        return EXIT_FAILURE
    records: list[LogRecord] = []
    for path in sorted(logdir.glob("*.log")):
        try:
            records.append(parse_log_file(path))
        except (LogParseError, OSError, UnicodeDecodeError) as exc:
            print(f"brainb analyze: skipping {path}: {exc}", file=sys.stderr)
    if not records:
        print(f"brainb analyze: no parseable logs in {logdir}", file=sys.stderr)
        return EXIT_FAILURE
    cohort = Cohort(records=tuple(records), label=args.label)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    export_curves_csv(averaged_curves(cohort), out / f"{args.label}_curves.csv")
    export_histogram_csv(size_histogram(cohort), out / f"{args.label}_histogram.csv")
    export_cohort_csv(cohort, out / f"{args.label}_table.csv")
    mean_kb, mean_noc, n = cohort_stats(cohort)
    print(f"records   : {n}")
    print(f"kilobytes : {mean_kb:.6g}")
    print(f"noc       : {mean_noc:.6g}")
    return EXIT_OK


def _first_divergence(ours: LogRecord, theirs: LogRecord, ledger_ticks: dict[str, list[int]]) -> str:
    for name in ("lost", "found", "lost2found", "found2lost"):
        a: tuple[int, ...] = getattr(ours, name)
        b: tuple[int, ...] = getattr(theirs, name)
        for i in range(max(len(a), len(b))):
            va = a[i] if i < len(a) else None
            vb = b[i] if i < len(b) else None
            if va != vb:
                ticks = ledger_ticks.get(name, [])
                at = f" (replay tick {ticks[i]})" if i < len(ticks) else ""
                return f"{name}[{i}]: replay {va} vs log {vb}{at}"
    for name in ("version", "time_ticks", "bps_final", "noc", "nop", "mean_lost",
                 "mean_found", "mean_l2f", "mean_f2l", "disp_lost", "disp_found",
                 "disp_l2f", "disp_f2l", "relation", "time_string", "kilobytes"):
        va, vb = getattr(ours, name), getattr(theirs, name)
        if va != vb:
            return f"{name}: replay {va!r} vs log {vb!r}"
    return "records differ in an unreported field"


def cmd_replay(args: argparse.Namespace) -> int:
    trace_path = Path(args.trace)
    meta_path = Path(args.meta) if args.meta else trace_path.with_suffix(".meta")
    log_path = Path(args.log) if args.log else trace_path.with_suffix(".log")

    trace = storage.read_trace(trace_path)
    config, nop = storage.read_meta(meta_path)
    original = parse_log_file(log_path)

    world_rng, _ = session_rngs(config.rng_seed)
    session = new_session(config, world_rng)
    if trace:
        for sample in trace:
            run_tick(session, sample, world_rng)
    else:
        # no recorded pointer: run the full clock with the button up
        from brainb.session import PointerSample

        while not session.finished:
            run_tick(
                session,
                PointerSample(x=0, y=0, button_down=False, tick=session.elapsed_ticks),
                world_rng,
            )
    session.nop = nop
    result = finalize(session, force=not session.finished)
    regenerated = result.record

    if regenerated == original:
        print(f"replay ok: {log_path} reproduced from {trace_path.name}")
        return EXIT_OK
    ticks = {
        "lost": session.ledger.event_ticks_lost,
        "found": session.ledger.event_ticks_found,
        "lost2found": session.ledger.event_ticks_lost2found,
        "found2lost": session.ledger.event_ticks_found2lost,
    }
    print(
        "replay mismatch: " + _first_divergence(regenerated, original, ticks),
        file=sys.stderr,
    )
    return EXIT_MISMATCH


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    handlers = {
        "run": cmd_run,
        "serve": cmd_serve,
        "analyze": cmd_analyze,
        "replay": cmd_replay,
    }
    try:
        return handlers[args.command](args)
    except (UsageError, ConfigError) as exc:
        print(f"brainb {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LogParseError as exc:
        print(f"brainb {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except ValueError as exc:
        print(f"brainb {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"brainb {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
