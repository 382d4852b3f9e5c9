"""Command-line front door: ``hbfp run`` and ``hbfp check``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import oracle
from .constraints import UnknownSubtype, parse_subtype
from .cycles import NullCyclePolicy
from .engine import EngineConfig, Propagation
from .scriptio import FormatError, ParseError, dump_state, execute, load_document, parse_script


def _write(stream, text: str) -> None:
    stream.write(text)
    stream.flush()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hbfp", description="Dyadic constraint enforcement on a two-column relation.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a script")
    run.add_argument("script", type=Path)
    run.add_argument("--dump", type=Path, default=None, help="write the final state here")
    run.add_argument("--single-pass", action="store_true", help="one propagation pass per event")
    run.add_argument("--null-cycles-literal", action="store_true", help="null cells count as closing a cycle")

    check = sub.add_parser("check", help="check properties of a dumped state")
    check.add_argument("dumpfile", type=Path)
    check.add_argument("subtypes", nargs="+")
    return parser


def _run(args, out, err) -> int:
    try:
        script = parse_script(args.script.read_text(encoding="utf-8"))
    except OSError as e:
        _write(err, f"error: {e}\n")
        return 2
    except ParseError as e:
        _write(err, f"error: {e}\n")
        return 2
    cfg = EngineConfig(
        propagation=Propagation.SINGLE_PASS if args.single_pass else Propagation.FIXPOINT,
        null_cycle_policy=NullCyclePolicy.PAPER_LITERAL if args.null_cycles_literal else NullCyclePolicy.NEVER_CYCLES,
    )
    transcript, session = execute(script, cfg=cfg)
    _write(out, transcript.text)
    for line in transcript.errors:
        _write(err, f"error: {line}\n")
    if args.dump is not None:
        with open(args.dump, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dump_state(session.state, session.declared))
    return transcript.exit_code


def _check(args, out, err) -> int:
    try:
        subtypes = [parse_subtype(s) for s in args.subtypes]
        state, _ = load_document(args.dumpfile.read_text(encoding="utf-8"))
    except (OSError, UnknownSubtype, FormatError) as e:
        _write(err, f"error: {e}\n")
        return 2
    verdicts = oracle.holds_all(state, subtypes)
    _write(out, "".join(v.render() + "\n" for v in verdicts))
    return 0 if all(v.holds for v in verdicts) else 1


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _run(args, out, err)
    return _check(args, out, err)


if __name__ == "__main__":
    sys.exit(main())
