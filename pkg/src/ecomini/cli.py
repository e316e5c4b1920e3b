"""``ecoc``: the command-line driver.

    ecoc check FILE...             parse and analyze; exit 0 or 1
    ecoc emit FILE... [-o PATH]    also lower and write core text
    ecoc run FILE... [--entry NAME] [--max-steps N]

Exit codes: 0 success, 1 compile diagnostics or an uncaught ``throw``,
2 runtime error (R1xx), 3 usage error. Diagnostics go to stderr only.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import pipeline
from .diagnostics import CompileError
from .interpreter import DEFAULT_MAX_STEPS, run_core
from .lowering import CORE_SUFFIX, emit, format_module, parse_core

EXIT_OK, EXIT_FAIL, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ecoc", description="ECO-mini compiler and interpreter")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("files", nargs="+", metavar="FILE", help="input files, concatenated in order")
    common.add_argument("--dump-ast", action="store_true", help="print the parsed program to stdout")
    common.add_argument("--no-stdlib", action="store_true", help="do not link the bundled graph library")

    sub.add_parser("check", parents=[common], help="parse and analyze")
    emit_p = sub.add_parser("emit", parents=[common], help="lower to core text")
    emit_p.add_argument("-o", dest="output", metavar="PATH", help="output path (default: <first-input>.core.eco)")
    run_p = sub.add_parser("run", parents=[common], help="compile and interpret Main.<entry>()")
    run_p.add_argument("--entry", default="main", metavar="NAME")
    run_p.add_argument("--max-steps", type=_positive, default=DEFAULT_MAX_STEPS, metavar="N")
    return parser


def default_output(first_input: str) -> Path:
    path = Path(first_input)
    stem = path.name[: -len(".eco")] if path.name.endswith(".eco") else path.name
    return path.with_name(stem + CORE_SUFFIX)


def _report(exc: CompileError) -> int:
    for d in exc.diagnostics:
        print(d, file=sys.stderr)
    return EXIT_FAIL


def _run(args) -> int:
    if all(f.endswith(CORE_SUFFIX) for f in args.files):
        if len(args.files) != 1:
            raise UsageError("ecoc run: give exactly one core file")
        text = Path(args.files[0]).read_text(encoding="utf-8")
        core = parse_core(text, args.files[0])
    else:
        core = pipeline.compile_files(args.files, not args.no_stdlib).core
    code, out, err = run_core(core, args.entry, args.max_steps)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        for f in args.files:
            if not Path(f).is_file():
                raise UsageError(f"ecoc: no such file: {f}")
        if args.dump_ast:
            try:
                sys.stdout.write(format_module(pipeline.parse_files(pipeline.read_sources(args.files))))
            except CompileError as exc:
                return _report(exc)
        if args.command == "run":
            return _run(args)
        compiled = pipeline.compile_files(args.files, not args.no_stdlib)
        if args.command == "emit":
            out = Path(args.output) if args.output else default_output(args.files[0])
            out.write_text(emit(compiled.core), encoding="utf-8")
        return EXIT_OK
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except CompileError as exc:
        return _report(exc)
    except OSError as exc:
        print(f"ecoc: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
