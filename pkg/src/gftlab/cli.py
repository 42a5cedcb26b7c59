"""Command-line experiment runner.

    gftlab run <experiment> [--key value]... [--out PATH] [--format csv|json]
    gftlab validate <experiment> [--key value]...

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 I/O failure.
Failures print one line ``gftlab: error: <kind>: <message>`` on stderr.
"""

import argparse
import io
import json
import os
import re
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .experiments import EXPERIMENTS, UNIT_FACTORS, check
from .numerics import NumericsError

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3
THREADS_ENV = "GFTLAB_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z.]*)\s*$")


def parse_value(key, spec, text):
    """Convert one textual value into the parameter's canonical unit."""
    if spec.kind is int:
        try:
            return int(text)
        except ValueError:
            raise UsageError(f"{key} expects an integer, got {text!r}") from None
    m = _NUMBER.match(str(text))
    if not m:
        raise UsageError(f"{key} expects a number, got {text!r}")
    value, unit = float(m.group(1)), m.group(2)
    if unit:
        table = UNIT_FACTORS.get(spec.unit, {})
        if unit not in table:
            raise UsageError(f"{key} does not accept unit {unit!r}")
        value *= table[unit]
    return value


def read_config(path):
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def _split_overrides(tokens):
    out = {}
    it = iter(tokens)
    for tok in it:
        if not tok.startswith("--"):
            raise UsageError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
        else:
            try:
                value = next(it)
            except StopIteration:
                raise UsageError(f"missing value for --{key}") from None
        out[key] = value
    return out


def resolve(experiment, config_text, overrides):
    """Merge defaults, config file and command-line overrides (in that order)."""
    params = {k: spec.default for k, spec in experiment.params.items()}
    given = {}
    for source in (config_text, overrides):
        for key, text in source.items():
            if key not in experiment.params:
                raise UsageError(f"unknown parameter {key!r} for {experiment.name}")
            params[key] = parse_value(key, experiment.params[key], text)
            given[key] = True
    return params, given


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _unit(u):
    return u or "dimensionless"


def render_csv(experiment, params, table):
    buf = io.StringIO(newline="")
    buf.write(f"# gftlab {__version__}\n")
    buf.write(f"# experiment: {experiment.name} ({experiment.description})\n")
    for key, spec in experiment.params.items():
        buf.write(f"# param {key} = {_fmt(params[key])} {_unit(spec.unit)}\n")
    buf.write("# units: " + ", ".join(
        f"{c} [{_unit(u)}]" for c, u in zip(table.columns, table.units)) + "\n")
    for note in table.notes:
        buf.write(f"# note: {note}\n")
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def render_json(experiment, params, table):
    doc = {
        "tool": f"gftlab {__version__}",
        "experiment": experiment.name,
        "params": {k: {"value": params[k], "unit": _unit(s.unit)}
                   for k, s in experiment.params.items()},
        "columns": [{"name": c, "unit": _unit(u)}
                    for c, u in zip(table.columns, table.units)],
        "rows": [list(r) for r in table.rows],
        "notes": table.notes,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_atomic(path, text):
    """Write via a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".gftlab-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _threads():
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be at least 1")
    return n


def _build_parser():
    parser = _Parser(prog="gftlab", description="Run uncertainty-relation experiments.")
    parser.add_argument("--version", action="version", version=f"gftlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "validate"):
        p = sub.add_parser(name)
        p.add_argument("experiment", choices=sorted(EXPERIMENTS))
        p.add_argument("--config", help="flat key = value parameter file")
        if name == "run":
            p.add_argument("--out", help="output path (default: stdout)")
            p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def _validate(experiment, params, given, stream):
    for key, spec in experiment.params.items():
        origin = "set" if key in given else "default"
        stream.write(f"{origin} {key} = {_fmt(params[key])} {_unit(spec.unit)}\n")
    diagnostics = check(experiment, params)
    for severity, message in diagnostics:
        stream.write(f"{severity}: {message}\n")
    if not diagnostics:
        stream.write("ok\n")
    return diagnostics


def _run(args, experiment, params):
    diagnostics = check(experiment, params)
    errors = [m for sev, m in diagnostics if sev == "error"]
    if errors:
        raise UsageError("; ".join(errors))
    for _, message in diagnostics:
        sys.stderr.write(f"gftlab: warning: {message}\n")
    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            table = experiment.run(params, pool)
    else:
        table = experiment.run(params)
    render = render_json if args.format == "json" else render_csv
    text = render(experiment, params, table)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _fail(kind, message, code):
    message = " ".join(str(message).split())
    sys.stderr.write(f"gftlab: error: {kind}: {message}\n")
    return code


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args, rest = _build_parser().parse_known_args(argv)
        experiment = EXPERIMENTS[args.experiment]
        config = read_config(args.config) if args.config else {}
        params, given = resolve(experiment, config, _split_overrides(rest))
        if args.command == "validate":
            _validate(experiment, params, given, sys.stdout)
        else:
            _run(args, experiment, params)
    except UsageError as exc:
        return _fail("usage", exc, EXIT_USAGE)
    except (NumericsError, ArithmeticError, ValueError) as exc:
        return _fail("numerical", exc, EXIT_NUMERIC)
    except OSError as exc:
        return _fail("io", exc, EXIT_IO)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
