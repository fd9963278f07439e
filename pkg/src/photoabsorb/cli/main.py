"""``sim <command> --config <path> [--out <path>] [--verify] [--seed N]``.

Exit status is 0 on success, 2 for configuration errors and 3 for numerical
or verification failures.
"""

import argparse
import sys

from .. import __version__
from ..errors import DomainError, PhotoAbsorbError, UnsupportedStateError
from .commands import COMMANDS
from .config import ConfigError, parse_scenario
from .tables import OutputError, write_table

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def build_parser():
    parser = argparse.ArgumentParser(prog="sim", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="scenario file (key = value)")
    parser.add_argument("--out", help="CSV output path (default <command>.csv)")
    parser.add_argument("--verify", action="store_true", help="cross-check with oracles")
    parser.add_argument("--seed", type=int, help="override the Monte-Carlo seed")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def run(command, config_text, out=None, verify=False, seed=None):
    """Run one command; returns ``(exit_code, table_or_None, messages)``."""
    try:
        scn = parse_scenario(config_text)
        if seed is not None:
            if not 0 <= seed < 2**64:
                raise ConfigError("seed must be a 64-bit unsigned integer")
            scn.values["seed"] = seed
        verify = verify or scn["verify"]
        table = COMMANDS[command](scn, verify)
    except (ConfigError, DomainError, UnsupportedStateError) as exc:
        return EXIT_CONFIG, None, [f"configuration error: {exc}"]
    except PhotoAbsorbError as exc:
        return EXIT_NUMERIC, None, [f"numerical failure: {exc}"]

    path = out or scn["out"] or f"{command}.csv"
    meta = [
        ("tool", "photoabsorb"),
        ("version", __version__),
        ("command", command),
        ("seed", str(scn.seed)),
        ("verify", "true" if verify else "false"),
        *scn.metadata(),
    ]
    try:
        write_table(table.rows, table.columns, path, meta)
    except OutputError as exc:
        return EXIT_NUMERIC, table, [f"numerical failure: {exc}"]
    except OSError as exc:
        return EXIT_CONFIG, table, [f"cannot write output: {exc}"]
    if table.failures:
        return EXIT_NUMERIC, table, ["verification failed:", *table.failures]
    return EXIT_OK, table, []


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    code, _, messages = run(args.command, text, args.out, args.verify, args.seed)
    for msg in messages:
        print(msg, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
