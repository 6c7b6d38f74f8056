"""Command-line entry point.

    vibcavity <command> --config run.json --out result.csv [--override key=value]...

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .config import apply_overrides, validate_config
from .errors import ConfigError, IoError, ParseError, VibCavityError
from .scenarios import COMMANDS, run_scenario
from .table import write_table

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("vibcavity")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vibcavity",
                                description="Photon creation in a cavity of varying length.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                   help="dotted-path patch applied before validation (repeatable)")
    return p


def _load(path: str, overrides: list[str]):
    try:
        with open(path, "rb") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: config must be a JSON object")
    return validate_config(apply_overrides(raw, overrides))


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=os.environ.get("VIBCAVITY_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _load(args.config, args.override)
        table = run_scenario(config, args.command)
        write_table(table, args.out)
    except IoError as exc:
        log.error("%s", exc)
        return EXIT_IO
    except ConfigError as exc:
        log.error("%s: %s", args.command, exc)
        return EXIT_CONFIG
    except VibCavityError as exc:
        log.error("%s: %s", args.command, exc)
        return EXIT_NUMERICAL
    log.info("wrote %d rows to %s", len(table), args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
