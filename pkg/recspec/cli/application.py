import argparse
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import ujson

from recspec.cli.commands import plan, router
from recspec.cli.config import resolve_config
from recspec.cli.exceptions import ConfigError
from recspec.cli.lifetime import shutdown, startup
from recspec.cli.output import write_error_record, write_manifest
from recspec.cli.schemas import COMMANDS, VERIFY_CHECKS, RunConfig
from recspec.exceptions import RecspecError
from recspec.settings import settings

logger = logging.getLogger(__name__)

# global flags also accepted after the subcommand
LATE_FLAGS = {"seed": "seed", "out": "output_dir", "threads": "threads", "dry_run": "dry_run"}


def get_parser() -> argparse.ArgumentParser:
    """
    :return: parser with the global flags and one subcommand per command.

    Command parameters are free-form ``--name value`` pairs; dashes become
    underscores and comma-separated values become lists.
    """
    parser = argparse.ArgumentParser(
        prog="recspec",
        description="Recurrence spectra of expanding interval maps",
    )
    parser.add_argument("--seed", type=int, default=None, help="master seed, unsigned 64-bit")
    parser.add_argument("--out", type=Path, default=None, help="output directory")
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--dry-run", action="store_true", default=None)
    parser.add_argument("--config", type=Path, default=None, help="TOML or INI run file")
    parser.add_argument("--log-level", default=None)
    commands = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        command = commands.add_parser(name)
        if name == "verify":
            command.add_argument("check", choices=VERIFY_CHECKS)
        command.add_argument("--map", dest="map_spec", default=None)
    return parser


def _param_value(text: str) -> Any:
    if "," in text:
        return [item for item in text.split(",") if item]
    return text


def parse_params(extra: Sequence[str]) -> Dict[str, Any]:
    """
    Turn leftover ``--name value`` tokens into a parameter dict.

    A flag without a value is true.

    :raises ConfigError: on a stray positional token.
    """
    params: Dict[str, Any] = {}
    tokens = list(extra)
    while tokens:
        token = tokens.pop(0)
        if not token.startswith("--"):
            raise ConfigError(f"Unexpected argument {token}.")
        name, _, value = token[2:].partition("=")
        if not value:
            value = tokens.pop(0) if tokens and not tokens[0].startswith("--") else "true"
        params[name.replace("-", "_")] = _param_value(value)
    return params


def run(config: RunConfig) -> int:
    """
    Execute one resolved run.

    A dry run validates parameters, map and shift, prints the resolved
    config with its plan and writes nothing.

    :param config: the run.
    :return: process exit status.
    """
    startup(config)()
    try:
        if config.dry_run:
            payload = config.resolved()
            payload["plan"] = plan(config)
            print(ujson.dumps(payload, sort_keys=True, indent=2))
            return 0
        artifacts = router[config.command](config)
        manifest = write_manifest(config.output_dir, config.resolved(), artifacts)
        logger.info("wrote %d artifacts, manifest %s", len(artifacts), manifest)
        return 0
    except RecspecError as error:
        logger.error("%s: %s", error.code, error.detail)
        if not config.dry_run:
            write_error_record(config.output_dir, error.as_record())
        return error.exit_status
    finally:
        shutdown(config)()


def main(argv: Optional[List[str]] = None) -> int:
    """Entrypoint of the command line."""
    args, extra = get_parser().parse_known_args(argv)
    if args.log_level:
        settings.log_level = args.log_level
    flags = {
        "seed": args.seed,
        "output_dir": args.out,
        "threads": args.threads,
        "dry_run": args.dry_run,
        "map_spec": args.map_spec,
        "check": getattr(args, "check", None),
    }
    try:
        params = parse_params(extra)
        for name, flag in LATE_FLAGS.items():
            if name in params and flags.get(flag) is None:
                flags[flag] = params.pop(name)
        run_file = Path(params.pop("config")) if "config" in params else args.config
        config = resolve_config(args.command, flags, params, run_file)
    except ConfigError as error:
        logging.basicConfig(level=logging.ERROR)
        logger.error("%s", error.detail)
        return error.exit_status
    return run(config)
