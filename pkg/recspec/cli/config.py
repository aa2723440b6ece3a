"""Run files (TOML or INI) and their merge with command-line flags."""
import configparser
from pathlib import Path
from typing import Any, Dict, Optional

import tomli
from pydantic import ValidationError

from recspec.cli.exceptions import ConfigError
from recspec.cli.schemas import RunConfig

RUN_SECTION = "run"
PARAMS_SECTION = "params"


def _ini_value(text: str) -> Any:
    if "," in text:
        return [item.strip() for item in text.split(",") if item.strip()]
    return text


def read_run_file(path: Path) -> Dict[str, Any]:
    """
    Read a run file.

    TOML files keep run keys at the top level and parameters in a [params]
    table; INI files use [run] and [params] sections, comma-separated values
    become lists.

    :raises ConfigError: when the file is missing or malformed.
    """
    try:
        if path.suffix == ".toml":
            with open(path, "rb") as handle:
                return tomli.load(handle)
        parser = configparser.ConfigParser()
        if not parser.read(path, encoding="utf-8"):
            raise ConfigError(f"Cannot read {path}.")
        payload: Dict[str, Any] = dict(parser[RUN_SECTION]) if parser.has_section(RUN_SECTION) else {}
        if parser.has_section(PARAMS_SECTION):
            payload[PARAMS_SECTION] = {key: _ini_value(value) for key, value in parser[PARAMS_SECTION].items()}
        return payload
    except (OSError, tomli.TOMLDecodeError, configparser.Error) as error:
        raise ConfigError(f"Cannot read {path}: {error}")


def resolve_config(
    command: str,
    flags: Dict[str, Any],
    params: Dict[str, Any],
    run_file: Optional[Path] = None,
) -> RunConfig:
    """
    Merge a run file with flags; flags that were given win.

    :raises ConfigError: when the merged configuration is invalid.
    """
    payload: Dict[str, Any] = read_run_file(run_file) if run_file else {}
    if "map" in payload:
        payload["map_spec"] = payload.pop("map")
    if "out" in payload:
        payload["output_dir"] = payload.pop("out")
    payload["command"] = command
    merged_params = dict(payload.get(PARAMS_SECTION, {}))
    merged_params.update({key: value for key, value in params.items() if value is not None})
    payload[PARAMS_SECTION] = merged_params
    payload.update({key: value for key, value in flags.items() if value is not None})
    try:
        return RunConfig(**payload)
    except ValidationError as error:
        raise ConfigError(str(error))
