"""Artifact writers: CSV with fixed precision, JSON lines and the run manifest."""
import csv
import math
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

import ujson

from recspec.services.hashing import canonical_dump, hash_config
from recspec.settings import settings

MANIFEST = "manifest.json"
ERROR_RECORD = "error.json"


def format_value(value: Any) -> str:
    """Floats with the configured significant digits, everything else as text."""
    if isinstance(value, float):
        if math.isinf(value) or math.isnan(value):
            return str(value)
        return f"{value:.{settings.float_digits}g}"
    if value is None:
        return ""
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """:return: path of the written CSV."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
    return path


def _jsonable(value: Any) -> Any:
    if isinstance(value, float):
        return float(format_value(value)) if math.isfinite(value) else str(value)
    if isinstance(value, dict):
        return {key: _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    return value


def write_jsonl(path: Path, records: Iterable[Dict[str, Any]]) -> Path:
    """:return: path of the JSON-lines file, keys sorted."""
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(ujson.dumps(_jsonable(record), sort_keys=True))
            handle.write("\n")
    return path


def library_version() -> str:
    """:return: installed package version, "0+unknown" from a source tree."""
    try:
        return metadata.version("recspec")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def write_manifest(output_dir: Path, config: Dict[str, Any], artifacts: List[Path]) -> Path:
    """:return: path of manifest.json echoing the resolved config and its hash."""
    path = output_dir / MANIFEST
    payload = {
        "config": config,
        "config_sha256": hash_config(config),
        "version": library_version(),
        "artifacts": sorted(artifact.name for artifact in artifacts),
    }
    path.write_text(canonical_dump(payload) + "\n", encoding="utf-8")
    return path


def write_error_record(output_dir: Path, record: Dict[str, Any]) -> Path:
    """:return: path of error.json."""
    path = output_dir / ERROR_RECORD
    path.write_text(ujson.dumps(record, sort_keys=True) + "\n", encoding="utf-8")
    return path
