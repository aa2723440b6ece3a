import hashlib
from typing import Any

import ujson


def canonical_dump(payload: Any) -> str:
    """
    Serialize a payload with sorted keys.

    @param payload: JSON-compatible structure
    @return: canonical JSON text
    """
    return ujson.dumps(payload, sort_keys=True, ensure_ascii=True)


def hash_config(payload: Any) -> str:
    """
    Hashing a resolved run config.

    @param payload: JSON-compatible structure
    @return: hex SHA-256 digest of the canonical form
    """
    return hashlib.sha256(canonical_dump(payload).encode("utf-8")).hexdigest()


def verify_config_hash(payload: Any, digest: str) -> bool:
    """
    Verifying a recorded config digest.

    @param payload: JSON-compatible structure
    @param digest: digest stored in a manifest
    @return: digest match
    """
    return hash_config(payload) == digest
