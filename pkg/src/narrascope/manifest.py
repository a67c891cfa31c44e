"""Reproducibility manifests for emitted artifacts.

Every run is a pure function of (input bytes, config); manifests record
the tool version, the semantic config, and a content hash of the parsed
document so independently produced artifacts can be compared by hash.
Nothing time- or path-dependent goes in here.
"""

from __future__ import annotations

import hashlib
import json

TOOL_NAME = "narrascope"
SCHEMA_VERSION = 1


def canonical_json(data) -> str:
    """Stable compact encoding used for hashing and embedded manifests."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_hex(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def build_manifest(version: str, config: dict, input_sha256: str) -> dict:
    return {
        "tool": TOOL_NAME,
        "version": version,
        "config": dict(sorted(config.items())),
        "input_sha256": input_sha256,
    }
