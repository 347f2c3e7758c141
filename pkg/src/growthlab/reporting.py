"""Canonical serialization helpers shared by reports, configs and the CLI.

Canonical JSON (sorted keys, compact separators, shortest-roundtrip floats)
makes report bytes reproducible, so configs can be hashed and re-runs can be
compared byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import os
from typing import Iterable, Sequence


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def config_hash(obj) -> str:
    return sha256_hex(canonical_json(obj).encode("utf-8"))


def write_json(path, obj, indent=2):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as f:
        json.dump(obj, f, sort_keys=True, indent=indent)
        f.write("\n")


def format_csv(header: Sequence[str], rows: Iterable[Sequence], comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows, comments=()):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as f:
        f.write(format_csv(header, rows, comments))


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)
