"""Stable JSON emission and ingestion for certificates and scenarios.

Key order and separators are fixed so equal data always serializes to
identical bytes.
"""

import json

from .errors import InputError


def stable_dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(stable_dumps(obj))


def read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError("PARSE_ERROR", f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            "PARSE_ERROR", f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}"
        ) from None
