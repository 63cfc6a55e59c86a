"""Deterministic JSON output: versioned, key-sorted, float-free."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .algebra import rational_text

SCHEMA = "1"


def _plain(obj):
    if isinstance(obj, float):
        raise TypeError("floating-point values are not allowed in output")
    if isinstance(obj, Fraction):
        return rational_text(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def dumps(payload: dict) -> str:
    """``payload`` plus ``"schema": "1"``, sorted keys, two-space indent, trailing newline."""
    body = {"schema": SCHEMA, **_plain(payload)}
    return json.dumps(body, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_json(source: str):
    """Parse ``source`` as a path to a JSON file, ``-`` for stdin, or literal JSON text."""
    if source == "-":
        import sys

        return json.loads(sys.stdin.read())
    text = source.strip()
    if not text.startswith(("{", "[")):
        path = Path(source)
        if path.is_file():
            text = path.read_text()
    return json.loads(text)
