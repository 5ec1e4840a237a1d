"""Tokenizer entry point: picks the compiled scanner when available.

Set CDDLINT_PURE_SCANNER=1 to force the pure-Python backend (useful for
debugging and for the benchmark baseline).
"""

from __future__ import annotations

import os

from . import _scan_py
from .tokens import Token

if os.environ.get("CDDLINT_PURE_SCANNER"):
    _backend = _scan_py
else:
    try:
        from . import _scan_c as _backend  # type: ignore[no-redef]
    except ImportError:
        _backend = _scan_py


def active_backend() -> str:
    """Name of the scanner backend in use: 'compiled' or 'pure-python'."""
    return "compiled" if _backend.__name__.endswith("_scan_c") else "pure-python"


def tokenize(text: str) -> list[Token]:
    """Lex source text into tokens with byte spans and attached trivia."""
    return _backend.scan(text.encode("utf-8"))


def tokenize_bytes(data: bytes) -> list[Token]:
    """Lex already-encoded UTF-8 bytes (spans index directly into data)."""
    return _backend.scan(data)


def physical_loc(text: str) -> int:
    """Physical line count: the number of newline characters (wc -l)."""
    return text.count("\n")
