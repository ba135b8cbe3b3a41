"""
Text format for algebra elements.

Element files are plain text so that golden files diff cleanly::

    # comment lines and blank lines are ignored
    block 2
    1,0   0,0
    0,0   1,0
    block 1
    0.5,-0.25

Each ``block <n>`` header opens an n x n block. It is followed by exactly n
rows of n whitespace-separated ``re,im`` pairs. Blocks appear in the order of
the algebra's ``block_dims``. The same ``re,im`` token is used for matrices
embedded in JSON experiment configs.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np

from splurge_geomrep.errors import CliFileError, ConfigParseError

_COMMENT_PREFIX: str = "#"
_BLOCK_KEYWORD: str = "block"


def parse_complex(token: str, *, line: int | None = None, field: str | None = None) -> complex:
    """Parse one ``re,im`` token."""
    if not isinstance(token, str):
        raise ConfigParseError(
            f"Expected an 're,im' string, got {type(token).__name__}", {"line": line, "field": field}
        )
    parts = token.strip().split(",")
    if len(parts) != 2:
        raise ConfigParseError(f"Malformed entry '{token}', expected 're,im'", {"line": line, "field": field})
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as e:
        raise ConfigParseError(f"Malformed number in entry '{token}'", {"line": line, "field": field}) from e


def format_complex(value: complex) -> str:
    """Format a complex number as an exact ``re,im`` token."""
    z = complex(value)
    return f"{z.real!r},{z.imag!r}"


def parse_block_rows(rows: Any, *, field: str) -> np.ndarray:
    """Parse a square block given as a list of rows of ``re,im`` strings."""
    if not isinstance(rows, list) or not rows:
        raise ConfigParseError("Block must be a non-empty list of rows", {"field": field})
    n = len(rows)
    block = np.zeros((n, n), dtype=complex)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ConfigParseError(f"Row must hold {n} entries", {"field": f"{field}[{r}]"})
        for c, token in enumerate(row):
            block[r, c] = parse_complex(token, field=f"{field}[{r}][{c}]")
    return block


def format_block_rows(block: np.ndarray) -> list[list[str]]:
    """Inverse of :func:`parse_block_rows`."""
    return [[format_complex(z) for z in row] for row in np.asarray(block)]


def parse_element_text(text: str) -> list[np.ndarray]:
    """Parse element text into a list of square complex blocks."""
    blocks: list[np.ndarray] = []
    current: list[list[complex]] | None = None
    size = 0

    def close_block(line_no: int) -> None:
        if current is not None:
            if len(current) != size:
                raise ConfigParseError(
                    f"Block {len(blocks) + 1} has {len(current)} rows, expected {size}", {"line": line_no}
                )
            blocks.append(np.array(current, dtype=complex).reshape(size, size))

    line_no = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(_COMMENT_PREFIX, 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0].lower() == _BLOCK_KEYWORD:
            close_block(line_no)
            if len(tokens) != 2 or not tokens[1].isdigit() or int(tokens[1]) < 1:
                raise ConfigParseError("Block header must be 'block <n>' with n >= 1", {"line": line_no})
            size = int(tokens[1])
            current = []
            continue
        if current is None:
            raise ConfigParseError("Matrix row found before any 'block <n>' header", {"line": line_no})
        if len(current) >= size:
            raise ConfigParseError(f"Block {len(blocks) + 1} has more than {size} rows", {"line": line_no})
        if len(tokens) != size:
            raise ConfigParseError(f"Row has {len(tokens)} entries, expected {size}", {"line": line_no})
        current.append([parse_complex(t, line=line_no) for t in tokens])

    close_block(line_no)
    if not blocks:
        raise ConfigParseError("No blocks found", {"line": line_no})
    return blocks


def read_element_file(path: str | Path) -> list[np.ndarray]:
    """Read an element file."""
    file_path = Path(path)
    if not file_path.exists():
        raise CliFileError(f"Matrix file not found: {file_path}", {"path": str(file_path)})
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as e:
        raise CliFileError(f"Failed to read matrix file: {e}", {"path": str(file_path)}) from e
    return parse_element_text(text)


def format_element(blocks: Sequence[np.ndarray], header: str | None = None) -> str:
    """Render blocks in the element text format."""
    lines: list[str] = []
    if header:
        lines.extend(f"{_COMMENT_PREFIX} {h}" for h in header.splitlines())
    for block in blocks:
        b = np.asarray(block)
        lines.append(f"{_BLOCK_KEYWORD} {b.shape[0]}")
        lines.extend(" ".join(row) for row in format_block_rows(b))
    return "\n".join(lines) + "\n"


def write_element_file(path: str | Path, blocks: Sequence[np.ndarray], header: str | None = None) -> None:
    """Write blocks to an element file."""
    try:
        Path(path).write_text(format_element(blocks, header), encoding="utf-8")
    except OSError as e:
        raise CliFileError(f"Failed to write matrix file: {e}", {"path": str(path)}) from e
