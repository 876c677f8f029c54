from __future__ import annotations

import bisect
import re
from typing import Optional


class ParseError(Exception):
    """Syntax error with a 1-based line/column of the first rejected character."""

    def __init__(self, message: str, line: int, column: int, expected: Optional[str] = None) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected


class LineIndex:
    """Maps character offsets to 1-based (line, column)."""

    def __init__(self, text: str) -> None:
        self._starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def position(self, offset: int) -> tuple[int, int]:
        line = bisect.bisect_right(self._starts, offset) - 1
        return line + 1, offset - self._starts[line] + 1

    def error(self, offset: int, message: str, expected: Optional[str] = None) -> ParseError:
        line, col = self.position(offset)
        return ParseError(message, line, col, expected)
