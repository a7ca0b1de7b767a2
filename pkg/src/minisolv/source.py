"""Source positions and spans shared by every pipeline stage."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """A half-open byte range in one source file, with 1-based line/column."""

    file: str
    start: int
    end: int
    line: int
    column: int

    def merge(self, other: "Span") -> "Span":
        if other.start < self.start:
            return other.merge(self)
        return Span(self.file, self.start, max(self.end, other.end), self.line, self.column)

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


def line_starts(text: str) -> list[int]:
    starts = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            starts.append(i + 1)
    return starts


def position(starts: list[int], offset: int) -> tuple[int, int]:
    """Map a byte offset to (line, column), both 1-based."""
    lo, hi = 0, len(starts) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if starts[mid] <= offset:
            lo = mid
        else:
            hi = mid - 1
    return lo + 1, offset - starts[lo] + 1
