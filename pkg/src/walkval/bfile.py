"""Reading OEIS-style b-files: ``n value`` per line, ``#`` comments."""

from __future__ import annotations

from dataclasses import dataclass
import os


class BFileError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class BFileEntry:
    line_no: int
    n: int
    value: int


def parse_bfile_text(text: str) -> list[BFileEntry]:
    entries: list[BFileEntry] = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise BFileError(line_no, f"expected 'n value', got {raw!r}")
        try:
            n, value = int(fields[0]), int(fields[1])
        except ValueError:
            raise BFileError(line_no, f"non-integer field in {raw!r}") from None
        if entries and n <= entries[-1].n:
            raise BFileError(line_no, f"index {n} does not increase")
        entries.append(BFileEntry(line_no, n, value))
    return entries


def parse_bfile(path: str | os.PathLike) -> list[BFileEntry]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_bfile_text(fh.read())
