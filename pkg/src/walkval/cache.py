"""On-disk cache of exact sequence values.

One record per line: ``kind<TAB>params<TAB>n<TAB>decimal value``; lines
starting with ``#`` are comments.  Writers append under an exclusive
``flock`` and readers hold a shared one, so several processes can share a
file.  Records are never rewritten in place.
"""

from __future__ import annotations

from collections import Counter
import fcntl
import os
from pathlib import Path
from typing import Iterable

KINDS = ("W", "Wstar", "Domb", "GenDomb", "U")
ENV_VAR = "WALKVAL_CACHE"

Key = tuple[str, str, int]


class CacheFormatError(ValueError):
    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


def default_cache_path() -> Path | None:
    value = os.environ.get(ENV_VAR, "")
    return Path(value) if value else None


class SequenceCache:
    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self._index: dict[Key, int] | None = None
        self._size = -1

    def _load(self) -> dict[Key, int]:
        size = self.path.stat().st_size if self.path.exists() else 0
        if self._index is not None and size == self._size:
            return self._index
        index: dict[Key, int] = {}
        if size:
            with open(self.path, "r", encoding="ascii") as fh:
                fcntl.flock(fh, fcntl.LOCK_SH)
                try:
                    for line_no, line in enumerate(fh, 1):
                        self._parse_into(index, line, line_no)
                finally:
                    fcntl.flock(fh, fcntl.LOCK_UN)
        self._index = index
        self._size = size
        return index

    def _parse_into(self, index: dict, line: str, line_no: int) -> None:
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            return
        parts = line.split("\t")
        if len(parts) != 4:
            raise CacheFormatError(self.path, line_no, "expected 4 tab-separated fields")
        kind, params, n_text, value_text = parts
        if kind not in KINDS:
            raise CacheFormatError(self.path, line_no, f"unknown kind {kind!r}")
        try:
            n = int(n_text)
            value = int(value_text)
        except ValueError:
            raise CacheFormatError(self.path, line_no, "n and value must be integers") from None
        key = (kind, params, n)
        if key in index and index[key] != value:
            raise CacheFormatError(self.path, line_no, f"conflicting value for {key}")
        index[key] = value

    def get(self, kind: str, params: str, n: int) -> int | None:
        return self._load().get((kind, params, n))

    def put_many(self, records: Iterable[tuple[str, str, int, int]]) -> int:
        """Append records not yet present; returns how many were written."""
        index = self._load()
        fresh = []
        for kind, params, n, value in records:
            if kind not in KINDS:
                raise ValueError(f"unknown kind {kind!r}")
            key = (kind, params, int(n))
            if key in index:
                if index[key] != value:
                    raise ValueError(f"cache already holds a different value for {key}")
                continue
            index[key] = int(value)
            fresh.append(f"{kind}\t{params}\t{int(n)}\t{int(value)}\n")
        if fresh:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="ascii") as fh:
                fcntl.flock(fh, fcntl.LOCK_EX)
                try:
                    fh.writelines(fresh)
                    fh.flush()
                finally:
                    fcntl.flock(fh, fcntl.LOCK_UN)
            # another writer may have appended too; force a reload next time
            self._size = -1
        return len(fresh)

    def summary(self) -> list[tuple[str, str, int, int]]:
        """``(kind, params, record count, largest n)`` per sequence, sorted."""
        counts: Counter = Counter()
        top: dict[tuple[str, str], int] = {}
        for kind, params, n in self._load():
            counts[(kind, params)] += 1
            top[(kind, params)] = max(top.get((kind, params), n), n)
        return sorted((k, p, counts[(k, p)], top[(k, p)]) for k, p in counts)

    def __len__(self):
        return len(self._load())

    def clear(self) -> None:
        if self.path.exists():
            with open(self.path, "a", encoding="ascii") as fh:
                fcntl.flock(fh, fcntl.LOCK_EX)
                try:
                    fh.truncate(0)
                finally:
                    fcntl.flock(fh, fcntl.LOCK_UN)
        self._index = None
        self._size = -1
