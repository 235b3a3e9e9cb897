from __future__ import annotations

import json
import logging
import os
import tempfile
import threading
from pathlib import Path
from typing import Callable, Dict, Generic, Iterator, List, Optional, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from ._exceptions import StoreError

__all__ = ["JsonlStore", "write_json", "read_json"]

logger = logging.getLogger(__name__)

RecordT = TypeVar("RecordT", bound=BaseModel)


class JsonlStore(Generic[RecordT]):
    """
    Append-only JSON-Lines store of pydantic records

    Features:
    - One record per line, appended under a lock (single writer)
    - Latest record per key wins when loading
    - Compaction rewrites the file atomically with one line per key
    """

    def __init__(
        self,
        path: Union[str, Path],
        record_type: Type[RecordT],
        key: Optional[Callable[[RecordT], str]] = None,
    ) -> None:
        """
        Initialize the store

        Args:
            path: file path of the store; parent directories are created on write
            record_type: pydantic model every line is validated against
            key: identity of a record; defaults to the record's ``key`` attribute
        """
        self.path = Path(path)
        self.record_type = record_type
        self._key = key or (lambda r: getattr(r, "key"))
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"JsonlStore(path={str(self.path)!r}, record_type={self.record_type.__name__})"

    def exists(self) -> bool:
        return self.path.exists()

    def append(self, record: RecordT) -> None:
        """Append one record and flush it to disk before returning"""
        line = record.model_dump_json()
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def extend(self, records: List[RecordT]) -> None:
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                for record in records:
                    fh.write(record.model_dump_json() + "\n")

    def iter_records(self) -> Iterator[RecordT]:
        """Every record in file order; corrupt lines raise StoreError"""
        if not self.path.exists():
            return
        with open(self.path, "r", encoding="utf-8") as fh:
            for number, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    yield self.record_type.model_validate_json(line)
                except (ValidationError, ValueError) as exc:
                    raise StoreError(
                        f"corrupt record in {self.path}: {exc}", line_number=number
                    ) from exc

    def load(self) -> List[RecordT]:
        return list(self.iter_records())

    def latest(self) -> Dict[str, RecordT]:
        """Latest record per key, in first-seen key order"""
        out: Dict[str, RecordT] = {}
        for record in self.iter_records():
            out[self._key(record)] = record
        return out

    def get(self, key: str) -> Optional[RecordT]:
        return self.latest().get(key)

    def compact(self) -> int:
        """Rewrite the file keeping only the latest record per key; returns dropped count"""
        records = self.load()
        latest = self.latest()
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=str(self.path.parent), suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                for record in latest.values():
                    fh.write(record.model_dump_json() + "\n")
            os.replace(tmp, self.path)
        dropped = len(records) - len(latest)
        logger.info("compacted %s: dropped %d superseded records", self.path, dropped)
        return dropped

    def clear(self) -> None:
        with self._lock:
            if self.path.exists():
                self.path.unlink()


def write_json(path: Union[str, Path], data: object) -> None:
    """Write a JSON document atomically"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, ensure_ascii=False)
    os.replace(tmp, path)


def read_json(path: Union[str, Path]) -> object:
    path = Path(path)
    if not path.exists():
        raise StoreError(f"missing input file {path}")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise StoreError(f"malformed JSON in {path}: {exc}", line_number=exc.lineno) from exc
