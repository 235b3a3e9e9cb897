from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, Iterator, List, Tuple, Union

from ._exceptions import CheckpointError, StoreError
from ._stores import JsonlStore
from .types.labels import AttemptOutcome

__all__ = ["Checkpoint"]

logger = logging.getLogger(__name__)


class Checkpoint(JsonlStore[AttemptOutcome]):
    """
    Append-only attempt log of a search

    Every terminal outcome is flushed before the search loop moves on, so
    replaying the log rebuilds the forest exactly.
    """

    def __init__(self, path: Union[str, Path]) -> None:
        super().__init__(path, AttemptOutcome, key=lambda r: f"{r.edge[0]} | {r.edge[1]}")

    def iter_records(self) -> Iterator[AttemptOutcome]:
        try:
            yield from super().iter_records()
        except StoreError as exc:
            raise CheckpointError(f"corrupt checkpoint {self.path}", line_number=exc.line_number) from exc

    def outcomes(self) -> List[AttemptOutcome]:
        """The current outcome of every logged edge.

        A timeout followed by a retry of the same edge under a strictly larger
        budget is superseded by the retry. Any other repeated edge is an
        inconsistency.
        """
        current: Dict[Tuple[str, str], AttemptOutcome] = {}
        for number, record in enumerate(self.iter_records(), start=1):
            edge = (record.edge[0], record.edge[1])
            prior = current.get(edge)
            if prior is not None:
                if not _is_retry(prior, record):
                    raise CheckpointError(
                        f"edge {edge[0]} -- {edge[1]} logged twice in {self.path}", line_number=number
                    )
                del current[edge]
            current[edge] = record
        out = list(current.values())
        logger.debug("read %d outcomes from %s", len(out), self.path)
        return out


def _is_retry(prior: AttemptOutcome, record: AttemptOutcome) -> bool:
    return (
        prior.status == "timeout"
        and prior.budget is not None
        and record.budget is not None
        and record.budget > prior.budget
    )
