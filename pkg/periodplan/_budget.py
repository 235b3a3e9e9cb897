from __future__ import annotations

import threading
import time
from typing import Optional

from pydantic import BaseModel, Field

from ._exceptions import BudgetExceededError

__all__ = ["Budget", "BudgetMeter"]


class Budget(BaseModel):
    """Wall-clock and step limits for one oracle job; either may trip first"""

    wall_clock: float = Field(default=30.0, gt=0)
    step_limit: Optional[int] = Field(default=None, gt=0)

    model_config = {"frozen": True}


class BudgetMeter:
    """Counts steps against a Budget and checks the deadline at every tick.

    Shared by Buchberger, normal forms and the ODE chain so one job has one
    clock. An optional threading.Event lets a coordinator cancel the job.
    """

    def __init__(
        self,
        budget: Optional[Budget] = None,
        *,
        cancel: Optional[threading.Event] = None,
        check_every: int = 1,
    ) -> None:
        self.budget = budget
        self.cancel = cancel
        self.check_every = max(1, check_every)
        self.steps = 0
        self.started = time.monotonic()
        self.deadline = (
            self.started + budget.wall_clock if budget is not None else None
        )

    @classmethod
    def unlimited(cls) -> BudgetMeter:
        return cls(None)

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def tick(self, n: int = 1) -> None:
        """Record n steps; raise BudgetExceededError when any limit trips"""
        self.steps += n
        if self.budget is not None and self.budget.step_limit is not None:
            if self.steps > self.budget.step_limit:
                raise BudgetExceededError(
                    f"step limit {self.budget.step_limit} exceeded",
                    reason="steps",
                    steps=self.steps,
                    elapsed=self.elapsed,
                )
        if self.steps % self.check_every:
            return
        self.check()

    def check(self) -> None:
        if self.cancel is not None and self.cancel.is_set():
            raise BudgetExceededError(
                "computation cancelled", reason="cancelled", steps=self.steps, elapsed=self.elapsed
            )
        if self.deadline is not None and time.monotonic() >= self.deadline:
            raise BudgetExceededError(
                f"wall clock budget of {self.budget.wall_clock}s exceeded",
                reason="wall_clock",
                steps=self.steps,
                elapsed=self.elapsed,
            )
