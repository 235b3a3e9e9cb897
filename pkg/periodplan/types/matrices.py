from __future__ import annotations

from fractions import Fraction
from typing import List

from pydantic import BaseModel, field_validator

__all__ = [
    "ConnectionRecord",
    "TranslateRecord",
    "format_rational",
    "parse_rational",
]


def format_rational(q: Fraction) -> str:
    """Always 'num/den', so every stored entry has one shape"""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    num, _, den = text.strip().partition("/")
    return Fraction(int(num), int(den or 1))


class ConnectionRecord(BaseModel):
    """Stored first-order Gauss-Manin matrix, entries row-major"""

    f: str
    g: str
    t0: str
    size: int
    entries: List[str]

    model_config = {"extra": "allow"}

    @field_validator("entries")
    @classmethod
    def _check_entries(cls, value: List[str]) -> List[str]:
        for s in value:
            parse_rational(s)
        return value

    @property
    def edge(self) -> str:
        return f"{self.f} | {self.g}"

    def matrix(self) -> List[List[Fraction]]:
        vals = [parse_rational(s) for s in self.entries]
        n = self.size
        return [vals[i * n : (i + 1) * n] for i in range(n)]


class TranslateRecord(BaseModel):
    """Stored linear-translate matrix N"""

    f: str
    image: str
    u: List[str]
    size: int
    entries: List[str]

    model_config = {"extra": "allow"}
