"""Univariate polynomials over Q and the rational-function field Q(t)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, Tuple, Union

from ._exceptions import PoleError

__all__ = ["UPoly", "RationalFunction", "as_coefficient"]

Scalar = Union[int, Fraction]


def _trim(coeffs: List[Fraction]) -> Tuple[Fraction, ...]:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


class UPoly:
    """Dense polynomial in t with rational coefficients, lowest degree first"""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()) -> None:
        self.coeffs: Tuple[Fraction, ...] = _trim([Fraction(c) for c in coeffs])

    @classmethod
    def constant(cls, c: Scalar) -> UPoly:
        return cls((c,))

    @classmethod
    def t(cls) -> UPoly:
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial"""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UPoly.constant(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UPoly({str(self)!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and abs(c) == 1:
                body = mono
            elif mono:
                body = f"{abs(c)}*{mono}"
            else:
                body = str(abs(c))
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __neg__(self) -> UPoly:
        return UPoly(-c for c in self.coeffs)

    def __add__(self, other: Union[UPoly, Scalar]) -> UPoly:
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other: Union[UPoly, Scalar]) -> UPoly:
        return self + (-_lift(other))

    def __rsub__(self, other: Scalar) -> UPoly:
        return _lift(other) - self

    def __mul__(self, other: Union[UPoly, Scalar]) -> UPoly:
        other = _lift(other)
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def divmod(self, other: UPoly) -> Tuple[UPoly, UPoly]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        inv_lc = 1 / other.lc
        dq = other.degree
        while len(rem) - 1 >= dq and rem:
            shift = len(rem) - 1 - dq
            factor = rem[-1] * inv_lc
            q[shift] = factor
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= factor * c
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return UPoly(q), UPoly(rem)

    def __floordiv__(self, other: UPoly) -> UPoly:
        return self.divmod(other)[0]

    def __mod__(self, other: UPoly) -> UPoly:
        return self.divmod(other)[1]

    def monic(self) -> UPoly:
        if not self.coeffs:
            return self
        inv = 1 / self.lc
        return UPoly(c * inv for c in self.coeffs)

    def gcd(self, other: UPoly) -> UPoly:
        """Monic greatest common divisor (zero if both are zero)"""
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> UPoly:
        return UPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def evaluate(self, t0: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t0 + c
        return acc

    def denominator_lcm(self) -> int:
        out = 1
        for c in self.coeffs:
            out = lcm(out, c.denominator)
        return out

    def numerator_gcd(self) -> int:
        out = 0
        for c in self.coeffs:
            out = gcd(out, c.numerator)
        return out


def _lift(value: Union[UPoly, Scalar]) -> UPoly:
    if isinstance(value, UPoly):
        return value
    return UPoly.constant(value)


class RationalFunction:
    """Element of Q(t) in lowest terms with a monic denominator"""

    __slots__ = ("num", "den")

    def __init__(self, num: Union[UPoly, Scalar], den: Union[UPoly, Scalar] = 1) -> None:
        num, den = _lift(num), _lift(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den = UPoly(), UPoly.constant(1)
            return
        if den.degree > 0:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num // g, den // g
        lc = den.lc
        if lc != 1:
            num = num * (1 / lc)
            den = den * (1 / lc)
        self.num, self.den = num, den

    @classmethod
    def t(cls) -> RationalFunction:
        return cls(UPoly.t())

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den.degree == 0 and self.num == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RationalFunction({str(self)!r})"

    def __str__(self) -> str:
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __neg__(self) -> RationalFunction:
        return _raw(-self.num, self.den)

    def __add__(self, other: Union[RationalFunction, Scalar]) -> RationalFunction:
        other = _coerce(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other: Union[RationalFunction, Scalar]) -> RationalFunction:
        return self + (-_coerce(other))

    def __rsub__(self, other: Scalar) -> RationalFunction:
        return _coerce(other) - self

    def __mul__(self, other: Union[RationalFunction, Scalar]) -> RationalFunction:
        if isinstance(other, (int, Fraction)):
            if not other:
                return RationalFunction(0)
            return _raw(self.num * other, self.den)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: Union[RationalFunction, Scalar]) -> RationalFunction:
        other = _coerce(other)
        if not other:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other: Scalar) -> RationalFunction:
        return _coerce(other) / self

    def derivative(self) -> RationalFunction:
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def evaluate(self, t0: Scalar) -> Fraction:
        d = self.den.evaluate(t0)
        if not d:
            raise PoleError(f"pole of {self} at t = {t0}", coefficient=self, point=t0)
        return self.num.evaluate(t0) / d


def _raw(num: UPoly, den: UPoly) -> RationalFunction:
    # num/den already in lowest terms with monic den
    out = RationalFunction.__new__(RationalFunction)
    if not num:
        out.num, out.den = UPoly(), UPoly.constant(1)
    else:
        out.num, out.den = num, den
    return out


def _coerce(value: Union[RationalFunction, Scalar]) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    return _raw(UPoly.constant(value), UPoly.constant(1))


def as_coefficient(value: Union[RationalFunction, Scalar]) -> RationalFunction:
    """Lift a rational number into Q(t)"""
    return _coerce(value)
