"""Sparse exact multivariate polynomials over Q or Q(t), ordered by grevlex."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import (
    Any,
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from ._exceptions import ParseError, SingularMatrixError
from ._linalg import determinant
from ._monomial import (
    NVARS,
    ONE,
    VARIABLES,
    Monomial,
    format_monomial,
    grevlex_key,
    mono_mul,
)
from ._univariate import RationalFunction, UPoly, as_coefficient

__all__ = ["Polynomial", "substitute_linear", "evaluate_t", "pencil_family"]

Coefficient = Any  # Fraction or RationalFunction


class Polynomial:
    """Immutable sparse polynomial; no zero coefficients are ever stored"""

    __slots__ = ("_terms", "_sorted")

    def __init__(self, terms: Optional[Mapping[Monomial, Coefficient]] = None) -> None:
        clean: Dict[Monomial, Coefficient] = {}
        if terms:
            for m, c in terms.items():
                if len(m) != NVARS:
                    raise ValueError(f"monomial {m} does not have {NVARS} exponents")
                if isinstance(c, int):
                    c = Fraction(c)
                if c:
                    clean[tuple(m)] = c
        self._terms = clean
        self._sorted: Optional[List[Monomial]] = None

    @classmethod
    def _from_clean(cls, terms: Dict[Monomial, Coefficient]) -> Polynomial:
        out = cls.__new__(cls)
        out._terms = terms
        out._sorted = None
        return out

    # ---------- constructors ----------
    @classmethod
    def zero(cls) -> Polynomial:
        return cls._from_clean({})

    @classmethod
    def constant(cls, c: Coefficient) -> Polynomial:
        return cls({ONE: c})

    @classmethod
    def monomial(cls, m: Monomial, c: Coefficient = 1) -> Polynomial:
        return cls({m: c})

    @classmethod
    def variable(cls, i: int) -> Polynomial:
        m = [0] * NVARS
        m[i] = 1
        return cls({tuple(m): Fraction(1)})

    @classmethod
    def from_monomials(cls, monomials: Iterable[Monomial]) -> Polynomial:
        """Sum of distinct monomials with coefficient 1"""
        return cls({m: Fraction(1) for m in monomials})

    @classmethod
    def parse(cls, text: str) -> Polynomial:
        return _Parser(text).parse()

    # ---------- queries ----------
    @property
    def terms(self) -> Dict[Monomial, Coefficient]:
        return dict(self._terms)

    def monomials(self) -> List[Monomial]:
        """Support, grevlex descending"""
        if self._sorted is None:
            self._sorted = sorted(self._terms, key=grevlex_key, reverse=True)
        return self._sorted

    def items(self) -> Iterator[Tuple[Monomial, Coefficient]]:
        for m in self.monomials():
            yield m, self._terms[m]

    def coefficient(self, m: Monomial) -> Coefficient:
        return self._terms.get(m, Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def lm(self) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return self.monomials()[0]

    @property
    def lc(self) -> Coefficient:
        return self._terms[self.lm]

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def homogeneous_degree(self) -> Optional[int]:
        """The common degree of all terms, or None when mixed or zero"""
        degrees = {sum(m) for m in self._terms}
        return degrees.pop() if len(degrees) == 1 else None

    def is_rational(self) -> bool:
        """True when every coefficient lies in Q"""
        return all(isinstance(c, Fraction) for c in self._terms.values())

    # ---------- arithmetic ----------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __neg__(self) -> Polynomial:
        return Polynomial._from_clean({m: -c for m, c in self._terms.items()})

    def __add__(self, other: Union[Polynomial, int, Fraction]) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial._from_clean(out)

    __radd__ = __add__

    def __sub__(self, other: Union[Polynomial, int, Fraction]) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self + (-other)

    def __mul__(self, other: Union[Polynomial, int, Fraction, RationalFunction]) -> Polynomial:
        if not isinstance(other, Polynomial):
            return self.scalar_mul(other)
        out: Dict[Monomial, Coefficient] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m)
                out[m] = c1 * c2 if s is None else s + c1 * c2
        return Polynomial._from_clean({m: c for m, c in out.items() if c})

    def __rmul__(self, other: Union[int, Fraction, RationalFunction]) -> Polynomial:
        return self.scalar_mul(other)

    def __pow__(self, e: int) -> Polynomial:
        out = Polynomial.constant(Fraction(1))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scalar_mul(self, c: Coefficient) -> Polynomial:
        if isinstance(c, int):
            c = Fraction(c)
        if not c:
            return Polynomial.zero()
        return Polynomial._from_clean({m: v * c for m, v in self._terms.items()})

    def mul_term(self, m: Monomial, c: Coefficient) -> Polynomial:
        """self * c * m"""
        if not c:
            return Polynomial.zero()
        return Polynomial._from_clean({mono_mul(k, m): v * c for k, v in self._terms.items()})

    def partial_derivative(self, i: int) -> Polynomial:
        out: Dict[Monomial, Coefficient] = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                dm = m[:i] + (e - 1,) + m[i + 1 :]
                out[dm] = c * e
        return Polynomial._from_clean(out)

    def map_coefficients(self, fn: Callable[[Coefficient], Coefficient]) -> Polynomial:
        return Polynomial({m: fn(c) for m, c in self._terms.items()})

    # ---------- text ----------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: List[str] = []
        for m, c in self.items():
            neg, body = _format_term(m, c)
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append(("- " if neg else "+ ") + body)
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"

    def canonical_key(self) -> str:
        """Global identity key: printed form, grevlex descending"""
        return str(self)


def _format_term(m: Monomial, c: Coefficient) -> Tuple[bool, str]:
    mono = format_monomial(m)
    if isinstance(c, Fraction):
        neg = c < 0
        a = -c if neg else c
        if m == ONE:
            return neg, str(a)
        return neg, mono if a == 1 else f"{a}*{mono}"
    if m == ONE:
        return False, f"({c})"
    return False, f"({c})*{mono}"


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([xyzw])(?:\^(\d+))?|([+\-*]))")


class _Parser:
    """Recursive descent over the grammar  poly := [sign] term (sign term)*"""

    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def _fail(self, message: str) -> None:
        raise ParseError(message, text=self.text, position=self.pos)

    def _peek(self) -> Optional[re.Match[str]]:
        if self.pos >= len(self.text.rstrip()):
            return None
        match = _TOKEN.match(self.text, self.pos)
        if match is None:
            while self.pos < len(self.text) and self.text[self.pos].isspace():
                self.pos += 1
            self._fail(f"unexpected character {self.text[self.pos]!r}")
        return match

    def parse(self) -> Polynomial:
        if not self.text.strip():
            self._fail("empty polynomial")
        out: Dict[Monomial, Fraction] = {}
        sign = 1
        tok = self._peek()
        if tok is not None and tok.group(4) in ("+", "-"):
            sign = -1 if tok.group(4) == "-" else 1
            self.pos = tok.end()
        while True:
            m, c = self._term()
            out[m] = out.get(m, Fraction(0)) + sign * c
            tok = self._peek()
            if tok is None:
                break
            if tok.group(4) not in ("+", "-"):
                self._fail("expected '+' or '-'")
            sign = -1 if tok.group(4) == "-" else 1
            self.pos = tok.end()
        return Polynomial(out)

    def _term(self) -> Tuple[Monomial, Fraction]:
        coeff = Fraction(1)
        exps = [0] * NVARS
        expect_factor = True
        seen = False
        while expect_factor:
            tok = self._peek()
            if tok is None:
                self._fail("unexpected end of input")
            if tok.group(1) is not None:
                num, _, den = tok.group(1).partition("/")
                if den and int(den) == 0:
                    self._fail("zero denominator")
                coeff *= Fraction(int(num), int(den or 1))
            elif tok.group(2) is not None:
                exps[VARIABLES.index(tok.group(2))] += int(tok.group(3) or 1)
            else:
                self._fail("expected a coefficient or a variable")
            self.pos = tok.end()
            seen = True
            nxt = self._peek()
            expect_factor = nxt is not None and nxt.group(4) == "*"
            if expect_factor:
                self.pos = nxt.end()
        assert seen
        return tuple(exps), coeff


def substitute_linear(u: Sequence[Sequence[Any]], f: Polynomial) -> Polynomial:
    """u . f(x) = f(x u^t): the variable x_i becomes sum_j u[i][j] x_j.

    As a function of u this is a right action: u1 . (u2 . f) = (u2 u1) . f.
    """
    if len(u) != NVARS or any(len(row) != NVARS for row in u):
        raise SingularMatrixError(f"substitution matrix must be {NVARS}x{NVARS}")
    mat = [[Fraction(v) for v in row] for row in u]
    if not determinant(mat):
        raise SingularMatrixError("substitution matrix is singular")
    images = [
        Polynomial({tuple(int(i == j) for i in range(NVARS)): mat[k][j] for j in range(NVARS)})
        for k in range(NVARS)
    ]
    powers: Dict[Tuple[int, int], Polynomial] = {}

    def power(k: int, e: int) -> Polynomial:
        key = (k, e)
        if key not in powers:
            powers[key] = images[k] ** e
        return powers[key]

    out = Polynomial.zero()
    for m, c in f.items():
        term = Polynomial.constant(c)
        for k, e in enumerate(m):
            if e:
                term = term * power(k, e)
        out = out + term
    return out


def evaluate_t(p: Polynomial, t0: Fraction) -> Polynomial:
    """Evaluate every Q(t) coefficient at t = t0; PoleError names the culprit"""
    t0 = Fraction(t0)
    out: Dict[Monomial, Fraction] = {}
    for m, c in p.items():
        value = c.evaluate(t0) if isinstance(c, RationalFunction) else Fraction(c)
        if value:
            out[m] = value
    return Polynomial(out)


def pencil_family(f: Polynomial, g: Polynomial) -> Polynomial:
    """(1 - t) f + t g as a polynomial over Q(t)"""
    t = UPoly.t()
    one_minus_t = UPoly.constant(1) - t
    out: Dict[Monomial, RationalFunction] = {}
    for m in set(f.terms) | set(g.terms):
        c = one_minus_t * f.coefficient(m) + t * g.coefficient(m)
        if c:
            out[m] = RationalFunction(c)
    return Polynomial(out)


def lift_to_function_field(p: Polynomial) -> Polynomial:
    return Polynomial({m: as_coefficient(c) for m, c in p.items()})
