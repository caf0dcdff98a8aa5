"""Exact arithmetic in a real quadratic field Q(sqrt(d)).

Every scalar is a + b*sqrt(d) with a, b rational and d a square-free
integer >= 0.  Rationals are the special case b == 0 (stored with
d == 1).  Signs and comparisons are decided by exact integer case
analysis, never by floating point, so the cone-membership tests built
on top of this module are exact.

A single computation never mixes two distinct irrational radicands:
combining sqrt(2) with sqrt(3) would leave the quadratic field, so it
raises FieldMismatchError instead of silently degrading.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

RationalLike = Union[int, Fraction]
ScalarLike = Union[int, Fraction, "QuadraticNumber"]


class FieldMismatchError(ArithmeticError):
    """Arithmetic attempted between elements of distinct quadratic fields."""


@lru_cache(maxsize=4096)
def _square_free_split(n: int) -> tuple[int, int]:
    """Return (s, d) with n == s*s*d and d square-free.  Requires n >= 1."""
    from sympy import factorint

    s, d = 1, 1
    for p, e in factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    return s, d


def sqrt_decompose(r: RationalLike) -> tuple[Fraction, int]:
    """Write sqrt(r) = c*sqrt(d) with c rational and d square-free.

    r must be a non-negative rational.  sqrt(p/q) = sqrt(p*q)/q, so the
    integer p*q is split into square part and square-free core.
    """
    r = Fraction(r)
    if r < 0:
        raise ValueError(f"square root of negative rational {r}")
    if r == 0:
        return Fraction(0), 1
    s, d = _square_free_split(r.numerator * r.denominator)
    return Fraction(s, r.denominator), d


class QuadraticNumber:
    """An exact element a + b*sqrt(d) of Q(sqrt(d)).

    The representation is canonical: d is square-free, and d == 1
    exactly when the value is rational (b == 0).  The constructor
    repairs a non-square-free radicand by absorbing the square part
    into b, so QuadraticNumber(11, -4, 112) and
    QuadraticNumber(11, -16, 7) are the same element 11 - 16*sqrt(7).
    """

    __slots__ = ("a", "b", "d")

    a: Fraction
    b: Fraction
    d: int

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0, d: int = 1) -> None:
        a = Fraction(a)
        b = Fraction(b)
        d = int(d)
        if d < 0:
            raise ValueError(f"radicand must be non-negative, got {d}")
        if d == 0:
            b = Fraction(0)
            d = 1
        if b != 0 and d > 1:
            s, core = _square_free_split(d)
            if s != 1:
                b *= s
                d = core
        if d == 1:
            a += b
            b = Fraction(0)
        if b == 0:
            d = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("QuadraticNumber is immutable")

    # ------------------------------------------------------------------
    # construction helpers

    @classmethod
    def from_rational(cls, r: RationalLike) -> "QuadraticNumber":
        return cls(Fraction(r))

    @classmethod
    def from_root(cls, r: RationalLike) -> "QuadraticNumber":
        """The exact square root of a non-negative rational."""
        c, d = sqrt_decompose(r)
        return cls(0, c, d)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    # ------------------------------------------------------------------
    # field promotion

    @staticmethod
    def _coerce(value: object) -> "QuadraticNumber | None":
        if isinstance(value, QuadraticNumber):
            return value
        if isinstance(value, (int, Fraction)) or isinstance(value, Rational):
            return QuadraticNumber(Fraction(value))
        return None

    def _common_d(self, other: "QuadraticNumber") -> int:
        if self.b == 0:
            return other.d
        if other.b == 0 or self.d == other.d:
            return self.d
        raise FieldMismatchError(
            f"cannot combine sqrt({self.d}) with sqrt({other.d})"
        )

    # ------------------------------------------------------------------
    # ring operations

    def __add__(self, other: object) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._common_d(o)
        return QuadraticNumber(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __sub__(self, other: object) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __neg__(self) -> "QuadraticNumber":
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __pos__(self) -> "QuadraticNumber":
        return self

    def __mul__(self, other: object) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._common_d(o)
        # (a1 + b1 r)(a2 + b2 r) with r*r = d
        return QuadraticNumber(
            self.a * o.a + self.b * o.b * d,
            self.a * o.b + self.b * o.a,
            d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """The field norm a*a - b*b*d (rational)."""
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> "QuadraticNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadraticNumber(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other: object) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        self._common_d(o)
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int) -> "QuadraticNumber":
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = QuadraticNumber(1)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    # ------------------------------------------------------------------
    # exact order

    def sign(self) -> int:
        """Exact sign in {-1, 0, +1}, decided by integer comparisons."""
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return 1 if self.b > 0 else -1
        if self.a > 0 and self.b > 0:
            return 1
        if self.a < 0 and self.b < 0:
            return -1
        # opposite signs: compare a^2 against b^2 d
        lhs = self.a * self.a
        rhs = self.b * self.b * self.d
        if self.a > 0:  # b < 0: positive iff a exceeds |b| sqrt(d)
            return (lhs > rhs) - (lhs < rhs)
        return (rhs > lhs) - (rhs < lhs)

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b and self.d == o.d

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def _compare(self, other: object) -> "int | None":
        o = self._coerce(other)
        if o is None:
            return None
        return (self - o).sign()

    def __lt__(self, other: object) -> bool:
        c = self._compare(other)
        if c is None:
            return NotImplemented
        return c < 0

    def __le__(self, other: object) -> bool:
        c = self._compare(other)
        if c is None:
            return NotImplemented
        return c <= 0

    def __gt__(self, other: object) -> bool:
        c = self._compare(other)
        if c is None:
            return NotImplemented
        return c > 0

    def __ge__(self, other: object) -> bool:
        c = self._compare(other)
        if c is None:
            return NotImplemented
        return c >= 0

    def __abs__(self) -> "QuadraticNumber":
        return -self if self.sign() < 0 else self

    # ------------------------------------------------------------------
    # approximation

    def approx_fraction(self, precision: int = 53) -> Fraction:
        """A rational within 2**-precision of the exact value.

        sqrt(d) is bracketed by isqrt(d << 2k) / 2**k with k chosen so
        that |b| * 2**-k stays below the requested error budget.
        """
        if precision < 1:
            raise ValueError("precision must be positive")
        if self.b == 0:
            return self.a
        mag = abs(self.b.numerator) // self.b.denominator
        k = precision + 2 + mag.bit_length()
        root_floor = Fraction(math.isqrt(self.d << (2 * k)), 1 << k)
        return self.a + self.b * root_floor

    def to_float(self, precision: int = 53) -> float:
        """Float approximation; the rational stage is within 2**-precision."""
        return float(self.approx_fraction(precision))

    def __float__(self) -> float:
        return self.to_float()

    # ------------------------------------------------------------------

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"QuadraticNumber({self.a!r}, {self.b!r}, {self.d})"


def sign(value: ScalarLike) -> int:
    """Exact sign of an int, Fraction or QuadraticNumber."""
    q = QuadraticNumber._coerce(value)
    if q is None:
        raise TypeError(f"not an exact scalar: {value!r}")
    return q.sign()


def as_scalar(value: ScalarLike | str) -> QuadraticNumber:
    """Coerce an int, Fraction or text encoding into a QuadraticNumber."""
    if isinstance(value, str):
        return parse_scalar(value)
    q = QuadraticNumber._coerce(value)
    if q is None:
        raise TypeError(f"not an exact scalar: {value!r}")
    return q


# ----------------------------------------------------------------------
# text encoding: "p/q+r/s√d", with "sqrt" accepted as an ASCII alias

_ROOT_TOKENS = ("√", "sqrt")

_RATIONAL_CHARS = set("0123456789/+-")


def _parse_rational(text: str, original: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad scalar literal {original!r}: {exc}") from None


def _split_root(text: str) -> tuple[str, str] | None:
    for token in _ROOT_TOKENS:
        idx = text.find(token)
        if idx >= 0:
            return text[:idx], text[idx + len(token):]
    return None


def parse_scalar(text: str) -> QuadraticNumber:
    """Parse "p/q", "p/q+r/s√d" or the "sqrt" alias into an exact scalar."""
    s = text.strip()
    if not s:
        raise ValueError("empty scalar literal")
    parts = _split_root(s)
    if parts is None:
        return QuadraticNumber(_parse_rational(s, text))
    left, right = parts
    right = right.strip()
    if right.startswith("(") and right.endswith(")"):
        right = right[1:-1]
    if not right.isdigit():
        raise ValueError(f"bad radicand in scalar literal {text!r}")
    d = int(right)
    left = left.strip().rstrip("*")
    if left in ("", "+"):
        return QuadraticNumber(0, 1, d)
    if left == "-":
        return QuadraticNumber(0, -1, d)
    if set(left) - _RATIONAL_CHARS:
        raise ValueError(f"bad scalar literal {text!r}")
    # trailing signed rational of `left` is the sqrt coefficient
    cut = max(left.rfind("+", 1), left.rfind("-", 1))
    if cut <= 0:
        return QuadraticNumber(0, _parse_rational(left, text), d)
    a_text, b_text = left[:cut], left[cut:]
    b = Fraction(1) if b_text == "+" else Fraction(-1) if b_text == "-" \
        else _parse_rational(b_text, text)
    return QuadraticNumber(_parse_rational(a_text, text), b, d)


def format_scalar(value: ScalarLike, ascii_root: bool = False) -> str:
    """Canonical text form; round-trips through parse_scalar."""
    x = as_scalar(value)
    if x.b == 0:
        return str(x.a)
    root = f"sqrt{x.d}" if ascii_root else f"√{x.d}"
    if x.b == 1:
        b_part = root
    elif x.b == -1:
        b_part = "-" + root
    else:
        b_part = f"{x.b}{root}"
    if x.a == 0:
        return b_part
    joiner = "+" if x.b > 0 else ""
    return f"{x.a}{joiner}{b_part}"
