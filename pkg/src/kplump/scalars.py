"""Exact scalars: arbitrary-precision rationals optionally extended by i.

Every coefficient in the symbolic layers of the package is an
:class:`ExactScalar`, a Gaussian rational re + im*i with both parts stored
as exact rationals in lowest terms.  No floating point enters this module.

The underlying rational type is gmpy2.mpq when available (much faster
arithmetic) and fractions.Fraction otherwise; both normalize to lowest
terms with positive denominators on construction.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as QQ  # type: ignore
    _HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    QQ = Fraction
    _HAVE_GMPY2 = False

_QZERO = QQ(0)
_QONE = QQ(1)


def rational(value) -> "QQ":
    """Coerce ints, Fractions, mpqs, or 'p/q' strings to the rational type."""
    if isinstance(value, str):
        value = value.strip()
        if "/" in value:
            num, den = value.split("/")
            return QQ(int(num), int(den))
        return QQ(int(value))
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a rational or string")
    return QQ(value)


def rational_str(q) -> str:
    """Deterministic 'p' or 'p/q' form."""
    num, den = q.numerator, q.denominator
    return str(num) if den == 1 else f"{num}/{den}"


class ExactScalar:
    """A Gaussian rational re + im*i with exact arithmetic."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", rational(re))
        object.__setattr__(self, "im", rational(im))

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Fraction)) or type(other) is type(_QONE):
            return ExactScalar(other)
        if isinstance(other, str):
            return ExactScalar(rational(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactScalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactScalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return ExactScalar(-self.re, -self.im)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.im and not other.im:
            return ExactScalar(self.re * other.re)
        a, b, c, d = self.re, self.im, other.re, other.im
        return ExactScalar(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero ExactScalar")
        if not self.im and not other.im:
            return ExactScalar(self.re / other.re)
        c, d = other.re, other.im
        n = c * c + d * d
        a, b = self.re, self.im
        return ExactScalar((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (ONE / self) ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.re, -self.im)

    def norm(self):
        """re^2 + im^2 as a rational."""
        return self.re * self.re + self.im * self.im

    # -- comparisons (real scalars only, for deterministic ordering) --------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.im or other.im:
            raise TypeError("ordering is defined for real scalars only")
        return self.re < other.re

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else other < self

    def __ge__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else other <= self

    # -- conversions ---------------------------------------------------------

    def to_complex(self) -> complex:
        return float(self.re) + 1j * float(self.im)

    def to_float(self) -> float:
        if self.im:
            raise ValueError(f"{self} is not real")
        return float(self.re)

    def as_str(self) -> str:
        """Deterministic text form: 'p/q', 'r/s*i', or 'p/q+r/s*i'."""
        if not self.im:
            return rational_str(self.re)
        im_part = "i" if abs(self.im) == 1 else f"{rational_str(abs(self.im))}*i"
        sign = "-" if self.im < 0 else ""
        if not self.re:
            return sign + im_part
        joiner = "-" if self.im < 0 else "+"
        return f"{rational_str(self.re)}{joiner}{im_part}"

    def __repr__(self):
        return f"ExactScalar({self.as_str()})"

    def __str__(self):
        return self.as_str()


ZERO = ExactScalar(0)
ONE = ExactScalar(1)
IMAG = ExactScalar(0, 1)


def scalar(value) -> ExactScalar:
    """Coerce a value (int, rational, str, ExactScalar) to ExactScalar."""
    if isinstance(value, ExactScalar):
        return value
    coerced = ExactScalar._coerce(value)
    if coerced is NotImplemented:
        raise TypeError(f"cannot coerce {value!r} to ExactScalar")
    return coerced
