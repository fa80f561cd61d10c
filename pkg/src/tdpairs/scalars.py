"""Scalar fields used throughout the package.

Two interchangeable backends are provided:

* :data:`QQ` -- exact rationals backed by ``gmpy2.mpq``.
* :class:`ComplexField` -- arbitrary-precision complex numbers backed by an
  ``mpmath`` context with its own working precision and a relative zero
  tolerance.

Matrices and polynomials store *raw* payloads (``mpq`` or ``mpc``) together
with the field they live in; :class:`FieldScalar` wraps a single payload for
the public API and refuses to combine values from different backends.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import gmpy2
import mpmath

__all__ = [
    "BackendMismatchError",
    "FieldZeroDivisionError",
    "PrecisionConfig",
    "ExactField",
    "ComplexField",
    "QQ",
    "complex_field",
    "FieldScalar",
    "scalar",
    "field_arith",
    "q_bracket",
    "is_zero",
    "format_scalar",
    "parse_scalar",
    "common_field",
]


class BackendMismatchError(TypeError):
    """Raised when values from two different fields are combined."""


class FieldZeroDivisionError(ZeroDivisionError):
    """Division by a value the field considers zero."""


@dataclass(frozen=True)
class PrecisionConfig:
    """Working precision and relative zero tolerance of the complex backend."""

    precision_bits: int = 128
    zero_tolerance: float | None = None

    def __post_init__(self):
        if not isinstance(self.precision_bits, int) or self.precision_bits <= 0:
            raise ValueError("precision_bits must be a positive integer")
        if self.zero_tolerance is not None and not 0 <= self.zero_tolerance < 1:
            raise ValueError("zero_tolerance must lie in [0, 1)")

    @property
    def tolerance_exponent(self) -> float:
        """log2 of the effective tolerance (the default is 2^(-bits/2))."""
        if self.zero_tolerance is None:
            return -self.precision_bits / 2
        if self.zero_tolerance == 0:
            return -math.inf
        return math.log2(self.zero_tolerance)


class ExactField:
    """The field of rational numbers with exact arithmetic."""

    exact = True
    name = "exact"

    def __call__(self, x):
        if isinstance(x, FieldScalar):
            if x.field is not self:
                raise BackendMismatchError(f"cannot coerce {x.field!r} value into {self!r}")
            return x.value
        if type(x) is type(gmpy2.mpq()):
            return x
        if isinstance(x, bool):
            return gmpy2.mpq(int(x))
        if isinstance(x, int) or type(x) is type(gmpy2.mpz()):
            return gmpy2.mpq(int(x))
        if isinstance(x, Rational):
            return gmpy2.mpq(int(x.numerator), int(x.denominator))
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot convert {x!r} to an exact rational")

    @property
    def zero(self):
        return gmpy2.mpq(0)

    @property
    def one(self):
        return gmpy2.mpq(1)

    def is_zero(self, x, scale=1) -> bool:
        return x == 0

    def magnitude(self, x):
        return abs(x)

    def sqrt(self, x):
        """Exact square root, or ``None`` if ``x`` is not a rational square."""
        if x < 0:
            return None
        num, den = gmpy2.numer(x), gmpy2.denom(x)
        if gmpy2.is_square(num) and gmpy2.is_square(den):
            return gmpy2.mpq(gmpy2.isqrt(num), gmpy2.isqrt(den))
        return None

    def format(self, x) -> str:
        return str(x)

    def parse(self, s: str):
        s = s.strip()
        if not _RATIONAL_RE.match(s):
            raise ValueError(f"not an exact rational: {s!r}")
        return gmpy2.mpq(Fraction(s))

    def __repr__(self):
        return "QQ"

    def __reduce__(self):
        return (_exact_field, ())


def _exact_field():
    return QQ


class ComplexField:
    """Complex numbers at a fixed binary precision.

    ``is_zero`` is relative: a value is zero when its modulus does not exceed
    ``tolerance * scale``.
    """

    exact = False
    name = "complex"

    def __init__(self, config: PrecisionConfig = PrecisionConfig()):
        self.config = config
        self.ctx = mpmath.MPContext()
        self.ctx.prec = config.precision_bits
        if config.zero_tolerance is None:
            self.tolerance = self.ctx.ldexp(1, -(config.precision_bits // 2))
            if config.precision_bits % 2:
                self.tolerance /= self.ctx.sqrt(2)
        else:
            self.tolerance = self.ctx.mpf(config.zero_tolerance)

    @property
    def precision_bits(self) -> int:
        return self.config.precision_bits

    def __call__(self, x):
        ctx = self.ctx
        if isinstance(x, FieldScalar):
            if x.field is self or x.field == self:
                return x.value
            if x.field is QQ:
                return self(x.value)
            raise BackendMismatchError(f"cannot coerce {x.field!r} value into {self!r}")
        if type(x) is type(gmpy2.mpq()):
            return ctx.mpc(ctx.mpf(int(gmpy2.numer(x))) / int(gmpy2.denom(x)))
        if isinstance(x, Fraction):
            return ctx.mpc(ctx.mpf(x.numerator) / x.denominator)
        if isinstance(x, (int, float, complex)) or type(x) is type(gmpy2.mpz()):
            return ctx.mpc(int(x) if type(x) is type(gmpy2.mpz()) else x)
        if isinstance(x, (mpmath.mpf, mpmath.mpc)) or hasattr(x, "_mpf_") or hasattr(x, "_mpc_"):
            return ctx.mpc(x)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot convert {x!r} to a complex scalar")

    @property
    def zero(self):
        return self.ctx.mpc(0)

    @property
    def one(self):
        return self.ctx.mpc(1)

    def is_zero(self, x, scale=1) -> bool:
        return abs(x) <= self.tolerance * scale

    def magnitude(self, x):
        return abs(x)

    def sqrt(self, x):
        return self.ctx.sqrt(x)

    @property
    def digits(self) -> int:
        return int(math.ceil(self.precision_bits * math.log10(2))) + 2

    def format(self, x) -> str:
        ctx = self.ctx
        n = self.digits
        re_s = ctx.nstr(x.real, n, strip_zeros=False, min_fixed=-3, max_fixed=3)
        im_s = ctx.nstr(abs(x.imag), n, strip_zeros=False, min_fixed=-3, max_fixed=3)
        sign = "-" if x.imag < 0 else "+"
        return f"{re_s}{sign}{im_s}*i"

    def parse(self, s: str):
        s = s.strip().replace(" ", "")
        ctx = self.ctx
        if _RATIONAL_RE.match(s):
            return self(QQ.parse(s))
        m = _COMPLEX_RE.match(s)
        if m is None:
            m2 = _IMAG_RE.match(s)
            if m2 is None:
                if _REAL_RE.match(s):
                    return ctx.mpc(ctx.mpf(s))
                raise ValueError(f"not a complex scalar: {s!r}")
            return ctx.mpc(0, ctx.mpf(m2.group(1)))
        return ctx.mpc(ctx.mpf(m.group(1)), ctx.mpf(m.group(2)))

    def __eq__(self, other):
        return isinstance(other, ComplexField) and self.config == other.config

    def __hash__(self):
        return hash(("complex", self.config))

    def __repr__(self):
        return f"ComplexField({self.precision_bits} bits)"

    def __reduce__(self):
        return (complex_field, (self.config,))


_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")
_REAL_RE = re.compile(rf"^{_NUM}$")
_COMPLEX_RE = re.compile(rf"^({_NUM})([+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\*i$")
_IMAG_RE = re.compile(rf"^({_NUM})\*i$")

QQ = ExactField()


@lru_cache(maxsize=None)
def complex_field(config: PrecisionConfig = PrecisionConfig()) -> ComplexField:
    """Shared :class:`ComplexField` instance for ``config``."""
    return ComplexField(config)


def common_field(*fields):
    """The single field shared by ``fields``; raises on a mismatch."""
    first = fields[0]
    for f in fields[1:]:
        if f is not first and f != first:
            raise BackendMismatchError(f"backend mismatch: {first!r} vs {f!r}")
    return first


class FieldScalar:
    """An immutable element of :data:`QQ` or of a :class:`ComplexField`."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", field(value))

    def __setattr__(self, name, value):
        raise AttributeError("FieldScalar is immutable")

    def __reduce__(self):
        return (FieldScalar, (self.field, self.field.format(self.value)))

    @property
    def exact(self) -> bool:
        return self.field.exact

    def _coerce(self, other):
        if isinstance(other, FieldScalar):
            if other.field is not self.field and other.field != self.field:
                raise BackendMismatchError(
                    f"backend mismatch: {self.field!r} vs {other.field!r}"
                )
            return other.value
        if isinstance(other, (int, Fraction)) or type(other) is type(gmpy2.mpq()):
            return self.field(other)
        return NotImplemented

    def _new(self, value):
        out = object.__new__(FieldScalar)
        object.__setattr__(out, "field", self.field)
        object.__setattr__(out, "value", value)
        return out

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.field.is_zero(o):
            raise FieldZeroDivisionError("division by zero")
        return self._new(self.value / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(o).__truediv__(self)

    def __neg__(self):
        return self._new(-self.value)

    def __pos__(self):
        return self

    def inv(self) -> "FieldScalar":
        if self.field.is_zero(self.value):
            raise FieldZeroDivisionError("inverse of zero")
        return self._new(self.field.one / self.value)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        return self._new(self.value ** n)

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            if other.field is not self.field and other.field != self.field:
                return False
            return self.value == other.value
        if isinstance(other, (int, Fraction)) or type(other) is type(gmpy2.mpq()):
            return self.value == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def is_zero(self, scale=1) -> bool:
        return self.field.is_zero(self.value, scale)

    def close(self, other, scale=None) -> bool:
        """Equality in the field's sense (exact, or within relative tolerance)."""
        o = self._coerce(other)
        if self.field.exact:
            return self.value == o
        if scale is None:
            scale = max(abs(self.value), abs(o), 1)
        return self.field.is_zero(self.value - o, scale)

    def lift(self, field) -> "FieldScalar":
        """The same number viewed in ``field`` (exact values may be lifted to complex)."""
        if field is self.field or field == self.field:
            return self
        if not self.field.exact:
            raise BackendMismatchError("complex values cannot be lowered to the exact field")
        return FieldScalar(field, self.value)

    def __abs__(self):
        return abs(self.value)

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"FieldScalar({self.field!r}, {str(self)!r})"


def scalar(x, field=QQ) -> FieldScalar:
    """Build a :class:`FieldScalar` from a number, string or scalar."""
    if isinstance(x, FieldScalar):
        return x.lift(field)
    return FieldScalar(field, x)


def field_arith(x: FieldScalar, y: FieldScalar | None, op: str) -> FieldScalar:
    """Apply one of ``add sub mul div neg inv pow`` to field scalars."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "neg":
        return -x
    if op == "inv":
        return x.inv()
    if op == "pow":
        return x ** int(y if not isinstance(y, FieldScalar) else _as_int(y))
    raise ValueError(f"unknown operation {op!r}")


def _as_int(x: FieldScalar) -> int:
    if not x.exact or gmpy2.denom(x.value) != 1:
        raise ValueError("exponent must be an integer")
    return int(x.value)


def q_bracket(n: int, q: FieldScalar) -> FieldScalar:
    """The q-integer ``(q^n - q^-n) / (q - q^-1)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if q.is_zero():
        raise FieldZeroDivisionError("q must be nonzero")
    denom = q - q.inv()
    if denom.is_zero(scale=max(abs(q), 1)):
        raise FieldZeroDivisionError("q^2 = 1: the q-bracket is undefined")
    return (q ** n - q ** (-n)) / denom


def is_zero(x: FieldScalar, scale=1) -> bool:
    return x.is_zero(scale)


def format_scalar(x: FieldScalar) -> str:
    return str(x)


def parse_scalar(s, field=QQ) -> FieldScalar:
    if isinstance(s, (int, Fraction)):
        return FieldScalar(field, s)
    if isinstance(s, float):
        if field.exact:
            raise ValueError("floats are not accepted by the exact backend; use 'num/den'")
        return FieldScalar(field, s)
    return FieldScalar(field, field.parse(str(s)))
