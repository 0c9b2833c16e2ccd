"""Exact scalar arithmetic: dyadic reals, frc/mod/round, and the precision context.

Integers are plain Python ``int`` (arbitrary precision). Reals on the exact
paths are :class:`DyadicReal` values ``mantissa * 2**exponent``; addition,
subtraction and multiplication are exact, division and square roots round
down to a caller-stated number of fractional bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath
import numpy as np

from .errors import DomainError

DEFAULT_FRAC_BITS = 128
DEFAULT_QUADRATURE_POINTS = 4096
CRYPTO_MIN_FRAC_BITS = 64


@dataclass(frozen=True)
class PrecisionContext:
    frac_bits: int = DEFAULT_FRAC_BITS
    quadrature_points: int = DEFAULT_QUADRATURE_POINTS

    def __post_init__(self):
        if self.frac_bits <= 0 or self.quadrature_points <= 0:
            raise DomainError("precision parameters must be positive")

    def require_crypto(self):
        if self.frac_bits < CRYPTO_MIN_FRAC_BITS:
            raise DomainError(
                f"cryptographic paths need at least {CRYPTO_MIN_FRAC_BITS} fractional bits"
            )


DEFAULT_CONTEXT = PrecisionContext()


# --------------------------------------------------------------------------
# Big integers

def int_to_hex(value: int) -> str:
    """Lowercase hex, most significant digit first, optional leading '-'."""
    if value < 0:
        return "-" + format(-value, "x")
    return format(value, "x")


def int_from_hex(text: str) -> int:
    text = text.strip()
    neg = text.startswith("-")
    body = text[1:] if neg else text
    if not body or any(c not in "0123456789abcdef" for c in body):
        raise DomainError(f"not a lowercase hex integer: {text!r}")
    value = int(body, 16)
    return -value if neg else value


# --------------------------------------------------------------------------
# Dyadic reals

@dataclass(frozen=True)
class DyadicReal:
    """The exact real ``mantissa * 2**exponent``, kept in normal form."""

    mantissa: int
    exponent: int = 0

    def __post_init__(self):
        m, e = self.mantissa, self.exponent
        if m == 0:
            e = 0
        else:
            tz = (m & -m).bit_length() - 1
            m >>= tz
            e += tz
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    # construction -------------------------------------------------------
    @classmethod
    def from_int(cls, value: int) -> DyadicReal:
        return cls(int(value), 0)

    @classmethod
    def from_float(cls, value: float) -> DyadicReal:
        if not math.isfinite(value):
            raise DomainError("cannot represent a non-finite float")
        num, den = float(value).as_integer_ratio()
        return cls(num, -(den.bit_length() - 1))

    @classmethod
    def from_fraction(cls, value, frac_bits: int) -> DyadicReal:
        """Round ``value`` down onto the grid 2**-frac_bits."""
        q = Fraction(value)
        return cls((q.numerator << frac_bits) // q.denominator, -frac_bits)

    @classmethod
    def parse(cls, text: str) -> DyadicReal:
        try:
            mant, exp = text.strip().split("p")
            return cls(int_from_hex(mant), int(exp))
        except (ValueError, DomainError) as exc:
            raise DomainError(f"malformed dyadic literal: {text!r}") from exc

    def __str__(self) -> str:
        return f"{int_to_hex(self.mantissa)}p{self.exponent}"

    # conversion ---------------------------------------------------------
    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def scaled_int(self, frac_bits: int) -> int:
        """floor(self * 2**frac_bits)."""
        shift = self.exponent + frac_bits
        if shift >= 0:
            return self.mantissa << shift
        return self.mantissa >> -shift

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __floor__(self) -> int:
        return self.scaled_int(0)

    def __ceil__(self) -> int:
        return -((-self).scaled_int(0))

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, DyadicReal):
            return other
        if isinstance(other, int):
            return DyadicReal(other, 0)
        if isinstance(other, float):
            return DyadicReal.from_float(other)
        if isinstance(other, Fraction) and other.denominator & (other.denominator - 1) == 0:
            return DyadicReal(other.numerator, -(other.denominator.bit_length() - 1))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        e = min(self.exponent, o.exponent)
        return DyadicReal(
            (self.mantissa << (self.exponent - e)) + (o.mantissa << (o.exponent - e)), e
        )

    __radd__ = __add__

    def __neg__(self):
        return DyadicReal(-self.mantissa, self.exponent)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return DyadicReal(self.mantissa * o.mantissa, self.exponent + o.exponent)

    __rmul__ = __mul__

    def __abs__(self):
        return DyadicReal(abs(self.mantissa), self.exponent)

    def div(self, other, frac_bits: int) -> DyadicReal:
        """Quotient rounded down to ``frac_bits`` fractional bits."""
        o = self._coerce(other)
        if o is NotImplemented or o.mantissa == 0:
            raise DomainError("division by zero or by a non-dyadic value")
        return DyadicReal.from_fraction(self.to_fraction() / o.to_fraction(), frac_bits)

    def sqrt(self, frac_bits: int) -> DyadicReal:
        if self.mantissa < 0:
            raise DomainError("square root of a negative value")
        scaled = DyadicReal.from_fraction(self.to_fraction(), 2 * frac_bits).scaled_int(2 * frac_bits)
        return DyadicReal(math.isqrt(scaled), -frac_bits)

    # comparison ---------------------------------------------------------
    def _cmp_key(self, other):
        if isinstance(other, DyadicReal):
            return other.to_fraction()
        if isinstance(other, (int, Fraction, Rational)):
            return Fraction(other)
        if isinstance(other, float):
            return Fraction(other)
        return None

    def __lt__(self, other):
        k = self._cmp_key(other)
        return NotImplemented if k is None else self.to_fraction() < k

    def __le__(self, other):
        k = self._cmp_key(other)
        return NotImplemented if k is None else self.to_fraction() <= k

    def __gt__(self, other):
        k = self._cmp_key(other)
        return NotImplemented if k is None else self.to_fraction() > k

    def __ge__(self, other):
        k = self._cmp_key(other)
        return NotImplemented if k is None else self.to_fraction() >= k


def sqrt_fraction(value, frac_bits: int = DEFAULT_FRAC_BITS) -> Fraction:
    """floor(sqrt(value)) on the grid 2**-frac_bits, as a Fraction."""
    q = Fraction(value)
    if q < 0:
        raise DomainError("square root of a negative value")
    scaled = (q.numerator << (2 * frac_bits)) // q.denominator
    return Fraction(math.isqrt(scaled), 1 << frac_bits)


# --------------------------------------------------------------------------
# frc / mod / round

def _as_exact(x):
    if isinstance(x, DyadicReal):
        return x.to_fraction(), True
    return x, False


def round_nearest(x) -> int:
    """Nearest integer; exact .5 ties go to the smaller integer."""
    if isinstance(x, np.ndarray):
        return np.ceil(x - 0.5).astype(np.int64)
    q, _ = _as_exact(x)
    half = 0.5 if isinstance(q, float) else Fraction(1, 2)
    return math.ceil(q - half)


def frc(x):
    """Distance from ``x`` to the nearest integer, in [0, 1/2]."""
    if isinstance(x, np.ndarray):
        return np.abs(x - np.ceil(x - 0.5))
    q, dyadic = _as_exact(x)
    r = abs(q - round_nearest(q))
    return DyadicReal._coerce(r) if dyadic else r


def mod_pos(x, y):
    """``x - floor(x/y)*y``, always in [0, y) for y > 0."""
    if isinstance(x, np.ndarray):
        if np.any(np.asarray(y) <= 0):
            raise DomainError("modulus must be positive")
        return x - np.floor(x / y) * y
    qx, dx = _as_exact(x)
    qy, dy = _as_exact(y)
    if qy <= 0:
        raise DomainError("modulus must be positive")
    r = qx - math.floor(qx / qy) * qy
    if dx and (dy or isinstance(y, int)):
        return DyadicReal._coerce(r)
    return r


# --------------------------------------------------------------------------
# High-precision transcendental functions (mpmath at frac_bits + guard bits)

_GUARD_BITS = 16


def _hp(fn, x, ctx: PrecisionContext):
    q = x.to_fraction() if isinstance(x, DyadicReal) else Fraction(x)
    with mpmath.workprec(ctx.frac_bits + _GUARD_BITS):
        arg = mpmath.mpf(q.numerator) / q.denominator
        return DyadicReal.from_fraction(_mpf_to_fraction(fn(arg)), ctx.frac_bits)


def _mpf_to_fraction(v) -> Fraction:
    man, exp = mpmath.mpf(v).man_exp
    man = int(man)
    return Fraction(man << exp) if exp >= 0 else Fraction(man, 1 << -exp)


def hp_exp(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> DyadicReal:
    return _hp(mpmath.exp, x, ctx)


def hp_cos(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> DyadicReal:
    return _hp(mpmath.cos, x, ctx)


def hp_erf(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> DyadicReal:
    return _hp(mpmath.erf, x, ctx)


def hp_cos_pi(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> DyadicReal:
    """cos(pi * x) with pi carried at working precision."""
    return _hp(mpmath.cospi, x, ctx)


# --------------------------------------------------------------------------
# Uniform big integers from a numpy Generator

def random_below(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in [0, bound) for arbitrary-size bound (rejection on bits)."""
    if bound <= 0:
        raise DomainError("bound must be positive")
    if bound <= 2**62:
        return int(rng.integers(0, bound))
    nbits = (bound - 1).bit_length()
    nbytes = (nbits + 7) // 8
    mask = (1 << nbits) - 1
    while True:
        v = int.from_bytes(rng.bytes(nbytes), "little") & mask
        if v < bound:
            return v


def random_between(rng: np.random.Generator, lo: int, hi: int) -> int:
    """Uniform integer in [lo, hi)."""
    return lo + random_below(rng, hi - lo)
