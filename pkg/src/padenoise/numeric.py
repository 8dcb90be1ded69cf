"""Precision-parameterized arithmetic kernel.

Scalars are plain gmpy2 values: ``mpq`` for exact rationals, ``mpfr``/``mpc``
for high-precision reals and complex numbers.  Working precision is never
ambient: every float computation receives a :class:`PrecisionContext` and
enters it with ``with ctx.local():``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpc, mpfr, mpq, mpz

from .errors import CapacityUnavailable

Scalar = Union[mpq, mpfr, mpc]

_LOG2_10 = math.log2(10.0)


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision in decimal digits plus guard digits."""

    decimal_digits: int = 50
    guard_digits: int = 5

    def __post_init__(self):
        if self.decimal_digits < 16:
            raise ValueError("decimal_digits must be >= 16")
        if self.guard_digits < 0:
            raise ValueError("guard_digits must be >= 0")

    @property
    def effective_digits(self) -> int:
        return self.decimal_digits + self.guard_digits

    @property
    def bits(self) -> int:
        return int(math.ceil(self.effective_digits * _LOG2_10)) + 4

    def eps(self) -> mpfr:
        """Relative tolerance ``10**-decimal_digits`` at this precision."""
        with self.local():
            return mpfr(10) ** (-self.decimal_digits)

    def widened(self, extra_digits: int) -> "PrecisionContext":
        return PrecisionContext(self.decimal_digits + extra_digits, self.guard_digits)

    def local(self):
        """gmpy2 context manager running at this precision."""
        return gmpy2.context(precision=self.bits)

    def as_dict(self) -> dict:
        return {"decimal_digits": self.decimal_digits, "guard_digits": self.guard_digits}


DEFAULT_CONTEXT = PrecisionContext(50, 5)


def required_precision(N: int, noise_digits: int, capacity, guard_digits: int = 5) -> PrecisionContext:
    """Working precision for an order-``N`` Padé solve.

    The Hankel solve loses about ``2N log10(1/c)`` digits; on top of that the
    noise digits and 20 spare digits are provisioned.  ``capacity`` may be a
    number or any object with a ``capacity`` attribute (a conformal map).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    c = getattr(capacity, "capacity", capacity)
    try:
        cf = float(c)
    except (TypeError, ValueError):
        raise CapacityUnavailable(c) from None
    if not (0.0 < cf < 1.0):
        raise CapacityUnavailable(c)
    digits = 2 * N * math.log10(1.0 / cf) + max(int(noise_digits), 0) + 20
    return PrecisionContext(max(16, int(math.ceil(digits))), guard_digits)


def is_exact(x) -> bool:
    return isinstance(x, (int, mpz, mpq, Fraction))


def as_rational(x) -> mpq:
    """Exact rational from ints, Fractions, decimal/fraction strings or mpfr."""
    if isinstance(x, mpq):
        return x
    if isinstance(x, (int, mpz)):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        fr = Fraction(x.strip())
        return mpq(fr.numerator, fr.denominator)
    if isinstance(x, float):
        fr = Fraction(x)
        return mpq(fr.numerator, fr.denominator)
    if isinstance(x, type(mpfr(0))):
        return mpq(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def to_mpc(x) -> mpc:
    """Complex value at the current gmpy2 precision."""
    if isinstance(x, mpc):
        return mpc(x)
    if isinstance(x, complex):
        return mpc(x)
    return mpc(mpfr(x), 0)


def to_mpfr(x) -> mpfr:
    return mpfr(x)


def _decimal_exponent(q: mpq) -> int:
    """``e`` with ``10**e <= q < 10**(e+1)`` for a positive rational."""
    n, d = q.numerator, q.denominator
    e = gmpy2.num_digits(n, 10) - gmpy2.num_digits(d, 10)
    while True:
        if e >= 0:
            lo_ok = n >= d * mpz(10) ** e
            hi_ok = n < d * mpz(10) ** (e + 1)
        else:
            lo_ok = n * mpz(10) ** (-e) >= d
            hi_ok = n * mpz(10) ** (-e - 1) < d
        if not lo_ok:
            e -= 1
        elif not hi_ok:
            e += 1
        else:
            return e


def _round_half_even(q: mpq) -> mpz:
    n, d = q.numerator, q.denominator
    fl = n // d
    rem2 = 2 * (n - fl * d)
    if rem2 > d or (rem2 == d and fl % 2 == 1):
        fl += 1
    return fl


def truncate_digits(x, D: int):
    """Round to ``D`` significant decimal digits, ties to even.

    The rounded decimal is returned as an exact rational so that series with
    truncated coefficients stay on the exact Padé path.  Complex inputs are
    rounded componentwise.
    """
    if D < 1:
        raise ValueError("D must be >= 1")
    if isinstance(x, (mpc, complex)):
        return mpc(mpfr(truncate_digits(as_rational(mpfr(x.real)), D)),
                   mpfr(truncate_digits(as_rational(mpfr(x.imag)), D)))
    q = as_rational(x)
    if q == 0:
        return mpq(0)
    sign = -1 if q < 0 else 1
    a = abs(q)
    shift = D - 1 - _decimal_exponent(a)
    scale = mpq(mpz(10) ** shift) if shift >= 0 else mpq(1, mpz(10) ** (-shift))
    m = _round_half_even(a * scale)
    return sign * mpq(m) / scale


def log10_abs(x) -> float:
    """``log10|x|`` without overflow for arbitrarily large rationals."""
    if isinstance(x, mpq):
        if x == 0:
            return -math.inf
        n, d = abs(x.numerator), x.denominator
        return (math.log10(int(n >> max(0, n.bit_length() - 60))) + max(0, n.bit_length() - 60) * math.log10(2)
                - math.log10(int(d >> max(0, d.bit_length() - 60))) - max(0, d.bit_length() - 60) * math.log10(2))
    v = abs(x)
    if v == 0:
        return -math.inf
    return float(gmpy2.log10(mpfr(v)))
