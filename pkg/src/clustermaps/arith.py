"""Exact scalar arithmetic.

Rationals are ``fractions.Fraction`` throughout the package.  ``PosReal``
represents a strictly positive real number as a finite product of primes
raised to rational exponents, so constants like 2**(1/3) or sqrt(9/2) are
exact and closed under multiplication, division and rational powers.
Addition is supported only when the result stays in this form, i.e. when
the ratio of the two summands is rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import mpmath


class NonPositiveInput(ValueError):
    """Raised when a positive quantity is required."""


class PrecisionExhausted(ArithmeticError):
    """Interval refinement hit the precision cap without deciding a sign."""


class IrrationalSum(ArithmeticError):
    """Sum of two PosReals left the prime-exponent representation."""


# Refinement cap for sign decisions.  A nonempty exponent vector has a
# nonzero logarithm (unique factorization), so refinement terminates in
# theory; the cap guards against pathological inputs.
MAX_SIGN_BITS = 16384

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class Precision:
    """Floating evaluation precision (bits) and comparison tolerance."""

    bits: int = 53
    tol: float = 1e-9

    def __post_init__(self):
        if self.bits < 53:
            raise ValueError("bits must be >= 53")
        if self.tol < 0:
            raise ValueError("tol must be >= 0")


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; deterministic below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Factor a positive integer by trial division.

    A Miller-Rabin early exit handles large prime cofactors; inputs here
    come from user-entered rationals, so no advanced factoring is needed.
    """
    if n < 1:
        raise NonPositiveInput(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 7
    steps = (4, 2, 4, 2, 4, 6, 2, 6)  # wheel mod 30
    i = 0
    while n > 1:
        if is_probable_prime(n):
            out[n] = out.get(n, 0) + 1
            break
        while d * d <= n and n % d:
            d += steps[i]
            i = (i + 1) % 8
        if d * d > n:
            out[n] = out.get(n, 0) + 1
            break
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
    return out


def _as_fraction(e) -> Fraction:
    if isinstance(e, Fraction):
        return e
    if isinstance(e, int):
        return Fraction(e)
    raise TypeError(f"exponent must be rational, got {type(e).__name__}")


class PosReal:
    """Exact positive real: a finite map prime -> rational exponent.

    The empty map is 1.  All instances are immutable; arithmetic returns
    new values.  Mixed operations with positive ints and Fractions promote
    the rational operand.
    """

    __slots__ = ("_exp",)

    def __init__(self, exponents: Mapping[int, Fraction] | None = None):
        exp = {}
        if exponents:
            for p, e in exponents.items():
                e = _as_fraction(e)
                if e == 0:
                    continue
                if p < 2 or not is_probable_prime(p):
                    raise ValueError(f"{p} is not prime")
                exp[p] = e
        object.__setattr__(self, "_exp", exp)

    # -- construction ----------------------------------------------------

    @classmethod
    def _make(cls, exp: dict[int, Fraction]) -> "PosReal":
        obj = object.__new__(cls)
        object.__setattr__(obj, "_exp", exp)
        return obj

    @classmethod
    def one(cls) -> "PosReal":
        return cls._make({})

    @classmethod
    def from_rational(cls, q) -> "PosReal":
        """Exact conversion of a positive rational (NonPositiveInput if q <= 0)."""
        q = Fraction(q)
        if q <= 0:
            raise NonPositiveInput(f"PosReal requires a positive value, got {q}")
        exp: dict[int, Fraction] = {}
        for p, k in factorize(q.numerator).items():
            exp[p] = Fraction(k)
        for p, k in factorize(q.denominator).items():
            exp[p] = exp.get(p, Fraction(0)) - k
            if exp[p] == 0:
                del exp[p]
        return cls._make(exp)

    @classmethod
    def _coerce(cls, value) -> "PosReal":
        if isinstance(value, PosReal):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.from_rational(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to PosReal")

    # -- inspection -------------------------------------------------------

    @property
    def exponents(self) -> dict[int, Fraction]:
        return dict(self._exp)

    def is_one(self) -> bool:
        return not self._exp

    def is_rational(self) -> bool:
        return all(e.denominator == 1 for e in self._exp.values())

    def to_fraction(self) -> Fraction:
        """Exact rational value; ValueError if any exponent is fractional."""
        if not self.is_rational():
            raise ValueError(f"{self!r} is irrational")
        num, den = 1, 1
        for p, e in self._exp.items():
            if e > 0:
                num *= p ** int(e)
            else:
                den *= p ** int(-e)
        return Fraction(num, den)

    # -- group operations ---------------------------------------------------

    def __mul__(self, other):
        try:
            other = PosReal._coerce(other)
        except TypeError:
            return NotImplemented
        exp = dict(self._exp)
        for p, e in other._exp.items():
            s = exp.get(p, Fraction(0)) + e
            if s == 0:
                exp.pop(p, None)
            else:
                exp[p] = s
        return PosReal._make(exp)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = PosReal._coerce(other)
        except TypeError:
            return NotImplemented
        return self * other ** -1

    def __rtruediv__(self, other):
        try:
            other = PosReal._coerce(other)
        except TypeError:
            return NotImplemented
        return other * self ** -1

    def __pow__(self, e):
        e = _as_fraction(e)
        if e == 0:
            return PosReal._make({})
        return PosReal._make({p: q * e for p, q in self._exp.items()})

    def __add__(self, other):
        # Partial: works iff other/self is rational, since then
        # self + other = self * (1 + other/self).
        try:
            other = PosReal._coerce(other)
        except TypeError:
            return NotImplemented
        ratio = other / self
        if not ratio.is_rational():
            raise IrrationalSum(
                "sum is not a product of primes with rational exponents"
            )
        return self * PosReal.from_rational(1 + ratio.to_fraction())

    __radd__ = __add__

    # -- comparisons --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if other <= 0:
                return False
            other = PosReal.from_rational(other)
        if not isinstance(other, PosReal):
            return NotImplemented
        return self._exp == other._exp

    def __hash__(self):
        return hash(frozenset(self._exp.items()))

    def cmp_one(self, max_bits: int = MAX_SIGN_BITS) -> int:
        """Sign of log(self): -1, 0 or +1.

        Equal to 1 iff the exponent map is empty; otherwise the sign of
        sum(e_p * log p) is decided by interval evaluation, doubling the
        precision until the interval excludes 0 (PrecisionExhausted past
        the cap, which no multi-prime vector can reach in theory).
        """
        if not self._exp:
            return 0
        bits = 64
        while True:
            lo, hi = self._log_interval(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if bits >= max_bits:
                raise PrecisionExhausted(
                    f"sign of log undecided at {bits} bits for {self!r}"
                )
            bits *= 2

    def compare(self, other) -> int:
        """Three-way exact comparison with a PosReal, Fraction or int."""
        other = PosReal._coerce(other)
        return (self / other).cmp_one()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    # -- evaluation -----------------------------------------------------------

    def log_iv(self):
        """Certified interval enclosure of log(self) at the current iv precision."""
        total = mpmath.iv.mpf(0)
        for p, e in self._exp.items():
            total += mpmath.iv.log(p) * mpmath.iv.mpf(e.numerator) / e.denominator
        return total

    def _log_interval(self, bits: int) -> tuple:
        """Endpoint pair of a certified enclosure of log(self)."""
        old = mpmath.iv.prec
        mpmath.iv.prec = bits
        try:
            total = self.log_iv()
            return total.a, total.b
        finally:
            mpmath.iv.prec = old

    def log_mpf(self, bits: int = 53):
        """log(self) as an mpf with roughly `bits` significant bits."""
        guard = 10 + max(
            (abs(e.numerator).bit_length() + e.denominator.bit_length()
             for e in self._exp.values()),
            default=0,
        )
        with mpmath.workprec(bits + guard):
            total = mpmath.mpf(0)
            for p, e in self._exp.items():
                total += mpmath.log(p) * e.numerator / e.denominator
            return +total

    def to_mpf(self, bits: int = 53):
        """Value as an mpf with relative error below 2**(1-bits)."""
        with mpmath.workprec(bits + 10):
            return mpmath.exp(self.log_mpf(bits + 10))

    def __float__(self):
        value = float(self.to_mpf(63))
        if value == 0.0 or math.isnan(value) or math.isinf(value):
            raise OverflowError(f"{self!r} out of float range")
        return value

    def __repr__(self):
        if not self._exp:
            return "PosReal(1)"
        parts = [
            f"{p}^({e})" if e.denominator != 1 else f"{p}^{e}"
            for p, e in sorted(self._exp.items())
        ]
        return "PosReal(%s)" % " * ".join(parts)


def as_posreal(value) -> PosReal:
    """Coerce a PosReal, positive Fraction, or positive int to PosReal."""
    return PosReal._coerce(value)


# Spec-level operation aliases -------------------------------------------------

def posreal_from_rational(q) -> PosReal:
    return PosReal.from_rational(q)


def posreal_pow(x: PosReal, e) -> PosReal:
    return x ** e


def posreal_cmp_one(x: PosReal) -> int:
    """-1, 0 or +1 for x < 1, x == 1, x > 1."""
    return x.cmp_one()


def posreal_to_float(x: PosReal, p: Precision = Precision()) -> float:
    """Closest double to x (evaluated at p.bits); OverflowError if out of range."""
    value = float(x.to_mpf(max(p.bits, 53)))
    if value == 0.0 or math.isnan(value) or math.isinf(value):
        raise OverflowError(f"{x!r} out of float range")
    return value
