"""Guaranteed rational enclosures for the few irrational quantities we need.

Everything else in this package is exact rational arithmetic.  The single
irrational primitive is the n-th root (geometric means of CDFs, the bounded
lower bound, the down-projection masses).  Roots are returned as `Enclosure`
intervals whose endpoints are exact rationals bracketing the true value, so
every downstream inequality check can carry an explicit error radius instead
of a silent float error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError

DEFAULT_TOL = Fraction(1, 10**12)


def as_tolerance(tol) -> Fraction:
    """Coerce a tolerance to an exact positive rational (floats accepted here)."""
    t = Fraction(tol)
    if t <= 0:
        raise PreconditionError(f"tolerance must be positive, got {tol!r}")
    return t


@dataclass(frozen=True)
class Enclosure:
    """A closed rational interval [lo, hi] certified to contain a real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not (isinstance(self.lo, Fraction) and isinstance(self.hi, Fraction)):
            raise TypeError("enclosure endpoints must be Fractions")
        if self.lo > self.hi:
            raise PreconditionError(f"empty enclosure: [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, x: Fraction) -> "Enclosure":
        return cls(x, x)

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def radius(self) -> Fraction:
        return (self.hi - self.lo) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(self.lo + other.lo, self.hi + other.hi)
        return Enclosure(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self):
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Enclosure) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def scaled(self, f: Fraction) -> "Enclosure":
        """Multiply by an exact rational (sign-aware)."""
        if f >= 0:
            return Enclosure(self.lo * f, self.hi * f)
        return Enclosure(self.hi * f, self.lo * f)

    def __float__(self) -> float:
        return float(self.midpoint)

    def __repr__(self):
        if self.is_exact:
            return f"Enclosure({self.lo})"
        return f"Enclosure({self.lo}, {self.hi})"


def int_nth_root(x: int, n: int) -> tuple[int, bool]:
    """Floor n-th root of a non-negative integer, with an exactness flag.

    Newton iteration on integers; exact for arbitrarily large inputs.
    """
    if x < 0:
        raise PreconditionError("int_nth_root requires a non-negative integer")
    if n < 1:
        raise PreconditionError("root order must be >= 1")
    if n == 1 or x in (0, 1):
        return x, True
    r = 1 << ((x.bit_length() + n - 1) // n)
    while True:
        r2 = ((n - 1) * r + x // r ** (n - 1)) // n
        if r2 >= r:
            break
        r = r2
    return r, r**n == x


def nth_root(x: Fraction, n: int, tol=DEFAULT_TOL) -> Enclosure:
    """Enclosure of x**(1/n) for x >= 0, of width <= tol.

    Perfect rational powers are detected (numerator and denominator both
    perfect n-th powers in lowest terms) and returned as exact, degenerate
    enclosures; otherwise the root is bracketed by bisection, so both
    endpoints satisfy lo**n <= x <= hi**n at every step.
    """
    if x < 0:
        raise PreconditionError(f"cannot take an n-th root of a negative value: {x}")
    if n < 1:
        raise PreconditionError("root order must be >= 1")
    if n == 1:
        return Enclosure.exact(x)
    rn, exact_n = int_nth_root(x.numerator, n)
    rd, exact_d = int_nth_root(x.denominator, n)
    if exact_n and exact_d:
        return Enclosure.exact(Fraction(rn, rd))
    tol = as_tolerance(tol)
    lo, hi = (x, Fraction(1)) if x < 1 else (Fraction(1), x)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        c = mid**n
        if c == x:
            return Enclosure.exact(mid)
        if c < x:
            lo = mid
        else:
            hi = mid
    return Enclosure(lo, hi)
