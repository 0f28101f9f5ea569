"""Exact arithmetic in F_p and binomial coefficients modulo p.

Binomials are evaluated digitwise (Lucas), so arguments may be far larger
than any factorial table; only the base-p digits, which are below ``p``, ever
reach a table lookup.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import ModulusError

MAX_PRIME = 1 << 16


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    """Return ``p`` if it is a supported prime, else raise ``ModulusError``."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise ModulusError(f"modulus must be an int, got {p!r}")
    if p >= MAX_PRIME:
        raise ModulusError(f"modulus {p} outside supported range p < 2^16")
    if not is_prime(p):
        raise ModulusError(f"modulus {p} is not prime")
    return p


def prime_power_exponent(q: int, p: int) -> int:
    """Return r with q == p**r and r >= 1, else raise ``ValueError``."""
    r, m = 0, q
    while m > 1 and m % p == 0:
        m //= p
        r += 1
    if m != 1 or r == 0:
        raise ValueError(f"q={q} is not a positive power of p={p}")
    return r


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a positive integer."""
    if n <= 0:
        raise ValueError("valuation is defined for positive integers")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True, eq=False)
class FpScalar:
    """A residue modulo the prime ``p``; compares equal to ints of the same class."""

    value: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise ModulusError(f"cannot mix F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpScalar(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpScalar(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpScalar(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpScalar(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar(-self.value, self.p)

    def inverse(self) -> FpScalar:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FpScalar(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * FpScalar(o, self.p).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FpScalar(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpScalar):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return (other - self.value) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


@dataclass(frozen=True)
class DigitExpansion:
    """Base-p digits of a non-negative integer, least significant first."""

    digits: tuple[int, ...]
    base: int

    @classmethod
    def of(cls, a: int, base: int) -> DigitExpansion:
        if a < 0:
            raise ValueError("digit expansion needs a non-negative integer")
        out = []
        while a:
            a, r = divmod(a, base)
            out.append(r)
        return cls(tuple(out), base)

    @property
    def value(self) -> int:
        return sum(d * self.base**i for i, d in enumerate(self.digits))

    def digit(self, i: int) -> int:
        return self.digits[i] if i < len(self.digits) else 0


@lru_cache(maxsize=64)
def _factorial_table(p: int) -> tuple[list[int], list[int]]:
    fact = [1] * p
    for k in range(1, p):
        fact[k] = fact[k - 1] * k % p
    inv = [pow(f, -1, p) for f in fact]
    return fact, inv


def _small_binom(a: int, b: int, p: int) -> int:
    if b < 0 or b > a:
        return 0
    fact, inv = _factorial_table(p)
    return fact[a] * inv[b] % p * inv[a - b] % p


def binom_int(a: int, b: int, p: int) -> int:
    """C(a, b) mod p as a plain int in [0, p)."""
    if a < 0 or b < 0:
        raise ValueError("binomial arguments must be non-negative")
    if b > a:
        return 0
    result = 1
    while b:
        a, ai = divmod(a, p)
        b, bi = divmod(b, p)
        if bi > ai:
            return 0
        result = result * _small_binom(ai, bi, p) % p
    return result


def binom_mod_p(a: int, b: int, p: int) -> FpScalar:
    """C(a, b) mod p by Lucas' theorem; C(a, b) = 0 when b > a."""
    check_prime(p)
    return FpScalar(binom_int(a, b, p), p)


def lucas_dominates(a: int, b: int, p: int) -> bool:
    """True iff every base-p digit of ``a`` is at least the matching digit of ``b``."""
    da, db = DigitExpansion.of(a, p), DigitExpansion.of(b, p)
    return all(da.digit(i) >= db.digit(i) for i in range(len(db.digits)))


def count_labelled_partitions(m: int, parts: Sequence[int], p: int) -> FpScalar:
    """Number of maps {1..m} -> {1..n} with fibre sizes ``parts``, reduced mod p."""
    check_prime(p)
    if not parts:
        raise ValueError("need at least one part")
    if any(l <= 0 for l in parts):
        raise ValueError(f"parts must be positive, got {list(parts)}")
    if sum(parts) != m:
        raise ValueError(f"parts {list(parts)} do not sum to m={m}")
    result, remaining = 1, m
    for l in parts:
        result = result * binom_int(remaining, l, p) % p
        remaining -= l
    return FpScalar(result, p)


def multinomial_mod_p(counts: Sequence[int], p: int) -> int:
    """(sum counts)! / prod(counts!) mod p, the unordered form of the count above."""
    counts = [c for c in counts if c]
    if not counts:
        return 1
    return count_labelled_partitions(sum(counts), counts, p).value
