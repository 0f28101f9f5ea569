"""Truncated power series over F_p and the substitution group J.

A series is a dense int64 vector ``c`` of length ``N + 1`` with ``c[k]`` the
coefficient of ``t**k``; ``c[0]`` is always zero. Every value is exact
modulo ``t**(N + 1)`` and carries its precision ``N``; mixing precisions is
an error, never a silent coercion.

Multiplication packs coefficient vectors into Python integers (Kronecker
substitution) and lets CPython's big-integer product do the convolution.
Slot widths are chosen so no slot can overflow, so the result is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd, isqrt
from typing import Iterable, Mapping

import numpy as np

from .errors import CompatibilityError, MembershipError, PrecisionError
from .fp import FpScalar, check_prime, prime_power_exponent

# ---------------------------------------------------------------------------
# raw kernels on coefficient vectors
# ---------------------------------------------------------------------------

_SLOTS = ((16, np.uint16), (32, np.uint32), (64, np.uint64))


def _slot(bound: int):
    for bits, dtype in _SLOTS:
        if bound < (1 << bits):
            return dtype
    raise OverflowError("coefficient bound exceeds 64-bit slots")


def _nonzero_range(a: np.ndarray) -> tuple[int, int]:
    nz = np.flatnonzero(a)
    if nz.size == 0:
        return 0, 0
    return int(nz[0]), int(nz[-1]) + 1


def mul_trunc(a: np.ndarray, b: np.ndarray, p: int, n: int) -> np.ndarray:
    """Coefficients 0..n of a*b mod p. Inputs are reduced vectors indexed by exponent."""
    out = np.zeros(n + 1, dtype=np.int64)
    a0, a1 = _nonzero_range(a[: n + 1])
    if a1 == 0:
        return out
    b0, b1 = _nonzero_range(b[: n + 1 - a0])
    if b1 == 0 or a0 + b0 > n:
        return out
    room = n - a0 - b0
    a = a[a0 : min(a1, a0 + room + 1)]
    b = b[b0 : min(b1, b0 + room + 1)]
    dtype = _slot(min(len(a), len(b)) * (p - 1) ** 2)
    x = int.from_bytes(a.astype(dtype).tobytes(), "little")
    y = int.from_bytes(b.astype(dtype).tobytes(), "little")
    width = np.dtype(dtype).itemsize
    slots = len(a) + len(b) - 1
    prod = np.frombuffer((x * y).to_bytes(slots * width, "little"), dtype=dtype)
    keep = min(slots, room + 1)
    out[a0 + b0 : a0 + b0 + keep] = prod[:keep].astype(np.int64) % p
    return out


def pow_trunc(a: np.ndarray, e: int, p: int, n: int) -> np.ndarray:
    """a**e truncated at t**n by binary exponentiation (e >= 1)."""
    result = None
    base = a
    while True:
        if e & 1:
            result = base.copy() if result is None else mul_trunc(result, base, p, n)
        e >>= 1
        if not e:
            return result
        base = mul_trunc(base, base, p, n)


def stride_of(c: np.ndarray) -> int:
    """Largest d with every nonzero exponent k >= 1 satisfying k = 1 (mod d).

    Returns 0 when the only possible nonzero exponent is 1, meaning any
    stride works.
    """
    nz = np.flatnonzero(c)
    return reduce(gcd, (int(k) - 1 for k in nz), 0)


def compose_arrays(u: np.ndarray, v: np.ndarray, p: int, n: int) -> np.ndarray:
    """u(v(t)) mod t**(n+1) for u, v with zero constant term.

    Writes u = t * U(t**d) with d the stride of u and evaluates U at v**d by
    Horner's rule in baby-step/giant-step form: a table of y**0..y**m feeds
    one matrix product that forms every block polynomial, then Horner runs
    over the blocks with giant step y**m.
    """
    d = stride_of(u) or n
    coeffs = u[1::d]
    last = int(np.flatnonzero(coeffs)[-1]) + 1 if coeffs.any() else 0
    if last == 0:
        return np.zeros(n + 1, dtype=np.int64)
    coeffs = coeffs[:last]
    # U(y) is only needed mod t**n because the result is v * U(y), val(v) >= 1
    m = max(1, isqrt(last - 1) + 1) if last > 1 else 1
    one = np.zeros(n, dtype=np.int64)
    one[0] = 1
    if last == 1:
        inner = one * coeffs[0]
    else:
        y = pow_trunc(v[:n], d, p, n - 1)
        baby = [one, y]
        for _ in range(2, m + 1):
            baby.append(mul_trunc(baby[-1], y, p, n - 1))
        nblocks = -(-last // m)
        padded = np.zeros(nblocks * m, dtype=np.int64)
        padded[:last] = coeffs
        blocks = (padded.reshape(nblocks, m) @ np.stack(baby[:m])) % p
        giant = baby[m]
        inner = blocks[-1]
        for b in range(nblocks - 2, -1, -1):
            inner = mul_trunc(inner, giant, p, n - 1)
            inner = (inner + blocks[b]) % p
    full = np.zeros(n + 1, dtype=np.int64)
    full[:n] = inner
    return mul_trunc(v, full, p, n)


def power_table(base: np.ndarray, p: int, n: int, start: int, stride: int) -> np.ndarray:
    """Rows base**(start + stride*l) for l = 0, 1, ... while the exponent is <= n.

    Each row is obtained from the previous by one multiplication with
    base**stride, so the table costs one product per row.
    """
    if start > n:
        return np.zeros((0, n + 1), dtype=np.int64)
    count = 1 if not stride else (n - start) // stride + 1
    table = np.zeros((count, n + 1), dtype=np.int64)
    table[0] = pow_trunc(base, start, p, n)
    if count == 1:
        return table
    # row l has valuation start + stride*l (base has valuation 1), so work on
    # the tails past the valuation and keep the step factor packed
    step = pow_trunc(base, stride, p, n)
    dtype = _slot((n + 1) * (p - 1) ** 2)
    width = np.dtype(dtype).itemsize
    packed_step = int.from_bytes(step[stride:].astype(dtype).tobytes(), "little")
    e = start
    for l in range(1, count):
        nxt = e + stride
        keep = n - nxt + 1
        mask = (1 << (8 * width * keep)) - 1
        x = int.from_bytes(table[l - 1, e : e + keep].astype(dtype).tobytes(), "little")
        prod = (x * (packed_step & mask)) & mask
        tail = np.frombuffer(prod.to_bytes(keep * width, "little"), dtype=dtype)
        table[l, nxt:] = tail.astype(np.int64) % p
        e = nxt
    return table


def solve_power_expansion(
    target: np.ndarray, base: np.ndarray, p: int, n: int, start: int, stride: int
) -> np.ndarray:
    """Coefficients c with target = sum_m c[m] * base**m, m in {start, start+stride, ...}.

    ``base`` must have valuation 1 and unit t-coefficient, so the system is
    unitriangular and is solved one exponent at a time. The residual is
    checked at every exponent, so a wrong stride raises rather than passing
    silently.
    """
    out = np.zeros(n + 1, dtype=np.int64)
    if start > n:
        if target.any():
            raise ArithmeticError("target has terms below the first admissible power")
        return out
    table = power_table(base, p, n, start, stride)
    exps = start + (stride or 1) * np.arange(len(table))
    tri = table[:, exps]
    c = np.zeros(len(table), dtype=np.int64)
    for l, e in enumerate(exps):
        c[l] = (target[e] - c[:l] @ tri[:l, l]) % p
    residual = (c @ table - target) % p
    if residual.any():
        raise ArithmeticError(
            f"power expansion residual at exponent {int(np.flatnonzero(residual)[0])}"
        )
    out[exps] = c
    return out


# ---------------------------------------------------------------------------
# value types
# ---------------------------------------------------------------------------


def _as_vector(coeffs, p: int, n: int) -> np.ndarray:
    arr = np.asarray(coeffs, dtype=np.int64)
    if arr.shape != (n + 1,):
        raise ValueError(f"expected {n + 1} coefficients, got shape {arr.shape}")
    arr = arr % p
    if arr[0]:
        raise ValueError("constant term must be zero")
    arr.setflags(write=False)
    return arr


class FormalSeries:
    """sum_{k=1}^{N} c_k t^k over F_p, exact modulo t^(N+1)."""

    __slots__ = ("p", "precision", "coeffs")

    def __init__(self, p: int, precision: int, coeffs):
        check_prime(p)
        if precision < 1:
            raise ValueError("precision must be positive")
        self.p = p
        self.precision = precision
        self.coeffs = _as_vector(coeffs, p, precision)
        self._validate()

    def _validate(self):
        pass

    # construction -------------------------------------------------------

    @classmethod
    def from_terms(cls, p: int, precision: int, terms: Mapping[int, int] | Iterable[tuple[int, int]]):
        """Build from exponent -> coefficient pairs; exponents above precision are dropped."""
        c = np.zeros(precision + 1, dtype=np.int64)
        items = terms.items() if isinstance(terms, Mapping) else terms
        for k, a in items:
            if k < 1:
                raise ValueError(f"exponent {k} < 1")
            if k <= precision:
                c[k] = (c[k] + a) % p
        return cls(p, precision, c)

    @classmethod
    def zero(cls, p: int, precision: int):
        return FormalSeries(p, precision, np.zeros(precision + 1, dtype=np.int64))

    def _new(self, coeffs) -> FormalSeries:
        return FormalSeries(self.p, self.precision, coeffs)

    # access -------------------------------------------------------------

    @property
    def context(self) -> tuple[int, int]:
        return self.p, self.precision

    def __getitem__(self, k: int) -> int:
        if k < 0:
            raise IndexError(k)
        return int(self.coeffs[k]) if k <= self.precision else 0

    def terms(self) -> list[tuple[int, int]]:
        """Nonzero (exponent, coefficient) pairs in ascending order."""
        return [(int(k), int(self.coeffs[k])) for k in np.flatnonzero(self.coeffs)]

    def valuation(self) -> int | None:
        nz = np.flatnonzero(self.coeffs)
        return int(nz[0]) if nz.size else None

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def truncate(self, precision: int) -> FormalSeries:
        if precision > self.precision:
            raise PrecisionError(f"cannot raise precision {self.precision} to {precision}")
        return type(self)(self.p, precision, self.coeffs[: precision + 1])

    def as_formal(self) -> FormalSeries:
        return FormalSeries(self.p, self.precision, self.coeffs)

    # ring operations ----------------------------------------------------

    def _check(self, other: FormalSeries):
        if not isinstance(other, FormalSeries):
            raise TypeError(f"expected a series, got {type(other).__name__}")
        if other.context != self.context:
            raise CompatibilityError(f"series contexts differ: (p, N) = {self.context} vs {other.context}")

    def __add__(self, other):
        self._check(other)
        return FormalSeries(self.p, self.precision, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return FormalSeries(self.p, self.precision, self.coeffs - other.coeffs)

    def __neg__(self):
        return FormalSeries(self.p, self.precision, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, FpScalar)):
            return FormalSeries(self.p, self.precision, self.coeffs * int(other))
        self._check(other)
        return FormalSeries(self.p, self.precision, mul_trunc(self.coeffs, other.coeffs, self.p, self.precision))

    def __rmul__(self, other):
        if isinstance(other, (int, FpScalar)):
            return self * other
        return NotImplemented

    def __call__(self, inner: FormalSeries) -> FormalSeries:
        """Substitution self(inner(t))."""
        return compose(self, inner)

    # comparison ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.context == other.context and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.precision, self.coeffs.tobytes()))

    def __repr__(self):
        from .notation import print_series

        return f"{type(self).__name__}({print_series(self)!r}, p={self.p}, N={self.precision})"


class GroupSeries(FormalSeries):
    """An element t + sum_{k>=2} a_k t^k of the Nottingham group, modulo t^(N+1)."""

    __slots__ = ()

    def _validate(self):
        if self.coeffs[1] != 1:
            raise MembershipError("group elements need t-coefficient 1")

    @classmethod
    def identity(cls, p: int, precision: int) -> GroupSeries:
        c = np.zeros(precision + 1, dtype=np.int64)
        c[1] = 1
        return cls(p, precision, c)

    @classmethod
    def from_terms(cls, p: int, precision: int, terms):
        """Build t + sum of the given higher terms; the t-coefficient is implicit."""
        items = dict(terms.items() if isinstance(terms, Mapping) else terms)
        if 1 in items:
            if items.pop(1) % p != 1:
                raise MembershipError("group elements need t-coefficient 1")
        items[1] = 1
        return super().from_terms(p, precision, items)

    def is_identity(self) -> bool:
        return not self.coeffs[2:].any()

    def leading_term(self) -> tuple[int, int] | None:
        """(exponent, coefficient) of the first term above t, or None for the identity."""
        nz = np.flatnonzero(self.coeffs[2:])
        if nz.size == 0:
            return None
        k = int(nz[0]) + 2
        return k, int(self.coeffs[k])


def _ensure_group(s: FormalSeries) -> GroupSeries:
    if isinstance(s, GroupSeries):
        return s
    return GroupSeries(s.p, s.precision, s.coeffs)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def add(a: FormalSeries, b: FormalSeries) -> FormalSeries:
    return a + b


def mul(a: FormalSeries, b: FormalSeries) -> FormalSeries:
    return a * b


def pow_formal(a: FormalSeries, e: int) -> FormalSeries:
    """e-fold formal product; e = 0 is rejected since 1 has a constant term."""
    if e < 1:
        raise ValueError("exponent must be >= 1")
    return FormalSeries(a.p, a.precision, pow_trunc(a.coeffs, e, a.p, a.precision))


def compose(u: FormalSeries, v: FormalSeries) -> FormalSeries:
    """u(v(t)); a GroupSeries when both arguments are."""
    u._check(v)
    c = compose_arrays(u.coeffs, v.coeffs, u.p, u.precision)
    cls = GroupSeries if isinstance(u, GroupSeries) and isinstance(v, GroupSeries) else FormalSeries
    return cls(u.p, u.precision, c)


def invert(u: GroupSeries) -> GroupSeries:
    """Compositional inverse, solved coefficient by coefficient from w(u(t)) = t.

    The inverse stays inside the subgroup of series with exponents 1 mod d
    (d the stride of u), so only those coefficients are solved for.
    """
    u = _ensure_group(u)
    p, n = u.context
    target = np.zeros(n + 1, dtype=np.int64)
    target[1] = 1
    d = stride_of(u.coeffs)
    w = solve_power_expansion(target, u.coeffs, p, n, 1, d or n)
    return GroupSeries(p, n, w)


def group_pow(u: GroupSeries, e: int) -> GroupSeries:
    """e-fold composition u o u o ... o u by square-and-multiply."""
    if e < 1:
        raise ValueError("exponent must be >= 1")
    u = _ensure_group(u)
    result = None
    base = u
    while True:
        if e & 1:
            result = base if result is None else compose(result, base)
        e >>= 1
        if not e:
            return result
        base = compose(base, base)


def support(u: FormalSeries) -> tuple[int, ...]:
    """Exponents with nonzero coefficient, ascending, up to the precision."""
    return tuple(int(k) for k in np.flatnonzero(u.coeffs))


# ---------------------------------------------------------------------------
# filtrations
# ---------------------------------------------------------------------------

FILTRATIONS = ("J", "T", "S")


@dataclass(frozen=True)
class Depth:
    """Filtration level of an element; ``value is None`` means identity at precision."""

    kind: str
    value: int | None
    q: int | None = None

    @property
    def is_identity(self) -> bool:
        return self.value is None

    def __str__(self):
        v = "IDENTITY" if self.value is None else str(self.value)
        return f"{self.kind}:{v}" + (f" (q={self.q})" if self.q else "")


def s_level(exponent: int, p: int) -> int:
    """Level of the S-filtration whose first term is t**exponent."""
    if exponent % p == 0:
        return 2 * (exponent // p) - 1
    if exponent % p == 1 and exponent > 1:
        return 2 * ((exponent - 1) // p)
    raise MembershipError(f"exponent {exponent} is not 0 or 1 mod {p}")


def s_level_exponent(level: int, p: int) -> int:
    """First exponent of S_level: n*p for level 2n-1, n*p+1 for level 2n."""
    if level < 1:
        raise ValueError("S levels start at 1")
    n, r = divmod(level + 1, 2)
    return n * p if r == 0 else (level // 2) * p + 1


def depth(u: GroupSeries, kind: str = "J", q: int | None = None) -> Depth:
    """Filtration index of u in J, T (parameter q) or S."""
    if kind not in FILTRATIONS:
        raise ValueError(f"unknown filtration {kind!r}")
    p = u.p
    exps = [k for k in support(u) if k >= 2]
    if kind == "J":
        return Depth("J", exps[0] - 1 if exps else None)
    if kind == "T":
        if q is None:
            raise ValueError("T depth needs q")
        prime_power_exponent(q, p)
        bad = [k for k in exps if (k - 1) % q]
        if bad:
            raise MembershipError(f"exponent {bad[0]} is not 1 mod q={q}")
        return Depth("T", (exps[0] - 1) // q if exps else None, q)
    bad = [k for k in exps if k % p not in (0, 1)]
    if bad:
        raise MembershipError(f"exponent {bad[0]} is not 0 or 1 mod p={p}")
    return Depth("S", s_level(exps[0], p) if exps else None)


def require_precision(n: int, exponent: int, what: str = "exponent"):
    if exponent > n:
        raise PrecisionError(f"{what} t^{exponent} is beyond precision N={n}")
