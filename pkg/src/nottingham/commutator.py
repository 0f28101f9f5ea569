"""Commutators [v, u] = v o u o v^-1 o u^-1, computed two independent ways.

``commutator_direct`` composes the four factors. ``commutator_recurrence``
never inverts anything: writing [v, u] = t + sum a_k t^(k+1), the identity

    v o u - u o v = sum_k a_k (u o v)^(k+1)

is unitriangular in the a_k, so they are read off one at a time from the
difference of the two products.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import MembershipError
from .fp import FpScalar, multinomial_mod_p
from .series import (
    GroupSeries,
    compose,
    depth,
    group_pow,
    invert,
    solve_power_expansion,
    stride_of,
)


@dataclass(frozen=True)
class CommutatorResult:
    value: GroupSeries
    leading_exponent: int | None
    leading_coefficient: FpScalar
    method: str

    @classmethod
    def of(cls, value: GroupSeries, method: str) -> CommutatorResult:
        lead = value.leading_term()
        if lead is None:
            return cls(value, None, FpScalar(0, value.p), method)
        return cls(value, lead[0], FpScalar(lead[1], value.p), method)

    @property
    def is_identity(self) -> bool:
        """Identity at the working precision; nothing is claimed beyond it."""
        return self.leading_exponent is None


def commutator_direct(v: GroupSeries, u: GroupSeries) -> CommutatorResult:
    v._check(u)
    value = compose(compose(compose(v, u), invert(v)), invert(u))
    return CommutatorResult.of(value, "direct")


def commutator_recurrence(v: GroupSeries, u: GroupSeries) -> CommutatorResult:
    v._check(u)
    p, n = v.context
    w = compose(u, v)
    diff = (compose(v, u).coeffs - w.coeffs) % p
    nz = np.flatnonzero(diff)
    coeffs = np.zeros(n + 1, dtype=np.int64)
    if nz.size:
        low = int(nz[0])
        if low < 2:
            raise ArithmeticError("v o u - u o v must have valuation >= 2")
        # both factors lie in J(dN), so only exponents 1 mod d can appear
        d = gcd(stride_of(u.coeffs), stride_of(v.coeffs)) or n
        start = low + (-(low - 1)) % d
        coeffs = solve_power_expansion(diff, w.coeffs, p, n, start, d)
    coeffs[1] = 1
    return CommutatorResult.of(GroupSeries(p, n, coeffs), "recurrence")


def commutator(v: GroupSeries, u: GroupSeries) -> GroupSeries:
    """[v, u] as a series (recurrence method)."""
    return commutator_recurrence(v, u).value


# ---------------------------------------------------------------------------
# expansion coefficients f_{s,k}, g_{s,k}
# ---------------------------------------------------------------------------


def _partitions(excess: int, parts: list[int], start: int = 0):
    """Multisets from ``parts`` (distinct, descending) summing to ``excess``.

    Yields lists of (part, multiplicity).
    """
    if excess == 0:
        yield []
        return
    for idx in range(start, len(parts)):
        part = parts[idx]
        if part > excess:
            continue
        for mult in range(excess // part, 0, -1):
            for rest in _partitions(excess - mult * part, parts, idx + 1):
                yield [(part, mult)] + rest


def power_coefficient(x: GroupSeries, power: int, exponent: int) -> int:
    """Coefficient of t**exponent in the formal power x**power.

    Each product of ``power`` factors picks t from all but d of them and
    higher terms x_m from the rest; the number of labelled ways to do that
    is the multinomial count of maps onto the fibres (power - d, c_1, ...).
    """
    p = x.p
    excess = exponent - power
    if excess < 0:
        return 0
    if excess == 0:
        return 1
    higher = {k - 1: c for k, c in x.terms() if k >= 2}
    parts = sorted(higher, reverse=True)
    total = 0
    for choice in _partitions(excess, parts):
        used = sum(mult for _, mult in choice)
        if used > power:
            continue
        count = multinomial_mod_p([power - used] + [mult for _, mult in choice], p)
        if not count:
            continue
        term = count
        for part, mult in choice:
            term = term * pow(higher[part], mult, p) % p
        total = (total + term) % p
    return total


@dataclass(frozen=True)
class ExpansionCoefficient:
    s: int
    k: int
    value: FpScalar
    side: str


def _t_depth_at_least(x: GroupSeries, q: int, level: int, name: str):
    d = depth(x, "T", q)
    if not d.is_identity and d.value < level:
        raise MembershipError(f"{name} has T-depth {d.value} < {level}")


def expansion_coefficient(
    u: GroupSeries,
    v: GroupSeries,
    s: int,
    k: int,
    side: str,
    q: int,
    *,
    j: int | None = None,
    e: int | None = None,
) -> ExpansionCoefficient:
    """f_{s,k} or g_{s,k} for u in T_{j+e}, v in T_j.

    f_{s,k} is the t^(q(s+e)+1) coefficient of v^(q(k+e)+1) and g_{s,k} the
    same coefficient of u^(qk+1). ``j`` and ``e`` default to the T-depths of
    v and u.
    """
    if side not in ("f", "g"):
        raise ValueError("side must be 'f' or 'g'")
    if j is None:
        dv = depth(v, "T", q)
        if dv.is_identity:
            raise ValueError("j cannot be inferred from the identity; pass j=")
        j = dv.value
    if e is None:
        du = depth(u, "T", q)
        if du.is_identity:
            raise ValueError("e cannot be inferred from the identity; pass e=")
        e = du.value - j
    if j < 1 or e < 0:
        raise ValueError(f"need j >= 1 and e >= 0, got j={j}, e={e}")
    if k < j or s < k:
        raise ValueError(f"need j <= k <= s, got j={j}, k={k}, s={s}")
    _t_depth_at_least(v, q, j, "v")
    _t_depth_at_least(u, q, j + e, "u")
    target = q * (s + e) + 1
    if side == "f":
        value = power_coefficient(v, q * (k + e) + 1, target)
    else:
        value = power_coefficient(u, q * k + 1, target)
    return ExpansionCoefficient(s, k, FpScalar(value, u.p), side)


# ---------------------------------------------------------------------------
# leading-term cancellation
# ---------------------------------------------------------------------------


def cancel_multiplier(a: GroupSeries, b: GroupSeries) -> int:
    """m in [1, p-1] with lead(a) + m * lead(b) = 0, for a, b of equal J-depth."""
    la, lb = a.leading_term(), b.leading_term()
    if la is None or lb is None:
        raise ValueError("cancel_leading needs two non-identity elements")
    if la[0] != lb[0]:
        raise ValueError(f"depths differ: t^{la[0]} vs t^{lb[0]}")
    p = a.p
    return (-la[1] * pow(lb[1], -1, p)) % p


def cancel_leading(a: GroupSeries, b: GroupSeries) -> GroupSeries:
    """a o b^m with m chosen so the common leading terms cancel."""
    m = cancel_multiplier(a, b)
    out = compose(a, group_pow(b, m))
    lead = out.leading_term()
    assert lead is None or lead[0] > a.leading_term()[0]
    return out
