"""Index subgroups J(Lambda) = {t + sum_{l in Lambda} a_l t^(l+1)}.

An ``IndexSet`` only answers membership up to its horizon; every statement
made here is a statement at that horizon or at the working precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import HorizonError, MembershipError
from .fp import binom_int, check_prime, prime_power_exponent
from .series import GroupSeries, compose, group_pow, invert, support

FAMILIES = ("A", "B", "C", "D", "qN", "explicit", "full")


@dataclass(frozen=True)
class IndexSet:
    """A subset of N = {1, 2, ...} decidable up to ``horizon``.

    kinds: ``A`` (d N, param d), ``B`` (pN u pN-1), ``C`` (p^i N - 1, param
    i), ``D`` ({p^i - 1 : i >= 1}), ``qN`` (param q), ``explicit``
    (``elements``) and ``full``.
    """

    kind: str
    p: int
    horizon: int
    param: int | None = None
    elements: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        check_prime(self.p)
        if self.kind not in FAMILIES:
            raise ValueError(f"unknown index family {self.kind!r}")
        if self.kind in ("A", "C") and (self.param is None or self.param < 1):
            raise ValueError(f"family {self.kind} needs a positive parameter")
        if self.kind == "qN":
            if self.param is None:
                raise ValueError("family qN needs q")
            prime_power_exponent(self.param, self.p)
        if self.horizon < 1:
            raise ValueError("horizon must be positive")

    @classmethod
    def family_a(cls, d: int, p: int, horizon: int = 200):
        return cls("A", p, horizon, d)

    @classmethod
    def family_b(cls, p: int, horizon: int = 200):
        return cls("B", p, horizon)

    @classmethod
    def family_c(cls, i: int, p: int, horizon: int = 200):
        return cls("C", p, horizon, i)

    @classmethod
    def family_d(cls, p: int, horizon: int = 200):
        return cls("D", p, horizon)

    @classmethod
    def multiples(cls, q: int, p: int, horizon: int = 200):
        return cls("qN", p, horizon, q)

    @classmethod
    def explicit(cls, elements, p: int, horizon: int = 200):
        elements = frozenset(int(e) for e in elements)
        if any(e < 1 for e in elements):
            raise ValueError("index sets live in N = {1, 2, ...}")
        return cls("explicit", p, horizon, None, elements)

    @classmethod
    def full(cls, p: int, horizon: int = 200):
        return cls("full", p, horizon)

    @property
    def label(self) -> str:
        if self.kind in ("A", "C"):
            return f"{self.kind}({self.param})"
        if self.kind == "qN":
            return f"{self.param}N"
        if self.kind == "explicit":
            return "{" + ",".join(map(str, sorted(self.elements))) + "}"
        return self.kind

    def __contains__(self, lam: int) -> bool:
        return self.contains(lam)

    def contains(self, lam: int) -> bool:
        if lam > self.horizon:
            raise HorizonError(f"{lam} is beyond the horizon {self.horizon} of {self.label}")
        if lam < 1:
            return False
        p, kind = self.p, self.kind
        if kind == "A":
            return lam % self.param == 0
        if kind == "B":
            return lam % p == 0 or (lam + 1) % p == 0
        if kind == "C":
            return (lam + 1) % p**self.param == 0
        if kind == "D":
            m = lam + 1
            while m % p == 0:
                m //= p
            return m == 1
        if kind == "qN":
            return lam % self.param == 0
        if kind == "explicit":
            return lam in self.elements
        return True

    def members(self, upto: int | None = None) -> list[int]:
        upto = self.horizon if upto is None else upto
        return [lam for lam in range(1, upto + 1) if self.contains(lam)]

    def exponents(self, precision: int) -> list[int]:
        """Exponents lambda+1 <= precision that J(Lambda) may carry."""
        return [lam + 1 for lam in self.members(min(precision - 1, self.horizon))]


# ---------------------------------------------------------------------------
# the binomial criterion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriterionReport:
    index_set: IndexSet
    passed: bool
    horizon: int
    witnesses: tuple[tuple[int, int, int], ...]


@lru_cache(maxsize=4096)
def _live_k(lam: int, p: int) -> tuple[int, ...]:
    """k in [0, lam+1] with C(lam+1, k) nonzero mod p."""
    return tuple(k for k in range(lam + 2) if binom_int(lam + 1, k, p))


def klopsch_check(index_set: IndexSet, horizon: int | None = None, *, all_witnesses: bool = False) -> CriterionReport:
    """Scan lambda, mu in Lambda, 0 <= k <= lambda+1 with lambda + k mu <= horizon.

    A witness is a triple with C(lambda+1, k) != 0 mod p and lambda + k mu
    outside Lambda. The scan stops at the first witness unless
    ``all_witnesses`` is set.
    """
    horizon = index_set.horizon if horizon is None else horizon
    if horizon > index_set.horizon:
        raise HorizonError(f"horizon {horizon} exceeds the index set's horizon {index_set.horizon}")
    p = index_set.p
    inside = np.zeros(horizon + 1, dtype=bool)
    for lam in index_set.members(horizon):
        inside[lam] = True
    members = np.flatnonzero(inside).tolist()
    witnesses = []
    for lam in members:
        ks = _live_k(lam, p)
        for mu in members:
            if lam + mu > horizon:
                break
            for k in ks:
                target = lam + k * mu
                if target > horizon:
                    break
                if not inside[target]:
                    witnesses.append((lam, mu, k))
                    if not all_witnesses:
                        return CriterionReport(index_set, False, horizon, tuple(witnesses))
    return CriterionReport(index_set, not witnesses, horizon, tuple(witnesses))


def member(u: GroupSeries, index_set: IndexSet) -> bool:
    """True iff every exponent k >= 2 of u has k - 1 in Lambda."""
    if u.precision > index_set.horizon:
        raise HorizonError(f"precision {u.precision} exceeds the horizon {index_set.horizon}")
    return all(index_set.contains(k - 1) for k in support(u) if k >= 2)


# ---------------------------------------------------------------------------
# random elements
# ---------------------------------------------------------------------------


def _from_exponents(p: int, n: int, exps, rng: np.random.Generator, lead: int | None = None) -> GroupSeries:
    coeffs = np.zeros(n + 1, dtype=np.int64)
    coeffs[1] = 1
    exps = [k for k in exps if 2 <= k <= n]
    if exps:
        coeffs[exps] = rng.integers(0, p, len(exps))
    if lead is not None:
        coeffs[lead] = rng.integers(1, p)
    return GroupSeries(p, n, coeffs)


def random_element(index_set: IndexSet, precision: int, rng: np.random.Generator) -> GroupSeries:
    """Uniform coefficients on every exponent J(Lambda) allows up to the precision."""
    return _from_exponents(index_set.p, precision, index_set.exponents(precision), rng)


def random_t_element(p: int, q: int, level: int, precision: int, rng: np.random.Generator, exact: bool = True) -> GroupSeries:
    """Random element of T_level; with ``exact`` its T-depth is exactly ``level``."""
    exps = range(q * level + 1, precision + 1, q)
    return _from_exponents(p, precision, exps, rng, q * level + 1 if exact else None)


def random_s_element(p: int, level: int, precision: int, rng: np.random.Generator, exact: bool = True) -> GroupSeries:
    """Random element of S_level (exponents 0 or 1 mod p from the level's first exponent)."""
    from .series import s_level_exponent

    first = s_level_exponent(level, p)
    exps = [k for k in range(first, precision + 1) if k % p in (0, 1)]
    return _from_exponents(p, precision, exps, rng, first if exact else None)


# ---------------------------------------------------------------------------
# empirical closure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeViolation:
    trial: int
    operation: str
    result: GroupSeries


@dataclass(frozen=True)
class ProbeReport:
    index_set: IndexSet
    precision: int
    trials: int
    seed: int
    violations: tuple[ProbeViolation, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def witness_pair(index_set: IndexSet, witness: tuple[int, int, int], precision: int):
    """(u, v) = (t + t^(lambda+1), t + t^(mu+1)).

    u o v carries C(lambda+1, k) t^(lambda + k mu + 1), which leaves J(Lambda)
    whenever the triple is a criterion witness.
    """
    lam, mu, _ = witness
    p = index_set.p
    u = GroupSeries.from_terms(p, precision, {lam + 1: 1})
    v = GroupSeries.from_terms(p, precision, {mu + 1: 1})
    return u, v


def closure_probe(
    index_set: IndexSet,
    trials: int,
    precision: int,
    seed: int,
    witnesses: tuple[tuple[int, int, int], ...] = (),
) -> ProbeReport:
    """Check closure of J(Lambda) under o and inverse on random pairs.

    Trials are drawn from one seeded generator in order, so the report is a
    function of the arguments. Witness triples (if given) are probed after
    the random trials with ``witness_pair``.
    """
    rng = np.random.default_rng(seed)
    violations = []
    for trial in range(trials):
        u = random_element(index_set, precision, rng)
        v = random_element(index_set, precision, rng)
        uv = compose(u, v)
        if not member(uv, index_set):
            violations.append(ProbeViolation(trial, "compose", uv))
        ui = invert(u)
        if not member(ui, index_set):
            violations.append(ProbeViolation(trial, "invert", ui))
    for n, w in enumerate(witnesses):
        if w[0] + w[1] * w[2] + 1 > precision:
            continue
        u, v = witness_pair(index_set, w, precision)
        uv = compose(u, v)
        if not member(uv, index_set):
            violations.append(ProbeViolation(trials + n, f"witness{w}", uv))
    return ProbeReport(index_set, precision, trials, seed, tuple(violations))


# ---------------------------------------------------------------------------
# torsion
# ---------------------------------------------------------------------------

IDENTITY = "IDENTITY"
ORDER_P_MOD_PRECISION = "ORDER_P_MOD_PRECISION"
INFINITE_ORDER_CERTIFIED = "INFINITE_ORDER_CERTIFIED"
UNDETERMINED = "UNDETERMINED"


@dataclass(frozen=True)
class OrderVerdict:
    """``certificate`` lists leading exponents of u, u^p, u^(p^2), ... while visible."""

    element: GroupSeries
    verdict: str
    certificate: tuple[int, ...] = ()


def power_trace(u: GroupSeries, limit: int = 64) -> tuple[int, ...]:
    """Leading exponents of u^(p^m) for m = 0, 1, ... until the identity at precision."""
    out = []
    x = u
    while len(out) < limit:
        lead = x.leading_term()
        if lead is None:
            break
        out.append(lead[0])
        x = group_pow(x, u.p)
    return tuple(out)


def torsion_verdict(u: GroupSeries) -> OrderVerdict:
    p = u.p
    lead = u.leading_term()
    if lead is None:
        return OrderVerdict(u, IDENTITY)
    if lead[0] % p == 1:
        return OrderVerdict(u, INFINITE_ORDER_CERTIFIED, power_trace(u))
    up = group_pow(u, p)
    if up.is_identity():
        return OrderVerdict(u, ORDER_P_MOD_PRECISION, (lead[0],))
    return OrderVerdict(u, UNDETERMINED, power_trace(u))


def find_order_p_element(
    p: int, precision: int, lead: int | None = None, *, in_s: bool = False, limit: int = 1 << 20
) -> GroupSeries | None:
    """Depth-first search for u = t + t^lead + ... with u^p = t at the precision.

    Coefficients are fixed one exponent at a time and a branch is kept only
    while u^p agrees with t up to that exponent, which is decided by the
    coefficients chosen so far. With ``in_s`` only exponents that are 0 or 1
    mod p may carry coefficients. Returns None if nothing is found within
    ``limit`` nodes.
    """
    lead = p if lead is None else lead
    if not 2 <= lead <= precision:
        raise ValueError("leading exponent must lie in [2, precision]")
    if in_s and lead % p not in (0, 1):
        raise ValueError(f"t^{lead} is not an exponent of S")
    coeffs = np.zeros(precision + 1, dtype=np.int64)
    coeffs[1] = 1
    coeffs[lead] = 1
    budget = [limit]

    def ok(k: int) -> bool:
        trial = GroupSeries(p, k, coeffs[: k + 1])
        return group_pow(trial, p).is_identity()

    def dfs(k: int) -> bool:
        budget[0] -= 1
        if budget[0] < 0:
            return False
        if k > precision:
            return True
        choices = range(p) if not in_s or k % p in (0, 1) else (0,)
        for c in choices:
            coeffs[k] = c
            if ok(k) and dfs(k + 1):
                return True
        coeffs[k] = 0
        return False

    if not ok(lead) or not dfs(lead + 1):
        return None
    return GroupSeries(p, precision, coeffs)


def raise_on_nonmember(u: GroupSeries, index_set: IndexSet):
    if not member(u, index_set):
        raise MembershipError(f"series is not in J({index_set.label})")
