"""Exhaustive check of the integer identity behind the sparse-commutator shape.

Setup: q = p^r, 1 <= s <= r, i > j >= q^2 with p not dividing i. A term is a
tuple (i_m, j_m, v, w, x, y, z) contributing

    v i_m + w q j_m + x j_m + y q i_m p^n(j_m) + z,

where p^n(j_m) is the exact power of p in j_m. An instance is a set of terms
with distinct (i_m, j_m) whose contributions add up to I + qj for some I
with p^(s-1) i < I <= p^s i and p^s | I. The claim under test is I = p^s i,
together with a description of which instances reach it.

Term conditions:

* i_m >= i and j_m >= j - q;
* p does not divide i_m;
* j_m >= j if i_m = i, and q j_m + p^s i_m > qj + p^s i if i_m > i;
* if i_m + q j_m < j + qi then i_m = a i + b q with a >= 1, b >= 0;
* v > 0 iff w > 0, x > 0 iff y > 0, z > 0 only if x > 0;
* the divisibility rule on z: with ``z_rule="literal"`` q | z is required
  only when z >= qj, with ``z_rule="strict"`` it is required always.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .fp import prime_power_exponent, valuation


@dataclass(frozen=True)
class SumParams:
    p: int
    q: int
    s: int
    i: int
    j: int
    z_rule: str = "literal"

    def __post_init__(self):
        r = prime_power_exponent(self.q, self.p)
        if not 1 <= self.s <= r:
            raise ValueError(f"need 1 <= s <= r = {r}")
        if not self.i > self.j >= self.q**2:
            raise ValueError(f"need i > j >= q^2, got i={self.i}, j={self.j}")
        if self.i % self.p == 0:
            raise ValueError("i must be coprime to p")
        if self.z_rule not in ("literal", "strict"):
            raise ValueError("z_rule is 'literal' or 'strict'")

    @property
    def ps(self) -> int:
        return self.p**self.s

    @property
    def max_total(self) -> int:
        return self.ps * self.i + self.q * self.j

    def targets(self) -> dict[int, int]:
        """Map total I + qj -> I over the allowed window of I."""
        lo = self.p ** (self.s - 1) * self.i
        return {I + self.q * self.j: I for I in range(self.ps, self.ps * self.i + 1, self.ps) if I > lo}

    def label(self) -> str:
        return f"p={self.p} q={self.q} s={self.s} i={self.i} j={self.j} z_rule={self.z_rule}"


@dataclass(frozen=True, order=True)
class Term:
    i_m: int
    j_m: int
    v: int = 0
    w: int = 0
    x: int = 0
    y: int = 0
    z: int = 0

    def contribution(self, params: SumParams) -> int:
        p, q = params.p, params.q
        return (
            self.v * self.i_m
            + self.w * q * self.j_m
            + self.x * self.j_m
            + self.y * q * self.i_m * p ** valuation(self.j_m, p)
            + self.z
        )

    @property
    def pair(self) -> tuple[int, int]:
        return self.i_m, self.j_m


@dataclass(frozen=True)
class Instance:
    terms: tuple[Term, ...]
    I: int

    def __str__(self):
        parts = ", ".join(
            f"(i={t.i_m},j={t.j_m},v={t.v},w={t.w},x={t.x},y={t.y},z={t.z})" for t in self.terms
        )
        return f"I={self.I}: {parts}"


def pair_admissible(i_m: int, j_m: int, params: SumParams) -> bool:
    p, q, i, j, ps = params.p, params.q, params.i, params.j, params.ps
    if i_m < i or j_m < j - q or j_m < 1:
        return False
    if i_m % p == 0:
        return False
    if i_m == i and j_m < j:
        return False
    if i_m > i and not q * j_m + ps * i_m > q * j + ps * i:
        return False
    if i_m + q * j_m < j + q * i:
        if not any((i_m - a * i) % q == 0 for a in range(1, i_m // i + 1)):
            return False
    return True


def counts_admissible(t: Term, params: SumParams) -> bool:
    q, j = params.q, params.j
    if min(t.v, t.w, t.x, t.y, t.z) < 0:
        return False
    if (t.v > 0) != (t.w > 0) or (t.x > 0) != (t.y > 0):
        return False
    if t.z > 0 and t.x == 0:
        return False
    if t.z % q and (params.z_rule == "strict" or t.z >= q * j):
        return False
    return t.v > 0 or t.x > 0


def term_admissible(t: Term, params: SumParams) -> bool:
    return pair_admissible(t.i_m, t.j_m, params) and counts_admissible(t, params)


def instance_admissible(terms, params: SumParams) -> int | None:
    """The I reached by an admissible instance, else None."""
    if not terms or len({t.pair for t in terms}) != len(terms):
        return None
    if not all(term_admissible(t, params) for t in terms):
        return None
    return params.targets().get(sum(t.contribution(params) for t in terms))


# ---------------------------------------------------------------------------
# enumerators
# ---------------------------------------------------------------------------


class CapExceeded(RuntimeError):
    pass


def admissible_terms(params: SumParams) -> list[tuple[int, Term]]:
    """All admissible terms with contribution <= max_total, as (contribution, term)."""
    p, q, i, j = params.p, params.q, params.i, params.j
    top = params.max_total
    out = []
    for j_m in range(max(1, j - q), top + 1):
        scale = q * p ** valuation(j_m, p)
        for i_m in range(i, top + 1):
            if i_m + q * j_m > top and j_m + scale * i_m > top:
                continue
            if not pair_admissible(i_m, j_m, params):
                continue
            v_parts = [(0, 0, 0)] + [
                (v, w, v * i_m + w * q * j_m)
                for v in range(1, top // i_m + 1)
                for w in range(1, top // (q * j_m) + 1)
                if v * i_m + w * q * j_m <= top
            ]
            for v, w, cv in v_parts:
                if v:
                    out.append((cv, Term(i_m, j_m, v, w)))
                rest = top - cv
                for x in range(1, rest // j_m + 1):
                    for y in range(1, (rest - x * j_m) // (scale * i_m) + 1):
                        base = cv + x * j_m + y * scale * i_m
                        for z in range(0, top - base + 1):
                            t = Term(i_m, j_m, v, w, x, y, z)
                            if counts_admissible(t, params):
                                out.append((base + z, t))
    out.sort()
    return out


def enumerate_instances(params: SumParams, cap: int = 10**7) -> list[Instance]:
    """Every admissible instance, by depth-first search over contribution-sorted terms."""
    terms = admissible_terms(params)
    targets = params.targets()
    top = params.max_total
    found: list[Instance] = []

    def walk(start: int, total: int, chosen: list[Term], pairs: set):
        if total in targets:
            found.append(Instance(tuple(sorted(chosen)), targets[total]))
            if len(found) > cap:
                raise CapExceeded(f"more than {cap} instances")
        for idx in range(start, len(terms)):
            c, t = terms[idx]
            if total + c > top:
                break
            if t.pair in pairs:
                continue
            chosen.append(t)
            pairs.add(t.pair)
            walk(idx + 1, total + c, chosen, pairs)
            pairs.discard(t.pair)
            chosen.pop()

    walk(0, 0, [], set())
    return found


def enumerate_instances_slow(params: SumParams) -> list[Instance]:
    """Brute force over the box i_m >= i, j_m >= j - q, with every condition checked afterwards.

    Only the magnitude bound (each contribution at most I + qj) limits the
    loops; admissibility is decided by ``instance_admissible`` alone.
    """
    p, q, i, j = params.p, params.q, params.i, params.j
    top = params.max_total
    raw = []
    for i_m in range(i, top + 1):
        for j_m in range(max(1, j - q), top + 1):
            scale = q * p ** valuation(j_m, p)
            for v in range(top // i_m + 1):
                for w in range((top - v * i_m) // (q * j_m) + 1):
                    a = v * i_m + w * q * j_m
                    for x in range((top - a) // j_m + 1):
                        b = a + x * j_m
                        for y in range((top - b) // (scale * i_m) + 1):
                            c = b + y * scale * i_m
                            for z in range(top - c + 1):
                                if c + z:
                                    raw.append(Term(i_m, j_m, v, w, x, y, z))
    singles = [t for t in raw if term_admissible(t, params)]
    smallest = min((t.contribution(params) for t in singles), default=top + 1)
    out = []
    for size in range(1, top // max(smallest, 1) + 1):
        for combo in itertools.combinations(singles, size):
            I = instance_admissible(combo, params)
            if I is not None:
                out.append(Instance(tuple(sorted(combo)), I))
    return out


# ---------------------------------------------------------------------------
# the claims
# ---------------------------------------------------------------------------


def canonical_shapes(params: SumParams) -> set[tuple[Term, ...]]:
    """Instances the structure statement allows."""
    i, j, ps, q = params.i, params.j, params.ps, params.q
    shapes = {(Term(i, j, v=ps, w=1),)}
    if ps == q:
        shapes.add((Term(i, j, x=q, y=1),))
    return shapes


@dataclass
class SumReport:
    params: SumParams
    instances: int = 0
    value_failures: list[Instance] = field(default_factory=list)
    shape_failures: list[Instance] = field(default_factory=list)
    overflow: bool = False
    cross_checked: bool | None = None

    @property
    def passed(self) -> bool:
        return not (self.value_failures or self.shape_failures or self.overflow) and self.cross_checked is not False


def check_sum_identity(params: SumParams, cap: int = 10**7, cross_check: bool = False) -> SumReport:
    report = SumReport(params)
    try:
        instances = enumerate_instances(params, cap)
    except CapExceeded:
        report.overflow = True
        return report
    report.instances = len(instances)
    shapes = canonical_shapes(params)
    for inst in instances:
        if inst.I != params.ps * params.i:
            report.value_failures.append(inst)
        elif inst.terms not in shapes:
            report.shape_failures.append(inst)
    if cross_check:
        slow = enumerate_instances_slow(params)
        report.cross_checked = {x.terms for x in slow} == {x.terms for x in instances}
    return report


def default_grid(p: int = 3, q: int = 3, s: int = 1, js=range(9, 13), i_max: int = 15, z_rule: str = "literal"):
    for j in js:
        for i in range(j + 1, i_max + 1):
            if i % p:
                yield SumParams(p, q, s, i, j, z_rule)
