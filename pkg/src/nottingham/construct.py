"""Constructions inside the normal closure of one element of S.

Both routines only form commutators [h, g] with g in S or g already built,
compositions and powers of elements already built, so every output lies in
the normal closure of the starting element. ``promote_to_unit_class`` also records a
``Word`` for its output that ``evaluate_word`` can replay independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .commutator import cancel_multiplier, commutator
from .errors import BudgetExhausted, MembershipError, PrecisionError
from .series import GroupSeries, compose, depth, group_pow, invert, s_level_exponent
from .subgroups import random_s_element

# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

# A word is a nested tuple:
#   ("gen",)                  the starting element
#   ("pow", w, e)             w^e
#   ("comm", w, g)            [w, g] for an explicit series g in S
#   ("compose", w1, w2)       w1 o w2
#   ("inv", w)                w^-1
Word = tuple

GEN: Word = ("gen",)


def evaluate_word(word: Word, generator: GroupSeries) -> GroupSeries:
    """Recompute a word from scratch with the direct commutator."""
    from .commutator import commutator_direct

    op = word[0]
    if op == "gen":
        return generator
    if op == "pow":
        return group_pow(evaluate_word(word[1], generator), word[2])
    if op == "comm":
        return commutator_direct(evaluate_word(word[1], generator), word[2]).value
    if op == "compose":
        return compose(evaluate_word(word[1], generator), evaluate_word(word[2], generator))
    if op == "inv":
        return invert(evaluate_word(word[1], generator))
    raise ValueError(f"unknown word node {op!r}")


def word_size(word: Word) -> int:
    if word[0] == "gen":
        return 1
    return 1 + sum(word_size(w) for w in word[1:] if isinstance(w, tuple))


def conjugators_used(word: Word) -> list[GroupSeries]:
    if word[0] == "gen":
        return []
    if word[0] == "comm":
        return conjugators_used(word[1]) + [word[2]]
    return [g for w in word[1:] if isinstance(w, tuple) for g in conjugators_used(w)]


# ---------------------------------------------------------------------------
# promotion to a leading exponent 1 mod p
# ---------------------------------------------------------------------------


def first_unit_term(x: GroupSeries) -> tuple[int, int] | None:
    """Lowest exponent k > 1 with k = 1 mod p and nonzero coefficient."""
    p = x.p
    for k, c in x.terms():
        if k > 1 and k % p == 1:
            return k, c
    return None


def monomial(p: int, n: int, exponent: int, coeff: int = 1) -> GroupSeries:
    return GroupSeries.from_terms(p, n, {exponent: coeff})


@dataclass
class Promotion:
    element: GroupSeries
    word: Word
    steps: int
    trace: list = field(default_factory=list)


def _check_s(v: GroupSeries):
    depth(v, "S")  # raises MembershipError outside S


def _unlock_power(v: GroupSeries, j: int, trace: list, budget: int) -> tuple[GroupSeries, Word]:
    """Replace v by v o [v, t + a t^(pm+1)] so that v^p is visible at the precision.

    The commutator only changes v from t^(p(j+m)) on, so the leading term
    survives. (v o [g, v] would not do: it is a conjugate of v.) Of the
    candidates, the one whose p-th power has the lowest leading exponent is
    kept, since that power is what later cancellations lean on.
    """
    p, n = v.context
    best = None
    for m in range(j + 1, n):
        if p * (j + m) > n:
            break
        for a in range(1, p):
            g = monomial(p, n, p * m + 1, a)
            cand = compose(v, commutator(v, g))
            lp = group_pow(cand, p).leading_term()
            if lp is not None and (best is None or lp[0] < best[0]):
                best = (lp[0], cand, m, a, g)
    if best is None:
        raise BudgetExhausted("v^p stays trivial at this precision", trace)
    _, cand, m, a, g = best
    trace.append(("unlock", p * m + 1, a))
    return cand, ("compose", GEN, ("comm", GEN, g))


def promote_to_unit_class(v: GroupSeries, budget: int = 20) -> Promotion:
    """Build an element of the normal closure of v whose leading exponent is 1 mod p.

    v must be a nontrivial element of S. If its leading exponent already is
    1 mod p it is returned as is. Otherwise, with v = t + a t^(pj) + ...:

    1. x = [v, t + t^(pi+1)] for i > j prime to p, in increasing order, whose
       first exponent 1 mod p is E = p(pj+i-1)+1.
    2. While the leading exponent of x is a multiple pl of p, cancel it with
       y = [v^p, t + t^(p(l-lam)+1)] (v^p = t + b t^(p lam) + ...) or with
       y = [v, t + t^(p(l-j)+1)], keeping only steps that leave the first
       unit-class term of x alone.

    If step 2 stalls, the next i is tried. Each accepted cancellation costs
    one unit of ``budget``, counted per seed.
    """
    _check_s(v)
    p, n = v.context
    lead = v.leading_term()
    if lead is None:
        raise MembershipError("the identity has nothing to promote")
    if lead[0] % p == 1:
        return Promotion(v, GEN, 0)
    trace: list = []
    j = lead[0] // p
    base, base_word = v, GEN
    vp = group_pow(base, p)
    if vp.is_identity():
        base, base_word = _unlock_power(v, j, trace, budget)
        vp = group_pow(base, p)
    lp = vp.leading_term()
    lam = lp[0] // p if lp[0] % p == 0 else None

    seeds = 0
    failure: BudgetExhausted | None = None
    for i in range(j + 1, n):
        if i % p == 0:
            continue
        e1 = p * (p * j + i - 1) + 1
        if e1 > n:
            break
        g = monomial(p, n, p * i + 1)
        x = commutator(base, g)
        unit = first_unit_term(x)
        if unit is None or unit[0] != e1:
            continue
        seeds += 1
        attempt = trace + [("seed", p * i + 1, e1)]
        try:
            return _cancel_down(x, ("comm", base_word, g), unit, base, base_word, vp, j, lam, budget, attempt)
        except BudgetExhausted as exc:
            failure = exc
    if failure is not None:
        raise BudgetExhausted(f"all {seeds} seeds stalled; last: {failure}", failure.trace)
    raise PrecisionError(f"precision N={n} too small to expose a unit-class term for t^{lead[0]}")


def _cancel_down(x, x_word, target, base, base_word, vp, j, lam, budget, trace) -> Promotion:
    """Strip leading exponents divisible by p from x without touching ``target``."""
    p, n = x.context
    steps = 0
    while True:
        ld = x.leading_term()
        if ld is None:
            raise BudgetExhausted("construction collapsed to the identity", trace)
        if ld[0] % p == 1:
            return Promotion(x, x_word, steps, trace)
        if steps >= budget:
            raise BudgetExhausted(f"budget {budget} spent at leading exponent {ld[0]}", trace)
        level = ld[0] // p
        options = []
        if lam is not None and level - lam >= 1:
            options.append((vp, ("pow", base_word, p), level - lam))
        if level - j >= 1:
            options.append((base, base_word, level - j))
        for h, h_word, m in options:
            g = monomial(p, n, p * m + 1)
            y = commutator(h, g)
            yl = y.leading_term()
            if yl is None or yl[0] != ld[0]:
                continue
            mult = cancel_multiplier(x, y)
            z = compose(x, group_pow(y, mult))
            if first_unit_term(z) == target:
                x = z
                x_word = ("compose", x_word, ("pow", ("comm", h_word, g), mult))
                trace.append(("cancel", ld[0], p * m + 1, mult))
                break
        else:
            raise BudgetExhausted(f"no cancelling commutator for t^{ld[0]}", trace)
        steps += 1


# ---------------------------------------------------------------------------
# normal-closure exploration
# ---------------------------------------------------------------------------


def legal_s_depths(p: int, lo: int, hi: int) -> list[int]:
    """J-depths d in [lo, hi] whose exponent d+1 is 0 or 1 mod p."""
    return [d for d in range(max(lo, 1), hi + 1) if (d + 1) % p in (0, 1)]


@dataclass
class ClosureReport:
    precision: int
    generator: GroupSeries
    u_level: int
    seed: int
    depths: set
    sifted: int
    window: tuple[int, int]
    cap_hit: bool

    @property
    def elements(self) -> int:
        """Size of the closure's depth basis (one representative per depth)."""
        return len(self.depths)

    @property
    def missing(self) -> list[int]:
        return [d for d in legal_s_depths(self.generator.p, *self.window) if d not in self.depths]

    @property
    def covered(self) -> bool:
        return not self.missing

    def to_dict(self) -> dict:
        from .notation import print_series

        return {
            "precision": self.precision,
            "generator": print_series(self.generator),
            "u_level": self.u_level,
            "seed": self.seed,
            "elements": self.elements,
            "sifted": self.sifted,
            "cap_hit": self.cap_hit,
            "window": list(self.window),
            "depths": sorted(self.depths),
            "missing": self.missing,
            "covered": self.covered,
        }


def closure_explore(
    generator: GroupSeries,
    u_level: int = 1,
    precision: int | None = None,
    *,
    cap: int = 20000,
    seed: int = 0,
    random_conjugators: int = 2,
    window: tuple[int, int] | None = None,
    stop_when_covered: bool = False,
) -> ClosureReport:
    """Normal closure of ``generator`` in U = S_(u_level), modulo t^(N+1).

    The closure is held as one representative per J-depth (each layer
    J_d / J_(d+1) is a copy of F_p, so one element per depth spans it).
    A candidate is sifted by cancelling its leading term against the
    representative of its depth until it becomes the identity or lands
    on a new depth, where it becomes a representative. Every new
    representative r queues r^p, [r, c] for the monomials c = t + t^e of U
    and for a few seeded random elements of U, and [r, r'] for the
    representatives found so far. When the queue runs dry the
    representatives generate exactly the normal closure at this precision.

    ``cap`` bounds the number of sifted candidates; the candidate order
    does not depend on it, so a larger cap only extends the run.
    """
    if generator.is_identity():
        raise MembershipError("exploring the closure of the identity")
    _check_s(generator)
    if precision is not None and precision != generator.precision:
        generator = generator.truncate(precision)
    p, n = generator.context
    if window is None:
        window = (2 * n // 3, n - 1)
    first = s_level_exponent(u_level, p)
    ladder = [monomial(p, n, e) for e in range(first, n + 1) if e % p in (0, 1)]
    rng = np.random.default_rng(seed)
    targets = set(legal_s_depths(p, *window))

    reps: dict[int, GroupSeries] = {}
    order: list[GroupSeries] = []
    sifted = 0

    def sift(x: GroupSeries) -> None:
        nonlocal sifted
        sifted += 1
        while not x.is_identity():
            d = x.leading_term()[0] - 1
            rep = reps.get(d)
            if rep is None:
                reps[d] = x
                order.append(x)
                return
            x = compose(x, group_pow(rep, cancel_multiplier(x, rep)))

    sift(generator)
    head = 0
    while head < len(order) and sifted < cap:
        if stop_when_covered and targets <= set(reps):
            break
        r = order[head]
        head += 1
        jobs = [lambda r=r: group_pow(r, p)]
        jobs += [lambda r=r, c=c: commutator(r, c) for c in ladder]
        jobs += [
            lambda r=r, c=random_s_element(p, u_level, n, rng, exact=False): commutator(r, c)
            for _ in range(random_conjugators)
        ]
        jobs += [lambda r=r, o=o: commutator(r, o) for o in order[:head]]
        for job in jobs:
            if sifted >= cap:
                break
            sift(job())
    cap_hit = head < len(order)
    return ClosureReport(n, generator, u_level, seed, set(reps), sifted, window, cap_hit)
