"""Acceptance criteria 1-10.

Each criterion is a function returning (passed, detail). Under pytest every
criterion prints one line ``criterion N: PASS|FAIL [seconds] detail`` and then
asserts. Run ``python tests/test_acceptance.py`` for the lines alone.
"""

from __future__ import annotations

import io
import sys
import time
from math import comb
from pathlib import Path

import numpy as np
import pytest

from nottingham import cli
from nottingham.commutator import commutator_direct, commutator_recurrence
from nottingham.construct import closure_explore, promote_to_unit_class
from nottingham.fp import binom_mod_p, count_labelled_partitions
from nottingham.index_sums import SumParams, check_sum_identity
from nottingham.lemmas import (
    LemmaCheckConfig,
    verify_lemma_41,
    verify_lemma_42,
    verify_prop_32_33,
    verify_prop_34,
    verify_section5,
)
from nottingham.notation import parse_series, print_series
from nottingham.series import FormalSeries, GroupSeries
from nottingham.subgroups import (
    INFINITE_ORDER_CERTIFIED,
    IndexSet,
    closure_probe,
    klopsch_check,
    random_s_element,
    torsion_verdict,
)

SEED = 2024


def _random_group(p, n, rng):
    c = rng.integers(0, p, n + 1)
    c[0], c[1] = 0, 1
    return GroupSeries(p, n, c)


def _summary(report, limit=2):
    bad = report.failures()
    if not bad:
        return f"{report.checked} rows pass"
    shown = "; ".join(f"[{r.params}] {r.witness[:160]}" for r in bad[:limit])
    return f"{len(bad)}/{report.checked} rows fail: {shown}"


# ---------------------------------------------------------------------------


def criterion_1():
    rng = np.random.default_rng(SEED)
    mismatches = []
    for p in (2, 3, 5, 7):
        for k in range(1000):
            v, u = _random_group(p, 128, rng), _random_group(p, 128, rng)
            if commutator_recurrence(v, u).value != commutator_direct(v, u).value:
                mismatches.append((p, k))
    return not mismatches, f"4 x 1000 pairs at N=128, {len(mismatches)} mismatches"


def _count_maps(parts):
    """Maps {1..m} -> {1..n} with the given fibre sizes, counted by walking the assignments."""
    left = list(parts)

    def walk(remaining):
        if remaining == 0:
            return 1
        total = 0
        for k in range(len(left)):
            if left[k]:
                left[k] -= 1
                total += walk(remaining - 1)
                left[k] += 1
        return total

    return walk(sum(parts))


def _compositions(m):
    if m == 0:
        yield ()
        return
    for first in range(1, m + 1):
        for rest in _compositions(m - first):
            yield (first, *rest)


def criterion_2():
    bad = []
    for p in (2, 3, 5, 7):
        for a in range(301):
            for b in range(a + 1):
                if binom_mod_p(a, b, p).value != comb(a, b) % p:
                    bad.append(("binom", a, b, p))
    tried = 0
    for m in range(1, 9):
        for parts in _compositions(m):
            exact = _count_maps(parts)
            for p in (2, 3, 5, 7):
                tried += 1
                if count_labelled_partitions(m, parts, p).value != exact % p:
                    bad.append(("partitions", parts, p))
    return not bad, f"binomials a<=300 and {tried} partition counts, {len(bad)} mismatches {bad[:3]}"


def criterion_3():
    reports = [verify_prop_34(LemmaCheckConfig(p=3, q=q, trials=100, seed=SEED)) for q in (3, 9)]
    passed = all(r.passed for r in reports)
    literal = verify_prop_34(LemmaCheckConfig(p=3, q=3, trials=5, seed=SEED), diagonal="literal")
    literal_bad = sorted({r.params.split(" diagonal")[0] for r in literal.failures()})
    detail = "; ".join(f"q={q}: {_summary(r)}" for q, r in zip((3, 9), reports))
    detail += f" (diagonal coefficient taken as 0; the -i*u*v reading fails at {literal_bad})"
    return passed, detail


def criterion_4():
    rep = verify_prop_32_33(LemmaCheckConfig(p=3, q=3, trials=100, seed=SEED), j_max=4, e_max=3)
    return rep.passed, _summary(rep)


def criterion_5():
    literal = verify_lemma_41(3, 3, 1, js=range(9, 13), i_max=15, z_rule="literal", cap=10**7)
    strict = verify_lemma_41(3, 3, 1, js=range(9, 13), i_max=15, z_rule="strict", cap=10**7)
    cross = check_sum_identity(SumParams(3, 3, 1, 10, 9, "literal"), cross_check=True).cross_checked
    detail = f"literal z-rule: {_summary(literal, 1)} | strict z-rule: {_summary(strict)} | brute-force cross-check at (i=10, j=9): {cross}"
    return literal.passed, detail


def criterion_6():
    rep = verify_lemma_42(LemmaCheckConfig(p=3, q=3, trials=10, seed=SEED), instances=12)
    return rep.passed and rep.checked >= 10, _summary(rep)


def criterion_7():
    reports = [
        verify_section5(LemmaCheckConfig(p=p, trials=100, seed=SEED), power_trials=200) for p in (3, 5)
    ]
    return all(r.passed for r in reports), "; ".join(f"p={p}: {_summary(r)}" for p, r in zip((3, 5), reports))


def criterion_8():
    bad = []
    runs = 0
    for p in (2, 3, 5):
        sets = [IndexSet.family_a(d, p) for d in range(1, 5)]
        sets += [IndexSet.family_b(p), IndexSet.family_d(p)]
        sets += [IndexSet.family_c(i, p) for i in range(1, 4)]
        sets += [IndexSet.multiples(p, p), IndexSet.multiples(p * p, p)]
        for lam in sets:
            runs += 1
            if not klopsch_check(lam, 200).passed:
                bad.append(("criterion", lam.label, p))
            if not closure_probe(lam, 500, 64, SEED).passed:
                bad.append(("probe", lam.label, p))
    counter = klopsch_check(IndexSet.explicit({1}, 2, 10), 10)
    witness_ok = not counter.passed and counter.witnesses == ((1, 1, 2),)
    return not bad and witness_ok, f"{runs} index sets, failures {bad}; Explicit{{1}} witnesses {counter.witnesses}"


def criterion_9():
    failures = []
    certified = 0
    for seed in range(20):
        rng = np.random.default_rng([SEED, seed])
        v = random_s_element(3, (1, 3, 5)[seed % 3], 128, rng)
        assert v.leading_term()[0] % 3 == 0
        try:
            out = promote_to_unit_class(v, budget=20)
        except Exception as exc:  # reported, not raised
            failures.append((seed, repr(exc)))
            continue
        lead = out.element.leading_term()
        if lead is None or lead[0] % 3 != 1 or torsion_verdict(out.element).verdict != INFINITE_ORDER_CERTIFIED:
            failures.append((seed, lead))
        else:
            certified += 1
    gaps = {}
    for seed in range(5):
        gen = random_s_element(3, 1, 40, np.random.default_rng(seed))
        rep = closure_explore(gen, 1, seed=seed)
        if not rep.covered:
            gaps[seed] = rep.missing
    detail = f"promotion {certified}/20 certified {failures[:2]}; closure tail window {closure_window(40)} gaps {gaps}"
    return not failures and not gaps, detail


def closure_window(n):
    return (2 * n // 3, n - 1)


def criterion_10():
    rng = np.random.default_rng(SEED)
    bad_round = 0
    for k in range(1000):
        p = (2, 3, 5, 7)[k % 4]
        n = int(rng.integers(1, 129))
        c = rng.integers(0, p, n + 1)
        c[0] = 0
        c[rng.random(n + 1) < 0.5] = 0
        if k % 2:
            c[1] = 1
            s = GroupSeries(p, n, c)
        else:
            s = FormalSeries(p, n, c)
        if parse_series(print_series(s), p, n) != s:
            bad_round += 1

    def run(argv):
        out, err = io.StringIO(), io.StringIO()
        return cli.main(argv, stdout=out, stderr=err), out.getvalue()

    matrix = [
        (["compose", "--p", "3", "--prec", "16", "t + t^4", "t + t^4"], 0),
        (["commutator", "--p", "5", "t + t^3", "t + t^4"], 0),
        (["lambda", "check", "--family", "explicit", "--elements", "1", "--p", "2", "--horizon", "10"], 1),
        (["compose", "--p", "3", "t + * t^4", "t"], 2),
        (["binom", "3", "1", "--p", "9"], 2),
        (["nonsense"], 2),
        (["invert", "--p", "3", "--prec", "5", "t + t^9"], 3),
        (["verify", "--lemma", "5.2", "--p", "3", "--prec", "64", "--seed", "7"], 0),
    ]
    bad_exit = [(a, want, got) for a, want in matrix if (got := run(a)[0]) != want]
    probe = ["lambda", "probe", "--family", "B", "--p", "3", "--trials", "30", "--seed", "5", "--format", "json"]
    same = run(probe) == run(probe)
    return not bad_round and not bad_exit and same, (
        f"round-trip failures {bad_round}/1000; exit-code mismatches {bad_exit}; byte-identical reruns {same}"
    )


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 11)}


def run_criterion(n: int) -> tuple[bool, str]:
    start = time.perf_counter()
    passed, detail = CRITERIA[n]()
    elapsed = time.perf_counter() - start
    line = f"criterion {n}: {'PASS' if passed else 'FAIL'} [{elapsed:.1f}s] {detail}"
    return passed, line


@pytest.mark.acceptance
@pytest.mark.parametrize("n", range(1, 11))
def test_criterion(n, capsys):
    passed, line = run_criterion(n)
    with capsys.disabled():
        print("\n" + line)
    assert passed, line


if __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).parent))
    which = [int(a) for a in sys.argv[1:]] or list(CRITERIA)
    results = [run_criterion(n) for n in which]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
