import pytest

from nottingham.index_sums import (
    SumParams,
    Term,
    canonical_shapes,
    check_sum_identity,
    counts_admissible,
    enumerate_instances,
    enumerate_instances_slow,
    instance_admissible,
    pair_admissible,
)


def params(i=10, j=9, rule="literal", p=3, q=3, s=1):
    return SumParams(p, q, s, i, j, rule)


def test_parameter_validation():
    with pytest.raises(ValueError):
        params(i=9, j=9)
    with pytest.raises(ValueError):
        params(i=12, j=9)
    with pytest.raises(ValueError):
        params(j=8)
    with pytest.raises(ValueError):
        params(rule="loose")


def test_targets_window():
    pr = params(i=10, j=9)
    assert pr.targets() == {I + 27: I for I in range(12, 31, 3)}


def test_canonical_term_is_admissible():
    pr = params(i=11, j=10)
    shapes = canonical_shapes(pr)
    assert len(shapes) == 2  # p^s = q admits the second shape
    for canon in shapes:
        assert term_sum(pr, canon) == 33 + 30
        assert instance_admissible(canon, pr) == 33
    assert len(canonical_shapes(SumParams(3, 9, 1, 82, 81))) == 1


def term_sum(pr, terms):
    return sum(t.contribution(pr) for t in terms)


def test_z_rules():
    pr_lit, pr_strict = params(), params(rule="strict")
    t = Term(10, 10, x=1, y=1, z=2)
    assert counts_admissible(t, pr_lit)
    assert not counts_admissible(t, pr_strict)
    assert not counts_admissible(Term(10, 10, z=3), pr_lit)
    assert not counts_admissible(Term(10, 10, v=1), pr_lit)


def test_pair_rules():
    pr = params()
    assert pair_admissible(10, 9, pr)
    assert not pair_admissible(10, 8, pr)
    assert not pair_admissible(12, 20, pr)
    assert not pair_admissible(9, 20, pr)


def test_literal_rule_counterexample():
    pr = params()
    bad = (Term(10, 10, x=1, y=1, z=2),)
    assert instance_admissible(bad, pr) == 15
    rep = check_sum_identity(pr)
    assert not rep.passed
    assert any(inst.terms == bad for inst in rep.value_failures)


def test_strict_rule_passes_on_grid_corner():
    rep = check_sum_identity(params(rule="strict"))
    assert rep.passed and rep.instances >= 1


@pytest.mark.parametrize("rule", ["literal", "strict"])
def test_fast_enumerator_agrees_with_brute_force(rule):
    pr = params(rule=rule)
    fast = {x.terms for x in enumerate_instances(pr)}
    slow = {x.terms for x in enumerate_instances_slow(pr)}
    assert fast == slow


def test_instance_cap_reports_overflow():
    rep = check_sum_identity(params(), cap=3)
    assert rep.overflow and not rep.passed
