import numpy as np
import pytest

from nottingham.errors import PrecisionError
from nottingham.lemmas import (
    LEMMAS,
    LemmaCheckConfig,
    lemma_42_instances,
    lemma_42_shape,
    prop_34_check,
    s_commutator_case,
    verify,
    verify_lemma_41,
    verify_lemma_42,
    verify_prop_32_33,
    verify_prop_34,
    verify_section5,
)
from nottingham.series import GroupSeries
from nottingham.subgroups import random_t_element


def g(p, n, terms):
    return GroupSeries.from_terms(p, n, terms)


def test_leading_term_law_examples():
    n = 3 * (3 + 2 + 1) + 1
    assert prop_34_check(g(3, n, {4: 1}), g(3, n, {7: 1}), 3, 1, 2) == ""
    n = 3 * (3 + 3 + 1) + 1
    assert prop_34_check(g(3, n, {4: 1}), g(3, n, {10: 1}), 3, 1, 3) == ""
    u = g(3, 30, {4: 1, 7: 2})
    assert prop_34_check(u, u, 3, 1, 1) == ""


def test_leading_term_law_on_small_grid():
    assert verify_prop_34(LemmaCheckConfig(p=3, trials=15, j_max=4, i_max=5)).passed


def test_diagonal_law_as_literally_stated_fails_where_p_does_not_divide_i():
    cfg = LemmaCheckConfig(p=3, trials=5, j_max=4, i_max=4)
    rep = verify_prop_34(cfg, diagonal="literal")
    failed = {r.params for r in rep.failures()}
    assert failed == {f"q=3 j={i} i={i} diagonal" for i in (1, 2, 4)}


def test_diagonal_coefficient_vanishes():
    rng = np.random.default_rng(1)
    for i in (1, 2, 4):
        n = 3 * (4 * i + 1) + 1
        v, u = random_t_element(3, 3, i, n, rng), random_t_element(3, 3, i, n, rng)
        assert prop_34_check(v, u, 3, i, i) == ""


def test_expansion_closed_forms():
    rep = verify_prop_32_33(LemmaCheckConfig(p=3, trials=5), j_max=2, e_max=2)
    assert rep.passed and rep.checked > 0


def test_sparse_shape_unit_coefficients():
    j, i, q = 9, 10, 3
    n = q * q * (i + j) + q
    v, u = g(3, n, {q * j + 1: 1}), g(3, n, {q * i + 1: 1})
    shape = lemma_42_shape(v, u, q, j, i)
    assert shape.passed, shape.describe_failure()
    checked = {name: got for name, got, _ in shape.e_checked}
    assert checked["e_10"] == 2 and checked["e_30"] == 2


def test_sparse_instances_respect_hypotheses():
    for j, i in lemma_42_instances(3, 12, 3):
        assert i > j >= 9 and i % 3


def test_sparse_shape_battery():
    assert verify_lemma_42(LemmaCheckConfig(p=3, trials=2), instances=4).passed


def test_sparse_shape_needs_precision():
    with pytest.raises(PrecisionError):
        lemma_42_shape(g(3, 50, {28: 1}), g(3, 50, {31: 1}), 3, 9, 10)


@pytest.mark.parametrize("case", ["5.1(1)", "5.1(2)", "5.1(3)", "5.2"])
@pytest.mark.parametrize("p", [3, 5])
def test_s_commutator_leading_laws(case, p):
    rng = np.random.default_rng(7)
    for j in (1, 2):
        for i in range(j + 1, j + 4):
            if case == "5.2" and i % p == 0:
                continue
            _, problem = s_commutator_case(case, p, j, i, rng)
            assert problem == ""


def test_s_battery_and_precision_skips():
    assert verify_section5(LemmaCheckConfig(p=3, trials=10)).passed
    with pytest.raises(PrecisionError):
        verify_section5(LemmaCheckConfig(p=3, trials=5, precision=4))


def test_index_sum_report_rows():
    rep = verify_lemma_41(js=[9], i_max=11, z_rule="strict")
    assert rep.passed and len(rep.rows) == 2
    assert not verify_lemma_41(js=[9], i_max=10).passed


def test_dispatch_is_deterministic():
    cfg = LemmaCheckConfig(p=3, precision=64, seed=7, trials=10)
    a, b = verify("5.2", cfg), verify("5.2", cfg)
    assert a.to_tsv() == b.to_tsv()
    assert a.to_tsv().splitlines()[0] == "lemma\tparams\tstatus\twitness"
    assert set(LEMMAS) >= {"3.4", "4.1", "5.5"}
    with pytest.raises(ValueError):
        verify("9.9", cfg)
