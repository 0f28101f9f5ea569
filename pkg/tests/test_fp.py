import itertools
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nottingham.errors import ModulusError
from nottingham.fp import (
    DigitExpansion,
    FpScalar,
    binom_mod_p,
    count_labelled_partitions,
    is_prime,
    lucas_dominates,
    multinomial_mod_p,
    prime_power_exponent,
    valuation,
)

primes = st.sampled_from([2, 3, 5, 7])


def brute_maps(m: int, parts: list[int]) -> int:
    n = len(parts)
    return sum(
        1
        for f in itertools.product(range(n), repeat=m)
        if all(f.count(k) == parts[k] for k in range(n))
    )


def compositions(m: int):
    if m == 0:
        yield []
        return
    for first in range(1, m + 1):
        for rest in compositions(m - first):
            yield [first, *rest]


def test_binom_examples():
    assert binom_mod_p(5, 0, 3) == 1
    assert binom_mod_p(7, 2, 3) == 0
    for p in (2, 3, 5, 7):
        for k in range(1, p):
            assert binom_mod_p(p, k, p) == 0


def test_binom_matches_factorials_exhaustively():
    for p in (2, 3, 5, 7):
        for a in range(301):
            for b in range(a + 1):
                assert binom_mod_p(a, b, p).value == comb(a, b) % p


@given(st.integers(0, 300), st.integers(0, 300), primes)
def test_nonzero_iff_digits_dominate(a, b, p):
    if b > a:
        assert binom_mod_p(a, b, p) == 0
    else:
        assert (binom_mod_p(a, b, p).value != 0) == lucas_dominates(a, b, p)


def test_binom_rejects_composite_modulus():
    with pytest.raises(ModulusError):
        binom_mod_p(4, 2, 4)


def test_partition_examples():
    assert count_labelled_partitions(5, [5], 3) == 1
    assert count_labelled_partitions(3, [1, 1, 1], 5).value == 1
    assert count_labelled_partitions(4, [2, 2], 3).value == 0


def test_partitions_match_map_enumeration():
    for p in (2, 3, 5):
        for m in range(1, 9):
            for parts in compositions(m):
                if len(parts) > 4:
                    continue
                assert count_labelled_partitions(m, parts, p).value == brute_maps(m, parts) % p, parts


@given(st.integers(1, 40), st.integers(1, 40), primes)
def test_two_part_count_is_symmetric(a, b, p):
    m = a + b
    assert count_labelled_partitions(m, [a, b], p) == count_labelled_partitions(m, [b, a], p)


def test_partition_argument_errors():
    with pytest.raises(ValueError):
        count_labelled_partitions(5, [2, 2], 3)
    with pytest.raises(ValueError):
        count_labelled_partitions(2, [0, 2], 3)


def test_multinomial_ignores_zero_counts():
    assert multinomial_mod_p([2, 0, 1], 5) == 3


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5, 7, 11]))
def test_digit_expansion_round_trip(a, p):
    assert DigitExpansion.of(a, p).value == a


def test_scalar_arithmetic():
    x = FpScalar(4, 5)
    assert x + 3 == 2
    assert x * x == 1
    assert x.inverse() * x == 1
    assert x / 2 == 2
    assert -x == 1
    assert x**-1 == 4
    with pytest.raises(ZeroDivisionError):
        FpScalar(0, 5).inverse()
    with pytest.raises(ModulusError):
        FpScalar(1, 5) + FpScalar(1, 3)


def test_prime_helpers():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert prime_power_exponent(27, 3) == 3
    with pytest.raises(ValueError):
        prime_power_exponent(12, 3)
    assert valuation(54, 3) == 3
