import math
import threading

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bfree.arith import lcm_chain, primes_up_to
from bfree.bset import (
    Ape1BSet,
    CascadeBSet,
    ExplicitBSet,
    Mod12BSet,
    OddPrimesBSet,
    Power2BSet,
    PredicateBSet,
    PrimeSquaresBSet,
    PrimesBSet,
    PuncturedPrimesBSet,
    QFamilyBSet,
    TwoThreeBSet,
    family_catalog,
    make_bset,
    mod12_prime,
)
from bfree.errors import ConfigError

INFINITE = [
    PrimesBSet(),
    OddPrimesBSet(),
    PrimeSquaresBSet(),
    Power2BSet(),
    TwoThreeBSet(),
    CascadeBSet(),
    QFamilyBSet(),
    Ape1BSet(),
    Ape1BSet(indices=3),
    PuncturedPrimesBSet(K=8),
    Mod12BSet(),
]


def test_elements_examples():
    assert PrimeSquaresBSet().elements_up_to(30) == (4, 9, 25)
    assert OddPrimesBSet().elements_up_to(12) == (3, 5, 7, 11)
    assert TwoThreeBSet(p=(5, 13, 17), q=(7, 19)).elements_up_to(40) == (10, 21, 26, 34, 36)


def test_default_two_three_streams_alternate():
    b = TwoThreeBSet()
    ps, qs = b.streams.take(4)
    assert ps == [5, 11, 17, 23] and qs == [7, 13, 19, 29]


def test_gcd_profile_examples():
    prof = PrimesBSet().gcd_profile(6)
    assert prof.gcds == (1, 2, 3) and prof.exact
    assert Mod12BSet().gcd_profile(12).gcds == (1, 4, 6)
    b = TwoThreeBSet()
    for S in b.native_stages(5):
        gcds = b.gcd_profile(lcm_chain(S)).gcds
        assert set(gcds) - set(S) == {2, 3}


def test_mod12_profile_against_truncation():
    trunc = {math.gcd(int(v), 12) for v in Mod12BSet().elements_array(10**5)}
    assert trunc == {1, 4, 6}


def test_catalog_contents():
    names = {f.name for f in family_catalog()}
    assert names >= {"explicit", "primes", "odd-primes", "prime-squares", "power2", "two-three",
                     "cascade", "q-family", "ape1", "punctured-primes", "mod12"}
    ape1 = next(f for f in family_catalog() if f.name == "ape1")
    assert "number of prime indices" in ape1.params["indices"]


def test_make_bset_and_errors():
    assert make_bset({"family": "explicit", "params": {"elements": [1, 3]}}).elements_up_to(5) == (1, 3)
    assert make_bset({"family": "punctured-primes", "params": {"K": 3}}).removed == (5, 11, 17)
    with pytest.raises(ConfigError):
        make_bset({"family": "nope"})
    with pytest.raises(ConfigError):
        make_bset({"family": "primes", "params": {"bogus": 1}})
    with pytest.raises(ConfigError):
        make_bset({"params": {}})
    with pytest.raises(ConfigError):
        TwoThreeBSet(p=(5,), q=(5,))
    with pytest.raises(ConfigError):
        Power2BSet(odd_parts=[3, 9])


def test_punctured_primes_construction():
    b = PuncturedPrimesBSet(K=12)
    assert b.pairs[:5] == [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1)]
    for k, ((m, r), p) in enumerate(zip(b.pairs, b.removed), start=1):
        assert p > 2 ** (k + 1) and (p - r) % m == 0
    assert not any(b.contains(p) for p in b.removed)


def test_cascade_blocks():
    b = CascadeBSet()
    assert b.block(1) == (6,)
    assert b.block(2) == (50, 98, 147)
    assert b.block(3) == (507, 1210, 1690, 2366)


def test_q_family_blocks():
    assert QFamilyBSet().native_stages(3) == [(15,), (15, 21, 35), (15, 21, 33, 35, 55, 77)]
    assert QFamilyBSet(q=5).block(2) == (21, 35)


def test_power2_finite():
    b = Power2BSet(K=8)
    assert b.elements_up_to(10**5) == (6, 20, 56, 176, 416, 1088, 2432, 5888)
    assert b.is_finite and b.max_element() == 5888
    assert b.gcd_profile(12).exact


@pytest.mark.parametrize("k", list(range(-40, 41)))
def test_mod12_prime_divides_progression(k):
    p = mod12_prime(k)
    assert (5 + 12 * k) % p == 0 and p % 12 not in (1, 11)
    assert Mod12BSet().contains(p)


def test_mod12_contains_every_prime_5_7_mod_12():
    ps = [int(p) for p in primes_up_to(2000) if p % 12 in (5, 7)]
    from_k = {mod12_prime(k) for k in range(-200, 200)}
    assert set(ps) <= from_k


@pytest.mark.parametrize("b", INFINITE, ids=lambda b: repr(b))
def test_primitive_flag_spot_check(b):
    arr = b.elements_up_to(3000)
    assert 1 not in arr
    for i, x in enumerate(arr):
        assert not any(y % x == 0 for y in arr[i + 1:])


@pytest.mark.parametrize("b", INFINITE, ids=lambda b: repr(b))
def test_contains_matches_enumeration(b):
    arr = set(b.elements_up_to(5000))
    assert {n for n in range(1, 5001) if b.contains(n)} == arr


@pytest.mark.parametrize("b", INFINITE, ids=lambda b: repr(b))
def test_enumeration_prefix_monotone(b):
    big = b.elements_up_to(20000)
    small = b.elements_up_to(700)
    assert big[: len(small)] == small
    assert list(big) == sorted(set(big))
    assert b.elements_up_to(700) == small


@pytest.mark.parametrize("b", INFINITE, ids=lambda b: repr(b))
@settings(max_examples=25, deadline=None)
@given(m=st.integers(1, 10**4))
def test_truncated_profile_within_oracle(b, m):
    prof = b.gcd_profile(m)
    assert prof.exact
    assert all(m % g == 0 for g in prof.gcds)
    arr = b.elements_array(10**6)
    assert set(np.unique(np.gcd(arr, m)).tolist()) <= set(prof.gcds)


# moduli whose witnesses all sit below 10^6 for every catalog family
smooth_moduli = st.builds(
    lambda e: math.prod(p**k for p, k in zip((2, 3, 5, 7, 11, 13), e)),
    st.tuples(*(st.integers(0, 3) for _ in range(6))),
).filter(lambda m: m <= 10**4)


@pytest.mark.parametrize("b", INFINITE, ids=lambda b: repr(b))
@settings(max_examples=25, deadline=None)
@given(m=smooth_moduli)
def test_oracle_matches_truncation(b, m):
    arr = b.elements_array(10**6)
    assert set(np.unique(np.gcd(arr, m)).tolist()) == set(b.gcd_profile(m).gcds)


def test_predicate_set_is_inexact():
    b = PredicateBSet(lambda n: n % 7 == 3, name="3 mod 7")
    prof = b.gcd_profile(14, horizon=1000)
    assert not prof.exact and prof.horizon == 1000
    assert prof.gcds == (1, 2)


def test_explicit_may_contain_one():
    b = ExplicitBSet([1, 4])
    assert b.gcd_profile(9).gcds == (1,)
    assert b.primitive is False


def test_concurrent_enumeration_is_consistent():
    b = PrimesBSet()
    out = []

    def work(x):
        out.append(b.elements_up_to(x))

    threads = [threading.Thread(target=work, args=(x,)) for x in (10**4, 10**5, 5 * 10**4, 10**4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    ref = b.elements_up_to(10**5)
    for r in out:
        assert ref[: len(r)] == r
