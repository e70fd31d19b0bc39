import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import mobius

from bfree.arith import primes_up_to, primitivize
from bfree.bset import Ape1BSet, ExplicitBSet, PrimeSquaresBSet, PrimesBSet
from bfree.density import (
    _ie_density,
    _period_density,
    _Splitter,
    count_free,
    davenport_erdos_trace,
    exact_density_of_multiples,
    interval_density,
    light_tails_trace,
    log_density_partial,
    tail_reciprocal_sum,
)
from bfree.errors import ConfigError, DensityCapError


def test_exact_examples():
    assert exact_density_of_multiples([2, 3]).value == Fraction(2, 3)
    assert exact_density_of_multiples([]).value == 0
    brute = sum(1 for n in range(1260) if any(n % b == 0 for b in (36, 10, 21)))
    assert exact_density_of_multiples([36, 10, 21]).value == Fraction(brute, 1260)


def test_exact_density_contains_one():
    assert exact_density_of_multiples([1, 7]).value == 1


def test_exact_density_methods_agree():
    S = (6, 10, 15, 77, 91, 143, 221, 323, 437, 1009)
    period = math.lcm(*S)
    ie = _ie_density(S)
    split = _Splitter(10**5).density(primitivize(S))
    assert ie == split
    small = (4, 6, 9, 10, 35)
    assert _period_density(small, math.lcm(*small)) == _ie_density(small)
    assert exact_density_of_multiples(S).method in ("inclusion-exclusion", "prime-splitting")
    assert period > 1 << 20


def test_exact_density_cap():
    big = [int(p) * int(q) for p, q in zip(primes_up_to(400)[:40], primes_up_to(400)[40:80])]
    with pytest.raises(DensityCapError, match="use interval estimate"):
        exact_density_of_multiples(big + [big[0] * big[1] // 3], split_budget=1, ie_cap=24)


def test_exact_density_prime_products_closed_form():
    ps = [int(p) for p in primes_up_to(300)]
    expected = 1 - math.prod(Fraction(p - 1, p) for p in ps)
    assert exact_density_of_multiples(ps).value == expected


def test_interval_density_examples():
    est = interval_density(PrimesBSet(), "free", 10**6)
    assert est.count == 1
    est = interval_density(ExplicitBSet([2, 3]), "multiples", 600)
    assert est.count == 400 and est.value == 400 / 600


def test_squarefree_density_against_euler_product():
    euler = math.prod(1 - 1 / p**2 for p in primes_up_to(3163).tolist())
    est = interval_density(PrimeSquaresBSet(), "free", 10**7)
    assert abs(est.value - euler) <= 1e-3


def test_log_density_of_even_numbers():
    assert abs(log_density_partial(ExplicitBSet([2]), 10**6).value - 0.5) <= 0.02


def test_log_density_of_primes_approaches_one():
    est = log_density_partial(PrimesBSet(), 10**6)
    assert 0.9 < est.value < 1


def _log_squarefree_oracle(N):
    # sum over squarefree n <= N of 1/n = sum_{d <= sqrt N} mu(d)/d^2 * H(N // d^2)
    H = np.concatenate(([0.0], np.cumsum(1.0 / np.arange(1, N + 1))))
    s = sum(int(mobius(d)) / d**2 * H[N // d**2] for d in range(1, math.isqrt(N) + 1))
    return (H[N] - s) / math.log(N)


def test_log_density_prime_squares_against_mobius_oracle():
    N = 10**6
    assert abs(log_density_partial(PrimeSquaresBSet(), N).value - _log_squarefree_oracle(N)) < 1e-9


@pytest.mark.xfail(strict=True, reason="partial log-density converges like 1/log N; off by about 0.034 at N = 10^6")
def test_log_density_prime_squares_near_limit():
    assert abs(log_density_partial(PrimeSquaresBSet(), 10**6).value - (1 - 6 / math.pi**2)) <= 0.02


def test_davenport_erdos_examples():
    tr = davenport_erdos_trace(ExplicitBSet([2, 3, 5]), [2, 3, 5])
    assert [v for _, v in tr.monotone_trace] == [Fraction(1, 2), Fraction(2, 3), Fraction(11, 15)]
    assert tr.value == Fraction(11, 15)
    with pytest.raises(ConfigError):
        davenport_erdos_trace(ExplicitBSet([2]), [5, 3])


def test_davenport_erdos_ape1_approaches_interval_estimate():
    tr = davenport_erdos_trace(Ape1BSet(), [10, 30, 100, 300, 1000])
    vals = [float(v) for _, v in tr.monotone_trace]
    assert vals == sorted(vals)
    upper = interval_density(Ape1BSet(), "multiples", 10**7).value
    assert vals[-1] <= upper + 0.01
    # the truncations close at least a third of the remaining gap per decade
    assert upper - vals[-1] < 0.1


def test_light_tails_examples():
    sq = light_tails_trace(PrimeSquaresBSet(), [10, 100, 1000, 10**5], 10**6)
    for K, v in sq:
        assert v <= tail_reciprocal_sum(PrimeSquaresBSet(), K, 10**6) + 1e-12
    assert sq[-1][1] < 1e-3 and [v for _, v in sq] == sorted((v for _, v in sq), reverse=True)
    pr = light_tails_trace(PrimesBSet(), [10, 100, 1000], 10**7)
    assert all(v > 0.75 for _, v in pr)
    assert light_tails_trace(ExplicitBSet([4, 6, 9]), [9, 20], 1000) == [(9, 0.0), (20, 0.0)]


small_sets = st.lists(st.integers(1, 60), min_size=1, max_size=9)


@settings(max_examples=60, deadline=None)
@given(small_sets)
def test_density_primitivization_invariant(S):
    assert exact_density_of_multiples(S).value == exact_density_of_multiples(primitivize(S)).value


@settings(max_examples=60, deadline=None)
@given(small_sets, small_sets)
def test_density_monotone(S, extra):
    assert exact_density_of_multiples(S).value <= exact_density_of_multiples(S + extra).value


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(2, 400), min_size=1, max_size=14))
def test_splitter_matches_inclusion_exclusion(S):
    prim = primitivize(S)
    assert _Splitter(10**6).density(prim) == _ie_density(prim)


@settings(max_examples=40, deadline=None)
@given(small_sets, st.integers(1, 5000))
def test_partition_identity(S, N):
    B = ExplicitBSet(S)
    m = interval_density(B, "multiples", N)
    f = interval_density(B, "free", N)
    assert m.count + f.count == N
    brute = sum(1 for n in range(1, N + 1) if any(n % b == 0 for b in S))
    assert m.count == brute


@pytest.mark.parametrize("B", [PrimesBSet(), PrimeSquaresBSet(), Ape1BSet()], ids=repr)
def test_partition_identity_large(B):
    N = 10**6 + 17
    assert interval_density(B, "multiples", N).count + interval_density(B, "free", N).count == N


def test_count_free_segments(monkeypatch):
    import bfree.density as dens

    ref = count_free(PrimeSquaresBSet(), 100_000)
    monkeypatch.setattr(dens, "_COUNT_SEGMENT", 7_777)
    assert count_free(PrimeSquaresBSet(), 100_000) == ref
