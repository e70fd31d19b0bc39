import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bfree.arith import lcm_chain, primitivize
from bfree.bset import CascadeBSet, ExplicitBSet, Power2BSet, PrimesBSet, QFamilyBSet, TwoThreeBSet
from bfree.filtration import (
    build_filtration,
    check_shadow_goes_back,
    compute_dk,
    detect_a_infinity,
    mef_descriptor,
    persistent_values,
)
from bfree.sieve import _mark_free


def cascade_blocks_by_listing(p, q, K):
    """Blocks written out term by term: B_1 = {p1 q1}, and B_{k+1} from B_k by the recursive rule."""
    blocks = [[p[0] * q[0]], [p[0] * p[1] ** 2, p[0] * q[1] ** 2, q[0] * q[1] ** 2]]
    for k in range(2, K):
        P = math.prod(p[:k])
        Pm = math.prod(p[: k - 1])
        new = [P * p[k] ** 2, P * q[k] ** 2, Pm * q[k - 1] * q[k] ** 2]
        drop = {Pm * p[k - 1] ** 2, Pm * q[k - 1] ** 2}
        new += [b * q[k] ** 2 // q[k - 1] ** 2 for b in blocks[-1] if b not in drop]
        blocks.append(new)
    return blocks


def test_cascade_blocks_match_listing():
    B = CascadeBSet()
    ps, qs = B.pq(8)
    listing = cascade_blocks_by_listing(ps, qs, 8)
    for k in range(1, 9):
        assert B.block(k) == tuple(sorted(listing[k - 1]))


def shadow_by_truncation(blocks, S):
    s = lcm_chain(S)
    return tuple(sorted({math.gcd(b, s) for blk in blocks for b in blk}))


def test_two_three_native_stages():
    T = build_filtration(TwoThreeBSet(), depth=4)
    assert T.mode == "native"
    for st in T.stages:
        assert st.new_elems == (2, 3)
        assert st.c == 6


@pytest.mark.xfail(strict=True, reason="prefix stages start at {10}, where gcd(21, 10) = 1 puts 1 into the shadow")
def test_two_three_prefix_shadow_is_two_three():
    T = build_filtration(TwoThreeBSet(), depth=4, mode="prefix")
    assert all(st.new_elems == (2, 3) for st in T.stages)


def test_q_family_shadow():
    B = QFamilyBSet()
    T = build_filtration(B, depth=4)
    ps = B.stream.take(4)
    for st in T.stages:
        # pairs p_i p_j with i, j beyond the stage are coprime to s_k, so 1 is in the shadow
        assert set(st.A) == set(st.S) | set(ps[: st.k]) | {B.q, 1}


@pytest.mark.xfail(strict=True, reason="1 = gcd(p_i p_j, s_k) for i, j > k also lies in the shadow")
def test_q_family_shadow_without_one():
    B = QFamilyBSet()
    T = build_filtration(B, depth=4)
    ps = B.stream.take(4)
    for st in T.stages:
        assert set(st.A) == set(st.S) | set(ps[: st.k]) | {B.q}


def test_saturated_explicit_pair():
    T = build_filtration(ExplicitBSet([2, 3]), depth=1, mode="saturated")
    st = T.stages[0]
    assert st.S == (2, 3) and st.A == (2, 3) and T.complete


def test_dk_two_three():
    T = compute_dk(build_filtration(TwoThreeBSet(), depth=5))
    assert [d.value for d in T.dk] == [6] * 5
    assert all(d.stabilized for d in T.dk)


def test_dk_cascade_against_block_truncation():
    B = CascadeBSet()
    K = 5
    T = compute_dk(build_filtration(B, depth=K), lookahead=4)
    ps, qs = B.pq(K + 6)
    blocks = cascade_blocks_by_listing(ps, qs, K + 6)
    for st in T.stages + T.lookahead_stages[:3]:
        assert st.A == shadow_by_truncation(blocks, st.S)
    for k, d in enumerate(T.dk, start=1):
        expected = ps[0] * qs[0] * math.prod(ps[i] ** 2 * qs[i] for i in range(1, k))
        assert d.value == expected, k
        assert T.stages[k - 1].s // d.value == math.prod(qs[1:k])


@pytest.mark.xfail(strict=True, reason="p1 p2^2 stays primitive in every later shadow, so p2^2 divides d_k for k >= 2")
def test_dk_cascade_equals_product_of_stream_primes():
    B = CascadeBSet()
    T = compute_dk(build_filtration(B, depth=4))
    ps, qs = B.pq(4)
    for k, d in enumerate(T.dk, start=1):
        assert d.value == math.prod(ps[:k]) * math.prod(qs[:k])


@pytest.mark.xfail(strict=True, reason="1 lies in every shadow of this family, so c_k = d_k = 1")
def test_dk_q_family_equals_lcm():
    T = compute_dk(build_filtration(QFamilyBSet(), depth=5))
    assert all(st.s == d.value for st, d in zip(T.stages, T.dk))


def test_dk_q_family_is_one():
    T = compute_dk(build_filtration(QFamilyBSet(), depth=5))
    assert all(d.value == 1 and d.stabilized for d in T.dk)


def test_a_infinity_examples():
    T = build_filtration(TwoThreeBSet(), depth=5)
    assert persistent_values(T) == (2, 3)
    Tq = build_filtration(QFamilyBSet(), depth=6)
    B = Tq.B
    per = persistent_values(Tq)
    assert {B.q, *B.stream.take(5)} <= set(per)
    Tp = build_filtration(Power2BSet(), depth=6)
    assert persistent_values(Tp) == ()
    Tc = build_filtration(CascadeBSet(), depth=6)
    ps, qs = Tc.B.pq(6)
    expected = {qs[0]} | {math.prod(ps[:j]) * qs[j] for j in range(1, 5)}
    assert expected <= set(persistent_values(Tc))
    with pytest.raises(ValueError):
        detect_a_infinity(build_filtration(TwoThreeBSet(), depth=2))


def test_mef_examples():
    T = compute_dk(build_filtration(TwoThreeBSet(), depth=6))
    mef = mef_descriptor(T)
    assert mef.label == "Z/6Z" and mef.order == 6 and not mef.tentative
    assert {(c.p, c.valuation, c.status) for c in mef.components} == {(2, 1, "capped"), (3, 1, "capped")}
    T2 = compute_dk(build_filtration(ExplicitBSet([2, 3]), depth=1, mode="saturated"))
    assert mef_descriptor(T2).label == "Z/6Z" and mef_descriptor(T2).h_int_trivial


def test_explicit_pair_has_period_six():
    bits = _mark_free(np.array([2, 3]), 1, 120)
    period = next(p for p in range(1, 61) if np.array_equal(bits[:-p], bits[p:]))
    assert period == 6


def test_power2_full_window():
    T = compute_dk(build_filtration(Power2BSet(), depth=6))
    assert all(st.s == d.value and d.certified for st, d in zip(T.stages, T.dk))
    assert mef_descriptor(T).h_int_trivial


def test_primes_prefix():
    T = compute_dk(build_filtration(PrimesBSet(), depth=6))
    assert T.mode == "prefix"
    assert all(1 in st.A for st in T.stages)
    assert mef_descriptor(T).label == "trivial"


explicit_B = st.lists(st.integers(2, 200), min_size=1, max_size=12).map(lambda xs: ExplicitBSet(primitivize(xs)))


@settings(max_examples=100, deadline=None)
@given(explicit_B, st.sampled_from(["prefix", "saturated"]))
def test_divisibility_chains(B, mode):
    T = compute_dk(build_filtration(B, depth=len(B.elements), mode=mode))
    ds = [d.value for d in T.dk]
    for st, d in zip(T.stages, ds):
        assert d % st.c == 0 and st.s % d == 0
    for (a, da), (b, db) in zip(zip(T.stages, ds), zip(T.stages[1:], ds[1:])):
        assert da == math.gcd(a.s, db)
        assert (b.s // db) % (a.s // da) == 0
    assert all(d.certified for d in T.dk)


@settings(max_examples=60, deadline=None)
@given(explicit_B)
def test_shadow_goes_back_and_stage_invariants(B):
    T = build_filtration(B, depth=len(B.elements), mode="prefix")
    assert check_shadow_goes_back(T)
    for st in T.stages:
        assert set(st.S) <= set(st.A)
        assert all(st.s % a == 0 for a in st.A)
        assert st.c == lcm_chain(st.primA) and st.s % st.c == 0


@settings(max_examples=60, deadline=None)
@given(explicit_B)
def test_saturated_fixpoint(B):
    T = build_filtration(B, depth=len(B.elements), mode="saturated")
    for st in T.stages:
        assert {a for a in st.A if B.contains(a)} == set(st.S)


@settings(max_examples=40, deadline=None)
@given(explicit_B)
def test_free_sets_of_shadows_increase(B):
    T = build_filtration(B, depth=len(B.elements), mode="prefix")
    masks = [_mark_free(np.asarray(st.A, dtype=np.int64), 0, 10**4) for st in T.stages]
    for a, b in zip(masks, masks[1:]):
        assert not (a & ~b).any()


def test_q_family_shadow_goes_back():
    T = build_filtration(QFamilyBSet(), depth=6)
    assert check_shadow_goes_back(T)
