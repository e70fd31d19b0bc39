"""Densities of sets of multiples.

Exact rational densities for finite S, counting estimates on ``[1, N]`` for
arbitrary B, logarithmic partial sums, and the two monotone traces used as
evidence for infinite sets (truncations from below, tails from above).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .arith import lcm_chain, primitivize, factorize
from .bset import BSet
from .errors import ConfigError, DensityCapError
from .sieve import _mark_free

DEFAULT_N = 10**7
IE_CAP = 24
PERIOD_CAP = 10**8
SMALL_PERIOD = 1 << 20
SPLIT_BUDGET = 200_000
_COUNT_SEGMENT = 10**7


@dataclass(frozen=True)
class DensityEstimate:
    value: Fraction | float
    kind: str  # exact | interval_count | log_partial | davenport_erdos_limit
    horizon: int | None = None
    monotone_trace: list[tuple[int, Fraction | float]] | None = None
    count: int | None = None
    method: str | None = None

    def __float__(self) -> float:
        return float(self.value)


# ---------------------------------------------------------------------------
# exact densities
# ---------------------------------------------------------------------------


def _ie_density(prim: Sequence[int]) -> Fraction:
    terms: dict[int, int] = {}
    for a in prim:
        new = dict(terms)
        new[a] = new.get(a, 0) + 1
        for l, c in terms.items():
            m = math.lcm(l, a)
            new[m] = new.get(m, 0) - c
        terms = {l: c for l, c in new.items() if c}
    return sum((Fraction(c, l) for l, c in terms.items()), Fraction(0))


def _period_density(prim: Sequence[int], period: int) -> Fraction:
    free = _mark_free(np.asarray(prim, dtype=np.int64), 0, period - 1)
    return Fraction(period - int(free.sum()), period)


class _Splitter:
    """Exact d(M_S) by conditioning on the p-adic valuation of n.

    For the prime p most common in S with largest exponent E,
    ``d(M_S) = sum_{e<E} (1 - 1/p) p^-e d(M_{T_e}) + p^-E d(M_{T_E})`` where
    ``T_e = prim{t / p^v_p(t) : v_p(t) <= e}``.  Sets whose elements split into
    groups with disjoint prime supports are handled as independent factors.
    """

    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0
        self.memo: dict[tuple[int, ...], Fraction] = {}

    def density(self, S: tuple[int, ...]) -> Fraction:
        if not S:
            return Fraction(0)
        if S[0] == 1:
            return Fraction(1)
        hit = self.memo.get(S)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.nodes > self.budget:
            raise DensityCapError("use interval estimate")
        comps = _components(S)
        if len(comps) > 1:
            keep = Fraction(1)
            for c in comps:
                keep *= 1 - self.density(c)
            out = 1 - keep
        elif len(S) <= 10:
            out = _ie_density(S)
        else:
            out = self._split(S)
        self.memo[S] = out
        return out

    def _split(self, S: tuple[int, ...]) -> Fraction:
        facs = {t: factorize(t) for t in S}
        freq = Counter(p for f in facs.values() for p in f)
        p = max(freq, key=lambda q: (freq[q], -q))
        E = max(f.get(p, 0) for f in facs.values())
        total = Fraction(0)
        for e in range(E + 1):
            T = primitivize(t // p ** facs[t].get(p, 0) for t in S if facs[t].get(p, 0) <= e)
            w = Fraction(1, p**E) if e == E else Fraction(p - 1, p ** (e + 1))
            total += w * self.density(T)
        return total


def _components(S: tuple[int, ...]) -> list[tuple[int, ...]]:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    primes_of = {t: list(factorize(t)) for t in S}
    for ps in primes_of.values():
        for p in ps:
            parent.setdefault(p, p)
        for p in ps[1:]:
            ra, rb = find(ps[0]), find(p)
            if ra != rb:
                parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for t, ps in primes_of.items():
        groups.setdefault(find(ps[0]), []).append(t)
    return [tuple(sorted(g)) for g in groups.values()]


def exact_density_of_multiples(S: Iterable[int], ie_cap: int = IE_CAP, period_cap: int = PERIOD_CAP,
                               split_budget: int = SPLIT_BUDGET) -> DensityEstimate:
    """Exact rational ``d(M_S)`` for a finite S.

    Raises:
        DensityCapError: if no exact method fits its budget ("use interval estimate").
    """
    prim = primitivize(S)
    if not prim:
        return DensityEstimate(Fraction(0), "exact", 1, method="empty")
    if prim[0] == 1:
        return DensityEstimate(Fraction(1), "exact", 1, method="trivial")
    period = lcm_chain(prim)
    if period <= SMALL_PERIOD:
        return DensityEstimate(_period_density(prim, period), "exact", period, method="period")
    if len(prim) <= min(16, ie_cap):
        return DensityEstimate(_ie_density(prim), "exact", period, method="inclusion-exclusion")
    try:
        value = _Splitter(split_budget).density(prim)
        return DensityEstimate(value, "exact", period, method="prime-splitting")
    except DensityCapError:
        pass
    if len(prim) <= ie_cap:
        return DensityEstimate(_ie_density(prim), "exact", period, method="inclusion-exclusion")
    if period <= period_cap:
        return DensityEstimate(_period_density(prim, period), "exact", period, method="period")
    raise DensityCapError("use interval estimate")


# ---------------------------------------------------------------------------
# estimates on [1, N]
# ---------------------------------------------------------------------------


def count_free(B: BSet | np.ndarray, N: int) -> int:
    """``card(F_B ∩ [1, N])`` by segmented sieving."""
    elems = B if isinstance(B, np.ndarray) else B.elements_array(N)
    total = 0
    for lo in range(1, N + 1, _COUNT_SEGMENT):
        hi = min(lo + _COUNT_SEGMENT - 1, N)
        total += int(_mark_free(elems, lo, hi).sum())
    return total


def interval_density(B: BSet, target: str, N: int = DEFAULT_N) -> DensityEstimate:
    """``card(target ∩ [1, N]) / N`` with the exact count attached."""
    if N < 1:
        raise ConfigError("N must be >= 1")
    if target not in ("multiples", "free"):
        raise ConfigError("target must be 'multiples' or 'free'")
    free = count_free(B, N)
    count = free if target == "free" else N - free
    return DensityEstimate(count / N, "interval_count", N, count=count)


def log_density_partial(B: BSet, N: int = 10**6) -> DensityEstimate:
    """``(1 / log N) * sum of 1/n over n in M_B ∩ [1, N]``."""
    if N < 2:
        raise ConfigError("N must be >= 2")
    elems = B.elements_array(N)
    acc = 0.0
    count = 0
    for lo in range(1, N + 1, _COUNT_SEGMENT):
        hi = min(lo + _COUNT_SEGMENT - 1, N)
        mult = ~_mark_free(elems, lo, hi)
        n = np.flatnonzero(mult).astype(np.float64) + lo
        acc += float(np.sum(1.0 / n))
        count += len(n)
    return DensityEstimate(acc / math.log(N), "log_partial", N, count=count)


def davenport_erdos_trace(B: BSet, cutoffs: Sequence[int], **caps) -> DensityEstimate:
    """Exact ``d(M_{B ∩ [1, K]})`` for each cutoff; the last value bounds ``δ(M_B)`` from below."""
    cutoffs = [int(k) for k in cutoffs]
    if not cutoffs:
        raise ConfigError("need at least one cutoff")
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ConfigError("cutoffs must be increasing")
    trace = []
    for K in cutoffs:
        elems = B.elements_up_to(K) if K >= 1 else ()
        trace.append((K, exact_density_of_multiples(elems, **caps).value))
    return DensityEstimate(trace[-1][1], "davenport_erdos_limit", cutoffs[-1], monotone_trace=trace)


def light_tails_trace(B: BSet, cutoffs: Sequence[int], N: int = DEFAULT_N) -> list[tuple[int, float]]:
    """For each K, the share of ``[1, N]`` divisible by some ``b in B`` with ``K < b <= N``."""
    elems = B.elements_array(N)
    out = []
    for K in cutoffs:
        tail = elems[elems > K]
        if len(tail) == 0:
            out.append((int(K), 0.0))
            continue
        out.append((int(K), (N - count_free(tail, N)) / N))
    return out


def tail_reciprocal_sum(B: BSet, K: int, N: int) -> float:
    """``sum 1/b`` over ``K < b <= N``: a union bound for the tail density."""
    elems = B.elements_array(N)
    tail = elems[elems > K].astype(np.float64)
    return float(np.sum(1.0 / tail))
