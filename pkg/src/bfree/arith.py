"""Exact integer arithmetic: primitivization, lcm chains, divisors, the B'(q) map.

Finite sets are represented canonically as strictly increasing tuples of
positive Python ints, so set equality is tuple equality.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable

import numpy as np
import sympy

from .errors import FactorizationCapError

FiniteSet = tuple[int, ...]

DIVISOR_CAP = 2**63


def finite_set(elems: Iterable[int]) -> FiniteSet:
    """Canonicalize an iterable of positive integers to a sorted, deduplicated tuple."""
    out = sorted({int(e) for e in elems})
    if out and out[0] < 1:
        raise ValueError(f"finite sets hold positive integers, got {out[0]}")
    return tuple(out)


def primitivize(A: Iterable[int]) -> FiniteSet:
    """Remove every element divisible by a strictly smaller element of ``A``.

    The result is primitive and generates the same set of multiples.

    >>> primitivize([2, 3, 4, 6, 9])
    (2, 3)
    """
    elems = finite_set(A)
    if not elems:
        return ()
    if elems[0] == 1:
        return (1,)
    top = elems[-1]
    if len(elems) > 64 and top <= 20_000_000:
        # mark multiples of kept elements; each element is examined once
        present = np.zeros(top + 1, dtype=bool)
        present[np.asarray(elems, dtype=np.int64)] = True
        covered = np.zeros(top + 1, dtype=bool)
        kept = []
        for a in elems:
            if covered[a]:
                continue
            kept.append(a)
            covered[2 * a :: a] = True
        return tuple(kept)
    kept: list[int] = []
    for a in elems:
        if not any(a % k == 0 for k in kept):
            kept.append(a)
    return tuple(kept)


def is_primitive(A: Iterable[int]) -> bool:
    elems = finite_set(A)
    return len(primitivize(elems)) == len(elems)


def lcm_chain(S: Iterable[int]) -> int:
    """Exact lcm of a non-empty collection (arbitrary precision)."""
    elems = list(S)
    if not elems:
        raise ValueError("empty lcm")
    return math.lcm(*elems)


def b_prime_of_q(B: Iterable[int], q: int) -> FiniteSet:
    """The set ``{b / gcd(b, q) : b in B}``; it contains 1 exactly when some b divides q."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return finite_set(b // math.gcd(b, q) for b in B)


@lru_cache(maxsize=65536)
def _factorint(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(sympy.factorint(n).items()))


def factorize(n: int) -> dict[int, int]:
    """Prime factorization ``{p: e}`` of ``n >= 1``."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    if n == 1:
        return {}
    return dict(_factorint(n))


def prime_factors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in _factorint(n)) if n > 1 else ()


def divisors(n: int, cap: int = DIVISOR_CAP) -> FiniteSet:
    """All positive divisors of ``n``, sorted.

    Raises:
        FactorizationCapError: if ``n`` exceeds ``cap``.
    """
    if n < 1:
        raise ValueError("divisors expects n >= 1")
    if n > cap:
        raise FactorizationCapError("factorization cap exceeded")
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return tuple(sorted(divs))


def valuation(n: int, p: int) -> int:
    """p-adic valuation; ``v_p(0)`` is reported as ``math.inf``."""
    if n == 0:
        return math.inf  # type: ignore[return-value]
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    return bool(sympy.isprime(n))


_PRIME_CACHE: np.ndarray = np.array([2, 3, 5, 7], dtype=np.int64)
_PRIME_CACHE_LIMIT = 10


def primes_up_to(x: int) -> np.ndarray:
    """All primes ``<= x`` as an int64 array (cached odd-only sieve)."""
    global _PRIME_CACHE, _PRIME_CACHE_LIMIT
    if x <= _PRIME_CACHE_LIMIT:
        return _PRIME_CACHE[: np.searchsorted(_PRIME_CACHE, x, side="right")]
    limit = max(x, 2 * _PRIME_CACHE_LIMIT)
    sieve = np.ones(limit // 2 + 1, dtype=bool)  # index i <-> 2i+1
    sieve[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if sieve[i]:
            p = 2 * i + 1
            sieve[p * p // 2 :: p] = False
    odd = 2 * np.flatnonzero(sieve).astype(np.int64) + 1
    odd = odd[odd <= limit]
    _PRIME_CACHE = np.concatenate(([2], odd)).astype(np.int64)
    _PRIME_CACHE_LIMIT = limit
    return _PRIME_CACHE[: np.searchsorted(_PRIME_CACHE, x, side="right")]


def nth_prime_index(p: int) -> int:
    """1-based index of the prime ``p`` (2 -> 1, 3 -> 2, ...)."""
    return int(sympy.primepi(p))


def pairwise_coprime_chain(candidates: Iterable[int], length: int) -> list[int]:
    """Greedy chain of pairwise coprime integers > 1 taken in the given order."""
    chain: list[int] = []
    acc = 1
    for c in candidates:
        c = int(c)
        if c > 1 and math.gcd(c, acc) == 1:
            chain.append(c)
            acc *= c
            if len(chain) >= length:
                break
    return chain
