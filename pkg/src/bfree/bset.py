"""Models of the set B: explicit finite lists and structured infinite families.

Every model enumerates ``B ∩ [1, x]`` exactly.  Most families also know the
full set ``{gcd(b, m) : b in B}`` for any modulus ``m`` through a structural
argument (an *oracle*); when no oracle exists the profile is computed over a
truncation and flagged ``exact=False``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .arith import (
    FiniteSet,
    factorize,
    finite_set,
    is_prime,
    is_primitive,
    prime_factors,
    primes_up_to,
)
from .errors import ConfigError

DEFAULT_HORIZON = 10**7


@dataclass(frozen=True)
class GcdProfile:
    modulus: int
    gcds: FiniteSet
    exact: bool
    horizon: int | None = None  # enumeration bound used when not exact


class BSet:
    """Base class. Subclasses implement :meth:`_generate` and optionally :meth:`_oracle`."""

    family: str = "abstract"
    is_finite: bool = False
    # description of a scaled Behrend subset q*A ⊆ B, when the family has one
    scaled_behrend: str | None = None

    def __init__(self, params: dict[str, Any] | None = None, primitive: bool | None = True):
        self.params = dict(params or {})
        self.primitive = primitive
        self._lock = threading.Lock()
        self._cache = np.zeros(0, dtype=np.int64)
        self._cache_x = 0

    # -- enumeration -------------------------------------------------------
    def _generate(self, x: int) -> np.ndarray:
        raise NotImplementedError

    def elements_array(self, x: int) -> np.ndarray:
        """``B ∩ [1, x]`` as a sorted int64 array (memoized)."""
        if x < 1:
            raise ValueError("x must be >= 1")
        with self._lock:
            if x > self._cache_x:
                arr = np.unique(np.asarray(self._generate(x), dtype=np.int64))
                arr = arr[(arr >= 1) & (arr <= x)]
                self._cache, self._cache_x = arr, x
            cache = self._cache
        return cache[: np.searchsorted(cache, x, side="right")]

    def elements_up_to(self, x: int) -> FiniteSet:
        return tuple(int(v) for v in self.elements_array(x))

    def first_elements(self, k: int, start: int = 64) -> FiniteSet:
        """The ``k`` smallest elements (fewer if B is finite and smaller)."""
        x = start
        while True:
            arr = self.elements_array(x)
            if len(arr) >= k:
                return tuple(int(v) for v in arr[:k])
            if self.is_finite and x >= self.max_element():
                return tuple(int(v) for v in arr)
            x *= 4

    def max_element(self) -> int:
        raise NotImplementedError("infinite family")

    def contains(self, n: int) -> bool:
        if n < 1:
            return False
        arr = self.elements_array(n)
        return len(arr) > 0 and int(arr[-1]) == n

    # -- gcd profile ---------------------------------------------------------
    def _oracle(self, m: int) -> set[int] | None:
        return None

    def gcd_profile(self, m: int, horizon: int = DEFAULT_HORIZON) -> GcdProfile:
        """``{gcd(b, m) : b in B}``; exact whenever the family ships an oracle."""
        if m < 1:
            raise ValueError("m must be >= 1")
        found = self._oracle(m)
        if found is not None:
            return GcdProfile(m, finite_set(found), True)
        arr = self.elements_array(horizon)
        if m < 1 << 62:
            vals = {int(g) for g in np.unique(np.gcd(arr, m))}
        else:
            vals = {math.gcd(int(b), m) for b in arr}
        return GcdProfile(m, finite_set(vals), False, horizon)

    # -- filtrations -------------------------------------------------------
    def native_stages(self, depth: int) -> list[FiniteSet] | None:
        """Family-specific block filtration, if the family defines one."""
        return None

    def config(self) -> dict[str, Any]:
        return {"family": self.family, "params": _jsonable_params(self.params)}

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"BSet[{self.family}]({args})"


def _jsonable_params(params: dict[str, Any]) -> dict[str, Any]:
    out = {}
    for k, v in sorted(params.items()):
        out[k] = list(v) if isinstance(v, (tuple, list)) else v
    return out


# ---------------------------------------------------------------------------
# explicit and predicate-backed sets
# ---------------------------------------------------------------------------


class ExplicitBSet(BSet):
    family = "explicit"
    is_finite = True

    def __init__(self, elements: Iterable[int]):
        elems = finite_set(elements)
        if not elems:
            raise ConfigError("explicit B must be non-empty")
        super().__init__({"elements": list(elems)}, primitive=is_primitive(elems))
        self.elements = elems
        self._set = frozenset(elems)

    def _generate(self, x: int) -> np.ndarray:
        return np.asarray([e for e in self.elements if e <= x], dtype=np.int64)

    def max_element(self) -> int:
        return self.elements[-1]

    def contains(self, n: int) -> bool:
        return n in self._set

    def _oracle(self, m: int) -> set[int]:
        return {math.gcd(b, m) for b in self.elements}


class PredicateBSet(BSet):
    """``B = {n >= 1 : predicate(n)}``; no structural oracle, so profiles are truncated."""

    family = "predicate"

    def __init__(self, predicate: Callable[[np.ndarray], np.ndarray], name: str = "predicate",
                 primitive: bool | None = None):
        super().__init__({"name": name}, primitive=primitive)
        self.predicate = predicate

    def _generate(self, x: int) -> np.ndarray:
        n = np.arange(1, x + 1, dtype=np.int64)
        return n[np.asarray(self.predicate(n), dtype=bool)]


# ---------------------------------------------------------------------------
# prime-based families
# ---------------------------------------------------------------------------


class PrimesBSet(BSet):
    family = "primes"
    scaled_behrend = "B itself: the primes form a Behrend set (sum of 1/p diverges)"

    def _generate(self, x: int) -> np.ndarray:
        return primes_up_to(x)

    def contains(self, n: int) -> bool:
        return n >= 2 and is_prime(n)

    def _oracle(self, m: int) -> set[int]:
        return {1, *prime_factors(m)}


class OddPrimesBSet(PrimesBSet):
    family = "odd-primes"
    scaled_behrend = "B itself: the odd primes form a Behrend set"

    def _generate(self, x: int) -> np.ndarray:
        p = primes_up_to(x)
        return p[p > 2]

    def contains(self, n: int) -> bool:
        return n > 2 and is_prime(n)

    def _oracle(self, m: int) -> set[int]:
        return {1, *(p for p in prime_factors(m) if p > 2)}


class PrimeSquaresBSet(BSet):
    family = "prime-squares"

    def _generate(self, x: int) -> np.ndarray:
        p = primes_up_to(math.isqrt(x))
        return p * p

    def contains(self, n: int) -> bool:
        r = math.isqrt(n)
        return r * r == n and is_prime(r)

    def _oracle(self, m: int) -> set[int]:
        return {1, *(math.gcd(p * p, m) for p in prime_factors(m))}


class PuncturedPrimesBSet(BSet):
    """All primes except ``p_1, ..., p_K``, where ``p_k`` is the smallest prime
    in ``r_k + m_k Z`` exceeding ``2^(k+1)`` and ``(m_k, r_k)`` runs through the
    coprime pairs of naturals ordered by ``m + r``, then by ``m``."""

    family = "punctured-primes"
    scaled_behrend = "B itself: removing a set of upper density <= 1/2 from the primes leaves d(M_B) = 1"

    def __init__(self, K: int = 20):
        if K < 0:
            raise ConfigError("K must be >= 0")
        super().__init__({"K": K})
        self.pairs = list(_coprime_pairs(K))
        self.removed = tuple(_punctured_prime(k, m, r) for k, (m, r) in enumerate(self.pairs, start=1))
        self._removed_set = frozenset(self.removed)

    def _generate(self, x: int) -> np.ndarray:
        p = primes_up_to(x)
        drop = np.asarray(sorted(self._removed_set), dtype=np.int64)
        return p[~np.isin(p, drop)]

    def contains(self, n: int) -> bool:
        return n >= 2 and n not in self._removed_set and is_prime(n)

    def _oracle(self, m: int) -> set[int]:
        return {1, *(p for p in prime_factors(m) if p not in self._removed_set)}


def _coprime_pairs(count: int):
    s, produced = 2, 0
    while produced < count:
        for m in range(1, s):
            r = s - m
            if math.gcd(m, r) == 1:
                yield (m, r)
                produced += 1
                if produced == count:
                    return
        s += 1


def _punctured_prime(k: int, m: int, r: int) -> int:
    bound = 2 ** (k + 1)
    t = bound + 1
    t += (r - t) % m
    while not is_prime(t):
        t += m
    return t


class Mod12BSet(BSet):
    """``{4, 6} ∪ {p_k : k in Z}`` with ``p_k`` a prime divisor of ``5 + 12k``
    that is not ``±1 mod 12``.

    Every prime ``≡ 5, 7 (mod 12)`` equals ``|5 + 12k|`` for some k, and every
    admissible ``p_k`` is ``≡ 5, 7 (mod 12)``, so the set does not depend on
    which admissible divisor is chosen.
    """

    family = "mod12"
    scaled_behrend = "the primes ≡ 5, 7 mod 12 (divergent reciprocal sum, hence Behrend)"

    def _generate(self, x: int) -> np.ndarray:
        p = primes_up_to(x)
        p = p[(p % 12 == 5) | (p % 12 == 7)]
        head = np.asarray([v for v in (4, 6) if v <= x], dtype=np.int64)
        return np.concatenate((head, p))

    def contains(self, n: int) -> bool:
        return n in (4, 6) or (n % 12 in (5, 7) and is_prime(n))

    def _oracle(self, m: int) -> set[int]:
        return {math.gcd(4, m), math.gcd(6, m), 1, *(p for p in prime_factors(m) if p % 12 in (5, 7))}

    def native_stages(self, depth: int) -> list[FiniteSet]:
        # b_0 = 4, b_1 = 6, then the primes in increasing order; S_k = {b_0, ..., b_k}
        primes = [v for v in self.first_elements(depth + 2) if v not in (4, 6)]
        return [finite_set((4, 6, *primes[: k - 1])) for k in range(1, depth + 1)]


def mod12_prime(k: int) -> int:
    """Smallest prime divisor of ``|5 + 12k|`` that is not ``±1 mod 12``."""
    for p in prime_factors(abs(5 + 12 * k)):
        if p % 12 not in (1, 11):
            return p
    raise AssertionError("unreachable: 5 mod 12 has a prime factor ≡ 5, 7 mod 12")


class Ape1BSet(BSet):
    """``⋃_{i <= I} p_i^2 (P \\ {p_i})``; ``indices=None`` takes all i."""

    family = "ape1"
    scaled_behrend = "4·(P \\ {2}): a rescaled copy of the Behrend set of odd primes"

    def __init__(self, indices: int | None = None):
        if indices is not None and indices < 1:
            raise ConfigError("indices must be >= 1")
        super().__init__({"indices": indices})
        self.indices = indices

    def _squares(self, x: int) -> np.ndarray:
        p = primes_up_to(math.isqrt(max(x // 2, 1)))
        return p if self.indices is None else p[: self.indices]

    def _generate(self, x: int) -> np.ndarray:
        parts = []
        for p in self._squares(x):
            p = int(p)
            q = primes_up_to(x // (p * p))
            q = q[q != p]
            parts.append(p * p * q)
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def _allowed(self, p: int) -> bool:
        return self.indices is None or int(np.searchsorted(primes_up_to(max(p, 2)), p)) < self.indices

    def contains(self, n: int) -> bool:
        f = factorize(n)
        if len(f) != 2 or sorted(f.values()) != [1, 2]:
            return False
        p = next(q for q, e in f.items() if e == 2)
        return self._allowed(p)

    def _oracle(self, m: int) -> set[int]:
        F = set(prime_factors(m))
        out: set[int] = set()
        # some admissible p does not divide m
        if self.indices is None or any(int(p) not in F for p in primes_up_to(_nth_prime_bound(self.indices))[: self.indices]):
            out |= {1} | F
        for p in F:
            if not self._allowed(p):
                continue
            g = math.gcd(p * p, m)
            out |= {g} | {g * q for q in F if q != p}
        return out


def _nth_prime_bound(n: int) -> int:
    if n < 6:
        return 15
    return int(n * (math.log(n) + math.log(math.log(n)))) + 1


# ---------------------------------------------------------------------------
# stream-based families (two-three, cascade, q-family, power2)
# ---------------------------------------------------------------------------


class _Streams:
    """Two disjoint prime streams p, q: explicit prefixes, then the remaining primes
    (>= ``start`` and above every prefix entry) dealt to whichever stream is shorter,
    ties going to p."""

    def __init__(self, p_prefix: Sequence[int], q_prefix: Sequence[int], start: int, exclude: Sequence[int] = ()):
        p_prefix, q_prefix = [int(v) for v in p_prefix], [int(v) for v in q_prefix]
        used = p_prefix + q_prefix + [int(v) for v in exclude]
        if len(set(used)) != len(used):
            raise ConfigError("stream primes must be pairwise different")
        for v in p_prefix + q_prefix:
            if v < start or not is_prime(v):
                raise ConfigError(f"{v} is not an admissible prime (need prime >= {start})")
        self.p_prefix, self.q_prefix = p_prefix, q_prefix
        self.floor = max(used + [start - 1])
        self.exclude = set(int(v) for v in exclude)
        self._p: list[int] = list(p_prefix)
        self._q: list[int] = list(q_prefix)
        self._bound = self.floor

    def _extend(self, bound: int) -> None:
        if bound <= self._bound:
            return
        pool = primes_up_to(bound)
        pool = pool[pool > self._bound]
        for v in pool.tolist():
            if v in self.exclude:
                continue
            (self._p if len(self._p) <= len(self._q) else self._q).append(v)
        self._bound = bound

    def take(self, k: int) -> tuple[list[int], list[int]]:
        bound = max(self._bound, 64)
        while len(self._p) < k or len(self._q) < k:
            bound *= 2
            self._extend(bound)
        return self._p[:k], self._q[:k]

    def up_to(self, bound: int) -> tuple[list[int], list[int]]:
        self._extend(bound)
        return [v for v in self._p if v <= bound], [v for v in self._q if v <= bound]

    def index(self, r: int) -> tuple[str, int] | None:
        """('p' | 'q', 1-based index) of a prime, or None if in neither stream."""
        self._extend(r)
        for name, seq in (("p", self._p), ("q", self._q)):
            if r in seq:
                return name, seq.index(r) + 1
        return None


class TwoThreeBSet(BSet):
    """``{36} ∪ {2 p_i} ∪ {3 q_i}`` with pairwise different primes ``p_i, q_i >= 5``."""

    family = "two-three"
    scaled_behrend = "2·{p_i}: the p-stream holds every other prime >= 5, so sum 1/p_i diverges"

    def __init__(self, p: Sequence[int] = (), q: Sequence[int] = ()):
        super().__init__({"p": list(p), "q": list(q)})
        self.streams = _Streams(p, q, start=5)

    def _generate(self, x: int) -> np.ndarray:
        ps, qs = self.streams.up_to(max(x // 2, 5))
        vals = [36] + [2 * v for v in ps] + [3 * v for v in qs]
        return np.asarray([v for v in vals if v <= x], dtype=np.int64)

    def contains(self, n: int) -> bool:
        if n == 36:
            return True
        for c, name in ((2, "p"), (3, "q")):
            if n % c == 0 and is_prime(n // c):
                hit = self.streams.index(n // c)
                if hit and hit[0] == name:
                    return True
        return False

    def _oracle(self, m: int) -> set[int]:
        out = {math.gcd(36, m), math.gcd(2, m), math.gcd(3, m)}
        for r in prime_factors(m):
            hit = self.streams.index(r) if r >= 5 else None
            if hit:
                # gcd(2 p_i, m) = gcd(2, m) p_i and gcd(3 q_i, m) = gcd(3, m) q_i
                out.add(math.gcd(2 if hit[0] == "p" else 3, m) * r)
        return out

    def native_stages(self, depth: int) -> list[FiniteSet]:
        ps, qs = self.streams.take(depth)
        return [finite_set([36] + [2 * v for v in ps[:k]] + [3 * v for v in qs[:k]]) for k in range(1, depth + 1)]


class _BlockFamily(BSet):
    """Families given as a union of finite blocks ``B_1, B_2, ...`` indexed by a prime stream."""

    def block(self, k: int) -> FiniteSet:
        raise NotImplementedError

    def _block_min(self, k: int) -> int:
        return min(self.block(k))

    def _stream_index(self, r: int) -> int | None:
        raise NotImplementedError

    def _generate(self, x: int) -> np.ndarray:
        vals: list[int] = []
        k = 1
        while self._block_floor(k) <= x:
            vals.extend(v for v in self.block(k) if v <= x)
            k += 1
        return np.asarray(vals, dtype=np.int64)

    def _block_floor(self, k: int) -> int:
        # lower bound for every element of every block j >= k
        raise NotImplementedError

    def _oracle(self, m: int) -> set[int]:
        # blocks beyond K0 + 2 repeat gcd patterns already seen (K0 = largest
        # stream index among the prime factors of m)
        K0 = 0
        for r in prime_factors(m):
            idx = self._stream_index(r)
            if idx is not None:
                K0 = max(K0, idx)
        out: set[int] = set()
        for k in range(1, K0 + 3):
            out |= {math.gcd(b, m) for b in self.block(k)}
        return out

    def native_stages(self, depth: int) -> list[FiniteSet]:
        stages, acc = [], set()
        for k in range(1, depth + 1):
            acc |= set(self.block(k))
            stages.append(finite_set(acc))
        return stages


class CascadeBSet(_BlockFamily):
    """``B_1 = {p_1 q_1}``; for k >= 2,
    ``B_k = {P_{k-1} p_k^2, P_{k-1} q_k^2} ∪ {P_{j-1} q_j q_k^2 : 1 <= j < k}``
    with ``P_i = p_1 ⋯ p_i``."""

    family = "cascade"

    def __init__(self, p: Sequence[int] = (), q: Sequence[int] = ()):
        super().__init__({"p": list(p), "q": list(q)})
        self.streams = _Streams(p, q, start=2)

    def pq(self, k: int) -> tuple[list[int], list[int]]:
        return self.streams.take(k)

    def block(self, k: int) -> FiniteSet:
        ps, qs = self.pq(k)
        if k == 1:
            return (ps[0] * qs[0],)
        P = [1]
        for v in ps:
            P.append(P[-1] * v)
        out = {P[k - 1] * ps[k - 1] ** 2, P[k - 1] * qs[k - 1] ** 2}
        out |= {P[j - 1] * qs[j - 1] * qs[k - 1] ** 2 for j in range(1, k)}
        return finite_set(out)

    def _block_floor(self, k: int) -> int:
        ps, qs = self.pq(k)
        return ps[0] * qs[0] if k == 1 else min(ps[k - 1], qs[k - 1]) ** 2

    def _stream_index(self, r: int) -> int | None:
        hit = self.streams.index(r)
        return hit[1] if hit else None


class _PrimeStream:
    """A single prime stream: an explicit prefix, then every admissible prime
    above the prefix in increasing order."""

    def __init__(self, prefix: Sequence[int], start: int, exclude: Sequence[int] = ()):
        prefix = [int(v) for v in prefix]
        self.exclude = {int(v) for v in exclude}
        if len(set(prefix)) != len(prefix) or self.exclude & set(prefix):
            raise ConfigError("stream primes must be pairwise different")
        for v in prefix:
            if v < start or not is_prime(v):
                raise ConfigError(f"{v} is not an admissible prime (need prime >= {start})")
        self.prefix = prefix
        self.floor = max(prefix + [start - 1])
        self._seq = list(prefix)
        self._bound = self.floor

    def _extend(self, bound: int) -> None:
        if bound <= self._bound:
            return
        pool = primes_up_to(bound)
        pool = pool[pool > self._bound]
        self._seq.extend(v for v in pool.tolist() if v not in self.exclude)
        self._bound = bound

    def take(self, k: int) -> list[int]:
        bound = max(self._bound, 64)
        while len(self._seq) < k:
            bound *= 2
            self._extend(bound)
        return self._seq[:k]

    def index(self, r: int) -> int | None:
        self._extend(r)
        try:
            return self._seq.index(r) + 1
        except ValueError:
            return None


class QFamilyBSet(_BlockFamily):
    """``B_k = {p_k q, p_1 p_k, ..., p_{k-1} p_k}`` for pairwise different odd primes."""

    family = "q-family"
    scaled_behrend = "p_1·{p_k : k >= 2}: a rescaled set of primes with divergent reciprocal sum"

    def __init__(self, q: int = 3, p: Sequence[int] = ()):
        super().__init__({"q": q, "p": list(p)})
        if q < 3 or not is_prime(q):
            raise ConfigError("q must be an odd prime")
        self.q = q
        self.stream = _PrimeStream(p, start=3, exclude=(q,))

    def block(self, k: int) -> FiniteSet:
        ps = self.stream.take(k)
        pk = ps[k - 1]
        return finite_set([pk * self.q] + [ps[j] * pk for j in range(k - 1)])

    def _block_floor(self, k: int) -> int:
        ps = self.stream.take(k)
        return ps[k - 1] * min(self.q, ps[0])

    def _stream_index(self, r: int) -> int | None:
        return None if r < 3 else self.stream.index(r)

    def _generate(self, x: int) -> np.ndarray:
        ps = np.asarray(self._stream_up_to(max(x // 3, 3)), dtype=np.int64)
        parts = [ps[ps <= x // self.q] * self.q]
        # the products p_j p_k do not depend on stream order, so sort and stop at sqrt(x)
        srt = np.sort(ps)
        for j, pj in enumerate(srt.tolist()):
            if pj * pj > x:
                break
            stop = int(np.searchsorted(srt, x // pj, side="right"))
            if stop > j + 1:
                parts.append(pj * srt[j + 1:stop])
        return np.concatenate(parts)

    def _stream_up_to(self, bound: int) -> list[int]:
        self.stream._extend(bound)
        return [v for v in self.stream._seq if v <= bound]

    def _oracle(self, m: int) -> set[int]:
        # infinitely many p_k miss m, so each factor of an element can be matched
        # independently: gcd(p_k q, m) and gcd(p_j p_k, m) for p_j, p_k | m or not
        F = [r for r in prime_factors(m) if self._stream_index(r) is not None]
        gq = math.gcd(self.q, m)
        out = {1, gq, *F, *(gq * r for r in F)}
        out |= {a * b for i, a in enumerate(F) for b in F[i + 1:]}
        return out


class Power2BSet(BSet):
    """``b_k = 2^k b'_k`` for a coprime set of odd numbers ``b'_k``.

    ``odd_parts`` fixes the b' explicitly (finite family); otherwise b' runs
    through the odd primes, truncated to the first ``K`` when ``K`` is given.
    """

    family = "power2"

    def __init__(self, K: int | None = None, odd_parts: Sequence[int] | None = None):
        super().__init__({"K": K, "odd_parts": list(odd_parts) if odd_parts else None})
        if odd_parts:
            parts = [int(v) for v in odd_parts]
            if any(v % 2 == 0 or v < 1 for v in parts):
                raise ConfigError("odd_parts must be odd positive integers")
            if any(math.gcd(a, b) != 1 for i, a in enumerate(parts) for b in parts[i + 1:]):
                raise ConfigError("odd_parts must be pairwise coprime")
            self._parts: list[int] | None = parts
        elif K is not None:
            if K < 1:
                raise ConfigError("K must be >= 1")
            self._parts = [int(v) for v in _odd_primes(K)]
        else:
            self._parts = None
        self.is_finite = self._parts is not None

    def odd_part(self, k: int) -> int:
        if self._parts is not None:
            return self._parts[k - 1]
        return int(_odd_primes(k)[k - 1])

    def count(self) -> int | None:
        return None if self._parts is None else len(self._parts)

    def b(self, k: int) -> int:
        return 2**k * self.odd_part(k)

    def _generate(self, x: int) -> np.ndarray:
        vals, k = [], 1
        n = self.count()
        while (n is None or k <= n) and 2**k <= x:
            if self.b(k) <= x:
                vals.append(self.b(k))
            k += 1
        return np.asarray(vals, dtype=np.int64)

    def max_element(self) -> int:
        n = self.count()
        if n is None:
            raise NotImplementedError("infinite family")
        return max(self.b(k) for k in range(1, n + 1))

    def contains(self, n: int) -> bool:
        if n < 2 or n % 2:
            return False
        k = (n & -n).bit_length() - 1
        cnt = self.count()
        if cnt is not None and k > cnt:
            return False
        return n == self.b(k)

    def _oracle(self, m: int) -> set[int]:
        n = self.count()
        if n is not None:
            return {math.gcd(self.b(k), m) for k in range(1, n + 1)}
        J0 = (m & -m).bit_length() - 1
        for r in prime_factors(m):
            if r > 2:
                J0 = max(J0, int(np.searchsorted(_odd_primes_up_to(r), r)) + 1)
        return {math.gcd(self.b(k), m) for k in range(1, J0 + 2)}

    def native_stages(self, depth: int) -> list[FiniteSet]:
        n = self.count()
        depth = depth if n is None else min(depth, n)
        return [finite_set(self.b(j) for j in range(1, k + 1)) for k in range(1, depth + 1)]


def _odd_primes_up_to(x: int) -> np.ndarray:
    p = primes_up_to(x)
    return p[p > 2]


def _odd_primes(k: int) -> np.ndarray:
    bound = 64
    while True:
        p = _odd_primes_up_to(bound)
        if len(p) >= k:
            return p[:k]
        bound *= 2


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyInfo:
    name: str
    summary: str
    params: dict[str, str] = field(default_factory=dict)
    factory: Callable[..., BSet] | None = None


_CATALOG: list[FamilyInfo] = [
    FamilyInfo("explicit", "an explicit finite set", {"elements": "list of positive integers"},
               lambda elements: ExplicitBSet(elements)),
    FamilyInfo("primes", "all prime numbers", {}, PrimesBSet),
    FamilyInfo("odd-primes", "all odd prime numbers", {}, OddPrimesBSet),
    FamilyInfo("prime-squares", "squares of primes (the square-free system)", {}, PrimeSquaresBSet),
    FamilyInfo("power2", "{2^k b'_k} for a coprime set of odd b'_k",
               {"K": "number of odd primes used as b'_k (omit for all)",
                "odd_parts": "explicit pairwise coprime odd b'_k (overrides K)"}, Power2BSet),
    FamilyInfo("two-three", "{36} ∪ {2 p_i} ∪ {3 q_i}",
               {"p": "prefix of the p-stream (primes >= 5)", "q": "prefix of the q-stream"}, TwoThreeBSet),
    FamilyInfo("cascade", "B_1 ∪ B_2 ∪ ... with B_k built from p_1..p_k, q_1..q_k",
               {"p": "prefix of the p-stream", "q": "prefix of the q-stream"}, CascadeBSet),
    FamilyInfo("q-family", "B_k = {p_k q, p_1 p_k, ..., p_{k-1} p_k}",
               {"q": "the odd prime q (default 3)", "p": "prefix of the odd-prime stream p_k"}, QFamilyBSet),
    FamilyInfo("ape1", "⋃_i p_i^2 (P \\ {p_i})",
               {"indices": "number of prime indices i (omit for all)"}, Ape1BSet),
    FamilyInfo("punctured-primes", "P minus K constructed primes p_k > 2^(k+1) in r_k + m_k Z",
               {"K": "number of removed primes (default 20)"}, PuncturedPrimesBSet),
    FamilyInfo("mod12", "{4, 6} ∪ {p_k}, p_k | 5 + 12k, p_k ≢ ±1 mod 12", {}, Mod12BSet),
]


def family_catalog() -> list[FamilyInfo]:
    return list(_CATALOG)


def make_bset(config: dict[str, Any] | BSet) -> BSet:
    """Build a BSet from ``{"family": name, "params": {...}}``."""
    if isinstance(config, BSet):
        return config
    if not isinstance(config, dict) or "family" not in config:
        raise ConfigError("B configuration must be an object with a 'family' key")
    name = config["family"]
    params = dict(config.get("params") or {})
    for info in _CATALOG:
        if info.name == name:
            unknown = set(params) - set(info.params)
            if unknown:
                raise ConfigError(f"unknown parameter(s) for family {name!r}: {sorted(unknown)}")
            params = {k: v for k, v in params.items() if v is not None}
            try:
                return info.factory(**params)
            except TypeError as exc:
                raise ConfigError(f"bad parameters for family {name!r}: {exc}") from None
    raise ConfigError(f"unknown family {name!r}; known: {[f.name for f in _CATALOG]}")
