"""Segmented sieving of the B-free indicator eta on integer intervals.

eta(n) = 1 iff no b in B divides n. Every b divides 0, so eta(0) = 0, and
divisibility ignores sign, so eta(-n) = eta(n). A divisor of n != 0 is at
most |n|, which makes ``B ∩ [1, max |n|]`` sufficient for an exact answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bset import BSet
from .errors import ConfigError, SieveBudgetError

CHUNK = 1 << 20
SMALL_MODULUS = 4096
MAX_POSITIONS = 200_000_000
MAX_B_HORIZON = 400_000_000
_FULL_SIEVE_SPAN = 50_000_000


@dataclass(frozen=True)
class EtaBlock:
    """``bits[i]`` is eta at ``offset + i * step`` (computed from ``B ∩ [1, b_horizon]``)."""

    offset: int
    bits: np.ndarray
    b_horizon: int
    exact: bool
    step: int = 1

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def positions(self) -> np.ndarray:
        return self.offset + self.step * np.arange(len(self.bits), dtype=np.int64)

    def support(self) -> np.ndarray:
        return self.offset + self.step * np.flatnonzero(self.bits).astype(np.int64)

    def to_text(self) -> str:
        bits = np.where(self.bits, ord("1"), ord("0")).astype(np.uint8).tobytes().decode()
        return f"offset {self.offset}\n{bits}\n"

    @classmethod
    def from_text(cls, text: str, b_horizon: int | None = None) -> "EtaBlock":
        lines = text.strip().splitlines()
        if len(lines) < 1 or not lines[0].startswith("offset "):
            raise ConfigError("eta text must start with 'offset <int>'")
        offset = int(lines[0].split()[1])
        body = lines[1].strip() if len(lines) > 1 else ""
        if set(body) - {"0", "1"}:
            raise ConfigError("eta text body must be a 0/1 string")
        bits = np.frombuffer(body.encode(), dtype=np.uint8) == ord("1")
        top = max(abs(offset), abs(offset + len(bits) - 1))
        horizon = top if b_horizon is None else b_horizon
        return cls(offset, bits, horizon, horizon >= top)

    def to_words(self) -> np.ndarray:
        """Bits packed into 64-bit little-endian words (bit i of word w is position 64 w + i)."""
        packed = np.packbits(self.bits, bitorder="little")
        pad = (-len(packed)) % 8
        packed = np.concatenate((packed, np.zeros(pad, dtype=np.uint8)))
        return packed.view("<u8")

    @classmethod
    def from_words(cls, offset: int, words: np.ndarray, length: int, b_horizon: int,
                   step: int = 1) -> "EtaBlock":
        raw = np.asarray(words, dtype="<u8").view(np.uint8)
        bits = np.unpackbits(raw, bitorder="little")[:length].astype(bool)
        top = max(abs(offset), abs(offset + step * (length - 1)))
        return cls(offset, bits, b_horizon, b_horizon >= top, step)


@dataclass(frozen=True)
class ResidueCoverage:
    b: int
    residues_hit: tuple[int, ...]
    window: tuple[int, int]

    @property
    def missed(self) -> tuple[int, ...]:
        hit = set(self.residues_hit)
        return tuple(r for r in range(self.b) if r not in hit)

    @property
    def y_evidence(self) -> bool:
        """True when exactly one residue class mod b is avoided."""
        return len(self.residues_hit) == self.b - 1


def _mark_free(elems: np.ndarray, a: int, b: int) -> np.ndarray:
    """Free mask over the non-negative range ``[a, b]``."""
    out = np.empty(b - a + 1, dtype=bool)
    small = elems[elems <= SMALL_MODULUS]
    large = elems[elems > SMALL_MODULUS]
    for c0 in range(a, b + 1, CHUNK):
        c1 = min(c0 + CHUNK, b + 1)
        mask = np.ones(c1 - c0, dtype=bool)
        for e in small.tolist():
            start = -c0 % e
            mask[start::e] = False
        if len(large):
            first = -c0 % large  # offset of the first multiple inside the chunk
            counts = np.where(first < c1 - c0, (c1 - c0 - 1 - first) // large + 1, 0)
            total = int(counts.sum())
            if total:
                starts = np.repeat(first, counts)
                steps = np.repeat(large, counts)
                base = np.repeat(np.cumsum(counts) - counts, counts)
                mask[starts + steps * (np.arange(total) - base)] = False
        out[c0 - a : c1 - a] = mask
    if a == 0:
        out[0] = False
    return out


def _signed_free(elems: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Free mask over ``[lo, hi]`` using ``eta(-n) = eta(n)``."""
    if lo >= 0:
        return _mark_free(elems, lo, hi)
    if hi <= 0:
        return _mark_free(elems, -hi, -lo)[::-1].copy()
    pos = _mark_free(elems, 0, max(-lo, hi))
    return pos[np.abs(np.arange(lo, hi + 1, dtype=np.int64))]


def _elements(B: BSet, horizon: int) -> np.ndarray:
    if horizon > MAX_B_HORIZON:
        raise SieveBudgetError(
            f"enumerating B up to {horizon} exceeds the budget {MAX_B_HORIZON}; "
            "pass a smaller b_horizon for an inexact block"
        )
    return B.elements_array(max(horizon, 1))


def sieve_eta(B: BSet, lo: int, hi: int, b_horizon: int | None = None,
              max_positions: int = MAX_POSITIONS) -> EtaBlock:
    """eta on ``[lo, hi]``; exact unless a smaller ``b_horizon`` is forced."""
    if lo > hi:
        raise ConfigError("need lo <= hi")
    length = hi - lo + 1
    if length > max_positions:
        n_chunks = math.ceil(length / max_positions)
        raise SieveBudgetError(
            f"interval of {length} positions exceeds the budget {max_positions}; "
            f"split it into {n_chunks} chunks of at most {max_positions} positions"
        )
    top = max(abs(lo), abs(hi))
    horizon = top if b_horizon is None else min(b_horizon, top)
    bits = _signed_free(_elements(B, horizon), lo, hi)
    return EtaBlock(lo, bits, horizon if b_horizon is not None else top, horizon >= top)


def residue_coverage(block: EtaBlock, b: int) -> ResidueCoverage:
    """Residues mod b met by the support of an exact block."""
    if not block.exact:
        raise ConfigError("residue coverage needs an exact block")
    if b < 1:
        raise ConfigError("b must be >= 1")
    hit = np.unique(block.support() % b)
    end = block.offset + block.step * (len(block) - 1)
    return ResidueCoverage(b, tuple(int(r) for r in hit), (block.offset, end))


def sieve_progression(B: BSet, a: int, r: int, lo: int, hi: int,
                      b_horizon: int | None = None) -> EtaBlock:
    """eta on ``{n in [lo, hi] : n ≡ r mod a}``, position i being ``n0 + i a``."""
    if a < 1:
        raise ConfigError("a must be >= 1")
    if lo > hi:
        raise ConfigError("need lo <= hi")
    n0 = lo + (r - lo) % a
    count = 0 if n0 > hi else (hi - n0) // a + 1
    if count == 0:
        return EtaBlock(n0, np.zeros(0, dtype=bool), b_horizon or 0, True, a)
    last = n0 + a * (count - 1)
    top = max(abs(n0), abs(last))
    horizon = top if b_horizon is None else min(b_horizon, top)
    if hi - lo + 1 <= _FULL_SIEVE_SPAN:
        full = sieve_eta(B, n0, last, b_horizon=horizon)
        bits = full.bits[::a].copy()
    else:
        # solve b | n0 + i a for each b: i ≡ i0 mod b / gcd(a, b)
        bits = np.ones(count, dtype=bool)
        for e in _elements(B, horizon).tolist():
            g = math.gcd(a, e)
            if n0 % g:
                continue
            mod = e // g
            i0 = 0 if mod == 1 else (-(n0 // g) * pow(a // g, -1, mod)) % mod
            bits[i0::mod] = False
    return EtaBlock(n0, bits, horizon if b_horizon is not None else top, horizon >= top, a)
