"""Residue systems over non-coprime moduli and the coding map.

A finite residue map ``{b: h_b}`` describes the cylinder of group elements
agreeing with h on those coordinates.  It is nonempty iff the residues
agree pairwise modulo ``gcd(b, b')``, and then it is a single class mod
``lcm(S)``.  The coding ``phi(h)(i) = 1`` iff ``b ∤ h_b + i`` for all b in B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .arith import lcm_chain
from .bset import BSet, ExplicitBSet
from .errors import ConfigError, IncompatibleResidues
from .sieve import EtaBlock, _elements, _signed_free, residue_coverage, sieve_progression

DEFAULT_RULES = ("zero", "delta")


@dataclass(frozen=True)
class CylinderSpec:
    residues: Mapping[int, int]

    def __post_init__(self):
        clean = {}
        for b, r in self.residues.items():
            b, r = int(b), int(r)
            if b < 1:
                raise ConfigError(f"modulus {b} must be >= 1")
            if not 0 <= r < b:
                raise ConfigError(f"residue {r} for modulus {b} must lie in [0, {b})")
            clean[b] = r
        object.__setattr__(self, "residues", dict(sorted(clean.items())))

    @property
    def S(self) -> tuple[int, ...]:
        return tuple(self.residues)

    @classmethod
    def parse(cls, text: str) -> "CylinderSpec":
        """Parse ``"b:r,b:r,..."``."""
        out: dict[int, int] = {}
        for item in filter(None, (t.strip() for t in text.split(","))):
            try:
                b, r = (int(v) for v in item.split(":"))
            except ValueError:
                raise ConfigError(f"residue item {item!r} is not of the form b:r") from None
            if b in out and out[b] != r:
                raise ConfigError(f"modulus {b} given twice with different residues")
            out[b] = r
        return cls(out)

    def violating_pair(self) -> tuple[int, int] | None:
        S = self.S
        for i, b1 in enumerate(S):
            for b2 in S[i + 1:]:
                if (self.residues[b1] - self.residues[b2]) % math.gcd(b1, b2):
                    return b1, b2
        return None

    @property
    def compatible(self) -> bool:
        return self.violating_pair() is None


@dataclass(frozen=True)
class CrtSolution:
    n0: int
    modulus: int


def crt_solve(c: CylinderSpec) -> CrtSolution:
    """The class ``n0 + modulus Z`` solving every congruence, ``0 <= n0 < modulus``.

    Raises:
        IncompatibleResidues: for the first violating pair in sorted order.
    """
    bad = c.violating_pair()
    if bad is not None:
        b1, b2 = bad
        raise IncompatibleResidues(b1, c.residues[b1], b2, c.residues[b2])
    n, m = 0, 1
    for b, r in c.residues.items():
        g = math.gcd(m, b)
        # n + m t ≡ r mod b  <=>  (m/g) t ≡ (r - n)/g mod b/g
        step = b // g
        t = ((r - n) // g * pow(m // g, -1, step)) % step if step > 1 else 0
        n += m * t
        m = m * step
        n %= m
    return CrtSolution(n, m)


@dataclass(frozen=True)
class CrtSearch:
    n0: int
    modulus: int
    N: int
    solutions: np.ndarray
    density: float  # count / N
    relative_density: float  # count / (N / modulus)

    @property
    def count(self) -> int:
        return len(self.solutions)


def bfree_crt_search(B: BSet, c: CylinderSpec, N: int) -> CrtSearch:
    """B-free solutions in ``[1, N]`` of the residue system."""
    if N < 1:
        raise ConfigError("N must be >= 1")
    sol = crt_solve(c)
    block = sieve_progression(B, sol.modulus, sol.n0, 1, N)
    found = block.support()
    count = len(found)
    return CrtSearch(sol.n0, sol.modulus, N, found, count / N, count * sol.modulus / N)


@dataclass(frozen=True)
class HPoint:
    """Finitely many assigned coordinates; the rest follow ``default``.

    ``default="zero"`` sets ``h_b = 0``; ``default="delta"`` sets
    ``h_b = n0 mod b`` (the diagonal image of n0).
    """

    assigned: Mapping[int, int] = field(default_factory=dict)
    default: str = "zero"
    n0: int = 0

    def __post_init__(self):
        if self.default not in DEFAULT_RULES:
            raise ConfigError(f"default rule must be one of {DEFAULT_RULES}")
        for b, r in self.assigned.items():
            if b < 1 or not 0 <= r < b:
                raise ConfigError(f"coordinate {b} needs a residue in [0, {b}), got {r}")
        object.__setattr__(self, "assigned", dict(sorted((int(b), int(r)) for b, r in self.assigned.items())))

    @property
    def shift(self) -> int:
        return self.n0 if self.default == "delta" else 0

    def coordinate(self, b: int) -> int:
        if b in self.assigned:
            return self.assigned[b]
        return self.shift % b


def phi_block(B: BSet, h: HPoint, lo: int, hi: int) -> EtaBlock:
    """``phi(h)`` on ``[lo, hi]``.

    Unassigned coordinates agree with the diagonal image of ``shift``, so
    their contribution is eta of ``B`` minus the assigned moduli at
    ``shift + i``; assigned ones remove one class each.
    """
    if lo > hi:
        raise ConfigError("need lo <= hi")
    for b in h.assigned:
        if not B.contains(b):
            raise ConfigError(f"assigned coordinate {b} is not an element of B")
    a, z = h.shift + lo, h.shift + hi
    top = max(abs(a), abs(z), 1)
    elems = _elements(B, top)
    rest = elems[~np.isin(elems, list(h.assigned))] if h.assigned else elems
    if len(rest):
        bits = _signed_free(rest, a, z)
    else:
        bits = np.ones(hi - lo + 1, dtype=bool)
    if not B.is_finite and not isinstance(B, ExplicitBSet) and a <= 0 <= z:
        # infinitely many unassigned b divide 0
        bits[-a] = False
    for b, r in h.assigned.items():
        first = (-r - lo) % b
        bits[first::b] = False
    return EtaBlock(lo, bits, top, True)


@dataclass(frozen=True)
class ThetaEntry:
    b: int
    g: int | None
    missed: tuple[int, ...]
    status: str  # provably-missed | window-missed | undefined


def _period_covered(block: EtaBlock, B: BSet) -> bool:
    if not (B.is_finite or isinstance(B, ExplicitBSet)) or block.step != 1:
        return False
    elems = B.elements if isinstance(B, ExplicitBSet) else B.elements_up_to(B.max_element())
    return len(block) >= lcm_chain(elems)


def theta_of_block(block: EtaBlock, B: BSet, b_max: int) -> dict[int, ThetaEntry]:
    """For each ``b <= b_max`` in B, the g with ``supp ∩ (bZ - g)`` empty when
    exactly one class mod b is missed on the block; otherwise undefined."""
    full = _period_covered(block, B)
    out = {}
    for b in B.elements_up_to(b_max) if b_max >= 1 else ():
        missed = residue_coverage(block, b).missed
        if len(missed) == 1:
            out[b] = ThetaEntry(b, (-missed[0]) % b, missed, "provably-missed" if full else "window-missed")
        else:
            out[b] = ThetaEntry(b, None, missed, "undefined")
    return out


def _as_bits(pattern: str | Sequence[int] | np.ndarray) -> np.ndarray:
    if isinstance(pattern, str):
        if not pattern or set(pattern) - {"0", "1"}:
            raise ConfigError("pattern must be a nonempty 0/1 string")
        return np.frombuffer(pattern.encode(), dtype=np.uint8) == ord("1")
    arr = np.asarray(pattern)
    if arr.size == 0:
        raise ConfigError("pattern must be nonempty")
    return arr.astype(bool)


@dataclass(frozen=True)
class Containment:
    needle: str
    mode: str
    positions: tuple[int, ...]
    window: tuple[int, int]

    @property
    def found(self) -> bool:
        return bool(self.positions)


def block_containment_check(needle, hay: EtaBlock, dominance: str = "exact") -> Containment:
    """Start positions where ``hay`` equals ``needle`` (exact) or is >= it coordinatewise (lower)."""
    bits = _as_bits(needle)
    if dominance not in ("exact", "lower"):
        raise ConfigError("dominance must be 'exact' or 'lower'")
    text = "".join("1" if v else "0" for v in bits.tolist())
    end = hay.offset + hay.step * (len(hay) - 1)
    if len(bits) > len(hay):
        return Containment(text, dominance, (), (hay.offset, end))
    win = np.lib.stride_tricks.sliding_window_view(hay.bits, len(bits))
    if dominance == "exact":
        ok = np.all(win == bits, axis=1)
    else:
        ok = np.all(win[:, bits], axis=1)
    pos = hay.offset + hay.step * np.flatnonzero(ok)
    return Containment(text, dominance, tuple(int(p) for p in pos), (hay.offset, end))
