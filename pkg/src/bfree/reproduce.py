"""Named end-to-end experiments with recorded expectations.

Each experiment returns a list of checks; the experiment passes when every
check does.  Expected values are written out literally so that a failing
check shows both sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

from .bset import (
    Ape1BSet,
    CascadeBSet,
    Mod12BSet,
    OddPrimesBSet,
    Power2BSet,
    PuncturedPrimesBSet,
    QFamilyBSet,
    TwoThreeBSet,
    _coprime_pairs,
)
from .crt import HPoint, block_containment_check, phi_block, theta_of_block
from .density import count_free
from .filtration import build_filtration, compute_dk, detect_a_infinity, mef_descriptor, persistent_values
from .sieve import residue_coverage, sieve_eta, sieve_progression
from .window import classify, haar_regularity_scan, toeplitz_positions

TOEPLITZ_POSITION_CAP = 2 * 10**7


@dataclass(frozen=True)
class Check:
    name: str
    expected: Any
    observed: Any
    passed: bool


@dataclass(frozen=True)
class Experiment:
    id: str
    title: str
    run: Callable[[int | None], list[Check]]


def _eq(name: str, expected: Any, observed: Any) -> Check:
    return Check(name, expected, observed, expected == observed)


def _bits(block) -> str:
    return "".join("1" if v else "0" for v in block.bits.tolist())


def block_example(N: int | None = None) -> list[Check]:
    B = OddPrimesBSet()
    h = HPoint({3: 0, 5: 1, 7: 0, 11: 0})
    blk = phi_block(B, h, 0, 8)
    R = N or 10**6
    hay = sieve_eta(B, -R, R)
    dom = block_containment_check("11001001", hay, "lower")
    return [
        _eq("phi(h) on [0, 8]", "011001001", _bits(blk)),
        _eq(f"positions of a block >= 11001001 in eta on [-{R}, {R}]", [], list(dom.positions)),
    ]


def two_three(N: int | None = None) -> list[Check]:
    T = compute_dk(build_filtration(TwoThreeBSet(), depth=5))
    detect_a_infinity(T)
    mef = mef_descriptor(T)
    return [
        _eq("d_k, k = 1..5", [6] * 5, [d.value for d in T.dk]),
        _eq("A_k \\ S_k, k = 1..5", [[2, 3]] * 5, [list(st.new_elems) for st in T.stages]),
        _eq("MEF descriptor", "Z/6Z", mef.label),
        _eq("persistent A_inf candidates", [2, 3], list(persistent_values(T))),
    ]


def cascade(N: int | None = None) -> list[Check]:
    B = CascadeBSet()
    T = compute_dk(build_filtration(B, depth=4))
    p, q = B.pq(4)
    exp_d = [math.prod(p[:k]) * math.prod(q[:k]) for k in range(1, 5)]
    exp_quot = [math.prod(p[1:k]) * math.prod(q[1:k]) for k in range(1, 5)]
    return [
        _eq("d_k = p_1..p_k q_1..q_k, k = 1..4", exp_d, [d.value for d in T.dk]),
        _eq("s_k / d_k = p_2..p_k q_2..q_k, k = 1..4", exp_quot, T.quotients),
    ]


def q_family(N: int | None = None) -> list[Check]:
    T = compute_dk(build_filtration(QFamilyBSet(), depth=5))
    mef = mef_descriptor(T)
    s = [st.s for st in T.stages]
    return [
        _eq("c_k = s_k, k = 1..5", s, [st.c for st in T.stages]),
        _eq("d_k = s_k, k = 1..5", s, [d.value for d in T.dk]),
        _eq("s_k = d_k at every stage", True, mef.h_int_trivial),
    ]


def ape1(N: int | None = None) -> list[Check]:
    N = N or 10**7
    B = Ape1BSet()
    T = build_filtration(B, depth=3)
    flags = [f for f in haar_regularity_scan(B, T, N) if f.k == 1 and f.n == 4]
    count = flags[0].count if flags else None
    return [
        _eq(f"cylinder 4 + s_1 Z flagged on [1, {N}]", True, bool(flags)),
        Check("free count in that cylinder <= 30", "<= 30", count, count is not None and count <= 30),
    ]


def punctured(N: int | None = None) -> list[Check]:
    N = N or 10**6
    B = PuncturedPrimesBSet()
    removed = B.removed
    pairs = _coprime_pairs(len(removed))
    placed = all(p % m == r % m and p > 2 ** (k + 2) for k, (p, (m, r)) in enumerate(zip(removed, pairs)))
    free = count_free(B, N)
    eta = sieve_eta(B, 1, max(removed))
    witnesses = all(eta.bits[p - 1] for p in removed)
    return [
        _eq("removed p_k in r_k + m_k Z with p_k > 2^(k+1)", True, placed),
        _eq("every removed p_k is B-free (a free point in its cylinder)", True, witnesses),
        Check(f"free share on [1, {N}] below 1e-3", "< 1e-3", free / N, free / N < 1e-3),
    ]


def mod12(N: int | None = None) -> list[Check]:
    B = Mod12BSet()
    blk = sieve_eta(B, 0, 10**4)
    prog = sieve_progression(B, 12, 5, 0, N or 10**5)
    theta = theta_of_block(sieve_eta(B, -10**4, 10**4), B, 6)
    return [
        _eq("residues mod 4 met by F_B on [0, 10^4]", [1, 2, 3], list(residue_coverage(blk, 4).residues_hit)),
        _eq("residues mod 6 met by F_B on [0, 10^4]", [1, 2, 3, 4, 5], list(residue_coverage(blk, 6).residues_hit)),
        _eq(f"free points in 5 + 12Z on [0, {N or 10**5}]", 0, int(prog.bits.sum())),
        _eq("theta at b = 4, 6", [0, 0], [theta[4].g, theta[6].g]),
    ]


def power2(N: int | None = None) -> list[Check]:
    N = N or 10**7
    B = Power2BSet(K=8)
    T = build_filtration(B, depth=8)
    rep = classify(B, T, N=N)
    trace = [float(v) for _, v in rep.window.per_stage_boundary]
    decreasing = all(b <= a + 1e-12 for a, b in zip(trace, trace[1:]))
    bounds = []
    for st in T.stages:
        if st.s <= TOEPLITZ_POSITION_CAP:
            tp = toeplitz_positions(B, T, st.k, N_periods=1)
            bounds.append((st.k, tp.unresolved_fraction, tp.unresolved_fraction <= 2.0 ** -st.k + 1e-2))
    return [
        _eq("toeplitz verdict", "yes", rep.toeplitz.value),
        _eq("regular toeplitz verdict", "yes", rep.regular_toeplitz.value),
        Check("boundary trace non-increasing, last < 1e-2", "< 1e-2", trace[-1], decreasing and trace[-1] < 1e-2),
        Check("unresolved fraction <= 2^-k + 1e-2", "<= 2^-k + 1e-2",
              [[k, f] for k, f, _ in bounds], bool(bounds) and all(ok for *_, ok in bounds)),
    ]


CATALOG = [
    Experiment("sec2.5-block", "coding of a group element with a block no eta-block dominates", block_example),
    Experiment("ex5.6-two-three", "two-three family: d_k = 6 and MEF Z/6Z", two_three),
    Experiment("ex5.7-cascade", "cascade family: d_k and s_k / d_k", cascade),
    Experiment("ex5.8-q-family", "q-family: s_k = c_k = d_k", q_family),
    Experiment("ex2.6-ape1-nontaut", "ape1: thin free cylinder at n = 4", ape1),
    Experiment("ex2.8-punctured", "punctured primes: free points in every coprime class", punctured),
    Experiment("sec3.1-mod12-Y", "mod12: residue coverage and the empty class 5 mod 12", mod12),
    Experiment("sec4.2-power2-regular", "power2 (K = 8): regular Toeplitz", power2),
]


def reproduce_catalog() -> list[Experiment]:
    return list(CATALOG)


def get_experiment(name: str) -> Experiment:
    for e in CATALOG:
        if e.id == name:
            return e
    from .errors import ConfigError

    raise ConfigError(f"unknown experiment {name!r}; known: {[e.id for e in CATALOG]}")
