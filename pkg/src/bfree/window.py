"""Window measures and the dynamical classification of a B-free system.

Verdicts are tri-state (``yes`` / ``no`` / ``undetermined``) and carry the
finite data that supports them.  Stage-wise facts about the shadows ``A_k``
are exact when the gcd profiles are; anything involving all of ``M_B`` is an
estimate on ``[1, N]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .arith import pairwise_coprime_chain, primitivize
from .bset import BSet, ExplicitBSet
from .density import (
    DEFAULT_N,
    DensityEstimate,
    count_free,
    exact_density_of_multiples,
    light_tails_trace,
)
from .errors import BudgetExceeded, SieveBudgetError
from .filtration import (
    FiltrationTable,
    MefDescriptor,
    build_filtration,
    compute_dk,
    detect_a_infinity,
    mef_descriptor,
)
from .sieve import _mark_free, residue_coverage, sieve_eta

YES, NO, UNDETERMINED = "yes", "no", "undetermined"
CHAIN_THRESHOLD = 25
BOUNDARY_THRESHOLD = 1e-3
HAAR_RATIO = 0.01
TOEPLITZ_BUDGET = 10**9
_CHAIN_CANDIDATES = 20_000


@dataclass(frozen=True)
class Verdict:
    value: str
    certificate: dict[str, Any] = field(default_factory=dict)
    note: str = ""


@dataclass(frozen=True)
class WindowMeasures:
    m_W: DensityEstimate
    m_intW: DensityEstimate
    m_boundary: DensityEstimate
    per_stage_boundary: list[tuple[int, Fraction | float]]
    boundary_bound: str = "upper"  # M_B is under-approximated by B ∩ [1, N]


@dataclass(frozen=True)
class HaarFlag:
    k: int
    s: int
    n: int
    count: int
    scale: float  # N / s_k, the count expected for a cylinder of positive density ~1


@dataclass(frozen=True)
class ToeplitzPositions:
    k: int
    s: int
    labels: np.ndarray  # 1 good-free, 0 good-multiple, 2 unresolved
    periods_checked: int
    mismatches: int

    @property
    def unresolved_fraction(self) -> float:
        return float(np.count_nonzero(self.labels == 2)) / self.s

    @property
    def counts(self) -> dict[str, int]:
        return {
            "good_free": int(np.count_nonzero(self.labels == 1)),
            "good_multiple": int(np.count_nonzero(self.labels == 0)),
            "unresolved": int(np.count_nonzero(self.labels == 2)),
        }


@dataclass
class ClassificationReport:
    family: dict[str, Any]
    proximal: Verdict
    toeplitz: Verdict
    top_regular: Verdict
    regular_toeplitz: Verdict
    taut_evidence: Verdict
    y_membership: list[dict[str, Any]]
    mef: MefDescriptor
    window: WindowMeasures
    haar_flags: list[HaarFlag]
    notes: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# window measures
# ---------------------------------------------------------------------------


def _elems_up_to(values, N: int) -> np.ndarray:
    return np.asarray([v for v in values if v <= N], dtype=np.int64)


def _finite_elements(B: BSet) -> tuple[int, ...] | None:
    if isinstance(B, ExplicitBSet):
        return B.elements
    if B.is_finite:
        return B.elements_up_to(B.max_element())
    return None


def _exact_or_none(S) -> Fraction | None:
    try:
        return exact_density_of_multiples(S).value
    except BudgetExceeded:
        return None


def window_measures(B: BSet, table: FiltrationTable, N: int = DEFAULT_N) -> WindowMeasures:
    """Haar measures of W, int W and the boundary, from the stages of ``table``."""
    finite = _finite_elements(B)
    dB = _exact_or_none(finite) if finite is not None else None
    free_B = None
    if dB is None:
        free_B = count_free(B, N)
        m_W = DensityEstimate(free_B / N, "interval_count", N, count=free_B)
    else:
        m_W = DensityEstimate(1 - dB, "exact", None)

    per_stage: list[tuple[int, Fraction | float]] = []
    best_int: DensityEstimate | None = None
    # the boundary is an infimum over stages, so lookahead stages count too
    for st in table.stages + table.lookahead_stages:
        dA = _exact_or_none(st.A)
        if dA is not None:
            free_int = DensityEstimate(1 - dA, "exact", None)
        else:
            cnt = count_free(_elems_up_to(st.A, N), N)
            free_int = DensityEstimate(cnt / N, "interval_count", N, count=cnt)
        if best_int is None or float(free_int.value) > float(best_int.value):
            best_int = free_int
        # M_B ⊆ M_{A_k}, so the difference set has density d(M_A) - d(M_B)
        if dA is not None and dB is not None:
            per_stage.append((st.k, dA - dB))
        else:
            if free_B is None:
                free_B = count_free(B, N)
            cnt_A = count_free(_elems_up_to(st.A, N), N)
            per_stage.append((st.k, (free_B - cnt_A) / N))
    if finite is not None and dB is not None:
        # the exhausting stage S = B has A_S = B: W is clopen
        m_boundary = DensityEstimate(Fraction(0), "exact", None)
    else:
        k, v = min(per_stage, key=lambda kv: float(kv[1]))
        m_boundary = DensityEstimate(v, "interval_count", N)
    return WindowMeasures(m_W, best_int, m_boundary, per_stage)


# ---------------------------------------------------------------------------
# Toeplitz positions and Haar scan
# ---------------------------------------------------------------------------


def toeplitz_positions(B: BSet, table: FiltrationTable, k: int, N_periods: int = 4) -> ToeplitzPositions:
    """Label each n in ``[0, s_k)``: good-free (n in F_{A_k}), good-multiple
    (n in M_{S_k}) or unresolved, then check the good labels against eta on
    ``N_periods`` full periods."""
    st = table.stage(k)
    if st.s * max(N_periods, 1) > TOEPLITZ_BUDGET:
        raise SieveBudgetError(f"s_{k} = {st.s} is too large for {N_periods} periods; choose a smaller k")
    s = st.s
    free_A = _mark_free(np.asarray(st.A, dtype=np.int64), 0, s - 1)
    free_S = _mark_free(np.asarray(st.S, dtype=np.int64), 0, s - 1)
    labels = np.full(s, 2, dtype=np.int8)
    labels[~free_S] = 0
    labels[free_A] = 1
    mismatches = 0
    if N_periods > 0:
        eta = sieve_eta(B, 0, N_periods * s - 1).bits.reshape(N_periods, s)
        mismatches += int(np.count_nonzero(~eta[:, labels == 1]))
        mismatches += int(np.count_nonzero(eta[:, labels == 0]))
    return ToeplitzPositions(k, s, labels, N_periods, mismatches)


def haar_regularity_scan(B: BSet, table: FiltrationTable, N: int = DEFAULT_N, ratio: float = HAAR_RATIO,
                         max_flags_per_stage: int = 50) -> list[HaarFlag]:
    """Cylinders ``n + s_k Z`` with ``n in F_{S_k}`` that meet F_B in ``[1, N]``
    but only ``0 < count <= ratio * N / s_k`` times: evidence that W has a
    nonempty piece of Haar measure zero.  Stages with ``ratio * N / s_k < 1``
    are skipped."""
    eta = sieve_eta(B, 1, N)
    free = eta.support()
    flags: list[HaarFlag] = []
    for st in table.stages:
        scale = N / st.s
        if ratio * scale < 1:
            continue
        counts = np.bincount(free % st.s, minlength=st.s)
        cand = _mark_free(np.asarray(st.S, dtype=np.int64), 0, st.s - 1)
        hit = np.flatnonzero(cand & (counts > 0) & (counts <= ratio * scale))
        for n in hit[:max_flags_per_stage].tolist():
            flags.append(HaarFlag(st.k, st.s, int(n), int(counts[n]), scale))
    return flags


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def _coprime_chain(B: BSet, length: int, divisor: int = 1, horizon: int = 10**6) -> list[int]:
    arr = B.elements_array(horizon)
    if divisor > 1:
        arr = arr[arr % divisor == 0] // divisor
    return pairwise_coprime_chain(arr[:_CHAIN_CANDIDATES].tolist(), length)


def _stage_witness(B: BSet, s: int, target: int, horizon: int) -> int | None:
    """Smallest b in B ∩ [1, horizon] with gcd(b, s) = target."""
    arr = B.elements_array(horizon)
    if s < 1 << 62:
        hit = np.flatnonzero(np.gcd(arr, s) == target)
        return int(arr[hit[0]]) if len(hit) else None
    for b in arr.tolist():
        if math.gcd(b, s) == target:
            return b
    return None


def classify(B: BSet, table: FiltrationTable | None = None, N: int = DEFAULT_N, depth: int = 8,
             chain_threshold: int = CHAIN_THRESHOLD, boundary_threshold: float = BOUNDARY_THRESHOLD,
             haar_ratio: float = HAAR_RATIO, y_bmax: int = 30, y_window: int = 10**4,
             witness_horizon: int = 10**6) -> ClassificationReport:
    notes: list[str] = []
    if isinstance(B, ExplicitBSet) and not B.primitive:
        notes.append(f"explicit B primitivized from {len(B.elements)} to {len(primitivize(B.elements))} elements")
        B = ExplicitBSet(primitivize(B.elements))
    if table is None:
        table = build_filtration(B, depth=depth)
    if table.dk is None:
        compute_dk(table)
    stages = table.stages
    exact = table.exact
    finite = _finite_elements(B) is not None
    cands = detect_a_infinity(table) if len(stages) >= 3 else []

    # proximality: 1 in A_S for every S
    chain = _coprime_chain(B, chain_threshold, horizon=witness_horizon)
    missing_one = [st for st in stages if st.A_exact and 1 not in st.A]
    if missing_one:
        st = missing_one[0]
        proximal = Verdict(NO, {"stage": st.k, "s_k": st.s, "min_A_k": st.A[0]},
                           "1 is not in the shadow A_k, so int(W) is nonempty")
    elif exact and stages:
        wit = {st.k: _stage_witness(B, st.s, 1, witness_horizon) for st in stages}
        proximal = Verdict(YES, {"coprime_chain": chain, "stage_witnesses": wit},
                           "1 lies in A_k at every stage (exact shadows)")
    elif len(chain) >= chain_threshold:
        proximal = Verdict(YES, {"coprime_chain": chain}, "pairwise coprime chain found in B")
    else:
        proximal = Verdict(UNDETERMINED, {"coprime_chain": chain}, "shadows not exact at this horizon")

    # Toeplitz / topological regularity: A_∞ empty
    everywhere = [c for c in cands if c.count == len(stages)]
    if finite:
        toeplitz = Verdict(YES, {"finite": True}, "finite B: eta is periodic")
    elif everywhere and exact:
        wits = {}
        for c in everywhere[:4]:
            wits[c.value] = {
                "stage_witnesses": {st.k: _stage_witness(B, st.s, c.value, witness_horizon) for st in stages},
                "scaled_coprime_chain": _coprime_chain(B, chain_threshold, divisor=c.value, horizon=witness_horizon),
            }
        toeplitz = Verdict(NO, {"persistent": [c.value for c in everywhere], "witnesses": wits},
                           "some d lies in A_k \\ S_k at every stage")
    elif exact and stages and not any(c.status == "persistent" for c in cands):
        checks = {}
        for st in stages:
            if st.s <= 10**6:
                tp = toeplitz_positions(B, table, st.k, N_periods=2)
                checks[st.k] = {"unresolved_fraction": tp.unresolved_fraction, "mismatches": tp.mismatches}
        bad = any(v["mismatches"] for v in checks.values())
        toeplitz = Verdict(UNDETERMINED if bad else YES, {"position_checks": checks},
                           "no element persists in A_k \\ S_k")
    else:
        toeplitz = Verdict(UNDETERMINED, {"candidates": [c.value for c in cands if c.status == "persistent"]},
                           "persistence seen only over part of the computed stages")

    wm = window_measures(B, table, N)
    trace = [float(v) for _, v in wm.per_stage_boundary]
    decreasing = all(b <= a + 1e-12 for a, b in zip(trace, trace[1:]))
    if toeplitz.value == YES and (finite or (trace and trace[-1] < boundary_threshold and decreasing)):
        regular = Verdict(YES, {"per_stage_boundary": trace}, "boundary measure tends to 0")
    elif toeplitz.value == NO:
        regular = Verdict(NO, {}, "not Toeplitz")
    else:
        regular = Verdict(UNDETERMINED, {"per_stage_boundary": trace})

    # tautness evidence
    haar = haar_regularity_scan(B, table, N, haar_ratio)
    if B.primitive is False:
        taut = Verdict(NO, {"primitive": False}, "a taut set is primitive")
    elif B.scaled_behrend:
        taut = Verdict(NO, {"scaled_behrend_subset": B.scaled_behrend}, "B contains a scaled Behrend set")
    elif haar:
        f = haar[0]
        taut = Verdict(NO, {"haar_flag": {"k": f.k, "s_k": f.s, "n": f.n, "count": f.count}},
                       "a cylinder meets F_B with vanishing relative frequency")
    else:
        cut = sorted({10**j for j in range(1, 8) if 10**j < N})
        tails = light_tails_trace(B, cut, N) if cut else []
        vals = [v for _, v in tails]
        if finite or (vals and vals[-1] < boundary_threshold and all(b <= a for a, b in zip(vals, vals[1:]))):
            taut = Verdict(YES, {"light_tails": tails}, "light tails")
        else:
            taut = Verdict(UNDETERMINED, {"light_tails": tails})

    # Y-membership of eta
    block = sieve_eta(B, -y_window, y_window)
    ys = []
    for b in B.elements_up_to(y_bmax):
        cov = residue_coverage(block, b)
        ys.append({"b": b, "hit": len(cov.residues_hit), "missed": list(cov.missed), "y_evidence": cov.y_evidence})

    return ClassificationReport(B.config(), proximal, toeplitz, toeplitz, regular, taut, ys,
                                mef_descriptor(table), wm, haar, notes)
