"""Filtrations S_1 ⊂ S_2 ⊂ ... of B and the arithmetic attached to each stage.

For a stage S with ``s = lcm(S)`` the shadow ``A_S = {gcd(b, s) : b in B}``
is finite; ``c = lcm(prim A_S)`` is the minimal period of its multiples.
``d_k`` is the limit of ``gcd(s_k, c_l)`` as ``l`` grows, approximated by a
lookahead trace.  Elements that keep showing up in ``A_k \\ S_k`` are
candidates for the limsup set ``A_∞``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arith import FiniteSet, finite_set, lcm_chain, primitivize, factorize, valuation
from .bset import DEFAULT_HORIZON, BSet, ExplicitBSet
from .errors import ConfigError

DEFAULT_DEPTH = 8
DEFAULT_LOOKAHEAD = 6
DEFAULT_CONFIRM = 3
MAX_COMPLETION_STAGES = 256
MODES = ("prefix", "saturated", "native")


@dataclass(frozen=True)
class FiltrationStage:
    k: int
    S: FiniteSet
    s: int
    A: FiniteSet
    A_exact: bool
    primA: FiniteSet
    c: int
    new_elems: FiniteSet  # A \ S


@dataclass(frozen=True)
class DkEntry:
    k: int
    value: int
    stabilized: bool
    certified: bool
    trace: tuple[int, ...]


@dataclass(frozen=True)
class AInfinityCandidate:
    value: int
    first: int
    last: int
    count: int
    trailing_run: int
    status: str  # persistent | recurrent | transient


@dataclass
class FiltrationTable:
    B: BSet
    mode: str
    stages: list[FiltrationStage]
    complete: bool  # the last stage exhausts a finite B
    horizon: int = DEFAULT_HORIZON
    lookahead_stages: list[FiltrationStage] = field(default_factory=list)
    dk: list[DkEntry] | None = None
    a_infinity: list[AInfinityCandidate] | None = None

    @property
    def exact(self) -> bool:
        return all(st.A_exact for st in self.stages)

    @property
    def quotients(self) -> list[int] | None:
        if self.dk is None:
            return None
        return [st.s // d.value for st, d in zip(self.stages, self.dk)]

    def stage(self, k: int) -> FiltrationStage:
        return self.stages[k - 1]


def _stage(B: BSet, k: int, S: FiniteSet, horizon: int) -> FiltrationStage:
    s = lcm_chain(S)
    prof = B.gcd_profile(s, horizon)
    A = prof.gcds
    if not set(S) <= set(A):
        raise AssertionError("stage elements must lie in B")
    primA = primitivize(A)
    return FiltrationStage(k, S, s, A, prof.exact, primA, lcm_chain(primA),
                           finite_set(set(A) - set(S)))


def _saturate(B: BSet, S: FiniteSet, horizon: int) -> FiniteSet:
    # S' = B ∩ A_S has the same lcm as S, so one round reaches the fixpoint
    for _ in range(8):
        A = B.gcd_profile(lcm_chain(S), horizon).gcds
        S2 = finite_set(a for a in A if B.contains(a))
        if S2 == S:
            return S
        S = S2
    raise AssertionError("saturation did not reach a fixpoint")


def _stage_sets(B: BSet, depth: int, mode: str, horizon: int) -> tuple[list[FiniteSet], bool]:
    finite_elems = B.elements if isinstance(B, ExplicitBSet) else (
        B.elements_up_to(B.max_element()) if B.is_finite else None)
    if mode == "native":
        sets = B.native_stages(depth)
        if sets is None:
            raise ConfigError(f"family {B.family!r} has no native filtration; use prefix or saturated")
    elif mode == "prefix":
        first = B.first_elements(depth)
        sets = [finite_set(first[:k]) for k in range(1, len(first) + 1)]
    elif mode == "saturated":
        sets = []
        current: FiniteSet = ()
        for k in range(1, depth + 1):
            if finite_elems is not None and k == depth:
                nxt = finite_set(finite_elems)
            else:
                pool = B.first_elements(len(current) + 1)
                extra = [b for b in pool if b not in set(current)]
                if not extra:
                    break
                nxt = finite_set(current + (extra[0],))
            current = _saturate(B, nxt, horizon)
            if sets and current == sets[-1]:
                continue
            sets.append(current)
            if finite_elems is not None and set(current) == set(finite_elems):
                break
    else:
        raise ConfigError(f"mode must be one of {MODES}")
    if any(not set(a) < set(b) for a, b in zip(sets, sets[1:])):
        raise AssertionError("filtration stages must be strictly nested")
    complete = finite_elems is not None and bool(sets) and set(sets[-1]) == set(finite_elems)
    return sets, complete


def default_mode(B: BSet) -> str:
    return "native" if B.native_stages(1) is not None else "prefix"


def build_filtration(B: BSet, depth: int = DEFAULT_DEPTH, mode: str | None = None,
                     horizon: int = DEFAULT_HORIZON) -> FiltrationTable:
    """Stages ``S_1 ⊂ ... ⊂ S_depth`` with their shadows ``A_k`` and periods ``c_k``.

    ``prefix`` takes the k smallest elements, ``saturated`` closes each prefix
    under ``S -> B ∩ A_S``, ``native`` uses the family's own block filtration.
    A finite B may yield fewer stages than requested.
    """
    if depth < 1:
        raise ConfigError("depth must be >= 1")
    mode = mode or default_mode(B)
    sets, complete = _stage_sets(B, depth, mode, horizon)
    stages = [_stage(B, k, S, horizon) for k, S in enumerate(sets, start=1)]
    return FiltrationTable(B, mode, stages, complete, horizon)


def _extend(table: FiltrationTable, total: int) -> list[FiltrationStage]:
    """Stages 1..total (reusing the table's stages); may stop early for finite B."""
    have = table.stages + table.lookahead_stages
    if len(have) >= total or (have and table.complete) or _exhausted(table, have):
        return have
    sets, _ = _stage_sets(table.B, total, table.mode, table.horizon)
    extra = [_stage(table.B, k, S, table.horizon) for k, S in enumerate(sets, start=1) if k > len(have)]
    table.lookahead_stages = table.lookahead_stages + extra
    return have + extra


def _exhausted(table: FiltrationTable, have: list[FiltrationStage]) -> bool:
    B = table.B
    return B.is_finite and have and len(have[-1].S) == len(B.elements_up_to(B.max_element()))


def compute_dk(table: FiltrationTable, lookahead: int = DEFAULT_LOOKAHEAD,
               confirm: int = DEFAULT_CONFIRM) -> FiltrationTable:
    """Attach ``d_k`` traces ``gcd(s_k, c_{k+j})``, j = 0..lookahead.

    A value is *certified* when it cannot change any more (it equals ``s_k``,
    or the stages reach a stage that exhausts a finite B); it is *stabilized*
    when certified, or when the last ``confirm`` trace values agree and every
    shadow used was exact.
    """
    if lookahead < 0 or confirm < 1:
        raise ConfigError("need lookahead >= 0 and confirm >= 1")
    depth = len(table.stages)
    finite = table.B.is_finite
    total = depth + lookahead
    if finite:
        total = max(total, min(MAX_COMPLETION_STAGES, len(table.B.elements_up_to(table.B.max_element()))))
    stages = _extend(table, total)
    final_complete = finite and _exhausted(table, stages)
    entries = []
    for st in table.stages:
        later = stages[st.k - 1 : st.k + lookahead]
        if final_complete:
            later = stages[st.k - 1 :]
        trace = tuple(math.gcd(st.s, x.c) for x in later)
        value = trace[-1]
        exact = all(x.A_exact for x in later)
        certified = exact and (value == st.s or final_complete)
        stable = certified or (exact and len(trace) >= confirm and len(set(trace[-confirm:])) == 1)
        entries.append(DkEntry(st.k, value, stable, certified, trace))
    table.dk = entries
    return table


def detect_a_infinity(table: FiltrationTable) -> list[AInfinityCandidate]:
    """Persistence statistics for every element seen in some ``A_k \\ S_k``.

    *persistent*: present at every stage from some point through the last one
    (at least two stages); *recurrent*: seen at several stages but not at the
    end of a run through the last stage; *transient*: seen once.
    """
    if len(table.stages) < 3:
        raise ConfigError("need at least 3 stages")
    last = len(table.stages)
    seen: dict[int, list[int]] = {}
    for st in table.stages:
        for n in st.new_elems:
            seen.setdefault(n, []).append(st.k)
    out = []
    for n, ks in sorted(seen.items()):
        run = 0
        for k in range(last, 0, -1):
            if k in ks:
                run += 1
            else:
                break
        if run >= 2:
            status = "persistent"
        elif len(ks) >= 2:
            status = "recurrent"
        else:
            status = "transient"
        out.append(AInfinityCandidate(n, ks[0], ks[-1], len(ks), run, status))
    table.a_infinity = out
    return out


def persistent_values(table: FiltrationTable) -> FiniteSet:
    cands = table.a_infinity if table.a_infinity is not None else detect_a_infinity(table)
    return finite_set(c.value for c in cands if c.status == "persistent")


@dataclass(frozen=True)
class PrimeComponent:
    p: int
    valuation: int  # sup over the computed stages
    status: str  # capped | growing
    history: tuple[int, ...]


@dataclass(frozen=True)
class MefDescriptor:
    components: tuple[PrimeComponent, ...]
    new_primes_appearing: bool
    order: int | None  # finite group order when every component is capped
    label: str
    h_int_trivial: bool  # s_k = d_k at every stage
    tentative: bool


def mef_descriptor(table: FiltrationTable) -> MefDescriptor:
    """The inverse limit of ``Z / d_k Z`` described prime by prime."""
    if table.dk is None:
        compute_dk(table)
    ds = [d.value for d in table.dk]
    primes = sorted({p for d in ds for p in factorize(d)})
    comps = []
    for p in primes:
        hist = tuple(valuation(d, p) for d in ds)
        # a prime that only just appeared counts towards new_primes, not growth
        growing = len(hist) >= 2 and 0 < hist[-2] < hist[-1] and not table.complete
        comps.append(PrimeComponent(p, max(hist), "growing" if growing else "capped", hist))
    new_primes = (not table.complete and len(ds) >= 2
                  and any(ds[-2] % p for p in factorize(ds[-1])))
    finite = not new_primes and all(c.status == "capped" for c in comps)
    order = ds[-1] if finite else None
    if finite:
        label = "trivial" if order == 1 else f"Z/{order}Z"
    else:
        parts = [f"Z_{c.p}" if c.status == "growing" else f"Z/{c.p ** c.valuation}Z" for c in comps]
        label = " × ".join(parts + ["…"]) if new_primes else " × ".join(parts)
    h_int_trivial = all(st.s == d for st, d in zip(table.stages, ds))
    tentative = any(not d.stabilized for d in table.dk)
    return MefDescriptor(tuple(comps), new_primes, order, label, h_int_trivial, tentative)


def check_shadow_goes_back(table: FiltrationTable) -> bool:
    """``A_S = {gcd(a, lcm S) : a in A_{S'}}`` for each consecutive pair of stages."""
    for a, b in zip(table.stages, table.stages[1:]):
        if finite_set(math.gcd(x, a.s) for x in b.A) != a.A:
            return False
    return True

