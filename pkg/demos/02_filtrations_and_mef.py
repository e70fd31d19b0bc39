# %% [markdown]
# # Filtrations, shadows and the equicontinuous factor
#
# For a finite stage S of B the shadow A_S = {gcd(b, lcm S)} is a finite set.
# The numbers d_k = lim gcd(s_k, c_{k+j}) describe the maximal equicontinuous
# factor as an inverse limit of cyclic groups.

# %%
from bfree.bset import CascadeBSet, QFamilyBSet, TwoThreeBSet
from bfree.filtration import build_filtration, compute_dk, mef_descriptor, persistent_values


def show(B, depth):
    T = compute_dk(build_filtration(B, depth=depth))
    print(f"\n{B.family} ({T.mode} stages)")
    print(f"{'k':>2} {'s_k':>22} {'c_k':>12} {'d_k':>14} {'s_k/d_k':>14}  A_k \\ S_k")
    for st, d in zip(T.stages, T.dk):
        extra = list(st.new_elems)
        extra = extra if len(extra) <= 6 else extra[:6] + ["..."]
        print(f"{st.k:>2} {st.s:>22} {st.c:>12} {d.value:>14} {st.s // d.value:>14}  {extra}")
    mef = mef_descriptor(T)
    print("persistent elements of A_k \\ S_k:", persistent_values(T))
    print("MEF:", mef.label, "| s_k = d_k everywhere:", mef.h_int_trivial)


# %% Two-three: 2 and 3 are never in a stage yet always in its shadow
show(TwoThreeBSet(), 5)

# %% The cascade family: d_k grows with every stage
show(CascadeBSet(), 4)

# %% The q-family: pairs p_i p_j beyond stage k have gcd 1 with s_k,
# so 1 lies in every shadow and c_k = d_k = 1
show(QFamilyBSet(), 5)
