# %% [markdown]
# # Window measures and dynamical verdicts
#
# `classify` returns tri-state verdicts, each with the finite data that
# supports it.  Counting-based numbers are estimates on [1, N].

# %%
from bfree.bset import Ape1BSet, Power2BSet, PrimeSquaresBSet, PrimesBSet, TwoThreeBSet
from bfree.window import classify

N = 10**6
families = [PrimesBSet(), PrimeSquaresBSet(), TwoThreeBSet(), Power2BSet(K=8), Ape1BSet()]
print(f"{'family':>14} {'proximal':>9} {'toeplitz':>9} {'regular':>9} {'taut':>13} {'m(W)':>9} {'m(int W)':>9}  MEF")
for B in families:
    r = classify(B, N=N, depth=6)
    print(f"{B.family:>14} {r.proximal.value:>9} {r.toeplitz.value:>9} {r.regular_toeplitz.value:>9} "
          f"{r.taut_evidence.value:>13} {float(r.window.m_W.value):>9.5f} {float(r.window.m_intW.value):>9.5f}  "
          f"{r.mef.label}")

# %% A proximality certificate is a pairwise coprime chain inside B
r = classify(PrimesBSet(), N=N, depth=6)
print("\ncoprime chain:", r.proximal.certificate["coprime_chain"])

# %% Non-tautness evidence for ape1: a cylinder with very few free points
r = classify(Ape1BSet(), N=N, depth=3)
for f in r.haar_flags[:3]:
    print(f"stage {f.k}: n = {f.n} mod {f.s} holds {f.count} free numbers, about {f.scale:.0f} expected")

# %% Power2: the boundary measure per stage falls to zero
r = classify(Power2BSet(K=8), N=N, depth=8)
for k, v in r.window.per_stage_boundary:
    print(f"k = {k:>2}: boundary measure at most {float(v):.6f}")
