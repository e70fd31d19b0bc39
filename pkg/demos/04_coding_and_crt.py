# %% [markdown]
# # Residue systems and the coding map
#
# A group element h is a choice of residues h_b; the coding phi(h) marks the
# integers i with h_b + i nonzero mod every b.  For h = 0 it is eta itself.

# %%
from bfree.bset import Mod12BSet, OddPrimesBSet
from bfree.crt import (
    CylinderSpec,
    HPoint,
    bfree_crt_search,
    block_containment_check,
    crt_solve,
    phi_block,
    theta_of_block,
)
from bfree.errors import IncompatibleResidues
from bfree.sieve import sieve_eta

# %% CRT over non-coprime moduli
print(crt_solve(CylinderSpec({4: 1, 6: 5})))
try:
    crt_solve(CylinderSpec({4: 1, 6: 2}))
except IncompatibleResidues as exc:
    print("incompatible pair:", exc.pair, exc.residues)

# %% The class 5 mod 12 is never free for the mod12 family
print("free points in 5 + 12Z up to 10^5:", bfree_crt_search(Mod12BSet(), CylinderSpec({4: 1, 6: 5}), 10**5).count)

# %% A coded block that eta never dominates
B = OddPrimesBSet()
h = HPoint({3: 0, 5: 1, 7: 0, 11: 0})
blk = phi_block(B, h, 0, 8)
print("phi(h) on [0, 8]:", "".join("1" if v else "0" for v in blk.bits))
hay = sieve_eta(B, -10**6, 10**6)
print("blocks of eta on [-10^6, 10^6] dominating 11001001:", block_containment_check("11001001", hay, "lower").positions)

# %% theta reads the residues back from the missed classes
th = theta_of_block(phi_block(B, h, 0, 5000), B, 11)
print({b: e.g for b, e in th.items()})
