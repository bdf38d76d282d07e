# %% [markdown]
# # Claims that did not survive
#
# Four groups stated to act freely turn out to fix a point. Each witness is
# checked exactly, and the repaired variants are shown next to them.

# %%
from pathlib import Path

from fixcert.fixlocus import verify_fixed_point_witness, verify_no_fixed_points
from fixcert.manifest import load_manifest

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def show(name, point, generators=None):
    m = load_manifest(CORPUS / f"{name}.fxl")
    gens = m.select_generators(generators)
    v = verify_no_fixed_points(m.variety, gens)
    pt = m.parse_point(point)
    print(f"{name}: fixed locus {v.status}; {point} fixed: {verify_fixed_point_witness(m.variety, gens, pt)}")


# %% [markdown]
# Power sums in P6 with a 3-cycle and a 4-cycle. The 4-cycle multiplies
# [0:0:0:1:i:-1:-i] by i, which is the same projective point.

# %%
show("a-1-3", [0, 0, 0, 1, "i", -1, "-i"])

# %% [markdown]
# The double cover of P3 in P(1,1,1,1,2): the four sign changes multiply to
# the scalar -1, which acts trivially, so the group is only (Z/2)^3 and
# [0:0:0:1:i] is fixed. Adding the covering involution repairs it.

# %%
show("a-1-1-d2", [0, 0, 0, 1, "i"])
tau = load_manifest(CORPUS / "a-1-1-d2-tau.fxl")
print("with the covering involution:", verify_no_fixed_points(tau.variety, tau.generators).status)

# %% [markdown]
# The nodal quartic double solid in P(1,1,1,1,2) has the same defect, away from the node.

# %%
show("a-2-8", [1, 0, 0, 0, "i"])

# %% [markdown]
# On the flag threefold x1*y1 + x2*y2 + x3*y3 = 0 in P2 x P2 the (3,3) group
# acts freely, but the two simultaneous sign flips both fix ([1:0:0],[0:1:0]).

# %%
show("a-2-32", [1, 0, 0, 0, 1, 0], ["cyc", "diag"])
show("a-2-32", [1, 0, 0, 0, 1, 0], ["f1", "f2"])
