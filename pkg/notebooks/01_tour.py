# %% [markdown]
# # A tour of fixcert
#
# Load a manifest, look at its group, and check the fixed-point claim by hand
# before running the whole job. Run with `python3 notebooks/01_tour.py`.

# %%
from pathlib import Path

from fixcert.autgroup import abelian_type, close_group
from fixcert.fixlocus import eigenspace_components, verify_no_fixed_points
from fixcert.geometry import is_smooth
from fixcert.jobs import run_job
from fixcert.manifest import load_manifest

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
m = load_manifest(CORPUS / "a-1-4.fxl")
print(m.title)

# %% [markdown]
# The six sign changes generate a group of order 64; modulo scalars nothing collapses.

# %%
G = close_group(m.generators)
print("order", G.order, "invariant factors", abelian_type(G).invariant_factors)

# %% [markdown]
# Every element is diagonal, so the common fixed locus is a union of joint
# eigenspaces: here the seven coordinate points. None of them satisfies the
# first quadric, so the action is free.

# %%
for comp in eigenspace_components(m.generators, m.ambient, m.field):
    print(comp.describe(m.ambient.coords))
print(verify_no_fixed_points(m.variety, m.generators).status)
print(is_smooth(m.variety).status)

# %% [markdown]
# The job runner does all of this, plus the real certificate, and returns a report.

# %%
report = run_job(m)
for c in report.claims:
    print(f"{c.kind:<18} {c.verdict}")
