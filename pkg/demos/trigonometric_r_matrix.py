"""Trigonometric solutions: the main formula, its twisted and gauged relatives,
and the one that only satisfies a modified associative equation."""

from qaybe import families as fam
from qaybe import verify as V
from qaybe.graded import make_space

N = 3
h, u, v = 0.29 + 0.18j, 0.21 - 0.35j, -0.43 + 0.12j
x, y, u1, u2, u3 = 0.31 + 0.2j, -0.27 + 0.41j, 0.13 - 0.35j, 0.44 + 0.12j, -0.52 + 0.23j
space = make_space(N)

R = fam.r_trig(space, h, u, v)  # raises if the two construction routes disagree
print(f"r_trig at N={N}: {R.nnz} nonzeros (12N^2 - 4N = {12 * N * N - 4 * N})")

print("AYBE, main formula   :", f"{V.aybe_residual('trig', x, y, u1, u2, u3, N).residual_rel:.1e}")
print("AYBE, untwisted rcal :", f"{V.aybe_residual('rcal', x, y, u1, u2, u3, N).residual_rel:.1e}  (fails)")
print("modified AYBE, rcal  :", f"{V.modified_aybe(x, y, u1, u2, u3, N).residual_rel:.1e}")

# rcal -> twisted rcal -> main formula
for c in V.twist_relations(h, u, v, N) + [V.gauge_relation(h, u, v, N)]:
    print(f"  {c.label or c.identity.value:28s} {c.residual_rel:.1e}")

# with coth in place of cot the literal form no longer matches S + tail
comp = fam.rcal_compositional(space, h, u, v)
print("literal vs S + tail, cot :", f"{fam.rel_diff(fam.rcal_literal(space, h, u, v), comp):.1e}")
print("literal vs S + tail, coth:", f"{fam.rel_diff(fam.rcal_literal(space, h, u, v, hyperbolic=True), comp):.1e}")
