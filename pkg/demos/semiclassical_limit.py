"""Laurent coefficients of the trigonometric R-matrix at small h."""

import numpy as np

from qaybe import families as fam
from qaybe import verify as V
from qaybe.graded import make_space
from qaybe.numerics import laurent_fit

N = 2
u, v = 0.3 + 0.2j, 0.1 - 0.4j
space = make_space(N)

fit = laurent_fit(lambda h: fam.r_trig(space, h, u, v, margin=1e-3, check=False).toarray(), 1e-2)
r = fam.classical_r_trig(space, u, v).toarray()
m = fam.m_trig(space).toarray()
print("c_-1 - Id   :", f"{np.abs(fit.c_minus1 - np.eye(r.shape[0])).max():.1e}")
print("c_0 - r     :", f"{np.abs(fit.c0 - r).max():.1e}")
print("c_1 - m     :", f"{np.abs(fit.c1 - m).max():.1e}")

for c in V.expansion_check_trig(u, v, 1e-2, N):
    print(f"{c.label:24s} {c.residual_abs:.1e} (tol {c.tol:.0e})")

# r satisfies the classical Yang-Baxter equation; the two half relations carry m
for c in [V.cybe_residual("classical-trig", u, v, 0.45 + 0.3j, N)] + \
        V.half_cybe_residual("classical-trig", u, v, 0.45 + 0.3j, N):
    print(f"  {c.label or c.identity.value:44s} {c.residual_rel:.1e}")
