"""The rational queer R-matrix: build it, then check the equations it satisfies."""

from qaybe import verify as V
from qaybe.families import r_rational
from qaybe.graded import make_space

N = 2
h, u, v, w = 0.37 + 0.21j, 0.23 + 0.11j, -0.41 + 0.17j, 0.52 - 0.33j
R = r_rational(make_space(N), h, u, v)
print(f"R(h,u,v) on C^{{{N}|{N}}}⊗2: {R.shape[0]}x{R.shape[1]}, {R.nnz} nonzeros")

checks = [
    V.aybe_residual("rational", 0.3 + 0.2j, -0.1 + 0.4j, u, v, w, N),
    V.qybe_residual("rational", h, u, v, w, N),
    V.unitarity_check("rational", h, u, v, N),
    V.skew_check("rational", h, u, v, N),
    V.expansion_check_rational(u, v, [h, 10.0], N),
]
for c in checks:
    print(f"{c.identity.value:20s} rel residual {c.residual_rel:.2e}  {'ok' if c.passed else 'FAILED'}")

# the associative equation implies the quantum one, step by step
for c in V.lemma1_steps("rational", h, u, v, w, N):
    print(f"  {c.label:55s} {c.residual_rel:.2e}")
