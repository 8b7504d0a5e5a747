"""Koszul signs on C^{1|1} and C^{2|2}, worked by hand and by the library."""

import numpy as np

from qaybe.graded import compose, graded_tensor, identity, make_space, matrix_unit
from qaybe.operators import j_leg, j_operator, permutation_on, superpermutation

s = make_space(1)
print("basis of C^{1|1}:", s.basis, " parities:", [s.parity(i) for i in s.basis])

# an odd unit passing another odd unit picks up a minus sign
e = matrix_unit(s, -1, 1)
I = identity(s)
lhs = compose(graded_tensor(I, e), graded_tensor(e, I))
print("(1 ⊗ e)(e ⊗ 1) == -(e ⊗ e):", np.allclose(lhs.toarray(), -graded_tensor(e, e).toarray()))

# the superpermutation flips factors, with a sign for odd-odd pairs
P = superpermutation(s).toarray()
print("P on C^{1|1} ⊗ C^{1|1}:\n", P.real.astype(int))

# J is odd and squares to -1; copies on different legs anticommute
J = j_operator(s)
print("J^2 = -Id:", np.allclose(compose(J, J).toarray(), -np.eye(2)))
s2 = make_space(2)
J1, J2 = j_leg(s2, 1, 2), j_leg(s2, 2, 2)
print("J1 J2 = -J2 J1 (N=2):", np.allclose(compose(J1, J2).toarray(), -compose(J2, J1).toarray()))

# braid-type relations of leg swaps on three legs
P12, P13, P23 = (permutation_on(s2, a, b) for a, b in ((1, 2), (1, 3), (2, 3)))
print("P12 P23 = P13 P12 = P23 P13:",
      np.allclose(compose(P12, P23).toarray(), compose(P13, P12).toarray()),
      np.allclose(compose(P13, P12).toarray(), compose(P23, P13).toarray()))
