"""Dense reference constructions built directly from the action on basis
vectors, independent of the sparse kron/permutation machinery."""

import itertools

import numpy as np


def basis(N):
    return list(range(1, N + 1)) + [-a for a in range(1, N + 1)]


def par(i):
    return 0 if i > 0 else 1


def flat(N, idx):
    pos = {i: k for k, i in enumerate(basis(N))}
    out = 0
    for i in idx:
        out = out * 2 * N + pos[i]
    return out


def act_units(N, units, vec):
    """(e_{i1 j1} ⊗ ... ⊗ e_{ik jk}) applied to e_{l1} ⊗ ... ⊗ e_{lk}.

    Returns (sign, image multi-index) or None.  Each factor e_b passes the
    vectors v_a, a < b, and picks up (-1)^{deg e_b * p(v_a)}.
    """
    sign = 1
    out = []
    for b, (i, j) in enumerate(units):
        if vec[b] != j:
            return None
        deg_b = (par(i) + par(j)) % 2
        for a in range(b):
            if deg_b and par(vec[a]):
                sign = -sign
        out.append(i)
    return sign, tuple(out)


def dense_from_terms(N, terms):
    terms = list(terms)
    k = len(terms[0][1])
    d = (2 * N) ** k
    M = np.zeros((d, d), dtype=complex)
    for vec in itertools.product(basis(N), repeat=k):
        col = flat(N, vec)
        for c, units in terms:
            hit = act_units(N, units, vec)
            if hit is not None:
                s, img = hit
                M[flat(N, img), col] += s * c
    return M


def dense_superpermutation(N):
    """P(e_a ⊗ e_b) = (-1)^{p_a p_b} e_b ⊗ e_a."""
    d = (2 * N) ** 2
    M = np.zeros((d, d), dtype=complex)
    for a, b in itertools.product(basis(N), repeat=2):
        M[flat(N, (b, a)), flat(N, (a, b))] = (-1) ** (par(a) * par(b))
    return M


def dense_j(N):
    """J e_k = (-1)^{p_{-k}} e_{-k}."""
    d = 2 * N
    M = np.zeros((d, d), dtype=complex)
    for k in basis(N):
        M[flat(N, (-k,)), flat(N, (k,))] = (-1) ** par(-k)
    return M


def terms_of(A):
    """Coefficients of e ⊗ ... ⊗ e for a GradedOp, using the oracle's signs."""
    N, k = A.space.N, A.legs
    out = []
    for (rows, cols), val in A.entries().items():
        s, _ = act_units(N, list(zip(rows, cols)), cols)
        out.append((val * s, tuple(zip(rows, cols))))
    return out


def insert_identity(N, terms, slot):
    """Insert a 1 factor at position ``slot`` (0-based) of every term."""
    out = []
    for c, units in terms:
        for m in basis(N):
            u = list(units)
            u.insert(slot, (m, m))
            out.append((c, tuple(u)))
    return out


def dense_leg32(N, terms):
    """Σ c x ⊗ y  ->  Σ c (-1)^{|x||y|} 1 ⊗ y ⊗ x."""
    out = []
    for c, (x, y) in terms:
        dx, dy = (par(x[0]) + par(x[1])) % 2, (par(y[0]) + par(y[1])) % 2
        for m in basis(N):
            out.append((c * (-1) ** (dx * dy), ((m, m), y, x)))
    return dense_from_terms(N, out)
