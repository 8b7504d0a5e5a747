"""Superpermutation, the odd element J, the automorphism η and Q(N)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .graded import (
    GradedOp,
    Superspace,
    compose,
    embed,
    from_terms,
    leg_permutation,
    op_add,
    op_norm_max,
    op_sub,
    split_homogeneous,
)

__all__ = [
    "QN_TOL",
    "StructuralOps",
    "structural_ops",
    "superpermutation",
    "j_operator",
    "j_leg",
    "eta_on_leg",
    "qn_basis",
    "is_in_qn",
    "commutes_with_j",
    "swap_legs",
    "three_leg_embeddings",
    "permutation_on",
]

QN_TOL = 1e-12


def superpermutation(space: Superspace) -> GradedOp:
    """P12 = Σ_{i,j} (-1)^{p_j} e_{ij} ⊗ e_{ji}, assembled with Koszul signs."""
    terms = (((-1) ** space.parity(j), ((i, j), (j, i))) for i in space.basis for j in space.basis)
    return from_terms(space, terms)


def j_operator(space: Superspace) -> GradedOp:
    """J = Σ_i (-1)^{p_i} e_{i,-i}; odd, J^2 = -Id."""
    return from_terms(space, (((-1) ** space.parity(i), ((i, -i),)) for i in space.basis))


def j_leg(space: Superspace, a: int, m: int) -> GradedOp:
    """J acting on leg ``a`` of ``m`` (1-based)."""
    if not 1 <= a <= m:
        raise ValueError(f"leg {a} out of range 1..{m}")
    return embed(j_operator(space), (a,), m)


def eta_on_leg(A: GradedOp, leg: int) -> GradedOp:
    """Apply η: e_{ij} -> e_{-i,-j} on one leg (1-based).

    Stored entries carry Koszul signs, so they are first converted back to
    the coefficients of e_{i1 j1} ⊗ ... ⊗ e_{ik jk}, relabelled, and signed
    again for the new indices.
    """
    space = A.space
    if not 1 <= leg <= A.legs:
        raise ValueError(f"leg {leg} out of range 1..{A.legs}")
    N, d = space.N, space.dim
    total = d ** A.legs
    flip1 = np.r_[np.arange(N, 2 * N), np.arange(0, N)]
    digits = np.indices((d,) * A.legs).reshape(A.legs, total)
    digits[leg - 1] = flip1[digits[leg - 1]]
    relabel = np.zeros(total, dtype=np.int64)
    for t in range(A.legs):
        relabel = relabel * d + digits[t]
    coo = A.mat.tocoo()
    new_r, new_c = relabel[coo.row], relabel[coo.col]
    data = coo.data * koszul_signs(space, A.legs, coo.row, coo.col) * koszul_signs(space, A.legs, new_r, new_c)
    return GradedOp(space, A.legs, sp.csr_matrix((data, (new_r, new_c)), shape=(total, total)))


def koszul_signs(space: Superspace, legs: int, rows, cols) -> np.ndarray:
    """Sign that :func:`~qaybe.graded.from_terms` attaches to each flattened (row, col)."""
    d, N = space.dim, space.N
    r = np.asarray(rows, dtype=np.int64)
    c = np.asarray(cols, dtype=np.int64)
    sign = np.zeros(r.shape, dtype=np.int8)
    col_par = np.zeros(r.shape, dtype=np.int8)
    for t in range(legs):
        scale = d ** (legs - 1 - t)
        rp = ((r // scale) % d >= N).astype(np.int8)
        cp = ((c // scale) % d >= N).astype(np.int8)
        sign ^= (rp ^ cp) & col_par
        col_par ^= cp
    return 1 - 2 * sign.astype(np.float64)


def qn_basis(space: Superspace) -> list[GradedOp]:
    """The 2N^2 elements e_{ab}+e_{-a,-b} and e_{a,-b}+e_{-a,b}, a,b = 1..N."""
    out = []
    rng = range(1, space.N + 1)
    for a in rng:
        for b in rng:
            out.append(from_terms(space, [(1, ((a, b),)), (1, ((-a, -b),))]))
    for a in rng:
        for b in rng:
            out.append(from_terms(space, [(1, ((a, -b),)), (1, ((-a, b),))]))
    return out


def commutes_with_j(A: GradedOp, leg: int = 1, tol: float = QN_TOL) -> bool:
    """Whether the supercommutator of ``A`` with J on ``leg`` vanishes.

    Even parts must commute with J, odd parts anticommute (J is odd).
    """
    J = j_leg(A.space, leg, A.legs)
    parts = split_homogeneous(A)
    comm = op_sub(compose(parts.even, J), compose(J, parts.even))
    comm = op_add(comm, op_add(compose(parts.odd, J), compose(J, parts.odd)))
    return op_norm_max(comm) <= tol * max(op_norm_max(A), 1e-300)


def is_in_qn(A: GradedOp, tol: float = QN_TOL) -> bool:
    """Membership of a one-leg operator in Q(N), the centralizer of J."""
    if A.legs != 1:
        raise ValueError("is_in_qn expects a one-leg operator; use commutes_with_j for tensors")
    return commutes_with_j(A, 1, tol)


def swap_legs(X: GradedOp) -> GradedOp:
    """X_{21} := P12 X_{12} P12."""
    if X.legs != 2:
        raise ValueError("swap_legs expects a two-leg operator")
    P = leg_permutation(X.space, (1, 0))
    return compose(compose(P, X), P)


def permutation_on(space: Superspace, a: int, b: int, m: int = 3) -> GradedOp:
    """Superpermutation P_{ab} on ``m`` legs."""
    lo, hi = sorted((a, b))
    return embed(superpermutation(space), (lo, hi), m)


def three_leg_embeddings(X: GradedOp) -> dict[str, GradedOp]:
    """X_{12}, X_{13}, X_{23} for a two-leg operator."""
    return {"12": embed(X, (1, 2), 3), "13": embed(X, (1, 3), 3), "23": embed(X, (2, 3), 3)}


@dataclass(frozen=True)
class StructuralOps:
    space: Superspace
    P12: GradedOp
    J: GradedOp
    qn_basis: list


def structural_ops(space: Superspace) -> StructuralOps:
    return StructuralOps(space, superpermutation(space), j_operator(space), qn_basis(space))

