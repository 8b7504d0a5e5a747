"""Z2-graded space C^{N|N}, graded tensor products and leg embeddings.

Operators on ``k`` tensor legs are stored as sparse ``(2N)^k x (2N)^k``
matrices.  Multi-indices are flattened with radix ``2N``, leg 1 most
significant, which is the ordering used by :func:`numpy.kron`.  With the
Koszul signs folded into the stored entries, products in the graded algebra
``End(C^{N|N})^{⊗k}`` become ordinary matrix products.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

__all__ = [
    "DROP_TOL",
    "Superspace",
    "GradedOp",
    "HomogeneousSplit",
    "make_space",
    "matrix_unit",
    "identity",
    "zero",
    "from_terms",
    "graded_tensor",
    "compose",
    "leg_permutation",
    "embed",
    "split_homogeneous",
    "op_add",
    "op_sub",
    "op_scale",
    "op_norm_max",
]

# relative threshold for pruning arithmetic results
DROP_TOL = 1e-14


@dataclass(frozen=True)
class Superspace:
    """The graded space C^{N|N} with basis e_{+1..+N}, e_{-1..-N}.

    Positives come first, then negatives, each ascending by absolute value,
    so ``N=2`` gives positions ``{+1: 0, +2: 1, -1: 2, -2: 3}``.
    """

    N: int

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")

    @property
    def dim(self) -> int:
        return 2 * self.N

    @property
    def basis(self) -> tuple[int, ...]:
        return tuple(range(1, self.N + 1)) + tuple(-a for a in range(1, self.N + 1))

    def parity(self, i: int) -> int:
        self.check_index(i)
        return 0 if i > 0 else 1

    def position(self, i: int) -> int:
        self.check_index(i)
        return i - 1 if i > 0 else self.N - i - 1

    def index(self, pos: int) -> int:
        if not 0 <= pos < self.dim:
            raise ValueError(f"position {pos} out of range for N={self.N}")
        return pos + 1 if pos < self.N else -(pos - self.N + 1)

    def check_index(self, i: int) -> None:
        if not (isinstance(i, (int, np.integer)) and i != 0 and abs(i) <= self.N):
            raise ValueError(f"invalid signed index {i!r} for N={self.N}")

    def parities(self, legs: int = 1) -> np.ndarray:
        """Parity (0/1) of every flattened basis multi-index on ``legs`` legs."""
        return _parities(self.N, legs)

    def signs(self, legs: int = 1) -> np.ndarray:
        """(-1)^parity for every flattened multi-index on ``legs`` legs."""
        return 1 - 2 * _parities(self.N, legs)


@lru_cache(maxsize=None)
def _parities(N: int, legs: int) -> np.ndarray:
    one = np.r_[np.zeros(N, dtype=np.int8), np.ones(N, dtype=np.int8)]
    p = np.zeros(1, dtype=np.int8)
    for _ in range(legs):
        p = ((p[:, None] + one[None, :]) % 2).ravel()
    p.setflags(write=False)
    return p


def make_space(N: int) -> Superspace:
    return Superspace(int(N) if isinstance(N, np.integer) else N)


@dataclass(frozen=True, eq=False)
class GradedOp:
    """Sparse operator on ``legs`` tensor copies of C^{N|N}.

    ``mat`` is a CSR matrix whose entries already carry the Koszul signs of
    the graded tensor product.  Instances are treated as immutable.
    """

    space: Superspace
    legs: int
    mat: sp.csr_matrix = field(repr=False)

    def __post_init__(self):
        d = self.space.dim ** self.legs
        if self.mat.shape != (d, d):
            raise ValueError(f"matrix shape {self.mat.shape} does not match {self.legs} legs of N={self.space.N}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.mat.shape

    @property
    def nnz(self) -> int:
        return self.mat.count_nonzero()

    @property
    def degree(self) -> int | None:
        """0 or 1 for homogeneous operators, ``None`` for mixed ones."""
        coo = self.mat.tocoo()
        mask = coo.data != 0
        if not mask.any():
            return 0
        p = self.space.parities(self.legs)
        degs = (p[coo.row[mask]] + p[coo.col[mask]]) % 2
        if np.all(degs == 0):
            return 0
        if np.all(degs == 1):
            return 1
        return None

    def toarray(self) -> np.ndarray:
        return self.mat.toarray()

    def entry(self, rows: Sequence[int], cols: Sequence[int]) -> complex:
        """Entry at signed row/column multi-indices."""
        return complex(self.mat[_flat(self.space, rows), _flat(self.space, cols)])

    def entries(self) -> dict[tuple[tuple[int, ...], tuple[int, ...]], complex]:
        """Nonzero entries keyed by signed (row, column) multi-indices."""
        coo = self.mat.tocoo()
        out = {}
        for r, c, val in zip(coo.row, coo.col, coo.data):
            if val != 0:
                out[(_unflat(self.space, r, self.legs), _unflat(self.space, c, self.legs))] = complex(val)
        return out

    def __add__(self, other: GradedOp) -> GradedOp:
        return op_add(self, other)

    def __sub__(self, other: GradedOp) -> GradedOp:
        return op_sub(self, other)

    def __neg__(self) -> GradedOp:
        return op_scale(self, -1)

    def __mul__(self, c) -> GradedOp:
        return op_scale(self, c)

    __rmul__ = __mul__

    def __truediv__(self, c) -> GradedOp:
        return op_scale(self, 1 / c)

    def __matmul__(self, other: GradedOp) -> GradedOp:
        return compose(self, other)


@dataclass(frozen=True)
class HomogeneousSplit:
    even: GradedOp
    odd: GradedOp


def _flat(space: Superspace, idx: Sequence[int]) -> int:
    out = 0
    for i in idx:
        out = out * space.dim + space.position(i)
    return out


def _unflat(space: Superspace, flat: int, legs: int) -> tuple[int, ...]:
    digits = []
    for _ in range(legs):
        flat, r = divmod(int(flat), space.dim)
        digits.append(space.index(r))
    return tuple(reversed(digits))


def _wrap(space, legs, mat, prune=True) -> GradedOp:
    mat = sp.csr_matrix(mat, dtype=complex)
    if prune and mat.nnz:
        cut = DROP_TOL * np.abs(mat.data).max()
        mat.data[np.abs(mat.data) <= cut] = 0
        mat.eliminate_zeros()
    return GradedOp(space, legs, mat)


def _same_space(A: GradedOp, B: GradedOp) -> None:
    if A.space != B.space:
        raise ValueError(f"operators live on different spaces (N={A.space.N} vs N={B.space.N})")


def _same_shape(A: GradedOp, B: GradedOp) -> None:
    _same_space(A, B)
    if A.legs != B.legs:
        raise ValueError(f"leg-count mismatch: {A.legs} vs {B.legs}")


def matrix_unit(space: Superspace, i: int, j: int) -> GradedOp:
    """The one-leg matrix unit e_{ij}, e_{ij} e_k = δ_{jk} e_i."""
    d = space.dim
    mat = sp.csr_matrix(([1.0 + 0j], ([space.position(i)], [space.position(j)])), shape=(d, d))
    return GradedOp(space, 1, mat)


def identity(space: Superspace, legs: int = 1) -> GradedOp:
    return GradedOp(space, legs, sp.identity(space.dim ** legs, dtype=complex, format="csr"))


def zero(space: Superspace, legs: int = 1) -> GradedOp:
    d = space.dim ** legs
    return GradedOp(space, legs, sp.csr_matrix((d, d), dtype=complex))


def from_terms(space: Superspace, terms: Iterable[tuple[complex, Sequence[tuple[int, int]]]]) -> GradedOp:
    """Sum of coefficient times graded tensor products of matrix units.

    Each term is ``(c, ((i1, j1), ..., (ik, jk)))`` standing for
    ``c * e_{i1 j1} ⊗ ... ⊗ e_{ik jk}``.  The stored entry picks up
    ``(-1)^{deg e_b * p(j_a)}`` for every pair of factors ``a < b``, which is
    what iterated :func:`graded_tensor` produces.  No pruning is applied.
    """
    rows, cols, vals = [], [], []
    legs = None
    for coeff, units in terms:
        if legs is None:
            legs = len(units)
        elif len(units) != legs:
            raise ValueError("all terms must have the same number of legs")
        r = c = 0
        col_parity = 0
        sign = 1
        for i, j in units:
            deg = (space.parity(i) + space.parity(j)) % 2
            if deg and col_parity:
                sign = -sign
            col_parity ^= space.parity(j)
            r = r * space.dim + space.position(i)
            c = c * space.dim + space.position(j)
        rows.append(r)
        cols.append(c)
        vals.append(sign * complex(coeff))
    if legs is None:
        raise ValueError("from_terms needs at least one term")
    d = space.dim ** legs
    mat = sp.coo_matrix((vals, (rows, cols)), shape=(d, d), dtype=complex).tocsr()
    mat.sum_duplicates()
    mat.eliminate_zeros()
    return GradedOp(space, legs, mat)


def split_homogeneous(A: GradedOp) -> HomogeneousSplit:
    coo = A.mat.tocoo()
    p = A.space.parities(A.legs)
    odd = ((p[coo.row] + p[coo.col]) % 2).astype(bool)
    shape = coo.shape
    even_m = sp.csr_matrix((coo.data[~odd], (coo.row[~odd], coo.col[~odd])), shape=shape)
    odd_m = sp.csr_matrix((coo.data[odd], (coo.row[odd], coo.col[odd])), shape=shape)
    return HomogeneousSplit(GradedOp(A.space, A.legs, even_m), GradedOp(A.space, A.legs, odd_m))


def graded_tensor(A: GradedOp, B: GradedOp) -> GradedOp:
    """Graded tensor product A ⊗ B on ``A.legs + B.legs`` legs.

    The odd part of ``B`` acquires ``(-1)^{parity of A's column index}``,
    i.e. ``(a ⊗ b)(v1 ⊗ v2) = (-1)^{deg b deg v1} a v1 ⊗ b v2``.
    """
    _same_space(A, B)
    parts = split_homogeneous(B)
    z = sp.diags(A.space.signs(A.legs).astype(complex))
    mat = sp.kron(A.mat, parts.even.mat, format="csr")
    if parts.odd.mat.nnz:
        mat = mat + sp.kron(A.mat @ z, parts.odd.mat, format="csr")
    return _wrap(A.space, A.legs + B.legs, mat, prune=False)


def compose(A: GradedOp, B: GradedOp) -> GradedOp:
    _same_shape(A, B)
    return _wrap(A.space, A.legs, A.mat @ B.mat)


@lru_cache(maxsize=64)
def _leg_permutation_matrix(N: int, perm: tuple[int, ...]) -> sp.csr_matrix:
    space = Superspace(N)
    m = len(perm)
    d = space.dim
    total = d ** m
    digits = np.indices((d,) * m).reshape(m, total)  # digits[t] = position on leg t
    par = (digits >= N).astype(np.int8)
    # leg t moves to slot perm[t]
    new = np.empty_like(digits)
    for t, dest in enumerate(perm):
        new[dest] = digits[t]
    rows = np.zeros(total, dtype=np.int64)
    for slot in range(m):
        rows = rows * d + new[slot]
    cols = np.arange(total, dtype=np.int64)
    sign = np.zeros(total, dtype=np.int8)
    for s in range(m):
        for t in range(s + 1, m):
            if perm[s] > perm[t]:
                sign ^= par[s] & par[t]
    vals = (1 - 2 * sign.astype(np.float64)).astype(complex)
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(total, total))
    return mat


def leg_permutation(space: Superspace, perm: Sequence[int]) -> GradedOp:
    """Graded operator moving the factor on leg ``t`` to leg ``perm[t]``.

    Legs are 0-based here.  The Koszul sign is ``(-1)^{p p'}`` for every
    pair of factors whose relative order is swapped; for ``perm=(1, 0)`` this
    is the superpermutation P12.
    """
    perm = tuple(int(x) for x in perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValueError(f"not a permutation: {perm}")
    return GradedOp(space, len(perm), _leg_permutation_matrix(space.N, perm))


def embed(A: GradedOp, positions: Sequence[int], m: int) -> GradedOp:
    """Place the k-leg operator ``A`` on legs ``positions`` (1-based) of ``m``.

    Built as ``A ⊗ Id^{⊗(m-k)}`` conjugated by the graded leg permutation
    that carries legs ``1..k`` to ``positions``.
    """
    positions = tuple(int(q) for q in positions)
    k = A.legs
    if len(positions) != k:
        raise ValueError(f"need {k} positions, got {len(positions)}")
    if len(set(positions)) != k:
        raise ValueError(f"duplicate positions {positions}")
    if any(not 1 <= q <= m for q in positions):
        raise ValueError(f"positions {positions} out of range 1..{m}")
    if list(positions) != sorted(positions):
        raise ValueError(f"positions must be ascending, got {positions}")
    if m == k:
        return A
    big = graded_tensor(A, identity(A.space, m - k))
    if positions == tuple(range(1, k + 1)):
        return big
    rest = [q for q in range(1, m + 1) if q not in positions]
    perm = tuple(q - 1 for q in positions + tuple(rest))
    inv = [0] * m
    for t, dest in enumerate(perm):
        inv[dest] = t
    fwd = _leg_permutation_matrix(A.space.N, perm)
    back = _leg_permutation_matrix(A.space.N, tuple(inv))
    return _wrap(A.space, m, fwd @ big.mat @ back, prune=False)


def op_add(A: GradedOp, B: GradedOp) -> GradedOp:
    _same_shape(A, B)
    return _wrap(A.space, A.legs, A.mat + B.mat)


def op_sub(A: GradedOp, B: GradedOp) -> GradedOp:
    _same_shape(A, B)
    return _wrap(A.space, A.legs, A.mat - B.mat)


def op_scale(A: GradedOp, c) -> GradedOp:
    return _wrap(A.space, A.legs, A.mat * complex(c), prune=False)


def op_norm_max(A: GradedOp) -> float:
    """Largest absolute entry."""
    if A.mat.nnz == 0:
        return 0.0
    return float(np.abs(A.mat.data).max())
