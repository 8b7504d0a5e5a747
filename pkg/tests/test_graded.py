import numpy as np
import pytest
from hypothesis import given, strategies as st

from qaybe.graded import (compose, embed, from_terms, graded_tensor, identity, leg_permutation, make_space,
                          matrix_unit, op_norm_max, op_scale, op_sub, split_homogeneous, zero)
from qaybe.operators import superpermutation

from oracle import dense_from_terms, dense_superpermutation, insert_identity, terms_of


def unit_pairs(N):
    idx = st.sampled_from([i for i in range(-N, N + 1) if i])
    return st.tuples(idx, idx)


@st.composite
def random_terms(draw, N, legs, max_terms=4):
    n = draw(st.integers(1, max_terms))
    coeff = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
    return [(draw(coeff), tuple(draw(unit_pairs(N)) for _ in range(legs))) for _ in range(n)]


def test_space_basics():
    s1 = make_space(1)
    assert s1.basis == (1, -1)
    assert (s1.parity(1), s1.parity(-1)) == (0, 1)
    s3 = make_space(3)
    assert len(s3.basis) == 6
    assert sorted(s3.parity(i) for i in s3.basis) == [0, 0, 0, 1, 1, 1]
    s2 = make_space(2)
    assert {i: s2.position(i) for i in s2.basis} == {1: 0, 2: 1, -1: 2, -2: 3}
    assert all(s2.index(s2.position(i)) == i for i in s2.basis)


@pytest.mark.parametrize("bad", [0, -1, 1.5])
def test_space_rejects_bad_N(bad):
    with pytest.raises(ValueError):
        make_space(bad)


def test_invalid_index():
    s = make_space(2)
    for bad in (0, 3, -3):
        with pytest.raises(ValueError):
            matrix_unit(s, bad, 1)


def test_matrix_units():
    s1 = make_space(1)
    e = matrix_unit(s1, 1, -1)
    assert e.degree == 1 and e.nnz == 1
    s2 = make_space(2)
    e22 = matrix_unit(s2, 2, 2)
    assert e22.degree == 0
    assert op_norm_max(compose(e22, e22) - e22) == 0
    prod = compose(matrix_unit(s1, 1, -1), matrix_unit(s1, -1, 1))
    assert op_norm_max(prod - matrix_unit(s1, 1, 1)) == 0


def test_tensor_examples():
    s1 = make_space(1)
    assert op_norm_max(graded_tensor(identity(s1), identity(s1)) - identity(s1, 2)) == 0
    e = matrix_unit(s1, -1, 1)
    I = identity(s1)
    lhs = compose(graded_tensor(I, e), graded_tensor(e, I))
    assert op_norm_max(lhs + graded_tensor(e, e)) == 0

    s2 = make_space(2)
    T = graded_tensor(matrix_unit(s2, 1, 2), matrix_unit(s2, -1, -2))
    v = np.zeros(16)
    v[s2.position(2) * 4 + s2.position(-2)] = 1
    w = T.mat @ v
    expect = np.zeros(16)
    expect[s2.position(1) * 4 + s2.position(-1)] = 1
    assert np.array_equal(w, expect)


@pytest.mark.parametrize("N", [1, 2])
@given(data=st.data())
def test_from_terms_matches_oracle(N, data):
    terms = data.draw(random_terms(N, data.draw(st.integers(1, 3))))
    A = from_terms(make_space(N), terms)
    assert np.allclose(A.toarray(), dense_from_terms(N, terms), atol=1e-14)


@pytest.mark.parametrize("N", [1, 2])
@given(data=st.data())
def test_product_rule(N, data):
    """(a1 ⊗ b1)(a2 ⊗ b2) = (-1)^{deg b1 deg a2} a1 a2 ⊗ b1 b2."""
    s = make_space(N)
    units = [matrix_unit(s, *data.draw(unit_pairs(N))) for _ in range(4)]
    a1, b1, a2, b2 = units
    lhs = compose(graded_tensor(a1, b1), graded_tensor(a2, b2))
    sign = (-1) ** (b1.degree * a2.degree)
    rhs = graded_tensor(compose(a1, a2), compose(b1, b2)) * sign
    assert op_norm_max(lhs - rhs) == 0


@given(data=st.data())
def test_tensor_associative(data):
    s = make_space(2)
    A, B, C = (from_terms(s, data.draw(random_terms(2, 1))) for _ in range(3))
    left = graded_tensor(graded_tensor(A, B), C)
    right = graded_tensor(A, graded_tensor(B, C))
    assert op_norm_max(left - right) <= 1e-13 * max(1.0, op_norm_max(left))


@given(data=st.data())
def test_from_terms_is_iterated_tensor(data):
    s = make_space(2)
    units = [data.draw(unit_pairs(2)) for _ in range(3)]
    direct = from_terms(s, [(1, tuple(units))])
    built = graded_tensor(graded_tensor(matrix_unit(s, *units[0]), matrix_unit(s, *units[1])),
                          matrix_unit(s, *units[2]))
    assert op_norm_max(direct - built) == 0


@given(data=st.data())
def test_degree_and_split(data):
    s = make_space(2)
    A = from_terms(s, data.draw(random_terms(2, 2, max_terms=6)))
    parts = split_homogeneous(A)
    assert op_norm_max(parts.even + parts.odd - A) <= 1e-14 * op_norm_max(A)
    assert parts.even.degree == 0
    assert parts.odd.degree == 1 or parts.odd.nnz == 0
    p = s.parities(2)
    coo = A.mat.tocoo()
    if A.degree is not None:
        assert all((p[r] + p[c]) % 2 == A.degree for r, c in zip(coo.row, coo.col))


@pytest.mark.parametrize("N", [1, 2])
@pytest.mark.parametrize("positions,slot", [((1, 2), 2), ((1, 3), 1), ((2, 3), 0)])
def test_embed_matches_identity_insertion(N, positions, slot, rng):
    s = make_space(N)
    terms = [(complex(*rng.normal(size=2)), ((int(a), int(b)), (int(c), int(d))))
             for a, b, c, d in rng.choice([i for i in range(-N, N + 1) if i], size=(6, 4))]
    X = from_terms(s, terms)
    emb = embed(X, positions, 3)
    ref = dense_from_terms(N, insert_identity(N, terms_of(X), slot))
    assert np.allclose(emb.toarray(), ref, atol=1e-13)


def test_embed_one_leg_and_errors():
    s = make_space(2)
    e = matrix_unit(s, 1, -2)
    mid = embed(e, (2,), 3)
    ref = graded_tensor(graded_tensor(identity(s), e), identity(s))
    assert op_norm_max(mid - ref) == 0
    X = superpermutation(s)
    assert embed(X, (1, 2), 2) is X
    for bad in [((1, 1), 3), ((0, 2), 3), ((1, 4), 3), ((3, 1), 3), ((1,), 3)]:
        with pytest.raises(ValueError):
            embed(X, *bad)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_leg_permutation_is_superpermutation(N):
    s = make_space(N)
    assert np.array_equal(leg_permutation(s, (1, 0)).toarray(), dense_superpermutation(N))
    with pytest.raises(ValueError):
        leg_permutation(s, (0, 0))


def test_arithmetic():
    s = make_space(2)
    P = superpermutation(s)
    Z = op_sub(P, P)
    assert Z.nnz == 0 and op_norm_max(Z) == 0
    assert op_norm_max(op_scale(identity(s), 2 - 1j)) == pytest.approx(abs(2 - 1j))
    for N in (1, 2, 3, 4):
        assert op_norm_max(superpermutation(make_space(N))) == 1
    assert op_norm_max(zero(s, 3)) == 0
    with pytest.raises(ValueError):
        compose(P, identity(s))
    with pytest.raises(ValueError):
        compose(identity(make_space(1)), identity(s))


def test_no_stored_zeros():
    s = make_space(2)
    P = superpermutation(s)
    D = compose(P, P) - identity(s, 2)
    assert D.nnz == 0
    assert not np.any(compose(P, P).mat.data == 0)
