import numpy as np
import pytest
from hypothesis import given

from qaybe import families as fam
from qaybe.families import CrossCheckError, PoleError, RFamily, SpectralPoint
from qaybe.graded import compose, identity, make_space, op_norm_max
from qaybe.operators import commutes_with_j, eta_on_leg, j_leg, superpermutation, swap_legs

from conftest import box, generic

NS = [1, 2, 3]

# mpmath at 30 digits (values rounded to 15 significant digits)
PHI_TRIG_AT = ((0.3 + 0.2j, -0.45 + 0.35j), 1.17708531341623 - 4.83366709973118j)
POINT = (0.37 + 0.21j, 0.23 + 0.11j, -0.41 + 0.17j)
F_TRIG_AT_POINT = -4.07580337021536 - 9.10125003306784j
F_RATIONAL_AT_POINT = 4.20162520566100 - 13.4039824839784j


def rel(A, B):
    return fam.rel_diff(A, B)


def test_phi_trig_values():
    assert fam.phi_trig(0.25, 0.25) == pytest.approx(2 * np.pi, rel=1e-14)
    (h, u), val = PHI_TRIG_AT
    assert fam.phi_trig(h, u) == pytest.approx(val, rel=1e-13)


def test_unitarity_scalars_frozen():
    from qaybe.verify import unitarity_scalar
    h, u, v = POINT
    assert unitarity_scalar("trig", h, u, v) == pytest.approx(F_TRIG_AT_POINT, rel=1e-13)
    assert unitarity_scalar("rational", h, u, v) == pytest.approx(F_RATIONAL_AT_POINT, rel=1e-13)


@given(x=box, y=box, u=box, v=box)
def test_fay_trig(x, y, u, v):
    try:
        a, b, c = fam.fay_terms(lambda h, z: fam.phi_trig(h, z), x, y, u, v)
    except PoleError:
        return
    assert abs(a - b - c) <= 1e-11 * max(abs(a), abs(b), abs(c))


def test_pole_errors():
    s = make_space(2)
    with pytest.raises(PoleError):
        fam.phi_trig(1.01, 0.3)
    with pytest.raises(PoleError):
        fam.r_rational(s, 0.3, 0.2, 0.2 + 0.01j)
    with pytest.raises(PoleError):
        fam.r_trig(s, 0.3 + 0.1j, 0.5, -0.5)
    with pytest.raises(PoleError):
        fam.modified_aybe_rhs(make_space(3), 1.0, 0.2)
    assert issubclass(PoleError, ValueError)
    assert fam.int_distance(2.03 + 0.04j) == pytest.approx(0.05)


@pytest.mark.parametrize("N", NS)
def test_rational_routes_agree(N):
    s = make_space(N)
    h, u, v = POINT
    assert rel(fam.r_rational(s, h, u, v), fam.r_rational_sum(s, h, u, v)) <= 1e-15
    P = superpermutation(s)
    r = fam.classical_r_rational(s, u, v)
    expect = P / (u - v) + eta_on_leg(P, 2) / (u + v)
    assert rel(r, expect) <= 1e-15


@pytest.mark.parametrize("N", NS)
def test_s_const_structure(N):
    s = make_space(N)
    S = fam.s_const(s, 0.31 + 0.12j)
    assert commutes_with_j(S, 2)
    if N == 1:
        assert rel(fam.s_twisted(s, 0.31 + 0.12j), S) == 0


@pytest.mark.parametrize("N", NS)
def test_twist_operator(N):
    s = make_space(N)
    h = 0.29 - 0.33j
    F, Finv = fam.f_twist(s, h), fam.f_twist_inverse(s, h)
    assert op_norm_max(compose(F, Finv) - identity(s, 2)) <= 1e-15
    assert F.mat.count_nonzero() == (2 * N) ** 2
    assert np.count_nonzero(F.toarray() - np.diag(np.diag(F.toarray()))) == 0
    for leg in (1, 2):
        J = j_leg(s, leg, 2)
        assert op_norm_max(compose(F, J) - compose(J, F)) <= 1e-14
    if N == 1:
        assert op_norm_max(F - identity(s, 2)) == 0


@pytest.mark.parametrize("N", [1, 2, 3])
def test_gauge_operator(N):
    s = make_space(N)
    assert op_norm_max(fam.g_gauge(s, 0) - identity(s)) == 0
    u = 0.4 - 0.6j
    assert op_norm_max(compose(fam.g_gauge(s, u), fam.g_gauge_inverse(s, u)) - identity(s)) <= 1e-15


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_rcal_forms(N, rng):
    s = make_space(N)
    for h, u, v in (generic(rng, 3) for _ in range(5)):
        try:
            comp = fam.rcal_compositional(s, h, u, v)
            lit = fam.rcal_literal(s, h, u, v)
            hyp = fam.rcal_literal(s, h, u, v, hyperbolic=True)
        except PoleError:
            continue
        assert rel(comp, lit) <= 1e-12
        assert rel(comp, hyp) > 1e-3
        assert rel(fam.rcal(s, h, u, v), comp) == 0


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_trig_routes_and_dq(N, rng):
    s = make_space(N)
    for h, u, v in (generic(rng, 3) for _ in range(5)):
        try:
            lit = fam.r_trig_literal(s, h, u, v)
            via = fam.r_trig_via_gauge(s, h, u, v)
            R = fam.r_trig(s, h, u, v)
            D, Q = fam.d_part(s, h), fam.q_part(s, u, v)
        except PoleError:
            continue
        assert rel(lit, via) <= 1e-10
        assert rel(R, lit) == 0
        assert rel(D + Q, lit) <= 1e-14


def test_cross_check_error_raised(monkeypatch):
    s = make_space(2)
    h, u, v = POINT
    good = fam.r_trig_literal
    monkeypatch.setattr(fam, "r_trig_literal", lambda *a, **k: good(*a, **k) * 1.001)
    with pytest.raises(CrossCheckError):
        fam.r_trig(s, h, u, v)


def test_nnz_growth():
    counts = [fam.r_trig(make_space(N), *POINT).nnz for N in (1, 2, 3, 4, 8)]
    assert counts == [12 * N * N - 4 * N for N in (1, 2, 3, 4, 8)]


@pytest.mark.parametrize("N", [1, 2, 3])
def test_classical_trig_antisymmetric(N):
    s = make_space(N)
    u, v = 0.21 + 0.3j, -0.37 + 0.05j
    r12 = fam.classical_r_trig(s, u, v)
    assert rel(r12, -swap_legs(fam.classical_r_trig(s, v, u))) <= 1e-14


@pytest.mark.parametrize("N", [1, 2, 3])
def test_modified_rhs(N):
    s = make_space(N)
    rhs = fam.modified_aybe_rhs(s, 0.3 + 0.1j, -0.2 + 0.25j)
    if N < 3:
        assert rhs.nnz == 0
    else:
        assert rhs.nnz == 8 * N * (N - 1) * (N - 2)
        assert all(commutes_with_j(rhs, leg) for leg in (1, 2, 3))


def test_build_and_registry():
    s = make_space(2)
    pt = SpectralPoint(hbar=0.3 + 0.1j, u=0.2 - 0.1j, v=-0.3 + 0.2j)
    for tag in RFamily:
        X = fam.build(tag, s, pt)
        assert X.legs == (1 if tag is RFamily.G_GAUGE else 2)
    with pytest.raises(ValueError):
        fam.spectral_family("g-gauge", s)
    assert pt.as_dict()["u"] == [0.2, -0.1]
