"""Scaled residuals for every identity: Yang-Baxter equations (associative,
quantum, classical), unitarity, skew-symmetry, twist/gauge relations, the
D/Q identities, proof steps and semiclassical expansions.

Each check returns :class:`IdentityCheck` records whose ``residual_rel`` is
the max-entry norm of ``LHS - RHS`` divided by the largest max-entry norm
among the summands.  Identities are evaluated in the form they are stated,
never rearranged.  Evaluations near a pole raise
:class:`~qaybe.families.PoleError`; callers treat that as a rejected sample.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import families as fam
from .families import PI, RFamily, SpectralPoint
from .graded import GradedOp, compose, identity, make_space, op_norm_max
from .numerics import laurent_fit
from .operators import j_leg, permutation_on, superpermutation, swap_legs, three_leg_embeddings

__all__ = [
    "Identity",
    "IdentityCheck",
    "RATIONAL_TOL",
    "TRIG_TOL",
    "scaled_residual",
    "unitarity_scalar",
    "fay_check",
    "aybe_residual",
    "qybe_residual",
    "unitarity_check",
    "skew_check",
    "modified_aybe",
    "const_qybe",
    "const_aybe",
    "twist_relations",
    "gauge_relation",
    "dq_identities",
    "proof_numerators",
    "lemma1_steps",
    "cybe_residual",
    "half_cybe_residual",
    "expansion_check_rational",
    "expansion_check_trig",
    "perturbed",
]

RATIONAL_TOL = 1e-10
TRIG_TOL = 1e-9


class Identity(str, enum.Enum):
    AYBE = "aybe"
    QYBE = "qybe"
    UNITARITY = "unitarity"
    SKEW = "skew"
    CYBE = "cybe"
    HALF_CYBE = "half-cybe"
    MODIFIED_AYBE = "modified-aybe"
    TWIST_REL = "twist-rel"
    GAUGE_REL = "gauge-rel"
    DQ_IDENTITIES = "dq-identities"
    PROOF_NUMERATORS = "proof-numerators"
    LEMMA1_STEPS = "lemma1-steps"
    CONST_QYBE_S = "const-qybe-s"
    CONST_AYBE_STWISTED = "const-aybe-stwisted"
    EXPANSION_RATIONAL = "expansion-rational"
    EXPANSION_TRIG = "expansion-trig"
    FAY = "fay"


@dataclass
class IdentityCheck:
    identity: Identity
    family: RFamily | None
    point: SpectralPoint
    residual_abs: float
    residual_rel: float
    tol: float
    label: str = ""
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.residual_rel <= self.tol)


def default_tol(family: RFamily | None) -> float:
    if family in (RFamily.RATIONAL, RFamily.CLASSICAL_RATIONAL):
        return RATIONAL_TOL
    return TRIG_TOL


def scaled_residual(terms: Sequence[GradedOp], signs: Sequence[int]) -> tuple[float, float]:
    """(abs, rel) for Σ signs[k] terms[k]."""
    total = terms[0] * signs[0]
    for t, s in zip(terms[1:], signs[1:]):
        total = total + t * s
    res = op_norm_max(total)
    scale = max(op_norm_max(t) for t in terms)
    return res, (res / scale if scale else res)


def _check(identity, family, point, terms, signs, tol, label="", **details) -> IdentityCheck:
    a, r = scaled_residual(terms, signs)
    return IdentityCheck(Identity(identity), family, point, a, r, tol, label, details)


def _family_fn(family, N, margin, check=True):
    return fam.spectral_family(family, make_space(N), margin, check=check)


def _legs(X: GradedOp, which: str) -> GradedOp:
    return three_leg_embeddings(X)[which]


def _leg32(X: GradedOp) -> GradedOp:
    """X_{32}: the two-leg operator placed on legs 3 and 2 (in that order)."""
    P23 = permutation_on(X.space, 2, 3)
    return compose(compose(P23, _legs(X, "23")), P23)


# --- scalar ---------------------------------------------------------------------

def fay_check(phi: Callable, x, y, u, v, tol: float = 1e-12, label: str = "") -> IdentityCheck:
    a, b, c = fam.fay_terms(phi, x, y, u, v)
    res = abs(a - b - c)
    scale = max(abs(a), abs(b), abs(c))
    return IdentityCheck(Identity.FAY, None, SpectralPoint(x=x, y=y, u=u, v=v), res,
                         res / scale if scale else res, tol, label)


# --- spectral Yang-Baxter type identities -------------------------------------------

def _aybe_terms(R, x, y, u1, u2, u3):
    A = compose(_legs(R(x, u1, u2), "12"), _legs(R(y, u2, u3), "23"))
    B = compose(_legs(R(y, u1, u3), "13"), _legs(R(x - y, u1, u2), "12"))
    C = compose(_legs(R(y - x, u2, u3), "23"), _legs(R(x, u1, u3), "13"))
    return A, B, C


def aybe_residual(family, x, y, u1, u2, u3, N: int, tol: float | None = None,
                  margin: float = fam.DEFAULT_POLE_MARGIN, R: Callable | None = None) -> IdentityCheck:
    """R^x_12(u1,u2) R^y_23(u2,u3) - R^y_13(u1,u3) R^{x-y}_12(u1,u2) - R^{y-x}_23(u2,u3) R^x_13(u1,u3)."""
    family = RFamily(family)
    R = R or _family_fn(family, N, margin)
    point = SpectralPoint(x=x, y=y, u=u1, v=u2, w=u3)
    A, B, C = _aybe_terms(R, x, y, u1, u2, u3)
    return _check(Identity.AYBE, family, point, [A, B, C], [1, -1, -1], tol or default_tol(family))


def qybe_residual(family, h, u, v, w, N: int, tol: float | None = None,
                  margin: float = fam.DEFAULT_POLE_MARGIN, R: Callable | None = None) -> IdentityCheck:
    """R12(u,v) R13(u,w) R23(v,w) - R23(v,w) R13(u,w) R12(u,v)."""
    family = RFamily(family)
    R = R or _family_fn(family, N, margin)
    R12, R13, R23 = _legs(R(h, u, v), "12"), _legs(R(h, u, w), "13"), _legs(R(h, v, w), "23")
    lhs = compose(compose(R12, R13), R23)
    rhs = compose(compose(R23, R13), R12)
    return _check(Identity.QYBE, family, SpectralPoint(hbar=h, u=u, v=v, w=w), [lhs, rhs], [1, -1],
                  tol or default_tol(family))


def unitarity_scalar(family, h, u, v) -> complex:
    family = RFamily(family)
    if family is RFamily.RATIONAL:
        return 1 / h ** 2 - 1 / (u - v) ** 2 - 1 / (u + v) ** 2
    if family in (RFamily.TRIG_LITERAL, RFamily.TRIG_VIA_GAUGE, RFamily.RCAL, RFamily.RCAL_TWISTED):
        s = np.sin
        return PI ** 2 / s(PI * h) ** 2 - PI ** 2 / s(PI * (u - v)) ** 2 - PI ** 2 / s(PI * (u + v)) ** 2
    raise ValueError(f"no unitarity law for family {family.value}")


def unitarity_check(family, h, u, v, N: int, tol: float | None = None,
                    margin: float = fam.DEFAULT_POLE_MARGIN, R: Callable | None = None) -> IdentityCheck:
    """X12(u,v) X21(v,u) - f(ħ,u,v) Id, with f(u,v) = f(v,u) recorded."""
    family = RFamily(family)
    R = R or _family_fn(family, N, margin)
    lhs = compose(R(h, u, v), swap_legs(R(h, v, u)))
    f = unitarity_scalar(family, h, u, v)
    f_sym = abs(f - unitarity_scalar(family, h, v, u)) / max(abs(f), 1e-300)
    rhs = identity(lhs.space, 2) * f
    return _check(Identity.UNITARITY, family, SpectralPoint(hbar=h, u=u, v=v), [lhs, rhs], [1, -1],
                  tol or default_tol(family), f=[f.real, f.imag], f_symmetry_rel=f_sym)


def skew_check(family, h, u, v, N: int, tol: float | None = None,
               margin: float = fam.DEFAULT_POLE_MARGIN, R: Callable | None = None) -> IdentityCheck:
    """X^ħ_12(u,v) + X^{-ħ}_21(v,u); for classical families r12(u,v) + r21(v,u)."""
    family = RFamily(family)
    R = R or _family_fn(family, N, margin)
    if family in (RFamily.CLASSICAL_RATIONAL, RFamily.CLASSICAL_TRIG):
        a, b = R(None, u, v), swap_legs(R(None, v, u))
    else:
        a, b = R(h, u, v), swap_legs(R(-h, v, u))
    return _check(Identity.SKEW, family, SpectralPoint(hbar=h, u=u, v=v), [a, b], [1, 1],
                  tol or default_tol(family))


def modified_aybe(x, y, u1, u2, u3, N: int, tol: float = TRIG_TOL,
                  margin: float = fam.DEFAULT_POLE_MARGIN, family=RFamily.RCAL) -> IdentityCheck:
    """AYBE left-hand side of 𝓡 minus π²/(2cos(πx/2)cos(πy/2)cos(π(x-y)/2)) Σ_{distinct |i|,|j|,|k|} e⊗e⊗e.

    With ``family=RFamily.S_CONST`` this is the same statement at the
    constant level.
    """
    family = RFamily(family)
    space = make_space(N)
    rhs = fam.modified_aybe_rhs(space, x, y, margin)
    R = _family_fn(family, N, margin)
    A, B, C = _aybe_terms(R, x, y, u1, u2, u3)
    return _check(Identity.MODIFIED_AYBE, family, SpectralPoint(x=x, y=y, u=u1, v=u2, w=u3),
                  [A, B, C, rhs], [1, -1, -1, -1], tol, rhs_norm=op_norm_max(rhs))


# --- constant level -----------------------------------------------------------------

def const_qybe(h, N: int, twisted: bool = False, tol: float = TRIG_TOL,
               margin: float = fam.DEFAULT_POLE_MARGIN) -> IdentityCheck:
    """S12 S13 S23 = S23 S13 S12 (or for S̃)."""
    family = RFamily.S_TWISTED if twisted else RFamily.S_CONST
    chk = qybe_residual(family, h, 0, 0, 0, N, tol, margin)
    chk.identity = Identity.CONST_QYBE_S
    chk.point = SpectralPoint(hbar=h)
    return chk


def const_aybe(x, y, N: int, twisted: bool = True, tol: float = TRIG_TOL,
               margin: float = fam.DEFAULT_POLE_MARGIN) -> IdentityCheck:
    """S^x_12 S^y_23 - S^y_13 S^{x-y}_12 - S^{y-x}_23 S^x_13 (S̃ by default)."""
    family = RFamily.S_TWISTED if twisted else RFamily.S_CONST
    chk = aybe_residual(family, x, y, 0, 0, 0, N, tol, margin)
    chk.identity = Identity.CONST_AYBE_STWISTED
    chk.point = SpectralPoint(x=x, y=y)
    return chk


# --- conjugation chain ------------------------------------------------------------------

def twist_relations(h, u, v, N: int, tol: float = 1e-12,
                    margin: float = fam.DEFAULT_POLE_MARGIN) -> list[IdentityCheck]:
    """S̃ = F S F21^{-1}, 𝓡̃ = F 𝓡 F21^{-1}, F P F21^{-1} = P, F J1J2P F21^{-1} = J1J2P, F F^{-1} = Id."""
    space = make_space(N)
    point = SpectralPoint(hbar=h, u=u, v=v)
    P = superpermutation(space)
    JJP = compose(compose(j_leg(space, 1, 2), j_leg(space, 2, 2)), P)
    F, Finv = fam.f_twist(space, h), fam.f_twist_inverse(space, h)
    rows = [
        ("s-twisted", fam.twist(fam.s_const(space, h, margin), h), fam.s_twisted(space, h, margin)),
        ("rcal-twisted", fam.twist(fam.rcal(space, h, u, v, margin), h), fam.rcal_twisted(space, h, u, v, margin)),
        ("F P F21^-1 = P", fam.twist(P, h), P),
        ("F J1J2P F21^-1 = J1J2P", fam.twist(JJP, h), JJP),
        ("F F^-1 = Id", compose(F, Finv), identity(space, 2)),
    ]
    return [_check(Identity.TWIST_REL, RFamily.F_TWIST, point, [a, b], [1, -1], tol, label)
            for label, a, b in rows]


def gauge_relation(h, u, v, N: int, tol: float = 1e-12,
                   margin: float = fam.DEFAULT_POLE_MARGIN) -> IdentityCheck:
    """R_trig(u,v) = G1(u) G2(v) 𝓡̃(u,v) G1(u)^{-1} G2(v)^{-1}.

    Certified as G1(u)^{-1} G2(v)^{-1} R_trig G1(u) G2(v) = 𝓡̃, the same
    relation conjugated by an invertible diagonal; the forward form amplifies
    rounding in 𝓡̃ by up to exp(2π|Im u|).  Its residual is kept in details.
    """
    space = make_space(N)
    lit = fam.r_trig_literal(space, h, u, v, margin)
    tw = fam.rcal_twisted(space, h, u, v, margin)
    _, forward = scaled_residual([lit, fam.gauge(tw, u, v)], [1, -1])
    return _check(Identity.GAUGE_REL, RFamily.G_GAUGE, SpectralPoint(hbar=h, u=u, v=v),
                  [fam.gauge(lit, -u, -v), tw], [1, -1], tol, forward_residual_rel=forward)


# --- D/Q decomposition ---------------------------------------------------------------

def dq_identities(x, y, u1, u2, u3, N: int, tol: float = RATIONAL_TOL,
                  margin: float = fam.DEFAULT_POLE_MARGIN) -> list[IdentityCheck]:
    """The five identities that make up the AYBE for D + Q.

    The fourth uses Q12(u2, u3); as an exchange relation it holds for any
    spectral arguments.
    """
    space = make_space(N)
    point = SpectralPoint(x=x, y=y, u=u1, v=u2, w=u3)
    D = lambda h, leg: _legs(fam.d_part(space, h, margin), leg)
    Q = lambda a, b, leg: _legs(fam.q_part(space, a, b, margin), leg)
    diag = fam.cubic_diagonal(space, distinct=False) * PI ** 2
    dd = [compose(D(x, "12"), D(y, "23")), compose(D(y, "13"), D(x - y, "12")),
          compose(D(y - x, "23"), D(x, "13"))]
    qq = [compose(Q(u1, u2, "12"), Q(u2, u3, "23")), compose(Q(u1, u3, "13"), Q(u1, u2, "12")),
          compose(Q(u2, u3, "23"), Q(u1, u3, "13"))]
    rows = [
        ("DD = -pi^2 sum_{|i|=|j|=|k|}", dd + [diag], [1, -1, -1, 1]),
        ("QQ = +pi^2 sum_{|i|=|j|=|k|}", qq + [diag], [1, -1, -1, -1]),
        ("D12^x Q23 = Q23 D13^x",
         [compose(D(x, "12"), Q(u2, u3, "23")), compose(Q(u2, u3, "23"), D(x, "13"))], [1, -1]),
        ("D13^y Q12 = Q12 D23^y",
         [compose(D(y, "13"), Q(u2, u3, "12")), compose(Q(u2, u3, "12"), D(y, "23"))], [1, -1]),
        ("D23^{y-x} Q13 = -Q13 D12^{x-y}",
         [compose(D(y - x, "23"), Q(u1, u3, "13")), compose(Q(u1, u3, "13"), D(x - y, "12"))], [1, 1]),
    ]
    return [_check(Identity.DQ_IDENTITIES, RFamily.TRIG_LITERAL, point, t, s, tol, label)
            for label, t, s in rows]


# --- rational proof chain -----------------------------------------------------------------

def proof_numerators(N: int, u1, u2, u3, tol: float = RATIONAL_TOL) -> list[IdentityCheck]:
    """The two permutation relations behind the rational AYBE and the two
    numerator sign identities used for the J-twisted one."""
    space = make_space(N)
    point = SpectralPoint(u=u1, v=u2, w=u3)
    P12, P13, P23 = (permutation_on(space, a, b) for a, b in ((1, 2), (1, 3), (2, 3)))
    J1, J2, J3 = (j_leg(space, a, 3) for a in (1, 2, 3))
    J1J2P12 = compose(compose(J1, J2), P12)
    J2J3P23 = compose(compose(J2, J3), P23)
    rows = [
        ("P12/(u1-u2) P23/(u2-u3) - P13 P12 - P23 P13",
         [compose(P12, P23) / ((u1 - u2) * (u2 - u3)), compose(P13, P12) / ((u1 - u3) * (u1 - u2)),
          compose(P23, P13) / ((u2 - u3) * (u1 - u3))], [1, -1, -1]),
        ("J1J2P12/(u1+u2) J2J3P23/(u2+u3) - P13 J1J2P12 - J2J3P23 P13",
         [compose(J1J2P12, J2J3P23) / ((u1 + u2) * (u2 + u3)), compose(P13, J1J2P12) / ((u1 - u3) * (u1 + u2)),
          compose(J2J3P23, P13) / ((u2 + u3) * (u1 - u3))], [1, -1, -1]),
        ("J1J2P12 J2J3P23 = J2J3P23 P13",
         [compose(J1J2P12, J2J3P23), compose(J2J3P23, P13)], [1, -1]),
        ("P13 J1J2P12 = -J2J3P23 P13",
         [compose(P13, J1J2P12), compose(J2J3P23, P13)], [1, 1]),
    ]
    return [_check(Identity.PROOF_NUMERATORS, RFamily.RATIONAL, point, t, s, tol, label) for label, t, s in rows]


def lemma1_steps(family, h, u1, u2, u3, N: int, tol: float | None = None,
                 margin: float = fam.DEFAULT_POLE_MARGIN) -> list[IdentityCheck]:
    """Steps deriving the quantum equation from AYBE + unitarity + skew-symmetry.

    The left-multiplied step is checked in the form
    R23 R13 R12 = R23 R^{2ħ}_12 R23 + f(u2,u3) R^{2ħ}_13, which is what
    unitarity and skew-symmetry give.
    """
    family = RFamily(family)
    tol = tol or default_tol(family)
    R = _family_fn(family, N, margin)
    point = SpectralPoint(hbar=h, u=u1, v=u2, w=u3)
    R12, R13, R23 = _legs(R(h, u1, u2), "12"), _legs(R(h, u1, u3), "13"), _legs(R(h, u2, u3), "23")
    R12b, R13b = _legs(R(2 * h, u1, u2), "12"), _legs(R(2 * h, u1, u3), "13")
    R23m = _legs(R(-h, u2, u3), "23")
    R32, R32m = _leg32(R(h, u3, u2)), _leg32(R(-h, u3, u2))
    f23 = unitarity_scalar(family, h, u2, u3)
    f32 = unitarity_scalar(family, h, u3, u2)
    rhs220 = compose(compose(R23, R12b), R23) + R13b * f23
    rhs223 = R13b * f32 - compose(compose(R32m, R12b), R23)
    rows = [
        ("AYBE at x=2h, y=h", [compose(R12b, R23), compose(R13, R12), compose(R23m, R13b)], [1, -1, -1]),
        ("left-multiplied by R23", [compose(compose(R23, R13), R12), rhs220], [1, -1]),
        ("AYBE with 2<->3 at x=2h, y=h", [compose(R13b, R32), compose(R12, R13), compose(R32m, R12b)], [1, -1, -1]),
        ("right-multiplied by R23", [compose(compose(R12, R13), R23), rhs223], [1, -1]),
        ("right-hand sides agree", [rhs220, rhs223], [1, -1]),
    ]
    return [_check(Identity.LEMMA1_STEPS, family, point, t, s, tol, label) for label, t, s in rows]


# --- classical -------------------------------------------------------------------------------

def _classical(family, N, margin):
    family = RFamily(family)
    space = make_space(N)
    if family is RFamily.CLASSICAL_RATIONAL:
        return family, lambda a, b: fam.classical_r_rational(space, a, b, margin)
    if family is RFamily.CLASSICAL_TRIG:
        return family, lambda a, b: fam.classical_r_trig(space, a, b, margin)
    raise ValueError(f"{family.value} is not a classical family")


def _cybe_terms(r12, r13, r23):
    c = lambda a, b: [compose(a, b), compose(b, a)]
    return c(r12, r13) + c(r12, r23) + c(r13, r23), [1, -1] * 3


def cybe_residual(family, u, v, w, N: int, tol: float = RATIONAL_TOL,
                  margin: float = fam.DEFAULT_POLE_MARGIN) -> IdentityCheck:
    """[r12, r13] + [r12, r23] + [r13, r23] with r12 = r(u,v), r13 = r(u,w), r23 = r(v,w)."""
    family, r = _classical(family, N, margin)
    terms, signs = _cybe_terms(_legs(r(u, v), "12"), _legs(r(u, w), "13"), _legs(r(v, w), "23"))
    return _check(Identity.CYBE, family, SpectralPoint(u=u, v=v, w=w), terms, signs, tol)


def half_cybe_residual(family, u, v, w, N: int, tol: float = RATIONAL_TOL,
                       margin: float = fam.DEFAULT_POLE_MARGIN) -> list[IdentityCheck]:
    """r12 r23 - r13 r12 - r23 r13 = -(m12 + m23 + m13)  (m = 0 for the rational family).

    For the trigonometric family the 2<->3 swapped relation and the fact that
    the difference of the two is the classical equation are checked too.
    """
    family, r = _classical(family, N, margin)
    point = SpectralPoint(u=u, v=v, w=w)
    r12, r13, r23 = _legs(r(u, v), "12"), _legs(r(u, w), "13"), _legs(r(v, w), "23")
    lhs = [compose(r12, r23), compose(r13, r12), compose(r23, r13)]
    if family is RFamily.CLASSICAL_RATIONAL:
        return [_check(Identity.HALF_CYBE, family, point, lhs, [1, -1, -1], tol, "r12r23 - r13r12 - r23r13 = 0")]
    m = fam.m_trig(make_space(N))
    m12, m13, m23, m32 = _legs(m, "12"), _legs(m, "13"), _legs(m, "23"), _leg32(m)
    r32 = _leg32(r(w, v))
    lhs2 = [compose(r13, r32), compose(r12, r13), compose(r32, r12)]
    cy_terms, cy_signs = _cybe_terms(r12, r13, r23)
    return [
        _check(Identity.HALF_CYBE, family, point, lhs + [m12, m23, m13], [1, -1, -1, 1, 1, 1], tol,
               "r12r23 - r13r12 - r23r13 = -(m12+m23+m13)"),
        _check(Identity.HALF_CYBE, family, point, lhs2 + [m13, m32, m12], [1, -1, -1, 1, 1, 1], tol,
               "r13r32 - r12r13 - r32r12 = -(m13+m32+m12)"),
        _check(Identity.HALF_CYBE, family, point, lhs + lhs2 + cy_terms,
               [1, -1, -1, -1, 1, 1] + [-s for s in cy_signs], tol, "difference equals the CYBE expression"),
    ]


# --- expansions ---------------------------------------------------------------------------------

def expansion_check_rational(u, v, hbars: Sequence[complex], N: int, tol: float = 1e-13,
                             margin: float = fam.DEFAULT_POLE_MARGIN) -> IdentityCheck:
    """R(ħ,u,v) - Id/ħ - r(u,v) for every ħ; the rational expansion terminates."""
    space = make_space(N)
    r = fam.classical_r_rational(space, u, v, margin)
    worst = None
    for h in hbars:
        R = fam.r_rational(space, h, u, v, margin)
        chk = _check(Identity.EXPANSION_RATIONAL, RFamily.RATIONAL, SpectralPoint(hbar=h, u=u, v=v),
                     [R, identity(space, 2) / h, r], [1, -1, -1], tol)
        if worst is None or chk.residual_rel > worst.residual_rel:
            worst = chk
    worst.details["hbars"] = [[float(np.real(h)), float(np.imag(h))] for h in hbars]
    return worst


def expansion_check_trig(u, v, h0: float, N: int, margin: float = fam.DEFAULT_POLE_MARGIN,
                         c0_tol: float | None = None, c1_tol: float | None = None) -> list[IdentityCheck]:
    """Fit c_{-1}, c_0, c_1 of R_trig at ±h0/2^k and compare with Id, r and m.

    Tolerances default to 1e-2 h0^2 for c_0 and h0^2 for c_1 (absolute,
    max-entry).  The remainder R - c_{-1}/ħ - r - ħ m must shrink by 4 when ħ
    halves; at N = 1 the ħ^2 coefficient vanishes identically and the ratio is
    8 instead.
    """
    space = make_space(N)
    point = SpectralPoint(hbar=h0, u=u, v=v)
    c0_tol = c0_tol if c0_tol is not None else 1e-2 * h0 ** 2
    c1_tol = c1_tol if c1_tol is not None else h0 ** 2
    fam.check_trig("u-v", u - v, margin)
    fam.check_trig("u+v", u + v, margin)
    hmargin = h0 / 8
    R = lambda h: fam.r_trig(space, h, u, v, margin=hmargin, check=False).toarray()
    fit = laurent_fit(R, h0)
    r = fam.classical_r_trig(space, u, v, margin).toarray()
    m = fam.m_trig(space).toarray()
    eye = np.eye(r.shape[0])
    cm1 = fit.c_minus1
    notice = {
        "c_minus1_dev_from_Id": float(np.abs(cm1 - eye).max()),
        "c_minus1_dev_from_pi_Id": float(np.abs(cm1 - PI * eye).max()),
        "c_minus1_diag_mean": [float(np.mean(np.diag(cm1)).real), float(np.mean(np.diag(cm1)).imag)],
    }
    rem = lambda h: float(np.abs(R(h) - cm1 / h - r - h * m).max())
    ratio = rem(h0) / rem(h0 / 2)
    expected = 8.0 if N == 1 else 4.0
    c0_err = float(np.abs(fit.c0 - r).max())
    c1_err = float(np.abs(fit.c1 - m).max())
    mk = lambda label, err, tol, **extra: IdentityCheck(
        Identity.EXPANSION_TRIG, RFamily.TRIG_LITERAL, point, err, err, tol, label, {**notice, **extra})
    return [
        mk("c0 = classical r", c0_err, c0_tol),
        mk("c1 = m", c1_err, c1_tol),
        mk("remainder decay ratio", abs(ratio - expected), 0.5, ratio=ratio, expected_ratio=expected),
    ]


# --- negative controls ------------------------------------------------------------------------

def perturbed(R: Callable, row: int, col: int, eps: float = 1e-3) -> Callable:
    """Wrap ``R(h, u, v)`` so that entry (row, col) is shifted by eps * max|entry|."""
    def wrapped(h, u, v):
        X = R(h, u, v)
        mat = X.mat.tolil(copy=True)
        mat[row, col] = mat[row, col] + eps * op_norm_max(X)
        return GradedOp(X.space, X.legs, mat.tocsr())
    return wrapped
