"""Parameter-dependent operator families: Fay kernels, rational and
trigonometric R-matrices, the constant solution S, twist F, gauge G, the
D + Q split and the classical limits.

All constructors take complex parameters and return :class:`GradedOp`
values on two legs (one leg for G).  Evaluations closer than ``margin`` to a
pole raise :class:`PoleError`.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .graded import (
    GradedOp,
    Superspace,
    compose,
    from_terms,
    graded_tensor,
    identity,
    op_norm_max,
    op_sub,
    zero,
)
from .operators import eta_on_leg, j_leg, superpermutation, swap_legs

__all__ = [
    "PI", "DEFAULT_POLE_MARGIN", "CROSS_CHECK_TOL", "PoleError", "CrossCheckError",
    "RFamily", "SpectralPoint", "TRIG_FAMILIES",
    "int_distance", "check_trig", "check_rational", "check_odd",
    "phi_trig", "phi_rational", "fay_terms", "fay_residual",
    "r_rational", "r_rational_sum", "classical_r_rational",
    "s_const", "f_twist", "f_twist_inverse", "twist", "s_twisted",
    "rcal_compositional", "rcal_literal", "rcal", "rcal_twisted",
    "g_gauge", "g_gauge_inverse", "gauge",
    "d_part", "q_part", "r_trig_literal", "r_trig_via_gauge", "r_trig",
    "classical_r_trig", "m_trig", "cubic_diagonal", "modified_aybe_rhs",
    "rel_diff", "spectral_family", "build",
]

PI = np.pi
DEFAULT_POLE_MARGIN = 0.05
CROSS_CHECK_TOL = 1e-12


class PoleError(ValueError):
    """A parameter combination is too close to a pole."""


class CrossCheckError(RuntimeError):
    """Two independent constructions of the same operator disagree."""


class RFamily(str, enum.Enum):
    RATIONAL = "rational"
    TRIG_LITERAL = "trig"
    TRIG_VIA_GAUGE = "trig-gauge"
    S_CONST = "s"
    S_TWISTED = "s-twisted"
    RCAL = "rcal"
    RCAL_TWISTED = "rcal-twisted"
    CLASSICAL_RATIONAL = "classical-rational"
    CLASSICAL_TRIG = "classical-trig"
    D_PART = "d"
    Q_PART = "q"
    F_TWIST = "f-twist"
    G_GAUGE = "g-gauge"
    M_TRIG = "m-trig"


@dataclass(frozen=True)
class SpectralPoint:
    """Parameters of one evaluation.

    ``u, v, w`` double as u1, u2, u3 in the associative equation, where
    ``x, y`` play the role of ħ.  ``pole_margin`` is the smallest distance
    of any relevant combination to its nearest pole.
    """

    hbar: complex | None = None
    x: complex | None = None
    y: complex | None = None
    u: complex | None = None
    v: complex | None = None
    w: complex | None = None
    pole_margin: float = float("inf")

    def as_dict(self) -> dict[str, list[float]]:
        out = {}
        for name in ("hbar", "x", "y", "u", "v", "w"):
            z = getattr(self, name)
            if z is not None:
                out[name] = [float(np.real(z)), float(np.imag(z))]
        return out


def int_distance(z: complex) -> float:
    """Distance from ``z`` to the nearest integer."""
    z = complex(z)
    return abs(z - round(z.real))


def check_trig(name: str, z: complex, margin: float) -> None:
    if int_distance(z) < margin:
        raise PoleError(f"{name}={z} lies within {margin} of an integer")


def check_rational(name: str, z: complex, margin: float) -> None:
    if abs(complex(z)) < margin:
        raise PoleError(f"{name}={z} lies within {margin} of 0")


def check_odd(name: str, z: complex, margin: float) -> None:
    """Poles of 1/cos(πz/2) sit at odd integers."""
    if int_distance((complex(z) - 1) / 2) * 2 < margin:
        raise PoleError(f"{name}={z} lies within {margin} of an odd integer")


def _sign(k: int) -> int:
    assert k != 0, "sign(0) is never used by these sums"
    return 1 if k > 0 else -1


def _cot(z: complex) -> complex:
    return cmath.cos(z) / cmath.sin(z)


def _coth(z: complex) -> complex:
    return cmath.cosh(z) / cmath.sinh(z)


def _exch(N: int, k: int) -> int:
    """(k - N sign k) for the off-diagonal exponentials."""
    return k - N * _sign(k)


# --- scalar kernels ---------------------------------------------------------

def phi_trig(h: complex, u: complex, margin: float = DEFAULT_POLE_MARGIN) -> complex:
    check_trig("hbar", h, margin)
    check_trig("u", u, margin)
    return PI * _cot(PI * h) + PI * _cot(PI * u)


def phi_rational(h: complex, u: complex, margin: float = DEFAULT_POLE_MARGIN) -> complex:
    """The kernel φ(ħ, u) = 1/u."""
    check_rational("u", u, margin)
    return 1 / complex(u)


def fay_terms(phi: Callable, x, y, u, v) -> tuple[complex, complex, complex]:
    return (phi(x, u) * phi(y, v), phi(y, u + v) * phi(x - y, u), phi(y - x, v) * phi(x, u + v))


def fay_residual(phi: Callable, x, y, u, v) -> complex:
    """φ(x,u)φ(y,v) - φ(y,u+v)φ(x-y,u) - φ(y-x,v)φ(x,u+v)."""
    a, b, c = fay_terms(phi, x, y, u, v)
    return a - b - c


# --- rational family --------------------------------------------------------

def r_rational(space: Superspace, h, u, v, margin: float = DEFAULT_POLE_MARGIN) -> GradedOp:
    """(1/ħ) Id + P12/(u-v) + J1 J2 P12/(u+v)."""
    check_rational("hbar", h, margin)
    check_rational("u-v", u - v, margin)
    check_rational("u+v", u + v, margin)
    P = superpermutation(space)
    JJP = compose(compose(j_leg(space, 1, 2), j_leg(space, 2, 2)), P)
    return identity(space, 2) / h + P / (u - v) + JJP / (u + v)


def r_rational_sum(space: Superspace, h, u, v, margin: float = DEFAULT_POLE_MARGIN) -> GradedOp:
    """The same matrix written as sums of e_{ij} ⊗ e_{ji} and e_{ij} ⊗ e_{-j,-i}."""
    check_rational("hbar", h, margin)
    check_rational("u-v", u - v, margin)
    check_rational("u+v", u + v, margin)
    terms = [(1 / h, ((i, i), (j, j))) for i in space.basis for j in space.basis]
    for i in space.basis:
        for j in space.basis:
            s = (-1) ** space.parity(j)
            terms.append((s / (u - v), ((i, j), (j, i))))
            terms.append((s / (u + v), ((i, j), (-j, -i))))
    return from_terms(space, terms)


def classical_r_rational(space: Superspace, u, v, margin: float = DEFAULT_POLE_MARGIN) -> GradedOp:
    """P12/(u-v) + (Id ⊗ η) P12/(u+v)."""
    check_rational("u-v", u - v, margin)
    check_rational("u+v", u + v, margin)
    P = superpermutation(space)
    return P / (u - v) + eta_on_leg(P, 2) / (u + v)


# --- constant solutions and twist --------------------------------------------

def _q_and_norm(h, margin):
    check_trig("hbar", h, margin)
    q = cmath.exp(1j * PI * h)
    return q, 2j * PI / (q - 1 / q)


def s_const(space: Superspace, h, margin: float = DEFAULT_POLE_MARGIN) -> GradedOp:
    """Constant solution S = 2πi/(q - q^{-1}) Σ_{i<=j} e_{ij} ⊗ s_{ij}, q = e^{πiħ}.

    ``i <= j`` runs over the order -N < ... < -1 < 1 < ... < N.  Two of the
    components are normalised so that S solves the Yang-Baxter equation in
    this graded convention:

      s_{-b,-a} = -(q - q^{-1})(e_{ab} + e_{-a,-b})        (a < b)
      s_{-a,b}  = +(q - q^{-1})(e_{b,-a} + e_{-b,a})
    """
    q, norm = _q_and_norm(h, margin)
    dq = q - 1 / q
    N = space.N
    terms = []
    for a in range(1, N + 1):
        for j in space.basis:
            terms.append((1.0, ((a, a), (j, j))))
            terms.append((1.0, ((-a, -a), (j, j))))
        for t in (a, -a):
            terms.append((q - 1, ((a, a), (t, t))))
            terms.append((1 / q - 1, ((-a, -a), (t, t))))
        for b in range(1, N + 1):
            if a < b:
                terms.append((dq, ((a, b), (b, a))))
                terms.append((dq, ((a, b), (-b, -a))))
                terms.append((-dq, ((-b, -a), (a, b))))
                terms.append((-dq, ((-b, -a), (-a, -b))))
            terms.append((dq, ((-a, b), (b, -a))))
            terms.append((dq, ((-a, b), (-b, a))))
    return from_terms(space, [(norm * c, units) for c, units in terms])


def f_twist(space: Superspace, h) -> GradedOp:
    """F = Σ_{a,b} exp(πiħ((a-b) - N sign(a-b))/(2N)) (e_aa + e_-a-a) ⊗ (e_bb + e_-b-b).

    The a = b terms have exponent 0.
    """
    N = space.N
    terms = []
    for a in range(1, N + 1):
        for b in range(1, N + 1):
            k = a - b
            c = cmath.exp(1j * PI * h * (k - N * int(np.sign(k))) / (2 * N))
            for s in (a, -a):
                for t in (b, -b):
                    terms.append((c, ((s, s), (t, t))))
    return from_terms(space, terms)


def f_twist_inverse(space: Superspace, h) -> GradedOp:
    """Entrywise reciprocal of the diagonal twist."""
    F = f_twist(space, h)
    mat = F.mat.copy()
    mat.data = 1 / mat.data
    return GradedOp(space, 2, mat)


def twist(X: GradedOp, h) -> GradedOp:
    """F12 X F21^{-1}."""
    F = f_twist(X.space, h)
    F21_inv = swap_legs(f_twist_inverse(X.space, h))
    return compose(compose(F, X), F21_inv)


def s_twisted(space: Superspace, h, margin: float = DEFAULT_POLE_MARGIN) -> GradedOp:
    return twist(s_const(space, h, margin), h)


# --- spectral trigonometric families ------------------------------------------

def _spectral_tail(space: Superspace, u, v, margin) -> GradedOp:
    """π e^{-πi(u-v)}/sin π(u-v) P12 + π e^{-πi(u+v)}/sin π(u+v) J1J2P12."""
    check_trig("u-v", u - v, margin)
    check_trig("u+v", u + v, margin)
    P = superpermutation(space)
    JJP = compose(compose(j_leg(space, 1, 2), j_leg(space, 2, 2)), P)
    a = PI * cmath.exp(-1j * PI * (u - v)) / cmath.sin(PI * (u - v))
    b = PI * cmath.exp(-1j * PI * (u + v)) / cmath.sin(PI * (u + v))
    return P * a + JJP * b


def rcal_compositional(space: Superspace, h, u, v, margin: float = DEFAULT_POLE_MARGIN) -> GradedOp:
    return s_const(space, h, margin) + _spectral_tail(space, u, v, margin)


def rcal_literal(space: Superspace, h, u, v, margin: float = DEFAULT_POLE_MARGIN,
                 hyperbolic: bool = False) -> GradedOp:
    """𝓡 written in matrix units.

    ``hyperbolic=True`` reads the diagonal ħ-term as coth(πħ) instead of
    cot(πħ); it exists only to document how far that reading is off.
    """
    check_trig("hbar", h, margin)
    check_trig("u-v", u - v, margin)
    check_trig("u+v", u + v, margin)
    w, z = u - v, u + v
    csc_h = 1 / cmath.sin(PI * h)
    ct_h = _coth(PI * h) if hyperbolic else _cot(PI * h)
    terms = [(PI * csc_h, ((i, i), (j, j))) for i in space.basis for j in space.basis]
    for a in space.basis:
        s = (-1) ** space.parity(a)
        terms.append((PI * (s * _cot(PI * w) + ct_h - csc_h), ((a, a), (a, a))))
        terms.append((PI * (s * _cot(PI * z) + ct_h - csc_h), ((a, a), (-a, -a))))
        for b in space.basis:
            if a < b:
                sa, sb = (-1) ** space.parity(a), (-1) ** space.parity(b)
                terms.append((PI / cmath.sin(PI * w) * sb * cmath.exp(1j * PI * w), ((a, b), (b, a))))
                terms.append((PI / cmath.sin(PI * w) * sa * cmath.exp(-1j * PI * w), ((b, a), (a, b))))
                terms.append((PI / cmath.sin(PI * z) * sb * cmath.exp(1j * PI * z), ((a, b), (-b, -a))))
                terms.append((PI / cmath.sin(PI * z) * sa * cmath.exp(-1j * PI * z), ((b, a), (-a, -b))))
    return from_terms(space, terms)


def rel_diff(A: GradedOp, B: GradedOp) -> float:
    scale = max(op_norm_max(A), op_norm_max(B))
    return op_norm_max(op_sub(A, B)) / scale if scale else 0.0


def rcal(space: Superspace, h, u, v, margin: float = DEFAULT_POLE_MARGIN, check: bool = True) -> GradedOp:
    """𝓡(u, v) = S + spectral tail, checked against the matrix-unit form."""
    comp = rcal_compositional(space, h, u, v, margin)
    if check:
        err = rel_diff(comp, rcal_literal(space, h, u, v, margin))
        if err > CROSS_CHECK_TOL:
            raise CrossCheckError(f"rcal: compositional and literal forms differ by {err:.3e}")
    return comp


def rcal_twisted(space: Superspace, h, u, v, margin: float = DEFAULT_POLE_MARGIN) -> GradedOp:
    """𝓡̃(u, v) = S̃ + spectral tail."""
    return s_twisted(space, h, margin) + _spectral_tail(space, u, v, margin)


def g_gauge(space: Superspace, u) -> GradedOp:
    """G(u) = Σ_j exp(πi u (j-1)/N) e_jj over all signed j."""
    N = space.N
    return from_terms(space, [(cmath.exp(1j * PI * u * (j - 1) / N), ((j, j),)) for j in space.basis])


def g_gauge_inverse(space: Superspace, u) -> GradedOp:
    return g_gauge(space, -u)


def gauge(X: GradedOp, u, v) -> GradedOp:
    """G1(u) G2(v) X G1(u)^{-1} G2(v)^{-1}."""
    sp_ = X.space
    G = graded_tensor(g_gauge(sp_, u), g_gauge(sp_, v))
    Ginv = graded_tensor(g_gauge_inverse(sp_, u), g_gauge_inverse(sp_, v))
    return compose(compose(G, X), Ginv)


def _d_terms(space: Superspace, h):
    N = space.N
    ct = PI * _cot(PI * h)
    csc = PI / cmath.sin(PI * h)
    for i in space.basis:
        yield ct, ((i, i), (i, i))
        yield ct, ((i, i), (-i, -i))
        for j in space.basis:
            if abs(i) != abs(j):
                k = _exch(N, abs(i) - abs(j))
                yield csc * cmath.exp(1j * PI * h * k / N), ((i, i), (j, j))


def _q_terms(space: Superspace, u, v):
    N = space.N
    w, z = u - v, u + v
    for i in space.basis:
        s = (-1) ** space.parity(i)
        yield PI * s * _cot(PI * w), ((i, i), (i, i))
        yield PI * s * _cot(PI * z), ((i, i), (-i, -i))
        for j in space.basis:
            if i != j:
                sj = (-1) ** space.parity(j)
                k = _exch(N, i - j)
                yield PI * sj * cmath.exp(1j * PI * w * k / N) / cmath.sin(PI * w), ((i, j), (j, i))
                yield PI * sj * cmath.exp(1j * PI * z * k / N) / cmath.sin(PI * z), ((i, j), (-j, -i))


def d_part(space: Superspace, h, margin: float = DEFAULT_POLE_MARGIN) -> GradedOp:
    """The ħ-dependent diagonal summand of the trigonometric R-matrix."""
    check_trig("hbar", h, margin)
    return from_terms(space, _d_terms(space, h))


def q_part(space: Superspace, u, v, margin: float = DEFAULT_POLE_MARGIN) -> GradedOp:
    """The spectral summand of the trigonometric R-matrix."""
    check_trig("u-v", u - v, margin)
    check_trig("u+v", u + v, margin)
    return from_terms(space, _q_terms(space, u, v))


def r_trig_literal(space: Superspace, h, u, v, margin: float = DEFAULT_POLE_MARGIN) -> GradedOp:
    """The trigonometric R-matrix assembled directly from its matrix-unit sums."""
    check_trig("hbar", h, margin)
    check_trig("u-v", u - v, margin)
    check_trig("u+v", u + v, margin)
    return from_terms(space, list(_d_terms(space, h)) + list(_q_terms(space, u, v)))


def r_trig_via_gauge(space: Superspace, h, u, v, margin: float = DEFAULT_POLE_MARGIN) -> GradedOp:
    return gauge(rcal_twisted(space, h, u, v, margin), u, v)


def r_trig(space: Superspace, h, u, v, margin: float = DEFAULT_POLE_MARGIN, check: bool = True) -> GradedOp:
    """Trigonometric R-matrix, optionally checked against the gauge route.

    The comparison is made after undoing the gauge on the literal matrix:
    G1(u)^{-1} G2(v)^{-1} R G1(u) G2(v) = 𝓡̃.  Gauging 𝓡̃ forward multiplies
    its rounding error by up to exp(2π|Im u|), the backward direction does not.
    """
    lit = r_trig_literal(space, h, u, v, margin)
    if check:
        err = rel_diff(gauge(lit, -u, -v), rcal_twisted(space, h, u, v, margin))
        if err > CROSS_CHECK_TOL:
            raise CrossCheckError(f"r_trig: literal and gauge-route forms differ by {err:.3e}")
    return lit


# --- classical trigonometric limit ----------------------------------------------

def classical_r_trig(space: Superspace, u, v, margin: float = DEFAULT_POLE_MARGIN) -> GradedOp:
    """Order ħ^0 term: Q(u, v) + Σ_{|i|≠|j|} (πi/N)((|i|-|j|) - N sign) e_ii ⊗ e_jj."""
    check_trig("u-v", u - v, margin)
    check_trig("u+v", u + v, margin)
    N = space.N
    terms = list(_q_terms(space, u, v))
    for i in space.basis:
        for j in space.basis:
            if abs(i) != abs(j):
                terms.append((1j * PI / N * _exch(N, abs(i) - abs(j)), ((i, i), (j, j))))
    return from_terms(space, terms)


def m_trig(space: Superspace) -> GradedOp:
    """Order ħ^1 term of the trigonometric expansion (constant)."""
    N = space.N
    terms = []
    for i in space.basis:
        terms.append((-PI ** 2 / 3, ((i, i), (i, i))))
        terms.append((-PI ** 2 / 3, ((i, i), (-i, -i))))
        for j in space.basis:
            if abs(i) != abs(j):
                k = _exch(N, abs(i) - abs(j))
                terms.append((PI ** 2 / 6 - PI ** 2 / (2 * N * N) * k * k, ((i, i), (j, j))))
    return from_terms(space, terms)


# --- diagonal right-hand sides ---------------------------------------------------

def cubic_diagonal(space: Superspace, distinct: bool) -> GradedOp:
    """Σ e_ii ⊗ e_jj ⊗ e_kk over |i|=|j|=|k| (distinct=False) or pairwise
    distinct absolute values (distinct=True).  May be the zero operator."""
    terms = []
    for i in space.basis:
        for j in space.basis:
            for k in space.basis:
                a, b, c = abs(i), abs(j), abs(k)
                if (a != b and b != c and c != a) if distinct else (a == b == c):
                    terms.append((1.0, ((i, i), (j, j), (k, k))))
    if not terms:
        return zero(space, 3)
    return from_terms(space, terms)


def modified_aybe_rhs(space: Superspace, x, y, margin: float = DEFAULT_POLE_MARGIN) -> GradedOp:
    check_odd("x", x, margin)
    check_odd("y", y, margin)
    check_odd("x-y", x - y, margin)
    c = PI ** 2 / (2 * cmath.cos(PI * x / 2) * cmath.cos(PI * y / 2) * cmath.cos(PI * (x - y) / 2))
    return cubic_diagonal(space, distinct=True) * c


# --- registry ----------------------------------------------------------------

def spectral_family(tag: RFamily | str, space: Superspace, margin: float = DEFAULT_POLE_MARGIN,
                    check: bool = True) -> Callable[[complex, complex, complex], GradedOp]:
    """Return ``R(h, u, v)`` for a two-leg family.

    Constant families ignore ``u`` and ``v``; classical ones ignore ``h``.
    """
    tag = RFamily(tag)
    table = {
        RFamily.RATIONAL: lambda h, u, v: r_rational(space, h, u, v, margin),
        RFamily.TRIG_LITERAL: lambda h, u, v: r_trig(space, h, u, v, margin, check=check),
        RFamily.TRIG_VIA_GAUGE: lambda h, u, v: r_trig_via_gauge(space, h, u, v, margin),
        RFamily.S_CONST: lambda h, u, v: s_const(space, h, margin),
        RFamily.S_TWISTED: lambda h, u, v: s_twisted(space, h, margin),
        RFamily.RCAL: lambda h, u, v: rcal(space, h, u, v, margin, check=check),
        RFamily.RCAL_TWISTED: lambda h, u, v: rcal_twisted(space, h, u, v, margin),
        RFamily.CLASSICAL_RATIONAL: lambda h, u, v: classical_r_rational(space, u, v, margin),
        RFamily.CLASSICAL_TRIG: lambda h, u, v: classical_r_trig(space, u, v, margin),
        RFamily.D_PART: lambda h, u, v: d_part(space, h, margin),
        RFamily.Q_PART: lambda h, u, v: q_part(space, u, v, margin),
        RFamily.F_TWIST: lambda h, u, v: f_twist(space, h),
        RFamily.M_TRIG: lambda h, u, v: m_trig(space),
    }
    if tag not in table:
        raise ValueError(f"{tag.value} is not a two-leg family")
    return table[tag]


def build(tag: RFamily | str, space: Superspace, point: SpectralPoint,
          margin: float = DEFAULT_POLE_MARGIN) -> GradedOp:
    """Construct any family at ``point`` (missing parameters default to 0)."""
    tag = RFamily(tag)
    if tag is RFamily.G_GAUGE:
        return g_gauge(space, point.u or 0)
    return spectral_family(tag, space, margin)(point.hbar, point.u or 0, point.v or 0)


TRIG_FAMILIES = frozenset({RFamily.TRIG_LITERAL, RFamily.TRIG_VIA_GAUGE, RFamily.S_CONST,
                           RFamily.S_TWISTED, RFamily.RCAL, RFamily.RCAL_TWISTED,
                           RFamily.CLASSICAL_TRIG, RFamily.D_PART, RFamily.Q_PART})
