"""Local models of Kodaira singular fibers and their fiber products.

Every multi-valued ingredient (fractional powers of z, log z) is realized
as a single-valued closure of the uniformizer s on the branched cover
z = s^d, so branch questions never arise downstream.  A LocalModel packs,
for one fiber type: the cover degree d, the integer monodromy matrix A,
the deck action (s, w) -> (zeta_d s, zeta_d^e h(s) w), the coordinate
power a with v = (unit) * s^a * w, and the two period functions of s with
their s-derivatives.  A ProductModel does the same for a pair of elliptic
fibers pulled back to the common lcm cover, carrying the four periods and
the deck exponents (alpha, beta) that drive the canonical-divisor
arithmetic and the asymptotic classification.

All discrete data (A, orders, k, alpha, beta, coordinate powers, canonical
coefficients) is exact integer / rational arithmetic; floating point only
enters through the period closures.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional

from .errors import Unsupported, UnsupportedPair, UnsupportedType
from .rng import SplitMix64

ZETA3 = cmath.exp(2j * cmath.pi / 3)

IntMat = tuple[tuple[int, int], tuple[int, int]]


class FiberKind(str, Enum):
    I = "I"
    Istar = "Istar"
    II = "II"
    IIstar = "IIstar"
    III = "III"
    IIIstar = "IIIstar"
    IV = "IV"
    IVstar = "IVstar"
    I0star = "I0star"


# finite-monodromy table rows: kind -> (cover degree d, monodromy A,
# coordinate power a', lattice family, default j-multiplicity m)
# 'hex' rows have limit modulus zeta_3 and m-congruence mod 3,
# 'square' rows limit modulus i and m odd.
_FINITE_TABLE: dict[FiberKind, tuple[int, IntMat, int, str, int]] = {
    FiberKind.II: (6, ((0, 1), (-1, 1)), 5, "hex", 1),
    FiberKind.IIstar: (6, ((1, -1), (1, 0)), 1, "hex", 2),
    FiberKind.III: (4, ((0, 1), (-1, 0)), 3, "square", 1),
    FiberKind.IIIstar: (4, ((0, -1), (1, 0)), 1, "square", 1),
    FiberKind.IV: (3, ((-1, 1), (-1, 0)), 2, "hex", 2),
    FiberKind.IVstar: (3, ((0, -1), (1, -1)), 1, "hex", 1),
}

_M_CONGRUENCE = {
    FiberKind.II: (1, 3), FiberKind.IVstar: (1, 3),
    FiberKind.IIstar: (2, 3), FiberKind.IV: (2, 3),
    FiberKind.III: (1, 2), FiberKind.IIIstar: (1, 2),
}


@dataclass(frozen=True)
class FiberType:
    """A Kodaira fiber type, with b for I_b / I_b* and the j-multiplicity m."""

    kind: FiberKind
    b: int = 0
    m_mult: Optional[int] = None

    def __post_init__(self):
        kind = FiberKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in (FiberKind.I, FiberKind.Istar):
            if self.b < 1:
                raise ValueError(f"{kind.value} requires b >= 1")
            if self.m_mult is not None:
                raise ValueError("m_mult applies only to the six finite m-types")
        elif kind is FiberKind.I0star:
            if self.b != 0 or self.m_mult is not None:
                raise ValueError("I0star takes neither b nor m_mult")
        else:
            if self.b != 0:
                raise ValueError("b applies only to I_b and I_b*")
            m = self.m_mult if self.m_mult is not None else _FINITE_TABLE[kind][4]
            r, mod = _M_CONGRUENCE[kind]
            if m < 1 or m % mod != r % mod:
                raise ValueError(f"{kind.value} needs m = {r} (mod {mod}), got {m}")
            object.__setattr__(self, "m_mult", m)

    @property
    def finite_monodromy(self) -> bool:
        return self.kind not in (FiberKind.I, FiberKind.Istar)

    def label(self) -> str:
        if self.kind in (FiberKind.I, FiberKind.Istar):
            return f"{self.kind.value}({self.b})"
        if self.kind is FiberKind.I0star:
            return "I0star"
        return f"{self.kind.value}[m={self.m_mult}]"


@dataclass(frozen=True)
class PuncturedPoint:
    """A point on the branched s-cover of the punctured disk, z = s^d."""

    s: complex
    d: int

    def __post_init__(self):
        if not (0 < abs(self.s) < 1):
            raise ValueError("need 0 < |s| < 1")
        if self.d < 1:
            raise ValueError("cover degree must be positive")

    @property
    def z(self) -> complex:
        return self.s ** self.d


@dataclass(frozen=True)
class LocalModel:
    """One catalog row realized as closures of s (single-valued on the cover)."""

    fiber: FiberType
    d: int
    A: IntMat
    deck_exponent: int           # e in the multiplier zeta_d^e h(s)
    coord_power: int             # a with v = (unit) * s^a * w
    tau: Callable[[complex], tuple[complex, complex]]
    dtau_ds: Callable[[complex], tuple[complex, complex]]
    deck_multiplier: Callable[[complex], complex]
    deck_tau: Callable[[complex], tuple[complex, complex]]  # periods after one loop
    modulus_limit: complex       # lim of tau2/tau1 along the cover
    quasi_order: Optional[int] = None

    m = 1          # fiber complex dimension of an elliptic model

    def label(self) -> str:
        return self.fiber.label()


def _pow_model(t: FiberType) -> LocalModel:
    d, A, ap, fam, _ = _FINITE_TABLE[t.kind]
    m = t.m_mult
    # z^{m/3} (hex) or z^{m/2} (square) realized on z = s^d; integral by the
    # congruence constraints
    p = d * m // 3 if fam == "hex" else d * m // 2
    zeta = ZETA3 if fam == "hex" else 1j
    e = d - ap
    zd = cmath.exp(2j * cmath.pi / d)
    zdp = zd ** (p % d)

    def tau(s: complex) -> tuple[complex, complex]:
        sp = s ** p
        sa = s ** ap
        if fam == "hex":
            return ((1 - sp) * sa, ZETA3 * (1 - ZETA3 * sp) * sa)
        return ((1 - sp) * sa, 1j * (1 + sp) * sa)

    def dtau_ds(s: complex) -> tuple[complex, complex]:
        sp = s ** p
        sa1 = s ** (ap - 1)
        if fam == "hex":
            return (sa1 * (ap - (ap + p) * sp),
                    ZETA3 * sa1 * (ap - ZETA3 * (ap + p) * sp))
        return (sa1 * (ap - (ap + p) * sp),
                1j * sa1 * (ap + (ap + p) * sp))

    def deck_multiplier(s: complex) -> complex:
        # f(s)/f(zeta_d s) for f(s) = (1 - s^p) s^a; factors Phi through the deck
        return zd ** e * (1 - s ** p) / (1 - zdp * s ** p)

    def deck_tau(s: complex) -> tuple[complex, complex]:
        return tau(zd * s)

    return LocalModel(fiber=t, d=d, A=A, deck_exponent=e, coord_power=ap,
                      tau=tau, dtau_ds=dtau_ds, deck_multiplier=deck_multiplier,
                      deck_tau=deck_tau, modulus_limit=zeta)


def _i0star_model(t: FiberType, tau0: complex) -> LocalModel:
    if tau0.imag <= 0:
        raise ValueError("I0star modulus must lie in the upper half-plane")

    def tau(s: complex) -> tuple[complex, complex]:
        return (s, s * tau0)

    def dtau_ds(s: complex) -> tuple[complex, complex]:
        return (1.0 + 0j, tau0)

    return LocalModel(fiber=t, d=2, A=((-1, 0), (0, -1)), deck_exponent=1,
                      coord_power=1, tau=tau, dtau_ds=dtau_ds,
                      deck_multiplier=lambda s: -1.0 + 0j,
                      deck_tau=lambda s: (-s, -s * tau0),
                      modulus_limit=tau0)


def _ib_model(t: FiberType) -> LocalModel:
    b = t.b
    c = b / (2j * math.pi)

    def tau(s: complex) -> tuple[complex, complex]:
        return (1.0 + 0j, c * cmath.log(s))

    def dtau_ds(s: complex) -> tuple[complex, complex]:
        return (0j, c / s)

    def deck_tau(s: complex) -> tuple[complex, complex]:
        # one counterclockwise loop: log z -> log z + 2 pi i
        return (1.0 + 0j, c * cmath.log(s) + b)

    return LocalModel(fiber=t, d=1, A=((1, b), (0, 1)), deck_exponent=0,
                      coord_power=0, tau=tau, dtau_ds=dtau_ds,
                      deck_multiplier=lambda s: 1.0 + 0j,
                      deck_tau=deck_tau, modulus_limit=0j)


def _ibstar_model(t: FiberType) -> LocalModel:
    b = t.b
    c = b / (1j * math.pi)

    def tau(s: complex) -> tuple[complex, complex]:
        return (s, c * s * cmath.log(s))

    def dtau_ds(s: complex) -> tuple[complex, complex]:
        return (1.0 + 0j, c * (cmath.log(s) + 1))

    def deck_tau(s: complex) -> tuple[complex, complex]:
        # continuation along s -> e^{i pi} s: log s -> log s + i pi
        return (-s, -c * s * (cmath.log(s) + 1j * math.pi))

    return LocalModel(fiber=t, d=2, A=((-1, -b), (0, -1)), deck_exponent=1,
                      coord_power=1, tau=tau, dtau_ds=dtau_ds,
                      deck_multiplier=lambda s: -1.0 + 0j,
                      deck_tau=deck_tau, modulus_limit=0j, quasi_order=2)


def _mat_mul(a: IntMat, b: IntMat) -> IntMat:
    return ((a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
            (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]))


_ID: IntMat = ((1, 0), (0, 1))


def det_a(A: IntMat) -> int:
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def monodromy_order(t: FiberType) -> float:
    """Smallest n with A^n = I by exact integer powers; inf for I_b and I_b*."""
    model = local_model(t, _verify=False)
    A = model.A
    acc = A
    for n in range(1, 13):
        if acc == _ID:
            return n
        acc = _mat_mul(acc, A)
    return math.inf


def _verify_local(model: LocalModel, seed: int = 0x5EED) -> None:
    if det_a(model.A) != 1:
        raise UnsupportedType(f"det A != 1 for {model.label()}")
    if model.fiber.finite_monodromy:
        order = monodromy_order(model.fiber)
        if order not in (2, 3, 4, 6):
            raise UnsupportedType(f"unexpected monodromy order {order}")
    rng = SplitMix64(seed)
    A = model.A
    for _ in range(8):
        s = rng.complex_annulus(0.05, 0.55 ** (1.0 / model.d), 0.05, 2 * math.pi - 0.05)
        t1, t2 = model.tau(s)
        n1, n2 = model.deck_tau(s)
        e1 = abs(n1 - (t1 * A[0][0] + t2 * A[1][0]))
        e2 = abs(n2 - (t1 * A[0][1] + t2 * A[1][1]))
        scale = max(abs(t1), abs(t2), 1.0)
        if max(e1, e2) > 1e-12 * scale:
            raise UnsupportedType(
                f"deck/period inconsistency for {model.label()} at s={s:.3f}: "
                f"{max(e1, e2):.2e}")


def local_model(t: FiberType, tau0: complex = 1j, _verify: bool = True) -> LocalModel:
    """Catalog lookup; every model is numerically self-checked at construction."""
    if t.kind in _FINITE_TABLE:
        model = _pow_model(t)
    elif t.kind is FiberKind.I0star:
        model = _i0star_model(t, tau0)
    elif t.kind is FiberKind.I:
        model = _ib_model(t)
    elif t.kind is FiberKind.Istar:
        model = _ibstar_model(t)
    else:  # pragma: no cover
        raise UnsupportedType(str(t.kind))
    if _verify:
        _verify_local(model)
    return model


# ---------------------------------------------------------------------------
# fiber products
# ---------------------------------------------------------------------------

_STAR_CONE_ANGLE = {FiberKind.IIstar: Fraction(2, 3), FiberKind.IIIstar: Fraction(1, 2),
                    FiberKind.IVstar: Fraction(1, 3)}


@dataclass(frozen=True)
class Classification:
    """Asymptotic class of a product model.

    angle_over_pi is the cone angle divided by pi (exact rational) for the
    ALG and star-ALG families; volume_exponent is the geodesic-ball growth
    order for the star families.
    """

    kind: str                               # ALG | ALH | ALH_star | ALG_star
    angle_over_pi: Optional[Fraction] = None
    volume_exponent: Optional[Fraction] = None
    cone: str = "cone"                      # cone | ray


@dataclass(frozen=True)
class ProductModel:
    """Fiber product of two elliptic local models on the common s-cover z = s^k."""

    left: FiberType
    right: FiberType
    left_model: LocalModel
    right_model: LocalModel
    k: int
    alpha: int
    beta: int
    a1: int
    a2: int
    nu: tuple[int, int] = (1, 1)     # per-factor lattice volume factor (quotient models)
    label_override: Optional[str] = None
    default_k0: complex = 1.0 + 0j

    m = 2

    @property
    def e_left(self) -> int:
        return self.k // self.left_model.d

    @property
    def e_right(self) -> int:
        return self.k // self.right_model.d

    def tau4(self, s: complex) -> tuple[complex, complex, complex, complex]:
        t1, t2 = self.left_model.tau(s ** self.e_left)
        t3, t4 = self.right_model.tau(s ** self.e_right)
        return (t1, t2, t3, t4)

    def dtau4_ds(self, s: complex) -> tuple[complex, complex, complex, complex]:
        el, er = self.e_left, self.e_right
        d1, d2 = self.left_model.dtau_ds(s ** el)
        d3, d4 = self.right_model.dtau_ds(s ** er)
        cl = el * s ** (el - 1)
        cr = er * s ** (er - 1)
        return (d1 * cl, d2 * cl, d3 * cr, d4 * cr)

    def deck_multipliers(self, s: complex) -> tuple[complex, complex]:
        return (self.left_model.deck_multiplier(s ** self.e_left),
                self.right_model.deck_multiplier(s ** self.e_right))

    @property
    def monodromy_finite(self) -> tuple[bool, bool]:
        return (self.left.finite_monodromy, self.right.finite_monodromy)

    def label(self) -> str:
        if self.label_override:
            return self.label_override
        return f"{self.left.label()} x {self.right.label()}"


_E_STAR = (FiberKind.IIstar, FiberKind.IIIstar, FiberKind.IVstar)


def fiber_product(left: FiberType, right: FiberType, tau0: complex = 1j) -> ProductModel:
    """Build the supported fiber-product model for a pair of fiber types.

    Supported pairs, following the classification of complete Calabi-Yau
    ansatz models: finite x finite, Istar x Istar, and Istar x {IIstar,
    IIIstar, IVstar} (either order).  I_b factors never appear (those
    products resolve crepantly and carry no complete metric of this kind),
    and Istar x {II, III, IV, I0star} is rejected because the canonical
    coefficient would be >= 0.
    """
    if left.kind is FiberKind.I or right.kind is FiberKind.I:
        raise UnsupportedPair("I_b admits no supported fiber-product model")
    stars = {left.kind, right.kind} & {FiberKind.Istar}
    if stars:
        # normalize so the Istar factor sits on the left
        if right.kind is FiberKind.Istar and left.kind is not FiberKind.Istar:
            left, right = right, left
        if right.kind is FiberKind.Istar:
            pass  # Istar x Istar
        elif right.kind not in _E_STAR:
            raise UnsupportedPair(
                f"Istar x {right.kind.value} has canonical coefficient >= 0 "
                "and is outside the supported list")
    lm = local_model(left, tau0=tau0)
    rm = local_model(right, tau0=tau0)
    k = math.lcm(lm.d, rm.d)
    el, er = k // lm.d, k // rm.d
    alpha = (lm.deck_exponent * el) % k
    beta = (rm.deck_exponent * er) % k
    a1 = lm.coord_power * el
    a2 = rm.coord_power * er
    pm = ProductModel(left=left, right=right, left_model=lm, right_model=rm,
                      k=k, alpha=alpha, beta=beta, a1=a1, a2=a2)
    _verify_product(pm)
    return pm


def _verify_product(pm: ProductModel, seed: int = 0xFACE) -> None:
    rng = SplitMix64(seed)
    zk = cmath.exp(2j * cmath.pi / pm.k)
    for _ in range(8):
        s = rng.complex_annulus(0.3, 0.9, 0.05, 2 * math.pi / pm.k - 0.05)
        # lattice-translation identities: shifting w_j by a lattice generator
        # moves v_j by the corresponding period
        t = pm.tau4(s)
        f1 = t[0]
        mu1 = t[1] / t[0]
        f2 = t[2]
        mu2 = t[3] / t[2]
        w1, w2 = 0.3 + 0.2j, -0.1 + 0.4j
        v1 = f1 * (w1 + 1) - f1 * w1
        if abs(v1 - t[0]) > 1e-12 * max(1.0, abs(t[0])):
            raise UnsupportedPair("lattice translation w1 -> w1+1 fails")
        v1b = f1 * (w1 + mu1) - f1 * w1
        if abs(v1b - t[1]) > 1e-12 * max(1.0, abs(t[1])):
            raise UnsupportedPair("lattice translation by the modulus fails (left)")
        v2b = f2 * (w2 + mu2) - f2 * w2
        if abs(v2b - t[3]) > 1e-12 * max(1.0, abs(t[3])):
            raise UnsupportedPair("lattice translation by the modulus fails (right)")
        # deck cocycle closes: product of multipliers over k steps is 1
        if all(pm.monodromy_finite):
            prod1 = prod2 = 1.0 + 0j
            for j in range(pm.k):
                m1, m2 = pm.deck_multipliers(zk ** j * s)
                prod1 *= m1
                prod2 *= m2
            if max(abs(prod1 - 1), abs(prod2 - 1)) > 1e-12 * pm.k:
                raise UnsupportedPair("deck action does not close after k steps")


def canonical_coefficient(pm: ProductModel) -> Fraction:
    """Coefficient c with K = c [F] on the compactified fiber product.

    Order count of the pullback of Omega = (k(z)/z^2) dz dv1 dv2 through
    (z, v1, v2) = (s^k, u1 s^{a1} w1, u2 s^{a2} w2): the s-order is
    (k-1) + a1 + a2 - 2k, divided by the fiber multiplicity k.
    """
    return Fraction((pm.k - 1) + pm.a1 + pm.a2 - 2 * pm.k, pm.k)


# isotrivial quotient cases: k -> rows of invariant-monomial exponents over
# (s, w1, w2) chosen so the three monomials form coordinates at a generic
# point of the reduced central fiber
_ISOTRIVIAL_COORDS: dict[int, tuple[tuple[int, int, int], ...]] = {
    2: ((1, 1, 0), (0, 2, 0), (0, 0, 1)),
    3: ((1, 1, 0), (0, 3, 0), (0, 0, 3)),
    4: ((1, 3, 0), (0, 4, 0), (0, 0, 1)),
    5: ((1, 1, 0), (0, 5, 0), (0, 2, 1)),
    6: ((1, 1, 0), (0, 6, 0), (0, 0, 3)),
    12: ((1, 2, 1), (0, 6, 0), (0, 0, 4)),
}


def _det3(rows: tuple[tuple[int, int, int], ...]) -> int:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def isotrivial_coefficient(case_k: int) -> Fraction:
    """Canonical coefficient -2/k of an isotrivial quotient model.

    Power counting on Omega = s^{-2} ds dw1 dw2 through the stored
    invariant-monomial coordinates: the wedge of the three coordinate
    differentials is det(E) s^{P-1} w1^{Q-1} w2^{R-1} ds dw1 dw2 with
    (P, Q, R) the column sums of the exponent matrix E, so Omega has pole
    order (P+1)/p_f along the reduced fiber and the fiber has multiplicity
    k/p_f, with p_f the s-exponent of the unique s-bearing coordinate.
    """
    if case_k not in _ISOTRIVIAL_COORDS:
        raise Unsupported(f"no isotrivial case data for k={case_k}")
    rows = _ISOTRIVIAL_COORDS[case_k]
    if _det3(rows) == 0:
        raise Unsupported("stored coordinates are degenerate")
    s_rows = [r for r in rows if r[0] > 0]
    if len(s_rows) != 1:
        raise Unsupported("need exactly one s-bearing coordinate")
    p_f = s_rows[0][0]
    P = sum(r[0] for r in rows)
    pole = Fraction(2 + P - 1, p_f)
    mult = Fraction(case_k, p_f)
    if pole.denominator != 1 or mult.denominator != 1:
        raise Unsupported("non-integral pole order or multiplicity")
    coeff = -pole / mult
    assert coeff == Fraction(-(P + 1), case_k)
    return coeff


def classify_asymptotics(pm: ProductModel) -> Classification:
    """Asymptotic class per the fiber-pair dichotomy.

    finite x finite with alpha+beta > k is ALG with cone angle
    2 (alpha+beta-k) pi / k; alpha+beta = k is ALH; Istar x Istar collapses
    to a ray with volume growth 3/2; Istar x E-star opens a cone of angle
    2pi/3, pi/2, pi/3 with volume growth 2.
    """
    fin_l, fin_r = pm.monodromy_finite
    if fin_l and fin_r:
        total = pm.alpha + pm.beta
        if total > pm.k:
            return Classification(kind="ALG",
                                  angle_over_pi=Fraction(2 * (total - pm.k), pm.k))
        if total == pm.k:
            return Classification(kind="ALH", cone="ray")
        raise Unsupported(f"alpha+beta < k for {pm.label()}: no complete model")
    if pm.left.kind is FiberKind.Istar and pm.right.kind is FiberKind.Istar:
        return Classification(kind="ALH_star", volume_exponent=Fraction(3, 2),
                              cone="ray")
    if pm.left.kind is FiberKind.Istar and pm.right.kind in _STAR_CONE_ANGLE:
        return Classification(kind="ALG_star",
                              angle_over_pi=_STAR_CONE_ANGLE[pm.right.kind],
                              volume_exponent=Fraction(2, 1))
    raise Unsupported(f"unclassified pair {pm.label()}")  # pragma: no cover


def isotrivial_case13() -> ProductModel:
    """The hexagonal swap quotient (k = 6 isotrivial case) as a product-like model.

    Periods z^{1/6}, zeta3 z^{1/6}, z^{2/3}, zeta3 z^{2/3} on the 6-cover;
    the true fiber lattice has index 4 in the naive product lattice, which
    the per-factor volume factors nu = (2, 2) account for.  The volume form
    is g(z) = -1/(12 z^2).
    """
    hexa = FiberType(FiberKind.I0star)  # placeholder types for labeling only

    def tau(s: complex) -> tuple[complex, complex]:
        return (s, ZETA3 * s)

    def dtau(s: complex) -> tuple[complex, complex]:
        return (1.0 + 0j, ZETA3)

    def tau_r(s: complex) -> tuple[complex, complex]:
        return (s ** 4, ZETA3 * s ** 4)

    def dtau_r(s: complex) -> tuple[complex, complex]:
        return (4 * s ** 3, 4 * ZETA3 * s ** 3)

    lm = LocalModel(fiber=hexa, d=6, A=((1, -1), (1, 0)), deck_exponent=5,
                    coord_power=1, tau=tau, dtau_ds=dtau,
                    deck_multiplier=lambda s: cmath.exp(2j * cmath.pi / 6),
                    deck_tau=lambda s: tau(cmath.exp(2j * cmath.pi / 6) * s),
                    modulus_limit=ZETA3)
    rmm = LocalModel(fiber=hexa, d=6, A=((-1, 1), (-1, 0)), deck_exponent=2,
                     coord_power=4, tau=tau_r, dtau_ds=dtau_r,
                     deck_multiplier=lambda s: cmath.exp(2j * cmath.pi / 6) ** 4,
                     deck_tau=lambda s: tau_r(cmath.exp(2j * cmath.pi / 6) * s),
                     modulus_limit=ZETA3)
    return ProductModel(left=hexa, right=hexa, left_model=lm, right_model=rmm,
                        k=6, alpha=5, beta=2, a1=1, a2=4, nu=(2, 2),
                        label_override="isotrivial case 13",
                        default_k0=-1.0 / 12.0 + 0j)


def case13_deck(s: complex, w1: complex, w2: complex) -> tuple[complex, complex, complex]:
    """Deck generator of the case-13 quotient: (s, w1, w2) -> (z6^5 s, z6 w2, z6 w1)."""
    z6 = cmath.exp(2j * cmath.pi / 6)
    return (z6 ** 5 * s, z6 * w2, z6 * w1)


def case13_embedding(s: complex, w1: complex, w2: complex) -> tuple[complex, complex, complex]:
    """Fiberwise-linear map (s, w1, w2) -> (z, v1, v2) of the case-13 model."""
    return (s ** 6, s * (w1 + w2), s ** 4 * (w1 - w2))


def finite_kinds() -> tuple[FiberKind, ...]:
    """The seven finite-monodromy fiber kinds."""
    return (FiberKind.I0star, FiberKind.II, FiberKind.IIstar, FiberKind.III,
            FiberKind.IIIstar, FiberKind.IV, FiberKind.IVstar)
