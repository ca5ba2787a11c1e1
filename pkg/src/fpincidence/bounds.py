"""Constant-free evaluation of the incidence, richness and distance bounds.

Every bound is a minimum over one or more groups of additive terms; a
term is ``coeff * prod(magnitude ** exponent)`` with exact rational
exponents (some linear in the dimension ``d``).  All implicit ``<<``
constants are taken to be 1, and hypotheses of the form ``X << Y`` are
checked as ``X <= Y``.  Values are reported as 30-significant-digit
decimals; ordering decisions between pure power products are exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, fields
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DomainError, UsageError

PRECISION = 30

F_ = Fraction


class BoundId(enum.Enum):
    TrivialConicKST = "trivial-conic"
    TrivialCircParKST = "trivial-circpar"
    VinhPointLine = "vinh-point-line"
    SdZCartesian = "sdz-cartesian"
    RichLinesCartesian = "rich-lines-cartesian"
    RichMobiusCartesian = "rich-mobius-cartesian"
    MobiusRich = "mobius-rich"
    RichConicPinnedPair = "rich-conic-pinned-pair"
    RichConic = "rich-conic"
    ConicSmall = "conic-small"
    ConicCartesian = "conic-cartesian"
    RichConicCartesian = "rich-conic-cartesian"
    CircParSmall = "circpar-small"
    CircParCartesian = "circpar-cartesian"
    PachSharirReal = "pach-sharir-real"
    ConicLargeQ = "conic-large"
    SphereLargeQ = "sphere-large"
    CILRRSphere = "cilrr-sphere"
    KLPSphere = "klp-sphere"
    RichPointsSdZ = "rich-points-sdz"
    RichCircles = "rich-circles"
    RichCirclesPinned = "rich-circles-pinned"
    RichLinesLarge = "rich-lines-large"
    RichMobiusLarge = "rich-mobius-large"
    VinhHyperplane = "vinh-hyperplane"
    KohSunOdd = "koh-sun-odd"
    KohSunEven = "koh-sun-even"
    PinnedLower815 = "pinned-lower"
    PlanarDistanceLower = "planar-distance-lower"
    ImageLower = "image-lower"
    DistSetLower = "distset-lower"
    BeckLower207 = "beck-lower"
    GP5TupleLower = "gp5-lower"

    @classmethod
    def from_name(cls, name: str) -> "BoundId":
        for b in cls:
            if name in (b.value, b.name):
                return b
        raise UsageError(f"unknown bound {name!r}; valid names: {', '.join(b.value for b in cls)}")


# magnitude name -> BoundParams attribute
MAGNITUDES = {
    "P": "size_p", "C": "size_c", "A": "size_a", "B": "size_b", "S": "size_s",
    "k": "k", "p": "p", "q": "q", "d": "d", "L": "max_collinear",
}


@dataclass(frozen=True)
class BoundParams:
    """Magnitudes read by the bounds.

    ``size_p`` is |P| (or |E|); ``size_c`` is the curve-set size (|C|, |L|,
    |S|, |T|, |H|) or |F| in the distance bounds; ``size_s`` is |E + F|.
    ``circles`` marks circle families, which carry the p = 3 mod 4 hypothesis.
    """

    size_p: Fraction | None = None
    size_c: Fraction | None = None
    size_a: Fraction | None = None
    size_b: Fraction | None = None
    size_s: Fraction | None = None
    k: Fraction | None = None
    p: Fraction | None = None
    q: Fraction | None = None
    d: Fraction | None = None
    max_collinear: Fraction | None = None
    circles: bool = True

    def __post_init__(self) -> None:
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "circles" or v is None:
                continue
            v = Fraction(str(v)) if isinstance(v, float) else Fraction(v)
            if v < 0:
                raise UsageError(f"{f.name} must be nonnegative")
            object.__setattr__(self, f.name, v)

    def get(self, mag: str) -> Fraction:
        v = getattr(self, MAGNITUDES[mag])
        if v is None and mag in ("p", "q"):
            v = getattr(self, MAGNITUDES["q" if mag == "p" else "p"])
        if v is None:
            raise UsageError(f"bound needs magnitude {mag} ({MAGNITUDES[mag]})")
        return v


@dataclass(frozen=True)
class DExp:
    """An exponent slope * d + intercept."""

    slope: Fraction
    intercept: Fraction

    def at(self, d: Fraction) -> Fraction:
        return self.slope * d + self.intercept


Exponent = Fraction | DExp


@dataclass(frozen=True)
class Term:
    label: str
    exps: tuple[tuple[str, Exponent], ...]
    coeff: Fraction = Fraction(1)
    custom: Callable[[BoundParams], Fraction] | None = None

    def magnitudes(self) -> set[str]:
        mags = {m for m, _ in self.exps}
        if any(isinstance(e, DExp) for _, e in self.exps):
            mags.add("d")
        return mags

    def resolved(self, params: BoundParams) -> list[tuple[Fraction, Fraction]]:
        out = []
        for mag, e in self.exps:
            if isinstance(e, DExp):
                e = e.at(params.get("d"))
            out.append((params.get(mag), e))
        return out


def T(label: str, coeff=1, **exps) -> Term:
    return Term(label, tuple((m, e if isinstance(e, DExp) else Fraction(e)) for m, e in exps.items()), Fraction(coeff))


@dataclass(frozen=True)
class Hypothesis:
    label: str
    check: Callable[[BoundParams], bool]


@dataclass(frozen=True)
class BoundDef:
    id: BoundId
    direction: str  # "upper" or "lower"
    description: str
    branches: Callable[[BoundParams], tuple[str | None, list[list[Term]]]]
    hypotheses: tuple[Hypothesis, ...] = ()


@dataclass(frozen=True)
class BoundValue:
    terms: tuple[tuple[str, Decimal], ...]
    total: Decimal
    dominant: str
    branch: str | None = None
    candidates: tuple[tuple[str, Decimal], ...] = ()


# ---------------------------------------------------------------------------
# exact helpers


def _pow_frac(x: Fraction, e: Fraction) -> Fraction:
    if e.denominator != 1:
        raise ValueError("non-integral exponent")
    if x == 0 and e < 0:
        raise DomainError("zero raised to a negative power")
    return x ** int(e)


def power_le(lhs: Sequence[tuple[Fraction, Fraction]], rhs: Sequence[tuple[Fraction, Fraction]]) -> bool:
    """Exact test of prod x^e <= prod y^f for positive bases and rational exponents."""
    den = 1
    for _, e in list(lhs) + list(rhs):
        den = den * e.denominator // _gcd(den, e.denominator)
    a = Fraction(1)
    b = Fraction(1)
    for x, e in lhs:
        a *= _pow_frac(Fraction(x), e * den)
    for y, f in rhs:
        b *= _pow_frac(Fraction(y), f * den)
    return a <= b


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _decimal(x: Fraction) -> Decimal:
    return Decimal(x.numerator) / Decimal(x.denominator)


def _term_value(term: Term, params: BoundParams, prec: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = prec + 15
        if term.custom is not None:
            val = _decimal(term.custom(params))
        else:
            factors = term.resolved(params)
            for x, e in factors:
                if x == 0 and e < 0:
                    raise DomainError(f"division by zero in term {term.label}")
            if any(x == 0 and e > 0 for x, e in factors):
                val = Decimal(0)
            elif all(e.denominator == 1 for _, e in factors):
                exact = term.coeff
                for x, e in factors:
                    exact *= _pow_frac(x, e)
                val = _decimal(exact)
            else:
                log = sum((_decimal(e) * _decimal(x).ln() for x, e in factors if e != 0), Decimal(0))
                val = _decimal(term.coeff) * log.exp()
        ctx.prec = prec
        return +val


# ---------------------------------------------------------------------------
# catalog


def _sum(*terms: Term):
    return lambda params: (None, [list(terms)])


def _min(*groups: Sequence[Term]):
    return lambda params: (None, [list(g) for g in groups])


def _le_pow(lhs_mag: str, rhs_mag: str, exp, lhs_exp=1, extra=()) -> Callable[[BoundParams], bool]:
    def check(params: BoundParams) -> bool:
        lhs = [(params.get(lhs_mag), Fraction(lhs_exp))] + [(params.get(m), Fraction(1)) for m in extra]
        return power_le(lhs, [(params.get(rhs_mag), Fraction(exp))])
    return check


def _mod4(mag: str, only_circles: bool = False) -> Callable[[BoundParams], bool]:
    def check(params: BoundParams) -> bool:
        if only_circles and not params.circles:
            return True
        v = params.get(mag)
        return v.denominator == 1 and v.numerator % 4 == 3
    return check


def _cmp(fn: Callable[..., bool], *mags: str) -> Callable[[BoundParams], bool]:
    return lambda params: fn(*(params.get(m) for m in mags))


SMALL_P = Hypothesis("|P| << p^{15/13}", _le_pow("P", "p", F_(15, 13)))
A_LE_B = Hypothesis("|A| <= |B|", _cmp(lambda a, b: a <= b, "A", "B"))
AC_LE_P2 = Hypothesis("|A||C| << p^2", _le_pow("A", "p", 2, extra=("C",)))
CIRCLE_MOD4 = Hypothesis("p = 3 (mod 4) for circles", _mod4("p", only_circles=True))


def _k_at_least(n: int) -> Hypothesis:
    return Hypothesis(f"k >= {n}", _cmp(lambda k: k >= n, "k"))


def _koh_sun_branches(even: bool):
    def branches(params):
        if params is None:
            return None, []
        E, Fs, q, d = (params.get(m) for m in ("P", "C", "q", "d"))
        lo_edge = [(q, (d - 1) / 2)]
        hi_edge = [(q, (d + 1) / 2)]
        # exact placement of |E| against q^{(d-1)/2} and q^{(d+1)/2}
        if not power_le(lo_edge, [(E, F_(1))]):
            label = "|E| < q^{(d-1)/2}"
            if even:
                groups = [[T("q/144", F_(1, 144), q=1)]]
            else:
                groups = [[T("q/2", F_(1, 2), q=1)],
                          [T("|E||F|/(8q^{d-1})", F_(1, 8), P=1, C=1, q=DExp(F_(-1), F_(1)))]]
        elif not power_le(hi_edge, [(E, F_(1))]):
            label = "q^{(d-1)/2} <= |E| < q^{(d+1)/2}"
            if even:
                groups = [[T("q/144", F_(1, 144), q=1)],
                          [T("|F|/(288 q^{(d-1)/2})", F_(1, 288), C=1, q=DExp(F_(-1, 2), F_(1, 2)))]]
            else:
                groups = [[T("q/2", F_(1, 2), q=1)],
                          [T("|F|/(8 q^{(d-1)/2})", F_(1, 8), C=1, q=DExp(F_(-1, 2), F_(1, 2)))]]
        else:
            label = "q^{(d+1)/2} <= |E| <= q^d"
            if even:
                groups = [[T("q/144", F_(1, 144), q=1)],
                          [T("2|E||F|/(144 q^d)", F_(2, 144), P=1, C=1, q=DExp(F_(-1), F_(0)))]]
            else:
                groups = [[T("q/2", F_(1, 2), q=1)],
                          [T("|E||F|/(2q^d)", F_(1, 2), P=1, C=1, q=DExp(F_(-1), F_(0)))]]
        return label, groups
    return branches


def _gp5(params: BoundParams) -> Fraction:
    P, L = params.get("P"), params.get("L")
    factors = [P, P - 1, P - L, P - 3 * L, P - 6 * L]
    if any(f < 0 for f in factors):
        return Fraction(0)
    out = Fraction(1)
    for f in factors:
        out *= f
    return out


def _dim_parity(odd: bool) -> Callable[[BoundParams], bool]:
    def check(params):
        d = params.get("d")
        return d.denominator == 1 and (d.numerator % 2 == 1) == odd and d >= (3 if odd else 2)
    return check


CATALOG: dict[BoundId, BoundDef] = {}


def _add(bid: BoundId, direction: str, description: str, branches, *hyps: Hypothesis) -> None:
    CATALOG[bid] = BoundDef(bid, direction, description, branches, tuple(hyps))


_add(BoundId.TrivialConicKST, "upper", "I(P,C) for conics via forbidden K_{2,5} / K_{5,2}",
     _min([T("|P||C|^{4/5}", P=1, C=F_(4, 5)), T("|C|", C=1)],
          [T("|P|^{1/2}|C|", P=F_(1, 2), C=1), T("|P|", P=1)]))
_add(BoundId.TrivialCircParKST, "upper", "I(P,C) for circles/parabolas via forbidden K_{2,3} / K_{3,2}",
     _min([T("|P||C|^{2/3}", P=1, C=F_(2, 3)), T("|C|", C=1)],
          [T("|P|^{1/2}|C|", P=F_(1, 2), C=1), T("|P|", P=1)]))
_add(BoundId.VinhPointLine, "upper", "I(P,L) for large sets of points and lines",
     _sum(T("|P||L|/q", P=1, C=1, q=-1), T("q^{1/2}(|P||L|)^{1/2}", q=F_(1, 2), P=F_(1, 2), C=F_(1, 2))))
_add(BoundId.SdZCartesian, "upper", "I(A x B, L) for Cartesian point sets",
     _sum(T("|A|^{3/4}|B|^{1/2}|L|^{3/4}", A=F_(3, 4), B=F_(1, 2), C=F_(3, 4)), T("|L|", C=1), T("|A||B|", A=1, B=1)),
     A_LE_B, Hypothesis("|A||L| << p^2", _le_pow("A", "p", 2, extra=("C",))))
_add(BoundId.RichLinesCartesian, "upper", "|L_k| for a Cartesian point set",
     _sum(T("|A|^3|B|^2/k^4", A=3, B=2, k=-4), T("|A||B|/k", A=1, B=1, k=-1)),
     A_LE_B, _k_at_least(2), Hypothesis("|A||L| << p^2", _le_pow("A", "p", 2, extra=("C",))))
_add(BoundId.RichMobiusCartesian, "upper", "|T_k| Moebius maps rich in a Cartesian point set",
     _sum(T("|A|^4|B|^3/k^5", A=4, B=3, k=-5), T("|A|^2|B|^2/k^2", A=2, B=2, k=-2)),
     A_LE_B, _k_at_least(3), Hypothesis("|A||T| << p^2", _le_pow("A", "p", 2, extra=("C",))))
_add(BoundId.MobiusRich, "upper", "|T_k| k-rich Moebius maps",
     _sum(T("|P|^{15/4}/k^{19/4}", P=F_(15, 4), k=F_(-19, 4)), T("|P|^2/k^2", P=2, k=-2)),
     SMALL_P, _k_at_least(3))
_add(BoundId.RichConicPinnedPair, "upper", "|C_{q1,q2,k}| rich conics through two fixed points",
     _sum(T("|P|^{15/4}/k^{19/4}", P=F_(15, 4), k=F_(-19, 4)), T("|P|^2/k^2", P=2, k=-2)),
     SMALL_P, _k_at_least(5))
_add(BoundId.RichConic, "upper", "|C_k| k-rich conics",
     _sum(T("|P|^{23/4}/k^{27/4}", P=F_(23, 4), k=F_(-27, 4)), T("|P|^4/k^4", P=4, k=-4)),
     SMALL_P, _k_at_least(5))
_add(BoundId.ConicSmall, "upper", "I(P,C) for points and irreducible conics",
     _sum(T("|P|^{23/27}|C|^{23/27}", P=F_(23, 27), C=F_(23, 27)),
          # second exponent of |C| kept unreduced as 12/27
          T("|P|^{13/9}|C|^{12/27}", P=F_(13, 9), C=F_(12, 27)),
          T("|C|", C=1)),
     SMALL_P)
_add(BoundId.ConicCartesian, "upper", "I(A x B, C) for irreducible conics",
     _sum(T("|A|^{3/4}|B|^{5/8}|C|^{7/8}", A=F_(3, 4), B=F_(5, 8), C=F_(7, 8)),
          T("|A|^{1/2}|B|^{3/4}|C|^{1/4}", A=F_(1, 2), B=F_(3, 4), C=F_(1, 4)),
          T("|C|", C=1)),
     A_LE_B, AC_LE_P2)
_add(BoundId.RichConicCartesian, "upper", "|C_k| conics rich in a Cartesian point set",
     _sum(T("|A|^6|B|^5/k^7", A=6, B=5, k=-7), T("|A|^4|B|^4/k^4", A=4, B=4, k=-4)),
     A_LE_B, AC_LE_P2, _k_at_least(5))
_add(BoundId.CircParSmall, "upper", "I(P,C) for circles, translate-parabolas or translate-hyperbolas",
     _sum(T("|P|^{15/19}|C|^{15/19}", P=F_(15, 19), C=F_(15, 19)),
          T("|P|^{23/19}|C|^{4/19}", P=F_(23, 19), C=F_(4, 19)),
          T("|C|", C=1)),
     SMALL_P, CIRCLE_MOD4)
_add(BoundId.CircParCartesian, "upper", "I(A x B, C) for circles, parabolas or hyperbolas",
     _sum(T("|A|^{4/5}|B|^{3/5}|C|^{4/5}", A=F_(4, 5), B=F_(3, 5), C=F_(4, 5)),
          T("|A|^{6/5}|B|^{7/5}|C|^{1/5}", A=F_(6, 5), B=F_(7, 5), C=F_(1, 5)),
          T("|C|", C=1)),
     AC_LE_P2, CIRCLE_MOD4)
_add(BoundId.PachSharirReal, "upper", "real-plane comparison for points and conics",
     _sum(T("|P|^{5/9}|C|^{8/9}", P=F_(5, 9), C=F_(8, 9)), T("|P|", P=1), T("|C|", C=1)))
_add(BoundId.ConicLargeQ, "upper", "I(P,C) for conics over F_q, large sets",
     _sum(T("|P||C|/q", P=1, C=1, q=-1), T("q^{1/5}|P|^{4/5}|C|^{4/5}", q=F_(1, 5), P=F_(4, 5), C=F_(4, 5)),
          T("|C|", C=1)))
_add(BoundId.SphereLargeQ, "upper", "I(P,S) for points and spheres in F_q^d",
     _sum(T("|P||S|/q", P=1, C=1, q=-1),
          T("q^{(d-1)/3}|P|^{2/3}|S|^{2/3}", q=DExp(F_(1, 3), F_(-1, 3)), P=F_(2, 3), C=F_(2, 3))),
     Hypothesis("q = 3 (mod 4)", _mod4("q")))
_add(BoundId.CILRRSphere, "upper", "earlier point-sphere bound with q^{d/2}",
     _sum(T("|P||S|/q", P=1, C=1, q=-1), T("q^{d/2}(|P||S|)^{1/2}", q=DExp(F_(1, 2), F_(0)), P=F_(1, 2), C=F_(1, 2))))
_add(BoundId.KLPSphere, "upper", "earlier point-sphere bound for small sphere sets",
     _sum(T("|P||S|/q", P=1, C=1, q=-1),
          T("q^{(d-1)/2}(|P||S|)^{1/2}", q=DExp(F_(1, 2), F_(-1, 2)), P=F_(1, 2), C=F_(1, 2))),
     Hypothesis("|P||S| <= q^{d-1}", lambda prm: power_le(
         [(prm.get("P"), F_(1)), (prm.get("C"), F_(1))], [(prm.get("q"), prm.get("d") - 1)])))
_add(BoundId.RichPointsSdZ, "upper", "|P_k| points rich in a set of lines",
     _sum(T("|L|^{11/4}/k^{15/4}", C=F_(11, 4), k=F_(-15, 4)), T("|L|/k", C=1, k=-1)),
     Hypothesis("|L| << p^{15/13}", _le_pow("C", "p", F_(15, 13))), _k_at_least(2))
_add(BoundId.RichCircles, "upper", "|C_k| k-rich circles (also parabolas, hyperbolas)",
     _sum(T("|P|^{15/4}/k^{19/4}", P=F_(15, 4), k=F_(-19, 4)), T("|P|^2/k^2", P=2, k=-2)),
     SMALL_P, _k_at_least(3), CIRCLE_MOD4)
_add(BoundId.RichCirclesPinned, "upper", "|C_{q,k}| k-rich circles through a fixed point",
     _sum(T("|P|^{11/4}/k^{15/4}", P=F_(11, 4), k=F_(-15, 4)), T("|P|/k", P=1, k=-1)),
     SMALL_P, _k_at_least(3), CIRCLE_MOD4)
_add(BoundId.RichLinesLarge, "upper", "|L_k| k-rich lines, large sets",
     _sum(T("q|P|/k^2", q=1, P=1, k=-2)),
     Hypothesis("k > |P|/q", _cmp(lambda k, P, q: k * q > P, "k", "P", "q")))
_add(BoundId.RichMobiusLarge, "upper", "|T_k| k-rich Moebius maps, large sets",
     _sum(T("q|P|^2/k^3", q=1, P=2, k=-3)),
     Hypothesis("k > max{2, |P|/q}", _cmp(lambda k, P, q: k > 2 and k * q > P, "k", "P", "q")))
_add(BoundId.VinhHyperplane, "upper", "I(P,H) for points and hyperplanes in F_q^d",
     _sum(T("|P||H|/q", P=1, C=1, q=-1),
          T("q^{(d-1)/2}(|P||H|)^{1/2}", q=DExp(F_(1, 2), F_(-1, 2)), P=F_(1, 2), C=F_(1, 2))))
_add(BoundId.KohSunOdd, "lower", "|Delta(E,F)| for odd d >= 3 (piecewise in |E|)",
     _koh_sun_branches(even=False),
     Hypothesis("d odd, d >= 3", _dim_parity(odd=True)),
     Hypothesis("1 <= |E| <= q^d", lambda prm: prm.get("P") >= 1 and power_le(
         [(prm.get("P"), F_(1))], [(prm.get("q"), prm.get("d"))])))
_add(BoundId.KohSunEven, "lower", "|Delta(E,F)| for even d >= 2 (piecewise in |E|)",
     _koh_sun_branches(even=True),
     Hypothesis("d even, d >= 2", _dim_parity(odd=False)),
     Hypothesis("|E||F| >= 16 q^d", lambda prm: prm.get("P") * prm.get("C") >= 16 * prm.get("q") ** int(prm.get("d"))),
     Hypothesis("1 <= |E| <= q^d", lambda prm: prm.get("P") >= 1 and power_le(
         [(prm.get("P"), F_(1))], [(prm.get("q"), prm.get("d"))])))
_add(BoundId.PinnedLower815, "lower", "best pinned algebraic distance set size",
     _sum(T("|E|^{8/15}", P=F_(8, 15))),
     Hypothesis("|E| << p^{15/13}", _le_pow("P", "p", F_(15, 13))),
     Hypothesis("p = 3 (mod 4)", _mod4("p")))
_add(BoundId.PlanarDistanceLower, "lower", "|f(E - F)| for E on the plane z = 0",
     _min([T("|E|^{4/23}|F|^{4/23}", P=F_(4, 23), C=F_(4, 23))],
          [T("|F|^{5/4}/|E|", C=F_(5, 4), P=-1)],
          [T("|E|^{20/7}/|F|", P=F_(20, 7), C=-1)],
          [T("|E|", P=1)]),
     Hypothesis("|F| >= |E|^{405/216}", lambda prm: power_le(
         [(prm.get("P"), F_(405, 216))], [(prm.get("C"), F_(1))])))
_add(BoundId.ImageLower, "lower", "|f(E)| for polynomial images",
     _min([T("|E|^{19/15}|F|^{4/15}/|E+F|", P=F_(19, 15), C=F_(4, 15), S=-1)],
          [T("|E|^{19/4}|F|^{15/4}/|E+F|^{23/4}", P=F_(19, 4), C=F_(15, 4), S=F_(-23, 4))],
          [T("|E|", P=1)]),
     Hypothesis("|E+F| << p^{15/13}", _le_pow("S", "p", F_(15, 13))),
     CIRCLE_MOD4)
_add(BoundId.DistSetLower, "lower", "|Delta(E,F)| for |E| ~ |F| <= q^{(d+1)/2}",
     _min([T("q", q=1)],
          [T("|E|^{1/2}|F|^{1/2}/q^{(d-1)/2}", P=F_(1, 2), C=F_(1, 2), q=DExp(F_(-1, 2), F_(1, 2)))]),
     Hypothesis("|E| ~ |F| (within factor 2)", _cmp(lambda E, Fs: E <= 2 * Fs and Fs <= 2 * E, "P", "C")),
     Hypothesis("|F| <= q^{(d+1)/2}", lambda prm: power_le(
         [(prm.get("C"), F_(1))], [(prm.get("q"), (prm.get("d") + 1) / 2)])))
_add(BoundId.BeckLower207, "lower", "number of irreducible conics defined by P",
     _sum(T("|P|^{20/7}", P=F_(20, 7))),
     SMALL_P)
_add(BoundId.GP5TupleLower, "lower", "ordered 5-tuples of P in general position",
     _sum(Term("|P|(|P|-1)(|P|-L)(|P|-3L)(|P|-6L)", (("P", F_(1)), ("L", F_(1))), custom=_gp5)))


def catalog_names() -> list[str]:
    return [b.value for b in BoundId]


def required_magnitudes(bid: BoundId) -> set[str]:
    """Magnitudes read by the bound's terms (hypotheses may read more)."""
    d = CATALOG[bid]
    if bid in (BoundId.KohSunOdd, BoundId.KohSunEven):
        return {"P", "C", "q", "d"}
    return set().union(*(t.magnitudes() for g in d.branches(None)[1] for t in g))


def terms_of(bid: BoundId, params: BoundParams | None = None) -> list[list[Term]]:
    """Groups of terms (the bound is the minimum over groups of their sums)."""
    return CATALOG[bid].branches(params)[1]


def evaluate(bid: BoundId | str, params: BoundParams, prec: int = PRECISION) -> BoundValue:
    if isinstance(bid, str):
        bid = BoundId.from_name(bid)
    branch, groups = CATALOG[bid].branches(params)
    evaluated = []
    for g in groups:
        vals = tuple((t.label, _term_value(t, params, prec)) for t in g)
        with localcontext() as ctx:
            ctx.prec = prec
            total = sum((v for _, v in vals), Decimal(0))
        evaluated.append((vals, total))
    best_vals, best_total = min(evaluated, key=lambda vt: vt[1])
    dominant = max(best_vals, key=lambda lv: lv[1])[0]
    candidates = ()
    if len(groups) > 1:
        candidates = tuple((" + ".join(l for l, _ in vals), tot) for vals, tot in evaluated)
    return BoundValue(best_vals, best_total, dominant, branch, candidates)


def applicability(bid: BoundId | str, params: BoundParams) -> tuple[bool, list[str]]:
    """Check the bound's hypotheses with unit constants; returns (ok, violated labels)."""
    if isinstance(bid, str):
        bid = BoundId.from_name(bid)
    violated = [h.label for h in CATALOG[bid].hypotheses if not h.check(params)]
    return (not violated, violated)


@dataclass(frozen=True)
class Comparison:
    a: BoundId
    b: BoundId
    value_a: Decimal
    value_b: Decimal
    smaller: BoundId | None  # None when equal
    factor: Decimal  # larger / smaller (1 when equal; Infinity if the smaller is 0)
    exact: bool


def _single_power_product(bid: BoundId, params: BoundParams) -> Term | None:
    groups = CATALOG[bid].branches(params)[1]
    if len(groups) == 1 and len(groups[0]) == 1 and groups[0][0].custom is None:
        return groups[0][0]
    return None


def improvement_range(a: BoundId | str, b: BoundId | str, params: BoundParams) -> Comparison:
    """Which of two bounds is smaller at ``params`` and by what factor."""
    a = BoundId.from_name(a) if isinstance(a, str) else a
    b = BoundId.from_name(b) if isinstance(b, str) else b
    va, vb = evaluate(a, params), evaluate(b, params)
    ta, tb = _single_power_product(a, params), _single_power_product(b, params)
    exact = False
    if a is b:
        order = 0
        exact = True
    elif ta is not None and tb is not None and all(x > 0 for x, _ in ta.resolved(params) + tb.resolved(params)):
        lhs = ta.resolved(params) + [(ta.coeff, F_(1))]
        rhs = tb.resolved(params) + [(tb.coeff, F_(1))]
        le, ge = power_le(lhs, rhs), power_le(rhs, lhs)
        order = 0 if (le and ge) else (-1 if le else 1)
        exact = True
    else:
        wa, wb = va.total, vb.total
        if wa == wb or abs(wa - wb) <= abs(wa + wb) * Decimal(10) ** (-PRECISION + 5):
            wa, wb = evaluate(a, params, prec=2 * PRECISION).total, evaluate(b, params, prec=2 * PRECISION).total
        order = (wa > wb) - (wa < wb)
    if order == 0:
        return Comparison(a, b, va.total, vb.total, None, Decimal(1), exact)
    small, large = (va.total, vb.total) if order < 0 else (vb.total, va.total)
    with localcontext() as ctx:
        ctx.prec = PRECISION
        factor = Decimal("Infinity") if small == 0 else large / small
    return Comparison(a, b, va.total, vb.total, a if order < 0 else b, factor, exact)


def dyadic_threshold(size_p, size_c) -> Decimal:
    """max{5, |P|^{23/27} / |C|^{4/27}}: the level separating low- and high-richness conics."""
    params = BoundParams(size_p=size_p, size_c=size_c)
    val = _term_value(T("delta", P=F_(23, 27), C=F_(-4, 27)), params, PRECISION)
    return max(Decimal(5), val)
