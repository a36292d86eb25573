"""Weierstrass models over k((t)) and Tate's algorithm.

The algorithm follows the classical step-by-step procedure valid in every
residue characteristic: translate the singular point to the origin, read
off the type from valuations of the a-invariants and b-invariants, and
descend through the I_n* and IV*/III*/II* sub-procedures, rescaling
whenever the equation turns out not to be minimal.

Component-group orders are geometric: over an algebraically closed
residue field they depend only on the Kodaira type, so no splitting field
is ever constructed.  The only residue-field roots that are needed are
multiple roots, which lie in the perfect fields we use.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Dict, NamedTuple, Optional, Tuple

from .errors import NeronError, SingularCurve, WildCurve, WildDegree
from .local_field import INF, LaurentSeries, base_change, format_laurent, val, valuation_at_least
from .series import ReductionData, WildEllipticData, divisors, in_nprime, prime_to_p_part

FAMILIES = ("I", "I*", "II", "III", "IV", "IV*", "III*", "II*")


class KodairaType(NamedTuple):
    family: str
    n: int = 0

    def __str__(self):
        if self.family == "I":
            return f"I{self.n}"
        if self.family == "I*":
            return f"I{self.n}*"
        return self.family

    @classmethod
    def parse(cls, s: str) -> "KodairaType":
        s = s.strip().replace("_", "")
        if s in ("II", "III", "IV", "IV*", "III*", "II*"):
            return cls(s)
        if s.startswith("I") and s[1:].rstrip("*").isdigit():
            n = int(s[1:].rstrip("*"))
            return cls("I*" if s.endswith("*") else "I", n)
        raise ValueError(f"unknown Kodaira symbol {s!r}")

    @property
    def semi_abelian(self) -> bool:
        return self.family == "I"

    @property
    def phi(self) -> int:
        if self.family == "I":
            return max(self.n, 1)
        return _PHI[self.family]

    @property
    def structure(self) -> str:
        if self.family == "I":
            return "trivial" if self.n <= 1 else f"Z/{self.n}"
        if self.family == "I*":
            return "(Z/2)^2" if self.n % 2 == 0 else "Z/4"
        return _STRUCTURE[self.family]

    @property
    def multiplicity(self) -> int:
        """Common multiplicity m of the principal components."""
        if self.family == "I":
            return 1
        return _MULT[self.family]

    @property
    def toric_rank(self) -> int:
        return 1 if self.family == "I" and self.n >= 1 else 0


_PHI = {"I*": 4, "II": 1, "II*": 1, "III": 2, "III*": 2, "IV": 3, "IV*": 3}
_STRUCTURE = {"II": "trivial", "II*": "trivial", "III": "Z/2", "III*": "Z/2", "IV": "Z/3", "IV*": "Z/3"}
_MULT = {"I*": 2, "II": 6, "II*": 6, "III": 4, "III*": 4, "IV": 3, "IV*": 3}


@dataclass(frozen=True)
class KodairaData:
    kodaira_type: KodairaType
    v_delta_min: int
    phi: int
    phi_structure: str
    m: int
    t: int

    @classmethod
    def of(cls, kt: KodairaType, v_delta_min: int) -> "KodairaData":
        return cls(kt, v_delta_min, kt.phi, kt.structure, kt.multiplicity, kt.toric_rank)


class Invariants(NamedTuple):
    b2: LaurentSeries
    b4: LaurentSeries
    b6: LaurentSeries
    b8: LaurentSeries
    c4: LaurentSeries
    c6: LaurentSeries
    delta: LaurentSeries
    j: Optional[LaurentSeries]


def _invariants(a1, a2, a3, a4, a6, with_j=False) -> Invariants:
    b2 = a1 * a1 + a2 * 4
    b4 = a4 * 2 + a1 * a3
    b6 = a3 * a3 + a6 * 4
    b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - b4 * 24
    c6 = -(b2 * b2 * b2) + b2 * b4 * 36 - b6 * 216
    delta = -(b2 * b2 * b8) - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9
    j = c4 * c4 * c4 / delta if with_j and delta.coeffs else None
    return Invariants(b2, b4, b6, b8, c4, c6, delta, j)


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over k((t))."""

    a1: LaurentSeries
    a2: LaurentSeries
    a3: LaurentSeries
    a4: LaurentSeries
    a6: LaurentSeries

    @classmethod
    def from_coefficients(cls, field, a1=0, a2=0, a3=0, a4=0, a6=0) -> "WeierstrassModel":
        def lift(x):
            if isinstance(x, LaurentSeries):
                return x
            if isinstance(x, dict):
                return LaurentSeries.from_terms(field, x)
            return LaurentSeries.constant(field, field(x))

        return cls(lift(a1), lift(a2), lift(a3), lift(a4), lift(a6))

    @property
    def field(self):
        return self.a1.field

    @property
    def a_invariants(self) -> Tuple[LaurentSeries, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @functools.cached_property
    def invariants(self) -> Invariants:
        return _invariants(*self.a_invariants, with_j=True)

    def __str__(self):
        a1, a2, a3, a4, a6 = (format_laurent(a) for a in self.a_invariants)
        return f"[{a1}, {a2}, {a3}, {a4}, {a6}] over {self.field.name}((t))"


def derived_quantities(model: WeierstrassModel) -> Invariants:
    inv = model.invariants
    if val(inv.delta) == INF:
        raise SingularCurve("discriminant vanishes")
    return inv


def rst_transform(a, r, s, t):
    """Change of variables x = x' + r, y = y' + s x' + t (u = 1)."""
    a1, a2, a3, a4, a6 = a
    return (
        a1 + s * 2,
        a2 - s * a1 + r * 3 - s * s,
        a3 + r * a1 + t * 2,
        a4 - s * a3 + r * a2 * 2 - (t + r * s) * a1 + r * r * 3 - s * t * 2,
        a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1,
    )


def _scale(a, k: int):
    """Divide a_i by t^(i k): the substitution (x, y) -> (t^2k x, t^3k y)."""
    return tuple(ai.shift(-w * k) for ai, w in zip(a, (1, 2, 3, 4, 6)))


def integral_scaling(a) -> int:
    """Largest k with v(a_i) >= i k for all i."""
    k = None
    for ai, w in zip(a, (1, 2, 3, 4, 6)):
        v = val(ai)
        if v == INF:
            continue
        kk = math.floor(v / w)
        k = kk if k is None else min(k, kk)
    return 0 if k is None else k


class TateResult(NamedTuple):
    data: KodairaData
    minimal: WeierstrassModel
    v_delta_input: int


class _State:
    """Mutable a-invariants during the algorithm."""

    def __init__(self, a):
        self.a = a
        self.field = a[0].field

    def const(self, c, k=0) -> LaurentSeries:
        return LaurentSeries.monomial(self.field, k, c)

    def res(self, x: LaurentSeries, k: int = 0):
        """Residue of x / t^k; requires v(x) >= k."""
        if not valuation_at_least(x, k):
            raise NeronError(f"internal: expected valuation >= {k}, got {x.valuation}")
        return x.coefficient(k)

    def transform(self, r=None, s=None, t=None, rk=0, sk=0, tk=0):
        zero = LaurentSeries.zero(self.field)
        rr = self.const(r, rk) if r is not None else zero
        ss = self.const(s, sk) if s is not None else zero
        tt = self.const(t, tk) if t is not None else zero
        self.a = rst_transform(self.a, rr, ss, tt)


def tate_algorithm(model: WeierstrassModel) -> TateResult:
    """Kodaira type and minimal model of an elliptic curve over k((t))."""
    F = model.field
    p = F.characteristic
    inv0 = derived_quantities(model)
    v_in = val(inv0.delta)
    st = _State(_scale(model.a_invariants, integral_scaling(model.a_invariants)))
    half = F.one / 2 if p != 2 else None

    def root(x):
        return F.pth_root(x)

    while True:
        a1, a2, a3, a4, a6 = st.a
        b2, b4, b6, b8, c4, c6, delta, _ = _invariants(*st.a)
        vD = val(delta)
        if vD == 0:
            return _finish(KodairaType("I", 0), vD, st, v_in)

        # move the singular point of the reduction to (0, 0)
        R = st.res
        if p == 2:
            if R(b2) == 0:
                r = root(R(a4))
                t = root(((r + R(a2)) * r + R(a4)) * r + R(a6))
            else:
                r = R(a3) / R(a1)
                t = (R(a4) + r * r) / R(a1)
        elif p == 3:
            r = root(-R(b6)) if R(b2) == 0 else -R(b4) / R(b2)
            t = R(a1) * r + R(a3)
        else:
            if R(c4) == 0:
                r = -R(b2) / 12
            else:
                r = -(R(c6) + R(b2) * R(c4)) / (R(c4) * 12)
            t = -(R(a1) * r + R(a3)) * half
        st.transform(r=r, t=t)
        a1, a2, a3, a4, a6 = st.a
        b2, b4, b6, b8, c4, c6, delta, _ = _invariants(*st.a)

        if val(c4) == 0:
            return _finish(KodairaType("I", vD), vD, st, v_in)
        if val(a6) < 2:
            return _finish(KodairaType("II"), vD, st, v_in)
        if val(b8) < 3:
            return _finish(KodairaType("III"), vD, st, v_in)
        if val(b6) < 3:
            return _finish(KodairaType("IV"), vD, st, v_in)

        # arrange t | a1, a2; t^2 | a3, a4; t^3 | a6
        if p == 2:
            st.transform(s=root(R(a2)), t=root(R(a6, 2)), tk=1)
        elif p == 3:
            st.transform(s=R(a1), t=R(a3, 1), tk=1)
        else:
            st.transform(s=-R(a1) * half, t=-R(a3, 1) * half, tk=1)
        a1, a2, a3, a4, a6 = st.a

        # cubic T^3 + b T^2 + c T + d
        b, c, d = R(a2, 1), R(a4, 2), R(a6, 3)
        w = d * d * 27 - b * b * c * c + b * b * b * d * 4 - b * c * d * 18 + c * c * c * 4
        x = c * 3 - b * b
        if w != 0:
            return _finish(KodairaType("I*", 0), vD, st, v_in)
        if x != 0:
            # double root -> I_m*
            if p == 2:
                r1 = root(c)
            elif p == 3:
                r1 = c / b
            else:
                r1 = (b * c - d * 9) / (x * 2)
            st.transform(r=r1, rk=1)
            ix = iy = 3
            mx = my = 2
            while True:
                a1, a2, a3, a4, a6 = st.a
                a3t, a6t = R(a3, my), R(a6, mx + my)
                if a3t * a3t + a6t * 4 != 0:
                    break
                tt = root(a6t) if p == 2 else -a3t * half
                st.transform(t=tt, tk=my)
                my += 1
                iy += 1
                a1, a2, a3, a4, a6 = st.a
                a2t, a4t, a6t = R(a2, 1), R(a4, 1 + mx), R(a6, mx + my)
                if a4t * a4t - a6t * a2t * 4 != 0:
                    break
                rr = root(a6t / a2t) if p == 2 else -a4t / (a2t * 2)
                st.transform(r=rr, rk=mx)
                mx += 1
                ix += 1
            return _finish(KodairaType("I*", ix + iy - 5), vD, st, v_in)

        # triple root
        if p == 2:
            r = b
        elif p == 3:
            r = root(-d)
        else:
            r = -b / 3
        st.transform(r=r, rk=1)
        a1, a2, a3, a4, a6 = st.a
        x3, x6 = R(a3, 2), R(a6, 4)
        if x3 * x3 + x6 * 4 != 0:
            return _finish(KodairaType("IV*"), vD, st, v_in)
        tt = -root(x6) if p == 2 else -x3 * half
        st.transform(t=tt, tk=2)
        a1, a2, a3, a4, a6 = st.a
        if val(a4) < 4:
            return _finish(KodairaType("III*"), vD, st, v_in)
        if val(a6) < 6:
            return _finish(KodairaType("II*"), vD, st, v_in)
        # not minimal
        st.a = _scale(st.a, 1)


def _finish(kt: KodairaType, vD: int, st: _State, v_in: int) -> TateResult:
    return TateResult(KodairaData.of(kt, vD), WeierstrassModel(*st.a), v_in)


def base_change_model(model: WeierstrassModel, d: int) -> WeierstrassModel:
    """Coefficientwise t -> u^d; the result is usually not minimal."""
    return WeierstrassModel(*(base_change(ai, d) for ai in model.a_invariants))


# -- tame transition table -------------------------------------------------------

_PERIODIC = {
    "II": ("I0", "II", "IV", "I0*", "IV*", "II*"),
    "IV": ("I0", "IV", "IV*"),
    "IV*": ("I0", "IV*", "IV"),
    "II*": ("I0", "II*", "IV*", "I0*", "IV", "II"),
    "III": ("I0", "III", "I0*", "III*"),
    "III*": ("I0", "III*", "I0*", "III"),
}


def tame_transition(kt: KodairaType, d: int) -> KodairaType:
    """Predicted type after a tame base change of degree d."""
    if d < 1:
        raise ValueError("degree must be positive")
    if kt.family == "I":
        return KodairaType("I", kt.n * d)
    if kt.family == "I*":
        if d % 2:
            return KodairaType("I*", kt.n * d)
        return KodairaType("I", kt.n * d)
    cycle = _PERIODIC[kt.family]
    return KodairaType.parse(cycle[d % len(cycle)])


# (p, type over K) -> (e(C)', type over K(e(C)')) for wildly ramified curves;
# in every other wild case e(C)' = 1
WILD_TRANSITIONS = {
    (2, "II"): (3, "I0*"),
    (2, "II*"): (3, "I0*"),
    (3, "II"): (2, "IV"),
    (3, "II*"): (2, "IV*"),
}


# -- reduction tower ----------------------------------------------------------------

@dataclass(frozen=True)
class CurveTower:
    base: KodairaData
    e: int
    e_prime: int
    entries: Dict[int, KodairaData]

    def to_dict(self) -> dict:
        return {
            "e": self.e,
            "e_prime": self.e_prime,
            "tower": [
                {"a": a, "type": str(k.kodaira_type), "phi": k.phi, "t": k.t}
                for a, k in sorted(self.entries.items())
            ],
        }


def kodaira_after(model: WeierstrassModel, d: int) -> KodairaData:
    return tate_algorithm(base_change_model(model, d)).data


E_SEARCH_BOUND = 12


def reduction_tower(model: WeierstrassModel) -> Tuple[CurveTower, ReductionData]:
    """Minimal semi-stabilizing tame degree e and the tower over its divisors."""
    p = model.field.char_exponent
    base = tate_algorithm(model).data
    e = None
    for d in range(1, E_SEARCH_BOUND + 1):
        if not in_nprime(d, p):
            continue
        if kodaira_after(model, d).kodaira_type.semi_abelian:
            e = d
            break
    if e is None:
        raise WildCurve(
            f"no tame extension of degree <= {E_SEARCH_BOUND} gives semi-abelian reduction "
            f"(type {base.kodaira_type} in characteristic {p}); use the wild data format"
        )
    entries = {a: (base if a == 1 else kodaira_after(model, a)) for a in divisors(e)}
    tower = CurveTower(base, e, prime_to_p_part(e, p), entries)
    data = ReductionData(
        p=p,
        e=e,
        tower={a: (k.phi, k.t) for a, k in entries.items()},
        potential_good=entries[e].kodaira_type == KodairaType("I", 0),
    )
    return tower, data


def wild_elliptic_data(model: WeierstrassModel) -> WildEllipticData:
    """Tower of a wildly ramified curve from the type of its minimal model.

    e(C) is the multiplicity of the principal components, and e(C)' its
    prime-to-p part; phi is computed over K(a) for each divisor a.
    """
    p = model.field.characteristic
    if p not in (2, 3):
        raise WildDegree("wild reduction only occurs in residue characteristic 2 or 3")
    base = tate_algorithm(model).data
    if base.kodaira_type.family == "I":
        raise ValueError("semi-abelian curves are not wildly ramified")
    e_prime = prime_to_p_part(base.m, p)
    tower = {a: (base.phi if a == 1 else kodaira_after(model, a).phi) for a in divisors(e_prime)}
    return WildEllipticData(p, e_prime, tower)
