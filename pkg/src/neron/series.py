"""Closed forms of the Néron component series from reduction data.

The series is ``S(T) = sum_{d in N'} phi(A(d)) T^d`` where ``N'`` is the set
of positive integers prime to the characteristic exponent ``p`` and
``A(d)`` is the base change to the unique tame extension of degree ``d``.

Two input shapes are supported:

* :class:`ReductionData` -- a tower ``a -> (phi_a, t_a)`` over the divisors
  ``a`` of ``e`` lying in ``N'``.  Off the divisors, ``phi`` follows the
  base-change law ``phi(A(d)) = d**t * phi(A)`` for ``gcd(d, e) = 1``.
* :class:`WildEllipticData` -- a wildly ramified elliptic curve, described
  by the prime-to-p part ``e_prime`` of the lcm of principal multiplicities
  and ``phi`` over each divisor of ``e_prime``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .errors import IncompleteTower, InputError
from .ratfun import (
    IntPoly,
    RatFun,
    cyclotomic,
    euler,
    expand,
    geom,
    pole_at_one,
    substitute_power,
)

TAME = "tame"
POT_MULT = "potentially_purely_multiplicative"
REGIMES = (TAME, POT_MULT)


def in_nprime(d: int, p: int) -> bool:
    return p == 1 or math.gcd(d, p) == 1


def divisors(n: int) -> List[int]:
    return [a for a in range(1, n + 1) if n % a == 0]


def prime_to_p_part(n: int, p: int) -> int:
    if p == 1:
        return n
    while n % p == 0:
        n //= p
    return n


def phi_after_base_change(phi: int, t: int, d: int) -> int:
    """Component count after a degree-d tame extension with d prime to e."""
    return d ** t * phi


def smallest_excluded(b: int, e: int, p: int) -> int:
    """Least element of ``b + N*e`` divisible by ``p``."""
    if p <= 1 or e % p == 0:
        raise ValueError("smallest_excluded needs p > 1 and p not dividing e")
    if math.gcd(b, e) != 1:
        raise ValueError("b must be prime to e")
    n = b
    while n % p:
        n += e
    assert n <= p * e  # equality only for b = e = 1
    return n


def sprime(phi: int, t: int, e: int, p: int) -> RatFun:
    """Closed form of ``sum phi * d**t T^d`` over d in N' with gcd(d, e) = 1."""
    eps = 0 if p == 1 or e % p == 0 else 1
    total = RatFun(0)
    for b in range(1, e + 1):
        if math.gcd(b, e) != 1:
            continue
        total = total + euler(geom(b, e), t)
        if eps:
            total = total - euler(geom(smallest_excluded(b, e, p), e * p), t)
    return total * phi


@dataclass(frozen=True)
class ReductionData:
    p: int
    e: int
    tower: Dict[int, Tuple[int, int]]
    regime: str = TAME
    potential_good: Optional[bool] = None

    @property
    def divisor_set(self) -> List[int]:
        return [a for a in divisors(self.e) if in_nprime(a, self.p)]

    @property
    def e_prime(self) -> int:
        return prime_to_p_part(self.e, self.p)

    def validate(self) -> None:
        if self.p < 1 or self.e < 1:
            raise InputError("p and e must be positive")
        if self.regime not in REGIMES:
            raise InputError(f"unknown regime {self.regime!r}")
        if self.regime == TAME and not in_nprime(self.e, self.p):
            raise InputError(f"tame regime needs gcd(e, p) = 1, got e={self.e}, p={self.p}")
        missing = [a for a in self.divisor_set if a not in self.tower]
        if missing:
            raise IncompleteTower(f"tower has no entry for divisor(s) {missing}")
        extra = [a for a in self.tower if a not in self.divisor_set]
        if extra:
            raise InputError(f"tower entries {extra} are not divisors of e in N'")
        for a, (phi, t) in self.tower.items():
            if phi < 1 or t < 0:
                raise InputError(f"bad tower entry at {a}: phi={phi}, t={t}")
        for a in self.divisor_set:
            for b in self.divisor_set:
                if b % a == 0 and self.tower[a][1] > self.tower[b][1]:
                    raise InputError(f"toric rank decreases from a={a} to a={b}")

    def tower_function(self) -> Callable[[int], int]:
        """phi(A(d)) for d in N', extended off the divisors by the base-change law."""

        def phi_of(d: int) -> int:
            g = math.gcd(d, self.e)
            phi, t = self.tower[g]
            return phi_after_base_change(phi, t, d // g)

        return phi_of


@dataclass(frozen=True)
class WildEllipticData:
    p: int
    e_prime: int
    tower: Dict[int, int]

    def validate(self) -> None:
        if self.p < 2:
            raise InputError("wild data needs a prime p > 1")
        if self.e_prime < 1 or math.gcd(self.e_prime, self.p) != 1:
            raise InputError("e_prime must be positive and prime to p")
        missing = [a for a in divisors(self.e_prime) if a not in self.tower]
        if missing:
            raise IncompleteTower(f"tower has no entry for divisor(s) {missing}")
        extra = [a for a in self.tower if self.e_prime % a]
        if extra:
            raise InputError(f"tower entries {extra} do not divide e_prime")
        if any(phi < 1 for phi in self.tower.values()):
            raise InputError("component group orders must be positive")

    def tower_function(self) -> Callable[[int], int]:
        def phi_of(d: int) -> int:
            return self.tower[math.gcd(d, self.e_prime)]

        return phi_of


@dataclass(frozen=True)
class SeriesReport:
    closed_form: RatFun
    pole_order: int
    leading: Fraction
    degree: int
    t_tame: int
    degree_sign_expected: str
    p: int = 1
    extras: dict = field(default_factory=dict, compare=False)

    def coefficients(self, n: int) -> List[int]:
        return [int(c) for c in expand(self.closed_form, n)]

    @property
    def degree_sign(self) -> str:
        return "zero" if self.degree == 0 else ("negative" if self.degree < 0 else "positive")


def _report(f: RatFun, t_tame: int, expected: str, p: int) -> SeriesReport:
    pole = pole_at_one(f)
    return SeriesReport(f, pole.order, pole.leading, pole.degree, t_tame, expected, p)


def assemble(data: ReductionData) -> SeriesReport:
    """Sum over a in D_e of S'(A(a); T^a)."""
    data.validate()
    e, p = data.e, data.p
    total = RatFun(0)
    for a in data.divisor_set:
        phi, t = data.tower[a]
        total = total + substitute_power(sprime(phi, t, e // a, p), a)
    t_tame = data.tower[data.e_prime][1]
    good = data.potential_good
    if good is None:
        good = data.tower[data.e_prime][1] == 0
    expected = "zero" if (p == 1 and good) else "negative"
    return _report(total, t_tame, expected, p)


def assemble_wild_elliptic(data: WildEllipticData) -> SeriesReport:
    """Series of a wildly ramified elliptic curve.

    Over K(a), a | e_prime, the prime-to-p part drops to e_prime / a and
    phi stays constant along degrees prime to it.
    """
    data.validate()
    total = RatFun(0)
    for a in divisors(data.e_prime):
        total = total + substitute_power(sprime(data.tower[a], 0, data.e_prime // a, data.p), a)
    return _report(total, 0, "negative", data.p)


def series_brute(tower_fn: Callable[[int], int], p: int, n: int) -> List[int]:
    """Coefficients c_0..c_n of sum_{d in N'} tower_fn(d) T^d, term by term."""
    return [tower_fn(d) if d >= 1 and in_nprime(d, p) else 0 for d in range(n + 1)]


def _totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def cyclotomic_witness(f: RatFun, jmax: int) -> Optional[Dict[int, int]]:
    """Multiplicities {n: k} with den(f) = +-prod Phi_n^k, n <= jmax, else None.

    A denominator of that shape divides a product of factors ``T^j - 1``
    with ``j <= jmax``.
    """
    den = f.den
    found: Dict[int, int] = {}
    for n in range(1, jmax + 1):
        if den.degree < 1:
            break
        if _totient(n) > den.degree:
            continue
        phi_n = cyclotomic(n)
        while den.degree >= phi_n.degree and phi_n.divides(den):
            den = den.exact_div(phi_n)
            found[n] = found.get(n, 0) + 1
    if den.degree == 0 and abs(den[0]) == 1:
        return found
    return None


def membership_denominator(f: RatFun, jmax: int) -> Optional[IntPoly]:
    """prod (T^n - 1)^k over the witness, which ``den(f)`` divides."""
    wit = cyclotomic_witness(f, jmax)
    if wit is None:
        return None
    out = IntPoly.const(1)
    for n, k in wit.items():
        out = out * (IntPoly.monomial(n) - 1) ** k
    return out
