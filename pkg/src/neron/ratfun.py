"""Exact univariate polynomials and rational functions over the integers.

All arithmetic is exact; coefficients are Python ints and local data at
``T = 1`` is reported as :class:`fractions.Fraction`.  A :class:`RatFun` is
always kept in canonical form: numerator and denominator are coprime over
the rationals, jointly content free, and the denominator has a positive
leading coefficient.  Equality of canonical forms is therefore equality of
rational functions.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Union

from .errors import DivisionByZero, NotExpandable, ZeroDenominator

__all__ = [
    "IntPoly",
    "RatFun",
    "PoleReport",
    "T",
    "rat_new",
    "rat_arith",
    "euler",
    "psi",
    "geom",
    "substitute_power",
    "expand",
    "pole_at_one",
    "cyclotomic",
]

NEG_INF = -math.inf


def _strip(coeffs: List[int]) -> List[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class IntPoly:
    """Polynomial in ``T`` with integer coefficients, ascending degree order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = []
        for c in coeffs:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError(f"non-integral coefficient {c}")
                c = c.numerator
            cs.append(int(c))
        self.coeffs = tuple(_strip(cs))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPoly":
        return cls([0] * k + [c])

    @classmethod
    def const(cls, c: int) -> "IntPoly":
        return cls([c])

    @property
    def degree(self) -> Union[int, float]:
        """Degree, or ``-inf`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly.const(other)
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __add__(self, other):
        if isinstance(other, int):
            other = IntPoly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return IntPoly.const(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = IntPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self) -> "IntPoly":
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def compose_power(self, a: int) -> "IntPoly":
        """Return ``self(T**a)``."""
        out = [0] * (a * (len(self.coeffs) - 1) + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[a * i] = c
        return IntPoly(out)

    def divmod_rational(self, other: "IntPoly"):
        """Division with remainder over the rationals (Fraction coefficients)."""
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        lc = other.lead
        unit = abs(lc) == 1  # integral arithmetic suffices for monic divisors
        rem = list(self.coeffs) if unit else [Fraction(c) for c in self.coeffs]
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return [], rem
        quot = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            q = rem[k + len(other.coeffs) - 1] * lc if unit else rem[k + len(other.coeffs) - 1] / lc
            quot[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return quot, _strip(rem[: len(other.coeffs) - 1])

    def exact_div(self, other: "IntPoly") -> "IntPoly":
        """Quotient when ``other`` divides ``self`` with integral quotient."""
        quot, rem = self.divmod_rational(other)
        if rem:
            raise ValueError("division is not exact")
        return IntPoly(quot)

    def divides(self, other: "IntPoly") -> bool:
        return not other.divmod_rational(self)[1]

    def primitive(self) -> "IntPoly":
        g = self.content()
        if g == 0:
            return self
        if self.lead < 0:
            g = -g
        return IntPoly(c // g for c in self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)!r})"

    def __str__(self):
        return _format_poly(self.coeffs)


def _format_poly(coeffs: Sequence[int], var: str = "T") -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    sign, body = terms[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def _int_quotient(a: Sequence[int], b: Sequence[int]) -> Optional[List[int]]:
    """Quotient a / b if it exists in Z[T], else None."""
    r = list(a)
    db = len(b)
    if len(r) < db:
        return None if any(r) else []
    lb = b[-1]
    q = [0] * (len(r) - db + 1)
    for k in range(len(r) - db, -1, -1):
        c, m = divmod(r[k + db - 1], lb)
        if m:
            return None
        q[k] = c
        if c:
            for j, x in enumerate(b):
                r[k + j] -= c * x
    return q if not any(r[: db - 1]) else None


def _heuristic_gcd(a: IntPoly, b: IntPoly) -> Optional[IntPoly]:
    """GCDHEU: evaluate at a large integer, take the integer gcd, read the
    digits back in a balanced base and keep the candidate only if it divides
    both inputs."""
    bound = 2 * min(max(map(abs, a.coeffs)), max(map(abs, b.coeffs))) + 29
    xi = max(bound, 2 * max(max(map(abs, a.coeffs)) // abs(a.lead), max(map(abs, b.coeffs)) // abs(b.lead)) + 2)
    for _ in range(6):
        h = math.gcd(a(xi), b(xi))
        digits = []
        while h:
            d = h % xi
            if d > xi // 2:
                d -= xi
            digits.append(d)
            h = (h - d) // xi
        cand = IntPoly(digits).primitive()
        if not cand.is_zero() and _int_quotient(a.coeffs, cand.coeffs) is not None \
                and _int_quotient(b.coeffs, cand.coeffs) is not None:
            return cand
        xi = xi * 73794 * math.isqrt(math.isqrt(xi)) // 27011
    return None


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Primitive gcd with positive leading coefficient.

    Tries the heuristic integer gcd first and falls back to the primitive
    pseudo-remainder sequence.
    """
    a, b = a.primitive(), b.primitive()
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.degree > 0 and b.degree > 0:
        g = _heuristic_gcd(a, b)
        if g is not None:
            return g
    elif a.degree == 0 or b.degree == 0:
        return IntPoly.const(1)
    while not b.is_zero():
        if a.degree < b.degree:
            a, b = b, a
            continue
        # pseudo-remainder keeps everything integral
        r = list(a.coeffs)
        lb, db = b.lead, len(b.coeffs)
        while len(r) >= db:
            lr = r[-1]
            shift = len(r) - db
            r = [c * lb for c in r]
            for j, c in enumerate(b.coeffs):
                r[shift + j] -= lr * c
            _strip(r)
        a, b = b, IntPoly(r).primitive()
    return a.primitive()


class RatFun:
    """Canonical quotient ``num/den`` of integer polynomials."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        if isinstance(num, int):
            num = IntPoly.const(num)
        if isinstance(den, int):
            den = IntPoly.const(den)
        if den.is_zero():
            raise ZeroDenominator("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = IntPoly(), IntPoly.const(1)
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        c = math.gcd(num.content(), den.content())
        if den.lead < 0:
            c = -c
        self.num = IntPoly(x // c for x in num.coeffs)
        self.den = IntPoly(x // c for x in den.coeffs)

    @classmethod
    def _raw(cls, num: IntPoly, den: IntPoly) -> "RatFun":
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @staticmethod
    def _coerce(x) -> "RatFun":
        if isinstance(x, RatFun):
            return x
        if isinstance(x, (int, IntPoly)):
            return RatFun(x)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    @property
    def degree(self):
        if self.num.is_zero():
            return NEG_INF
        return self.num.degree - self.den.degree

    def __eq__(self, other):
        other = RatFun._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        return RatFun._raw(-self.num, self.den)

    def __add__(self, other):
        other = RatFun._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = RatFun._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return RatFun._coerce(other) - self

    def __mul__(self, other):
        other = RatFun._coerce(other)
        if other is NotImplemented:
            return other
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RatFun._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFun._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFun(1) / (self ** -k)
        return RatFun._raw(self.num ** k, self.den ** k)

    def __call__(self, x):
        d = self.den(Fraction(x))
        if d == 0:
            raise DivisionByZero(f"pole at {x}")
        return self.num(Fraction(x)) / d

    def to_dict(self) -> dict:
        return {"num": list(self.num.coeffs), "den": list(self.den.coeffs)}

    def __repr__(self):
        return f"RatFun({list(self.num.coeffs)!r}, {list(self.den.coeffs)!r})"

    def __str__(self):
        num, den = self.num.coeffs, self.den.coeffs
        # prefer a positive constant term in the denominator, as in 1 - T^j
        if den[0] < 0:
            num = tuple(-c for c in num)
            den = tuple(-c for c in den)
        if den == (1,):
            return _format_poly(num)
        top = _format_poly(num)
        if sum(1 for c in num if c) > 1:
            top = f"({top})"
        return f"{top}/({_format_poly(den)})"


T = RatFun(IntPoly.monomial(1))


@dataclass(frozen=True)
class PoleReport:
    """Local data at ``T = 1``.

    ``leading`` is the coefficient of ``(T-1)**-order`` in the Laurent
    expansion at ``T = 1`` (the value of the deflated function when
    ``order <= 0``).
    """

    order: int
    leading: Fraction
    degree: Union[int, float]

    def to_dict(self) -> dict:
        return {"order": self.order, "leading": str(self.leading), "degree": self.degree}


def rat_new(num, den) -> RatFun:
    if not isinstance(num, IntPoly):
        num = IntPoly(num) if not isinstance(num, int) else IntPoly.const(num)
    if not isinstance(den, IntPoly):
        den = IntPoly(den) if not isinstance(den, int) else IntPoly.const(den)
    return RatFun(num, den)


_OPS = {
    "add": lambda f, g: f + g,
    "sub": lambda f, g: f - g,
    "mul": lambda f, g: f * g,
    "div": lambda f, g: f / g,
}


def rat_arith(f: RatFun, g: RatFun, op: str) -> RatFun:
    try:
        return _OPS[op](f, g)
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None


def euler(f: RatFun, times: int = 1) -> RatFun:
    """Apply the Euler operator ``T * d/dT`` ``times`` times."""
    if times < 0:
        raise ValueError("times must be nonnegative")
    x = IntPoly.monomial(1)
    for _ in range(times):
        if f.is_zero():
            break
        num = x * (f.num.derivative() * f.den - f.num * f.den.derivative())
        f = RatFun(num, f.den * f.den)
    return f


def geom(b: int, j: int) -> RatFun:
    """``T**b / (1 - T**j)``: ones at exponents ``b, b+j, b+2j, ...``."""
    if j < 1 or b < 0:
        raise ValueError("geom needs b >= 0 and j >= 1")
    return RatFun(IntPoly.monomial(b), IntPoly.const(1) - IntPoly.monomial(j))


def psi(a: int) -> RatFun:
    """Closed form of ``sum_{d>0} d**a T**d``."""
    return euler(geom(1, 1), a)


def substitute_power(f: RatFun, a: int) -> RatFun:
    """``f(T**a)``; coprimality survives the substitution, so no gcd is needed."""
    if a < 1:
        raise ValueError("substitution exponent must be positive")
    if a == 1:
        return f
    return RatFun._raw(f.num.compose_power(a), f.den.compose_power(a))


def expand(f: RatFun, n: int) -> List[Fraction]:
    """Power series coefficients ``c_0 .. c_n`` of ``f`` at ``T = 0``."""
    d0 = f.den[0]
    if d0 == 0:
        raise NotExpandable("denominator vanishes at T = 0")
    den = f.den.coeffs
    out: List[Fraction] = []
    for i in range(n + 1):
        acc = Fraction(f.num[i])
        for j in range(1, min(i, len(den) - 1) + 1):
            acc -= den[j] * out[i - j]
        out.append(acc / d0)
    return out


def _deflate(p: IntPoly):
    """Strip factors ``(T - 1)`` by synthetic division; return (mult, rest)."""
    m = 0
    coeffs = list(p.coeffs)
    while coeffs and sum(coeffs) == 0:
        # synthetic division by (T - 1)
        q = [0] * (len(coeffs) - 1)
        acc = 0
        for i in range(len(coeffs) - 1, 0, -1):
            acc += coeffs[i]
            q[i - 1] = acc
        coeffs = q
        m += 1
    return m, IntPoly(coeffs)


def pole_at_one(f: RatFun) -> PoleReport:
    if f.is_zero():
        return PoleReport(0, Fraction(0), NEG_INF)
    mn, rn = _deflate(f.num)
    md, rd = _deflate(f.den)
    return PoleReport(md - mn, Fraction(rn(1), rd(1)), f.degree)


def _mobius(n: int) -> int:
    out, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            out = -out
        k += 1
    return -out if n > 1 else out


@functools.lru_cache(maxsize=None)
def cyclotomic(n: int) -> IntPoly:
    """The n-th cyclotomic polynomial, prod over d | n of (T^d - 1)^mu(n/d)."""
    num, den = IntPoly.const(1), IntPoly.const(1)
    for d in range(1, n + 1):
        if n % d:
            continue
        mu = _mobius(n // d)
        if mu == 1:
            num = num * (IntPoly.monomial(d) - 1)
        elif mu == -1:
            den = den * (IntPoly.monomial(d) - 1)
    return num.exact_div(den)
