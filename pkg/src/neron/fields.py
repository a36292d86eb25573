"""Residue fields: the rationals and finite fields F_{p^m}.

Finite fields are represented as F_p[X]/(f) for a monic irreducible ``f``
(the lexicographically first one of the requested degree unless given).
Field objects are created fresh per computation; there is no registry, so
two fields are the same when their characteristic and modulus agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import DivisionByZero, ExtensionBound, NoRationalRoot

SEARCH_LIMIT = 2 ** 20
MAX_EXTENSION = 6


# -- polynomials over F_p as coefficient lists, ascending --------------------

def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], f: Sequence[int], p: int) -> List[int]:
    a = [x % p for x in a]
    _trim(a)
    df = len(f) - 1
    inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pgcd(a: List[int], b: List[int], p: int) -> List[int]:
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _powmod_x(e: int, f: Sequence[int], p: int) -> List[int]:
    """X**e mod f over F_p."""
    result, base = [1], _pmod([0, 1], f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Rabin-style test: gcd(f, X^(p^i) - X) = 1 for i <= deg/2."""
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    for i in range(1, n // 2 + 1):
        h = _powmod_x(p ** i, f, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_pgcd(list(f), _trim(h), p)) > 1:
            return False
    return True


def first_irreducible(p: int, m: int) -> Tuple[int, ...]:
    """Lexicographically first monic irreducible polynomial of degree m."""
    if m == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=m):
        f = list(tail) + [1]
        if f[0] and is_irreducible_mod_p(f, p):
            return tuple(f)
    raise ValueError(f"no irreducible polynomial of degree {m} over F_{p}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# -- fields ------------------------------------------------------------------

class RationalField:
    """The rationals, elements are :class:`fractions.Fraction`."""

    characteristic = 0
    char_exponent = 1
    is_finite = False
    degree = 1
    name = "Q"

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into Q")

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def from_fraction(self, num: int, den: int) -> Fraction:
        if den == 0:
            raise DivisionByZero("zero denominator")
        return Fraction(num, den)

    def pth_root(self, x, n=None):
        raise ValueError("Q has characteristic zero")

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "RationalField()"


QQ = RationalField()


class FiniteField:
    """F_{p^m} = F_p[X]/(modulus)."""

    is_finite = True

    def __init__(self, p: int, m: int = 1, modulus: Optional[Sequence[int]] = None):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if modulus is None:
            modulus = first_irreducible(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) - 1 != m or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if not is_irreducible_mod_p(modulus, p):
            raise ValueError("modulus is reducible")
        self.characteristic = p
        self.char_exponent = p
        self.degree = m
        self.modulus = modulus
        self.order = p ** m

    @property
    def name(self) -> str:
        return f"F{self.order}"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and self.characteristic == other.characteristic
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.characteristic, self.modulus))

    def __repr__(self):
        return f"FiniteField({self.characteristic}, {self.degree})"

    def _make(self, coeffs) -> "FFElement":
        return FFElement(self, tuple(_pmod(coeffs, self.modulus, self.characteristic)))

    def __call__(self, x) -> "FFElement":
        if isinstance(x, FFElement):
            if x.field != self:
                raise TypeError("element of a different field")
            return x
        if isinstance(x, Fraction):
            return self.from_fraction(x.numerator, x.denominator)
        if isinstance(x, int):
            return self._make([x])
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def from_fraction(self, num: int, den: int) -> "FFElement":
        if den % self.characteristic == 0:
            raise DivisionByZero(f"{den} is not invertible in {self.name}")
        return self(num) / self(den)

    @property
    def zero(self):
        return FFElement(self, ())

    @property
    def one(self):
        return self._make([1])

    @property
    def gen(self):
        return self._make([0, 1])

    def elements(self):
        p, m = self.characteristic, self.degree
        for tail in itertools.product(range(p), repeat=m):
            yield self._make(list(reversed(tail)))

    def pth_root(self, x: "FFElement", n: Optional[int] = None) -> "FFElement":
        """Inverse Frobenius; ``n`` must be a power of p (default p)."""
        n = self.characteristic if n is None else n
        # x -> x^(q/n) inverts x -> x^n on F_q when n | q and n is a p-power
        r = x
        k = n
        while k > 1:
            r = r ** (self.order // self.characteristic)
            k //= self.characteristic
        return r

    def extension(self, r: int) -> Tuple["FiniteField", Callable]:
        """Degree-r extension with an embedding of ``self`` into it."""
        big = FiniteField(self.characteristic, self.degree * r)
        if self.degree == 1:
            return big, lambda x: big(x.coeffs[0] if x.coeffs else 0)
        image = None
        for cand in big.elements():
            if _evaluate(self.modulus, cand, big).is_zero():
                image = cand
                break
        assert image is not None  # a degree-m field embeds in any degree-mr one

        def embed(x: "FFElement", _img=image, _big=big):
            acc = _big.zero
            for c in reversed(x.coeffs):
                acc = acc * _img + c
            return acc

        return big, embed


class FFElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: Tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, FFElement):
            if other.field is not self.field and other.field != self.field:
                raise TypeError("mixing elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        p = self.field.characteristic
        return FFElement(self.field, tuple(_trim([(x + y) % p for x, y in zip(a, b)])))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.characteristic
        return FFElement(self.field, tuple((-x) % p for x in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        return FFElement(
            f, tuple(_pmod(_pmul(self.coeffs, other.coeffs, f.characteristic), f.modulus, f.characteristic))
        )

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FFElement":
        if self.is_zero():
            raise DivisionByZero(f"inverse of zero in {self.field.name}")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __repr__(self):
        if self.field.degree == 1:
            return f"{self.coeffs[0] if self.coeffs else 0}"
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
                terms.append(f"{c}{'*' + mono if mono and c != 1 else ''}" if mono else str(c))
                if mono and c == 1:
                    terms[-1] = mono
        return " + ".join(reversed(terms))

    __str__ = __repr__


def field_from_name(name: str):
    """'Q' or 'F<q>' with q a prime power."""
    name = name.strip()
    if name in ("Q", "QQ"):
        return QQ
    if name.startswith("F") and name[1:].isdigit():
        q = int(name[1:])
        for p in range(2, q + 1):
            if q % p == 0:
                m, r = 0, q
                while r % p == 0:
                    r //= p
                    m += 1
                if r != 1:
                    break
                return FiniteField(p, m)
    raise ValueError(f"unsupported residue field {name!r}")


# -- root finding ------------------------------------------------------------

def _evaluate(coeffs, x, field):
    acc = field.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _multiplicity(coeffs, root, field) -> int:
    """Number of times (X - root) divides the polynomial."""
    cs = [field(c) if not isinstance(c, FFElement) else c for c in coeffs]
    m = 0
    while len(cs) > 1 and _evaluate(cs, root, field) == 0:
        q = [field.zero] * (len(cs) - 1)
        acc = field.zero
        for i in range(len(cs) - 1, 0, -1):
            acc = acc * root + cs[i]
            q[i - 1] = acc
        cs = q
        m += 1
    return m


def _rational_roots(coeffs: Sequence[Fraction]) -> List[Fraction]:
    from math import gcd, lcm

    den = 1
    for c in coeffs:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    while ints and ints[-1] == 0:
        ints.pop()
    roots = []
    if ints and ints[0] == 0:
        roots.append(Fraction(0))
        while ints and ints[0] == 0:
            ints.pop(0)
    if len(ints) <= 1:
        return roots
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(n):
        return [d for d in range(1, n + 1) if n % d == 0]

    for num in divisors(a0):
        for den_ in divisors(an):
            if gcd(num, den_) != 1:
                continue
            for s in (1, -1):
                x = Fraction(s * num, den_)
                if _evaluate([Fraction(c) for c in ints], x, QQ) == 0:
                    roots.append(x)
    return sorted(set(roots))


@dataclass(frozen=True)
class RootResult:
    root: object
    multiplicity: int
    field: object


def find_root(coeffs: Sequence, field, allow_extension: bool = False) -> RootResult:
    """A root of the polynomial ``sum coeffs[i] X^i`` (ascending) of degree <= 3.

    Over a finite field the search is exhaustive; with ``allow_extension``
    extensions of degree r <= 6 are tried in turn and the root is returned
    in the first extension that contains one.  Roots of highest
    multiplicity are preferred.
    """
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise ValueError("zero polynomial")
    if len(cs) - 1 > 3:
        raise ValueError("find_root handles degree <= 3")
    if len(cs) == 1:
        raise NoRationalRoot("nonzero constant polynomial has no root")
    if not field.is_finite:
        cs = [QQ(c) for c in cs]
        roots = _rational_roots(cs)
        if not roots:
            raise NoRationalRoot("no rational root")
        best = max(roots, key=lambda r: (_multiplicity(cs, r, QQ), -abs(r), r))
        return RootResult(best, _multiplicity(cs, best, QQ), QQ)

    fld, embed = field, (lambda x: x)
    r = 1
    while True:
        if fld.order > SEARCH_LIMIT:
            raise ExtensionBound(f"{fld.name} exceeds the exhaustive search bound")
        local = [embed(field(c)) if not isinstance(c, FFElement) or c.field != fld else c for c in cs]
        found = [x for x in fld.elements() if _evaluate(local, x, fld) == 0]
        if found:
            best = max(found, key=lambda x: _multiplicity(local, x, fld))
            return RootResult(best, _multiplicity(local, best, fld), fld)
        if not allow_extension:
            raise NoRationalRoot(f"no root in {fld.name}")
        r += 1
        if r > MAX_EXTENSION:
            raise ExtensionBound("no root in extensions of degree <= 6")
        fld, embed = field.extension(r)
