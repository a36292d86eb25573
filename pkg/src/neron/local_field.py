"""Laurent series over k((t)) with tracked precision.

A :class:`LaurentSeries` stores its nonzero digits from ``valuation`` on;
every digit at an exponent below ``precision`` that is not stored is zero.
Exact elements (Laurent polynomials) carry ``precision = inf``; the
uniformizer is ``t`` itself.  Arithmetic never reports a digit beyond the
precision it can prove.
"""

from __future__ import annotations

import math
from typing import Callable, Dict, Optional

from .errors import (
    DivisionByZero,
    NegativeValuation,
    ParseError,
    PrecisionLoss,
    WildDegree,
)
from .fields import QQ, find_root  # noqa: F401  (find_root re-exported)

INF = math.inf

DEFAULT_PRECISION = 64
MAX_PRECISION = 1024


class LaurentSeries:
    __slots__ = ("field", "valuation", "coeffs", "precision")

    def __init__(self, field, valuation: int = 0, coeffs=(), precision=INF):
        zero = field.zero
        cs = [field(c) for c in coeffs]
        if precision != INF:
            cs = cs[: max(0, precision - valuation)]
        lead = 0
        while lead < len(cs) and cs[lead] == zero:
            lead += 1
        cs = cs[lead:]
        while cs and cs[-1] == zero:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)
        self.precision = precision
        self.valuation = valuation + lead if cs else precision

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_terms(cls, field, terms: Dict[int, object], precision=INF) -> "LaurentSeries":
        terms = {e: c for e, c in terms.items() if field(c) != field.zero}
        if not terms:
            return cls(field, 0, (), precision)
        lo, hi = min(terms), max(terms)
        return cls(field, lo, [terms.get(e, 0) for e in range(lo, hi + 1)], precision)

    @classmethod
    def constant(cls, field, c) -> "LaurentSeries":
        return cls(field, 0, [c])

    @classmethod
    def monomial(cls, field, k: int, c=1) -> "LaurentSeries":
        return cls(field, k, [c])

    @classmethod
    def zero(cls, field) -> "LaurentSeries":
        return cls(field, 0, ())

    # -- basic queries ----------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.precision == INF

    def is_zero(self) -> bool:
        """Zero to the known precision."""
        return not self.coeffs

    def coefficient(self, n: int):
        if n >= self.precision:
            raise PrecisionLoss(f"digit t^{n} is beyond precision {self.precision}")
        i = n - self.valuation
        if self.coeffs and 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def terms(self) -> Dict[int, object]:
        return {self.valuation + i: c for i, c in enumerate(self.coeffs) if c != self.field.zero}

    def _coerce(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return other
        return LaurentSeries.constant(self.field, self.field(other))

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        return (
            self.coeffs == other.coeffs
            and (not self.coeffs or self.valuation == other.valuation)
            and self.precision == other.precision
        )

    def __hash__(self):
        return hash((self.valuation if self.coeffs else None, self.coeffs, self.precision))

    # -- arithmetic --------------------------------------------------------
    def __neg__(self):
        return LaurentSeries(self.field, self.valuation, [-c for c in self.coeffs], self.precision)

    def __add__(self, other):
        other = self._coerce(other)
        prec = min(self.precision, other.precision)
        if not self.coeffs:
            return LaurentSeries(self.field, other.valuation, other.coeffs, prec)
        if not other.coeffs:
            return LaurentSeries(self.field, self.valuation, self.coeffs, prec)
        lo = min(self.valuation, other.valuation)
        hi = max(self.valuation + len(self.coeffs), other.valuation + len(other.coeffs))
        if prec != INF:
            hi = min(hi, prec)
        if hi <= lo:
            return LaurentSeries(self.field, 0, (), prec)
        out = [self.field.zero] * (hi - lo)
        for src in (self, other):
            for i, c in enumerate(src.coeffs):
                k = src.valuation + i - lo
                if k < len(out):
                    out[k] = out[k] + c
        return LaurentSeries(self.field, lo, out, prec)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        f = self.field
        if (not self.coeffs and self.exact) or (not other.coeffs and other.exact):
            return LaurentSeries(f, 0, ())
        # valuation of a zero-to-precision element is its precision
        vx, vy = self.valuation, other.valuation
        prec = min(self.precision + vy, other.precision + vx)
        if not self.coeffs or not other.coeffs:
            return LaurentSeries(f, 0, (), prec)
        n = len(self.coeffs) + len(other.coeffs) - 1
        if prec != INF:
            n = min(n, prec - vx - vy)
        out = [f.zero] * max(n, 0)
        for i, a in enumerate(self.coeffs):
            if i >= n:
                break
            if a == f.zero:
                continue
            for j in range(min(len(other.coeffs), n - i)):
                out[i + j] = out[i + j] + a * other.coeffs[j]
        return LaurentSeries(f, vx + vy, out, prec)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by t**k (exact)."""
        return LaurentSeries(self.field, self.valuation + k, self.coeffs, self.precision + k)

    def inverse(self, rel_prec: Optional[int] = None) -> "LaurentSeries":
        if not self.coeffs:
            if self.exact:
                raise DivisionByZero("inverse of zero")
            raise PrecisionLoss("inverse of an element that is zero to precision")
        v = self.valuation
        if self.exact and len(self.coeffs) == 1:
            return LaurentSeries(self.field, -v, [self.field.one / self.coeffs[0]])
        if rel_prec is None:
            rel_prec = DEFAULT_PRECISION if self.exact else self.precision - v
        a = self.coeffs
        inv0 = self.field.one / a[0]
        b = [inv0]
        for n in range(1, rel_prec):
            acc = self.field.zero
            for k in range(1, min(n, len(a) - 1) + 1):
                acc = acc + a[k] * b[n - k]
            b.append(-acc * inv0)
        return LaurentSeries(self.field, -v, b, -v + rel_prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentSeries.constant(self.field, self.field.one)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def truncate(self, precision: int) -> "LaurentSeries":
        return LaurentSeries(self.field, self.valuation, self.coeffs, min(self.precision, precision))

    def __repr__(self):
        return f"LaurentSeries({format_laurent(self)})"

    def __str__(self):
        return format_laurent(self)


def val(x: LaurentSeries, bound: Optional[int] = None):
    """Valuation; ``inf`` for exact zero.

    A zero-to-precision element only has a provable valuation ``>= bound``
    when its precision reaches ``bound``; otherwise :class:`PrecisionLoss`.
    """
    if x.coeffs:
        return x.valuation
    if x.exact:
        return INF
    if bound is not None and x.precision >= bound:
        return INF
    raise PrecisionLoss(f"element is zero only to precision {x.precision}")


def valuation_at_least(x: LaurentSeries, n: int) -> bool:
    """Whether v(x) >= n, raising when precision cannot decide."""
    if x.coeffs:
        return x.valuation >= n
    if x.precision >= n:
        return True
    raise PrecisionLoss(f"cannot certify v(x) >= {n} at precision {x.precision}")


def ls_arith(x: LaurentSeries, y, op: str) -> LaurentSeries:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "pow":
        return x ** int(y)
    raise ValueError(f"unknown operation {op!r}")


def base_change(x: LaurentSeries, d: int) -> LaurentSeries:
    """Realize K(d) = k((u)) with t = u**d."""
    if d < 1:
        raise ValueError("degree must be positive")
    p = x.field.characteristic
    if p and d % p == 0:
        raise WildDegree(f"degree {d} is divisible by the residue characteristic {p}")
    if d == 1 or not x.coeffs:
        prec = x.precision * d
        return LaurentSeries(x.field, x.valuation * d if x.coeffs else prec, x.coeffs, prec)
    out = [x.field.zero] * ((len(x.coeffs) - 1) * d + 1)
    for i, c in enumerate(x.coeffs):
        out[i * d] = c
    return LaurentSeries(x.field, x.valuation * d, out, x.precision * d)


def residue(x: LaurentSeries):
    """Image of x under R -> k."""
    if x.coeffs and x.valuation < 0:
        raise NegativeValuation(f"valuation {x.valuation} < 0")
    return x.coefficient(0)


def with_precision_retry(compute: Callable[[int], object], start: int = DEFAULT_PRECISION,
                         limit: int = MAX_PRECISION):
    """Run ``compute(prec)`` with a fixed doubling schedule on PrecisionLoss."""
    prec = start
    while True:
        try:
            return compute(prec)
        except PrecisionLoss:
            if prec >= limit:
                raise
            prec *= 2


# -- text format ---------------------------------------------------------------

def format_laurent(x: LaurentSeries, var: str = "t") -> str:
    parts = []
    for e, c in sorted(x.terms().items()):
        cs = str(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        if " " in cs:
            cs = f"({cs})"
        if e == 0:
            body = cs
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if cs == "1" else f"{cs}*{mono}"
        parts.append(("-" if neg else "+", body))
    if not parts:
        out = "0"
    else:
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, b in parts[1:]:
            out += f" {s} {b}"
    if x.precision != INF:
        out += f" + O({var}^{x.precision})"
    return out


class _Parser:
    def __init__(self, text: str, field, line=None, col_offset=0):
        self.text = text
        self.pos = 0
        self.field = field
        self.line = line
        self.col_offset = col_offset

    def error(self, msg, pos=None):
        pos = self.pos if pos is None else pos
        raise ParseError(msg, self.line, self.col_offset + pos + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self, signed=False) -> int:
        self.skip()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.error("expected an integer", self.pos)
        return int(self.text[start:self.pos])

    def power(self) -> int:
        # at 't'
        self.pos += 1
        if self.pos < len(self.text) and self.text[self.pos] == "^":
            self.pos += 1
            if self.pos >= len(self.text) or not (self.text[self.pos].isdigit() or self.text[self.pos] in "+-"):
                self.error("expected an exponent after '^'", self.pos)
            return self.integer(signed=True)
        return 1

    def term(self):
        c = self.peek()
        if c == "t":
            return self.field.one, self.power()
        if not c.isdigit():
            self.error(f"unexpected {c!r}" if c else "unexpected end of expression")
        num = self.integer()
        den = 1
        if self.peek() == "/":
            self.pos += 1
            den = self.integer()
        coeff = self.field.from_fraction(num, den)
        if self.peek() == "*":
            self.pos += 1
            if self.peek() != "t":
                self.error("expected 't' after '*'")
            return coeff, self.power()
        return coeff, 0

    def parse(self) -> LaurentSeries:
        terms: Dict[int, object] = {}
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        while True:
            coeff, e = self.term()
            terms[e] = terms.get(e, self.field.zero) + (coeff if sign > 0 else -coeff)
            c = self.peek()
            if not c:
                break
            if c not in "+-":
                self.error(f"unexpected {c!r}")
            sign = 1 if c == "+" else -1
            self.pos += 1
        return LaurentSeries.from_terms(self.field, terms)


def parse_laurent(text: str, field=QQ, line: Optional[int] = None, col_offset: int = 0) -> LaurentSeries:
    """Parse a Laurent polynomial such as ``"1 + 3*t^2 - t^-1"``."""
    return _Parser(text, field, line, col_offset).parse()
