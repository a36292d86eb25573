"""Integer lattices with a cyclic Galois action.

For a torus with character lattice X and Galois group generated by an
automorphism sigma of exact order e, the split rank is the rank of the
invariants X^sigma and, when that rank is zero, the component group of the
Néron model has order |H^1(<sigma>, X)| = [ker N : im(sigma - 1)] with
N = 1 + sigma + ... + sigma^(e-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .errors import InvalidAction, PositiveSplitRank

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def matsub(a, b) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matadd(a, b) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def smith_normal_form(a: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix, Matrix]:
    """Return (D, U, V, V_inv) with U A V = D diagonal, d_i | d_{i+1}.

    U and V are unimodular; V_inv is tracked alongside V so callers can
    change coordinates without a separate inversion.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, row)) for row in a]
    u, v, vinv = identity(m), identity(n), identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(dst, src, q):  # row_dst += q row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col_dst += q col_src
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]
        vinv[src] = [x - q * y for x, y in zip(vinv[src], vinv[dst])]

    for t in range(min(m, n)):
        while True:
            piv = None
            for i in range(t, m):
                for j in range(t, n):
                    if d[i][j] and (piv is None or abs(d[i][j]) < abs(d[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                return d, u, v, vinv
            swap_rows(t, piv[0])
            swap_cols(t, piv[1])
            p = d[t][t]
            clean = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    clean = clean and d[i][t] == 0
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    clean = clean and d[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return d, u, v, vinv


def elementary_divisors(a: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero diagonal entries of the Smith form."""
    d = smith_normal_form(a)[0]
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


def rank(a: Sequence[Sequence[int]]) -> int:
    if not a or not a[0]:
        return 0
    return len(elementary_divisors(a))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Product of Z/d_i with d_1 | d_2 | ... and every d_i > 1."""

    invariants: Tuple[int, ...] = ()

    @classmethod
    def from_divisors(cls, divs) -> "FiniteAbelianGroup":
        return cls(tuple(sorted(d for d in divs if d > 1)))

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariants:
            out *= d
        return out

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1

    def __add__(self, other: "FiniteAbelianGroup") -> "FiniteAbelianGroup":
        # re-normalize the direct sum through a diagonal Smith form
        diag = list(self.invariants) + list(other.invariants)
        n = len(diag)
        mat = [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return FiniteAbelianGroup.from_divisors(elementary_divisors(mat) if n else [])

    def __str__(self):
        if not self.invariants:
            return "trivial"
        return " x ".join(f"Z/{d}" for d in self.invariants)


@dataclass(frozen=True)
class CyclicLatticeAction:
    """Z^n with a generator sigma of exact order e."""

    matrix: Tuple[Tuple[int, ...], ...]
    order: int

    def __init__(self, matrix, order: int):
        object.__setattr__(self, "matrix", tuple(tuple(int(x) for x in row) for row in matrix))
        object.__setattr__(self, "order", int(order))
        self.validate()

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def power(self, k: int) -> Matrix:
        out = identity(self.rank)
        for _ in range(k):
            out = matmul(out, self.matrix)
        return out

    def validate(self) -> None:
        n = self.rank
        if any(len(row) != n for row in self.matrix):
            raise InvalidAction("matrix must be square")
        if self.order < 1:
            raise InvalidAction("order must be positive")
        if self.power(self.order) != identity(n):
            raise InvalidAction(f"sigma^{self.order} is not the identity")
        for f in range(1, self.order):
            if self.order % f == 0 and self.power(f) == identity(n):
                raise InvalidAction(f"sigma has order {f}, not {self.order}")

    def norm(self) -> Matrix:
        acc = [[0] * self.rank for _ in range(self.rank)]
        power = identity(self.rank)
        for _ in range(self.order):
            acc = matadd(acc, power)
            power = matmul(power, self.matrix)
        return acc

    def augmentation(self) -> Matrix:
        return matsub(self.matrix, identity(self.rank))

    def __add__(self, other: "CyclicLatticeAction") -> "CyclicLatticeAction":
        """Direct sum; the order becomes the lcm."""
        from math import lcm

        n, k = self.rank, other.rank
        m = [list(row) + [0] * k for row in self.matrix] + [[0] * n + list(row) for row in other.matrix]
        return CyclicLatticeAction(m, lcm(self.order, other.order))


def invariants_rank(action: CyclicLatticeAction) -> int:
    """Rank of the sigma-invariant sublattice (split rank of the torus)."""
    return action.rank - rank(action.augmentation())


def h1(action: CyclicLatticeAction) -> FiniteAbelianGroup:
    """H^1 of the cyclic group with values in the lattice, as ker N / im(sigma - 1)."""
    n = action.rank
    if n == 0:
        return FiniteAbelianGroup()
    d, _, _, vinv = smith_normal_form(action.norm())
    r = sum(1 for i in range(n) if d[i][i])
    # columns r.. of V span ker N; express im(sigma - 1) in that basis
    coords = matmul(vinv, action.augmentation())
    assert all(x == 0 for row in coords[:r] for x in row), "image of sigma - 1 escapes ker N"
    c = coords[r:]
    if not c:
        return FiniteAbelianGroup()
    divs = elementary_divisors(c)
    if len(divs) != n - r:
        raise ArithmeticError("H^1 of a finite cyclic group must be finite")
    return FiniteAbelianGroup.from_divisors(divs)


def phi_torus(action: CyclicLatticeAction) -> int:
    """Component-group order of an anisotropic torus with this character lattice."""
    s = invariants_rank(action)
    if s > 0:
        raise PositiveSplitRank(f"split rank {s} > 0: the component group is infinite")
    return h1(action).order


# common actions

def sign_action(n: int = 1) -> CyclicLatticeAction:
    return CyclicLatticeAction([[-int(i == j) for j in range(n)] for i in range(n)], 2)


def permutation_action(n: int) -> CyclicLatticeAction:
    """Regular representation of Z/n: the coordinate shift."""
    return CyclicLatticeAction([[int(i == (j + 1) % n) for j in range(n)] for i in range(n)], n)


def companion_action(coeffs: Sequence[int], order: int) -> CyclicLatticeAction:
    """Companion matrix of the monic polynomial X^k + c_{k-1} X^{k-1} + ... + c_0."""
    k = len(coeffs)
    m = [[0] * k for _ in range(k)]
    for i in range(1, k):
        m[i][i - 1] = 1
    for i in range(k):
        m[i][k - 1] = -coeffs[i]
    return CyclicLatticeAction(m, order)
