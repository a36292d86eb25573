import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from corpus import DATA, WILD_DATA
from neron.errors import IncompleteTower, InputError
from neron.ratfun import T, expand, geom
from neron.series import (
    POT_MULT,
    ReductionData,
    WildEllipticData,
    assemble,
    assemble_wild_elliptic,
    cyclotomic_witness,
    divisors,
    in_nprime,
    membership_denominator,
    phi_after_base_change,
    series_brute,
    smallest_excluded,
    sprime,
)

N = 60


def direct_sum(fn, p, n=N):
    """Oracle: sum the series term by term, without any closed form."""
    return [Fraction(fn(d)) if d >= 1 and (p == 1 or d % p) else Fraction(0) for d in range(n + 1)]


def tower_oracle(data):
    def fn(d):
        g = math.gcd(d, data.e)
        phi, t = data.tower[g]
        return phi * (d // g) ** t

    return fn


def test_in_nprime():
    assert in_nprime(6, 1)
    assert not in_nprime(6, 3)
    assert in_nprime(5, 3)


def test_phi_after_base_change():
    assert phi_after_base_change(3, 0, 5) == 3
    assert all(phi_after_base_change(1, 0, d) == 1 for d in range(1, 20))
    assert phi_after_base_change(2, 1, 3) == 6


def test_smallest_excluded():
    assert smallest_excluded(1, 3, 2) == 4
    assert smallest_excluded(2, 3, 2) == 2
    assert smallest_excluded(1, 5, 3) == 6
    # the bound n_b <= p*e is attained for b = e = 1
    assert smallest_excluded(1, 1, 2) == 2
    assert smallest_excluded(1, 1, 7) == 7


@given(st.integers(1, 12), st.sampled_from([2, 3, 5, 7, 11]))
def test_smallest_excluded_bound(e, p):
    assume(e % p)
    for b in range(1, e + 1):
        if math.gcd(b, e) == 1:
            n = smallest_excluded(b, e, p)
            assert n % p == 0 and (n - b) % e == 0 and n <= p * e


def test_sprime_examples():
    assert sprime(1, 0, 1, 1) == T / (1 - T)
    assert sprime(1, 1, 1, 1) == T / (1 - T) ** 2
    assert sprime(1, 0, 3, 2) == (T + T ** 5) / (1 - T ** 6)


@given(st.integers(1, 5), st.integers(0, 3), st.integers(1, 12), st.sampled_from([1, 2, 3, 5, 7]))
@settings(max_examples=80, deadline=None)
def test_sprime_matches_direct_sum(phi, t, e, p):
    f = sprime(phi, t, e, p)
    assert expand(f, N) == direct_sum(lambda d: phi * d ** t if math.gcd(d, e) == 1 else 0, p)


def test_assemble_examples():
    rep = assemble(DATA["good_p1"])
    assert rep.closed_form == T / (1 - T) and rep.pole_order == 1 and rep.degree == 0
    rep = assemble(DATA["iv_star_p1"])
    assert rep.closed_form == (3 * T + 3 * T ** 2 + T ** 3) / (1 - T ** 3)
    assert rep.pole_order == 1 and rep.degree == 0 and rep.degree_sign == rep.degree_sign_expected == "zero"
    rep = assemble(DATA["split_I2"])
    assert rep.closed_form == 2 * T / (1 - T) ** 2 and rep.pole_order == 2 == rep.t_tame + 1


def test_assemble_wild_examples():
    rep = assemble_wild_elliptic(WILD_DATA["wild_p2_II"])
    assert rep.closed_form == geom(1, 2) + 3 * geom(3, 6)
    assert rep.pole_order == 1 and rep.degree == -1
    assert assemble_wild_elliptic(WILD_DATA["p2_trivial"]).closed_form == geom(1, 2)
    rep = assemble_wild_elliptic(WILD_DATA["p3_II"])
    assert rep.closed_form == (T + T ** 5) / (1 - T ** 6) + 3 * (T ** 2 + T ** 4) / (1 - T ** 6)


def test_series_brute_examples():
    assert series_brute(lambda d: 1, 1, 4) == [0, 1, 1, 1, 1]
    assert series_brute(lambda d: d, 1, 4) == [0, 1, 2, 3, 4]
    assert series_brute(lambda d: 3 if d % 3 else 1, 1, 6) == [0, 3, 3, 1, 3, 3, 1]


@pytest.mark.parametrize("name", sorted(DATA))
def test_corpus_data_invariants(name):
    data = DATA[name]
    rep = assemble(data)
    coeffs = expand(rep.closed_form, N)
    assert coeffs == direct_sum(tower_oracle(data), data.p)
    assert coeffs == series_brute(data.tower_function(), data.p, N)
    assert rep.pole_order == rep.t_tame + 1
    assert rep.degree <= 0
    assert (rep.degree == 0) == (data.p == 1 and bool(data.potential_good))
    assert rep.degree_sign == rep.degree_sign_expected
    assert coeffs[1] == data.tower[1][0]
    for d in range(1, N + 1):
        if in_nprime(d, data.p):
            assert coeffs[d] >= 1
            if math.gcd(d, data.e) == 1:
                assert coeffs[d] % data.tower[1][0] == 0
    assert cyclotomic_witness(rep.closed_form, 12 * data.p * data.e) is not None


@pytest.mark.parametrize("name", sorted(WILD_DATA))
def test_wild_data_invariants(name):
    data = WILD_DATA[name]
    rep = assemble_wild_elliptic(data)
    coeffs = expand(rep.closed_form, N)
    assert coeffs == direct_sum(lambda d: data.tower[math.gcd(d, data.e_prime)], data.p)
    assert rep.pole_order == 1 and rep.degree < 0


def test_validation_errors():
    with pytest.raises(IncompleteTower):
        assemble(ReductionData(1, 3, {1: (3, 0)}))
    with pytest.raises(InputError):
        assemble(ReductionData(2, 2, {1: (1, 0), 2: (1, 0)}))  # tame needs gcd(e, p) = 1
    with pytest.raises(InputError):
        assemble(ReductionData(1, 2, {1: (1, 1), 2: (1, 0)}))  # toric rank decreases
    with pytest.raises(InputError):
        assemble(ReductionData(1, 1, {1: (1, 0)}, regime="bogus"))
    with pytest.raises(IncompleteTower):
        assemble_wild_elliptic(WildEllipticData(2, 3, {1: 1}))
    with pytest.raises(InputError):
        assemble_wild_elliptic(WildEllipticData(2, 2, {1: 1, 2: 1}))


def test_pot_mult_uses_prime_to_p_divisors():
    data = DATA["pot_mult_p2"]
    assert data.divisor_set == [1]
    assert assemble(data).closed_form == 4 * T / (1 - T ** 2)


def test_membership_denominator():
    rep = assemble(DATA["II_p7"])
    den = membership_denominator(rep.closed_form, 84)
    assert den is not None and rep.closed_form.den.divides(den)
    assert cyclotomic_witness(T / (1 - 2 * T), 100) is None


@st.composite
def tame_data(draw):
    p = draw(st.sampled_from([1, 2, 3, 5, 7]))
    e = draw(st.integers(1, 12).filter(lambda e: p == 1 or e % p))
    tower = {}
    for a in divisors(e):
        smaller = [tower[b][1] for b in tower if a % b == 0]
        t_lo = max(smaller, default=0)
        tower[a] = (draw(st.integers(1, 6)), draw(st.integers(t_lo, t_lo + 2)))
    return ReductionData(p, e, tower, potential_good=tower[e][1] == 0)


@given(tame_data())
@settings(max_examples=80, deadline=None)
def test_random_tame_data(data):
    rep = assemble(data)
    assert expand(rep.closed_form, N) == direct_sum(tower_oracle(data), data.p)
    assert rep.pole_order == data.tower[data.e][1] + 1
    assert rep.degree <= 0
    assert (rep.degree == 0) == (data.p == 1 and data.tower[data.e][1] == 0)
    assert cyclotomic_witness(rep.closed_form, 12 * data.p * data.e) is not None


@given(st.sampled_from([2, 3, 5]), st.integers(1, 10), st.data())
@settings(max_examples=60, deadline=None)
def test_random_wild_data(p, e_prime, draw):
    assume(e_prime % p)
    tower = {a: draw.draw(st.integers(1, 5)) for a in divisors(e_prime)}
    rep = assemble_wild_elliptic(WildEllipticData(p, e_prime, tower))
    assert expand(rep.closed_form, N) == direct_sum(lambda d: tower[math.gcd(d, e_prime)], p)
    assert rep.pole_order == 1


def test_pot_mult_random_regime():
    data = ReductionData(2, 6, {1: (2, 0), 3: (5, 1)}, regime=POT_MULT)
    rep = assemble(data)
    assert expand(rep.closed_form, N) == direct_sum(tower_oracle(data), 2)
    assert rep.pole_order == 2
