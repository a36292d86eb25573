import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import CURVES, SMALL_CHAR_TAME, WILD_CURVES, curve
from neron.cli import parse_curve_file
from neron.errors import SingularCurve, WildCurve, WildDegree
from neron.fields import QQ, FiniteField
from neron.local_field import LaurentSeries, parse_laurent, val
from neron.series import in_nprime
from neron.tate import (
    WILD_TRANSITIONS,
    KodairaType,
    WeierstrassModel,
    base_change_model,
    derived_quantities,
    kodaira_after,
    reduction_tower,
    rst_transform,
    tame_transition,
    tate_algorithm,
    wild_elliptic_data,
)

DMAX = 24
TAME = {**CURVES, **SMALL_CHAR_TAME}


def model(text):
    return parse_curve_file(text)


def kt(s):
    return KodairaType.parse(s)


def shortcut_type(m: WeierstrassModel) -> str:
    """Independent classification from v(c4), v(c6), v(Delta), valid when p is not 2 or 3."""
    inv = derived_quantities(m)
    v4, v6, vd = val(inv.c4), val(inv.c6), val(inv.delta)
    while v4 >= 4 and v6 >= 6 and vd >= 12:
        v4, v6, vd = v4 - 4, v6 - 6, vd - 12
    if v4 == 0:
        return f"I{vd}"
    if vd > 6 and 3 * v4 < vd:  # v(j) < 0 with additive reduction
        return f"I{vd - 6}*"
    return {0: "I0", 2: "II", 3: "III", 4: "IV", 6: "I0*", 8: "IV*", 9: "III*", 10: "II*"}[vd]


# -- Weierstrass data -----------------------------------------------------------------

def test_discriminant_examples():
    d = derived_quantities(model("field = Q\na6 = t^4")).delta
    assert d == parse_laurent("-432*t^8")
    d = derived_quantities(model("field = Q\na1 = 1\na6 = t")).delta
    assert d == parse_laurent("-t - 432*t^2")
    d = derived_quantities(model("field = Q\na4 = 1")).delta
    assert d == parse_laurent("-64") and val(d) == 0


def test_singular_curve_rejected():
    with pytest.raises(SingularCurve):
        derived_quantities(model("field = Q\na2 = 0"))
    with pytest.raises(SingularCurve):
        tate_algorithm(model("field = F3\na6 = t"))  # y^2 = x^3 + t is inseparable in char 3


laurent = st.dictionaries(st.integers(0, 3), st.integers(-3, 3), max_size=3)


@given(st.tuples(laurent, laurent, laurent, laurent, laurent), st.sampled_from([QQ, FiniteField(5), FiniteField(2)]))
@settings(max_examples=60, deadline=None)
def test_standard_relations(coeffs, field):
    a = [LaurentSeries.from_terms(field, {k: field(v) for k, v in c.items()}) for c in coeffs]
    inv = WeierstrassModel(*a).invariants
    assert inv.b8 * 4 == inv.b2 * inv.b6 - inv.b4 * inv.b4
    assert inv.delta * 1728 == inv.c4 ** 3 - inv.c6 ** 2


# -- Tate's algorithm --------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(TAME))
def test_corpus_types(name):
    text, expected = TAME[name]
    data = tate_algorithm(model(text)).data
    assert str(data.kodaira_type) == expected
    k = kt(expected)
    assert data.phi == k.phi and data.m == k.multiplicity and data.t == k.toric_rank


def test_component_data_table():
    table = {
        "I0": (1, "trivial", 1, 0), "I5": (5, "Z/5", 1, 1), "I0*": (4, "(Z/2)^2", 2, 0),
        "I3*": (4, "Z/4", 2, 0), "II": (1, "trivial", 6, 0), "III": (2, "Z/2", 4, 0),
        "IV": (3, "Z/3", 3, 0), "IV*": (3, "Z/3", 3, 0), "III*": (2, "Z/2", 4, 0),
        "II*": (1, "trivial", 6, 0),
    }
    for s, (phi, structure, m, t) in table.items():
        k = kt(s)
        assert (k.phi, k.structure, k.multiplicity, k.toric_rank) == (phi, structure, m, t)
        assert str(k) == s


def test_tate_examples():
    d = tate_algorithm(model("field = Q\na6 = t^4")).data
    assert str(d.kodaira_type) == "IV*" and d.phi == 3
    d = tate_algorithm(model("field = Q\na1 = 1\na6 = t")).data
    assert str(d.kodaira_type) == "I1" and d.phi == 1 and d.t == 1
    d = tate_algorithm(model("field = Q\na6 = t^2")).data
    assert str(d.kodaira_type) == "IV" and d.phi == 3 and d.m == 3
    d = tate_algorithm(model("field = F5\na1 = 1\na6 = t")).data
    assert str(d.kodaira_type) == "I1"


def test_non_minimal_input():
    res = tate_algorithm(curve("Q_IIs_nonminimal"))
    assert res.v_delta_input == 22 and res.data.v_delta_min == 10
    assert str(res.data.kodaira_type) == "II*"
    # negative valuations are scaled up first
    res = tate_algorithm(model("field = Q\na4 = t^-4\na6 = t^-6"))
    assert res.data.v_delta_min == 0


@pytest.mark.parametrize("name", [n for n in CURVES if not n.startswith(("F2", "F3"))])
def test_shortcut_cross_check(name):
    m = curve(name)
    assert str(tate_algorithm(m).data.kodaira_type) == shortcut_type(m)
    for d in (2, 3, 5):
        if in_nprime(d, m.field.char_exponent):
            bc = base_change_model(m, d)
            assert str(tate_algorithm(bc).data.kodaira_type) == shortcut_type(bc)


@given(
    st.sampled_from(sorted(TAME)),
    st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3),
    st.integers(0, 2), st.integers(0, 2), st.integers(0, 3),
)
@settings(max_examples=60, deadline=None)
def test_type_invariant_under_coordinate_change(name, r, s, t, kr, ks, kt_):
    m = curve(name)
    f = m.field
    shift = (
        LaurentSeries.monomial(f, kr, f(r)),
        LaurentSeries.monomial(f, ks, f(s)),
        LaurentSeries.monomial(f, kt_, f(t)),
    )
    moved = WeierstrassModel(*rst_transform(m.a_invariants, *shift))
    a, b = tate_algorithm(m).data, tate_algorithm(moved).data
    assert a.kodaira_type == b.kodaira_type and a.v_delta_min == b.v_delta_min


# -- base change and the transition table -----------------------------------------------------

def test_base_change_examples():
    e2 = model("field = Q\na6 = t^4")
    bc = base_change_model(e2, 3)
    assert bc.a6 == parse_laurent("t^12")
    assert str(tate_algorithm(bc).data.kodaira_type) == "I0"
    # d = 2 gives IV (v(Delta) = 16 = 4 mod 12)
    assert str(kodaira_after(e2, 2).kodaira_type) == "IV"
    assert kodaira_after(model("field = Q\na1 = 1\na6 = t"), 5).phi == 5
    with pytest.raises(WildDegree):
        base_change_model(model("field = F5\na6 = t"), 5)


def test_tame_transition_examples():
    for d in range(2, 30, 3):
        assert tame_transition(kt("IV*"), d) == kt("IV")
    assert tame_transition(kt("I3"), 4) == kt("I12")
    assert tame_transition(kt("II"), 6) == kt("I0")
    assert tame_transition(kt("I2*"), 3) == kt("I6*")
    assert tame_transition(kt("I2*"), 2) == kt("I4")


@pytest.mark.parametrize("name", sorted(TAME))
def test_transition_table_against_tate(name):
    m = curve(name)
    base = tate_algorithm(m).data.kodaira_type
    p = m.field.char_exponent
    for d in range(1, DMAX + 1):
        if in_nprime(d, p):
            assert tame_transition(base, d) == kodaira_after(m, d).kodaira_type, d


@pytest.mark.parametrize("name", sorted(TAME))
def test_base_change_law_on_models(name):
    m = curve(name)
    tower, _ = reduction_tower(m)
    base = tower.base
    p = m.field.char_exponent
    for d in range(1, DMAX + 1):
        if in_nprime(d, p) and math.gcd(d, tower.e) == 1:
            phi_d = kodaira_after(m, d).phi
            assert phi_d == d ** base.t * base.phi
            assert phi_d % base.phi == 0
            if base.kodaira_type.family not in ("I", "I*") and math.gcd(d, base.m) == 1:
                assert phi_d == base.phi


@pytest.mark.parametrize("name", sorted(TAME))
def test_e_equals_multiplicity(name):
    tower, data = reduction_tower(curve(name))
    assert tower.e == tower.base.m
    assert data.e == tower.e and set(data.tower) == set(tower.entries)
    assert tower.entries[tower.e].kodaira_type.semi_abelian


@pytest.mark.parametrize("name", sorted(TAME))
def test_discriminant_congruence_for_potential_good(name):
    m = curve(name)
    tower, _ = reduction_tower(m)
    if tower.entries[tower.e].kodaira_type != kt("I0"):
        return
    v = tower.base.v_delta_min
    for d in range(1, DMAX + 1):
        if in_nprime(d, m.field.char_exponent):
            assert kodaira_after(m, d).v_delta_min % 12 == (d * v) % 12


def test_reduction_tower_examples():
    tower, data = reduction_tower(model("field = Q\na6 = t^4"))
    assert tower.e == 3 and data.tower == {1: (3, 0), 3: (1, 0)}
    tower, data = reduction_tower(model("field = Q\na1 = 1\na6 = t"))
    assert tower.e == 1 and data.tower == {1: (1, 1)}
    tower, data = reduction_tower(model("field = Q\na6 = t^3"))
    assert tower.e == 2 and data.tower == {1: (4, 0), 2: (1, 0)}
    assert tower.to_dict()["tower"][0] == {"a": 1, "type": "I0*", "phi": 4, "t": 0}


# -- wild curves ----------------------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(WILD_CURVES))
def test_wild_curves(name):
    text, base_type, e_prime, top_type = WILD_CURVES[name]
    m = model(text)
    p = m.field.characteristic
    with pytest.raises(WildCurve):
        reduction_tower(m)
    data = wild_elliptic_data(m)
    assert data.e_prime == e_prime
    assert WILD_TRANSITIONS[(p, base_type)] == (e_prime, top_type)
    assert str(kodaira_after(m, e_prime).kodaira_type) == top_type
    # phi is constant along degrees prime to e_prime and p
    for d in range(1, DMAX + 1):
        if d % p:
            assert kodaira_after(m, d).phi == data.tower[math.gcd(d, e_prime)]


def test_wild_table_is_covered():
    seen = {(model(v[0]).field.characteristic, v[1]) for v in WILD_CURVES.values()}
    assert seen == set(WILD_TRANSITIONS)


def test_wild_data_requires_small_characteristic():
    with pytest.raises(WildDegree):
        wild_elliptic_data(model("field = F5\na6 = t"))
