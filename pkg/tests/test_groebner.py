"""Groebner engine: bases, normal forms, membership, elimination, saturation,
dimension.  sympy serves as an independent oracle for basis computations."""

import random
from fractions import Fraction

import pytest
import sympy

from fibrephi import (
    GREVLEX,
    LEX,
    Ideal,
    PolynomialRing,
    elimination_ideal,
    ideal_intersection,
    ideal_member,
    is_unit_ideal,
    krull_dimension,
    normal_form,
    parse_polynomial,
    radical_member,
    reduced_groebner,
    s_polynomial,
    saturation,
)
from fibrephi.errors import ResourceLimitError, ZeroPolynomialError
from fibrephi.groebner import division, independent_set_dimension
from fibrephi.poly import Polynomial

from conftest import ring_xy, ring_y_x


def P(text, ring):
    return parse_polynomial(text, ring)


# ---------------------------------------------------------------------------
# S-polynomials
# ---------------------------------------------------------------------------


def test_spoly_cancels_leading_terms():
    ring = ring_xy()
    s = s_polynomial(P("x^2 - y", ring), P("x", ring), LEX)
    assert s == P("-y", ring)


def test_spoly_self_pair_is_zero():
    ring = ring_xy()
    f = P("x^2*y - 3*x", ring)
    assert s_polynomial(f, f, LEX).is_zero


def test_spoly_coprime_leading_terms():
    ring = ring_xy()
    assert s_polynomial(P("x", ring), P("y", ring), LEX).is_zero


def test_spoly_zero_input_errors():
    ring = ring_xy()
    with pytest.raises(ZeroPolynomialError):
        s_polynomial(ring.zero(), P("x", ring), LEX)


# ---------------------------------------------------------------------------
# normal form and division
# ---------------------------------------------------------------------------


def test_normal_form_against_self():
    ring = ring_xy()
    f = P("x^2*y - y + 1", ring)
    assert normal_form(f, [f], GREVLEX).is_zero


def test_normal_form_unit_survives_proper_ideal():
    ring = ring_xy()
    basis = reduced_groebner(Ideal(ring, [P("x^2", ring), P("y^3", ring)])).elements
    assert normal_form(ring.one(), basis, GREVLEX) == ring.one()


def test_normal_form_textbook_division():
    ring = ring_xy()
    r = normal_form(P("x^2*y", ring), [P("x*y - 1", ring), P("y^2 - 1", ring)], LEX)
    assert r == P("x", ring)


def test_division_certificate():
    ring = ring_xy()
    f = P("x^3*y^2 - x + 2*y", ring)
    basis = [P("x*y - 1", ring), P("y^2 - 1", ring)]
    quotients, remainder = division(f, basis, LEX)
    rebuilt = remainder
    for q, b in zip(quotients, basis):
        rebuilt = rebuilt + q * b
    assert rebuilt == f
    lead = [b.leading_monomial(LEX) for b in basis]
    for mono in remainder.monomials():
        assert all(any(m > e for m, e in zip(lm, mono)) for lm in lead)


# ---------------------------------------------------------------------------
# reduced bases
# ---------------------------------------------------------------------------


def test_char_zero_combination():
    ring = ring_xy()
    basis = reduced_groebner(Ideal(ring, [P("x^2 + y^2", ring), P("x^2 - y^2", ring)]), LEX)
    assert [str(g) for g in basis.elements] == ["x^2", "y^2"]


def test_unit_ideal_basis():
    ring = ring_xy()
    basis = reduced_groebner(Ideal(ring, [P("x", ring), P("x - 1", ring)]))
    assert basis.is_unit()
    assert [str(g) for g in basis.elements] == ["1"]


def test_principal_ideal_made_monic():
    ring = ring_xy()
    basis = reduced_groebner(Ideal(ring, [P("3*x^2 - 6*y", ring)]))
    assert [str(g) for g in basis.elements] == ["x^2 - 2*y"]


def test_zero_generators_dropped():
    ring = ring_xy()
    ideal = Ideal(ring, [ring.zero(), P("x", ring), ring.zero()])
    assert ideal.generators == (P("x", ring),)


def test_basis_self_reduction_and_spolys():
    ring = PolynomialRing((), ("x", "y", "z"))
    ideal = Ideal(ring, [P("x*y - z", ring), P("y*z - 1", ring), P("x - z^2", ring)])
    basis = ideal.groebner_basis(GREVLEX)
    lead = basis.leading_monomials()
    for i, g in enumerate(basis.elements):
        others = [h for j, h in enumerate(basis.elements) if j != i]
        # no term of any element is divisible by another leading monomial
        assert normal_form(g, others, GREVLEX) == g
    for i in range(len(basis.elements)):
        for j in range(i + 1, len(basis.elements)):
            s = s_polynomial(basis.elements[i], basis.elements[j], GREVLEX)
            if not s.is_zero:
                assert normal_form(s, list(basis.elements), GREVLEX).is_zero
    assert len(set(lead)) == len(lead)


def _random_poly(ring, rng, max_terms=3, max_degree=2):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        mono = tuple(rng.randint(0, max_degree) for _ in range(ring.arity))
        terms[mono] = Fraction(rng.randint(-4, 4))
    return Polynomial(ring, terms)


def test_canonicity_under_generator_permutation():
    ring = PolynomialRing((), ("x", "y", "z"))
    rng = random.Random(20240)
    for _ in range(25):
        gens = [_random_poly(ring, rng) for _ in range(3)]
        gens = [g for g in gens if not g.is_zero]
        if not gens:
            continue
        reference = Ideal(ring, gens).groebner_basis().elements
        shuffled = gens[:]
        rng.shuffle(shuffled)
        assert Ideal(ring, shuffled).groebner_basis().elements == reference


def _to_sympy(p, symbols):
    expr = sympy.Integer(0)
    for mono, coeff in p.as_dict().items():
        term = sympy.Rational(coeff.numerator, coeff.denominator)
        for s, e in zip(symbols, mono):
            term *= s**e
        expr += term
    return sympy.expand(expr)


@pytest.mark.parametrize("order_name,order", [("grevlex", GREVLEX), ("lex", LEX)])
def test_against_sympy_oracle(order_name, order):
    ring = PolynomialRing((), ("x", "y", "z"))
    symbols = sympy.symbols("x y z")
    rng = random.Random(99)
    for _ in range(12):
        gens = [g for g in (_random_poly(ring, rng) for _ in range(2)) if not g.is_zero]
        if not gens:
            continue
        mine = Ideal(ring, gens).groebner_basis(order).elements
        reference = sympy.groebner(
            [_to_sympy(g, symbols) for g in gens], *symbols, order=order_name
        )
        ref_exprs = {
            sympy.expand(poly.as_expr() / poly.LC(order=order_name))
            for poly in reference.polys
        }
        assert {_to_sympy(g, symbols) for g in mine} == ref_exprs


def test_basis_cache_is_stable():
    ring = ring_xy()
    ideal = Ideal(ring, [P("x*y - 1", ring)])
    assert ideal.groebner_basis(GREVLEX) is ideal.groebner_basis(GREVLEX)


def test_concurrent_basis_requests_agree():
    import threading

    ring = PolynomialRing((), ("x", "y", "z"))
    ideal = Ideal(ring, [P("x*y - z", ring), P("y*z - 1", ring), P("x - z^2", ring)])
    results = []

    def worker():
        results.append(ideal.groebner_basis(GREVLEX))

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(results) == 8
    assert all(r.elements == results[0].elements for r in results)


def test_reduction_budget_enforced():
    from fibrephi.errors import Limits

    ring = PolynomialRing((), ("x", "y", "z"))
    tight = Limits(groebner_max_reductions=0)
    ideal = Ideal(ring, [P("x*y - z", ring), P("y*z - 1", ring), P("x - z^2", ring)])
    with pytest.raises(ResourceLimitError):
        ideal.groebner_basis(GREVLEX, tight)


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def test_membership_of_generator():
    ring = PolynomialRing(("y1", "y2", "y3", "y4"), ("x",))
    q = P("y1*y4 - y2*y3", ring)
    assert ideal_member(q, Ideal(ring, [q]))


def test_x_not_in_x_squared():
    ring = ring_xy()
    assert not ideal_member(P("x", ring), Ideal(ring, [P("x^2", ring)]))


def test_membership_by_combination():
    ring = PolynomialRing(("y1",), ("x",))
    ideal = Ideal(ring, [P("x*y1", ring), P("x^2 - x", ring)])
    assert ideal_member(P("x*(x - 1)", ring), ideal)


def test_membership_sound_on_random_combinations():
    ring = PolynomialRing((), ("x", "y", "z"))
    rng = random.Random(7)
    gens = [P("x*y - z", ring), P("y^2 - 1", ring)]
    ideal = Ideal(ring, gens)
    for _ in range(10):
        combo = ring.zero()
        for g in gens:
            combo = combo + _random_poly(ring, rng) * g
        assert ideal_member(combo, ideal)


# ---------------------------------------------------------------------------
# radical membership
# ---------------------------------------------------------------------------


def test_radical_nilpotent_direction():
    ring = ring_xy()
    assert radical_member(P("x", ring), Ideal(ring, [P("x^2", ring)]))


def test_radical_independent_variable():
    ring = ring_xy()
    assert not radical_member(P("x", ring), Ideal(ring, [P("y", ring)]))


def test_radical_negative_witness_point():
    # the point (y1, x) = (0, 1) lies on the variety while x = 1 there
    ring = PolynomialRing(("y1",), ("x",))
    ideal = Ideal(ring, [P("x*y1", ring), P("x^2 - x", ring)])
    assert not radical_member(P("x", ring), ideal)


def test_radical_agrees_with_power_search():
    ring = ring_xy()
    rng = random.Random(11)
    for _ in range(8):
        gens = [g for g in (_random_poly(ring, rng) for _ in range(2)) if not g.is_zero]
        if not gens:
            continue
        ideal = Ideal(ring, gens)
        f = _random_poly(ring, rng, max_terms=2, max_degree=1)
        if f.is_zero:
            continue
        brute = any(ideal_member(f**n, ideal) for n in range(1, 7))
        if brute:
            assert radical_member(f, ideal)
        elif radical_member(f, ideal):
            # the trick may certify a power above the brute-force range
            assert not any(ideal_member(f**n, ideal) for n in range(1, 7))


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------


def test_eliminate_parabola_parameter():
    ring = ring_y_x()
    ideal = Ideal(ring, [P("y - x^2", ring)])
    image = elimination_ideal(ideal, 1)
    assert image.is_zero_ideal
    assert krull_dimension(image) == 1


def test_keep_all_returns_same_ideal():
    ring = ring_xy()
    ideal = Ideal(ring, [P("x*y - 1", ring)])
    assert elimination_ideal(ideal, 2) is ideal


def test_elimination_of_quadric_family():
    ring = PolynomialRing(("y1", "y2", "y3", "y4"), ("x",))
    ideal = Ideal(ring, [P("y1*y4 - y2*y3", ring), P("y1*x^2 + y4*x + y2 - y3", ring)])
    image = elimination_ideal(ideal, 4)
    yring = PolynomialRing(("y1", "y2", "y3", "y4"), ())
    assert image.equals(Ideal(yring, [P("y1*y4 - y2*y3", yring)]))


def test_elimination_generators_stay_in_ideal():
    ring = PolynomialRing(("y1", "y2"), ("x1", "x2"))
    ideal = Ideal(ring, [P("x1*y1 - y2", ring), P("x1*x2 - y1", ring)])
    image = elimination_ideal(ideal, 2)
    from fibrephi import transport

    for g in image.generators:
        assert ideal_member(transport(g, ring), ideal)


def test_elimination_requires_prefix():
    ring = PolynomialRing(("y1", "y2"), ("x",))
    ideal = Ideal(ring, [P("x - y1", ring)])
    with pytest.raises(Exception):
        elimination_ideal(ideal, ("y2",))


# ---------------------------------------------------------------------------
# saturation
# ---------------------------------------------------------------------------


def test_saturation_removes_a_component():
    ring = ring_y_x()
    ideal = Ideal(ring, [P("y*x", ring)])
    sat, s = saturation(ideal, P("y", ring))
    assert [str(g) for g in sat.generators] == ["x"]
    assert s == 1


def test_saturation_by_unit_is_identity():
    ring = ring_xy()
    ideal = Ideal(ring, [P("x*y - 1", ring)])
    sat, s = saturation(ideal, ring.one())
    assert sat is ideal and s == 0


def test_saturation_inside_zero_set_gives_unit():
    ring = ring_xy()
    sat, s = saturation(Ideal(ring, [P("x^2", ring)]), P("x", ring))
    assert is_unit_ideal(sat)
    assert s == 2


def test_saturation_contract():
    ring = PolynomialRing(("y",), ("x1", "x2"))
    ideal = Ideal(ring, [P("y*x1", ring), P("y^2*x2 - y", ring)])
    h = P("y", ring)
    sat, s = saturation(ideal, h)
    for g in ideal.generators:
        assert ideal_member(g, sat)
    for g in sat.generators:
        assert ideal_member(h**s * g, ideal)
    again, _ = saturation(sat, h)
    assert again.equals(sat)


def test_saturation_exponent_cap():
    from fibrephi.errors import Limits

    ring = ring_xy()
    ideal = Ideal(ring, [P("x^3", ring)])
    with pytest.raises(ResourceLimitError):
        saturation(ideal, P("x", ring), Limits(saturation_exponent_cap=2))


# ---------------------------------------------------------------------------
# intersection
# ---------------------------------------------------------------------------


def test_intersection_of_coordinate_lines():
    ring = ring_xy()
    meet = ideal_intersection(Ideal(ring, [P("x", ring)]), Ideal(ring, [P("y", ring)]))
    assert meet.equals(Ideal(ring, [P("x*y", ring)]))


def test_intersection_with_zero_ideal():
    ring = ring_xy()
    meet = ideal_intersection(Ideal(ring, []), Ideal(ring, [P("x", ring)]))
    assert meet.is_zero_ideal


# ---------------------------------------------------------------------------
# dimension
# ---------------------------------------------------------------------------


def test_dimension_of_determinantal_cone():
    ring = PolynomialRing(("y1", "y2", "y3", "y4"), ())
    assert krull_dimension(Ideal(ring, [P("y1*y4 - y2*y3", ring)])) == 3


def test_dimension_zero_ideal():
    ring = PolynomialRing((), ("a", "b", "c"))
    assert krull_dimension(Ideal(ring, [])) == 3


def test_dimension_point():
    ring = ring_xy()
    assert krull_dimension(Ideal(ring, [P("x", ring), P("y", ring)])) == 0


def test_dimension_unit_ideal_sentinel():
    ring = ring_xy()
    assert krull_dimension(Ideal(ring, [ring.one()])) == -1


def test_dimension_of_quadric_family_total_space():
    ring = PolynomialRing(("y1", "y2", "y3", "y4"), ("x",))
    ideal = Ideal(ring, [P("y1*y4 - y2*y3", ring), P("y1*x^2 + y4*x + y2 - y3", ring)])
    assert krull_dimension(ideal) == 3


def test_dimension_monotone_under_inclusion():
    ring = PolynomialRing((), ("x", "y", "z"))
    chain = [
        Ideal(ring, []),
        Ideal(ring, [P("x*y", ring)]),
        Ideal(ring, [P("x*y", ring), P("z - x", ring)]),
        Ideal(ring, [P("x", ring), P("y", ring), P("z", ring)]),
    ]
    dims = [krull_dimension(I) for I in chain]
    assert dims == sorted(dims, reverse=True)


def test_independent_set_dimension_edge_cases():
    assert independent_set_dimension([], 4) == 4
    assert independent_set_dimension([(0, 0)], 2) == -1
    assert independent_set_dimension([(1, 0), (0, 2)], 2) == 0


def test_unit_detection_on_specialized_fibre():
    # V(y*x - 1) specialized at y = 0 leaves the unit ideal: the empty fibre
    ring = ring_y_x()
    p = P("y*x - 1", ring).specialize({"y": 0})
    xring = PolynomialRing((), ("x",))
    from fibrephi import transport

    fibre = Ideal(xring, [transport(p, xring)])
    assert is_unit_ideal(fibre)
    assert not is_unit_ideal(Ideal(xring, []))
