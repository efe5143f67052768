from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from virbi.algebra import (
    BasisIndex,
    ConfigError,
    Element,
    LaurentMonomials,
    StructureTable,
    add,
    as_scalar,
    bracket,
    gamma_degree,
    homogeneous_component,
    jacobi_residual,
    scale,
    table_from_json,
    truncated_polynomials,
)
from virbi.parser import parse_element as P

import oracles
from strategies import backends, elements, laurent_backends

K1 = LaurentMonomials(1)
K0 = LaurentMonomials(0)


def L(alpha, *mono, coeff=1, algebra=K1):
    return Element.basis_element(algebra, alpha, tuple(mono) if mono else algebra.unit, coeff)


# -- worked examples -------------------------------------------------------


def test_bracket_substitution_example():
    assert bracket(L(1, 2), L(2, 3)) == L(3, 5)


@pytest.mark.parametrize("i,j", [(0, 0), (1, -2), (3, 3)])
def test_equal_degrees_commute(i, j):
    assert bracket(L(Fraction(3, 2), i), L(Fraction(3, 2), j)).is_zero()


def test_degree_operator_scales_by_degree():
    assert bracket(L(0, 0), L(Fraction(1, 2), -1)) == L(Fraction(1, 2), -1, coeff=Fraction(1, 2))


def test_add_and_scale_examples():
    assert add(L(1), -L(1)).is_zero()
    assert scale(0, L(1, 1)).is_zero()
    assert scale(Fraction(2, 3), L(1, coeff=3)) == L(1, coeff=2)


def test_jacobi_examples():
    assert jacobi_residual(L(1), L(2), L(3)).is_zero()
    assert jacobi_residual(L(0, 1), L(1, -1), L(Fraction(1, 2))).is_zero()


def test_homogeneous_component_and_degrees():
    x = L(1) + L(2, 1)
    assert homogeneous_component(x, 1) == L(1)
    assert homogeneous_component(L(1), 2).is_zero()
    assert gamma_degree(L(1, 1) + L(1, 2)) == {Fraction(1)}


def test_mismatched_algebras_rejected():
    with pytest.raises(ConfigError):
        bracket(L(1), L(1, algebra=K0))
    with pytest.raises(ConfigError):
        L(1) + L(1, algebra=LaurentMonomials(2))


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_scalar(0.5)
    assert as_scalar("3/6") == Fraction(1, 2)


def test_no_zero_coefficients_stored():
    x = Element(K1, [(BasisIndex(Fraction(1), (0,)), 1), (BasisIndex(Fraction(1), (0,)), -1)])
    assert x.is_zero() and len(x) == 0
    assert all(c != 0 for c in bracket(L(1) + L(2), L(2) + L(1)).terms.values())


def test_basis_index_int_and_fraction_alpha_agree():
    a, b = BasisIndex(1, (0,)), BasisIndex(Fraction(1), (0,))
    assert a == b and hash(a) == hash(b)
    assert type(a.alpha) is Fraction


# -- coefficient-algebra backends -----------------------------------------


def test_truncated_polynomials_products():
    A = truncated_polynomials(3)
    assert A.multiply(1, 1) == {2: 1}
    assert A.multiply(1, 2) == {}
    assert not A.domain_hypothesis
    assert LaurentMonomials(2).domain_hypothesis


def test_table_bracket_uses_structure_constants():
    A = truncated_polynomials(3)
    x = Element.basis_element(A, 1, 1)
    y = Element.basis_element(A, 2, 1)
    assert bracket(x, y) == Element.basis_element(A, 3, 2)
    assert bracket(x, Element.basis_element(A, 2, 2)).is_zero()


def test_noncommutative_table_rejected():
    with pytest.raises(ConfigError, match="commutative"):
        table_from_json({"n": 2, "unit": 0, "mult": [[{"0": "1"}, {"1": "1"}], [{"0": "1"}, {"0": "1"}]]})


def test_nonassociative_table_rejected():
    # basis 1, a, b with a*a = b, a*b = a, b*b = 0: (a a) b = b b = 0 but a (a b) = a a = b
    products = {(0, 0): {0: 1}, (0, 1): {1: 1}, (0, 2): {2: 1}, (1, 1): {2: 1}, (1, 2): {1: 1}}
    with pytest.raises(ConfigError, match="associative"):
        StructureTable.from_products(3, 0, products)


def test_bad_unit_rejected():
    with pytest.raises(ConfigError, match="unit"):
        StructureTable.from_products(2, 0, {(0, 0): {0: 1}, (1, 1): {1: 1}})


def test_malformed_table_json():
    with pytest.raises(ConfigError):
        table_from_json({"n": 2})


# -- properties -------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(laurent_backends.flatmap(lambda A: st.tuples(elements(A), elements(A))))
def test_bracket_matches_oracle(pair):
    x, y = pair
    assert oracles.plain(bracket(x, y)) == oracles.bracket(oracles.plain(x), oracles.plain(y))


@settings(max_examples=150, deadline=None)
@given(backends.flatmap(lambda A: st.tuples(elements(A), elements(A), elements(A))))
def test_antisymmetry_and_jacobi(triple):
    x, y, z = triple
    assert (bracket(x, y) + bracket(y, x)).is_zero()
    assert jacobi_residual(x, y, z).is_zero()


@settings(max_examples=100, deadline=None)
@given(backends.flatmap(lambda A: st.tuples(elements(A), elements(A), elements(A))),
       st.fractions(min_value=-9, max_value=9, max_denominator=5))
def test_bilinearity(triple, c):
    x, y, z = triple
    assert bracket(x + y.scale(c), z) == bracket(x, z) + bracket(y, z).scale(c)


@settings(max_examples=100, deadline=None)
@given(backends.flatmap(lambda A: st.tuples(elements(A, 1), elements(A, 1))))
def test_grading(pair):
    x, y = pair
    assert gamma_degree(bracket(x, y)) <= {a + b for a in gamma_degree(x) for b in gamma_degree(y)}


@settings(max_examples=100, deadline=None)
@given(backends.flatmap(lambda A: st.tuples(elements(A), elements(A))))
def test_equality_and_hash_respect_values(pair):
    x, y = pair
    assert (x + y) - y == x
    assert hash((x + y) - y) == hash(x)


def test_parse_shortcut_in_tests():
    assert P("L[1;2]", K1) == L(1, 2)
