from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from virbi.algebra import Element, LaurentMonomials, bracket
from virbi.parser import parse
from virbi.tensors import (
    Tensor2,
    Tensor3,
    act2,
    act3,
    cyclic,
    is_skew,
    reverse3,
    skew_part,
    symmetric_part,
    tensor,
    tensor_gamma_component,
    twist,
)

import oracles
from strategies import backends, elements, laurent_backends, tensors

K1 = LaurentMonomials(1)


def P(text, algebra=K1):
    return parse(text, algebra)


def test_degree_zero_mono_action_example():
    a = Fraction(3, 2)
    w = tensor(Element.basis_element(K1, a, (0,)), Element.basis_element(K1, -a, (0,)))
    expected = P("3/2*L[3/2;1](x)L[-3/2;0] - 3/2*L[3/2;0](x)L[-3/2;1]")
    assert act2(P("L[0;1]"), w) == expected


def test_action_on_degree_zero_square():
    assert act2(P("L[1;1]"), P("L[0](x)L[0]")) == P("-L[1;1](x)L[0;0] - L[0;0](x)L[1;1]")


def test_zero_acts_trivially():
    assert act2(Element.zero(K1), P("L[1](x)L[2;3]")).is_zero()
    assert act3(P("L[2;1]"), Tensor3.zero(K1)).is_zero()


def test_act3_examples():
    K0 = LaurentMonomials(0)
    assert act3(P("L[1]", K0), P("L[0](x)L[0](x)L[0]", K0)) == P(
        "-L[1](x)L[0](x)L[0] - L[0](x)L[1](x)L[0] - L[0](x)L[0](x)L[1]", K0
    )
    w = P("L[1/2](x)L[-2](x)L[3]", K0)
    assert act3(P("L[0]", K0), w) == w.scale(Fraction(3, 2))


def test_twist_and_cyclic_examples():
    assert twist(P("L[1;1](x)L[2;2]")) == P("L[2;2](x)L[1;1]")
    assert twist(P("L[1;1](x)L[1;1]")) == P("L[1;1](x)L[1;1]")
    assert cyclic(P("L[1](x)L[2](x)L[3]")) == P("L[2](x)L[3](x)L[1]")
    assert cyclic(P("L[1](x)L[1](x)L[1]")) == P("L[1](x)L[1](x)L[1]")
    assert reverse3(P("L[1](x)L[2](x)L[3]")) == P("L[3](x)L[2](x)L[1]")


def test_skew_examples():
    assert is_skew(P("L[1](x)L[2] - L[2](x)L[1]"))
    assert not is_skew(P("L[0](x)L[0]"))
    assert is_skew(Tensor2.zero(K1))


def test_gamma_component_example():
    w = P("L[1](x)L[-1] + L[0](x)L[1]")
    assert tensor_gamma_component(w, 0) == P("L[1](x)L[-1]")


@settings(max_examples=100, deadline=None)
@given(laurent_backends.flatmap(lambda A: st.tuples(elements(A), tensors(A, 2), tensors(A, 3))))
def test_action_matches_oracle(data):
    a, w2, w3 = data
    pa = oracles.plain(a)
    assert oracles.plain(act2(a, w2)) == oracles.act(pa, oracles.plain(w2))
    assert oracles.plain(act3(a, w3)) == oracles.act(pa, oracles.plain(w3))


@settings(max_examples=100, deadline=None)
@given(backends.flatmap(lambda A: st.tuples(tensors(A, 2), tensors(A, 3))))
def test_involutions(data):
    w2, w3 = data
    assert twist(twist(w2)) == w2
    assert cyclic(cyclic(cyclic(w3))) == w3
    assert reverse3(reverse3(w3)) == w3


@settings(max_examples=100, deadline=None)
@given(backends.flatmap(lambda A: st.tuples(elements(A), tensors(A, 2), tensors(A, 3))))
def test_equivariance(data):
    a, w2, w3 = data
    assert twist(act2(a, w2)) == act2(a, twist(w2))
    assert cyclic(act3(a, w3)) == act3(a, cyclic(w3))


@settings(max_examples=80, deadline=None)
@given(backends.flatmap(lambda A: st.tuples(elements(A), elements(A), tensors(A, 2), tensors(A, 3))))
def test_module_law(data):
    a, b, w2, w3 = data
    ab = bracket(a, b)
    assert act2(ab, w2) == act2(a, act2(b, w2)) - act2(b, act2(a, w2))
    assert act3(ab, w3) == act3(a, act3(b, w3)) - act3(b, act3(a, w3))


@settings(max_examples=100, deadline=None)
@given(backends.flatmap(lambda A: tensors(A, 2)))
def test_skew_symmetric_decomposition(w):
    s, t = skew_part(w), symmetric_part(w)
    assert s + t == w
    assert is_skew(s)
    assert twist(t) == t
    assert is_skew(w) == t.is_zero()


@settings(max_examples=60, deadline=None)
@given(backends.flatmap(lambda A: st.tuples(elements(A), elements(A), elements(A))))
def test_tensor_of_elements_is_leibniz_compatible(data):
    a, x, y = data
    assert act2(a, tensor(x, y)) == tensor(bracket(a, x), y) + tensor(x, bracket(a, y))
