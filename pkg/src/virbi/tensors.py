"""Tensor square and cube of the algebra with the diagonal adjoint action."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Any

from .algebra import Combination, Element, as_scalar, bracket_basis


class Tensor2(Combination):
    """Element of L (x) L; keys are pairs of basis indices."""

    __slots__ = ()
    arity = 2


class Tensor3(Combination):
    """Element of L (x) L (x) L; keys are triples of basis indices."""

    __slots__ = ()
    arity = 3


def tensor(*factors: Element):
    """Tensor product of two or three algebra elements."""
    cls = {2: Tensor2, 3: Tensor3}.get(len(factors))
    if cls is None:
        raise ValueError("only 2- and 3-fold tensor products are supported")
    algebra = factors[0].algebra
    for f in factors[1:]:
        factors[0]._check(f)
    out: dict = {(): Fraction(1)}
    for f in factors:
        out = {k + (u,): c * cu for k, c in out.items() for u, cu in f._terms.items()}
    return cls._raw(algebra, out)


def _integerize(terms: dict) -> tuple:
    """``(numerators, d)`` with ``terms[k] == numerators[k] / d``."""
    den = 1
    for c in terms.values():
        if c.denominator != 1:
            den = lcm(den, c.denominator)
    return {k: c.numerator * (den // c.denominator) for k, c in terms.items()}, den


def _act(a: Element, w: Combination, cls):
    if a.algebra != w.algebra:
        a._check(Element.zero(w.algebra))
    algebra = w.algebra
    # integer accumulation over a common denominator: Fraction arithmetic dominates otherwise
    ia, da = _integerize(a._terms)
    iw, dw = _integerize(w._terms)
    parts = []
    dens = 1
    for key, nw in iw.items():
        for x, nx in ia.items():
            c0 = nx * nw
            for slot, u in enumerate(key):
                for v, cb in bracket_basis(algebra, x, u):
                    d = cb.denominator
                    if d != 1 and dens % d:
                        dens = lcm(dens, d)
                    parts.append((key[:slot] + (v,) + key[slot + 1:], c0 * cb.numerator, d))
    out: dict = {}
    for new, n, d in parts:
        out[new] = out.get(new, 0) + n * (dens // d)
    total = da * dw * dens
    return cls._raw(algebra, {k: Fraction(n, total) for k, n in out.items() if n})


def act2(a: Element, w: Tensor2) -> Tensor2:
    """``a . (u (x) v) = [a, u] (x) v + u (x) [a, v]``, extended bilinearly."""
    return _act(a, w, Tensor2)


def act3(a: Element, w: Tensor3) -> Tensor3:
    return _act(a, w, Tensor3)


def act(a: Element, w: Combination) -> Combination:
    if isinstance(w, Tensor3):
        return act3(a, w)
    if isinstance(w, Tensor2):
        return act2(a, w)
    raise TypeError(f"cannot act on {type(w).__name__}")


def twist(w: Tensor2) -> Tensor2:
    """Swap the two factors (coefficient slots travel with their factor)."""
    return Tensor2._raw(w.algebra, {(v, u): c for (u, v), c in w._terms.items()})


def cyclic(w: Tensor3) -> Tensor3:
    """``x1 (x) x2 (x) x3 -> x2 (x) x3 (x) x1``."""
    return Tensor3._raw(w.algebra, {(b, c, a): x for (a, b, c), x in w._terms.items()})


def reverse3(w: Tensor3) -> Tensor3:
    """``x1 (x) x2 (x) x3 -> x3 (x) x2 (x) x1``."""
    return Tensor3._raw(w.algebra, {(c, b, a): x for (a, b, c), x in w._terms.items()})


def is_skew(w: Tensor2) -> bool:
    # Ker(1 + tau) = Im(1 - tau) in characteristic zero
    return (w + twist(w)).is_zero()


def skew_part(w: Tensor2) -> Tensor2:
    return (w - twist(w)).scale(Fraction(1, 2))


def symmetric_part(w: Tensor2) -> Tensor2:
    return (w + twist(w)).scale(Fraction(1, 2))


def key_degree(key: tuple) -> Fraction:
    return sum((u.alpha for u in key), Fraction(0))


def tensor_gamma_degrees(w: Combination) -> set:
    return {key_degree(k) for k in w._terms}


def tensor_gamma_component(w: Combination, d: Any) -> Combination:
    """Terms whose slot degrees add up to ``d``."""
    d = as_scalar(d)
    return type(w)._raw(w.algebra, {k: c for k, c in w._terms.items() if key_degree(k) == d})
