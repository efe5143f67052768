"""Seeded random elements and tensors.

Every trial draws from its own ``random.Random`` seeded by a string built from
(seed, suite, backend, trial index), so results never depend on scheduling.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra import BasisIndex, Element, LaurentMonomials
from .tensors import Tensor2, Tensor3, symmetric_part, twist

COEFFS = [c for c in range(-3, 4) if c]
SCALES = [Fraction(1), Fraction(1, 2), Fraction(1, 3)]


def trial_rng(seed: int, *labels) -> random.Random:
    return random.Random("/".join([str(seed), *map(str, labels)]))


def random_coeff(rng: random.Random) -> Fraction:
    return rng.choice(COEFFS) * rng.choice(SCALES)


def random_mono(rng: random.Random, algebra, exp_bound: int):
    if isinstance(algebra, LaurentMonomials):
        return tuple(rng.randint(-exp_bound, exp_bound) for _ in range(algebra.k))
    return rng.randrange(algebra.n)


def random_basis(rng, algebra, window) -> BasisIndex:
    return BasisIndex(rng.choice(window.gammas), random_mono(rng, algebra, window.exp_bound))


def random_element(rng, algebra, window, max_terms: int = 3, nonzero: bool = True) -> Element:
    while True:
        n = rng.randint(1, max_terms)
        x = Element(algebra, [(random_basis(rng, algebra, window), random_coeff(rng)) for _ in range(n)])
        if x or not nonzero:
            return x


def _random_tensor(cls, arity, rng, algebra, window, max_terms, nonzero):
    while True:
        n = rng.randint(1, max_terms)
        terms = [
            (tuple(random_basis(rng, algebra, window) for _ in range(arity)), random_coeff(rng))
            for _ in range(n)
        ]
        w = cls(algebra, terms)
        if w or not nonzero:
            return w


def random_tensor2(rng, algebra, window, max_terms: int = 3, nonzero: bool = True) -> Tensor2:
    return _random_tensor(Tensor2, 2, rng, algebra, window, max_terms, nonzero)


def random_tensor3(rng, algebra, window, max_terms: int = 3, nonzero: bool = True) -> Tensor3:
    return _random_tensor(Tensor3, 3, rng, algebra, window, max_terms, nonzero)


def random_skew(rng, algebra, window, max_terms: int = 3) -> Tensor2:
    """``w - tau(w)`` for a random ``w``; never zero."""
    while True:
        w = random_tensor2(rng, algebra, window, max_terms)
        r = w - twist(w)
        if r:
            return r


def random_nonskew(rng, algebra, window, max_terms: int = 3) -> Tensor2:
    """Random tensor with a nonzero symmetric part."""
    while True:
        w = random_tensor2(rng, algebra, window, max_terms)
        if symmetric_part(w):
            return w
