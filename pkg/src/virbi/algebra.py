"""Generalized loop/map Witt algebras over exact rationals.

Basis symbols are ``L_alpha * m`` where ``alpha`` is a rational grading degree
and ``m`` indexes a basis of a unital commutative associative coefficient
algebra.  The bracket is

    [L_a m, L_b m'] = (b - a) L_{a+b} (m m').
"""

from __future__ import annotations

import itertools
import json
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping, Union

Scalar = Fraction
Mono = Union[tuple, int]


class ConfigError(ValueError):
    """Invalid backend, window, or mixing of incompatible algebras."""


def as_scalar(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction, int or 'p/q' string")
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    return Fraction(value)


def format_scalar(c: Fraction) -> str:
    """Serialize as ``"p/q"`` (always with a denominator)."""
    return f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# coefficient algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentMonomials:
    """Laurent monomials in ``k`` variables; basis ids are exponent tuples."""

    k: int
    bracket_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.k < 0:
            raise ConfigError("number of Laurent variables must be >= 0")

    @property
    def unit(self) -> tuple:
        return (0,) * self.k

    @property
    def name(self) -> str:
        return f"laurent(k={self.k})"

    # A (x) A is an integral domain for Laurent polynomial rings.
    domain_hypothesis = True

    def multiply(self, m1: tuple, m2: tuple) -> dict:
        return {tuple(a + b for a, b in zip(m1, m2)): Fraction(1)}

    def grade(self, m: tuple) -> tuple:
        return m

    def is_valid(self, m: Any) -> bool:
        return (
            isinstance(m, tuple)
            and len(m) == self.k
            and all(isinstance(e, int) and not isinstance(e, bool) for e in m)
        )

    def basis(self, exp_bound: int) -> list:
        rng = range(-exp_bound, exp_bound + 1)
        return [tuple(p) for p in itertools.product(rng, repeat=self.k)]

    def to_json(self) -> dict:
        return {"backend": "laurent", "k": self.k}


@dataclass(frozen=True)
class StructureTable:
    """Finite-dimensional commutative algebra given by structure constants.

    ``mult[i][j]`` is a tuple of ``(basis id, coefficient)`` pairs.  The table is
    checked for commutativity, associativity and the unit law on construction.
    """

    n: int
    unit_id: int
    mult: tuple
    label: str = field(default="table", compare=False)
    bracket_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("structure table needs at least one basis element")
        if not 0 <= self.unit_id < self.n:
            raise ConfigError(f"unit id {self.unit_id} outside 0..{self.n - 1}")
        if len(self.mult) != self.n or any(len(row) != self.n for row in self.mult):
            raise ConfigError(f"multiplication table must be {self.n}x{self.n}")
        for row in self.mult:
            for entry in row:
                for b, _ in entry:
                    if not 0 <= b < self.n:
                        raise ConfigError(f"basis id {b} out of range")
        self._check_axioms()

    @classmethod
    def from_products(cls, n: int, unit: int, products: Mapping, label: str = "table"):
        """``products[(i, j)]`` maps basis ids to coefficients; missing pairs are 0."""
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                combo = products.get((i, j), products.get((j, i), {}))
                entry = tuple(
                    sorted((int(b), as_scalar(c)) for b, c in combo.items() if as_scalar(c) != 0)
                )
                row.append(entry)
            rows.append(tuple(row))
        return cls(n, unit, tuple(rows), label)

    @property
    def unit(self) -> int:
        return self.unit_id

    @property
    def name(self) -> str:
        return f"table({self.label}, n={self.n})"

    @property
    def domain_hypothesis(self) -> bool:
        # A finite-dimensional domain over Q is a field F'; F' (x) F' is a domain only for F' = Q.
        return self.n == 1

    def multiply(self, m1: int, m2: int) -> dict:
        return dict(self.mult[m1][m2])

    def grade(self, m: int) -> tuple:
        return ()

    def is_valid(self, m: Any) -> bool:
        return isinstance(m, int) and not isinstance(m, bool) and 0 <= m < self.n

    def basis(self, exp_bound: int = 0) -> list:
        return list(range(self.n))

    def _vec_mul(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for a, ca in u.items():
            for b, cb in v.items():
                for c, cc in self.mult[a][b]:
                    out[c] = out.get(c, 0) + ca * cb * cc
        return {c: x for c, x in out.items() if x != 0}

    def _check_axioms(self) -> None:
        for i in range(self.n):
            for j in range(self.n):
                if dict(self.mult[i][j]) != dict(self.mult[j][i]):
                    raise ConfigError(f"table is not commutative at ({i}, {j})")
            if dict(self.mult[self.unit_id][i]) != {i: 1}:
                raise ConfigError(f"unit {self.unit_id} does not act as identity on {i}")
        for i, j, l in itertools.product(range(self.n), repeat=3):
            left = self._vec_mul(self._vec_mul({i: 1}, {j: 1}), {l: 1})
            right = self._vec_mul({i: 1}, self._vec_mul({j: 1}, {l: 1}))
            if left != right:
                raise ConfigError(f"table is not associative at ({i}, {j}, {l})")

    def to_json(self) -> dict:
        return {
            "backend": "table",
            "label": self.label,
            "n": self.n,
            "unit": self.unit_id,
            "mult": [
                [{str(b): format_scalar(c) for b, c in entry} for entry in row]
                for row in self.mult
            ],
        }


CoefficientAlgebra = Union[LaurentMonomials, StructureTable]


def table_from_json(data: Mapping, label: str = "table") -> StructureTable:
    """Build a table backend from ``{"n", "unit", "mult": [[{id: "p/q"}]]}``."""
    try:
        n = int(data["n"])
        unit = int(data["unit"])
        raw = data["mult"]
        products = {
            (i, j): {int(b): c for b, c in raw[i][j].items()}
            for i in range(len(raw))
            for j in range(len(raw[i]))
        }
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"malformed structure table: {exc}") from exc
    return StructureTable.from_products(n, unit, products, data.get("label", label))


def load_table(path: Union[str, Path]) -> StructureTable:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read structure table {path}: {exc}") from exc
    return table_from_json(data, label=path.stem)


def truncated_polynomials(degree: int = 3) -> StructureTable:
    """Q[x]/(x^degree) with basis 1, x, ..., x^(degree-1)."""
    products = {
        (i, j): {i + j: 1}
        for i in range(degree)
        for j in range(degree)
        if i + j < degree
    }
    return StructureTable.from_products(degree, 0, products, f"Q[x]/(x^{degree})")


# ---------------------------------------------------------------------------
# basis symbols and sparse combinations
# ---------------------------------------------------------------------------


class BasisIndex:
    """Basis symbol ``L_alpha * mono``; hashable, ordered by ``(alpha, mono)``."""

    __slots__ = ("alpha", "mono", "_key", "_hash", "__weakref__")
    _interned: "weakref.WeakValueDictionary" = None

    def __new__(cls, alpha: Fraction, mono: Mono):
        # interned, so equality is nearly always an identity check; Fraction.__hash__
        # is costly and these are dict keys everywhere
        if type(alpha) is not Fraction:
            alpha = as_scalar(alpha)
        key = (alpha, mono)
        obj = cls._interned.get(key)
        if obj is None:
            obj = object.__new__(cls)
            obj.alpha = alpha
            obj.mono = mono
            obj._key = key
            obj._hash = hash(key)
            obj = cls._interned.setdefault(key, obj)
        return obj

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not BasisIndex:
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    def __gt__(self, other):
        return self._key > other._key

    def __ge__(self, other):
        return self._key >= other._key

    def __iter__(self):
        return iter(self._key)

    def __reduce__(self):
        return (BasisIndex, self._key)

    def __repr__(self):
        return f"BasisIndex(alpha={self.alpha!r}, mono={self.mono!r})"


BasisIndex._interned = weakref.WeakValueDictionary()


def basis(alpha: Any, mono: Mono = None, algebra: CoefficientAlgebra = None) -> BasisIndex:
    a = as_scalar(alpha)
    if mono is None:
        if algebra is None:
            raise ValueError("need a mono or an algebra to take the unit from")
        mono = algebra.unit
    if isinstance(mono, list):
        mono = tuple(mono)
    return BasisIndex(a, mono)


class Combination:
    """Immutable finite linear combination with exact coefficients.

    No zero coefficients are ever stored.  Public iteration (``items``, ``keys``,
    ``iter``) is in sorted key order so rendering and serialization are
    reproducible; hot loops read ``_terms`` directly.
    """

    __slots__ = ("algebra", "_terms", "_sorted", "_hash")
    arity = 0

    def __init__(self, algebra: CoefficientAlgebra, terms: Union[Mapping, Iterable] = ()):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        acc: dict = {}
        for key, c in items:
            c = as_scalar(c)
            if c:
                acc[key] = acc.get(key, 0) + c
        self.algebra = algebra
        self._terms = {k: c for k, c in acc.items() if c}
        self._sorted = None
        self._hash = None

    @classmethod
    def _raw(cls, algebra, terms: dict):
        # terms may contain zeros but are otherwise canonical
        obj = cls.__new__(cls)
        obj.algebra = algebra
        obj._terms = {k: c for k, c in terms.items() if c}
        obj._sorted = None
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, algebra: CoefficientAlgebra):
        return cls._raw(algebra, {})

    def _order(self) -> list:
        if self._sorted is None:
            self._sorted = sorted(self._terms.items(), key=lambda kv: kv[0])
        return self._sorted

    @property
    def terms(self) -> dict:
        return dict(self._order())

    def items(self) -> list:
        return list(self._order())

    def keys(self) -> list:
        return [k for k, _ in self._order()]

    def coefficient(self, key) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def __iter__(self) -> Iterator:
        return iter(self._order())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise ConfigError(
                f"mismatched coefficient algebras: {self.algebra.name} vs {other.algebra.name}"
            )

    def __add__(self, other):
        self._check(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return self._raw(self.algebra, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) - c
        return self._raw(self.algebra, out)

    def __neg__(self):
        return self._raw(self.algebra, {k: -c for k, c in self._terms.items()})

    def scale(self, c: Any):
        c = as_scalar(c)
        if not c:
            return self.zero(self.algebra)
        return self._raw(self.algebra, {k: c * v for k, v in self._terms.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._terms == other._terms and (
            self.algebra is other.algebra or self.algebra == other.algebra
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.algebra, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        from .parser import render

        return f"{type(self).__name__}({render(self)!r})"


class Element(Combination):
    """An element of the map Witt algebra: keys are :class:`BasisIndex`."""

    __slots__ = ()
    arity = 1

    @classmethod
    def basis_element(cls, algebra, alpha, mono=None, coeff=1) -> "Element":
        idx = basis(alpha, mono, algebra)
        if not algebra.is_valid(idx.mono):
            raise ConfigError(f"mono {idx.mono!r} is not valid for {algebra.name}")
        return cls(algebra, {idx: coeff})


def add(x: Combination, y: Combination) -> Combination:
    return x + y


def scale(c: Any, x: Combination) -> Combination:
    return x.scale(c)


_CACHE_LIMIT = 1 << 18


def bracket_basis(algebra: CoefficientAlgebra, u: BasisIndex, v: BasisIndex) -> tuple:
    """``[u, v]`` for basis symbols, as a tuple of ``(BasisIndex, coeff)``."""
    cache = algebra.bracket_cache
    key = (u, v)
    hit = cache.get(key)
    if hit is not None:
        return hit
    factor = v.alpha - u.alpha
    if not factor:
        out = ()
    else:
        alpha = u.alpha + v.alpha
        out = tuple(
            (BasisIndex(alpha, m), factor * c) for m, c in algebra.multiply(u.mono, v.mono).items()
        )
    if len(cache) >= _CACHE_LIMIT:
        cache.clear()
    cache[key] = out
    return out


def bracket(x: Element, y: Element) -> Element:
    x._check(y)
    algebra = x.algebra
    out: dict = {}
    for u, cu in x._terms.items():
        for v, cv in y._terms.items():
            for w, c in bracket_basis(algebra, u, v):
                out[w] = out.get(w, 0) + cu * cv * c
    return Element._raw(algebra, out)


def jacobi_residual(x: Element, y: Element, z: Element) -> Element:
    return (
        bracket(x, bracket(y, z))
        + bracket(y, bracket(z, x))
        + bracket(z, bracket(x, y))
    )


def gamma_degree(x: Element) -> set:
    return {key.alpha for key in x.keys()}


def homogeneous_component(x: Element, d: Any) -> Element:
    d = as_scalar(d)
    return Element._raw(x.algebra, {k: c for k, c in x._terms.items() if k.alpha == d})
