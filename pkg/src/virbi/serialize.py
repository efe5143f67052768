"""JSON wire formats.

Element::

    {"terms": [{"alpha": "p/q", "mono": [ints] | id, "coeff": "p/q"}]}

Tensor (2 or 3 factors)::

    {"terms": [{"factors": [{"alpha": .., "mono": ..}, ...], "coeff": "p/q"}]}

Derivation table::

    {"domain": [<basis index>, ...], "values": {"<index key>": <tensor2 json>}}

where an index key is the rendered symbol, e.g. ``"L[1/2;-1]"``.  Any value in
the ``terms`` position may instead be ``{"expr": "<text>"}``.
"""

from __future__ import annotations

from typing import Mapping

from .algebra import BasisIndex, ConfigError, Element, as_scalar, format_scalar
from .cohomology import DerivationTable
from .parser import parse, parse_element, render_basis
from .tensors import Tensor2, Tensor3

__all__ = [
    "basis_to_json",
    "basis_from_json",
    "to_json",
    "element_from_json",
    "tensor_from_json",
    "table_to_json",
    "table_from_json",
    "format_scalar",
]


def basis_to_json(idx: BasisIndex) -> dict:
    mono = list(idx.mono) if isinstance(idx.mono, tuple) else idx.mono
    return {"alpha": format_scalar(idx.alpha), "mono": mono}


def basis_from_json(data: Mapping, algebra) -> BasisIndex:
    try:
        alpha = as_scalar(data["alpha"])
        mono = data.get("mono", None)
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed basis index: {data!r}") from exc
    if mono is None:
        mono = algebra.unit
    elif isinstance(mono, list):
        mono = tuple(int(e) for e in mono)
    if not algebra.is_valid(mono):
        raise ConfigError(f"mono {mono!r} is not valid for {algebra.name}")
    return BasisIndex(alpha, mono)


def to_json(x) -> dict:
    """Element, Tensor2 or Tensor3 to the ``terms`` format."""
    terms = []
    for key, c in x.items():
        if isinstance(x, Element):
            entry = basis_to_json(key)
        else:
            entry = {"factors": [basis_to_json(u) for u in key]}
        entry["coeff"] = format_scalar(c)
        terms.append(entry)
    return {"terms": terms}


def element_from_json(data: Mapping, algebra) -> Element:
    if "expr" in data:
        return parse_element(data["expr"], algebra)
    terms = {}
    for t in data.get("terms", []):
        idx = basis_from_json(t, algebra)
        terms[idx] = terms.get(idx, 0) + as_scalar(t["coeff"])
    return Element(algebra, terms)


def tensor_from_json(data: Mapping, algebra, arity: int = 2):
    if "expr" in data:
        return parse(data["expr"], algebra, arity)
    cls = {2: Tensor2, 3: Tensor3}[arity]
    terms = {}
    for t in data.get("terms", []):
        factors = t.get("factors")
        if not isinstance(factors, list) or len(factors) != arity:
            raise ValueError(f"tensor term needs {arity} factors: {t!r}")
        key = tuple(basis_from_json(f, algebra) for f in factors)
        terms[key] = terms.get(key, 0) + as_scalar(t["coeff"])
    return cls(algebra, terms)


def table_to_json(D: DerivationTable) -> dict:
    return {
        "domain": [basis_to_json(x) for x in D.domain],
        "values": {render_basis(x): to_json(D[x]) for x in D.domain if D[x]},
    }


def _index_from_key(key: str, algebra) -> BasisIndex:
    x = parse_element(key, algebra)
    if len(x) != 1 or next(iter(x.items()))[1] != 1:
        raise ValueError(f"table key {key!r} is not a single basis symbol")
    return next(iter(x.keys()))


def table_from_json(data: Mapping, algebra) -> DerivationTable:
    if "domain" not in data:
        raise ValueError("derivation table JSON needs a 'domain' list")
    domain = [
        _index_from_key(d, algebra) if isinstance(d, str) else basis_from_json(d, algebra)
        for d in data["domain"]
    ]
    values = {}
    for key, value in data.get("values", {}).items():
        values[_index_from_key(key, algebra)] = tensor_from_json(value, algebra, 2)
    return DerivationTable(algebra, values, tuple(domain))
