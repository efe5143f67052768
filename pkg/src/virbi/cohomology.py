"""1-cocycles with values in L (x) L on finite windows.

A :class:`DerivationTable` records ``D(x)`` for every basis symbol ``x`` of a
window.  The inner-derivation solver looks for ``v`` with ``x . v = D(x)`` on the
whole domain; the system splits into independent blocks by total Gamma-degree
(and total exponent for Laurent backends) because the action is graded.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence

from .algebra import (
    BasisIndex,
    ConfigError,
    Element,
    LaurentMonomials,
    as_scalar,
    bracket_basis,
)
from .linsolve import Echelon, Equation, InconsistentSystem
from .tensors import Tensor2, Tensor3, act2, act3, key_degree, tensor_gamma_component, twist


@dataclass(frozen=True)
class Window:
    """Finite truncation: allowed Gamma-degrees and a per-variable exponent bound."""

    gammas: tuple
    exp_bound: int = 0

    def __post_init__(self):
        gammas = tuple(sorted({as_scalar(g) for g in self.gammas}))
        object.__setattr__(self, "gammas", gammas)
        if not gammas:
            raise ConfigError("window has no Gamma-degrees")
        if 0 not in gammas:
            raise ConfigError("window Gamma-degrees must contain 0")
        if any(-g not in gammas for g in gammas):
            raise ConfigError("window Gamma-degrees must be closed under negation")
        if self.exp_bound < 0:
            raise ConfigError("exponent bound must be >= 0")

    @classmethod
    def grid(cls, step: Any = 1, bound: Any = 2, exp_bound: int = 0) -> "Window":
        step, bound = as_scalar(step), as_scalar(bound)
        if step <= 0:
            raise ConfigError("Gamma step must be positive")
        n = int(bound // step)
        return cls(tuple(step * i for i in range(-n, n + 1)), exp_bound)

    def basis(self, algebra) -> list:
        monos = algebra.basis(self.exp_bound)
        return [BasisIndex(g, m) for g in self.gammas for m in monos]

    def witt_basis(self, algebra) -> list:
        """The sub-window spanned by ``L_{alpha} * 1``."""
        return [BasisIndex(g, algebra.unit) for g in self.gammas]

    def inflated(self, gamma_pad: Any = 0, exp_pad: int = 0) -> "Window":
        pad = as_scalar(gamma_pad)
        shifts = [g for g in self.gammas if abs(g) <= pad]
        return Window(
            tuple({a + b for a in self.gammas for b in shifts}),
            self.exp_bound + exp_pad,
        )

    def to_json(self) -> dict:
        return {"gammas": [f"{g.numerator}/{g.denominator}" for g in self.gammas],
                "exp_bound": self.exp_bound}


@dataclass
class DerivationTable:
    """Candidate cocycle: values on an explicit finite domain of basis symbols."""

    algebra: Any
    values: dict
    domain: tuple = field(default=None)

    def __post_init__(self):
        if self.domain is None:
            self.domain = tuple(sorted(self.values))
        else:
            self.domain = tuple(sorted(set(self.domain)))
        zero = Tensor2.zero(self.algebra)
        for x in self.domain:
            value = self.values.setdefault(x, zero)
            if value.algebra != self.algebra:
                raise ConfigError("table values live over a different coefficient algebra")
        extra = set(self.values) - set(self.domain)
        if extra:
            raise ValueError(f"values given outside the declared domain: {sorted(extra)[:3]}")
        self._domain_set = frozenset(self.domain)

    def __getitem__(self, x: BasisIndex) -> Tensor2:
        return self.values[x]

    def __contains__(self, x) -> bool:
        return x in self._domain_set

    def evaluate(self, x: Element) -> Optional[Tensor2]:
        """Linear extension; ``None`` if ``x`` leaves the domain."""
        out = Tensor2.zero(self.algebra)
        for key, c in x.items():
            if key not in self._domain_set:
                return None
            out = out + self.values[key].scale(c)
        return out

    def __add__(self, other: "DerivationTable") -> "DerivationTable":
        domain = sorted(set(self.domain) | set(other.domain))
        zero = Tensor2.zero(self.algebra)
        return DerivationTable(
            self.algebra,
            {x: self.values.get(x, zero) + other.values.get(x, zero) for x in domain},
            tuple(domain),
        )

    def __eq__(self, other):
        if not isinstance(other, DerivationTable):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.domain == other.domain
            and all(self.values[x] == other.values[x] for x in self.domain)
        )

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values.values())

    def with_value(self, x: BasisIndex, value: Tensor2) -> "DerivationTable":
        values = dict(self.values)
        values[x] = value
        return DerivationTable(self.algebra, values, self.domain)


def _basis_element(algebra, x: BasisIndex) -> Element:
    return Element._raw(algebra, {x: Fraction(1)})


def coboundary_of(v: Tensor2, window: Window) -> DerivationTable:
    """The inner derivation ``x -> x . v`` tabulated on the window basis."""
    algebra = v.algebra
    domain = window.basis(algebra)
    return DerivationTable(
        algebra, {x: act2(_basis_element(algebra, x), v) for x in domain}, tuple(domain)
    )


def cocycle_residual(D: DerivationTable, x: BasisIndex, y: BasisIndex) -> Optional[Tensor2]:
    """``D([x, y]) - x . D(y) + y . D(x)``, or ``None`` when ``[x, y]`` leaves the domain."""
    if x not in D or y not in D:
        return None
    algebra = D.algebra
    out = Tensor2.zero(algebra)
    for w, c in bracket_basis(algebra, x, y):
        if w not in D:
            return None
        out = out + D[w].scale(c)
    return out - act2(_basis_element(algebra, x), D[y]) + act2(_basis_element(algebra, y), D[x])


@dataclass
class CocycleReport:
    pairs: int
    defined: int
    failing: int
    max_terms: int
    first_failure: Optional[tuple] = None

    @property
    def coverage(self) -> float:
        return self.defined / self.pairs if self.pairs else 0.0

    @property
    def passed(self) -> bool:
        return self.failing == 0


def cocycle_sweep(D: DerivationTable) -> CocycleReport:
    """Residuals over all unordered domain pairs; undefined pairs count against coverage."""
    pairs = defined = failing = max_terms = 0
    first = None
    for x, y in itertools.combinations(D.domain, 2):
        pairs += 1
        res = cocycle_residual(D, x, y)
        if res is None:
            continue
        defined += 1
        if res:
            failing += 1
            max_terms = max(max_terms, len(res))
            if first is None:
                first = (x, y)
    return CocycleReport(pairs, defined, failing, max_terms, first)


def tensor_window_keys(left: Window, right: Window, algebra) -> list:
    return [(u, v) for u in left.basis(algebra) for v in right.basis(algebra)]


def _block(algebra, key: tuple, shift: BasisIndex = None):
    deg = key_degree(key)
    if isinstance(algebra, LaurentMonomials):
        grade = [sum(e) for e in zip(*(u.mono for u in key))] if algebra.k else []
    else:
        grade = []
    if shift is not None:
        deg -= shift.alpha
        if grade:
            grade = [g - s for g, s in zip(grade, shift.mono)]
    return (deg, tuple(grade))


@functools.lru_cache(maxsize=8)
def _partition(algebra, keys: tuple) -> dict:
    """Unknowns grouped by block, each group in sorted order."""
    by_block: dict = {}
    for col in sorted(set(keys)):
        by_block.setdefault(_block(algebra, col), []).append(col)
    return by_block


def _solve_order(domain: Sequence[BasisIndex], algebra) -> list:
    """Degree operator first, then the Witt part by |degree|, then everything else."""
    unit = algebra.unit

    def rank(x):
        if x.alpha == 0 and x.mono == unit:
            return (0,)
        if x.mono == unit:
            return (1, abs(x.alpha), -x.alpha)
        if x.alpha == 0:
            return (2,)
        return (3,)

    return sorted(domain, key=lambda x: (rank(x), x))


def _row_coeffs(algebra, x: BasisIndex, columns: Iterable) -> dict:
    """Equations ``(x . v)[key] = ...`` restricted to ``columns``, keyed by output key."""
    rows: dict = {}
    for col in columns:
        p, q = col
        for w, c in bracket_basis(algebra, x, p):
            row = rows.setdefault((w, q), {})
            row[col] = row.get(col, 0) + c
        for w, c in bracket_basis(algebra, x, q):
            row = rows.setdefault((p, w), {})
            row[col] = row.get(col, 0) + c
    return rows


def inner_solve(D: DerivationTable, tensor_window: Iterable = None, window: Window = None) -> Tensor2:
    """Find ``v`` supported on ``tensor_window`` with ``x . v = D(x)`` for all ``x`` in the domain.

    ``tensor_window`` is a list of key pairs; by default all pairs of basis symbols of
    ``window`` (itself defaulting to the smallest window containing the domain).
    Free variables are set to zero.  Raises :class:`InconsistentSystem` with a
    certificate over equations labelled ``(x, output key)``.

    Equations are added block by block (blocks = total Gamma-degree and total
    exponent of the unknowns).  Once a block has full column rank its remaining
    equations are not eliminated; they are checked afterwards by comparing the
    coboundary of the solution with ``D`` entry by entry.
    """
    algebra = D.algebra
    if tensor_window is None:
        window = window or window_of(D.domain, algebra)
        tensor_window = tensor_window_keys(window, window, algebra)
    by_block = _partition(algebra, tuple(tensor_window))
    systems = {b: Echelon(cols) for b, cols in by_block.items()}
    open_blocks = set(systems)

    for x in _solve_order(D.domain, algebra):
        if not open_blocks:
            break
        value = D[x]
        # x . (unknowns of block b) only reaches output keys that belong to block b
        for b in sorted(open_blocks):
            system = systems[b]
            for key, row in _row_coeffs(algebra, x, by_block[b]).items():
                coeffs = {k: c for k, c in row.items() if c}
                rhs = value.coefficient(key)
                if coeffs or rhs:
                    system.add(Equation(coeffs, rhs, (x, key)))
        open_blocks = {b for b in open_blocks if not systems[b].saturated}

    solution: dict = {}
    for b in sorted(systems):
        solution.update(systems[b].solution())
    v = Tensor2(algebra, solution)

    for x in D.domain:
        diff = D[x] - act2(_basis_element(algebra, x), v)
        if diff:
            key = next(iter(diff.keys()))
            b = _block(algebra, key, x)
            cols = by_block.get(b, [])
            coeffs = {k: c for k, c in _row_coeffs(algebra, x, cols).get(key, {}).items() if c}
            failing = Equation(coeffs, D[x].coefficient(key), (x, key))
            system = systems.get(b) or Echelon([])
            raise InconsistentSystem(system.certificate([failing]))
    return v


def window_of(domain: Sequence[BasisIndex], algebra) -> Window:
    """Smallest symmetric window (as a set of degrees) containing ``domain``."""
    gammas = {Fraction(0)}
    exp_bound = 0
    for x in domain:
        gammas.update((x.alpha, -x.alpha))
        if isinstance(x.mono, tuple) and x.mono:
            exp_bound = max(exp_bound, max(abs(e) for e in x.mono))
    return Window(tuple(gammas), exp_bound)


def certificate_json(exc: InconsistentSystem) -> dict:
    from .serialize import basis_to_json, format_scalar

    cert = exc.certificate
    equations = []
    for idx, m in cert.multipliers.items():
        eq = cert.equations[idx]
        x, key = eq.label
        equations.append(
            {
                "multiplier": format_scalar(m),
                "at": basis_to_json(x),
                "output": [basis_to_json(u) for u in key],
                "coefficients": [
                    {"unknown": [basis_to_json(u) for u in col], "coeff": format_scalar(c)}
                    for col, c in sorted(eq.coeffs.items())
                ],
                "rhs": format_scalar(Fraction(eq.rhs)),
            }
        )
    return {"inconsistent": True, "combined_rhs": format_scalar(cert.rhs), "equations": equations}


# ---------------------------------------------------------------------------
# grading lemmas
# ---------------------------------------------------------------------------


@dataclass
class DegreeZeroReport:
    applicable: bool
    violations: list
    detail: str

    @property
    def passed(self) -> bool:
        return self.applicable and not self.violations


def degree_zero_check(D: DerivationTable) -> DegreeZeroReport:
    """If ``D(L_0) = 0`` then every ``D(L_alpha m)`` must lie in degree ``alpha``."""
    algebra = D.algebra
    l00 = BasisIndex(Fraction(0), algebra.unit)
    if l00 not in D:
        raise ValueError("degree-zero check needs L_0 (unit mono) in the domain")
    if D[l00]:
        return DegreeZeroReport(False, [], "D(L_0) != 0; check not applicable")
    violations = [
        x for x in D.domain if D[x] != tensor_gamma_component(D[x], x.alpha)
    ]
    return DegreeZeroReport(True, violations, "ok" if not violations else "off-degree values")


def grading_split(D: DerivationTable) -> dict:
    """Split ``D`` into homogeneous pieces ``D_d`` with ``D_d(L_alpha) in V_{alpha + d}``."""
    degrees = set()
    for x in D.domain:
        degrees.update(key_degree(k) - x.alpha for k in D[x].keys())
    zero = Tensor2.zero(D.algebra)
    out = {}
    for d in sorted(degrees):
        values = {}
        for x in D.domain:
            values[x] = tensor_gamma_component(D[x], x.alpha + d) if D[x] else zero
        out[d] = DerivationTable(D.algebra, values, D.domain)
    return out


# ---------------------------------------------------------------------------
# witness searches
# ---------------------------------------------------------------------------


@dataclass
class WitnessSearch:
    """Outcome of a witness search.

    ``status`` is ``"trivial"`` (input already skew / zero, no witness needed),
    ``"found"`` or ``"exhausted"`` (no witness inside the window; inconclusive).
    """

    status: str
    witness: Optional[Element] = None
    tried: int = 0
    detail: dict = field(default_factory=dict)


def skew_candidates(window: Window, algebra) -> list:
    """``L_0 m`` for every window mono, then ``L_beta * 1`` for every nonzero window degree.

    Smallest first: monos by total absolute exponent, degrees by ``|beta|`` with the
    positive one before the negative one.
    """
    zero = Fraction(0)

    def size(m):
        return (sum(abs(e) for e in m), m) if isinstance(m, tuple) else (m != algebra.unit, m)

    monos = sorted(algebra.basis(window.exp_bound), key=size)
    cands = [BasisIndex(zero, m) for m in monos]
    degrees = sorted((g for g in window.gammas if g != 0), key=lambda g: (abs(g), -g))
    cands += [BasisIndex(g, algebra.unit) for g in degrees]
    return cands


def skewness_witness(r: Tensor2, window: Window) -> WitnessSearch:
    """Find ``a`` with ``(1 + tau)(a . r) != 0``; none exists when ``r`` is skew."""
    if (r + twist(r)).is_zero():
        return WitnessSearch("trivial")
    algebra = r.algebra
    tried = 0
    for idx in skew_candidates(window, algebra):
        tried += 1
        a = _basis_element(algebra, idx)
        image = act2(a, r)
        if not (image + twist(image)).is_zero():
            return WitnessSearch("found", a, tried)
    return WitnessSearch("exhausted", None, tried)


def _lex_key(key: tuple) -> tuple:
    return tuple(u.alpha for u in key)


def annihilator_witness(c: Tensor3, window: Window) -> WitnessSearch:
    """Find ``L_delta`` with ``L_delta . c != 0`` via the maximal-term argument.

    Let ``(a0, b0, g0)`` be the lexicographically largest degree triple in the
    support.  For ``delta > 0``, ``delta != a0`` the largest triple of
    ``L_delta . c`` is ``(a0 + delta, b0, g0)`` with coefficient ``(a0 - delta)``
    times the original, so positive ``delta`` are tried first.
    """
    if c.is_zero():
        return WitnessSearch("trivial")
    algebra = c.algebra
    top = max(_lex_key(k) for k in c.keys())
    a0 = top[0]
    deltas = [g for g in window.gammas if g > 0 and g != a0]
    deltas += sorted((g for g in window.gammas if g < 0 and g != a0), reverse=True)
    tried = 0
    for delta in deltas:
        tried += 1
        a = _basis_element(algebra, BasisIndex(delta, algebra.unit))
        image = act3(a, c)
        if image:
            new_top = max(_lex_key(k) for k in image.keys())
            predicted = (a0 + delta,) + top[1:]
            detail = {"max_degree": top, "image_max_degree": new_top,
                      "max_term_as_predicted": delta < 0 or new_top == predicted}
            return WitnessSearch("found", a, tried, detail)
    return WitnessSearch("exhausted", None, tried, {"max_degree": top})
