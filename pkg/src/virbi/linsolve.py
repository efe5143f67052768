"""Sparse exact linear systems over Q.

Rows are cleared to integers and eliminated fraction-free (``p*row - q*pivot``
followed by content removal).  When a system turns out inconsistent it is
re-run while tracking, for every reduced row, the integer combination of the
original equations that produced it; the result is a checkable certificate:
``sum(m_k * eq_k)`` has all-zero coefficients and a nonzero right-hand side.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Hashable, Mapping, Sequence


@dataclass(frozen=True)
class Equation:
    coeffs: Mapping[Hashable, Fraction]
    rhs: Fraction
    label: Hashable = None


@dataclass
class Certificate:
    """Multipliers on the original equations that sum to ``0 = rhs`` with ``rhs != 0``."""

    multipliers: dict
    rhs: Fraction
    equations: list

    def combined(self) -> tuple:
        coeffs: dict = {}
        rhs = Fraction(0)
        for idx, m in self.multipliers.items():
            eq = self.equations[idx]
            for col, c in eq.coeffs.items():
                coeffs[col] = coeffs.get(col, 0) + m * c
            rhs += m * eq.rhs
        return {k: v for k, v in coeffs.items() if v}, rhs

    def verify(self) -> bool:
        coeffs, rhs = self.combined()
        return not coeffs and rhs != 0


class InconsistentSystem(ValueError):
    def __init__(self, certificate: Certificate):
        self.certificate = certificate
        super().__init__("linear system is inconsistent")


def _integer_row(coeffs: Mapping, rhs) -> tuple:
    den = 1
    for c in coeffs.values():
        if type(c) is Fraction:
            den = lcm(den, c.denominator)
    if type(rhs) is Fraction:
        den = lcm(den, rhs.denominator)
    if den == 1:
        return {k: int(c) for k, c in coeffs.items() if c}, int(rhs), 1
    return {k: int(c * den) for k, c in coeffs.items() if c}, int(rhs * den), den


def _reduce(row: dict, rhs: int, combo, pivots: dict) -> tuple:
    while True:
        hits = [p for p in row if p in pivots]
        if not hits:
            return row, rhs, combo
        p = min(hits)
        prow, prhs, pcombo = pivots[p]
        a, b = prow[p], row[p]
        g = gcd(a, b)
        fa, fb = a // g, b // g
        new = {k: fa * v for k, v in row.items()}
        for k, v in prow.items():
            new[k] = new.get(k, 0) - fb * v
        row = {k: v for k, v in new.items() if v}
        rhs = fa * rhs - fb * prhs
        g = rhs
        for v in row.values():
            g = gcd(g, v)
        if combo is not None:
            nc = {k: fa * v for k, v in combo.items()}
            for k, v in pcombo.items():
                nc[k] = nc.get(k, 0) - fb * v
            combo = {k: v for k, v in nc.items() if v}
            for v in combo.values():
                g = gcd(g, v)
        if g > 1:
            row = {k: v // g for k, v in row.items()}
            rhs //= g
            if combo is not None:
                combo = {k: v // g for k, v in combo.items()}


def _eliminate(rows: list, track: bool) -> dict:
    pivots: dict = {}
    ncols = len({k for row, _, _ in rows for k in row})
    solution = None
    for idx, (row, rhs, den) in enumerate(rows):
        if solution is not None and not track:
            # full column rank reached: remaining rows only need a substitution check
            num = sum(v * solution[0][k] for k, v in row.items())
            if num != rhs * solution[1]:
                return None
            continue
        combo = {idx: den} if track else None
        row, rhs, combo = _reduce(row, rhs, combo, pivots)
        if not row:
            if rhs:
                if track:
                    return {"inconsistent": (combo, rhs)}
                return None
            continue
        pivots[min(row)] = (row, rhs, combo)
        if len(pivots) == ncols and not track:
            solution = _scaled_solution(pivots)
    return {"pivots": pivots}


def _scaled_solution(pivots: dict) -> tuple:
    """Back substitution; returns integer numerators and a common denominator."""
    values: dict = {}
    for p in sorted(pivots, reverse=True):
        row, rhs, _ = pivots[p]
        acc = Fraction(rhs)
        for k, v in row.items():
            if k != p:
                acc -= v * values.get(k, 0)
        values[p] = acc / row[p]
    den = 1
    for v in values.values():
        den = lcm(den, v.denominator)
    nums = {k: int(v * den) for k, v in values.items()}
    return nums, den


class Echelon:
    """Incremental row echelon form over a fixed, ordered set of columns."""

    def __init__(self, columns: Sequence[Hashable]):
        self.columns = list(columns)
        self.order = {c: i for i, c in enumerate(self.columns)}
        self.equations: list = []
        self.pivots: dict = {}

    @property
    def saturated(self) -> bool:
        return len(self.pivots) == len(self.columns)

    def add(self, eq: Equation) -> None:
        """Add an equation; raises :class:`InconsistentSystem` on contradiction."""
        self.equations.append(eq)
        row, rhs, _ = _integer_row(eq.coeffs, eq.rhs)
        row = {self.order[c]: v for c, v in row.items()}
        row, rhs, _ = _reduce(row, rhs, None, self.pivots)
        if row:
            self.pivots[min(row)] = (row, rhs, None)
        elif rhs:
            raise InconsistentSystem(self.certificate())

    def certificate(self, extra: Sequence[Equation] = ()) -> Certificate:
        """Certificate for the stored equations plus ``extra`` (which must be inconsistent)."""
        equations = self.equations + list(extra)
        order = dict(self.order)
        for eq in equations:
            for c in eq.coeffs:
                order.setdefault(c, len(order))
        rows = []
        for eq in equations:
            row, rhs, den = _integer_row(eq.coeffs, eq.rhs)
            rows.append(({order[c]: v for c, v in row.items()}, rhs, den))
        tracked = _eliminate(rows, track=True)
        if "inconsistent" not in tracked:
            raise ValueError("equations are consistent; no certificate exists")
        combo, rhs = tracked["inconsistent"]
        multipliers = {k: Fraction(v) for k, v in sorted(combo.items())}
        return Certificate(multipliers, Fraction(rhs), equations)

    def solution(self) -> dict:
        if not self.pivots:
            return {}
        nums, den = _scaled_solution(self.pivots)
        return {self.columns[p]: Fraction(v, den) for p, v in nums.items() if v}


def solve(equations: Sequence[Equation], columns: Sequence[Hashable] = None) -> dict:
    """Return one solution (free variables set to 0) or raise :class:`InconsistentSystem`.

    Pivot choice is the first nonzero column in sorted column order, so results are
    reproducible.  ``columns`` fixes that order; default is ``sorted`` of all columns.
    """
    equations = list(equations)
    if columns is None:
        cols = set()
        for eq in equations:
            cols.update(eq.coeffs)
        columns = sorted(cols)
    order = {c: i for i, c in enumerate(columns)}
    rows = []
    for eq in equations:
        row, rhs, den = _integer_row(eq.coeffs, eq.rhs)
        rows.append(({order[c]: v for c, v in row.items()}, rhs, den))

    result = _eliminate(rows, track=False)
    if result is None:
        tracked = _eliminate(rows, track=True)
        combo, rhs = tracked["inconsistent"]
        multipliers = {k: Fraction(v) for k, v in sorted(combo.items())}
        raise InconsistentSystem(Certificate(multipliers, Fraction(rhs), equations))
    nums, den = _scaled_solution(result["pivots"])
    return {columns[p]: Fraction(v, den) for p, v in nums.items() if v}
