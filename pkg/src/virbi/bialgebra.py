"""Coboundary cobrackets, bialgebra axiom residuals and Yang-Baxter evaluators."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any, Sequence

from .algebra import ConfigError, Element, as_scalar, bracket, bracket_basis
from .tensors import Tensor2, Tensor3, act2, act3, cyclic, is_skew, tensor

RMatrix = Tensor2


def cobracket(r: Tensor2, x: Element) -> Tensor2:
    """``Delta_r(x) = x . r``."""
    return act2(x, r)


def one_tensor_cobracket(r: Tensor2, w: Tensor2) -> Tensor3:
    """``(1 (x) Delta_r)(u (x) v) = u (x) Delta_r(v)``."""
    out: dict = {}
    algebra = w.algebra
    images: dict = {}
    for (u, v), c in w._terms.items():
        image = images.get(v)
        if image is None:
            image = images[v] = act2(Element._raw(algebra, {v: Fraction(1)}), r)
        for (p, q), d in image._terms.items():
            key = (u, p, q)
            out[key] = out.get(key, 0) + c * d
    return Tensor3._raw(algebra, out)


def cojacobi_residual(r: Tensor2, x: Element) -> Tensor3:
    """``(1 + eps + eps^2)(1 (x) Delta_r) Delta_r (x)``."""
    t = one_tensor_cobracket(r, cobracket(r, x))
    e1 = cyclic(t)
    return t + e1 + cyclic(e1)


def compatibility_residual(r: Tensor2, x: Element, y: Element) -> Tensor2:
    """``Delta_r([x, y]) - x . Delta_r(y) + y . Delta_r(x)``."""
    return cobracket(r, bracket(x, y)) - act2(x, cobracket(r, y)) + act2(y, cobracket(r, x))


def cybe_c(r: Tensor2) -> Tensor3:
    """``[r12, r13] + [r12, r23] + [r13, r23]`` evaluated inside L (x) L (x) L.

    For ``r = sum_i a_i (x) b_i`` this is
    ``sum_ij [a_i, a_j] (x) b_i (x) b_j + a_i (x) [b_i, a_j] (x) b_j + a_i (x) a_j (x) [b_i, b_j]``.
    """
    algebra = r.algebra
    terms = list(r._terms.items())
    out: dict = {}

    def put(key, c):
        out[key] = out.get(key, 0) + c

    for (ai, bi), ci in terms:
        for (aj, bj), cj in terms:
            c = ci * cj
            for w, cb in bracket_basis(algebra, ai, aj):
                put((w, bi, bj), c * cb)
            for w, cb in bracket_basis(algebra, bi, aj):
                put((ai, w, bj), c * cb)
            for w, cb in bracket_basis(algebra, bi, bj):
                put((ai, aj, w), c * cb)
    return Tensor3._raw(algebra, out)


def mybe_residual(r: Tensor2, x: Element) -> Tensor3:
    return act3(x, cybe_c(r))


def triangular_r(alpha: Any, mono, algebra) -> Tensor2:
    """``a (x) b - b (x) a`` with ``a = L_0/alpha``, ``b = L_alpha mono``, so ``[a, b] = b``."""
    alpha = as_scalar(alpha)
    if alpha == 0:
        raise ValueError("triangular r-matrix needs a nonzero degree")
    a = Element.basis_element(algebra, 0, algebra.unit, Fraction(1) / alpha)
    b = Element.basis_element(algebra, alpha, mono)
    return tensor(a, b) - tensor(b, a)


@dataclass
class BialgebraReport:
    skew: bool
    cybe_zero: bool
    max_cojacobi_terms: int
    max_compat_terms: int
    sample_size: int
    seed: int
    verdict: str

    def to_json(self) -> dict:
        return asdict(self)


TRIANGULAR_VERDICT = "triangular coboundary bialgebra on sample"


def certify_bialgebra(r: Tensor2, sample: Sequence[Element], seed: int = 0) -> BialgebraReport:
    """Check the coboundary-triangular conditions for ``r`` on an explicit sample.

    Compatibility is tested on the cyclically adjacent pairs ``(x_i, x_{i+1})``.
    """
    sample = list(sample)
    for x in sample:
        if x.algebra != r.algebra:
            raise ConfigError("sample and r-matrix live over different coefficient algebras")
    skew = is_skew(r)
    cybe_zero = cybe_c(r).is_zero()
    max_coj = max((len(cojacobi_residual(r, x)) for x in sample), default=0)
    pairs = zip(sample, sample[1:] + sample[:1])
    max_compat = max((len(compatibility_residual(r, x, y)) for x, y in pairs), default=0)
    failures = []
    if not skew:
        failures.append("r is not skew")
    if not cybe_zero:
        failures.append("c(r) != 0")
    if max_coj:
        failures.append("co-Jacobi fails")
    if max_compat:
        failures.append("compatibility fails")
    verdict = TRIANGULAR_VERDICT if not failures else "not triangular: " + ", ".join(failures)
    return BialgebraReport(skew, cybe_zero, max_coj, max_compat, len(sample), seed, verdict)
