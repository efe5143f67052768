"""Randomized property suites, one per acceptance criterion.

Each suite runs over a list of coefficient-algebra backends and returns a JSON-able
report.  Reports contain no timings, so a fixed seed gives byte-identical output
regardless of the number of worker threads.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional

from .algebra import (
    Element,
    LaurentMonomials,
    StructureTable,
    bracket,
    gamma_degree,
    jacobi_residual,
    truncated_polynomials,
)
from .bialgebra import (
    cojacobi_residual,
    compatibility_residual,
    cybe_c,
    mybe_residual,
    triangular_r,
)
from .cohomology import (
    Window,
    annihilator_witness,
    coboundary_of,
    degree_zero_check,
    grading_split,
    inner_solve,
    skew_candidates,
    skewness_witness,
    tensor_window_keys,
)
from .linsolve import InconsistentSystem
from .parser import render
from .sampling import (
    random_basis,
    random_coeff,
    random_element,
    random_mono,
    random_nonskew,
    random_skew,
    random_tensor2,
    random_tensor3,
    trial_rng,
)
from .tensors import (
    Tensor2,
    Tensor3,
    act2,
    act3,
    cyclic,
    is_skew,
    key_degree,
    tensor_gamma_component,
    twist,
)

# Negative fixture for the Drinfeld linkage suite: skew, with c(r) != 0.
NEGATIVE_FIXTURE = "L[1](x)L[-1] - L[-1](x)L[1]"
# Seed label used to draw the random negative fixture.
NEGATIVE_SEED_LABEL = "negative-fixture"


def default_backends() -> list:
    return [LaurentMonomials(0), LaurentMonomials(1), LaurentMonomials(2), truncated_polynomials(3)]


@dataclass
class SuiteConfig:
    backends: list = field(default_factory=default_backends)
    seed: int = 0
    trials: Optional[int] = None
    window: Optional[Window] = None
    threads: int = 1


class Checks:
    """Pass/fail tallies per named check, with the first few failure descriptions."""

    def __init__(self):
        self.counts: dict = {}
        self.failures: list = []

    def record(self, name: str, ok: bool, detail: Callable[[], str] = None) -> None:
        passed, failed = self.counts.get(name, (0, 0))
        if ok:
            self.counts[name] = (passed + 1, failed)
        else:
            self.counts[name] = (passed, failed + 1)
            if len(self.failures) < 5:
                self.failures.append(f"{name}: {detail() if detail else 'failed'}")

    def merge(self, other: "Checks") -> None:
        for name, (p, f) in other.counts.items():
            p0, f0 = self.counts.get(name, (0, 0))
            self.counts[name] = (p0 + p, f0 + f)
        for msg in other.failures:
            if len(self.failures) < 5:
                self.failures.append(msg)

    @property
    def passed(self) -> bool:
        return all(f == 0 for _, f in self.counts.values())

    def to_json(self) -> dict:
        return {
            "checks": {k: {"passed": p, "failed": f} for k, (p, f) in sorted(self.counts.items())},
            "failures": self.failures,
        }


def _run_trials(config: SuiteConfig, n: int, fn: Callable[[int], Checks]) -> Checks:
    total = Checks()
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(fn, range(n)))
    else:
        results = [fn(i) for i in range(n)]
    for r in results:
        total.merge(r)
    return total


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


@dataclass
class Suite:
    name: str
    criterion: int
    description: str
    trials: int
    window: Window
    run: Callable
    backends: Optional[Callable] = None  # filter for the default backend set


SUITES: dict = {}


def suite(name, criterion, description, trials, window, backends=None):
    def deco(fn):
        SUITES[name] = Suite(name, criterion, description, trials, window, fn, backends)
        return fn

    return deco


_W2 = Window.grid(Fraction(1, 2), 2, 2)
_W3 = Window.grid(Fraction(1, 2), 3, 3)


@suite("jacobi", 1, "antisymmetry, Jacobi, grading and canonical form of the bracket", 500, _W2)
def _jacobi(config, algebra, window, n):
    checks = Checks()
    if isinstance(algebra, StructureTable):
        try:
            algebra._check_axioms()
            checks.record("table_axioms_exhaustive", True)
        except ValueError as exc:
            checks.record("table_axioms_exhaustive", False, lambda: str(exc))

    def trial(i):
        rng = trial_rng(config.seed, "jacobi", algebra.name, i)
        c = Checks()
        x, y, z = (random_element(rng, algebra, window) for _ in range(3))
        xy = bracket(x, y)
        c.record("antisymmetry", (xy + bracket(y, x)).is_zero(), lambda: f"{render(x)} | {render(y)}")
        c.record("jacobi", jacobi_residual(x, y, z).is_zero(), lambda: f"{render(x)} | {render(y)} | {render(z)}")
        c.record("canonical_form", all(v != 0 for v in xy.terms.values()))
        u, v = random_basis(rng, algebra, window), random_basis(rng, algebra, window)
        uv = bracket(Element(algebra, {u: 1}), Element(algebra, {v: 1}))
        c.record("grading", gamma_degree(uv) <= {u.alpha + v.alpha})
        return c

    checks.merge(_run_trials(config, n, trial))
    return checks


@suite("involutions", 2, "tau^2 = id, eps^3 = id, equivariance of tau and eps", 500, _W2)
def _involutions(config, algebra, window, n):
    n_eq = max(1, n * 2 // 5)

    def trial(i):
        rng = trial_rng(config.seed, "involutions", algebra.name, i)
        c = Checks()
        w2 = random_tensor2(rng, algebra, window)
        w3 = random_tensor3(rng, algebra, window)
        c.record("tau_squared", twist(twist(w2)) == w2, lambda: render(w2))
        c.record("eps_cubed", cyclic(cyclic(cyclic(w3))) == w3, lambda: render(w3))
        if i < n_eq:
            a = random_element(rng, algebra, window)
            c.record("tau_equivariance", twist(act2(a, w2)) == act2(a, twist(w2)), lambda: render(w2))
            c.record("eps_equivariance", cyclic(act3(a, w3)) == act3(a, cyclic(w3)), lambda: render(w3))
        return c

    return _run_trials(config, n, trial)


@suite("module-law", 3, "[a,b].w = a.(b.w) - b.(a.w) on L(x)L and L(x)L(x)L", 300, _W2)
def _module_law(config, algebra, window, n):
    def trial(i):
        rng = trial_rng(config.seed, "module-law", algebra.name, i)
        c = Checks()
        a, b = random_element(rng, algebra, window), random_element(rng, algebra, window)
        ab = bracket(a, b)
        w2 = random_tensor2(rng, algebra, window)
        w3 = random_tensor3(rng, algebra, window)
        c.record("tensor2", act2(ab, w2) == act2(a, act2(b, w2)) - act2(b, act2(a, w2)))
        c.record("tensor3", act3(ab, w3) == act3(a, act3(b, w3)) - act3(b, act3(a, w3)))
        return c

    return _run_trials(config, n, trial)


@suite("triangular", 4, "triangular r-matrices: skew, CYBE, co-Jacobi and compatibility", 50, _W2)
def _triangular(config, algebra, window, n):
    nonzero = [g for g in window.gammas if g != 0]

    def trial(i):
        rng = trial_rng(config.seed, "triangular", algebra.name, i)
        c = Checks()
        alpha = rng.choice(nonzero)
        mono = random_mono(rng, algebra, window.exp_bound)
        r = triangular_r(alpha, mono, algebra)
        label = lambda: render(r)  # noqa: E731
        c.record("skew", is_skew(r), label)
        c.record("cybe_zero", cybe_c(r).is_zero(), label)
        xs = [random_element(rng, algebra, window) for _ in range(100)]
        ys = [random_element(rng, algebra, window) for _ in range(100)]
        c.record("cojacobi_zero", all(cojacobi_residual(r, x).is_zero() for x in xs), label)
        c.record(
            "compatibility_zero",
            all(compatibility_residual(r, x, y).is_zero() for x, y in zip(xs, ys)),
            label,
        )
        return c

    return _run_trials(config, n, trial)


@suite("derivation", 5, "coboundaries are derivations for arbitrary r", 200, _W2)
def _derivation(config, algebra, window, n):
    def trial(i):
        rng = trial_rng(config.seed, "derivation", algebra.name, i)
        c = Checks()
        r = random_tensor2(rng, algebra, window)
        x, y = random_element(rng, algebra, window), random_element(rng, algebra, window)
        c.record("compatibility_zero", compatibility_residual(r, x, y).is_zero(), lambda: render(r))
        return c

    return _run_trials(config, n, trial)


def negative_fixture(algebra, window, seed: int) -> Tensor2:
    """First random skew ``r`` with ``c(r) != 0`` drawn from the recorded seed label."""
    k = 0
    while True:
        rng = trial_rng(seed, NEGATIVE_SEED_LABEL, algebra.name, k)
        r = random_skew(rng, algebra, window)
        if cybe_c(r):
            return r
        k += 1


@suite("drinfeld", 6, "MYBE and co-Jacobi vanish together on positive and fail on negative fixtures", 100, _W2)
def _drinfeld(config, algebra, window, n):
    from .parser import parse_tensor2

    checks = Checks()
    nonzero = [g for g in window.gammas if g != 0]
    rng = trial_rng(config.seed, "drinfeld-fixtures", algebra.name)
    positives = [
        triangular_r(rng.choice(nonzero), random_mono(rng, algebra, window.exp_bound), algebra)
        for _ in range(3)
    ]
    negatives = [parse_tensor2(NEGATIVE_FIXTURE, algebra), negative_fixture(algebra, window, config.seed)]

    def sample(i):
        return random_element(trial_rng(config.seed, "drinfeld", algebra.name, i), algebra, window)

    xs = [sample(i) for i in range(n)]

    def for_positive(r):
        c = Checks()
        c.record("positive_mybe_zero", all(mybe_residual(r, x).is_zero() for x in xs), lambda: render(r))
        c.record("positive_cojacobi_zero", all(cojacobi_residual(r, x).is_zero() for x in xs), lambda: render(r))
        return c

    def for_negative(r):
        c = Checks()
        c.record("negative_is_skew", is_skew(r), lambda: render(r))
        c.record("negative_cybe_nonzero", not cybe_c(r).is_zero(), lambda: render(r))
        mybe = [mybe_residual(r, x) for x in xs]
        coj = [cojacobi_residual(r, x) for x in xs]
        c.record("negative_mybe_nonzero_somewhere", any(m for m in mybe), lambda: render(r))
        c.record("negative_cojacobi_nonzero_somewhere", any(m for m in coj), lambda: render(r))
        # for skew r the co-Jacobi residual equals x . c(r) exactly
        c.record("skew_cojacobi_equals_mybe", all(a == b for a, b in zip(coj, mybe)), lambda: render(r))
        return c

    fixtures = [(for_positive, r) for r in positives] + [(for_negative, r) for r in negatives]
    checks.merge(_run_trials(config, len(fixtures), lambda i: fixtures[i][0](fixtures[i][1])))
    return checks


@suite("inner", 7, "inner recovery of coboundaries and certificates for mutated tables", 30, _W2,
       backends=lambda a: not (isinstance(a, LaurentMonomials) and a.k > 1))
def _inner(config, algebra, window, n):
    domain = window.basis(algebra)
    tensor_keys = tensor_window_keys(window, window, algebra)

    def trial(i):
        rng = trial_rng(config.seed, "inner", algebra.name, i)
        c = Checks()
        v = random_tensor2(rng, algebra, window)
        D = coboundary_of(v, window)
        try:
            v2 = inner_solve(D, tensor_keys)
            c.record("recovered", coboundary_of(v2, window) == D, lambda: render(v))
        except InconsistentSystem:
            c.record("recovered", False, lambda: f"spurious inconsistency for {render(v)}")
        x = rng.choice(domain)
        key = rng.choice(tensor_keys)
        D2 = D.with_value(x, D[x] + Tensor2(algebra, {key: random_coeff(rng)}))
        try:
            inner_solve(D2, tensor_keys)
            c.record("mutation_certificate", False, lambda: f"mutated entry at {x} accepted")
        except InconsistentSystem as exc:
            c.record("mutation_certificate", exc.certificate.verify())
        return c

    return _run_trials(config, n, trial)


@suite("skew-witness", 8, "non-skew r are caught by a proof test vector; skew r never are", 30, _W2,
       backends=lambda a: isinstance(a, LaurentMonomials))
def _skew_witness(config, algebra, window, n):
    search_window = Window.grid(Fraction(1, 2), 3, 3)
    allowed = set(skew_candidates(search_window, algebra))

    def trial(i):
        rng = trial_rng(config.seed, "skew-witness", algebra.name, i)
        c = Checks()
        r = random_nonskew(rng, algebra, window)
        res = skewness_witness(r, search_window)
        c.record(
            "nonskew_witness_found",
            res.status == "found" and next(iter(res.witness.keys())) in allowed,
            lambda: f"{res.status} for {render(r)}",
        )
        s = random_skew(rng, algebra, window)
        c.record("skew_no_witness", skewness_witness(s, search_window).status == "trivial", lambda: render(s))
        return c

    return _run_trials(config, n, trial)


@suite("annihilator", 9, "nonzero c are moved by some L_delta found by the maximal-term rule", 30, _W2)
def _annihilator(config, algebra, window, n):
    search_window = Window.grid(Fraction(1, 2), 3, 0)

    def trial(i):
        rng = trial_rng(config.seed, "annihilator", algebra.name, i)
        c = Checks()
        t = random_tensor3(rng, algebra, window)
        res = annihilator_witness(t, search_window)
        c.record("witness_found", res.status == "found", lambda: f"{res.status} for {render(t)}")
        c.record("max_term_as_predicted", bool(res.detail.get("max_term_as_predicted")), lambda: render(t))
        c.record("zero_no_witness", annihilator_witness(Tensor3.zero(algebra), search_window).status == "trivial")
        return c

    return _run_trials(config, n, trial)


@suite("grading", 10, "grading_split reassembles D; degree-zero check on degree-0 coboundaries", 20, _W2)
def _grading(config, algebra, window, n):
    small = Window.grid(Fraction(1, 2), 1, 1)

    def trial(i):
        rng = trial_rng(config.seed, "grading", algebra.name, i)
        c = Checks()
        D = coboundary_of(random_tensor2(rng, algebra, window, 4), small)
        parts = grading_split(D)
        total = None
        for d, part in parts.items():
            total = part if total is None else total + part
            rule = all(
                set(key_degree(k) for k in part[x].keys()) <= {x.alpha + d} for x in part.domain
            )
            c.record("component_degree_rule", rule)
        c.record("split_reassembles", (total is None and D.is_zero()) or total == D)
        v0 = Tensor2.zero(algebra)
        while not v0:
            v0 = tensor_gamma_component(random_tensor2(rng, algebra, window, 4), 0)
        rep = degree_zero_check(coboundary_of(v0, small))
        c.record("degree_zero_check", rep.passed, lambda: f"{rep.detail} for {render(v0)}")
        return c

    return _run_trials(config, n, trial)


@suite("determinism", 11, "fixed seed gives byte-identical JSON across runs and thread counts", 2, _W2)
def _determinism(config, algebra, window, n):
    c = Checks()
    names = [s for s in SUITES if s != "determinism"]
    for name in names:
        backend_filter = SUITES[name].backends
        if backend_filter is not None and not backend_filter(algebra):
            continue
        base = replace(config, backends=[algebra], trials=n, threads=1, window=None)
        first = dumps(run_suite(name, base))
        second = dumps(run_suite(name, base))
        threaded = dumps(run_suite(name, replace(base, threads=4)))
        c.record(f"{name}_repeatable", first == second)
        c.record(f"{name}_thread_independent", first == threaded)
    return c


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def run_suite(name: str, config: SuiteConfig = None) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    config = config or SuiteConfig()
    s = SUITES[name]
    n = config.trials if config.trials is not None else s.trials
    window = config.window or s.window
    results = []
    for algebra in config.backends:
        entry = {"backend": algebra.name}
        if s.name == "skew-witness" and not isinstance(algebra, LaurentMonomials):
            entry.update(
                skipped=True,
                passed=True,
                reason=(
                    "coefficient algebra is a finite structure table: A (x) A is not an "
                    "integral domain, so the skewness argument does not apply"
                ),
            )
            results.append(entry)
            continue
        if s.backends is not None and not s.backends(algebra) and config.backends == default_backends():
            entry.update(skipped=True, passed=True, reason="not in this suite's default backend set")
            results.append(entry)
            continue
        checks = s.run(config, algebra, window, n)
        entry.update(checks.to_json())
        entry["passed"] = checks.passed and bool(checks.counts)
        results.append(entry)
    return {
        "suite": s.name,
        "criterion": s.criterion,
        "description": s.description,
        "seed": config.seed,
        "trials": n,
        "window": window.to_json(),
        "results": results,
        "passed": all(r["passed"] for r in results),
    }
