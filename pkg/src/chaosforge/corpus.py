"""Seeded random inputs shared by the test suite and the batch runner.

Every generator takes an explicit ``numpy.random.Generator`` so corpora
are reproducible from a root seed and independent of execution order;
``spawn_rngs`` hands out one child stream per case for parallel sweeps.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np

from .dirichlet import LaguerreElement, LaguerreStructure
from .gaussian_algebra import GaussianPolynomial
from .symmetric_tensor import SymmetricKernel
from .wiener_chaos import ChaosElement, multiple_integral, variance


def rng_from(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent per-case streams; case i's stream does not depend on
    how many other cases run or in what order."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def random_kernel(
    rng: np.random.Generator, d: int, order: int, n_terms: int | None = None
) -> SymmetricKernel:
    """Sparse random symmetric kernel with standard-normal coefficients."""
    support = list(combinations_with_replacement(range(1, d + 1), order))
    if n_terms is None:
        n_terms = int(rng.integers(1, min(len(support), 6) + 1))
    n_terms = min(n_terms, len(support))
    picks = rng.choice(len(support), size=n_terms, replace=False)
    coeffs = {support[i]: float(rng.standard_normal()) for i in sorted(picks)}
    return SymmetricKernel(d, order, coeffs)


def random_element(
    rng: np.random.Generator,
    d: int,
    max_order: int,
    *,
    with_constant: bool = True,
) -> ChaosElement:
    """Random chaos expansion touching a random subset of orders 1..max_order."""
    orders = [k for k in range(1, max_order + 1) if rng.random() < 0.7]
    if not orders:
        orders = [int(rng.integers(1, max_order + 1))]
    kernels = {k: random_kernel(rng, d, k) for k in orders}
    c0 = float(rng.standard_normal()) if with_constant else 0.0
    return ChaosElement(d, c0, kernels)


def unit_variance_element(rng: np.random.Generator, d: int, order: int) -> ChaosElement:
    """Pure order-k element normalized so E F^2 = 1 exactly."""
    while True:
        F = multiple_integral(random_kernel(rng, d, order))
        v = variance(F)
        if v > 1e-12:
            return F.scale(1.0 / np.sqrt(v))


def random_polynomial(
    rng: np.random.Generator, d: int, degree: int, n_terms: int = 6
) -> GaussianPolynomial:
    """Random polynomial with monomial degrees spread over 0..degree."""
    P = GaussianPolynomial.zero(d)
    for _ in range(n_terms):
        k = int(rng.integers(0, degree + 1))
        exps = [0] * d
        for _ in range(k):
            exps[int(rng.integers(0, d))] += 1
        term = GaussianPolynomial(d, {tuple(exps): float(rng.standard_normal())})
        P = P + term
    return P


def kernel_pair_corpus(
    seed: int, count: int, *, d_max: int = 4, order_max: int = 3
) -> list[tuple[SymmetricKernel, SymmetricKernel]]:
    """Pairs of sparse kernels with independent dimensions and orders,
    sharing an ambient dimension so the two elements can be multiplied."""
    pairs = []
    for rng in spawn_rngs(seed, count):
        d = int(rng.integers(1, d_max + 1))
        p = int(rng.integers(1, order_max + 1))
        q = int(rng.integers(1, order_max + 1))
        pairs.append((random_kernel(rng, d, p), random_kernel(rng, d, q)))
    return pairs


def element_pair_corpus(
    seed: int, count: int, *, d_max: int = 4, order_max: int = 3
) -> list[tuple[ChaosElement, ChaosElement]]:
    pairs = []
    for rng in spawn_rngs(seed, count):
        d = int(rng.integers(1, d_max + 1))
        F = random_element(rng, d, int(rng.integers(1, order_max + 1)))
        G = random_element(rng, d, int(rng.integers(1, order_max + 1)))
        pairs.append((F, G))
    return pairs


def random_laguerre_element(
    rng: np.random.Generator,
    structure: LaguerreStructure,
    max_degree: int,
    n_terms: int | None = None,
) -> LaguerreElement:
    """Random element in the span of product Laguerre functions of total
    degree <= max_degree (constant included)."""
    support = [
        orders
        for orders in _multi_orders(structure.d, max_degree)
    ]
    if n_terms is None:
        n_terms = int(rng.integers(1, min(len(support), 6) + 1))
    n_terms = min(n_terms, len(support))
    picks = rng.choice(len(support), size=n_terms, replace=False)
    coeffs = {support[i]: float(rng.standard_normal()) for i in sorted(picks)}
    return structure.element(coeffs)


def random_laguerre_eigenfunction(
    rng: np.random.Generator, structure: LaguerreStructure, degree: int
) -> LaguerreElement:
    """Random eigenfunction of total degree exactly `degree`, normalized
    to unit second moment."""
    if degree < 1:
        raise ValueError(f"eigenfunction degree must be >= 1, got {degree}")
    support = [o for o in _multi_orders(structure.d, degree) if sum(o) == degree]
    coeffs = {o: float(rng.standard_normal()) for o in support}
    X = structure.element(coeffs)
    m2 = structure.expectation(structure.multiply(X, X))
    return X.scale(1.0 / np.sqrt(m2))


def _multi_orders(d: int, max_total: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], remaining: int):
        if len(prefix) == d:
            out.append(prefix)
            return
        for n in range(remaining + 1):
            rec(prefix + (n,), remaining - n)

    rec((), max_total)
    return out
