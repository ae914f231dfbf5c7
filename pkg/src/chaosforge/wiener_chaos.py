"""Finite-dimensional Wiener chaos: multiple integrals and their algebra.

An element is F = c0 + sum_k I_k(f_k) with symmetric kernels f_k on R^d.
Everything reduces to polynomials in d independent standard Gaussians
through the realization

    I_k(f) = sum_alpha f_alpha (k! / prod_j m_j!) prod_j H_{m_j}(x_{i_j})

where alpha runs over sorted index tuples with distinct labels i_j of
multiplicity m_j, and H is the probabilists' Hermite polynomial.  The
product of two elements follows the multiplication formula

    I_p(f) I_q(g) = sum_{r=0}^{p^q} r! C(p,r) C(q,r) I_{p+q-2r}(f (x~)_r g)

and moments follow from the isometry E[I_p(f) I_q(g)] = delta_{pq} p! <f, g>.
Every identity here is cross-checked in the tests against brute-force
Gaussian moments of the polynomial realization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gaussian_algebra import (
    DEGREE_CAP,
    GaussianPolynomial,
    HermiteTable,
    monomial_hermite_rows,
)
from .symmetric_tensor import SymmetricKernel, sym_contract


class ChaosElement:
    """Finite chaos expansion c0 + sum_k I_k(f_k) over R^d."""

    __slots__ = ("d", "c0", "kernels")

    def __init__(
        self,
        d: int,
        c0: float = 0.0,
        kernels: dict[int, SymmetricKernel] | None = None,
    ):
        if d < 1:
            raise ValueError(f"dimension must be >= 1, got {d}")
        self.d = d
        self.c0 = float(c0)
        clean: dict[int, SymmetricKernel] = {}
        for k, f in (kernels or {}).items():
            if k < 1:
                raise ValueError(f"chaos order must be >= 1, got {k}")
            if f.d != d or f.order != k:
                raise ValueError(f"kernel at order {k} has shape ({f.d}, {f.order})")
            if f.coeffs:
                clean[k] = f
        self.kernels = clean

    @classmethod
    def constant(cls, d: int, value: float) -> ChaosElement:
        return cls(d, value, {})

    def max_order(self) -> int:
        return max(self.kernels, default=0)

    def __repr__(self) -> str:
        orders = sorted(self.kernels)
        return f"ChaosElement(d={self.d}, c0={self.c0!r}, orders={orders})"

    def scale(self, c: float) -> ChaosElement:
        c = float(c)
        return ChaosElement(
            self.d, c * self.c0, {k: f.scale(c) for k, f in self.kernels.items()}
        )

    def add(self, other: ChaosElement | float) -> ChaosElement:
        if isinstance(other, (int, float)):
            return ChaosElement(self.d, self.c0 + float(other), dict(self.kernels))
        if self.d != other.d:
            raise ValueError("dimension mismatch in chaos addition")
        kernels = dict(self.kernels)
        for k, f in other.kernels.items():
            kernels[k] = kernels[k].add(f) if k in kernels else f
        return ChaosElement(self.d, self.c0 + other.c0, kernels)

    def sub(self, other: ChaosElement | float) -> ChaosElement:
        if isinstance(other, (int, float)):
            return self.add(-float(other))
        return self.add(other.scale(-1.0))

    def allclose(self, other: ChaosElement, tol: float = 1e-10) -> bool:
        """Coefficient-wise comparison with absolute tolerance."""
        if self.d != other.d or abs(self.c0 - other.c0) > tol:
            return False
        for k in set(self.kernels) | set(other.kernels):
            a = self.kernels.get(k)
            b = other.kernels.get(k)
            keys = (set(a.coeffs) if a else set()) | (set(b.coeffs) if b else set())
            for alpha in keys:
                va = a.coeffs.get(alpha, 0.0) if a else 0.0
                vb = b.coeffs.get(alpha, 0.0) if b else 0.0
                if abs(va - vb) > tol:
                    return False
        return True


def multiple_integral(f: SymmetricKernel) -> ChaosElement:
    """The multiple Wiener integral I_k(f) of a symmetric kernel, k >= 1."""
    if f.order < 1:
        raise ValueError("multiple integral needs order >= 1; use a constant")
    return ChaosElement(f.d, 0.0, {f.order: f})


def to_polynomial(F: ChaosElement) -> GaussianPolynomial:
    """Expand a chaos element into its polynomial realization."""
    max_m = 0
    for f in F.kernels.values():
        for alpha in f.coeffs:
            for _, m in _label_multiplicities(alpha):
                max_m = max(max_m, m)
    table = HermiteTable.build(max_m)
    poly = GaussianPolynomial.constant(F.d, F.c0)
    for k in sorted(F.kernels):
        f = F.kernels[k]
        k_fact = math.factorial(k)
        for alpha, c in sorted(f.coeffs.items()):
            weight = k_fact
            term = GaussianPolynomial.constant(F.d, 1.0)
            for label, m in _label_multiplicities(alpha):
                weight /= math.factorial(m)
                term = term * table.polynomial(m, F.d, label)
            poly = poly + term * (c * weight)
    return poly


def _label_multiplicities(alpha: tuple[int, ...]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for label in alpha:
        if out and out[-1][0] == label:
            out[-1] = (label, out[-1][1] + 1)
        else:
            out.append((label, 1))
    return out


def from_polynomial(P: GaussianPolynomial) -> ChaosElement:
    """Chaos expansion of a polynomial in independent standard Gaussians.

    Inverts the realization by rewriting each monomial coordinatewise in
    the Hermite basis; exact for any polynomial, and a two-sided inverse
    of to_polynomial up to float rounding.
    """
    if P.d < 1:
        raise ValueError("from_polynomial needs at least one coordinate")
    deg = max(0, P.degree())
    rows = monomial_hermite_rows(deg)
    hermite_products: dict[tuple[int, ...], float] = {}
    for exps, coef in P.terms.items():
        choices: list[list[tuple[int, float]]] = []
        for p in exps:
            choices.append([(m, c) for m, c in enumerate(rows[p]) if c != 0.0])
        stack = [((), coef, 0)]
        while stack:
            orders, c, j = stack.pop()
            if j == len(exps):
                hermite_products[orders] = hermite_products.get(orders, 0.0) + c
                continue
            for m, w in choices[j]:
                stack.append((orders + (m,), c * w, j + 1))

    c0 = 0.0
    per_order: dict[int, dict[tuple[int, ...], float]] = {}
    for orders, c in hermite_products.items():
        if c == 0.0:
            continue
        k = sum(orders)
        if k == 0:
            c0 += c
            continue
        alpha: list[int] = []
        weight = math.factorial(k)
        for j, m in enumerate(orders):
            if m:
                alpha.extend([j + 1] * m)
                weight /= math.factorial(m)
        key = tuple(alpha)
        bucket = per_order.setdefault(k, {})
        bucket[key] = bucket.get(key, 0.0) + c / weight
    kernels = {
        k: SymmetricKernel(P.d, k, coeffs) for k, coeffs in per_order.items()
    }
    return ChaosElement(P.d, c0, kernels)


def chaos_product(F: ChaosElement, G: ChaosElement) -> ChaosElement:
    """Product of two chaos elements via the multiplication formula."""
    if F.d != G.d:
        raise ValueError("dimension mismatch in chaos product")
    top = F.max_order() + G.max_order()
    if top > DEGREE_CAP:
        raise ValueError(f"product order {top} exceeds cap {DEGREE_CAP}")
    out = ChaosElement.constant(F.d, F.c0 * G.c0)
    if G.c0 != 0.0:
        out = out.add(
            ChaosElement(F.d, 0.0, {k: f.scale(G.c0) for k, f in F.kernels.items()})
        )
    if F.c0 != 0.0:
        out = out.add(
            ChaosElement(F.d, 0.0, {k: g.scale(F.c0) for k, g in G.kernels.items()})
        )
    for p in sorted(F.kernels):
        f = F.kernels[p]
        for q in sorted(G.kernels):
            g = G.kernels[q]
            for r in range(0, min(p, q) + 1):
                w = math.factorial(r) * math.comb(p, r) * math.comb(q, r)
                h = sym_contract(f, g, r).scale(w)
                if p + q - 2 * r == 0:
                    out = out.add(h.coeffs.get((), 0.0))
                else:
                    out = out.add(ChaosElement(F.d, 0.0, {p + q - 2 * r: h}))
    return out


def expectation(F: ChaosElement) -> float:
    """E[F]; the chaoses of order >= 1 are centered."""
    return F.c0


def expectation_of_product(F: ChaosElement, G: ChaosElement) -> float:
    """E[F G] by orthogonality of chaoses: c0 c0' + sum_k k! <f_k, g_k>."""
    if F.d != G.d:
        raise ValueError("dimension mismatch")
    total = F.c0 * G.c0
    for k, f in F.kernels.items():
        g = G.kernels.get(k)
        if g is not None:
            total += math.factorial(k) * f.inner(g)
    return total


def second_moment(F: ChaosElement) -> float:
    """E[F^2] = c0^2 + sum_k k! |f_k|^2."""
    return F.c0**2 + sum(
        math.factorial(k) * f.norm_sq() for k, f in F.kernels.items()
    )


def max_abs_coefficient(F: ChaosElement) -> float:
    """Largest |coefficient| across the constant and all kernel entries.

    Zero exactly when F is the zero element, so a difference of two
    expansions measures coefficient-level agreement.
    """
    best = abs(F.c0)
    for f in F.kernels.values():
        for v in f.coeffs.values():
            best = max(best, abs(v))
    return best


def variance(F: ChaosElement) -> float:
    return second_moment(F) - F.c0**2


def moment(F: ChaosElement, p: int) -> float:
    """E[F^p] by balanced power splitting.

    Forms F^floor(p/2) and F^ceil(p/2) with the multiplication formula
    and pairs them through the isometry, so intermediate chaos orders
    stay at ceil(p/2) times the top order of F.
    """
    if p < 1:
        raise ValueError(f"moment order must be >= 1, got {p}")
    if p == 1:
        return F.c0
    q = p // 2
    if (p - q) * F.max_order() > DEGREE_CAP:
        raise ValueError(
            f"moment would need chaos order {(p - q) * F.max_order()} "
            f"above cap {DEGREE_CAP}"
        )
    powers: dict[int, ChaosElement] = {1: F}
    for e in range(2, p - q + 1):
        powers[e] = chaos_product(powers[e - 1], F)
    return expectation_of_product(powers[q], powers[p - q])


# -- sampling --------------------------------------------------------------


@dataclass(frozen=True)
class GaussianSample:
    """One realization of the d underlying coordinates with its seed lineage."""

    x: tuple[float, ...]
    lineage: str

    def __post_init__(self):
        if not all(math.isfinite(v) for v in self.x):
            raise ValueError("Gaussian sample has non-finite entries")


def draw_coordinates(d: int, n: int, seed: int, streams: int = 1) -> np.ndarray:
    """Draw an (n, d) matrix of standard Gaussians from Philox streams.

    The result is a deterministic function of (d, n, seed, streams);
    streams > 1 partitions the rows across spawned substreams so workers
    can fill disjoint blocks independently.
    """
    if n < 0 or d < 1 or streams < 1:
        raise ValueError("need n >= 0, d >= 1, streams >= 1")
    root = np.random.SeedSequence(seed)
    children = root.spawn(streams)
    out = np.empty((n, d))
    block = -(-n // streams)
    for i, child in enumerate(children):
        lo = i * block
        hi = min(n, lo + block)
        if lo >= hi:
            break
        rng = np.random.Generator(np.random.Philox(child))
        out[lo:hi] = rng.standard_normal((hi - lo, d))
    return out


def evaluate(F: ChaosElement, sample: GaussianSample) -> float:
    """Evaluate the polynomial realization at one sample point."""
    return float(to_polynomial(F).eval(np.asarray(sample.x))[0])


def sample(F: ChaosElement, n: int, seed: int, streams: int = 1) -> np.ndarray:
    """n independent draws of F, deterministic in (seed, streams)."""
    pts = draw_coordinates(F.d, n, seed, streams)
    return to_polynomial(F).eval(pts)
