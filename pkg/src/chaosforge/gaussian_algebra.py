"""Exact algebra for polynomials of independent Gaussian or Gamma coordinates.

This module is the measuring stick for everything downstream: a sparse
multivariate polynomial type with exact arithmetic, probabilists' Hermite
and generalized Laguerre evaluations, and closed-form expectations

    E[Z^p] = (p-1)!!            for Z standard Gaussian, p even (0 if odd),
    E[x^p] = a (a+1) ... (a+p-1) for x ~ Gamma(shape a, scale 1),

applied coordinatewise across independent coordinates.  The chaos and
Dirichlet machinery is always checked against moments computed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

#: Hard cap on the total degree produced by polynomial multiplication.
DEGREE_CAP = 32


class GaussianPolynomial:
    """Sparse polynomial in ``d`` independent scalar coordinates.

    Terms map an exponent multi-index (length-``d`` tuple of nonnegative
    ints) to a float coefficient; zero coefficients are never stored.
    Coordinate labels run 1..d so they line up with tensor index labels.

    The class is also used as the plain monomial form for Gamma-distributed
    coordinates; only the expectation functionals below care about the law.
    """

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: dict[tuple[int, ...], float] | None = None):
        if d < 0:
            raise ValueError(f"dimension must be nonnegative, got {d}")
        self.d = d
        clean: dict[tuple[int, ...], float] = {}
        for exps, coef in (terms or {}).items():
            if len(exps) != d:
                raise ValueError(f"exponent tuple {exps} has length != d={d}")
            if any((not isinstance(e, int)) or e < 0 for e in exps):
                raise ValueError(f"exponents must be nonnegative ints, got {exps}")
            c = float(coef)
            if c != 0.0:
                clean[tuple(exps)] = clean.get(tuple(exps), 0.0) + c
        self.terms = {k: v for k, v in clean.items() if v != 0.0}

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, d: int) -> GaussianPolynomial:
        return cls(d, {})

    @classmethod
    def constant(cls, d: int, value: float) -> GaussianPolynomial:
        return cls(d, {(0,) * d: float(value)})

    @classmethod
    def coordinate(cls, d: int, i: int) -> GaussianPolynomial:
        """The coordinate x_i, with 1-based label i."""
        if not 1 <= i <= d:
            raise ValueError(f"coordinate label {i} outside 1..{d}")
        exps = [0] * d
        exps[i - 1] = 1
        return cls(d, {tuple(exps): 1.0})

    # -- structure ------------------------------------------------------

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def coefficient(self, exps: tuple[int, ...]) -> float:
        return self.terms.get(tuple(exps), 0.0)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GaussianPolynomial)
            and self.d == other.d
            and self.terms == other.terms
        )

    def __hash__(self):  # mutable dict inside; by-value hashing is a trap
        raise TypeError("GaussianPolynomial is not hashable")

    def __repr__(self) -> str:
        n = len(self.terms)
        return f"GaussianPolynomial(d={self.d}, terms={n}, degree={self.degree()})"

    def allclose(self, other: GaussianPolynomial, tol: float = 1e-10) -> bool:
        """Coefficient-wise comparison with absolute tolerance."""
        if self.d != other.d:
            return False
        keys = set(self.terms) | set(other.terms)
        return all(
            abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) <= tol for k in keys
        )

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: GaussianPolynomial | float) -> GaussianPolynomial:
        if isinstance(other, (int, float)):
            other = GaussianPolynomial.constant(self.d, other)
        if self.d != other.d:
            raise ValueError("dimension mismatch in polynomial addition")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0.0) + v
        return GaussianPolynomial(self.d, out)

    __radd__ = __add__

    def __neg__(self) -> GaussianPolynomial:
        return GaussianPolynomial(self.d, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: GaussianPolynomial | float) -> GaussianPolynomial:
        if isinstance(other, (int, float)):
            other = GaussianPolynomial.constant(self.d, other)
        return self + (-other)

    def __rsub__(self, other: float) -> GaussianPolynomial:
        return (-self) + other

    def __mul__(self, other: GaussianPolynomial | float) -> GaussianPolynomial:
        if isinstance(other, (int, float)):
            return GaussianPolynomial(
                self.d, {k: v * float(other) for k, v in self.terms.items()}
            )
        if self.d != other.d:
            raise ValueError("dimension mismatch in polynomial product")
        da, db = self.degree(), other.degree()
        if da >= 0 and db >= 0 and da + db > DEGREE_CAP:
            raise ValueError(
                f"product degree {da + db} exceeds cap {DEGREE_CAP}"
            )
        return GaussianPolynomial(self.d, kernels.mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> GaussianPolynomial:
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"polynomial power must be a nonnegative int, got {n}")
        out = GaussianPolynomial.constant(self.d, 1.0)
        base = self
        e = n
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def diff(self, i: int) -> GaussianPolynomial:
        """Partial derivative with respect to coordinate x_i (1-based)."""
        if not 1 <= i <= self.d:
            raise ValueError(f"coordinate label {i} outside 1..{self.d}")
        j = i - 1
        out: dict[tuple[int, ...], float] = {}
        for exps, coef in self.terms.items():
            e = exps[j]
            if e == 0:
                continue
            key = exps[:j] + (e - 1,) + exps[j + 1 :]
            out[key] = out.get(key, 0.0) + coef * e
        return GaussianPolynomial(self.d, out)

    def eval(self, x: np.ndarray) -> np.ndarray:
        """Evaluate at points: x has shape (n, d) (or (d,)), returns (n,)."""
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        if pts.shape[1] != self.d:
            raise ValueError(f"points have {pts.shape[1]} coordinates, need {self.d}")
        out = np.zeros(pts.shape[0])
        for exps, coef in self.terms.items():
            mono = np.full(pts.shape[0], coef)
            for j, e in enumerate(exps):
                if e:
                    mono *= pts[:, j] ** e
            out += mono
        return out


# -- Hermite (probabilists' convention) ----------------------------------


def hermite_eval(order: int, x):
    """Evaluate the probabilists' Hermite polynomial H_order at x.

    Uses H_0 = 1, H_1 = x, H_{k+1} = x H_k - k H_{k-1}; leading
    coefficient 1, orthogonal under the standard Gaussian with
    E[H_j H_k] = delta_{jk} k!.
    """
    if order < 0:
        raise ValueError(f"Hermite order must be nonnegative, got {order}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if order == 0:
        return prev if prev.shape else float(prev)
    cur = x.copy()
    for k in range(1, order):
        prev, cur = cur, x * cur - k * prev
    return cur if cur.shape else float(cur)


def hermite_rows(max_order: int) -> list[list[int]]:
    """Integer coefficient rows: rows[k][i] is the x^i coefficient of H_k."""
    if max_order < 0:
        raise ValueError("max_order must be nonnegative")
    rows: list[list[int]] = [[1]]
    if max_order == 0:
        return rows
    rows.append([0, 1])
    for k in range(1, max_order):
        xhk = [0] + rows[k]
        khm = [k * c for c in rows[k - 1]] + [0, 0]
        rows.append([a - b for a, b in zip(xhk, khm[: k + 2])])
    return rows


def monomial_hermite_rows(max_order: int) -> list[list[float]]:
    """Connection rows: x^p = sum_m rows[p][m] H_m(x).

    Computed by exact integer back-substitution against hermite_rows, so
    the floats are exact images of integers for the orders used here.
    """
    hrows = hermite_rows(max_order)
    out: list[list[float]] = []
    for p in range(max_order + 1):
        residual = [0] * (p + 1)
        residual[p] = 1
        coeffs = [0] * (p + 1)
        for m in range(p, -1, -1):
            c = residual[m]  # H_m is monic, so the x^m coefficient is c
            coeffs[m] = c
            if c:
                for i, hc in enumerate(hrows[m]):
                    residual[i] -= c * hc
        if any(residual):
            raise AssertionError("Hermite back-substitution failed")
        out.append([float(c) for c in coeffs])
    return out


@dataclass(frozen=True)
class HermiteTable:
    """Triangular integer coefficient table for H_0 .. H_max_order."""

    max_order: int
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, max_order: int) -> HermiteTable:
        return cls(max_order, tuple(tuple(r) for r in hermite_rows(max_order)))

    def polynomial(self, order: int, d: int, i: int) -> GaussianPolynomial:
        """H_order(x_i) as a polynomial in d coordinates (1-based label i)."""
        if order > self.max_order:
            raise ValueError(f"order {order} beyond table max {self.max_order}")
        terms: dict[tuple[int, ...], float] = {}
        for p, c in enumerate(self.rows[order]):
            if c:
                exps = [0] * d
                exps[i - 1] = p
                terms[tuple(exps)] = float(c)
        return GaussianPolynomial(d, terms)


# -- generalized Laguerre -------------------------------------------------


def laguerre_eval(order: int, nu: float, x):
    """Evaluate the generalized Laguerre polynomial L_order^(nu) at x.

    Convention: L_0 = 1, L_1 = 1 + nu - x, and
    (n+1) L_{n+1} = (2n + 1 + nu - x) L_n - (n + nu) L_{n-1};
    orthogonal under the Gamma(nu+1, 1) law.  Requires nu > -1.
    """
    if order < 0:
        raise ValueError(f"Laguerre order must be nonnegative, got {order}")
    if nu <= -1.0:
        raise ValueError(f"Laguerre parameter must satisfy nu > -1, got {nu}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if order == 0:
        return prev if prev.shape else float(prev)
    cur = 1.0 + nu - x
    for n in range(1, order):
        prev, cur = cur, ((2 * n + 1 + nu - x) * cur - (n + nu) * prev) / (n + 1)
    return cur if cur.shape else float(cur)


def laguerre_rows(max_order: int, nu: float) -> list[list[float]]:
    """Coefficient rows: rows[n][i] is the x^i coefficient of L_n^(nu).

    From the Rodrigues expansion, the x^i coefficient of L_n^(nu) is
    (-1)^i / (i! (n-i)!) * prod_{t=i+1..n} (nu + t).
    """
    if nu <= -1.0:
        raise ValueError(f"Laguerre parameter must satisfy nu > -1, got {nu}")
    rows: list[list[float]] = []
    for n in range(max_order + 1):
        row = []
        for i in range(n + 1):
            c = (-1.0) ** i / (math.factorial(i) * math.factorial(n - i))
            for t in range(i + 1, n + 1):
                c *= nu + t
            row.append(c)
        rows.append(row)
    return rows


@dataclass(frozen=True)
class LaguerreTable:
    """Coefficient table for L_0^(nu) .. L_max_order^(nu)."""

    max_order: int
    nu: float
    rows: tuple[tuple[float, ...], ...]

    @classmethod
    def build(cls, max_order: int, nu: float) -> LaguerreTable:
        return cls(max_order, nu, tuple(tuple(r) for r in laguerre_rows(max_order, nu)))

    def polynomial(self, order: int, d: int, i: int) -> GaussianPolynomial:
        """L_order^(nu)(x_i) as a polynomial in d coordinates (1-based i)."""
        if order > self.max_order:
            raise ValueError(f"order {order} beyond table max {self.max_order}")
        terms: dict[tuple[int, ...], float] = {}
        for p, c in enumerate(self.rows[order]):
            if c:
                exps = [0] * d
                exps[i - 1] = p
                terms[tuple(exps)] = float(c)
        return GaussianPolynomial(d, terms)


# -- expectation functionals ----------------------------------------------


def gaussian_expectation(poly: GaussianPolynomial) -> float:
    """E[P(Z_1, ..., Z_d)] for independent standard Gaussian coordinates."""
    return kernels.expectation_gaussian(poly.terms)


def gamma_expectation(poly: GaussianPolynomial, shape: float) -> float:
    """E[P(x_1, ..., x_d)] for independent Gamma(shape, 1) coordinates."""
    return kernels.expectation_gamma(poly.terms, shape)
