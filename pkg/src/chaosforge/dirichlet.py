"""Dirichlet structures with discrete spectra: abstract interface plus the
Wiener (Ornstein-Uhlenbeck) and Laguerre instantiations.

A structure packages a probability law, a generator L diagonalizable with
spectrum 0 = lambda_0 < lambda_1 < ..., and the squared-field operator
Gamma[X, Y] = (L(XY) - X LY - Y LX) / 2, subject to the integration by
parts identity E[Gamma[X, Y]] = -E[X LY].

The Laguerre structure on (0, inf)^d under independent Gamma(nu+1, 1)
coordinates has generator

    L phi = sum_i [ x_i d^2phi/dx_i^2 + (nu + 1 - x_i) dphi/dx_i ]

with eigenfunctions the products of generalized Laguerre polynomials,
eigenvalue minus the total degree, and closed-form squared field
Gamma[X, Y] = sum_i x_i (dX/dx_i)(dY/dx_i).  Both Gamma routes are
computed and compared on every call.
"""

from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .gaussian_algebra import (
    GaussianPolynomial,
    gamma_expectation,
    laguerre_rows,
)
from .malliavin import carre_du_champ as wiener_carre_du_champ
from .malliavin import ou_generator
from .symmetric_tensor import SymmetricKernel
from .wiener_chaos import ChaosElement, chaos_product


def monomial_laguerre_rows(max_order: int, nu: float) -> list[list[float]]:
    """Connection rows: x^p = sum_n rows[p][n] L_n^(nu)(x)."""
    lrows = laguerre_rows(max_order, nu)
    out: list[list[float]] = []
    for p in range(max_order + 1):
        residual = [0.0] * (p + 1)
        residual[p] = 1.0
        coeffs = [0.0] * (p + 1)
        for m in range(p, -1, -1):
            c = residual[m] / lrows[m][m]
            coeffs[m] = c
            if c != 0.0:
                for i, lc in enumerate(lrows[m]):
                    residual[i] -= c * lc
        out.append(coeffs)
    return out


class LaguerreElement:
    """Element of the Laguerre structure in the product eigenbasis.

    Stored as {(n_1, ..., n_d): coefficient} for the basis functions
    prod_j L_{n_j}^(nu)(x_j); the generator acts diagonally on this
    basis with eigenvalue -(n_1 + ... + n_d).
    """

    __slots__ = ("d", "nu", "coeffs")

    def __init__(self, d: int, nu: float, coeffs: dict[tuple[int, ...], float] | None = None):
        if d < 1:
            raise ValueError(f"dimension must be >= 1, got {d}")
        if nu <= -1.0:
            raise ValueError(f"need nu > -1, got {nu}")
        self.d = d
        self.nu = float(nu)
        clean: dict[tuple[int, ...], float] = {}
        for orders, coef in (coeffs or {}).items():
            orders = tuple(orders)
            if len(orders) != d or any((not isinstance(n, int)) or n < 0 for n in orders):
                raise ValueError(f"bad basis multi-order {orders}")
            c = float(coef)
            if c != 0.0:
                clean[orders] = clean.get(orders, 0.0) + c
        self.coeffs = {k: v for k, v in clean.items() if v != 0.0}

    def __repr__(self) -> str:
        return (
            f"LaguerreElement(d={self.d}, nu={self.nu}, "
            f"degree={self.degree()}, terms={len(self.coeffs)})"
        )

    def degree(self) -> int:
        return max((sum(o) for o in self.coeffs), default=0)

    def scale(self, c: float) -> LaguerreElement:
        return LaguerreElement(
            self.d, self.nu, {o: c * v for o, v in self.coeffs.items()}
        )

    def add(self, other: LaguerreElement) -> LaguerreElement:
        self._check_compatible(other)
        out = dict(self.coeffs)
        for o, v in other.coeffs.items():
            out[o] = out.get(o, 0.0) + v
        return LaguerreElement(self.d, self.nu, out)

    def _check_compatible(self, other: LaguerreElement):
        if self.d != other.d or self.nu != other.nu:
            raise ValueError("Laguerre elements live on different structures")

    def allclose(self, other: LaguerreElement, tol: float = 1e-10) -> bool:
        self._check_compatible(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return all(
            abs(self.coeffs.get(k, 0.0) - other.coeffs.get(k, 0.0)) <= tol
            for k in keys
        )

    def to_polynomial(self) -> GaussianPolynomial:
        """Monomial expansion (a plain polynomial in the d coordinates)."""
        max_n = max((max(o) for o in self.coeffs), default=0)
        rows = laguerre_rows(max_n, self.nu)
        poly = GaussianPolynomial.zero(self.d)
        for orders, coef in sorted(self.coeffs.items()):
            term = GaussianPolynomial.constant(self.d, coef)
            for j, n in enumerate(orders):
                if n:
                    row = {
                        self._exps(j, p): c for p, c in enumerate(rows[n]) if c != 0.0
                    }
                    term = term * GaussianPolynomial(self.d, row)
            poly = poly + term
        return poly

    def _exps(self, j: int, p: int) -> tuple[int, ...]:
        e = [0] * self.d
        e[j] = p
        return tuple(e)

    @classmethod
    def from_polynomial(cls, P: GaussianPolynomial, nu: float) -> LaguerreElement:
        """Expand a monomial-form polynomial in the Laguerre product basis."""
        deg = max(0, P.degree())
        rows = monomial_laguerre_rows(deg, nu)
        coeffs: dict[tuple[int, ...], float] = {}
        for exps, coef in P.terms.items():
            stack = [((), coef, 0)]
            while stack:
                orders, c, j = stack.pop()
                if j == len(exps):
                    coeffs[orders] = coeffs.get(orders, 0.0) + c
                    continue
                for n, w in enumerate(rows[exps[j]]):
                    if w != 0.0:
                        stack.append((orders + (n,), c * w, j + 1))
        return cls(P.d, nu, coeffs)

    def eval(self, x: np.ndarray) -> np.ndarray:
        return self.to_polynomial().eval(x)


def laguerre_generator(X: LaguerreElement) -> LaguerreElement:
    """Apply L phi = sum_i [x_i phi_ii + (nu + 1 - x_i) phi_i] by exact
    polynomial differentiation of the monomial form."""
    P = X.to_polynomial()
    out = GaussianPolynomial.zero(X.d)
    for i in range(1, X.d + 1):
        xi = GaussianPolynomial.coordinate(X.d, i)
        first = P.diff(i)
        second = first.diff(i)
        out = out + xi * second + (X.nu + 1.0) * first - xi * first
    return LaguerreElement.from_polynomial(out, X.nu)


def laguerre_carre_du_champ(X: LaguerreElement, Y: LaguerreElement) -> LaguerreElement:
    """Gamma[X, Y], by the closed form sum_i x_i (d_i X)(d_i Y).

    Also evaluates the defining route (L(XY) - X LY - Y LX)/2 and raises
    if the two disagree beyond 1e-10 coefficient-wise.
    """
    X._check_compatible(Y)
    P = X.to_polynomial()
    Q = Y.to_polynomial()
    closed = GaussianPolynomial.zero(X.d)
    for i in range(1, X.d + 1):
        xi = GaussianPolynomial.coordinate(X.d, i)
        closed = closed + xi * P.diff(i) * Q.diff(i)
    closed_elem = LaguerreElement.from_polynomial(closed, X.nu)

    product = LaguerreElement.from_polynomial(P * Q, X.nu)
    defining = (
        laguerre_generator(product)
        .add(multiply_laguerre(X, laguerre_generator(Y)).scale(-1.0))
        .add(multiply_laguerre(Y, laguerre_generator(X)).scale(-1.0))
        .scale(0.5)
    )
    if not closed_elem.allclose(defining, tol=1e-10):
        raise AssertionError("squared-field routes disagree beyond 1e-10")
    return closed_elem


def multiply_laguerre(X: LaguerreElement, Y: LaguerreElement) -> LaguerreElement:
    X._check_compatible(Y)
    return LaguerreElement.from_polynomial(
        X.to_polynomial() * Y.to_polynomial(), X.nu
    )


def eigen_project_laguerre(X: LaguerreElement) -> dict[int, LaguerreElement]:
    """Split X into eigencomponents of -L, keyed by total degree."""
    buckets: dict[int, dict[tuple[int, ...], float]] = {}
    for orders, c in X.coeffs.items():
        buckets.setdefault(sum(orders), {})[orders] = c
    return {
        p: LaguerreElement(X.d, X.nu, coeffs) for p, coeffs in sorted(buckets.items())
    }


# -- structures --------------------------------------------------------------


class DirichletStructure(ABC):
    """Law + generator + squared field with a discrete spectrum.

    Elements are structure-specific; the methods here are the complete
    surface the fourth-moment machinery needs.  ``generator`` returns
    L X with spectrum {-lambda_p}, so eigen pairs satisfy
    generator(e) = -lambda e.
    """

    name: str = "dirichlet"

    @abstractmethod
    def expectation(self, X) -> float: ...

    @abstractmethod
    def generator(self, X): ...

    @abstractmethod
    def carre_du_champ(self, X, Y): ...

    @abstractmethod
    def multiply(self, X, Y): ...

    @abstractmethod
    def add(self, X, Y): ...

    @abstractmethod
    def scale(self, X, c: float): ...

    @abstractmethod
    def eigen_components(self, X) -> dict[float, object]:
        """Decompose X into eigencomponents of -L, keyed by eigenvalue."""

    @abstractmethod
    def eigen_basis(self, max_degree: int) -> list[tuple[float, object]]:
        """(eigenvalue, element) pairs spanning the truncated space."""

    def ibp_residual(self, X, Y) -> float:
        """E[Gamma[X, Y]] + E[X L Y]; zero by integration by parts."""
        lhs = self.expectation(self.carre_du_champ(X, Y))
        rhs = self.expectation(self.multiply(X, self.generator(Y)))
        return lhs + rhs


class WienerStructure(DirichletStructure):
    """Chaos elements over R^d under the OU generator."""

    name = "wiener"

    def __init__(self, d: int):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        self.d = d

    def expectation(self, X: ChaosElement) -> float:
        return X.c0

    def generator(self, X: ChaosElement) -> ChaosElement:
        return ou_generator(X)

    def carre_du_champ(self, X: ChaosElement, Y: ChaosElement) -> ChaosElement:
        return wiener_carre_du_champ(X, Y)

    def multiply(self, X: ChaosElement, Y: ChaosElement) -> ChaosElement:
        return chaos_product(X, Y)

    def add(self, X: ChaosElement, Y: ChaosElement) -> ChaosElement:
        return X.add(Y)

    def scale(self, X: ChaosElement, c: float) -> ChaosElement:
        return X.scale(c)

    def eigen_components(self, X: ChaosElement) -> dict[float, ChaosElement]:
        out: dict[float, ChaosElement] = {}
        if X.c0 != 0.0:
            out[0.0] = ChaosElement.constant(X.d, X.c0)
        for k in sorted(X.kernels):
            out[float(k)] = ChaosElement(X.d, 0.0, {k: X.kernels[k]})
        return out

    def eigen_basis(self, max_degree: int) -> list[tuple[float, ChaosElement]]:
        basis: list[tuple[float, ChaosElement]] = [
            (0.0, ChaosElement.constant(self.d, 1.0))
        ]
        for k in range(1, max_degree + 1):
            for alpha in itertools.combinations_with_replacement(
                range(1, self.d + 1), k
            ):
                kern = SymmetricKernel(self.d, k, {alpha: 1.0})
                basis.append((float(k), ChaosElement(self.d, 0.0, {k: kern})))
        return basis


class LaguerreStructure(DirichletStructure):
    """Laguerre elements on (0, inf)^d under Gamma(nu+1, 1) coordinates."""

    name = "laguerre"

    def __init__(self, d: int, nu: float):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        if nu <= -1.0:
            raise ValueError(f"need nu > -1, got {nu}")
        self.d = d
        self.nu = float(nu)

    def element(self, coeffs: dict[tuple[int, ...], float]) -> LaguerreElement:
        return LaguerreElement(self.d, self.nu, coeffs)

    def expectation(self, X: LaguerreElement) -> float:
        return gamma_expectation(X.to_polynomial(), self.nu + 1.0)

    def generator(self, X: LaguerreElement) -> LaguerreElement:
        return laguerre_generator(X)

    def carre_du_champ(self, X: LaguerreElement, Y: LaguerreElement) -> LaguerreElement:
        return laguerre_carre_du_champ(X, Y)

    def multiply(self, X: LaguerreElement, Y: LaguerreElement) -> LaguerreElement:
        return multiply_laguerre(X, Y)

    def add(self, X: LaguerreElement, Y: LaguerreElement) -> LaguerreElement:
        return X.add(Y)

    def scale(self, X: LaguerreElement, c: float) -> LaguerreElement:
        return X.scale(c)

    def eigen_components(self, X: LaguerreElement) -> dict[float, LaguerreElement]:
        return {float(p): comp for p, comp in eigen_project_laguerre(X).items()}

    def eigen_basis(self, max_degree: int) -> list[tuple[float, LaguerreElement]]:
        basis: list[tuple[float, LaguerreElement]] = []
        for total in range(max_degree + 1):
            for orders in itertools.product(range(total + 1), repeat=self.d):
                if sum(orders) == total:
                    basis.append(
                        (float(total), self.element({tuple(orders): 1.0}))
                    )
        return basis


# -- spectral certificates ----------------------------------------------------


@dataclass(frozen=True)
class SpectralCertificate:
    """Checked evidence that a structure is diagonalizable on the truncated
    space and that X^2 stays inside the eigenspaces up to twice X's level."""

    structure: str
    eigenvalue: float
    spectrum: tuple[float, ...]
    basis_size: int
    max_basis_residual: float
    x_residual: float
    h2_support: tuple[float, ...]
    h2_leak: float
    ok: bool


def verify_h1_h2(
    structure: DirichletStructure,
    X,
    eigenvalue: float,
    *,
    max_degree: int = 3,
    tol: float = 1e-9,
) -> SpectralCertificate:
    """Certify the two spectral hypotheses behind the fourth-moment bound.

    First, every element of the truncated eigen_basis satisfies
    L e = -lambda e (L^2 residual below tol), exhibiting the spectrum.
    Second, the eigen-decomposition of X^2 is supported on eigenvalues
    <= 2 * eigenvalue; any mass above that level is reported as leak.
    """
    lam = float(eigenvalue)
    basis = structure.eigen_basis(max_degree)
    max_resid = 0.0
    spectrum: set[float] = set()
    for mu, e in basis:
        spectrum.add(mu)
        r = structure.add(structure.generator(e), structure.scale(e, mu))
        resid = math.sqrt(max(structure.expectation(structure.multiply(r, r)), 0.0))
        max_resid = max(max_resid, resid)

    rx = structure.add(structure.generator(X), structure.scale(X, lam))
    x_residual = math.sqrt(
        max(structure.expectation(structure.multiply(rx, rx)), 0.0)
    )

    components = structure.eigen_components(structure.multiply(X, X))
    support = []
    leak = 0.0
    for mu, comp in sorted(components.items()):
        mass = structure.expectation(structure.multiply(comp, comp))
        if mass <= tol * tol:
            continue
        support.append(mu)
        if mu > 2.0 * lam + tol:
            leak += mass
    ok = max_resid <= tol and x_residual <= tol and leak == 0.0
    return SpectralCertificate(
        structure=structure.name,
        eigenvalue=lam,
        spectrum=tuple(sorted(spectrum)),
        basis_size=len(basis),
        max_basis_residual=max_resid,
        x_residual=x_residual,
        h2_support=tuple(support),
        h2_leak=leak,
        ok=ok,
    )
