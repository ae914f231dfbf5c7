"""Malliavin operators on finite chaos expansions.

The derivative lowers each chaos order by slicing kernels,

    D_x F = sum_k k I_{k-1}(f_k(., x)),

the Ornstein-Uhlenbeck generator acts as L = sum_k (-k) J_k with
pseudo-inverse L^{-1} = sum_k (-1/k) J_k on centered parts, and the
divergence is implemented only through its defining relation
delta(D G) = -L G, which is why H-valued elements remember the scalar
potential they were differentiated from.  The duality
E[F delta(u)] = E[<D F, u>] is then a checkable residual.
"""

from __future__ import annotations

from dataclasses import dataclass

from .wiener_chaos import (
    ChaosElement,
    chaos_product,
    expectation_of_product,
)


@dataclass(frozen=True)
class HValuedChaos:
    """An R^d-valued chaos element, one scalar component per direction.

    ``potential`` tracks a scalar G with D G equal to this element when
    the element was produced by differentiation (possibly combined
    linearly); the divergence is only defined for such elements.
    """

    d: int
    components: tuple[ChaosElement, ...]
    potential: ChaosElement | None = None

    def __post_init__(self):
        if len(self.components) != self.d:
            raise ValueError("need exactly one component per direction")
        for comp in self.components:
            if comp.d != self.d:
                raise ValueError("component dimension mismatch")

    def scale(self, c: float) -> HValuedChaos:
        pot = self.potential.scale(c) if self.potential is not None else None
        return HValuedChaos(
            self.d, tuple(comp.scale(c) for comp in self.components), pot
        )

    def add(self, other: HValuedChaos) -> HValuedChaos:
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        pot = None
        if self.potential is not None and other.potential is not None:
            pot = self.potential.add(other.potential)
        comps = tuple(a.add(b) for a, b in zip(self.components, other.components))
        return HValuedChaos(self.d, comps, pot)


def derivative(F: ChaosElement) -> HValuedChaos:
    """Malliavin derivative D F, componentwise in the d directions."""
    comps = []
    for x in range(1, F.d + 1):
        c0 = 0.0
        kernels = {}
        for k, f in F.kernels.items():
            sliced = f.slice_index(x)
            if not sliced.coeffs:
                continue
            if k == 1:
                c0 += k * sliced.coeffs.get((), 0.0)
            else:
                kernels[k - 1] = sliced.scale(float(k))
        comps.append(ChaosElement(F.d, c0, kernels))
    return HValuedChaos(F.d, tuple(comps), potential=F)


def ou_generator(F: ChaosElement) -> ChaosElement:
    """L F = sum_k (-k) I_k(f_k); constants are annihilated."""
    return ChaosElement(
        F.d, 0.0, {k: f.scale(-float(k)) for k, f in F.kernels.items()}
    )


def ou_pseudo_inverse(F: ChaosElement) -> ChaosElement:
    """L^{-1} F = sum_k (-1/k) I_k(f_k), dropping the mean."""
    return ChaosElement(
        F.d, 0.0, {k: f.scale(-1.0 / k) for k, f in F.kernels.items()}
    )


def divergence(u: HValuedChaos) -> ChaosElement:
    """delta(u) for u in the range of D, through delta(D G) = -L G."""
    if u.potential is None:
        raise ValueError(
            "divergence is only implemented for elements of the form D G "
            "(with linear combinations); this element has no recorded potential"
        )
    return ou_generator(u.potential).scale(-1.0)


def carre_du_champ(F: ChaosElement, G: ChaosElement) -> ChaosElement:
    """The squared-field operator <D F, D G> as a chaos element."""
    if F.d != G.d:
        raise ValueError("dimension mismatch")
    dF = derivative(F)
    dG = derivative(G)
    out = ChaosElement.constant(F.d, 0.0)
    for a, b in zip(dF.components, dG.components):
        out = out.add(chaos_product(a, b))
    return out


def stein_kernel_term(F: ChaosElement) -> ChaosElement:
    """The random variable <D F, -D L^{-1} F> driving the normal bound."""
    dF = derivative(F)
    dP = derivative(ou_pseudo_inverse(F).scale(-1.0))
    out = ChaosElement.constant(F.d, 0.0)
    for a, b in zip(dF.components, dP.components):
        out = out.add(chaos_product(a, b))
    return out


def duality_residual(F: ChaosElement, u: HValuedChaos) -> float:
    """E[F delta(u)] - E[<D F, u>]; zero when the duality holds."""
    if F.d != u.d:
        raise ValueError("dimension mismatch")
    lhs = expectation_of_product(F, divergence(u))
    dF = derivative(F)
    rhs = sum(
        expectation_of_product(a, b) for a, b in zip(dF.components, u.components)
    )
    return lhs - rhs
