import math

import pytest

from chaosforge.corpus import element_pair_corpus, random_element
from chaosforge.malliavin import (
    HValuedChaos,
    carre_du_champ,
    derivative,
    divergence,
    duality_residual,
    ou_generator,
    ou_pseudo_inverse,
    stein_kernel_term,
)
from chaosforge.symmetric_tensor import SymmetricKernel
from chaosforge.wiener_chaos import (
    ChaosElement,
    chaos_product,
    expectation,
    max_abs_coefficient,
    multiple_integral,
    second_moment,
    variance,
)

from conftest import spawn_rngs


def test_derivative_pinned_examples():
    # D of a first-chaos coordinate is the constant direction vector
    F = multiple_integral(SymmetricKernel(2, 1, {(1,): 1.0}))
    DF = derivative(F)
    assert DF.components[0].c0 == pytest.approx(1.0)
    assert DF.components[0].kernels == {}
    assert DF.components[1].c0 == 0.0

    # D of I_2(e1 (x) e1) along x1 is 2 x1
    G = multiple_integral(SymmetricKernel(1, 2, {(1, 1): 1.0}))
    DG = derivative(G)
    assert DG.components[0].kernels[1].coeffs == {(1,): pytest.approx(2.0)}

    # D of x1 x2 is (x2, x1)
    H = multiple_integral(SymmetricKernel(2, 2, {(1, 2): 0.5}))
    DH = derivative(H)
    assert DH.components[0].kernels[1].coeffs == {(2,): pytest.approx(1.0)}
    assert DH.components[1].kernels[1].coeffs == {(1,): pytest.approx(1.0)}


def test_generator_diagonal_action():
    f = SymmetricKernel(1, 2, {(1, 1): 1.0})
    F = multiple_integral(f).add(5.0)
    LF = ou_generator(F)
    assert LF.c0 == 0.0
    assert LF.kernels[2].coeffs == {(1, 1): pytest.approx(-2.0)}
    # x1^2 = I_2 + 1: L(x1^2) = -2 x1^2 + 2, checked coefficient-wise
    sq = chaos_product(multiple_integral(SymmetricKernel(1, 1, {(1,): 1.0})),
                       multiple_integral(SymmetricKernel(1, 1, {(1,): 1.0})))
    Lsq = ou_generator(sq)
    want = sq.scale(-2.0).add(2.0)
    assert Lsq.allclose(want, tol=1e-12)


def test_pseudo_inverse_identities():
    for rng in spawn_rngs(61, 20):
        F = random_element(rng, 3, 3)
        centered = F.sub(expectation(F))
        # L L^-1 F = F - E F and L^-1 L F = F - E F
        assert ou_generator(ou_pseudo_inverse(F)).allclose(centered, tol=1e-11)
        assert ou_pseudo_inverse(ou_generator(F)).allclose(centered, tol=1e-11)


def test_divergence_of_gradient_is_minus_generator():
    for rng in spawn_rngs(62, 20):
        G = random_element(rng, 2, 3)
        out = divergence(derivative(G))
        assert out.allclose(ou_generator(G).scale(-1.0), tol=1e-11)


def test_divergence_requires_gradient_potential():
    F = multiple_integral(SymmetricKernel(2, 1, {(1,): 1.0}))
    u = HValuedChaos(d=2, components=(F, F))
    with pytest.raises(ValueError):
        divergence(u)


def test_duality_residual_on_100_pairs():
    worst = 0.0
    for F, G in element_pair_corpus(63, 100):
        worst = max(worst, abs(duality_residual(F, derivative(G))))
    print(f"duality residual, 100 pairs: {worst:.3e}")
    assert worst <= 1e-9


def test_energy_identity():
    # E Gamma(F, F) = sum_k k k! |f_k|^2
    for rng in spawn_rngs(64, 15):
        F = random_element(rng, 3, 3)
        gamma = carre_du_champ(F, F)
        want = sum(
            k * math.factorial(k) * f.norm_sq() for k, f in F.kernels.items()
        )
        assert expectation(gamma) == pytest.approx(want, rel=1e-11, abs=1e-11)


def test_carre_du_champ_generator_identity():
    # 2 Gamma(F, G) = L(FG) - F LG - G LF, coefficient level
    for F, G in element_pair_corpus(65, 30):
        lhs = carre_du_champ(F, G).scale(2.0)
        rhs = (
            ou_generator(chaos_product(F, G))
            .sub(chaos_product(F, ou_generator(G)))
            .sub(chaos_product(G, ou_generator(F)))
        )
        assert max_abs_coefficient(lhs.sub(rhs)) <= 1e-10


def test_derivative_product_rule():
    for F, G in element_pair_corpus(66, 30):
        DF, DG, DFG = derivative(F), derivative(G), derivative(chaos_product(F, G))
        for x in range(F.d):
            resid = (
                DFG.components[x]
                .sub(chaos_product(F, DG.components[x]))
                .sub(chaos_product(G, DF.components[x]))
            )
            assert max_abs_coefficient(resid) <= 1e-10


def test_stein_kernel_term_pinned():
    # F = I_3(e1^(x)3)/sqrt(6): <DF, -DL^-1 F> = H_2^2/2 + ..., Var = 14
    F = multiple_integral(SymmetricKernel(1, 3, {(1, 1, 1): 1.0})).scale(
        1.0 / math.sqrt(6.0)
    )
    T = stein_kernel_term(F)
    assert expectation(T) == pytest.approx(second_moment(F), rel=1e-12)
    assert variance(T) == pytest.approx(14.0, rel=1e-10)
    # exact Gaussian: T is identically 1
    Z = multiple_integral(SymmetricKernel(1, 1, {(1,): 1.0}))
    TZ = stein_kernel_term(Z)
    assert TZ.c0 == pytest.approx(1.0)
    assert TZ.kernels == {}
