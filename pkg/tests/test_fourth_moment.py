"""Variance inequality for pure chaos: two routes, exact margins, pinned cases."""

import math

import pytest

from conftest import oracle_gaussian_moment, poly_pow, rel_err, spawn_rngs

from chaosforge import (
    ChaosElement,
    SymmetricKernel,
    WienerStructure,
    contraction_fourth_cumulant,
    contraction_variance,
    dirichlet_fourth_moment_bound,
    moment_route_fourth_cumulant,
    moment_route_variance,
    to_polynomial,
    unit_variance_element,
    variance_inequality_report,
)


def pure(d, order, coeffs):
    return ChaosElement(d, 0.0, {order: SymmetricKernel(d, order, coeffs)})


# ---------------------------------------------------------------------------
# Pinned values, checked against the Isserlis oracle before being frozen.
#
# x1*x2:          E F^4 = 9,    Var term = 1,  RHS = 1   (order 2, equality)
# H2(x1)/sqrt 2:  E F^4 = 15,   Var term = 2,  RHS = 2   (order 2, equality)
# H3(x1)/sqrt 6:  E F^4 = 93,   Var term = 14, RHS = 20  (order 3, strict)
# ---------------------------------------------------------------------------

PINNED = [
    (pure(2, 2, {(1, 2): 0.5}), 9.0, 1.0, 1.0),
    (pure(1, 2, {(1, 1): 1.0 / math.sqrt(2.0)}), 15.0, 2.0, 2.0),
    (pure(1, 3, {(1, 1, 1): 1.0 / math.sqrt(6.0)}), 93.0, 14.0, 20.0),
]


@pytest.mark.parametrize("F,e_f4,var_term,rhs", PINNED)
def test_pinned_reports(F, e_f4, var_term, rhs):
    report = variance_inequality_report(F)
    assert abs(report.e_f2 - 1.0) < 1e-12
    assert abs(report.e_f4 - e_f4) < 1e-9
    assert abs(report.variance_term - var_term) < 1e-9
    assert abs(report.rhs - rhs) < 1e-9
    assert abs(report.margin - (rhs - var_term)) < 1e-12
    assert report.equality_case == (report.order == 2)
    assert abs(report.intermediary_residual) < 1e-9


@pytest.mark.parametrize("F,e_f4,var_term,rhs", PINNED)
def test_pinned_fourth_moment_against_isserlis(F, e_f4, var_term, rhs):
    # independent of the chaos product machinery: expand F as a polynomial,
    # take the 4th power termwise, and sum Gaussian monomial moments
    P = to_polynomial(F)
    oracle = oracle_gaussian_moment(poly_pow(P.terms, 4))
    assert rel_err(oracle, e_f4) < 1e-9


def test_routes_agree_on_random_corpus():
    """Contraction norms vs brute-force chaos moments, orders 2..4."""
    rngs = spawn_rngs(4040, 45)
    worst_var = worst_cum = 0.0
    for i, rng in enumerate(rngs):
        k = 2 + i % 3
        d = 1 + i % 4
        F = unit_variance_element(rng, d, k)
        f = F.kernels[k]
        ev_c = contraction_variance(f)
        ev_m = moment_route_variance(F)
        cu_c = contraction_fourth_cumulant(f)
        cu_m = moment_route_fourth_cumulant(F)
        worst_var = max(worst_var, rel_err(ev_c, ev_m, floor=1.0))
        worst_cum = max(worst_cum, rel_err(cu_c, cu_m, floor=1.0))
    print(f"route disagreement: variance {worst_var:.3e}, cumulant {worst_cum:.3e}")
    assert worst_var < 1e-9
    assert worst_cum < 1e-9


def test_inequality_margin_and_order_two_equality():
    rngs = spawn_rngs(4141, 60)
    worst_margin = math.inf
    worst_eq = 0.0
    for i, rng in enumerate(rngs):
        k = 2 + i % 3
        F = unit_variance_element(rng, 1 + i % 3, k)
        report = variance_inequality_report(F)
        worst_margin = min(worst_margin, report.margin)
        if k == 2:
            worst_eq = max(worst_eq, abs(report.margin))
    print(f"worst margin {worst_margin:.3e}, worst order-2 gap {worst_eq:.3e}")
    assert worst_margin >= -1e-9
    assert worst_eq < 1e-9


def test_cumulant_is_nonnegative_for_pure_chaos():
    # E F^4 >= 3 for every pure chaos element with E F^2 = 1
    rngs = spawn_rngs(4242, 24)
    for i, rng in enumerate(rngs):
        F = unit_variance_element(rng, 1 + i % 4, 2 + i % 3)
        report = variance_inequality_report(F)
        assert report.fourth_cumulant >= -1e-9
        assert report.e_f4 >= 3.0 - 1e-9


def test_order_one_has_no_contractions():
    f = SymmetricKernel(3, 1, {(2,): 1.0})
    assert contraction_variance(f) == 0.0
    assert contraction_fourth_cumulant(f) == 0.0
    report = variance_inequality_report(pure(3, 1, {(2,): 1.0}))
    assert report.rhs == 0.0
    assert report.variance_term == 0.0
    assert abs(report.e_f4 - 3.0) < 1e-12


def test_report_rejects_bad_input():
    with pytest.raises(ValueError):
        variance_inequality_report(ChaosElement(2, 1.0, {2: SymmetricKernel(2, 2, {(1, 2): 0.5})}))
    mixed = ChaosElement(
        2,
        0.0,
        {
            1: SymmetricKernel(2, 1, {(1,): 1.0}),
            2: SymmetricKernel(2, 2, {(1, 2): 0.5}),
        },
    )
    with pytest.raises(ValueError):
        variance_inequality_report(mixed)
    with pytest.raises(ValueError):
        variance_inequality_report(pure(2, 2, {(1, 2): 1.0}))  # E F^2 = 4
    with pytest.raises(ValueError):
        contraction_variance(SymmetricKernel(2, 0, {(): 1.0}))


def test_dirichlet_bound_on_wiener_structure():
    """Same inequality through the abstract-structure interface."""
    structure = WienerStructure(2)
    X = pure(2, 2, {(1, 2): 0.5})
    report = dirichlet_fourth_moment_bound(structure, X, 2.0)
    assert abs(report.e_x2 - 1.0) < 1e-12
    assert abs(report.e_x4 - 9.0) < 1e-9
    assert abs(report.var_gamma - 4.0) < 1e-9
    assert abs(report.rhs - 8.0) < 1e-9
    assert abs(report.tv_bound - math.sqrt(2.0)) < 1e-12
    assert report.eigen_residual < 1e-12
    assert report.margin >= 0.0


def test_dirichlet_bound_guards():
    structure = WienerStructure(2)
    X = pure(2, 2, {(1, 2): 0.5})
    with pytest.raises(ValueError):
        dirichlet_fourth_moment_bound(structure, X, -2.0)
    with pytest.raises(ValueError):
        dirichlet_fourth_moment_bound(structure, X, 3.0)  # wrong eigenvalue
    fat = pure(2, 2, {(1, 2): 1.0})
    with pytest.raises(ValueError):
        dirichlet_fourth_moment_bound(structure, fat, 2.0)  # E X^2 = 4
