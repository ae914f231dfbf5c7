"""Release gates: one test per shipped guarantee, each printing a PASS line.

Run under pytest (``pytest tests/test_acceptance.py -s``) or standalone
(``python3 tests/test_acceptance.py``); the standalone mode prints every
PASS line and exits nonzero on the first violated gate.
"""

import math
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from conftest import oracle_gaussian_moment, poly_pow, rel_err

from chaosforge import (
    ChaosElement,
    FbmIncrementModel,
    LaguerreStructure,
    SymmetricKernel,
    carre_du_champ,
    chaos_product,
    contraction_fourth_cumulant,
    contraction_variance,
    derivative,
    dirichlet_fourth_moment_bound,
    dkw_epsilon,
    duality_residual,
    exact_tv_bound,
    expectation_of_product,
    gaussian_expectation,
    kernel_pair_corpus,
    kolmogorov_distance,
    max_abs_coefficient,
    moment,
    monte_carlo_distance,
    moment_route_fourth_cumulant,
    moment_route_variance,
    multiple_integral,
    ou_generator,
    random_element,
    random_laguerre_element,
    random_polynomial,
    second_moment,
    solution_certificate,
    spawn_rngs,
    to_polynomial,
    unit_variance_element,
    variance_inequality_report,
    verify_h1_h2,
)
from chaosforge.cli import main as cli_main
from chaosforge.cli import shipped_test_function, strip_wall_clock
from chaosforge.fbm import fit_log_slope
from chaosforge.gaussian_algebra import GaussianPolynomial
from chaosforge.stein import H_CLASSES


def test_criterion_01_product_formula_against_polynomial_oracle():
    """chaos_product agrees with polynomial multiplication + Gaussian
    expectation for every moment up to order 4, on 200 sparse kernel pairs."""
    t0 = time.perf_counter()
    worst = 0.0
    pairs = kernel_pair_corpus(8080, 200)
    for f, g in pairs:
        F, G = multiple_integral(f), multiple_integral(g)
        H = chaos_product(F, G)
        R = to_polynomial(F) * to_polynomial(G)
        power = None
        for m in (1, 2, 3, 4):
            power = R if power is None else power * R
            chaos_m = moment(H, m)
            poly_m = gaussian_expectation(power)
            worst = max(worst, abs(chaos_m - poly_m) / max(1.0, abs(poly_m)))
    elapsed = time.perf_counter() - t0
    assert worst <= 1e-9, worst
    assert elapsed < 30.0, elapsed
    print(
        f"PASS criterion 1: product formula vs polynomial oracle on "
        f"{len(pairs)} pairs, worst rel err {worst:.2e}, {elapsed:.1f}s"
    )


def test_criterion_02_isometry_and_orthogonality():
    worst_iso = worst_orth = 0.0
    for f, g in kernel_pair_corpus(8181, 120):
        F, G = multiple_integral(f), multiple_integral(g)
        iso = abs(second_moment(F) - math.factorial(f.order) * f.norm_sq())
        worst_iso = max(worst_iso, iso / max(1.0, f.norm_sq()))
        if f.order != g.order:
            worst_orth = max(worst_orth, abs(expectation_of_product(F, G)))
    assert worst_iso <= 1e-9
    assert worst_orth <= 1e-9
    print(
        f"PASS criterion 2: isometry rel err {worst_iso:.2e}, "
        f"cross-order expectation {worst_orth:.2e}"
    )


def test_criterion_03_variance_and_cumulant_identities():
    rngs = spawn_rngs(8282, 60)
    worst_var = worst_cum = worst_eq = 0.0
    worst_margin = math.inf
    for i, rng in enumerate(rngs):
        k = 2 + i % 3
        F = unit_variance_element(rng, 1 + i % 4, k)
        f = F.kernels[k]
        worst_var = max(
            worst_var, rel_err(contraction_variance(f), moment_route_variance(F), floor=1.0)
        )
        worst_cum = max(
            worst_cum,
            rel_err(
                contraction_fourth_cumulant(f), moment_route_fourth_cumulant(F), floor=1.0
            ),
        )
        report = variance_inequality_report(F)
        worst_margin = min(worst_margin, report.margin)
        if k == 2:
            worst_eq = max(worst_eq, abs(report.margin))
    assert worst_var <= 1e-9 and worst_cum <= 1e-9
    assert worst_margin >= -1e-9
    assert worst_eq <= 1e-9
    print(
        f"PASS criterion 3: route agreement {max(worst_var, worst_cum):.2e}, "
        f"min margin {worst_margin:.2e}, order-2 equality gap {worst_eq:.2e}"
    )


def test_criterion_04_pinned_examples_with_isserlis_oracle():
    cases = [
        ("x1*x2", ChaosElement(2, 0.0, {2: SymmetricKernel(2, 2, {(1, 2): 0.5})}), 9.0, 1.0, 1.0),
        (
            "H2/sqrt2",
            ChaosElement(1, 0.0, {2: SymmetricKernel(1, 2, {(1, 1): 1 / math.sqrt(2)})}),
            15.0, 2.0, 2.0,
        ),
        (
            "H3/sqrt6",
            ChaosElement(1, 0.0, {3: SymmetricKernel(1, 3, {(1, 1, 1): 1 / math.sqrt(6)})}),
            93.0, 14.0, 20.0,
        ),
    ]
    for name, F, e_f4, var_term, rhs in cases:
        oracle = oracle_gaussian_moment(poly_pow(to_polynomial(F).terms, 4))
        assert rel_err(oracle, e_f4) <= 1e-9, name
        report = variance_inequality_report(F)
        assert abs(report.e_f4 - e_f4) <= 1e-9, name
        assert abs(report.variance_term - var_term) <= 1e-9, name
        assert abs(report.rhs - rhs) <= 1e-9, name
    print(
        "PASS criterion 4: pinned (E F^4, Var term, RHS) = "
        "(9,1,1), (15,2,2), (93,14,20) vs Isserlis oracle"
    )


def test_criterion_05_stein_solution_certificates():
    expected_checks = {"bounded": 2, "lipschitz": 3, "indicator": 5}
    total = 0
    worst = math.inf
    for h_class in H_CLASSES:
        for j in range(10):
            sol, sups = shipped_test_function(h_class, j)
            checks = solution_certificate(sol, **sups)
            assert len(checks) == expected_checks[h_class]
            for c in checks:
                assert c.ok, (h_class, j, c)
                worst = min(worst, c.margin)
            total += 1
    rng = spawn_rngs(8383, 1)[0]
    x = GaussianPolynomial.coordinate(1, 1)
    resid = 0.0
    for _ in range(20):
        P = random_polynomial(rng, 1, 5)
        resid = max(resid, abs(gaussian_expectation(P.diff(1) - x * P)))
    assert resid <= 1e-10
    print(
        f"PASS criterion 5: {total} solution certificates hold "
        f"(worst margin {worst:.2e}); polynomial identity residual {resid:.2e}"
    )


def test_criterion_06_duality_and_product_rules():
    rngs = spawn_rngs(8484, 100)
    worst_dual = worst_chain = worst_carre = 0.0
    for rng in rngs:
        F = random_element(rng, 3, 3)
        G = random_element(rng, 3, 3)
        worst_dual = max(worst_dual, abs(duality_residual(F, derivative(G))))
        DF, DG = derivative(F), derivative(G)
        DFG = derivative(chaos_product(F, G))
        chain = max(
            max_abs_coefficient(
                DFG.components[x]
                .sub(chaos_product(F, DG.components[x]))
                .sub(chaos_product(G, DF.components[x]))
            )
            for x in range(3)
        )
        worst_chain = max(worst_chain, chain)
        FG = chaos_product(F, G)
        carre = max_abs_coefficient(
            carre_du_champ(F, G).scale(2.0)
            .sub(ou_generator(FG))
            .add(chaos_product(F, ou_generator(G)))
            .add(chaos_product(G, ou_generator(F)))
        )
        worst_carre = max(worst_carre, carre)
    assert worst_dual <= 1e-9
    assert worst_chain <= 1e-10
    assert worst_carre <= 1e-10
    print(
        f"PASS criterion 6: duality {worst_dual:.2e} on 100 pairs, "
        f"chain rule {worst_chain:.2e}, squared-field identity {worst_carre:.2e}"
    )


def test_criterion_07_rate_table_slopes():
    t0 = time.perf_counter()
    ns = [128, 256, 512, 1024, 2048]
    bounds = {H: [exact_tv_bound(H, n) for n in ns] for H in (0.5, 0.55, 0.7, 0.75)}

    closed = max(
        abs(tv - 2.0 * math.sqrt(2.0 / n)) for tv, n in zip(bounds[0.5], ns)
    )
    assert closed <= 1e-12

    slope_55 = fit_log_slope(ns, bounds[0.55])
    slope_70 = fit_log_slope(ns, bounds[0.7])
    assert abs(slope_55 - (-0.5)) <= 0.15, slope_55
    assert abs(slope_70 - (-0.2)) <= 0.15, slope_70

    scaled = [tv * math.log(n) for tv, n in zip(bounds[0.75], ns)]
    factor = max(scaled) / min(scaled)
    assert factor < 2.0, factor

    elapsed = time.perf_counter() - t0
    assert elapsed < 600.0, elapsed
    print(
        f"PASS criterion 7: slopes {slope_55:.3f} (target -0.5), "
        f"{slope_70:.3f} (target -0.2), boundary log factor {factor:.3f}, "
        f"H=1/2 closed form {closed:.1e}, {elapsed:.1f}s"
    )


def test_criterion_08_monte_carlo_sandwich():
    eps = dkw_epsilon(100_000)
    lines = []
    for H in (0.5, 0.7):
        model = FbmIncrementModel.build(H, 512)
        report = monte_carlo_distance(model, 100_000, seed=2024)
        assert report.kolmogorov <= report.tv_upper_bound + 3.0 * eps, (H, report)
        lines.append(f"H={H}: d_K {report.kolmogorov:.4f} <= {report.tv_upper_bound:.4f} + 3*{eps:.4f}")
    print("PASS criterion 8: " + "; ".join(lines))


def test_criterion_09_laguerre_suite():
    worst_ibp = 0.0
    worst_margin = math.inf
    n_certified = 0
    for nu in (0.0, 0.5, 2.0):
        for d in (1, 2, 3):
            structure = LaguerreStructure(d, nu)
            for rng in spawn_rngs(8585 + d, 6):
                X = random_laguerre_element(rng, structure, 3)
                Y = random_laguerre_element(rng, structure, 3)
                worst_ibp = max(worst_ibp, abs(structure.ibp_residual(X, Y)))
            for lam, e in structure.eigen_basis(3):
                if lam == 0.0:
                    continue
                m2 = structure.expectation(structure.multiply(e, e))
                X = e.scale(1.0 / math.sqrt(m2))
                cert = verify_h1_h2(structure, X, lam, max_degree=3)
                assert cert.ok, (nu, d, lam, cert)
                report = dirichlet_fourth_moment_bound(structure, X, lam)
                worst_margin = min(worst_margin, report.margin)
                n_certified += 1
    assert worst_ibp <= 1e-9
    assert worst_margin >= -1e-9

    pinned_structure = LaguerreStructure(1, 0.0)
    pinned = dirichlet_fourth_moment_bound(
        pinned_structure, pinned_structure.element({(1,): 1.0}), 1.0
    )
    assert abs(pinned.var_gamma - 1.0) <= 1e-9
    assert abs(pinned.rhs - 2.0) <= 1e-9
    print(
        f"PASS criterion 9: ibp residual {worst_ibp:.2e}, "
        f"{n_certified} eigenfunctions certified, min margin {worst_margin:.2e}, "
        f"pinned (Var Gamma, RHS) = (1, 2)"
    )


def _criterion_10(workdir: Path):
    config = workdir / "repeat.cfg"
    config.write_text(
        "experiment = fourth-moment-corpus\nk = 2,3\nd = 2\ncases = 5\nseed = 11\n"
    )
    bodies = []
    for i in range(2):
        out = workdir / f"run{i}.csv"
        code = cli_main(["run", "--config", str(config), "--out", str(out)])
        assert code == 0
        bodies.append(strip_wall_clock(out.read_text()))
    assert bodies[0] == bodies[1]
    return len(bodies[0].encode())


def test_criterion_10_deterministic_reports(tmp_path):
    nbytes = _criterion_10(tmp_path)
    print(
        f"PASS criterion 10: two consecutive runs byte-identical "
        f"({nbytes} bytes of report body)"
    )


if __name__ == "__main__":
    failures = 0
    t_start = time.perf_counter()
    gates = [
        test_criterion_01_product_formula_against_polynomial_oracle,
        test_criterion_02_isometry_and_orthogonality,
        test_criterion_03_variance_and_cumulant_identities,
        test_criterion_04_pinned_examples_with_isserlis_oracle,
        test_criterion_05_stein_solution_certificates,
        test_criterion_06_duality_and_product_rules,
        test_criterion_07_rate_table_slopes,
        test_criterion_08_monte_carlo_sandwich,
        test_criterion_09_laguerre_suite,
    ]
    for gate in gates:
        try:
            gate()
        except AssertionError as exc:
            failures += 1
            name = gate.__name__.replace("test_", "")
            print(f"FAIL {name}: {exc}")
    with tempfile.TemporaryDirectory() as tmp:
        try:
            test_criterion_10_deterministic_reports(Path(tmp))
        except AssertionError as exc:
            failures += 1
            print(f"FAIL criterion_10_deterministic_reports: {exc}")
    print(f"total {time.perf_counter() - t_start:.1f}s, {failures} failing gate(s)")
    sys.exit(1 if failures else 0)
