"""Batch experiment runner.

``chaosforge run --config <path>`` executes one named experiment suite
and writes a CSV or JSON report; ``chaosforge list`` prints the suite
names.  Reports are deterministic: the same config and seed produce a
byte-identical body (only the trailing wall-clock comment varies), and
per-case random streams are spawned from the root seed by case index,
so ``--jobs`` changes the schedule but never the numbers.

Exit status: 0 when every assertion in the run passes, 1 when the
report contains a failed assertion, 2 for usage, config, or runtime
errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .corpus import (
    random_element,
    random_laguerre_element,
    random_laguerre_eigenfunction,
    random_polynomial,
    spawn_rngs,
    unit_variance_element,
)
from .dirichlet import LaguerreStructure, verify_h1_h2
from .fbm import FbmIncrementModel, QuadraticVariationStatistic, fit_log_slope, monte_carlo_distance
from .fourth_moment import (
    dirichlet_fourth_moment_bound,
    moment_route_fourth_cumulant,
    moment_route_variance,
    variance_inequality_report,
)
from .gaussian_algebra import GaussianPolynomial, gaussian_expectation
from .malliavin import carre_du_champ, derivative, duality_residual, ou_generator
from .stein import H_CLASSES, SteinSolution, solution_certificate
from .wiener_chaos import chaos_product, max_abs_coefficient

EXPERIMENTS = (
    "fourth-moment-corpus",
    "fbm-rates",
    "stein-bounds",
    "laguerre-suite",
    "duality-suite",
)


class ConfigError(Exception):
    pass


# -- configuration -----------------------------------------------------------


@dataclass(frozen=True)
class KeySpec:
    """Type and range of one config key; kind 'xxx_list' accepts commas."""

    kind: str
    lo: float | None = None
    hi: float | None = None
    choices: tuple[str, ...] | None = None


_PARAM_SPECS: dict[str, dict[str, KeySpec]] = {
    "fourth-moment-corpus": {
        "k": KeySpec("int_list", lo=2, hi=4),
        "d": KeySpec("int", lo=1, hi=4),
        "cases": KeySpec("int", lo=1, hi=500),
    },
    "fbm-rates": {
        "H": KeySpec("float_list"),
        "n": KeySpec("int_list", lo=2, hi=4096),
        "samples": KeySpec("int", lo=0, hi=10_000_000),
    },
    "stein-bounds": {
        "classes": KeySpec("str_list", choices=H_CLASSES),
        "per_class": KeySpec("int", lo=1, hi=50),
    },
    "laguerre-suite": {
        "nu": KeySpec("float_list"),
        "d": KeySpec("int", lo=1, hi=3),
        "degree": KeySpec("int", lo=1, hi=3),
        "cases": KeySpec("int", lo=1, hi=100),
        "pairs": KeySpec("int", lo=1, hi=500),
    },
    "duality-suite": {
        "pairs": KeySpec("int", lo=1, hi=500),
        "d": KeySpec("int", lo=1, hi=4),
        "max_order": KeySpec("int", lo=1, hi=3),
    },
}

_PARAM_DEFAULTS: dict[str, dict] = {
    "fourth-moment-corpus": {"k": [2, 3, 4], "d": 3, "cases": 50},
    "fbm-rates": {
        "H": [0.5, 0.55, 0.625, 0.7, 0.75],
        "n": [128, 256, 512, 1024, 2048],
        "samples": 0,
    },
    "stein-bounds": {"classes": list(H_CLASSES), "per_class": 10},
    "laguerre-suite": {"nu": [0.0, 0.5, 2.0], "d": 2, "degree": 3, "cases": 5, "pairs": 20},
    "duality-suite": {"pairs": 100, "d": 3, "max_order": 3},
}


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict
    seed: int
    out: str | None
    fmt: str


def _parse_int(token: str, key: str) -> int:
    try:
        return int(token, 10)
    except ValueError:
        raise ConfigError(f"key '{key}': expected integer, got '{token}'") from None


def _parse_float(token: str, key: str) -> float:
    try:
        v = float(token)
    except ValueError:
        raise ConfigError(f"key '{key}': expected number, got '{token}'") from None
    if not math.isfinite(v):
        raise ConfigError(f"key '{key}': value must be finite")
    return v


def _validate_value(key: str, raw: str, spec: KeySpec):
    tokens = [raw]
    if spec.kind.endswith("_list"):
        tokens = [t.strip() for t in raw.split(",")]
        if any(not t for t in tokens):
            raise ConfigError(f"key '{key}': empty list entry")
    vals: list = []
    for t in tokens:
        if spec.kind.startswith("int"):
            v = _parse_int(t, key)
        elif spec.kind.startswith("float"):
            v = _parse_float(t, key)
        else:
            v = t
        if spec.choices is not None and v not in spec.choices:
            raise ConfigError(
                f"key '{key}': '{v}' not one of {', '.join(spec.choices)}"
            )
        if key == "H" and isinstance(v, float) and not 0.0 < v <= 0.75:
            raise ConfigError(f"key 'H': H <= 3/4 required (and H > 0), got {v}")
        if key == "nu" and isinstance(v, float) and v <= -1.0:
            raise ConfigError(f"key 'nu': need nu > -1, got {v}")
        if spec.lo is not None and v < spec.lo:
            raise ConfigError(f"key '{key}': {v} below minimum {spec.lo}")
        if spec.hi is not None and v > spec.hi:
            raise ConfigError(f"key '{key}': {v} above maximum {spec.hi}")
        vals.append(v)
    return vals if spec.kind.endswith("_list") else vals[0]


def parse_config(text: str) -> ExperimentConfig:
    """Strict parse of the flat `key = value` format with # comments."""
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not key:
            raise ConfigError(f"line {lineno}: missing key")
        if not val:
            raise ConfigError(f"line {lineno}: empty value for '{key}'")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        entries[key] = (val, lineno)

    if "experiment" not in entries:
        raise ConfigError("missing required key 'experiment'")
    experiment = entries.pop("experiment")[0]
    if experiment not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment '{experiment}' (one of: {', '.join(EXPERIMENTS)})"
        )

    seed = 42
    if "seed" in entries:
        raw, lineno = entries.pop("seed")
        seed = _parse_int(raw, "seed")
        if seed < 0:
            raise ConfigError(f"line {lineno}: seed must be >= 0")
    out = entries.pop("out", (None, 0))[0]
    fmt = "csv"
    if "format" in entries:
        raw, lineno = entries.pop("format")
        if raw not in ("csv", "json"):
            raise ConfigError(f"line {lineno}: format must be csv or json")
        fmt = raw

    spec_table = _PARAM_SPECS[experiment]
    params = dict(_PARAM_DEFAULTS[experiment])
    for key, (raw, lineno) in entries.items():
        if key not in spec_table:
            raise ConfigError(
                f"line {lineno}: unknown key '{key}' for experiment {experiment}"
            )
        try:
            params[key] = _validate_value(key, raw, spec_table[key])
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return ExperimentConfig(experiment, params, seed, out, fmt)


# -- report ------------------------------------------------------------------


@dataclass(frozen=True)
class Assertion:
    """One named inequality with its computed margin (>= 0 iff it holds)."""

    name: str
    margin: float
    passed: bool


@dataclass
class RunReport:
    experiment: str
    seed: int
    params: dict
    columns: list[str]
    rows: list[list]
    assertions: list[Assertion]
    wall_clock_s: float

    def all_passed(self) -> bool:
        return all(a.passed for a in self.assertions)


def _fmt_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _fmt_param(v) -> str:
    if isinstance(v, list):
        return ",".join(_fmt_cell(x) for x in v)
    return _fmt_cell(v)


def render_csv(report: RunReport) -> str:
    lines = [
        f"# chaosforge v{__version__}",
        f"# experiment={report.experiment}",
        f"# seed={report.seed}",
    ]
    for key in sorted(report.params):
        lines.append(f"# {key}={_fmt_param(report.params[key])}")
    lines.append(",".join(report.columns))
    for row in report.rows:
        lines.append(",".join(_fmt_cell(v) for v in row))
    for a in report.assertions:
        lines.append(
            f"# assert,{a.name},{_fmt_cell(a.margin)},{'pass' if a.passed else 'FAIL'}"
        )
    lines.append(f"# wall_clock_s={report.wall_clock_s:.3f}")
    return "\n".join(lines) + "\n"


def render_json(report: RunReport) -> str:
    obj = {
        "artifact": "chaosforge",
        "version": __version__,
        "experiment": report.experiment,
        "seed": report.seed,
        "params": report.params,
        "columns": report.columns,
        "rows": [[(v.item() if isinstance(v, np.generic) else v) for v in row]
                 for row in report.rows],
        "assertions": [
            {"name": a.name, "margin": a.margin, "pass": a.passed}
            for a in report.assertions
        ],
        "wall_clock_s": report.wall_clock_s,
    }
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def strip_wall_clock(text: str) -> str:
    """Report body without the wall-clock field, for byte comparisons."""
    lines = [
        ln
        for ln in text.splitlines()
        if not (ln.startswith("# wall_clock_s=") or '"wall_clock_s"' in ln)
    ]
    return "\n".join(lines) + "\n"


def write_atomic(path: str, text: str) -> None:
    dirn = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=dirn, prefix=".chaosforge-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


# -- experiment runners ------------------------------------------------------


def _map_cases(fn, args_list, jobs: int) -> list:
    """Run fn over the case list, preserving input order in the results."""
    if jobs <= 1 or len(args_list) <= 1:
        return [fn(*a) for a in args_list]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(lambda a: fn(*a), args_list))


def _run_fourth_moment(params: dict, seed: int, jobs: int):
    ks, d, cases = params["k"], params["d"], params["cases"]
    labels = [(k, i) for k in ks for i in range(cases)]
    rngs = spawn_rngs(seed, len(labels))

    def one(case_id, k, rng):
        F = unit_variance_element(rng, d, k)
        rep = variance_inequality_report(F)
        var_rel = abs(rep.variance_term - moment_route_variance(F)) / max(
            1.0, abs(rep.variance_term)
        )
        cum_rel = abs(
            rep.fourth_cumulant - moment_route_fourth_cumulant(F)
        ) / max(1.0, abs(rep.fourth_cumulant))
        row = [
            case_id, k, d, rep.e_f2, rep.e_f4, rep.variance_term,
            rep.fourth_cumulant, rep.rhs, rep.margin,
        ]
        return row, rep, var_rel, cum_rel

    results = _map_cases(
        one, [(i, k, rngs[i]) for i, (k, _) in enumerate(labels)], jobs
    )
    rows = [r[0] for r in results]
    reps = [r[1] for r in results]
    asserts = [
        _ineq("inequality_margin_min", min(r.margin for r in reps), -1e-9),
        _resid("variance_route_rel_err", max(r[2] for r in results), 1e-9),
        _resid("cumulant_route_rel_err", max(r[3] for r in results), 1e-9),
        _resid(
            "intermediary_identity",
            max(abs(r.intermediary_residual) for r in reps),
            1e-9,
        ),
    ]
    if any(r.order == 2 for r in reps):
        gap = max(abs(r.margin) for r in reps if r.order == 2)
        asserts.insert(1, _resid("order2_equality_gap", gap, 1e-9))
    columns = [
        "case", "k", "d", "e_f2", "e_f4", "variance_term",
        "fourth_cumulant", "rhs", "margin",
    ]
    return columns, rows, asserts


def _run_fbm_rates(params: dict, seed: int, jobs: int):
    Hs, ns, samples = params["H"], params["n"], params["samples"]
    labels = [(H, n) for H in Hs for n in ns]
    mc_seeds = [
        int(c.generate_state(1, dtype=np.uint64)[0])
        for c in np.random.SeedSequence(seed).spawn(len(labels))
    ]

    def one(H, n, mc_seed):
        model = FbmIncrementModel.build(H, n)
        stat = QuadraticVariationStatistic.build(model)
        mc = monte_carlo_distance(model, samples, mc_seed) if samples > 0 else None
        return stat, mc

    results = _map_cases(
        one, [(H, n, mc_seeds[i]) for i, (H, n) in enumerate(labels)], jobs
    )
    by_case = dict(zip(labels, results))

    rows, asserts = [], []
    for H in Hs:
        stats = [by_case[(H, n)][0] for n in ns]
        tvs = [s.tv_bound for s in stats]
        slope = fit_log_slope(ns, tvs) if len(ns) > 1 else 0.0
        for s in stats:
            rows.append([H, s.n, math.sqrt(s.sigma_sq), s.var_exact, s.tv_bound, slope])
        if H == 0.5:
            worst = max(abs(tv - 2.0 * math.sqrt(2.0 / n)) for tv, n in zip(tvs, ns))
            asserts.append(_resid("closed_form_H0.5", worst, 1e-12))
        if len(ns) < 2:
            continue
        if H == 0.75:
            scaled = [tv * math.log(n) for tv, n in zip(tvs, ns)]
            factor = max(scaled) / min(scaled)
            asserts.append(Assertion("log_factor_H0.75", 2.0 - factor, factor < 2.0))
        else:
            target = -0.5 if H < 0.625 else 4.0 * H - 3.0
            asserts.append(
                _resid(f"slope_H{H:g}_vs_{target:g}", abs(slope - target), 0.15)
            )
    if samples > 0:
        for H, n in labels:
            mc = by_case[(H, n)][1]
            gap = mc.tv_upper_bound + 3.0 * mc.monte_carlo_error - mc.kolmogorov
            asserts.append(Assertion(f"mc_sandwich_H{H:g}_n{n}", gap, gap >= 0.0))
    columns = ["H", "n", "sigma", "var_exact", "tv_bound", "slope_fit"]
    return columns, rows, asserts


def shipped_test_function(h_class: str, j: int) -> tuple[SteinSolution, dict]:
    """j-th member of the shipped family for one test-function class."""
    if h_class == "bounded":
        omega, phi = 0.25 + 0.25 * j, 0.3 * j
        sol = SteinSolution(
            lambda w, a=omega, b=phi: math.cos(a * w + b), "bounded"
        )
        return sol, {"h_sup": 1.0}
    if h_class == "lipschitz":
        s, c = 0.5 + 0.15 * j, -2.25 + 0.5 * j
        sol = SteinSolution(
            lambda w, s=s, c=c: s * math.sqrt(1.0 + (w - c) ** 2),
            "lipschitz",
            h_prime=lambda w, s=s, c=c: s * (w - c) / math.sqrt(1.0 + (w - c) ** 2),
        )
        return sol, {"h_prime_sup": s}
    if h_class == "indicator":
        sol = SteinSolution(None, "indicator", threshold=-2.25 + 0.5 * j)
        return sol, {}
    raise ValueError(f"unknown test-function class '{h_class}'")


def _run_stein_bounds(params: dict, seed: int, jobs: int):
    classes, per_class = params["classes"], params["per_class"]
    labels = [(c, j) for c in classes for j in range(per_class)]

    def one(h_class, j):
        sol, sups = shipped_test_function(h_class, j)
        return solution_certificate(sol, **sups)

    results = _map_cases(one, labels, jobs)
    rows, asserts = [], []
    worst: dict[str, float] = {}
    for (h_class, j), checks in zip(labels, results):
        for c in checks:
            rows.append([h_class, j, c.name, c.limit, c.observed, c.margin])
            worst[h_class] = min(worst.get(h_class, math.inf), c.margin)
    for h_class in classes:
        m = worst[h_class]
        asserts.append(Assertion(f"certificates_{h_class}", m, m >= 0.0))

    rng = spawn_rngs(seed, 1)[0]
    x = GaussianPolynomial.coordinate(1, 1)
    resid = 0.0
    for _ in range(20):
        P = random_polynomial(rng, 1, 5)
        resid = max(resid, abs(gaussian_expectation(P.diff(1) - x * P)))
    asserts.append(_resid("stein_identity_polynomials", resid, 1e-10))
    columns = ["h_class", "case", "check", "limit", "observed", "margin"]
    return columns, rows, asserts


def _run_laguerre_suite(params: dict, seed: int, jobs: int):
    nus, d, degree, cases, pairs = (
        params["nu"], params["d"], params["degree"], params["cases"], params["pairs"],
    )
    labels = [(nu, m, i) for nu in nus for m in range(1, degree + 1) for i in range(cases)]
    rngs = spawn_rngs(seed, len(labels) + len(nus) * pairs)
    structures = {nu: LaguerreStructure(d, nu) for nu in nus}

    def one(idx, nu, m):
        structure = structures[nu]
        X = random_laguerre_eigenfunction(rngs[idx], structure, m)
        rep = dirichlet_fourth_moment_bound(structure, X, float(m))
        cert = verify_h1_h2(structure, X, float(m), max_degree=degree)
        row = [
            nu, m, idx, rep.eigenvalue, rep.e_x4, rep.gamma_mean, rep.var_gamma,
            rep.rhs, rep.margin, rep.tv_bound, cert.max_basis_residual, cert.h2_leak,
        ]
        return row, rep, cert

    results = _map_cases(
        one, [(i, nu, m) for i, (nu, m, _) in enumerate(labels)], jobs
    )
    rows = [r[0] for r in results]
    reps = [r[1] for r in results]
    certs = [r[2] for r in results]

    ibp_worst = 0.0
    offset = len(labels)
    for ni, nu in enumerate(nus):
        structure = structures[nu]
        for p in range(pairs):
            rng = rngs[offset + ni * pairs + p]
            X = random_laguerre_element(rng, structure, degree)
            Y = random_laguerre_element(rng, structure, degree)
            ibp_worst = max(ibp_worst, abs(structure.ibp_residual(X, Y)))

    pinned = dirichlet_fourth_moment_bound(
        LaguerreStructure(1, 0.0),
        LaguerreStructure(1, 0.0).element({(1,): 1.0}),
        1.0,
    )
    pinned_gap = max(abs(pinned.var_gamma - 1.0), abs(pinned.rhs - 2.0))

    asserts = [
        _ineq("bound_margin_min", min(r.margin for r in reps), -1e-9),
        _resid("eigen_residual_max", max(r.eigen_residual for r in reps), 1e-9),
        Assertion(
            "h1_h2_certified",
            1e-9 - max(c.max_basis_residual + c.x_residual + c.h2_leak for c in certs),
            all(c.ok for c in certs),
        ),
        _resid("integration_by_parts", ibp_worst, 1e-9),
        _resid("pinned_linear_eigenfunction", pinned_gap, 1e-9),
    ]
    columns = [
        "nu", "degree", "case", "eigenvalue", "e_x4", "gamma_mean", "var_gamma",
        "rhs", "margin", "tv_bound", "basis_residual", "h2_leak",
    ]
    return columns, rows, asserts


def _run_duality_suite(params: dict, seed: int, jobs: int):
    pairs, d, max_order = params["pairs"], params["d"], params["max_order"]
    rngs = spawn_rngs(seed, pairs)

    def one(case, rng):
        F = random_element(rng, d, max_order)
        G = random_element(rng, d, max_order)
        u = derivative(G)
        dres = abs(duality_residual(F, u))
        DF, DG = derivative(F), derivative(G)
        DFG = derivative(chaos_product(F, G))
        chain = max(
            max_abs_coefficient(
                DFG.components[x]
                .sub(chaos_product(F, DG.components[x]))
                .sub(chaos_product(G, DF.components[x]))
            )
            for x in range(d)
        )
        FG = chaos_product(F, G)
        product_rule = max_abs_coefficient(
            carre_du_champ(F, G).scale(2.0)
            .sub(ou_generator(FG))
            .add(chaos_product(F, ou_generator(G)))
            .add(chaos_product(G, ou_generator(F)))
        )
        row = [case, d, F.max_order(), G.max_order(), dres, chain, product_rule]
        return row, dres, chain, product_rule

    results = _map_cases(one, [(i, rngs[i]) for i in range(pairs)], jobs)
    rows = [r[0] for r in results]
    asserts = [
        _resid("duality_residual", max(r[1] for r in results), 1e-9),
        _resid("derivative_product_rule", max(r[2] for r in results), 1e-10),
        _resid("carre_du_champ_identity", max(r[3] for r in results), 1e-10),
    ]
    columns = [
        "case", "d", "order_f", "order_g",
        "duality_residual", "chain_rule_residual", "carre_du_champ_residual",
    ]
    return columns, rows, asserts


def _ineq(name: str, worst_margin: float, floor: float) -> Assertion:
    return Assertion(name, worst_margin - floor, worst_margin >= floor)


def _resid(name: str, worst: float, tol: float) -> Assertion:
    return Assertion(name, tol - worst, worst <= tol)


_RUNNERS = {
    "fourth-moment-corpus": _run_fourth_moment,
    "fbm-rates": _run_fbm_rates,
    "stein-bounds": _run_stein_bounds,
    "laguerre-suite": _run_laguerre_suite,
    "duality-suite": _run_duality_suite,
}


def run(config: ExperimentConfig, jobs: int = 1) -> RunReport:
    t0 = time.perf_counter()
    columns, rows, asserts = _RUNNERS[config.experiment](config.params, config.seed, jobs)
    return RunReport(
        experiment=config.experiment,
        seed=config.seed,
        params=config.params,
        columns=columns,
        rows=rows,
        assertions=asserts,
        wall_clock_s=time.perf_counter() - t0,
    )


# -- entry point ---------------------------------------------------------------


def _resolve_jobs(flag: int | None) -> int:
    if flag is not None:
        jobs = flag
    else:
        env = os.environ.get("CHAOS_FORGE_JOBS", "").strip()
        if env:
            try:
                jobs = int(env)
            except ValueError:
                raise ConfigError(f"CHAOS_FORGE_JOBS is not an integer: '{env}'") from None
        else:
            jobs = 1
    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {jobs}")
    return jobs


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="chaosforge",
        description="Exact fourth-moment inequalities and normal-approximation rates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="execute one experiment suite")
    run_p.add_argument("--config", required=True, help="path to a key=value config file")
    run_p.add_argument("--out", help="report path (default: config value or stdout)")
    run_p.add_argument("--format", choices=("csv", "json"), help="report format")
    run_p.add_argument("--seed", type=int, help="root seed override")
    run_p.add_argument("--jobs", type=int, help="parallel case workers (or CHAOS_FORGE_JOBS)")
    sub.add_parser("list", help="print available experiment names")
    args = parser.parse_args(argv)

    if args.command == "list":
        for name in EXPERIMENTS:
            print(name)
        return 0

    try:
        with open(args.config, encoding="utf-8") as fh:
            config = parse_config(fh.read())
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("seed must be >= 0")
            config.seed = args.seed
        if args.format is not None:
            config.fmt = args.format
        if args.out is not None:
            config.out = args.out
        jobs = _resolve_jobs(args.jobs)
    except (OSError, ConfigError) as exc:
        print(f"chaosforge: config error: {exc}", file=sys.stderr)
        return 2

    try:
        report = run(config, jobs)
    except Exception as exc:  # annotated case failures are operational errors
        print(f"chaosforge: error: {exc}", file=sys.stderr)
        return 2

    text = render_csv(report) if config.fmt == "csv" else render_json(report)
    if config.out:
        write_atomic(config.out, text)
    else:
        sys.stdout.write(text)
    if not report.all_passed():
        failed = [a.name for a in report.assertions if not a.passed]
        print(f"chaosforge: FAILED assertions: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
