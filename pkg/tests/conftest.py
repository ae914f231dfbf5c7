"""Shared brute-force oracles, independent of the package internals.

The moment evaluators below work straight from the Wick/double-factorial
rule on monomial dictionaries and never touch the package's kernel
backends, so they can arbitrate every exact-moment claim in the suite.
"""

from __future__ import annotations

import math

import numpy as np


def gaussian_monomial_moment(exponents) -> float:
    """E prod_i Z_i^{p_i} for independent standard normals."""
    out = 1.0
    for p in exponents:
        if p % 2 == 1:
            return 0.0
        # (p-1)!! = product of odd numbers below p
        for m in range(1, p, 2):
            out *= m
    return out


def oracle_gaussian_moment(terms: dict) -> float:
    """Expectation of a polynomial given as {exponent tuple: coefficient}."""
    return float(sum(c * gaussian_monomial_moment(e) for e, c in terms.items()))


def gamma_monomial_moment(exponents, shape: float) -> float:
    """E prod_i x_i^{p_i} for i.i.d. Gamma(shape, 1): rising factorials."""
    out = 1.0
    for p in exponents:
        for t in range(p):
            out *= shape + t
    return out


def oracle_gamma_moment(terms: dict, shape: float) -> float:
    return float(sum(c * gamma_monomial_moment(e, shape) for e, c in terms.items()))


def poly_mul(a: dict, b: dict) -> dict:
    """Plain dict-of-monomials product, for building oracle inputs."""
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0.0) + ca * cb
    return out


def poly_pow(a: dict, p: int) -> dict:
    d = len(next(iter(a)))
    out = {tuple([0] * d): 1.0}
    for _ in range(p):
        out = poly_mul(out, a)
    return out


def rel_err(got: float, want: float, floor: float = 1e-12) -> float:
    return abs(got - want) / max(abs(want), floor)


def spawn_rngs(seed: int, count: int):
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


# standard-normal absolute third moment, used by the CLT bound tests
E_ABS_Z3 = 2.0 * math.sqrt(2.0 / math.pi)
