"""Pure-Python implementations of the hot inner loops.

Same call signatures as the compiled module ``_speedups``; plain dict
loops, kept deliberately simple so they can serve as the reference the
compiled twin is checked against.
"""

from __future__ import annotations

import math

BACKEND = "python"


def mul_terms(a: dict, b: dict) -> dict:
    """Multiply two sparse polynomials given as {exponent tuple: coeff}."""
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = out.get(key, 0.0) + ca * cb
    return out


def expectation_gaussian(terms: dict) -> float:
    """Moment of a polynomial in independent standard Gaussians.

    Uses E[Z^p] = (p-1)!! for even p and 0 for odd p, coordinatewise.
    """
    total = 0.0
    for exps, coef in terms.items():
        factor = coef
        for p in exps:
            if p & 1:
                factor = 0.0
                break
            while p > 0:
                factor *= p - 1
                p -= 2
        total += factor
        if math.isinf(total) or math.isinf(factor):
            raise OverflowError("Gaussian moment exceeds double range")
    return total


def expectation_gamma(terms: dict, shape: float) -> float:
    """Moment of a polynomial in independent Gamma(shape, 1) coordinates.

    Uses E[x^p] = shape (shape+1) ... (shape+p-1).
    """
    if shape <= 0.0:
        raise ValueError(f"Gamma shape must be positive, got {shape}")
    total = 0.0
    for exps, coef in terms.items():
        factor = coef
        for p in exps:
            for i in range(p):
                factor *= shape + i
        total += factor
        if math.isinf(total) or math.isinf(factor):
            raise OverflowError("Gamma moment exceeds double range")
    return total
