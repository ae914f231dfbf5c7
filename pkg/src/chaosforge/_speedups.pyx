# cython: language_level=3
"""Compiled inner loops for sparse polynomial algebra.

Exponent multi-indices for dimension d <= 8 are packed into a single
uint64 (8 bits per coordinate), so multiplying two polynomials becomes
integer addition of keys accumulated in a C++ hash map.  Callers route
through ``chaosforge.kernels`` which falls back to the pure-Python twin
for d > 8 or when this module is unavailable.
"""

from libc.stdint cimport uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector
from libcpp.utility cimport pair

import math

BACKEND = "compiled"

DEF MAX_PACK_DIM = 8


cdef inline uint64_t _pack(tuple exps) except? 0xFFFFFFFFFFFFFFFF:
    cdef uint64_t key = 0
    cdef Py_ssize_t j
    cdef Py_ssize_t d = len(exps)
    cdef long e
    for j in range(d):
        e = exps[j]
        if e < 0 or e > 127:
            raise ValueError("exponent out of packable range")
        key |= (<uint64_t> e) << (8 * j)
    return key


cdef inline tuple _unpack(uint64_t key, Py_ssize_t d):
    cdef Py_ssize_t j
    return tuple((key >> (8 * j)) & 0xFF for j in range(d))


def mul_terms(dict a, dict b):
    """Multiply two sparse polynomials given as {exponent tuple: coeff}."""
    cdef Py_ssize_t d = -1
    for k in a:
        d = len(k)
        break
    if d < 0:
        for k in b:
            d = len(k)
            break
    if d < 0:
        return {}
    if d > MAX_PACK_DIM:
        raise ValueError("compiled kernel packs at most 8 coordinates")

    cdef vector[uint64_t] keys_a, keys_b
    cdef vector[double] vals_a, vals_b
    keys_a.reserve(len(a))
    vals_a.reserve(len(a))
    for k, v in a.items():
        keys_a.push_back(_pack(k))
        vals_a.push_back(v)
    keys_b.reserve(len(b))
    vals_b.reserve(len(b))
    for k, v in b.items():
        keys_b.push_back(_pack(k))
        vals_b.push_back(v)

    cdef unordered_map[uint64_t, double] acc
    acc.reserve(keys_a.size() * 2)
    cdef Py_ssize_t i, j
    cdef uint64_t ka
    cdef double va
    for i in range(<Py_ssize_t> keys_a.size()):
        ka = keys_a[i]
        va = vals_a[i]
        for j in range(<Py_ssize_t> keys_b.size()):
            acc[ka + keys_b[j]] += va * vals_b[j]

    out = {}
    cdef pair[uint64_t, double] item
    for item in acc:
        out[_unpack(item.first, d)] = item.second
    return out


def expectation_gaussian(dict terms):
    """Moment of a polynomial in independent standard Gaussians."""
    cdef double total = 0.0
    cdef double factor
    cdef long p
    for exps, coef in terms.items():
        factor = coef
        for e in exps:
            p = e
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


def expectation_gamma(dict terms, double shape):
    """Moment of a polynomial in independent Gamma(shape, 1) coordinates."""
    if shape <= 0.0:
        raise ValueError(f"Gamma shape must be positive, got {shape}")
    cdef double total = 0.0
    cdef double factor
    cdef long p, i
    for exps, coef in terms.items():
        factor = coef
        for e in exps:
            p = e
            for i in range(p):
                factor *= shape + i
        total += factor
        if math.isinf(total) or math.isinf(factor):
            raise OverflowError("Gamma moment exceeds double range")
    return total
