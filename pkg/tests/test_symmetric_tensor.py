import math

import numpy as np
import pytest

from chaosforge.symmetric_tensor import (
    PlainTensor,
    SymmetricKernel,
    contract,
    kernel_inner,
    sym_contract,
    symmetrize,
)
from chaosforge.corpus import random_kernel

from conftest import spawn_rngs


def test_from_elementary_stores_symmetrized_value():
    f = SymmetricKernel.from_elementary(2, (1, 2))
    assert f.coeffs == {(1, 2): 0.5}
    g = SymmetricKernel.from_elementary(3, (2, 2))
    assert g.coeffs == {(2, 2): 1.0}


def test_sorted_tuple_validation():
    with pytest.raises(ValueError):
        SymmetricKernel(2, 2, {(2, 1): 1.0})
    with pytest.raises(ValueError):
        SymmetricKernel(2, 2, {(1, 3): 1.0})
    with pytest.raises(ValueError):
        SymmetricKernel(2, 1, {(1, 1): 1.0})


def test_norm_and_inner_match_dense():
    for rng in spawn_rngs(31, 25):
        d = int(rng.integers(1, 4))
        k = int(rng.integers(1, 4))
        f = random_kernel(rng, d, k)
        g = random_kernel(rng, d, k)
        fd, gd = f.to_dense(), g.to_dense()
        assert f.norm_sq() == pytest.approx(fd.norm_sq(), rel=1e-12, abs=1e-12)
        assert f.inner(g) == pytest.approx(fd.inner(gd), rel=1e-12, abs=1e-12)
        assert kernel_inner(f, g) == pytest.approx(kernel_inner(g, f), rel=1e-13)


def test_slice_index_drops_one_occurrence():
    f = SymmetricKernel(3, 3, {(1, 1, 2): 2.0, (2, 3, 3): -1.0})
    s1 = f.slice_index(1)
    assert s1.coeffs == {(1, 2): 2.0}
    s3 = f.slice_index(3)
    assert s3.coeffs == {(2, 3): -1.0}
    assert f.slice_index(1).order == 2


def test_symmetrize_of_dense_agrees_with_permutation_average():
    t = PlainTensor.basis(2, (1, 2)).add(PlainTensor.basis(2, (1, 1)).scale(2.0))
    s = symmetrize(t)
    assert s.coeffs[(1, 2)] == pytest.approx(0.5)
    assert s.coeffs[(1, 1)] == pytest.approx(2.0)


def test_sym_contract_pinned_second_order_example():
    # f = sym(e1 (x) e2): contraction against itself over one index
    f = SymmetricKernel.from_elementary(2, (1, 2))
    c = sym_contract(f, f, 1)
    assert c.coeffs == {(1, 1): 0.25, (2, 2): 0.25}
    assert c.norm_sq() == pytest.approx(0.125)


def test_full_contraction_equals_inner_product():
    for rng in spawn_rngs(32, 15):
        d = int(rng.integers(1, 4))
        k = int(rng.integers(1, 4))
        f = random_kernel(rng, d, k)
        g = random_kernel(rng, d, k)
        c = sym_contract(f, g, k)
        assert c.order == 0
        got = c.coeffs.get((), 0.0)
        assert got == pytest.approx(f.inner(g), rel=1e-12, abs=1e-12)


def test_sym_contract_matches_dense_route_on_corpus():
    """sparse multiset contraction == tensordot + permutation average"""
    for rng in spawn_rngs(33, 40):
        d = int(rng.integers(1, 4))
        p = int(rng.integers(1, 4))
        q = int(rng.integers(1, 4))
        f = random_kernel(rng, d, p)
        g = random_kernel(rng, d, q)
        for r in range(0, min(p, q) + 1):
            if p + q - 2 * r == 0:
                continue
            sparse = sym_contract(f, g, r)
            dense = symmetrize(contract(f, g, r))
            keys = set(sparse.coeffs) | set(dense.coeffs)
            for alpha in keys:
                assert sparse.coeffs.get(alpha, 0.0) == pytest.approx(
                    dense.coeffs.get(alpha, 0.0), rel=1e-11, abs=1e-11
                ), (d, p, q, r, alpha)


def test_contraction_bilinearity():
    rng = spawn_rngs(34, 1)[0]
    f = random_kernel(rng, 3, 2)
    g = random_kernel(rng, 3, 2)
    h = random_kernel(rng, 3, 2)
    left = sym_contract(f.add(g.scale(2.0)), h, 1)
    right = sym_contract(f, h, 1).add(sym_contract(g, h, 1).scale(2.0))
    keys = set(left.coeffs) | set(right.coeffs)
    for alpha in keys:
        assert left.coeffs.get(alpha, 0.0) == pytest.approx(
            right.coeffs.get(alpha, 0.0), rel=1e-12, abs=1e-12
        )


def test_dense_cell_limit_guard():
    with pytest.raises(ValueError):
        PlainTensor.zeros(10, 9)  # 10^9 cells is past the dense limit
