"""Symmetric tensors over R^d in sorted-multi-index storage, plus a dense twin.

A symmetric order-k tensor is stored as a map from a nondecreasing index
tuple alpha (labels 1..d) to the common value taken on every arrangement
of alpha.  The full-tensor inner product therefore weights each stored
entry by the number of distinct arrangements, k!/prod_j m_j! where m_j
are the multiplicities in alpha:

    <f, g> = sum_alpha f_alpha g_alpha k! / prod_j m_j!

``PlainTensor`` is a dense numpy-backed tensor without symmetry used as
the small-scale reference: contractions are defined there by explicit
index summation, and the sparse ``sym_contract`` is checked against
``symmetrize(contract(f, g, r))`` in the test suite.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter

import numpy as np

_DENSE_CELL_LIMIT = 2**24


def _arrangement_count(alpha: tuple[int, ...]) -> int:
    """Number of distinct orderings of the multiset alpha."""
    n = math.factorial(len(alpha))
    for m in Counter(alpha).values():
        n //= math.factorial(m)
    return n


def _mult_factorial(alpha: tuple[int, ...]) -> int:
    out = 1
    for m in Counter(alpha).values():
        out *= math.factorial(m)
    return out


def _sub_multisets(alpha: tuple[int, ...], r: int):
    """Yield (sub, rest) over distinct sub-multisets of alpha of size r."""
    items = sorted(Counter(alpha).items())
    vals = [v for v, _ in items]
    mults = [m for _, m in items]

    def rec(j: int, left: int, chosen: list[int]):
        if j == len(vals):
            if left == 0:
                sub: list[int] = []
                rest: list[int] = []
                for v, m, c in zip(vals, mults, chosen):
                    sub.extend([v] * c)
                    rest.extend([v] * (m - c))
                yield tuple(sub), tuple(rest)
            return
        avail = mults[j]
        tail = sum(mults[j + 1 :])
        lo = max(0, left - tail)
        hi = min(avail, left)
        for c in range(lo, hi + 1):
            yield from rec(j + 1, left - c, chosen + [c])

    yield from rec(0, r, [])


class SymmetricKernel:
    """Symmetric order-k tensor on R^d, sparse over sorted index tuples."""

    __slots__ = ("d", "order", "coeffs")

    def __init__(self, d: int, order: int, coeffs: dict[tuple[int, ...], float] | None = None):
        if d < 1:
            raise ValueError(f"dimension must be >= 1, got {d}")
        if order < 0:
            raise ValueError(f"order must be nonnegative, got {order}")
        self.d = d
        self.order = order
        clean: dict[tuple[int, ...], float] = {}
        for alpha, val in (coeffs or {}).items():
            alpha = tuple(alpha)
            if len(alpha) != order:
                raise ValueError(f"index tuple {alpha} has length != order {order}")
            if any((not isinstance(i, int)) or not 1 <= i <= d for i in alpha):
                raise ValueError(f"index labels in {alpha} outside 1..{d}")
            if any(alpha[i] > alpha[i + 1] for i in range(len(alpha) - 1)):
                raise ValueError(f"index tuple {alpha} is not sorted")
            v = float(val)
            if v != 0.0:
                clean[alpha] = clean.get(alpha, 0.0) + v
        self.coeffs = {k: v for k, v in clean.items() if v != 0.0}

    @classmethod
    def from_elementary(cls, d: int, indices: tuple[int, ...]) -> SymmetricKernel:
        """Symmetrization of e_{i1} x ... x e_{ik} for the given labels."""
        alpha = tuple(sorted(indices))
        k = len(alpha)
        value = _mult_factorial(alpha) / math.factorial(k) if k else 1.0
        return cls(d, k, {alpha: value})

    def __repr__(self) -> str:
        return (
            f"SymmetricKernel(d={self.d}, order={self.order}, "
            f"entries={len(self.coeffs)})"
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SymmetricKernel)
            and self.d == other.d
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        raise TypeError("SymmetricKernel is not hashable")

    def scale(self, c: float) -> SymmetricKernel:
        return SymmetricKernel(
            self.d, self.order, {a: c * v for a, v in self.coeffs.items()}
        )

    def add(self, other: SymmetricKernel) -> SymmetricKernel:
        if (self.d, self.order) != (other.d, other.order):
            raise ValueError("kernel shape mismatch in addition")
        out = dict(self.coeffs)
        for a, v in other.coeffs.items():
            out[a] = out.get(a, 0.0) + v
        return SymmetricKernel(self.d, self.order, out)

    def slice_index(self, x: int) -> SymmetricKernel:
        """The order-(k-1) kernel f(., x): drop one occurrence of label x.

        The stored common value is unchanged, since the slice at tuple
        beta is by definition the full-tensor entry at (beta, x).
        """
        if self.order == 0:
            raise ValueError("cannot slice an order-0 kernel")
        if not 1 <= x <= self.d:
            raise ValueError(f"index label {x} outside 1..{self.d}")
        out: dict[tuple[int, ...], float] = {}
        for alpha, v in self.coeffs.items():
            if x in alpha:
                pos = alpha.index(x)
                out[alpha[:pos] + alpha[pos + 1 :]] = v
        return SymmetricKernel(self.d, self.order - 1, out)

    def inner(self, other: SymmetricKernel) -> float:
        """Full-tensor inner product <f, g> over all d^k entries."""
        if (self.d, self.order) != (other.d, other.order):
            raise ValueError("kernel shape mismatch in inner product")
        small, big = (self.coeffs, other.coeffs)
        if len(big) < len(small):
            small, big = big, small
        total = 0.0
        for alpha, v in small.items():
            w = big.get(alpha)
            if w is not None:
                total += v * w * _arrangement_count(alpha)
        return total

    def norm_sq(self) -> float:
        return sum(v * v * _arrangement_count(a) for a, v in self.coeffs.items())

    def to_dense(self) -> PlainTensor:
        t = PlainTensor.zeros(self.d, self.order)
        arr = t.array
        for alpha, v in self.coeffs.items():
            for perm in set(itertools.permutations(alpha)):
                arr[tuple(i - 1 for i in perm)] = v
        return t


class PlainTensor:
    """Dense order-m tensor on R^d with no symmetry assumption."""

    __slots__ = ("d", "order", "array")

    def __init__(self, d: int, order: int, array: np.ndarray):
        expected = (d,) * order
        array = np.asarray(array, dtype=float)
        if array.shape != expected:
            raise ValueError(f"array shape {array.shape} != {expected}")
        self.d = d
        self.order = order
        self.array = array

    @classmethod
    def zeros(cls, d: int, order: int) -> PlainTensor:
        if d**order > _DENSE_CELL_LIMIT:
            raise ValueError(f"dense tensor with {d}^{order} cells is too large")
        return cls(d, order, np.zeros((d,) * order))

    @classmethod
    def basis(cls, d: int, indices: tuple[int, ...]) -> PlainTensor:
        """Elementary tensor e_{i1} x ... x e_{ik} (1-based labels)."""
        t = cls.zeros(d, len(indices))
        t.array[tuple(i - 1 for i in indices)] = 1.0
        return t

    def scale(self, c: float) -> PlainTensor:
        return PlainTensor(self.d, self.order, c * self.array)

    def add(self, other: PlainTensor) -> PlainTensor:
        if (self.d, self.order) != (other.d, other.order):
            raise ValueError("tensor shape mismatch in addition")
        return PlainTensor(self.d, self.order, self.array + other.array)

    def inner(self, other: PlainTensor) -> float:
        if (self.d, self.order) != (other.d, other.order):
            raise ValueError("tensor shape mismatch in inner product")
        return float(np.vdot(self.array, other.array))

    def norm_sq(self) -> float:
        return float(np.vdot(self.array, self.array))

    def __repr__(self) -> str:
        return f"PlainTensor(d={self.d}, order={self.order})"


def symmetrize(t: PlainTensor) -> SymmetricKernel:
    """Average of t over all permutations of its slots, as a sparse kernel."""
    m = t.order
    if m > 8:
        raise ValueError(f"refusing to symmetrize order {m} > 8 densely")
    if m == 0:
        return SymmetricKernel(t.d, 0, {(): float(t.array)})
    acc = np.zeros_like(t.array)
    for perm in itertools.permutations(range(m)):
        acc += np.transpose(t.array, perm)
    acc /= math.factorial(m)
    coeffs: dict[tuple[int, ...], float] = {}
    for alpha in itertools.combinations_with_replacement(range(1, t.d + 1), m):
        v = acc[tuple(i - 1 for i in alpha)]
        if v != 0.0:
            coeffs[alpha] = float(v)
    return SymmetricKernel(t.d, m, coeffs)


def contract(f: SymmetricKernel, g: SymmetricKernel, r: int) -> PlainTensor:
    """The r-fold contraction f (x)_r g as a dense tensor.

    (f (x)_r g)[x, y] = sum over t in {1..d}^r of F[x, t] G[y, t],
    computed by explicit index summation on the dense expansions.  Only
    meant for small d and orders; the sparse route is sym_contract.
    """
    if f.d != g.d:
        raise ValueError("dimension mismatch in contraction")
    if not 0 <= r <= min(f.order, g.order):
        raise ValueError(f"contraction count {r} outside 0..min(k, j)")
    out_order = f.order + g.order - 2 * r
    if f.d**out_order > _DENSE_CELL_LIMIT:
        raise ValueError("contraction result too large for dense storage")
    fd = f.to_dense().array
    gd = g.to_dense().array
    if r == 0:
        return PlainTensor(f.d, out_order, np.multiply.outer(fd, gd))
    axes_f = list(range(f.order - r, f.order))
    axes_g = list(range(g.order - r, g.order))
    arr = np.tensordot(fd, gd, axes=(axes_f, axes_g))
    return PlainTensor(f.d, out_order, np.asarray(arr))


def sym_contract(f: SymmetricKernel, g: SymmetricKernel, r: int) -> SymmetricKernel:
    """Symmetrized contraction f (x~)_r g directly in sparse storage.

    Equal to symmetrize(contract(f, g, r)); computed by grouping the
    explicit index sum over multisets.  For an f-entry alpha split into
    (u, s) with |s| = r and a g-entry beta = s + v, the contribution to
    the output entry gamma = u + v carries the exact rational weight

        r!/prod m_s! * (k-r)!/prod m_u! * (j-r)!/prod m_v!
            * prod m_gamma! / (k+j-2r)!

    counting arrangements of the contracted block, of each retained
    block, and the final symmetrization average.
    """
    if f.d != g.d:
        raise ValueError("dimension mismatch in contraction")
    k, j = f.order, g.order
    if not 0 <= r <= min(k, j):
        raise ValueError(f"contraction count {r} outside 0..min(k, j)")
    m = k + j - 2 * r
    r_fact = math.factorial(r)
    km_fact = math.factorial(k - r)
    jm_fact = math.factorial(j - r)
    m_fact = math.factorial(m)

    # index g-entries by their sub-multisets of size r
    g_by_sub: dict[tuple[int, ...], list[tuple[tuple[int, ...], float]]] = {}
    for beta, cg in g.coeffs.items():
        for s, v in _sub_multisets(beta, r):
            g_by_sub.setdefault(s, []).append((v, cg))

    out: dict[tuple[int, ...], float] = {}
    for alpha, cf in f.coeffs.items():
        for s, u in _sub_multisets(alpha, r):
            matches = g_by_sub.get(s)
            if not matches:
                continue
            w_su = (r_fact / _mult_factorial(s)) * (km_fact / _mult_factorial(u))
            for v, cg in matches:
                gamma = tuple(sorted(u + v))
                weight = (
                    w_su
                    * (jm_fact / _mult_factorial(v))
                    * (_mult_factorial(gamma) / m_fact)
                )
                out[gamma] = out.get(gamma, 0.0) + weight * cf * cg
    return SymmetricKernel(f.d, m, out)


def kernel_norm_sq(f: SymmetricKernel) -> float:
    """Full-tensor squared norm of a symmetric kernel."""
    return f.norm_sq()


def kernel_inner(f: SymmetricKernel, g: SymmetricKernel) -> float:
    """Full-tensor inner product of two symmetric kernels."""
    return f.inner(g)
