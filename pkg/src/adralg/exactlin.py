"""Dense linear algebra over a prime field F_p.

Matrices are plain ``numpy`` integer arrays whose entries lie in ``[0, p)``.
Every routine takes the prime explicitly; ``DEFAULT_PRIME`` is used by the
higher layers when nothing else is configured.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

DEFAULT_PRIME = 101

# Largest prime for which an int64 matmul of two reduced operands cannot
# overflow for inner dimension up to 2**20.
_INT64_SAFE = 3_000_000


class DimensionMismatch(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ValueError(f"{p!r} is not a prime")
    return int(p)


def _dtype(p: int):
    return np.int64 if p < _INT64_SAFE else object


def asmat(entries, p: int, shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """Coerce ``entries`` into a reduced matrix over F_p."""
    a = np.array(entries, dtype=_dtype(p))
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim == 1 and shape is None:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    return a % p


def zeros(rows: int, cols: int, p: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=_dtype(p))


def identity(n: int, p: int) -> np.ndarray:
    return np.eye(n, dtype=_dtype(p))


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1], p)
    return (a @ b) % p


def inv_mod(x: int, p: int) -> int:
    x = int(x) % p
    if x == 0:
        raise ZeroDivisionError("0 has no inverse")
    return pow(x, p - 2, p)


def rref(m: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form and the pivot columns.

    Pivots are found by scanning columns left to right and taking the first
    nonzero entry at or below the current row, so the result is deterministic.
    """
    a = np.array(m, dtype=_dtype(p)) % p
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * inv_mod(a[r, c], p)) % p
        col = a[:, c].copy()
        col[r] = 0
        if col.any():
            a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def row_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Canonical (reduced echelon) basis of the row space."""
    if m.shape[0] == 0:
        return zeros(0, m.shape[1], p)
    r, piv = rref(m, p)
    return r[: len(piv)]


def kernel_basis(m: np.ndarray, p: int) -> List[np.ndarray]:
    """Basis of the right null space ``{x : m x = 0}``.

    Vector ``k`` has a 1 at the k-th free column and 0 at the other free
    columns, which makes coordinates with respect to this basis readable off
    the free positions.
    """
    rows, cols = m.shape
    if rows == 0:
        return [v for v in identity(cols, p)]
    r, piv = rref(m, p)
    free = [c for c in range(cols) if c not in set(piv)]
    out = []
    for f in free:
        v = zeros(1, cols, p)[0]
        v[f] = 1
        for i, pc in enumerate(piv):
            v[pc] = (-r[i, f]) % p
        out.append(v)
    return out


def kernel_matrix(m: np.ndarray, p: int) -> np.ndarray:
    """Kernel basis vectors stacked as rows (shape ``k x cols``)."""
    ks = kernel_basis(m, p)
    if not ks:
        return zeros(0, m.shape[1], p)
    return np.vstack(ks)


def left_kernel(m: np.ndarray, p: int) -> np.ndarray:
    """Rows ``v`` with ``v @ m == 0``, as a reduced echelon row basis."""
    return row_basis(kernel_matrix(m.T, p), p)


def solve(m: np.ndarray, b: Sequence[int], p: int) -> Optional[np.ndarray]:
    """One solution of ``m x = b`` with free variables set to zero, or None."""
    b = np.array(b, dtype=_dtype(p)).reshape(-1) % p
    rows, cols = m.shape
    if b.shape[0] != rows:
        raise DimensionMismatch(f"right-hand side has length {b.shape[0]}, expected {rows}")
    aug = np.hstack([np.array(m, dtype=_dtype(p)).reshape(rows, cols), b.reshape(rows, 1)])
    r, piv = rref(aug, p)
    if piv and piv[-1] == cols:
        return None
    x = zeros(1, cols, p)[0]
    for i, pc in enumerate(piv):
        x[pc] = r[i, cols]
    return x


def is_invertible(m: np.ndarray, p: int) -> bool:
    return m.ndim == 2 and m.shape[0] == m.shape[1] and rank(m, p) == m.shape[0]


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    if not is_invertible(m, p):
        raise ValueError("matrix is not invertible")
    r, _ = rref(np.hstack([m % p, identity(n, p)]), p)
    return r[:, n:]


def intersect_rows(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Row basis of ``rowspace(a) ∩ rowspace(b)``."""
    n = a.shape[1]
    if a.shape[0] == 0 or b.shape[0] == 0:
        return zeros(0, n, p)
    # x a = y b  <=>  [x y] @ [a; -b] = 0
    k = left_kernel(np.vstack([a, (-b) % p]), p)
    if k.shape[0] == 0:
        return zeros(0, n, p)
    return row_basis(matmul(k[:, : a.shape[0]], a, p), p)


def sum_rows(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return row_basis(np.vstack([a, b]), p)


class Coordinates:
    """Express vectors in the row span of a fixed basis.

    Picks a set of independent columns once; afterwards each lookup is a
    single small matrix product.
    """

    def __init__(self, basis: np.ndarray, p: int):
        self.p = p
        self.basis = basis
        k = basis.shape[0]
        if k == 0:
            self.cols: List[int] = []
            self.inv = zeros(0, 0, p)
            return
        _, cpiv = rref(basis, p)
        if len(cpiv) != k:
            raise ValueError("basis rows are linearly dependent")
        self.cols = cpiv
        self.inv = inverse(basis[:, cpiv], p)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        """Coordinates of row vector(s) ``v``; assumes ``v`` lies in the span."""
        v = np.atleast_2d(v)
        if not self.cols:
            return zeros(v.shape[0], 0, self.p)
        return matmul(v[:, self.cols] % self.p, self.inv, self.p)

    def contains(self, v: np.ndarray) -> bool:
        v = np.atleast_2d(v) % self.p
        return bool(np.array_equal(matmul(self(v), self.basis, self.p), v))
