"""Symmetric CSR matrices and Jacobi-preconditioned conjugate gradients."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
import scipy.sparse as sp

from ..errors import ConvergenceError, IndefiniteMatrixError, ValidationError


@dataclass(frozen=True, eq=False)
class SparseSymMatrix:
    """Square symmetric matrix in CSR form with sorted column indices and an
    explicit diagonal.  Matrix-vector products go through scipy."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray

    def __post_init__(self):
        for name, dtype in (("indptr", np.int64), ("indices", np.int64), ("data", float)):
            arr = np.ascontiguousarray(getattr(self, name), dtype=dtype)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if len(self.indptr) != self.n + 1 or len(self.indices) != len(self.data):
            raise ValidationError("inconsistent CSR arrays")

    @classmethod
    def from_triplets(cls, n, rows, cols, vals) -> "SparseSymMatrix":
        """Sum duplicate entries of the upper triangle (row <= col) and mirror.

        Entries below the diagonal are ignored; callers pass full symmetric
        element blocks.  Mirroring makes (i, j) and (j, i) bit-identical.
        """
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        vals = np.asarray(vals, dtype=float).ravel()
        upper = rows <= cols
        rows, cols, vals = rows[upper], cols[upper], vals[upper]
        diag = np.arange(n, dtype=np.int64)
        rows = np.concatenate([diag, rows])
        cols = np.concatenate([diag, cols])
        vals = np.concatenate([np.zeros(n), vals])
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        start = np.ones(len(rows), dtype=bool)
        start[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
        heads = np.nonzero(start)[0]
        summed = np.add.reduceat(vals, heads) if len(vals) else vals
        r, c = rows[heads], cols[heads]
        off = r != c
        full_r = np.concatenate([r, c[off]])
        full_c = np.concatenate([c, r[off]])
        full_v = np.concatenate([summed, summed[off]])
        order = np.lexsort((full_c, full_r))
        full_r, full_c, full_v = full_r[order], full_c[order], full_v[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(full_r, minlength=n), out=indptr[1:])
        return cls(n, indptr, full_c, full_v)

    @classmethod
    def zeros(cls, n) -> "SparseSymMatrix":
        return cls.from_triplets(n, [], [], [])

    @cached_property
    def csr(self) -> sp.csr_matrix:
        m = sp.csr_matrix((self.data, self.indices, self.indptr), shape=(self.n, self.n))
        m.has_sorted_indices = True
        return m

    def matvec(self, x):
        return self.csr @ x

    def __matmul__(self, x):
        return self.matvec(x)

    def diagonal(self) -> np.ndarray:
        return self.csr.diagonal()

    def toarray(self) -> np.ndarray:
        return self.csr.toarray()

    def _combine(self, other_csr, scale_self, scale_other) -> "SparseSymMatrix":
        m = (scale_self * self.csr + scale_other * other_csr).tocsr()
        m.sort_indices()
        return SparseSymMatrix(self.n, m.indptr, m.indices, m.data)

    def __add__(self, other: "SparseSymMatrix") -> "SparseSymMatrix":
        if other.n != self.n:
            raise ValidationError("dimension mismatch")
        return self._combine(other.csr, 1.0, 1.0)

    def scaled(self, factor: float) -> "SparseSymMatrix":
        return SparseSymMatrix(self.n, self.indptr, self.indices, factor * self.data)

    def is_structurally_symmetric(self) -> bool:
        pattern = sp.csr_matrix((np.ones_like(self.data), self.indices, self.indptr),
                                shape=(self.n, self.n))
        return (pattern != pattern.T).nnz == 0

    def is_symmetric(self) -> bool:
        return (self.csr != self.csr.T).nnz == 0


@dataclass(frozen=True, eq=False)
class LinearSystem:
    matrix: SparseSymMatrix
    rhs: np.ndarray

    def __post_init__(self):
        if len(self.rhs) != self.matrix.n:
            raise ValidationError("matrix and right-hand side sizes differ")

    def residual(self, x) -> np.ndarray:
        return self.rhs - self.matrix @ x


@dataclass(frozen=True)
class CGResult:
    x: np.ndarray
    iterations: int
    residual_norm: float
    rhs_norm: float


def default_max_iter(n: int) -> int:
    return max(1, math.ceil(20.0 * math.sqrt(n)))


def solve_cg(system: LinearSystem, rel_tol: float = 1e-10,
             max_iter: Optional[int] = None, x0: Optional[np.ndarray] = None) -> CGResult:
    """Preconditioned CG with the diagonal of the matrix as preconditioner.

    Stops when ``||b - A x||_2 <= rel_tol * ||b||_2`` (true residual,
    recomputed at the end).  Raises ``IndefiniteMatrixError`` when a search
    direction has non-positive curvature and ``ConvergenceError`` after
    ``max_iter`` iterations.
    """
    if not 0 < rel_tol < 1:
        raise ValidationError("rel_tol must lie in (0, 1)", key="solver.rel_tol")
    A = system.matrix
    b = np.asarray(system.rhs, dtype=float)
    n = A.n
    max_iter = default_max_iter(n) if max_iter is None else int(max_iter)
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return CGResult(np.zeros(n), 0, 0.0, 0.0)
    d = A.diagonal()
    if np.any(d <= 0):
        raise IndefiniteMatrixError("matrix has a non-positive diagonal entry")
    inv_d = 1.0 / d
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    r = b - A @ x if x0 is not None else b.copy()
    target = rel_tol * bnorm
    rnorm = float(np.linalg.norm(r))
    if rnorm <= target:
        return CGResult(x, 0, rnorm, bnorm)
    z = inv_d * r
    p = z.copy()
    rz = float(r @ z)
    for it in range(1, max_iter + 1):
        Ap = A @ p
        curvature = float(p @ Ap)
        if curvature <= 0.0:
            raise IndefiniteMatrixError(
                f"non-positive curvature p'Ap={curvature:.3e} at iteration {it}")
        step = rz / curvature
        x += step * p
        r -= step * Ap
        rnorm = float(np.linalg.norm(r))
        if rnorm <= target:
            # guard against drift of the recursive residual
            true_r = float(np.linalg.norm(b - A @ x))
            if true_r <= target:
                return CGResult(x, it, true_r, bnorm)
            r = b - A @ x
        z = inv_d * r
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise ConvergenceError(
        f"CG did not converge in {max_iter} iterations "
        f"(relative residual {rnorm / bnorm:.3e} > {rel_tol:.1e})",
        iterations=max_iter, residual=rnorm / bnorm)
