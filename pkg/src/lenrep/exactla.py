"""Exact linear algebra over prime fields and over the integers.

Matrices over F_p are dense numpy int64 arrays with entries in [0, p).
Integer matrices are lists of lists of Python ints, so intermediate
entry growth in Smith/Hermite reduction never overflows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import List, Sequence, Tuple

import numpy as np

_INT64_MAX = 2**63 - 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if p >= 2**31:
        raise ValueError(f"characteristic {p} too large (must be < 2^31)")
    return p


def as_mod(a, p: int) -> np.ndarray:
    """Coerce an array-like into a 2-d int64 array reduced mod p."""
    arr = np.asarray(a, dtype=object if p >= 2**31 else np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    return np.mod(arr.astype(np.int64), p)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product of two residue matrices, reduced mod p without overflow."""
    inner = a.shape[1] if a.ndim == 2 else a.shape[0]
    if inner and inner * (p - 1) ** 2 > _INT64_MAX:
        prod = a.astype(object) @ b.astype(object)
        return np.mod(prod, p).astype(np.int64)
    return np.mod(a @ b, p)


def inv_mod(x: int, p: int) -> int:
    return pow(int(x), -1, p)


def rref_mod(a: np.ndarray, p: int) -> Tuple[int, np.ndarray, List[int]]:
    """Reduced row echelon form of ``a`` over F_p.

    Returns ``(rank, reduced, pivots)``.  The input is not modified.
    """
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    r = 0
    pivots: List[int] = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        piv = int(m[r, c])
        if piv != 1:
            m[r] = (m[r] * inv_mod(piv, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return r, m, pivots


def rank_mod(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return rref_mod(a, p)[0]


def nullspace_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right null space of ``a`` as the columns of a matrix."""
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    rank, red, pivots = rref_mod(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-red[i, f]) % p
    return basis


def column_space_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Columns of ``a`` forming a basis of its column space (as a new matrix)."""
    if a.shape[1] == 0 or a.shape[0] == 0:
        return np.zeros((a.shape[0], 0), dtype=np.int64)
    rank, red, pivots = rref_mod(a.T, p)
    return red[:rank].T.copy()


def solve_mod(a: np.ndarray, b: np.ndarray, p: int):
    """One solution ``x`` of ``a @ x = b`` over F_p, or None if inconsistent.

    ``b`` may be a vector or a matrix (several right-hand sides).
    """
    vec = b.ndim == 1
    bb = b.reshape(-1, 1) if vec else b
    rows, cols = a.shape
    k = bb.shape[1]
    if rows == 0:
        x = np.zeros((cols, k), dtype=np.int64)
        return x.ravel() if vec else x
    aug = np.concatenate([a % p, bb % p], axis=1)
    rank, red, pivots = rref_mod(aug, p)
    if pivots and pivots[-1] >= cols:
        return None
    x = np.zeros((cols, k), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = red[i, cols:]
    return x.ravel() if vec else x


def inverse_mod(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    x = solve_mod(a, np.eye(n, dtype=np.int64), p)
    if x is None or rank_mod(a, p) != n:
        raise ValueError("matrix is singular")
    return x


def complement_basis(sub: np.ndarray, n: int, p: int) -> np.ndarray:
    """Standard basis vectors completing the columns of ``sub`` to a basis of F_p^n."""
    if sub.shape[1] == 0:
        return np.eye(n, dtype=np.int64)
    rank, red, pivots = rref_mod(sub.T, p)
    pivset = set(pivots)
    free = [c for c in range(n) if c not in pivset]
    out = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        out[f, k] = 1
    return out


def annihilator_rows(sub: np.ndarray, n: int, p: int) -> np.ndarray:
    """Rows spanning the linear forms vanishing on the column span of ``sub``.

    The returned matrix has kernel exactly span(sub).
    """
    if sub.shape[1] == 0:
        return np.eye(n, dtype=np.int64)
    return nullspace_mod(sub.T % p, p).T.copy()


def intersect_spaces(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Basis (columns) of span(a) ∩ span(b)."""
    n = a.shape[0]
    if a.shape[1] == 0 or b.shape[1] == 0:
        return np.zeros((n, 0), dtype=np.int64)
    ker = nullspace_mod(np.concatenate([a, (-b) % p], axis=1), p)
    if ker.shape[1] == 0:
        return np.zeros((n, 0), dtype=np.int64)
    return column_space_mod(matmul_mod(a, ker[: a.shape[1]], p), p)


def in_span(basis: np.ndarray, v: np.ndarray, p: int) -> bool:
    if basis.shape[1] == 0:
        return not np.any(v % p)
    return rank_mod(np.concatenate([basis, v.reshape(-1, 1)], axis=1), p) == rank_mod(basis, p)


@dataclass(frozen=True)
class FieldMatrix:
    """A dense matrix over the prime field F_p."""

    data: np.ndarray
    p: int

    def __post_init__(self):
        check_prime(self.p)
        arr = np.array(self.data, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("FieldMatrix needs a 2-d array")
        arr = arr % self.p
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FieldMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "FieldMatrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.p != other.p:
            raise ValueError("characteristic mismatch")
        return FieldMatrix(matmul_mod(self.data, other.data, self.p), self.p)

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        return FieldMatrix(self.data + other.data, self.p)

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        return FieldMatrix(self.data - other.data, self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.p, self.shape, self.data.tobytes()))

    def tolist(self) -> List[List[int]]:
        return self.data.tolist()


def rref(m: FieldMatrix) -> Tuple[int, FieldMatrix, List[int]]:
    rank, red, pivots = rref_mod(m.data, m.p)
    return rank, FieldMatrix(red, m.p), pivots


def kernel_basis(m: FieldMatrix) -> List[np.ndarray]:
    """Null-space basis of ``m`` as a list of column vectors."""
    ns = nullspace_mod(m.data, m.p)
    return [ns[:, k].copy() for k in range(ns.shape[1])]


# ---------------------------------------------------------------------------
# integer matrices

IntMatrix = List[List[int]]


def int_matrix(rows: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    out = [[int(x) for x in r] for r in rows]
    if ncols is not None and not out:
        return []
    return out


def int_identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def int_matmul(a: IntMatrix, b: IntMatrix, inner: int | None = None) -> IntMatrix:
    if not a:
        return []
    n = len(b[0]) if b else 0
    k = len(b)
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(n)] for i in range(len(a))]


def int_transpose(a: IntMatrix, ncols: int = 0) -> IntMatrix:
    if not a:
        return [[] for _ in range(ncols)]
    return [list(r) for r in zip(*a)]


def _det(a: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def int_det(a: IntMatrix) -> int:
    return _det(a)


@dataclass
class SmithForm:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    diagonal: List[int] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(m: IntMatrix, ncols: int | None = None) -> SmithForm:
    """Smith normal form with unimodular transforms: ``U @ m @ V == D``.

    ``ncols`` is needed only when ``m`` has no rows.
    """
    rows = len(m)
    cols = len(m[0]) if rows else (ncols or 0)
    A = [list(map(int, r)) for r in m]
    U = int_identity(rows)
    V = int_identity(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row dst += q*row src
        if q:
            A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):  # col dst += q*col src
        if q:
            for r in A:
                r[dst] += q * r[src]
            for r in V:
                r[dst] += q * r[src]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero |entry| in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
                        swap_rows(t, i)
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
                        swap_cols(t, j)
            if not done:
                continue
            # divisibility of the remaining block by the pivot
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if A[i][j] % A[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diag = [A[i][i] for i in range(min(rows, cols))]
    return SmithForm(U, A, V, diag)


def hermite_rows(gens: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """Row Hermite normal form of the lattice spanned by ``gens`` in Z^n.

    Zero rows are dropped; pivots positive and entries above pivots reduced
    into [0, pivot).  Two generator sets span the same lattice iff their
    Hermite forms coincide.
    """
    A = [list(map(int, g)) for g in gens if any(g)]
    out: IntMatrix = []
    col = 0
    while A and col < n:
        nz = [r for r in A if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in A if not r[col]]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            nxt = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r2 = [x - q * y for x, y in zip(r, piv)]
                if r2[col]:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = nxt
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        A = rest
        col += 1
    # reduce above pivots
    for i in range(len(out)):
        pc = next(c for c in range(n) if out[i][c])
        for k in range(i):
            q = out[k][pc] // out[i][pc]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], out[i])]
    return out


def lattice_equal(gens_a: Sequence[Sequence[int]], gens_b: Sequence[Sequence[int]], n: int | None = None) -> bool:
    """True iff the two generator sets span the same sublattice of Z^n."""
    if n is None:
        lens = {len(g) for g in list(gens_a) + list(gens_b)}
        if len(lens) > 1:
            raise ValueError("generators of different ambient rank")
        n = lens.pop() if lens else 0
    return hermite_rows(gens_a, n) == hermite_rows(gens_b, n)


def integer_kernel(m: IntMatrix, ncols: int) -> List[List[int]]:
    """Basis of {x in Z^ncols : m x = 0}, read off the Smith transform V."""
    snf = smith_normal_form(m, ncols)
    r = snf.rank
    return [[snf.V[i][j] for i in range(ncols)] for j in range(r, ncols)]


def solve_integer(gens: Sequence[Sequence[int]], target: Sequence[int]):
    """Integer coefficients c with sum c_k gens[k] == target, or None."""
    k = len(gens)
    n = len(target)
    if k == 0:
        return [] if not any(target) else None
    # columns are generators: G c = target
    G = [[gens[j][i] for j in range(k)] for i in range(n)]
    snf = smith_normal_form(G, k)
    b = [sum(snf.U[i][t] * target[t] for t in range(n)) for i in range(n)]
    y = [0] * k
    for i in range(n):
        d = snf.diagonal[i] if i < len(snf.diagonal) else 0
        if d == 0:
            if b[i]:
                return None
        else:
            if b[i] % d:
                return None
            y[i] = b[i] // d
    return [sum(snf.V[j][i] * y[i] for i in range(k)) for j in range(k)]
