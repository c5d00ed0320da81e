"""Endomorphism algebras, Jacobson radicals and Krull-Schmidt decomposition."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .exactla import column_space_mod, matmul_mod, nullspace_mod, rank_mod, solve_mod
from .homology import HomSpace, hom_basis
from .repcat import Rep, RepError, RepMorphism, direct_sum, sub_quotient


class NonSplitError(RepError):
    """End(X)/rad End(X) is a proper field extension of F_p."""


@dataclass
class FiniteAlgebra:
    """Finite-dimensional associative algebra over F_p by structure constants.

    ``table[i, j]`` holds the coordinates of b_i * b_j.
    """

    p: int
    table: np.ndarray
    unit: np.ndarray

    @property
    def dim(self) -> int:
        return self.table.shape[0]

    def multiply(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(x), np.asarray(y), self.table) % self.p

    def left_regular(self, x) -> np.ndarray:
        """Matrix of y -> x * y."""
        return np.einsum("i,ijk->kj", np.asarray(x), self.table) % self.p

    def regular_matrices(self) -> List[np.ndarray]:
        eye = np.eye(self.dim, dtype=np.int64)
        return [self.left_regular(eye[i]) for i in range(self.dim)]

    def associativity_defects(self) -> int:
        T = self.table
        left = np.einsum("ijk,klm->ijlm", T, T) % self.p
        right = np.einsum("jlk,ikm->ijlm", T, T) % self.p
        return int(np.count_nonzero((left - right) % self.p))

    def unit_defects(self) -> int:
        eye = np.eye(self.dim, dtype=np.int64)
        bad = 0
        for i in range(self.dim):
            if not np.array_equal(self.multiply(self.unit, eye[i]), eye[i]):
                bad += 1
            if not np.array_equal(self.multiply(eye[i], self.unit), eye[i]):
                bad += 1
        return bad

    def quotient(self, ideal: np.ndarray) -> "FiniteAlgebra":
        """A / I for an ideal spanned by the columns of ``ideal``."""
        p = self.p
        n = self.dim
        from .exactla import complement_basis, inverse_mod

        I = column_space_mod(ideal, p) if ideal.size else np.zeros((n, 0), dtype=np.int64)
        C = complement_basis(I, n, p)
        full = np.concatenate([I, C], axis=1)
        proj = inverse_mod(full, p)[I.shape[1] :]
        k = C.shape[1]
        table = np.zeros((k, k, k), dtype=np.int64)
        for a in range(k):
            for b in range(k):
                table[a, b] = matmul_mod(proj, self.multiply(C[:, a], C[:, b]).reshape(-1, 1), p).ravel()
        unit = matmul_mod(proj, self.unit.reshape(-1, 1), p).ravel()
        return FiniteAlgebra(p, table, unit)


def _lift_power_trace(z: np.ndarray, p: int, i: int) -> int:
    """g_i(z) = (tr(Z^(p^i)) mod p^(i+1)) / p^i for the integer lift Z of z."""
    mod = p ** (i + 1)
    e = p**i
    result = np.eye(z.shape[0], dtype=object)
    base = z.astype(object) % mod
    while e:
        if e & 1:
            result = (result @ base) % mod
        base = (base @ base) % mod
        e >>= 1
    tr = int(np.trace(result)) % mod
    return (tr // p**i) % p


def radical_of_matrix_algebra(mats: Sequence[np.ndarray], p: int) -> np.ndarray:
    """Jacobson radical of the algebra spanned by ``mats`` (closed under product).

    Iterated generalized-trace kernels: I_{-1} = A and
    I_i = {x in I_{i-1} : g_i(x y) = 0 for all y in A},
    i = 0 .. floor(log_p n).  Returns coefficient vectors (columns).
    """
    d = len(mats)
    if d == 0:
        return np.zeros((0, 0), dtype=np.int64)
    n = mats[0].shape[0]
    cur = np.eye(d, dtype=np.int64)  # columns: coordinates of I_{i-1}
    i = 0
    while True:
        if cur.shape[1] == 0:
            break
        elems = [sum((int(c) * mats[k] for k, c in enumerate(cur[:, t]) if c), np.zeros((n, n), dtype=np.int64)) % p for t in range(cur.shape[1])]
        G = np.zeros((d, cur.shape[1]), dtype=np.int64)
        for t, x in enumerate(elems):
            for j, y in enumerate(mats):
                G[j, t] = _lift_power_trace(matmul_mod(x, y, p), p, i)
        ker = nullspace_mod(G, p)
        cur = matmul_mod(cur, ker, p) if ker.shape[1] else np.zeros((d, 0), dtype=np.int64)
        i += 1
        if p**i > n:
            break
    return column_space_mod(cur, p) if cur.shape[1] else cur


def radical(a: FiniteAlgebra) -> np.ndarray:
    """Basis (columns, algebra coordinates) of the Jacobson radical."""
    return radical_of_matrix_algebra(a.regular_matrices(), a.p)


def nilpotency_index(a: FiniteAlgebra, ideal: np.ndarray) -> Optional[int]:
    """Least k with ideal^k = 0, or None if the ideal is not nilpotent."""
    p = a.p
    if ideal.shape[1] == 0:
        return 0
    cur = column_space_mod(ideal, p)
    power = 1
    while cur.shape[1]:
        if power > a.dim + 1:
            return None
        prods = [a.multiply(cur[:, s], ideal[:, t]) for s in range(cur.shape[1]) for t in range(ideal.shape[1])]
        cur = column_space_mod(np.stack(prods, axis=1), p)
        power += 1
    return power


# ---------------------------------------------------------------------------
# endomorphism algebras


@dataclass
class EndAlgebra(FiniteAlgebra):
    homspace: HomSpace = None

    def element(self, coeffs) -> RepMorphism:
        return self.homspace.combination(coeffs)


def end_algebra(m: Rep) -> EndAlgebra:
    H = hom_basis(m, m)
    p = m.p
    d = H.dim
    table = np.zeros((d, d, d), dtype=np.int64)
    if d:
        prods = []
        for i in range(d):
            for j in range(d):
                prods.append((H.basis[i] @ H.basis[j]).to_vector())
        rhs = np.stack(prods, axis=1)
        sol = solve_mod(H.matrix, rhs, p)
        table = sol.T.reshape(d, d, d).copy()
    ident = np.concatenate([np.eye(m.dims[v], dtype=np.int64).ravel() for v in m.quiver.vertices]) if d else np.zeros(0, dtype=np.int64)
    unit = solve_mod(H.matrix, ident, p) if d else np.zeros(0, dtype=np.int64)
    return EndAlgebra(p, table, unit, H)


def end_radical(m: Rep, H: Optional[HomSpace] = None) -> np.ndarray:
    """Radical of End(m) computed on the faithful module m itself."""
    H = H or hom_basis(m, m)
    mats = [f.total_matrix() for f in H.basis]
    return radical_of_matrix_algebra(mats, m.p)


def lift_idempotent(e: np.ndarray, p: int, max_iter: int = 64) -> np.ndarray:
    """Lift a matrix idempotent modulo a nilpotent ideal: e <- 3e^2 - 2e^3."""
    for _ in range(max_iter):
        e2 = matmul_mod(e, e, p)
        if np.array_equal(e2, e):
            return e
        e = (3 * e2 - 2 * matmul_mod(e2, e, p)) % p
    raise ValueError("idempotent lifting did not converge")


# ---------------------------------------------------------------------------
# decomposition


@dataclass
class Decomposition:
    module: Rep
    summands: List[Rep]
    inclusions: List[RepMorphism]
    projections: List[RepMorphism]
    pieces: List[Tuple[Rep, int]] = field(default_factory=list)

    def multiset(self) -> List[Tuple[Tuple[int, ...], int]]:
        return [(r.dim_vector, k) for r, k in self.pieces]


def _block_power(b: np.ndarray, k: int, p: int) -> np.ndarray:
    out = np.eye(b.shape[0], dtype=np.int64)
    base = b
    while k:
        if k & 1:
            out = matmul_mod(out, base, p)
        base = matmul_mod(base, base, p)
        k >>= 1
    return out


def fitting_split(f: RepMorphism):
    """(kernel family, image family) of f^N, or None if f is nilpotent or invertible."""
    p = f.p
    src = f.source
    ker, img = {}, {}
    tot_img = 0
    for v, b in f.blocks.items():
        d = src.dims[v]
        if d == 0:
            ker[v] = img[v] = np.zeros((0, 0), dtype=np.int64)
            continue
        pw = _block_power(b, d, p)
        img[v] = column_space_mod(pw, p)
        ker[v] = nullspace_mod(pw, p)
        tot_img += img[v].shape[1]
    if tot_img == 0 or tot_img == src.total_dim:
        return None
    return ker, img


def _is_local(m: Rep, H: HomSpace) -> Tuple[bool, int]:
    if H.dim == 1:
        return True, 0
    rad = end_radical(m, H)
    return H.dim - rad.shape[1] == 1, H.dim - rad.shape[1]


def _split_once(m: Rep, rng: random.Random, tries: int = 200):
    """Return (ker family, image family) of a splitting endomorphism, or None if m is indecomposable."""
    H = hom_basis(m, m)
    if H.dim <= 1:
        return None
    p = m.p
    for f in H.basis:
        s = fitting_split(f)
        if s:
            return s
    local, top = _is_local(m, H)
    if local:
        return None
    for _ in range(tries):
        f = H.combination([rng.randrange(p) for _ in range(H.dim)])
        s = fitting_split(f)
        if s:
            return s
    raise NonSplitError(
        f"End/rad has dimension {top} but no idempotent was found; the endomorphism residue field is not F_{p}"
    )


def _indec_iso(x: Rep, y: Rep) -> Optional[RepMorphism]:
    """An isomorphism x -> y between indecomposables, or None."""
    if x.dim_vector != y.dim_vector:
        return None
    if x.total_dim == 0:
        return RepMorphism(x, y, {})
    A = hom_basis(x, y)
    if A.dim == 0:
        return None
    B = hom_basis(y, x)
    for f in A.basis:
        if not f.is_iso():
            continue
        return f
    for g in B.basis:
        for f in A.basis:
            if (g @ f).is_iso():
                return f
    return None


def decompose(m: Rep, seed: int = 0) -> Decomposition:
    """Split ``m`` into indecomposables by Fitting decompositions of endomorphisms."""
    rng = random.Random(seed)
    p = m.p
    a = m.algebra
    done: List[Tuple[Rep, RepMorphism]] = []
    stack: List[Tuple[Rep, RepMorphism]] = []
    if m.total_dim:
        stack.append((m, RepMorphism(m, m, {v: np.eye(d, dtype=np.int64) for v, d in m.dims.items()})))
    while stack:
        x, inc = stack.pop()
        s = _split_once(x, rng)
        if s is None:
            done.append((x, inc))
            continue
        ker, img = s
        for fam in (ker, img):
            sq = sub_quotient(x, fam)
            stack.append((sq.sub, inc @ sq.inclusion))
    done.sort(key=lambda t: (t[0].total_dim, t[0].dim_vector))
    summands = [x for x, _ in done]
    incs = [i for _, i in done]
    # projections from the inverse of the assembled isomorphism
    projs = []
    if summands:
        blocks = {v: np.concatenate([i.blocks[v] for i in incs], axis=1) for v in a.quiver.vertices}
        from .exactla import inverse_mod

        inv = {v: inverse_mod(b, p) if b.shape[0] else b.T for v, b in blocks.items()}
        offs = {v: 0 for v in a.quiver.vertices}
        for x in summands:
            pb = {}
            for v in a.quiver.vertices:
                pb[v] = inv[v][offs[v] : offs[v] + x.dims[v], :]
                offs[v] += x.dims[v]
            projs.append(RepMorphism(m, x, pb))
    pieces: List[Tuple[Rep, int]] = []
    for x in summands:
        for k, (y, c) in enumerate(pieces):
            if _indec_iso(x, y) is not None:
                pieces[k] = (y, c + 1)
                break
        else:
            pieces.append((x, 1))
    return Decomposition(m, summands, incs, projs, pieces)


def is_indecomposable(m: Rep) -> bool:
    if m.total_dim == 0:
        return False
    return _split_once(m, random.Random(0)) is None


def match_multisets(xs: Sequence[Tuple[Rep, int]], ys: Sequence[Tuple[Rep, int]]) -> bool:
    ys = list(ys)
    for x, c in xs:
        for k, (y, d) in enumerate(ys):
            if c == d and _indec_iso(x, y) is not None:
                ys.pop(k)
                break
        else:
            return False
    return not ys


def is_isomorphic(m: Rep, n: Rep) -> bool:
    if not m.algebra.same_presentation(n.algebra):
        raise RepError("representations over different algebras")
    if m.dim_vector != n.dim_vector:
        return False
    if m.total_dim == 0:
        return True
    return match_multisets(decompose(m).pieces, decompose(n).pieces)
