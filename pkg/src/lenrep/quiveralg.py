"""Quivers, relations and truncated path algebras A_l = kQ / (I + R^l).

Paths are tuples of arrow names in traversal order.  The algebra product
``u * v`` means "first traverse v, then u", so in traversal order it is
the concatenation ``v + u``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exactla import check_prime, rref_mod

Path = Tuple[str, ...]


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


class Quiver:
    def __init__(self, vertices: Sequence, arrows: Iterable):
        self.vertices: Tuple[str, ...] = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex labels")
        vs = set(self.vertices)
        arr: List[Arrow] = []
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(str(a[0]), str(a[1]), str(a[2]))
            if a.source not in vs or a.target not in vs:
                raise QuiverError(f"arrow {a.name!r} has an undeclared endpoint")
            arr.append(a)
        names = [a.name for a in arr]
        if len(set(names)) != len(names):
            raise QuiverError("duplicate arrow names")
        self.arrows: Tuple[Arrow, ...] = tuple(arr)
        self.arrow = {a.name: a for a in arr}
        self.index = {v: i for i, v in enumerate(self.vertices)}

    def __repr__(self):
        return f"Quiver({list(self.vertices)}, {[(a.name, a.source, a.target) for a in self.arrows]})"

    def __eq__(self, other):
        return isinstance(other, Quiver) and self.vertices == other.vertices and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def out_arrows(self, v: str) -> List[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def in_arrows(self, v: str) -> List[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [Arrow(a.name, a.target, a.source) for a in self.arrows])

    def path_source(self, path: Path, base: Optional[str] = None) -> str:
        return self.arrow[path[0]].source if path else base

    def path_target(self, path: Path, base: Optional[str] = None) -> str:
        return self.arrow[path[-1]].target if path else base

    def is_path(self, path: Path) -> bool:
        try:
            return all(self.arrow[x].target == self.arrow[y].source for x, y in zip(path, path[1:]))
        except KeyError:
            return False

    def paths_below(self, level: int) -> List[Tuple[str, Path]]:
        """All paths of length < level as (source vertex, arrow tuple).

        Ordered by length, then source vertex order, then arrow order.
        """
        out: List[Tuple[str, Path]] = [(v, ()) for v in self.vertices] if level > 0 else []
        frontier = [(v, ()) for v in self.vertices]
        for _ in range(1, level):
            nxt = []
            for src, p in frontier:
                end = self.path_target(p, src)
                for a in self.out_arrows(end):
                    nxt.append((src, p + (a.name,)))
            out.extend(nxt)
            frontier = nxt
        return out


@dataclass(frozen=True)
class Relation:
    """Linear combination of parallel paths, each of length >= 2."""

    terms: Tuple[Tuple[int, Path], ...]

    @classmethod
    def of(cls, *terms) -> "Relation":
        return cls(tuple((int(c), tuple(p)) for c, p in terms))

    def validate(self, quiver: Quiver) -> None:
        if not self.terms:
            raise QuiverError("empty relation")
        ends = set()
        for c, path in self.terms:
            if not quiver.is_path(path):
                raise QuiverError(f"relation term {list(path)} is not a path")
            if len(path) < 2:
                raise QuiverError(f"relation term {list(path)} has length < 2")
            ends.add((quiver.path_source(path), quiver.path_target(path)))
        if len(ends) != 1:
            raise QuiverError("relation terms are not parallel")

    def reversed(self) -> "Relation":
        return Relation(tuple((c, tuple(reversed(p))) for c, p in self.terms))


class BoundAlgebra:
    """The finite-dimensional algebra kQ / (I + R^level) over F_p.

    The basis consists of residue paths.  Columns (paths) are ordered by
    increasing length, so each non-basis path reduces to a combination of
    basis paths of at least its own length; hence basis paths of length
    >= m span R^m.
    """

    def __init__(self, quiver: Quiver, relations: Sequence[Relation], level: int, p: int):
        if level < 1:
            raise QuiverError("truncation level must be >= 1")
        self.quiver = quiver
        self.relations = tuple(relations)
        self.level = int(level)
        self.p = check_prime(p)
        for r in self.relations:
            r.validate(quiver)
        self._build()

    def _build(self):
        q, p, level = self.quiver, self.p, self.level
        all_paths = q.paths_below(level)
        self.all_paths = all_paths
        pindex = {x: i for i, x in enumerate(all_paths)}
        self._pindex = pindex
        npaths = len(all_paths)

        # ideal generated by relations inside kQ/R^l: spanned by u * r * v
        gens = []
        for rel in self.relations:
            src = q.path_source(rel.terms[0][1])
            tgt = q.path_target(rel.terms[0][1])
            rl = min(len(t) for _, t in rel.terms)
            for vs, v in all_paths:  # traversed first
                if q.path_target(v, vs) != src or len(v) + rl >= level:
                    continue
                for us, u in all_paths:  # traversed last
                    if us != tgt or len(v) + rl + len(u) >= level:
                        continue
                    row = np.zeros(npaths, dtype=np.int64)
                    for c, t in rel.terms:
                        w = v + t + u
                        if len(w) < level:
                            key = (vs if v else src, w)
                            row[pindex[key]] = (row[pindex[key]] + c) % p
                    if row.any():
                        gens.append(row)
        if gens:
            rank, red, pivots = rref_mod(np.array(gens), p)
            red = red[:rank]
        else:
            red = np.zeros((0, npaths), dtype=np.int64)
            pivots = []
        pivset = set(pivots)
        basis_idx = [i for i in range(npaths) if i not in pivset]
        self.basis: List[Tuple[str, Path]] = [all_paths[i] for i in basis_idx]
        self.dim = len(self.basis)
        bpos = {i: k for k, i in enumerate(basis_idx)}
        # normal form of every path of length < level in basis coordinates
        nf = np.zeros((npaths, self.dim), dtype=np.int64)
        for i in basis_idx:
            nf[i, bpos[i]] = 1
        for r, pc in enumerate(pivots):
            for i in basis_idx:
                if red[r, i]:
                    nf[pc, bpos[i]] = (-red[r, i]) % p
        self._nf = nf
        self._basis_index = {b: k for k, b in enumerate(self.basis)}
        self.basis_source = [s for s, _ in self.basis]
        self.basis_target = [q.path_target(x, s) for s, x in self.basis]
        self.basis_length = [len(x) for _, x in self.basis]

    def __repr__(self):
        return f"BoundAlgebra(dim={self.dim}, level={self.level}, p={self.p}, vertices={list(self.quiver.vertices)})"

    # --- elements -------------------------------------------------------
    def path_vector(self, source: str, path: Sequence[str]) -> np.ndarray:
        """Basis coordinates of the residue of a path (zero if too long)."""
        path = tuple(path)
        if len(path) >= self.level:
            return np.zeros(self.dim, dtype=np.int64)
        return self._nf[self._pindex[(source, path)]].copy()

    def relation_vector(self, rel: Relation) -> np.ndarray:
        """Image of a relation in the truncated path algebra kQ/R^l (not mod I)."""
        v = np.zeros(len(self.all_paths), dtype=np.int64)
        src = self.quiver.path_source(rel.terms[0][1])
        for c, t in rel.terms:
            if len(t) < self.level:
                k = self._pindex[(src, t)]
                v[k] = (v[k] + c) % self.p
        return v

    @cached_property
    def mult_table(self) -> np.ndarray:
        """``T[i, j]`` = coordinates of basis_i * basis_j (basis_j traversed first)."""
        n = self.dim
        T = np.zeros((n, n, n), dtype=np.int64)
        for i, (si, u) in enumerate(self.basis):
            for j, (sj, v) in enumerate(self.basis):
                if self.basis_target[j] != si:
                    continue
                if len(u) + len(v) >= self.level:
                    continue
                T[i, j] = self._nf[self._pindex[(sj, v + u)]]
        return T

    def basis_product(self, i: int, j: int) -> np.ndarray:
        """Coordinates of basis_i * basis_j without building the full table."""
        si, u = self.basis[i]
        sj, v = self.basis[j]
        if self.basis_target[j] != si or len(u) + len(v) >= self.level:
            return np.zeros(self.dim, dtype=np.int64)
        return self._nf[self._pindex[(sj, v + u)]].copy()

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product x * y of two elements given in basis coordinates."""
        return np.einsum("i,j,ijk->k", x, y, self.mult_table) % self.p

    def vertex_idempotent(self, v: str) -> np.ndarray:
        return self.path_vector(v, ())

    def unit(self) -> np.ndarray:
        return sum((self.vertex_idempotent(v) for v in self.quiver.vertices), np.zeros(self.dim, dtype=np.int64)) % self.p

    def paths_between(self, i: str, j: str) -> List[int]:
        """Indices of basis paths from vertex i to vertex j (= basis of e_j A e_i)."""
        return [k for k in range(self.dim) if self.basis_source[k] == i and self.basis_target[k] == j]

    @cached_property
    def opposite(self) -> "BoundAlgebra":
        return BoundAlgebra(self.quiver.opposite(), [r.reversed() for r in self.relations], self.level, self.p)

    def with_level(self, level: int) -> "BoundAlgebra":
        return BoundAlgebra(self.quiver, self.relations, level, self.p)

    def same_presentation(self, other: "BoundAlgebra") -> bool:
        return (
            self.quiver == other.quiver
            and self.relations == other.relations
            and self.level == other.level
            and self.p == other.p
        )

    def associativity_defects(self) -> int:
        T = self.mult_table
        left = np.einsum("ijk,klm->ijlm", T, T) % self.p  # (ab)c
        right = np.einsum("jlk,ikm->ijlm", T, T) % self.p  # a(bc)
        return int(np.count_nonzero((left - right) % self.p))


def build_algebra(quiver: Quiver, relations: Sequence[Relation], level: int, p: int) -> BoundAlgebra:
    return BoundAlgebra(quiver, relations, level, p)


@dataclass
class Corner:
    """e_j A e_i with the actions of e_iAe_i (right) and e_jAe_j (left)."""

    source: str
    target: str
    basis: List[int]
    right_actions: Dict[int, np.ndarray] = field(default_factory=dict)
    left_actions: Dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)


def corner(a: BoundAlgebra, i: str, j: str) -> Corner:
    """Sub-basis of paths i -> j plus action matrices.

    ``right_actions[k]`` is the matrix of m -> m * b_k for b_k in e_iAe_i,
    ``left_actions[k]`` that of m -> b_k * m for b_k in e_jAe_j, both in the
    coordinates of the corner basis.
    """
    vs = a.quiver.vertices
    if i not in vs or j not in vs:
        raise QuiverError(f"unknown vertex {i if i not in vs else j!r}")
    idx = a.paths_between(i, j)
    ii = a.paths_between(i, i)
    jj = a.paths_between(j, j)
    T = a.mult_table
    c = Corner(i, j, idx)
    for k in ii:
        c.right_actions[k] = T[np.ix_(idx, [k], idx)][:, 0, :].T.copy()
    for k in jj:
        c.left_actions[k] = T[np.ix_([k], idx, idx)][0].T.copy()
    return c


def radical_power_basis(a: BoundAlgebra, m: int) -> List[int]:
    """Basis indices spanning R^m (residue paths of length >= m)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return [k for k in range(a.dim) if a.basis_length[k] >= m]


def cyclic_quiver(n: int) -> Quiver:
    """Z_n: vertices 1..n, arrows a_i : i -> i+1 (a_n : n -> 1)."""
    vs = [str(i) for i in range(1, n + 1)]
    return Quiver(vs, [(f"a{i}", str(i), str(i % n + 1)) for i in range(1, n + 1)])
