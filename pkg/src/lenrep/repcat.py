"""Finite-dimensional representations of a bound quiver and their series."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .exactla import (
    annihilator_rows,
    column_space_mod,
    complement_basis,
    inverse_mod,
    matmul_mod,
    nullspace_mod,
    rank_mod,
    solve_mod,
)
from .quiveralg import BoundAlgebra, Path


class RepError(ValueError):
    pass


def _zeros(r, c):
    return np.zeros((r, c), dtype=np.int64)


class Rep:
    """A representation: one vector space per vertex, one matrix per arrow.

    ``maps[a]`` has shape (dim at target, dim at source).
    """

    def __init__(self, algebra: BoundAlgebra, dims: Mapping, maps: Optional[Mapping] = None):
        self.algebra = algebra
        q = algebra.quiver
        p = algebra.p
        self.dims: Dict[str, int] = {v: 0 for v in q.vertices}
        for v, d in dims.items():
            v = str(v)
            if v not in self.dims:
                raise RepError(f"unknown vertex {v!r}")
            if int(d) < 0:
                raise RepError(f"negative dimension at vertex {v!r}")
            self.dims[v] = int(d)
        maps = dict(maps or {})
        self.maps: Dict[str, np.ndarray] = {}
        for a in q.arrows:
            shape = (self.dims[a.target], self.dims[a.source])
            if a.name in maps and maps[a.name] is not None:
                m = np.array(maps[a.name], dtype=np.int64).reshape(shape) if np.size(maps[a.name]) == shape[0] * shape[1] else None
                if m is None:
                    raise RepError(
                        f"arrow {a.name!r}: matrix of size {np.shape(maps[a.name])} does not match dims {shape}"
                    )
                m = m % p
            else:
                m = _zeros(*shape)
            m.setflags(write=False)
            self.maps[a.name] = m
        extra = set(maps) - set(self.maps)
        if extra:
            raise RepError(f"maps given for unknown arrows {sorted(extra)}")

    # --- basic data --------------------------------------------------------
    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def quiver(self):
        return self.algebra.quiver

    @cached_property
    def dim_vector(self) -> Tuple[int, ...]:
        return tuple(self.dims[v] for v in self.quiver.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    @cached_property
    def offsets(self) -> Dict[str, int]:
        out, acc = {}, 0
        for v in self.quiver.vertices:
            out[v] = acc
            acc += self.dims[v]
        return out

    def __repr__(self):
        return f"Rep(dims={self.dim_vector})"

    def __eq__(self, other):
        if not isinstance(other, Rep):
            return NotImplemented
        return (
            self.algebra.same_presentation(other.algebra)
            and self.dims == other.dims
            and all(np.array_equal(self.maps[a], other.maps[a]) for a in self.maps)
        )

    __hash__ = None

    def path_matrix(self, path: Path, base: Optional[str] = None) -> np.ndarray:
        """Matrix of a path (traversal order) acting on the module."""
        if not path:
            d = self.dims[base]
            return np.eye(d, dtype=np.int64)
        m = self.maps[path[0]]
        for a in path[1:]:
            m = matmul_mod(self.maps[a], m, self.p)
        return m

    def element_matrix(self, x: np.ndarray, v: str, w: str) -> np.ndarray:
        """Action of the algebra element x restricted to X_v -> X_w."""
        a = self.algebra
        out = _zeros(self.dims[w], self.dims[v])
        for k in np.flatnonzero(x):
            s, path = a.basis[k]
            if s == v and a.basis_target[k] == w:
                out = (out + int(x[k]) * self.path_matrix(path, s)) % self.p
        return out

    def block_matrix(self) -> Dict[str, np.ndarray]:
        """Arrow actions on the total space (block form)."""
        n = self.total_dim
        out = {}
        for a in self.quiver.arrows:
            big = _zeros(n, n)
            oi, oj = self.offsets[a.source], self.offsets[a.target]
            big[oj : oj + self.dims[a.target], oi : oi + self.dims[a.source]] = self.maps[a.name]
            out[a.name] = big
        return out

    def over(self, algebra: BoundAlgebra) -> "Rep":
        """The same matrices regarded over another presentation of the quiver."""
        if algebra.quiver != self.algebra.quiver or algebra.p != self.p:
            raise RepError("quiver or characteristic mismatch")
        return Rep(algebra, self.dims, self.maps)

    def to_spec(self) -> dict:
        return {
            "dims": {v: self.dims[v] for v in sorted(self.dims)},
            "maps": {a: self.maps[a].tolist() for a in sorted(self.maps)},
        }


@dataclass
class RepMorphism:
    source: Rep
    target: Rep
    blocks: Dict[str, np.ndarray]

    def __post_init__(self):
        p = self.source.p
        fixed = {}
        for v in self.source.quiver.vertices:
            shape = (self.target.dims[v], self.source.dims[v])
            b = self.blocks.get(v)
            b = _zeros(*shape) if b is None else np.array(b, dtype=np.int64).reshape(shape) % p
            fixed[v] = b
        self.blocks = fixed

    @property
    def p(self):
        return self.source.p

    def is_intertwining(self) -> bool:
        p = self.p
        for a in self.source.quiver.arrows:
            lhs = matmul_mod(self.target.maps[a.name], self.blocks[a.source], p)
            rhs = matmul_mod(self.blocks[a.target], self.source.maps[a.name], p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def __matmul__(self, other: "RepMorphism") -> "RepMorphism":
        """Composition: ``(f @ g)(x) = f(g(x))``."""
        p = self.p
        return RepMorphism(
            other.source, self.target, {v: matmul_mod(self.blocks[v], other.blocks[v], p) for v in self.blocks}
        )

    def __add__(self, other):
        return RepMorphism(self.source, self.target, {v: self.blocks[v] + other.blocks[v] for v in self.blocks})

    def scale(self, c: int) -> "RepMorphism":
        return RepMorphism(self.source, self.target, {v: c * b for v, b in self.blocks.items()})

    def to_vector(self) -> np.ndarray:
        vs = self.source.quiver.vertices
        if not vs:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([self.blocks[v].ravel() for v in vs])

    def total_matrix(self) -> np.ndarray:
        s, t = self.source, self.target
        out = _zeros(t.total_dim, s.total_dim)
        for v in s.quiver.vertices:
            out[t.offsets[v] : t.offsets[v] + t.dims[v], s.offsets[v] : s.offsets[v] + s.dims[v]] = self.blocks[v]
        return out

    def rank(self) -> int:
        return sum(rank_mod(b, self.p) for b in self.blocks.values() if b.size)

    def is_zero(self) -> bool:
        return not any(b.any() for b in self.blocks.values())

    def is_mono(self) -> bool:
        return self.rank() == self.source.total_dim

    def is_epi(self) -> bool:
        return self.rank() == self.target.total_dim

    def is_iso(self) -> bool:
        return self.is_mono() and self.is_epi()

    def kernel_family(self) -> Dict[str, np.ndarray]:
        return {v: nullspace_mod(b, self.p) if b.shape[1] else _zeros(0, 0) for v, b in self.blocks.items()}

    def image_family(self) -> Dict[str, np.ndarray]:
        return {v: column_space_mod(b, self.p) for v, b in self.blocks.items()}


def morphism_from_vector(source: Rep, target: Rep, vec: np.ndarray) -> RepMorphism:
    blocks, pos = {}, 0
    for v in source.quiver.vertices:
        r, c = target.dims[v], source.dims[v]
        blocks[v] = np.asarray(vec[pos : pos + r * c]).reshape(r, c)
        pos += r * c
    return RepMorphism(source, target, blocks)


def identity_morphism(r: Rep) -> RepMorphism:
    return RepMorphism(r, r, {v: np.eye(d, dtype=np.int64) for v, d in r.dims.items()})


def zero_morphism(s: Rep, t: Rep) -> RepMorphism:
    return RepMorphism(s, t, {})


# ---------------------------------------------------------------------------
# validity


@dataclass
class ValidityReport:
    relation_violations: List[dict] = field(default_factory=list)
    nilpotency_violations: List[dict] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.relation_violations and not self.nilpotency_violations

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "relation_violations": self.relation_violations,
            "nilpotency_violations": self.nilpotency_violations,
        }


def check_rep(r: Rep) -> ValidityReport:
    a, p = r.algebra, r.p
    rep = ValidityReport()
    for idx, rel in enumerate(a.relations):
        src = a.quiver.path_source(rel.terms[0][1])
        tgt = a.quiver.path_target(rel.terms[0][1])
        tot = _zeros(r.dims[tgt], r.dims[src])
        for c, path in rel.terms:
            tot = (tot + c * r.path_matrix(path)) % p
        if tot.any():
            rep.relation_violations.append(
                {"relation": idx, "terms": [[c, list(t)] for c, t in rel.terms]}
            )
    # every path of length == level must act as zero
    if r.total_dim:
        for v in a.quiver.vertices:
            if not r.dims[v]:
                continue
            frontier = [((), np.eye(r.dims[v], dtype=np.int64))]
            for _ in range(a.level):
                nxt = []
                for path, m in frontier:
                    end = a.quiver.path_target(path, v)
                    for arr in a.quiver.out_arrows(end):
                        m2 = matmul_mod(r.maps[arr.name], m, p)
                        if m2.any():
                            nxt.append((path + (arr.name,), m2))
                frontier = nxt
            for path, _ in frontier:
                rep.nilpotency_violations.append({"source": v, "path": list(path)})
                break
    return rep


def require_valid(r: Rep) -> None:
    rep = check_rep(r)
    if not rep.valid:
        raise RepError(f"invalid representation: {rep.to_dict()}")


# ---------------------------------------------------------------------------
# constructions


def zero_rep(a: BoundAlgebra) -> Rep:
    return Rep(a, {})


def simple(a: BoundAlgebra, v: str) -> Rep:
    return Rep(a, {str(v): 1})


def _left_mult(a: BoundAlgebra, x: np.ndarray) -> np.ndarray:
    """L[k, j] = coefficient of b_k in x * b_j."""
    return np.einsum("i,ijk->kj", x, a.mult_table) % a.p


def _right_mult(a: BoundAlgebra, x: np.ndarray) -> np.ndarray:
    """R[k, i] = coefficient of b_k in b_i * x."""
    return np.einsum("j,ijk->ki", x, a.mult_table) % a.p


def projective(a: BoundAlgebra, v: str) -> Rep:
    """P_v = A e_v: at vertex w the paths v -> w."""
    v = str(v)
    idx = {w: a.paths_between(v, w) for w in a.quiver.vertices}
    maps = {}
    for arr in a.quiver.arrows:
        L = _left_mult(a, a.path_vector(arr.source, (arr.name,)))
        maps[arr.name] = L[np.ix_(idx[arr.target], idx[arr.source])]
    return Rep(a, {w: len(i) for w, i in idx.items()}, maps)


def injective(a: BoundAlgebra, v: str) -> Rep:
    """I_v = D(e_v A): at vertex w the dual of the paths w -> v."""
    v = str(v)
    idx = {w: a.paths_between(w, v) for w in a.quiver.vertices}
    maps = {}
    for arr in a.quiver.arrows:
        R = _right_mult(a, a.path_vector(arr.source, (arr.name,)))
        # y -> y * arr maps e_vAe_target -> e_vAe_source; dualize
        maps[arr.name] = R[np.ix_(idx[arr.source], idx[arr.target])].T
    return Rep(a, {w: len(i) for w, i in idx.items()}, maps)


def cycle_uniserial(a: BoundAlgebra, top: str, length: int) -> Rep:
    """Uniserial M(top, length) for a quiver in which every vertex has one outgoing arrow.

    Basis e_0..e_{length-1} with e_0 at ``top``; the outgoing arrow sends
    e_k to e_{k+1}.
    """
    q = a.quiver
    verts, arrows = [str(top)], []
    for _ in range(length - 1):
        outs = q.out_arrows(verts[-1])
        if len(outs) != 1:
            raise RepError("cycle_uniserial needs exactly one outgoing arrow per vertex on the walk")
        arrows.append(outs[0].name)
        verts.append(outs[0].target)
    if length == 0:
        return zero_rep(a)
    pos: Dict[str, List[int]] = {w: [] for w in q.vertices}
    for k, w in enumerate(verts):
        pos[w].append(k)
    maps = {}
    for arr in q.arrows:
        m = _zeros(len(pos[arr.target]), len(pos[arr.source]))
        for ci, k in enumerate(pos[arr.source]):
            if k + 1 < length and arrows[k] == arr.name:
                m[pos[arr.target].index(k + 1), ci] = 1
        maps[arr.name] = m
    return Rep(a, {w: len(pos[w]) for w in q.vertices}, maps)


def dual(r: Rep) -> Rep:
    """D r as a representation of the opposite algebra."""
    return Rep(r.algebra.opposite, r.dims, {a: m.T for a, m in r.maps.items()})


def undual(r: Rep, algebra: BoundAlgebra) -> Rep:
    """Inverse of :func:`dual`: turn a rep of A^op back into one of ``algebra``."""
    return Rep(algebra, r.dims, {a: m.T for a, m in r.maps.items()})


def conjugate(r: Rep, change: Mapping[str, np.ndarray]) -> Tuple[Rep, RepMorphism]:
    """Apply invertible basis changes g_v; returns (r', iso r -> r')."""
    p = r.p
    g = {v: np.array(change[v], dtype=np.int64) % p for v in r.quiver.vertices}
    ginv = {v: inverse_mod(g[v], p) if r.dims[v] else _zeros(0, 0) for v in g}
    maps = {
        a.name: matmul_mod(matmul_mod(g[a.target], r.maps[a.name], p), ginv[a.source], p) for a in r.quiver.arrows
    }
    out = Rep(r.algebra, r.dims, maps)
    return out, RepMorphism(r, out, g)


def random_invertible(n: int, p: int, rng: random.Random) -> np.ndarray:
    while True:
        m = np.array([[rng.randrange(p) for _ in range(n)] for _ in range(n)], dtype=np.int64).reshape(n, n)
        if rank_mod(m, p) == n:
            return m


def random_conjugate(r: Rep, rng: random.Random) -> Tuple[Rep, RepMorphism]:
    return conjugate(r, {v: random_invertible(d, r.p, rng) for v, d in r.dims.items()})


# ---------------------------------------------------------------------------
# sums, subobjects, quotients


@dataclass
class DirectSum:
    rep: Rep
    injections: List[RepMorphism]
    projections: List[RepMorphism]


def direct_sum(rs: Sequence[Rep], algebra: Optional[BoundAlgebra] = None) -> DirectSum:
    if not rs:
        if algebra is None:
            raise RepError("empty direct sum needs an algebra")
        return DirectSum(zero_rep(algebra), [], [])
    a = rs[0].algebra
    for r in rs[1:]:
        if not r.algebra.same_presentation(a):
            raise RepError("direct sum of representations over different algebras")
    q = a.quiver
    dims = {v: sum(r.dims[v] for r in rs) for v in q.vertices}
    maps = {}
    for arr in q.arrows:
        m = _zeros(dims[arr.target], dims[arr.source])
        oi = oj = 0
        for r in rs:
            di, dj = r.dims[arr.source], r.dims[arr.target]
            m[oj : oj + dj, oi : oi + di] = r.maps[arr.name]
            oi += di
            oj += dj
        maps[arr.name] = m
    total = Rep(a, dims, maps)
    inj, proj = [], []
    offs = {v: 0 for v in q.vertices}
    for r in rs:
        ib, pb = {}, {}
        for v in q.vertices:
            e = _zeros(dims[v], r.dims[v])
            e[offs[v] : offs[v] + r.dims[v], :] = np.eye(r.dims[v], dtype=np.int64)
            ib[v] = e
            pb[v] = e.T.copy()
            offs[v] += r.dims[v]
        inj.append(RepMorphism(r, total, ib))
        proj.append(RepMorphism(total, r, pb))
    return DirectSum(total, inj, proj)


@dataclass
class SubQuotient:
    sub: Rep
    quotient: Rep
    inclusion: RepMorphism
    projection: RepMorphism
    # linear (not module) section of the projection, vertexwise
    section: Dict[str, np.ndarray] = field(default_factory=dict)


def sub_quotient(r: Rep, family: Mapping[str, np.ndarray]) -> SubQuotient:
    """Subrepresentation spanned by ``family`` (vertex -> columns) and the quotient."""
    p = r.p
    q = r.quiver
    B, C, Q = {}, {}, {}
    for v in q.vertices:
        n = r.dims[v]
        cols = family.get(v)
        cols = _zeros(n, 0) if cols is None or np.size(cols) == 0 else np.asarray(cols, dtype=np.int64).reshape(n, -1)
        Bv = column_space_mod(cols % p, p) if cols.shape[1] else _zeros(n, 0)
        Cv = complement_basis(Bv, n, p)
        full = np.concatenate([Bv, Cv], axis=1)
        inv = inverse_mod(full, p) if n else _zeros(0, 0)
        B[v], C[v], Q[v] = Bv, Cv, inv[Bv.shape[1] :, :]
    sub_maps, quo_maps = {}, {}
    for arr in q.arrows:
        i, j = arr.source, arr.target
        img = matmul_mod(r.maps[arr.name], B[i], p)
        x = solve_mod(B[j], img, p) if B[j].shape[1] else (None if img.any() else _zeros(0, B[i].shape[1]))
        if x is None or (B[j].shape[1] and not np.array_equal(matmul_mod(B[j], x, p), img)):
            raise RepError(f"subspace family is not invariant under arrow {arr.name!r}")
        sub_maps[arr.name] = x
        quo_maps[arr.name] = matmul_mod(Q[j], matmul_mod(r.maps[arr.name], C[i], p), p)
    sub = Rep(r.algebra, {v: B[v].shape[1] for v in q.vertices}, sub_maps)
    quo = Rep(r.algebra, {v: C[v].shape[1] for v in q.vertices}, quo_maps)
    return SubQuotient(sub, quo, RepMorphism(sub, r, B), RepMorphism(r, quo, Q), C)


def kernel(f: RepMorphism) -> SubQuotient:
    return sub_quotient(f.source, f.kernel_family())


def image(f: RepMorphism) -> SubQuotient:
    return sub_quotient(f.target, f.image_family())


def cokernel(f: RepMorphism) -> SubQuotient:
    return sub_quotient(f.target, f.image_family())


# ---------------------------------------------------------------------------
# series


@dataclass
class SeriesChain:
    """Increasing chain 0 = X_0 < X_1 < ... < X_m = X of subspace families."""

    rep: Rep
    terms: List[Dict[str, np.ndarray]]
    layers: List[Tuple[int, ...]]

    @property
    def height(self) -> int:
        return len(self.layers)


def _family_dims(fam, vertices):
    return tuple(fam[v].shape[1] for v in vertices)


def socle_family(r: Rep, below: Optional[Dict[str, np.ndarray]] = None) -> Dict[str, np.ndarray]:
    """{x : a.x in ``below`` for every arrow a}; with below = 0 this is the socle."""
    p = r.p
    q = r.quiver
    ann = {}
    for v in q.vertices:
        n = r.dims[v]
        sub = below[v] if below is not None else _zeros(n, 0)
        ann[v] = annihilator_rows(sub, n, p)
    out = {}
    for v in q.vertices:
        n = r.dims[v]
        rows = [matmul_mod(ann[a.target], r.maps[a.name], p) for a in q.out_arrows(v)]
        rows = [x for x in rows if x.shape[0]]
        if not rows or n == 0:
            out[v] = np.eye(n, dtype=np.int64)
        else:
            out[v] = nullspace_mod(np.concatenate(rows, axis=0), p)
    return out


def socle_series(r: Rep) -> SeriesChain:
    q = r.quiver
    cur = {v: _zeros(r.dims[v], 0) for v in q.vertices}
    terms = [cur]
    layers = []
    prev = 0
    while sum(_family_dims(cur, q.vertices)) < r.total_dim:
        nxt = socle_family(r, cur)
        d = _family_dims(nxt, q.vertices)
        if sum(d) <= prev:
            raise RepError("socle series stalled; representation not nilpotent")
        layers.append(tuple(x - y for x, y in zip(d, _family_dims(cur, q.vertices))))
        terms.append(nxt)
        prev = sum(d)
        cur = nxt
    return SeriesChain(r, terms, layers)


def radical_family(r: Rep, above: Optional[Dict[str, np.ndarray]] = None) -> Dict[str, np.ndarray]:
    """Sum over arrows of a(``above``); with above = X this is rad X."""
    p = r.p
    q = r.quiver
    if above is None:
        above = {v: np.eye(r.dims[v], dtype=np.int64) for v in q.vertices}
    out = {}
    for v in q.vertices:
        cols = [matmul_mod(r.maps[a.name], above[a.source], p) for a in q.in_arrows(v)]
        cols = [c for c in cols if c.shape[1]]
        out[v] = column_space_mod(np.concatenate(cols, axis=1), p) if cols and r.dims[v] else _zeros(r.dims[v], 0)
    return out


def radical_series(r: Rep) -> SeriesChain:
    """Radical (top-down Loewy) series, returned as an increasing chain."""
    q = r.quiver
    cur = {v: np.eye(r.dims[v], dtype=np.int64) for v in q.vertices}
    desc = [cur]
    while sum(_family_dims(cur, q.vertices)):
        nxt = radical_family(r, cur)
        if sum(_family_dims(nxt, q.vertices)) >= sum(_family_dims(cur, q.vertices)):
            raise RepError("radical series stalled; representation not nilpotent")
        desc.append(nxt)
        cur = nxt
    terms = list(reversed(desc))
    layers = [
        tuple(x - y for x, y in zip(_family_dims(terms[k + 1], q.vertices), _family_dims(terms[k], q.vertices)))
        for k in range(len(terms) - 1)
    ]
    return SeriesChain(r, terms, layers)


def height_and_length(r: Rep) -> Tuple[int, int]:
    return socle_series(r).height, r.total_dim


def composition_vector(r: Rep) -> Tuple[int, ...]:
    """Multiplicities of the simples as composition factors, via the socle layers."""
    n = len(r.quiver.vertices)
    tot = [0] * n
    for layer in socle_series(r).layers:
        for k, x in enumerate(layer):
            tot[k] += x
    return tuple(tot)


def composition_vector_top_down(r: Rep) -> Tuple[int, ...]:
    n = len(r.quiver.vertices)
    tot = [0] * n
    for layer in radical_series(r).layers:
        for k, x in enumerate(layer):
            tot[k] += x
    return tuple(tot)


def top_family(r: Rep) -> Dict[str, np.ndarray]:
    """Vertexwise complements of rad X: elements generating X minimally."""
    rad = radical_family(r)
    return {v: complement_basis(rad[v], r.dims[v], r.p) for v in r.quiver.vertices}
