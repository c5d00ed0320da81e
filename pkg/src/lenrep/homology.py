"""Hom spaces, projective covers, Ext^1 and the Auslander-Reiten translate."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exactla import column_space_mod, matmul_mod, nullspace_mod, rank_mod, rref_mod, solve_mod
from .quiveralg import BoundAlgebra
from .repcat import (
    Rep,
    RepError,
    RepMorphism,
    SubQuotient,
    direct_sum,
    identity_morphism,
    injective,
    kernel,
    morphism_from_vector,
    projective,
    radical_family,
    sub_quotient,
    top_family,
    undual,
    dual,
    _left_mult,
)


class StabilityError(ValueError):
    """Raised when the truncation level is too shallow for a stable answer."""


class ProjectiveError(ValueError):
    pass


def _same_algebra(m: Rep, n: Rep) -> None:
    if not m.algebra.same_presentation(n.algebra):
        raise RepError("representations over different algebras")


# ---------------------------------------------------------------------------
# Hom


@dataclass
class HomSpace:
    source: Rep
    target: Rep
    basis: List[RepMorphism]
    matrix: np.ndarray  # columns are the basis vectors

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, f: RepMorphism) -> Optional[np.ndarray]:
        return solve_mod(self.matrix, f.to_vector(), self.source.p)

    def combination(self, coeffs) -> RepMorphism:
        vec = matmul_mod(self.matrix, np.asarray(coeffs, dtype=np.int64).reshape(-1, 1), self.source.p).ravel()
        return morphism_from_vector(self.source, self.target, vec)


def hom_equations(m: Rep, n: Rep) -> np.ndarray:
    """Matrix whose null space is Hom(m, n) in block-vector coordinates."""
    p = m.p
    q = m.quiver
    offs, pos = {}, 0
    for v in q.vertices:
        offs[v] = pos
        pos += n.dims[v] * m.dims[v]
    nunk = pos
    rows = []
    for a in q.arrows:
        i, j = a.source, a.target
        r = n.dims[j] * m.dims[i]
        if r == 0:
            continue
        eq = np.zeros((r, nunk), dtype=np.int64)
        if n.dims[i] * m.dims[i]:
            eq[:, offs[i] : offs[i] + n.dims[i] * m.dims[i]] += np.kron(n.maps[a.name], np.eye(m.dims[i], dtype=np.int64))
        if n.dims[j] * m.dims[j]:
            eq[:, offs[j] : offs[j] + n.dims[j] * m.dims[j]] -= np.kron(np.eye(n.dims[j], dtype=np.int64), m.maps[a.name].T)
        rows.append(eq % p)
    if not rows:
        return np.zeros((0, nunk), dtype=np.int64)
    return np.concatenate(rows, axis=0)


def hom_basis(m: Rep, n: Rep) -> HomSpace:
    _same_algebra(m, n)
    eqs = hom_equations(m, n)
    ns = nullspace_mod(eqs, m.p) if eqs.shape[1] else np.zeros((0, 0), dtype=np.int64)
    basis = [morphism_from_vector(m, n, ns[:, k]) for k in range(ns.shape[1])]
    return HomSpace(m, n, basis, ns)


def hom_dim(m: Rep, n: Rep) -> int:
    eqs = hom_equations(m, n)
    return eqs.shape[1] - rank_mod(eqs, m.p) if eqs.shape[1] else 0


# ---------------------------------------------------------------------------
# projective covers


def map_from_projective(P: Rep, v: str, X: Rep, u: np.ndarray) -> RepMorphism:
    """The morphism P_v -> X sending e_v to u in X_v."""
    a = X.algebra
    blocks = {}
    u = np.asarray(u, dtype=np.int64).reshape(-1, 1)
    for w in a.quiver.vertices:
        cols = [X.path_matrix(a.basis[k][1], v) @ u for k in a.paths_between(v, w)]
        blocks[w] = (np.concatenate(cols, axis=1) % a.p) if cols else np.zeros((X.dims[w], 0), dtype=np.int64)
    return RepMorphism(P, X, blocks)


@dataclass
class ProjectiveCover:
    module: Rep
    cover: Rep
    epi: RepMorphism
    syzygy: Rep
    incl: RepMorphism
    generators: List[Tuple[str, np.ndarray]]  # (vertex, element of module)
    summands: List[Rep]
    warnings: List[str] = field(default_factory=list)

    @property
    def summand_vertices(self) -> List[str]:
        return [v for v, _ in self.generators]


_PROJ_CACHE: Dict[Tuple[int, str], Rep] = {}


def indec_projective(a: BoundAlgebra, v: str) -> Rep:
    key = (id(a), v)
    hit = _PROJ_CACHE.get(key)
    if hit is None or hit.algebra is not a:
        hit = projective(a, v)
        _PROJ_CACHE[key] = hit
    return hit


def indec_injective(a: BoundAlgebra, v: str) -> Rep:
    key = (id(a), "I:" + v)
    hit = _PROJ_CACHE.get(key)
    if hit is None or hit.algebra is not a:
        hit = injective(a, v)
        _PROJ_CACHE[key] = hit
    return hit


def projective_cover(m: Rep) -> ProjectiveCover:
    # matrices of a Rep are read-only, so the cover can live on the instance
    cached = m.__dict__.get("_projective_cover")
    if cached is not None:
        return cached
    pc = _projective_cover(m)
    m.__dict__["_projective_cover"] = pc
    return pc


def _projective_cover(m: Rep) -> ProjectiveCover:
    a = m.algebra
    top = top_family(m)
    gens: List[Tuple[str, np.ndarray]] = []
    for v in a.quiver.vertices:
        for k in range(top[v].shape[1]):
            gens.append((v, top[v][:, k].copy()))
    summands = [indec_projective(a, v) for v, _ in gens]
    ds = direct_sum(summands, a)
    P0 = ds.rep
    epi = None
    blocks = {w: np.zeros((m.dims[w], P0.dims[w]), dtype=np.int64) for w in a.quiver.vertices}
    for (v, u), Pv, pr in zip(gens, summands, ds.projections):
        f = map_from_projective(Pv, v, m, u) @ pr
        for w in blocks:
            blocks[w] = (blocks[w] + f.blocks[w]) % a.p
    epi = RepMorphism(P0, m, blocks)
    ker = kernel(epi)
    notes = []
    if m.total_dim and m.total_dim >= a.level - 1 and a.level > 1:
        notes.append(f"length {m.total_dim} is close to truncation level {a.level}; projectives are truncated")
    # minimality: the kernel must lie in rad P0
    rad = radical_family(P0)
    for w in a.quiver.vertices:
        K = ker.inclusion.blocks[w]
        if K.shape[1] and rank_mod(np.concatenate([rad[w], K], axis=1), a.p) != rank_mod(rad[w], a.p):
            raise AssertionError("projective cover is not minimal")
    return ProjectiveCover(m, P0, epi, ker.sub, ker.inclusion, gens, summands, notes)


def is_projective(m: Rep) -> bool:
    if m.total_dim == 0:
        return True
    top = top_family(m)
    a = m.algebra
    return sum(top[v].shape[1] * indec_projective(a, v).total_dim for v in a.quiver.vertices) == m.total_dim


def is_injective(m: Rep) -> bool:
    return is_projective(dual(m))


# ---------------------------------------------------------------------------
# short exact sequences


@dataclass
class ShortExactSeq:
    left: Rep
    middle: Rep
    right: Rep
    alpha: RepMorphism
    beta: RepMorphism
    flags: Dict[str, bool] = field(default_factory=dict)

    def is_exact(self) -> bool:
        if not (self.alpha.is_intertwining() and self.beta.is_intertwining()):
            return False
        if not (self.alpha.is_mono() and self.beta.is_epi()):
            return False
        if not (self.beta @ self.alpha).is_zero():
            return False
        return self.middle.total_dim == self.left.total_dim + self.right.total_dim

    def is_split(self) -> bool:
        """True iff alpha admits a retraction."""
        H = hom_basis(self.middle, self.left)
        p = self.left.p
        if self.left.total_dim == 0:
            return True
        if H.dim == 0:
            return False
        cols = [(r @ self.alpha).to_vector() for r in H.basis]
        A = np.stack(cols, axis=1)
        target = identity_morphism(self.left).to_vector()
        return solve_mod(A, target, p) is not None


# ---------------------------------------------------------------------------
# Ext^1


@dataclass
class ExtSpace:
    source: Rep  # the "top" m
    target: Rep  # the "socle" n
    cover: ProjectiveCover
    hom_omega: HomSpace
    coboundaries: np.ndarray  # columns
    basis: List[RepMorphism]  # cocycles Omega m -> n representing a basis
    basis_matrix: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.basis)

    def class_coords(self, cocycle: RepMorphism) -> np.ndarray:
        """Coordinates of the class of a cocycle in ``basis``."""
        p = self.source.p
        full = np.concatenate([self.basis_matrix, self.coboundaries], axis=1)
        x = solve_mod(full, cocycle.to_vector(), p)
        if x is None:
            raise ValueError("not a cocycle in the span of the basis")
        return x[: self.dim]

    def cocycle(self, coeffs) -> RepMorphism:
        p = self.source.p
        c = np.asarray(coeffs, dtype=np.int64).reshape(-1, 1)
        if c.shape[0] != self.dim:
            raise ValueError("cocycle outside the span of the basis")
        if self.dim == 0:
            vec = np.zeros(self.hom_omega.matrix.shape[0], dtype=np.int64)
        else:
            vec = matmul_mod(self.basis_matrix, c, p).ravel()
        return morphism_from_vector(self.cover.syzygy, self.target, vec)

    def realize(self, coeffs) -> ShortExactSeq:
        return realize_extension(self, coeffs)


def ext1_basis(m: Rep, n: Rep, stable: bool = True) -> ExtSpace:
    """Ext^1(m, n) as coker(Hom(P0, n) -> Hom(Omega m, n)).

    With ``stable=True`` the truncation level must be at least
    len(m) + len(n), so the result agrees with Ext^1 in the untruncated
    category; pass ``stable=False`` for Ext^1 over the truncated algebra.
    """
    _same_algebra(m, n)
    a = m.algebra
    p = a.p
    if stable and a.level < m.total_dim + n.total_dim:
        raise StabilityError(
            f"truncation level {a.level} < len(m) + len(n) = {m.total_dim + n.total_dim}; rebuild at a deeper level"
        )
    pc = projective_cover(m)
    om = pc.syzygy
    H = hom_basis(om, n)
    nvec = H.matrix.shape[0]
    cob = []
    for (v, _), Pv, pr in zip(pc.generators, pc.summands, _projections(pc)):
        for k in range(n.dims[v]):
            g = map_from_projective(Pv, v, n, np.eye(n.dims[v], dtype=np.int64)[:, k]) @ pr
            cob.append((g @ pc.incl).to_vector())
    B = column_space_mod(np.stack(cob, axis=1) % p, p) if cob else np.zeros((nvec, 0), dtype=np.int64)
    chosen = []
    cur = B
    r = B.shape[1]
    for k in range(H.dim):
        col = H.matrix[:, k : k + 1]
        trial = np.concatenate([cur, col], axis=1)
        rk = rank_mod(trial, p)
        if rk > r:
            chosen.append(k)
            cur, r = trial, rk
    bm = H.matrix[:, chosen] if chosen else np.zeros((nvec, 0), dtype=np.int64)
    basis = [morphism_from_vector(om, n, bm[:, k]) for k in range(bm.shape[1])]
    return ExtSpace(m, n, pc, H, B, basis, bm)


def _projections(pc: ProjectiveCover) -> List[RepMorphism]:
    return direct_sum(pc.summands, pc.module.algebra).projections


def ext1_dim(m: Rep, n: Rep, stable: bool = True) -> int:
    return ext1_basis(m, n, stable).dim


def ext1_dim_cocycle(m: Rep, n: Rep) -> int:
    """dim coker(⊕_i Hom(M_i, N_i) -> ⊕_{a:i->j} Hom(M_i, N_j)) for relation-free quivers."""
    a = m.algebra
    if a.relations:
        raise ValueError("the arrow-cocycle complex computes Ext^1 only for relation-free quivers")
    q = a.quiver
    p = a.p
    offs, pos = {}, 0
    for v in q.vertices:
        offs[v] = pos
        pos += n.dims[v] * m.dims[v]
    nsrc = pos
    blocks = []
    ntgt = 0
    for arr in q.arrows:
        i, j = arr.source, arr.target
        r = n.dims[j] * m.dims[i]
        ntgt += r
        if r == 0:
            continue
        d = np.zeros((r, nsrc), dtype=np.int64)
        if n.dims[i] * m.dims[i]:
            d[:, offs[i] : offs[i] + n.dims[i] * m.dims[i]] += np.kron(n.maps[arr.name], np.eye(m.dims[i], dtype=np.int64))
        if n.dims[j] * m.dims[j]:
            d[:, offs[j] : offs[j] + n.dims[j] * m.dims[j]] -= np.kron(np.eye(n.dims[j], dtype=np.int64), m.maps[arr.name].T)
        blocks.append(d % p)
    if ntgt == 0:
        return 0
    rk = rank_mod(np.concatenate(blocks, axis=0), p) if nsrc else 0
    return ntgt - rk


def realize_extension(e: ExtSpace, coeffs) -> ShortExactSeq:
    """Pushout of 0 -> Omega -> P0 -> m -> 0 along the cocycle."""
    a = e.source.algebra
    p = a.p
    phi = e.cocycle(coeffs)
    pc = e.cover
    n = e.target
    ds = direct_sum([n, pc.cover], a)
    D = ds.rep
    fam = {}
    for v in a.quiver.vertices:
        fam[v] = np.concatenate([(-phi.blocks[v]) % p, pc.incl.blocks[v]], axis=0)
    sq = sub_quotient(D, fam)
    E = sq.quotient
    alpha = sq.projection @ ds.injections[0]
    to_m = pc.epi @ ds.projections[1]
    beta = RepMorphism(E, e.source, {v: matmul_mod(to_m.blocks[v], sq.section[v], p) for v in a.quiver.vertices})
    seq = ShortExactSeq(n, E, e.source, alpha, beta)
    seq.flags["exact"] = seq.is_exact()
    seq.flags["split"] = not np.any(np.asarray(coeffs) % p)
    return seq


# ---------------------------------------------------------------------------
# Auslander-Reiten translate


def translate_DTr(z: Rep) -> Rep:
    """tau z = ker(nu P1 -> nu P0) for a minimal projective presentation of z."""
    a = z.algebra
    p = a.p
    if is_projective(z):
        raise ProjectiveError("the translate is undefined on projective objects")
    pc0 = projective_cover(z)
    pc1 = projective_cover(pc0.syzygy)
    P0_summ = pc0.summand_vertices
    P1_summ = pc1.summand_vertices
    # offsets of each P_{v_k} inside P0 at every vertex
    offs = []
    acc = {w: 0 for w in a.quiver.vertices}
    for v in P0_summ:
        offs.append(dict(acc))
        Pv = indec_projective(a, v)
        for w in acc:
            acc[w] += Pv.dims[w]
    src_inj = [indec_injective(a, w) for w in P1_summ]
    tgt_inj = [indec_injective(a, v) for v in P0_summ]
    S = direct_sum(src_inj, a)
    T = direct_sum(tgt_inj, a)
    blocks = {u: np.zeros((T.rep.dims[u], S.rep.dims[u]), dtype=np.int64) for u in a.quiver.vertices}
    for l, (w, h) in enumerate(pc1.generators):
        img = matmul_mod(pc0.incl.blocks[w], h.reshape(-1, 1), p).ravel()  # element of (P0)_w
        for k, v in enumerate(P0_summ):
            idx = a.paths_between(v, w)
            x = np.zeros(a.dim, dtype=np.int64)
            x[idx] = img[offs[k][w] : offs[k][w] + len(idx)]
            if not x.any():
                continue
            L = _left_mult(a, x)
            for u in a.quiver.vertices:
                rows = a.paths_between(u, w)
                cols = a.paths_between(u, v)
                if not rows or not cols:
                    continue
                comp = L[np.ix_(rows, cols)].T  # D(e_w A e_u) -> D(e_v A e_u)
                r0 = T.injections[k].blocks[u]
                c0 = S.projections[l].blocks[u]
                blocks[u] = (blocks[u] + r0 @ comp @ c0) % p
    nu_f = RepMorphism(S.rep, T.rep, blocks)
    if not nu_f.is_intertwining():
        raise AssertionError("Nakayama image of the presentation is not a module map")
    return kernel(nu_f).sub


def translate_inverse(z: Rep) -> Rep:
    """tau^{-1} z = Tr D z, computed as D tau(D z) over the opposite algebra."""
    if is_injective(z):
        raise ProjectiveError("the inverse translate is undefined on injective objects")
    return undual(translate_DTr(dual(z)), z.algebra)
