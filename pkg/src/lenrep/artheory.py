"""Almost split sequences, their verification, and AR-quiver knitting."""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exactla import annihilator_rows, matmul_mod, nullspace_mod, rank_mod, solve_mod
from .homology import (
    HomSpace,
    ProjectiveError,
    ShortExactSeq,
    ext1_basis,
    hom_basis,
    indec_injective,
    indec_projective,
    is_injective,
    is_projective,
    map_from_projective,
    translate_DTr,
    translate_inverse,
)
from .krullschmidt import _indec_iso, decompose, end_radical, is_indecomposable
from .quiveralg import BoundAlgebra
from .repcat import Rep, RepError, RepMorphism, direct_sum, radical_family, simple, socle_family, sub_quotient

__all__ = [
    "ShortExactSeq",
    "ARQuiver",
    "ar_sequence_ending_at",
    "ar_sequence_starting_at",
    "verify_almost_split",
    "functor_support",
    "knit_ar_quiver",
]


def _lift_endomorphism(ext, f: RepMorphism) -> RepMorphism:
    """Restriction to Omega z of a lift P0 -> P0 of f : z -> z."""
    pc = ext.cover
    z = pc.module
    p = z.p
    P0 = pc.cover
    blocks = {w: np.zeros((P0.dims[w], P0.dims[w]), dtype=np.int64) for w in P0.dims}
    projs = direct_sum(pc.summands, z.algebra).projections
    for (v, g), Pv, pr in zip(pc.generators, pc.summands, projs):
        want = matmul_mod(f.blocks[v], g.reshape(-1, 1), p).ravel()
        q = solve_mod(pc.epi.blocks[v], want, p)
        lift = map_from_projective(Pv, v, P0, q) @ pr
        for w in blocks:
            blocks[w] = (blocks[w] + lift.blocks[w]) % p
    ft = RepMorphism(P0, P0, blocks)
    om = pc.syzygy
    restricted = {}
    for w in P0.dims:
        img = matmul_mod(ft.blocks[w], pc.incl.blocks[w], p)
        if om.dims[w] == 0:
            restricted[w] = np.zeros((0, 0), dtype=np.int64)
            continue
        restricted[w] = solve_mod(pc.incl.blocks[w], img, p)
    return RepMorphism(om, om, restricted)


def ar_sequence_ending_at(z: Rep, check_indecomposable: bool = True) -> ShortExactSeq:
    """0 -> tau z -> Y -> z -> 0 with class in the End(z)-socle of Ext^1(z, tau z)."""
    if z.total_dim == 0:
        raise RepError("zero object")
    if is_projective(z):
        raise ProjectiveError("no almost split sequence ends at a projective object")
    if check_indecomposable and not is_indecomposable(z):
        raise RepError("almost split sequences end at indecomposable objects")
    p = z.p
    tz = translate_DTr(z)
    ext = ext1_basis(z, tz, stable=False)
    if ext.dim == 0:
        raise AssertionError("Ext^1(z, tau z) vanishes for a non-projective indecomposable")
    H = hom_basis(z, z)
    rad = end_radical(z, H)
    conds = []
    for k in range(rad.shape[1]):
        r = H.combination(rad[:, k])
        rl = _lift_endomorphism(ext, r)
        cols = [ext.class_coords(eta @ rl) for eta in ext.basis]
        conds.append(np.stack(cols, axis=1))
    if conds:
        sol = nullspace_mod(np.concatenate(conds, axis=0) % p, p)
    else:
        sol = np.eye(ext.dim, dtype=np.int64)
    if sol.shape[1] == 0:
        raise AssertionError("Ext^1(z, tau z) has zero socle")
    seq = ext.realize(sol[:, 0])
    seq.flags["almost_split"] = False
    return seq


def ar_sequence_starting_at(x: Rep) -> ShortExactSeq:
    if is_injective(x):
        raise ProjectiveError("no almost split sequence starts at an injective object")
    return ar_sequence_ending_at(translate_inverse(x), check_indecomposable=False)


# ---------------------------------------------------------------------------
# verification


def _rad_vectors(x: Rep, H: HomSpace) -> np.ndarray:
    rad = end_radical(x, H)
    if rad.shape[1] == 0:
        return np.zeros((H.matrix.shape[0], 0), dtype=np.int64)
    return matmul_mod(H.matrix, rad, x.p)


def _rad_between(x: Rep, t: Rep, Hxt: HomSpace, Htx: HomSpace, radx: np.ndarray, Hxx: HomSpace, left: bool) -> np.ndarray:
    """Basis (columns, coordinates in Hxt or Htx) of rad(x, t) if left else rad(t, x).

    f in rad(x, t) iff g f in rad End(x) for all g : t -> x; dually
    f in rad(t, x) iff f g in rad End(x) for all g : x -> t.
    """
    p = x.p
    src, other = (Hxt, Htx) if left else (Htx, Hxt)
    if src.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if other.dim == 0:
        return np.eye(src.dim, dtype=np.int64)
    ann = annihilator_rows(radx, Hxx.matrix.shape[0], p) if radx.shape[1] else np.eye(Hxx.matrix.shape[0], dtype=np.int64)
    rows = []
    for g in other.basis:
        cols = [((g @ f) if left else (f @ g)).to_vector() for f in src.basis]
        rows.append(matmul_mod(ann, np.stack(cols, axis=1), p))
    return nullspace_mod(np.concatenate(rows, axis=0), p)


@dataclass
class AlmostSplitReport:
    exact: bool
    split: bool
    left_indecomposable: bool
    right_indecomposable: bool
    left_failures: List[int] = field(default_factory=list)
    right_failures: List[int] = field(default_factory=list)
    tested: int = 0

    @property
    def passed(self) -> bool:
        return (
            self.exact
            and not self.split
            and self.left_indecomposable
            and self.right_indecomposable
            and not self.left_failures
            and not self.right_failures
        )

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "exact": self.exact,
            "split": self.split,
            "left_indecomposable": self.left_indecomposable,
            "right_indecomposable": self.right_indecomposable,
            "left_failures": self.left_failures,
            "right_failures": self.right_failures,
            "tested": self.tested,
        }


def verify_almost_split(s: ShortExactSeq, test_objects: Sequence[Rep]) -> AlmostSplitReport:
    """Check the factorization properties of both end maps against ``test_objects``."""
    p = s.left.p
    exact = s.is_exact()
    split = s.is_split() if exact else True
    li = is_indecomposable(s.left)
    ri = is_indecomposable(s.right)
    rep = AlmostSplitReport(exact, split, li, ri, tested=len(test_objects))
    if not exact:
        return rep
    X, Y, Z = s.left, s.middle, s.right
    Hxx, Hzz = hom_basis(X, X), hom_basis(Z, Z)
    radx, radz = _rad_vectors(X, Hxx), _rad_vectors(Z, Hzz)
    for k, t in enumerate(test_objects):
        # left almost split: rad(X, t) factors through alpha
        Hxt, Htx = hom_basis(X, t), hom_basis(t, X)
        R = _rad_between(X, t, Hxt, Htx, radx, Hxx, left=True)
        if R.shape[1]:
            want = matmul_mod(Hxt.matrix, R, p)
            Hyt = hom_basis(Y, t)
            if Hyt.dim:
                got = np.stack([(h @ s.alpha).to_vector() for h in Hyt.basis], axis=1)
                ok = rank_mod(np.concatenate([got, want], axis=1), p) == rank_mod(got, p)
            else:
                ok = False
            if not ok:
                rep.left_failures.append(k)
        # right almost split: rad(t, Z) factors through beta
        Htz, Hzt = hom_basis(t, Z), hom_basis(Z, t)
        R = _rad_between(Z, t, Hzt, Htz, radz, Hzz, left=False)
        if R.shape[1]:
            want = matmul_mod(Htz.matrix, R, p)
            Hty = hom_basis(t, Y)
            if Hty.dim:
                got = np.stack([(s.beta @ h).to_vector() for h in Hty.basis], axis=1)
                ok = rank_mod(np.concatenate([got, want], axis=1), p) == rank_mod(got, p)
            else:
                ok = False
            if not ok:
                rep.right_failures.append(k)
    if rep.passed:
        s.flags["almost_split"] = True
    return rep


def functor_support(s: ShortExactSeq, test_objects: Sequence[Rep]) -> List[Tuple[int, int]]:
    """(index, dim coker(Hom(Y, C) -> Hom(X, C))) for each test object C."""
    p = s.left.p
    out = []
    for k, c in enumerate(test_objects):
        Hxc = hom_basis(s.left, c)
        if Hxc.dim == 0:
            out.append((k, 0))
            continue
        Hyc = hom_basis(s.middle, c)
        if Hyc.dim == 0:
            out.append((k, Hxc.dim))
            continue
        img = np.stack([(h @ s.alpha).to_vector() for h in Hyc.basis], axis=1)
        out.append((k, Hxc.dim - rank_mod(img, p)))
    return out


# ---------------------------------------------------------------------------
# knitting


@dataclass
class ARVertex:
    rep: Rep
    projective: bool
    injective: bool

    @property
    def length(self) -> int:
        return self.rep.total_dim

    @property
    def dim_vector(self):
        return self.rep.dim_vector


@dataclass
class ARQuiver:
    algebra: BoundAlgebra
    vertices: List[ARVertex]
    arrows: Dict[Tuple[int, int], int]
    tau: Dict[int, int]
    sequences: Dict[int, ShortExactSeq]
    meshes: Dict[int, Dict[int, int]]  # z -> {middle summand index: multiplicity}
    frontier: List[Tuple[int, ...]] = field(default_factory=list)
    budget_exceeded: bool = False
    max_length: Optional[int] = None

    @property
    def complete(self) -> bool:
        return not self.frontier and not self.budget_exceeded

    @property
    def reps(self) -> List[Rep]:
        return [v.rep for v in self.vertices]

    def index_of(self, r: Rep) -> Optional[int]:
        for k, v in enumerate(self.vertices):
            if v.dim_vector == r.dim_vector and _indec_iso(r, v.rep) is not None:
                return k
        return None

    def tau_period(self, k: int) -> Optional[int]:
        cur, steps = k, 0
        while True:
            if cur not in self.tau:
                return None
            cur = self.tau[cur]
            steps += 1
            if cur == k:
                return steps
            if steps > len(self.vertices):
                return None

    def stable_tau_periods(self) -> List[int]:
        out = set()
        for k in range(len(self.vertices)):
            if not self.vertices[k].projective:
                per = self.tau_period(k)
                if per is not None:
                    out.add(per)
        return sorted(out)

    def mesh_consistent(self) -> bool:
        for z, mid in self.meshes.items():
            into = {s: m for (s, t), m in self.arrows.items() if t == z}
            if into != mid:
                return False
        return True


def knit_ar_quiver(a: BoundAlgebra, max_length: Optional[int] = None, budget: int = 10_000) -> ARQuiver:
    """Build the AR quiver from the indecomposable projectives by mesh completion.

    Simples and indecomposable injectives are seeded too, so a bound
    smaller than the projectives still yields the short objects those
    reach.  Objects longer than ``max_length`` are not expanded; their
    dimension vectors are reported in ``frontier``.
    """
    verts: List[ARVertex] = []
    arrows: Dict[Tuple[int, int], int] = {}
    tau: Dict[int, int] = {}
    seqs: Dict[int, ShortExactSeq] = {}
    meshes: Dict[int, Dict[int, int]] = {}
    frontier: List[Tuple[int, ...]] = []
    heap: List[Tuple[int, Tuple[int, ...], int]] = []
    state = {"over": False}

    def register(r: Rep) -> Optional[int]:
        for k, v in enumerate(verts):
            if v.dim_vector == r.dim_vector and _indec_iso(r, v.rep) is not None:
                return k
        if max_length is not None and r.total_dim > max_length:
            if r.dim_vector not in frontier:
                frontier.append(r.dim_vector)
            return None
        if len(verts) >= budget:
            state["over"] = True
            return None
        verts.append(ARVertex(r, is_projective(r), is_injective(r)))
        k = len(verts) - 1
        heapq.heappush(heap, (r.total_dim, r.dim_vector, k))
        return k

    def summands(r: Rep) -> List[Tuple[Optional[int], int]]:
        return [(register(x), c) for x, c in decompose(r).pieces]

    for v in a.quiver.vertices:
        register(indec_projective(a, v))
    for v in a.quiver.vertices:
        register(simple(a, v))
        register(indec_injective(a, v))
    done = set()
    while heap and not state["over"]:
        _, _, k = heapq.heappop(heap)
        if k in done:
            continue
        done.add(k)
        vx = verts[k]
        x = vx.rep
        if not vx.projective:
            s = ar_sequence_ending_at(x, check_indecomposable=False)
            t = register(s.left)
            mid = summands(s.middle)
            if t is not None:
                tau[k] = t
            seqs[k] = s
            meshes[k] = {}
            for j, c in mid:
                if j is None:
                    continue
                meshes[k][j] = c
                arrows[(j, k)] = c
                if t is not None:
                    arrows[(t, j)] = c
        else:
            rad = sub_quotient(x, radical_family(x)).sub
            if rad.total_dim:
                for j, c in summands(rad):
                    if j is not None:
                        arrows[(j, k)] = c
        if not vx.injective:
            register(translate_inverse(x))
        else:
            quo = sub_quotient(x, socle_family(x)).quotient
            if quo.total_dim:
                for j, c in summands(quo):
                    if j is not None:
                        arrows[(k, j)] = c
    # deterministic order: by length, dimension vector, discovery
    order = sorted(range(len(verts)), key=lambda k: (verts[k].length, verts[k].dim_vector, k))
    pos = {k: i for i, k in enumerate(order)}
    return ARQuiver(
        algebra=a,
        vertices=[verts[k] for k in order],
        arrows={(pos[s], pos[t]): m for (s, t), m in sorted(arrows.items(), key=lambda e: (pos[e[0][0]], pos[e[0][1]]))},
        tau={pos[z]: pos[t] for z, t in tau.items()},
        sequences={pos[z]: s for z, s in seqs.items()},
        meshes={pos[z]: {pos[j]: c for j, c in m.items()} for z, m in meshes.items()},
        frontier=sorted(frontier),
        budget_exceeded=state["over"],
        max_length=max_length,
    )
