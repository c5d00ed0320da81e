"""Structural probes for admissible algebras seen through their truncations.

A presentation kQ/I is examined at a finite level l via A_l = kQ/(I + R^l).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

import numpy as np

from .exactla import column_space_mod, rank_mod
from .quiveralg import BoundAlgebra, Quiver, Relation, build_algebra, cyclic_quiver


@dataclass(frozen=True)
class AlgebraPresentation:
    quiver: Quiver
    relations: tuple
    p: int
    declared_infinite: bool = False

    def __post_init__(self):
        for r in self.relations:
            r.validate(self.quiver)

    def at(self, level: int) -> BoundAlgebra:
        return _build_cached(self, level)

    @classmethod
    def of(cls, algebra: BoundAlgebra, declared_infinite: bool = False) -> "AlgebraPresentation":
        return cls(algebra.quiver, tuple(algebra.relations), algebra.p, declared_infinite)


@lru_cache(maxsize=64)
def _build_cached(pres: AlgebraPresentation, level: int) -> BoundAlgebra:
    return build_algebra(pres.quiver, list(pres.relations), level, pres.p)


def _span(a: BoundAlgebra, vecs: List[np.ndarray]) -> np.ndarray:
    if not vecs:
        return np.zeros((a.dim, 0), dtype=np.int64)
    rows = np.unique(np.stack(vecs) % a.p, axis=0)
    rows = rows[rows.any(axis=1)]
    if not len(rows):
        return np.zeros((a.dim, 0), dtype=np.int64)
    return column_space_mod(rows.T.copy(), a.p)


def _unit(a: BoundAlgebra, k: int) -> np.ndarray:
    v = np.zeros(a.dim, dtype=np.int64)
    v[k] = 1
    return v


def _products(a: BoundAlgebra, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Span of x * y for x in span(left), y in span(right)."""
    cache = {}

    def bp(i, j):
        if (i, j) not in cache:
            cache[(i, j)] = a.basis_product(i, j)
        return cache[(i, j)]

    vecs = []
    for s in range(left.shape[1]):
        xs = np.nonzero(left[:, s])[0]
        for t in range(right.shape[1]):
            ys = np.nonzero(right[:, t])[0]
            v = np.zeros(a.dim, dtype=np.int64)
            for i in xs:
                for j in ys:
                    v = (v + left[i, s] * right[j, t] * bp(i, j)) % a.p
            if v.any():
                vecs.append(v)
    return _span(a, vecs)


def _corner_spaces(a: BoundAlgebra, i: str, j: str):
    idx = a.paths_between(i, j)
    whole = _span(a, [_unit(a, k) for k in idx])
    rad = _span(a, [_unit(a, k) for k in idx if a.basis_length[k] >= 1])
    return idx, whole, rad


def _dim(x: np.ndarray) -> int:
    return x.shape[1]


def corner_structure_report(pres: AlgebraPresentation, level: int) -> dict:
    """Which corner algebras e_iAe_i are commutative, local and one-generated, and
    which e_jAe_i are cyclic over e_iAe_i (right) or e_jAe_j (left)."""
    if level < 2:
        raise ValueError("corner structure needs level >= 2")
    a = pres.at(level)
    verts = a.quiver.vertices
    rads = {}
    diag = []
    for i in verts:
        idx, whole, rad = _corner_spaces(a, i, i)
        rads[i] = rad
        comm = all(np.array_equal(a.basis_product(s, t), a.basis_product(t, s)) for s in idx for t in idx)
        rad2 = _products(a, rad, rad)
        gen_dim = _dim(rad) - _dim(rad2)
        local = _dim(whole) - _dim(rad) == 1
        item = {
            "vertex": i,
            "dim": _dim(whole),
            "commutative": comm,
            "local": local,
            "radical_generators": gen_dim,
            "one_generated": gen_dim <= 1,
        }
        item["pass"] = comm and local and gen_dim <= 1
        diag.append(item)
    off = []
    for i in verts:
        for j in verts:
            if i == j:
                continue
            idx, whole, _ = _corner_spaces(a, i, j)
            if not idx:
                off.append({"source": i, "target": j, "dim": 0, "right_cyclic": True, "left_cyclic": True, "pass": True})
                continue
            right = _products(a, whole, rads[i])
            left = _products(a, rads[j], whole)
            rc = _dim(whole) - _dim(right) <= 1
            lc = _dim(whole) - _dim(left) <= 1
            off.append(
                {"source": i, "target": j, "dim": _dim(whole), "right_cyclic": rc, "left_cyclic": lc, "pass": rc or lc}
            )
    ok = all(d["pass"] for d in diag) and all(o["pass"] for o in off)
    return {"level": level, "verdict": "PASS" if ok else "FAIL", "vertices": diag, "pairs": off}


def filtration_comparison(pres: AlgebraPresentation, level: int, i: str, j: str) -> dict:
    """Radical filtration of the bimodule e_jAe_i against its R-adic filtration."""
    if level < 2:
        raise ValueError("filtration comparison needs level >= 2")
    a = pres.at(level)
    p = a.p
    idx, M, _ = _corner_spaces(a, i, j)
    _, Ai, Ri = _corner_spaces(a, i, i)
    _, Aj, Rj = _corner_spaces(a, j, j)
    # powers of the corner radicals; power 0 is the corner algebra itself
    def powers(A, R):
        out = [A]
        cur = R
        while True:
            out.append(cur)
            if _dim(cur) == 0:
                break
            cur = _products(a, cur, R)
        return out

    Pi, Pj = powers(Ai, Ri), powers(Aj, Rj)

    def pw(P, s):
        return P[s] if s < len(P) else np.zeros((a.dim, 0), dtype=np.int64)

    radf = []
    m = 0
    while True:
        vecs = []
        for s in range(m + 1):
            part = _products(a, _products(a, pw(Pj, s), M), pw(Pi, m - s))
            vecs.extend(part[:, k] for k in range(part.shape[1]))
        F = _span(a, vecs)
        radf.append(F)
        if _dim(F) == 0:
            break
        m += 1
    radic = []
    for m in range(level + 1):
        radic.append(_span(a, [_unit(a, k) for k in idx if a.basis_length[k] >= m]))

    def same(x, y):
        if _dim(x) != _dim(y):
            return False
        if _dim(x) == 0:
            return True
        return rank_mod(np.concatenate([x, y], axis=1), p) == _dim(x)

    appears = [any(same(G, F) for F in radf) for G in radic]
    quot = [_dim(radf[k]) - _dim(radf[k + 1]) for k in range(len(radf) - 1)]
    distinct_rad = []
    for F in radf:
        if not distinct_rad or not same(distinct_rad[-1], F):
            distinct_rad.append(F)
    distinct_radic = []
    for G in radic:
        if not distinct_radic or not same(distinct_radic[-1], G):
            distinct_radic.append(G)
    same_chain = len(distinct_rad) == len(distinct_radic) and all(same(x, y) for x, y in zip(distinct_rad, distinct_radic))
    return {
        "source": i,
        "target": j,
        "level": level,
        "radical_filtration_dims": [_dim(F) for F in radf],
        "radic_filtration_dims": [_dim(G) for G in radic],
        "radic_terms_appear": appears,
        "quotient_dims": quot,
        "quotients_at_most_one": all(q <= 1 for q in quot),
        "same_chain": same_chain,
    }


@dataclass
class ProbeVerdict:
    kind: str  # cycle_Zn | violates | finite_dimensional | inconclusive
    n: Optional[int] = None
    condition: Optional[str] = None
    witness: dict = field(default_factory=dict)

    def __str__(self):
        if self.kind == "cycle_Zn":
            return f"cycle_Zn({self.n})"
        if self.kind == "violates":
            return f"violates({self.condition})"
        return self.kind

    def to_dict(self) -> dict:
        out = {"verdict": str(self), "kind": self.kind}
        if self.n is not None:
            out["n"] = self.n
        if self.condition is not None:
            out["condition"] = self.condition
        if self.witness:
            out["witness"] = self.witness
        return out


def is_directed_cycle(q: Quiver) -> bool:
    if not q.vertices:
        return False
    if any(len(q.out_arrows(v)) != 1 or len(q.in_arrows(v)) != 1 for v in q.vertices):
        return False
    start = q.vertices[0]
    seen, cur = {start}, q.out_arrows(start)[0].target
    while cur != start:
        seen.add(cur)
        cur = q.out_arrows(cur)[0].target
    return len(seen) == len(q.vertices)


def effective_relations(a: BoundAlgebra) -> List[int]:
    """Indices of relations whose image in kQ/R^l is non-zero."""
    return [k for k, r in enumerate(a.relations) if a.relation_vector(r).any()]


def mild_classification_probe(pres: AlgebraPresentation, level: int) -> ProbeVerdict:
    """Necessary structural conditions for a mild infinite-dimensional admissible algebra."""
    if level < 3:
        raise ValueError("classification probe needs level >= 3")
    a, b = pres.at(level), pres.at(level + 1)
    if a.dim == b.dim:
        return ProbeVerdict("finite_dimensional", witness={"dim": a.dim, "levels": [level, level + 1]})
    rep = corner_structure_report(pres, level)
    for item in rep["vertices"]:
        if not item["pass"]:
            return ProbeVerdict("violates", condition="corner_structure", witness=item)
    for item in rep["pairs"]:
        if not item["pass"]:
            return ProbeVerdict("violates", condition="corner_cyclicity", witness=item)
    for i in a.quiver.vertices:
        for j in a.quiver.vertices:
            n_ji = sum(1 for k in a.paths_between(i, j) if a.basis_length[k] == 1)
            if n_ji > 1:
                return ProbeVerdict(
                    "violates", condition="arrow_space_dimension", witness={"source": i, "target": j, "dim": n_ji}
                )
    if not is_directed_cycle(a.quiver):
        return ProbeVerdict("violates", condition="cycle_shape", witness={"vertices": list(a.quiver.vertices)})
    eff = effective_relations(a)
    if eff:
        return ProbeVerdict(
            "inconclusive",
            witness={"effective_relations": eff, "dims": [a.dim, b.dim], "note": "relation on a cycle; dimension not yet stable"},
        )
    return ProbeVerdict("cycle_Zn", n=len(a.quiver.vertices), witness={"dims": [a.dim, b.dim]})


def hereditary_order_view(n: int, level: int, p: int = 2) -> dict:
    """The n x n symbol matrix of the hereditary order and a dimension check.

    Entry (j, i) is 'o' for j >= i and 'm' above the diagonal.  It predicts
    dim e_j A_l e_i = #{t >= t0 : n t + (j - i) < l} with t0 = 0 for 'o'
    and 1 for 'm'; the actual count comes from the truncated path algebra.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    symbols = [["o" if r >= c else "m" for c in range(1, n + 1)] for r in range(1, n + 1)]
    a = build_algebra(cyclic_quiver(n), [], level, p)
    predicted, actual = [], []
    for j in range(1, n + 1):
        prow, arow = [], []
        for i in range(1, n + 1):
            t = 0 if j >= i else 1
            cnt = 0
            while n * t + (j - i) < level:
                cnt += 1
                t += 1
            prow.append(cnt)
            arow.append(len(a.paths_between(str(i), str(j))))
        predicted.append(prow)
        actual.append(arow)
    return {"n": n, "level": level, "symbols": symbols, "predicted": predicted, "actual": actual, "match": predicted == actual}


def render_order(view: dict) -> str:
    glyph = {"o": "\U0001d52c", "m": "\U0001d52a"}
    return "\n".join("[ " + " ".join(glyph[s] for s in row) + " ]" for row in view["symbols"])
