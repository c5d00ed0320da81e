"""Uniseriality tests, the Ext-quiver of simples, and Serre duality on cycles."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .admissible import effective_relations, is_directed_cycle
from .homology import ext1_dim, hom_dim, translate_DTr
from .krullschmidt import is_isomorphic
from .quiveralg import BoundAlgebra
from .repcat import Rep, cycle_uniserial, height_and_length, simple, socle_series


@dataclass
class ExtQuiver:
    """Simples with arrows S -> T weighted by dim Ext^1(S, T) and its End(T)-length."""

    vertices: List[str]
    arrows: Dict[Tuple[str, str], int] = field(default_factory=dict)
    end_lengths: Dict[Tuple[str, str], int] = field(default_factory=dict)

    def out_degree(self, v: str) -> int:
        return sum(1 for (s, _) in self.arrows if s == v)

    def in_degree(self, v: str) -> int:
        return sum(1 for (_, t) in self.arrows if t == v)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [
                {"from": s, "to": t, "dim": d, "end_length": self.end_lengths[(s, t)]}
                for (s, t), d in sorted(self.arrows.items())
            ],
        }


def ext_quiver(a: BoundAlgebra) -> ExtQuiver:
    if a.level < 2:
        raise ValueError("Ext^1 between simples needs level >= 2")
    verts = list(a.quiver.vertices)
    simples = {v: simple(a, v) for v in verts}
    q = ExtQuiver(verts)
    for s in verts:
        for t in verts:
            d = ext1_dim(simples[s], simples[t])
            if d:
                q.arrows[(s, t)] = d
                q.end_lengths[(s, t)] = d // hom_dim(simples[t], simples[t])
    return q


def gabriel_uniserial_check(q: ExtQuiver) -> Tuple[bool, List[dict]]:
    """Every simple has at most one Ext-successor and one Ext-predecessor, each with label 1."""
    witness = []
    for v in q.vertices:
        outs = {t: d for (s, t), d in q.arrows.items() if s == v}
        ins = {s: d for (s, t), d in q.arrows.items() if t == v}
        if len(outs) > 1 or any(d != 1 for d in outs.values()):
            witness.append({"simple": v, "side": "out", "degree": len(outs), "labels": sorted(outs.values())})
        if len(ins) > 1 or any(d != 1 for d in ins.values()):
            witness.append({"simple": v, "side": "in", "degree": len(ins), "labels": sorted(ins.values())})
    return not witness, witness


def heights_uniserial_check(indecs: Sequence[Rep]) -> Tuple[bool, Optional[dict]]:
    """Height equals length on every listed indecomposable."""
    for k, x in enumerate(indecs):
        ht, ln = height_and_length(x)
        if ht != ln:
            ser = socle_series(x)
            layers = [list(layer) for layer in ser.layers]
            return False, {
                "index": k,
                "dim_vector": list(x.dim_vector),
                "height": ht,
                "length": ln,
                "socle_layers": layers,
            }
    return True, None


def classify_components(q: ExtQuiver) -> List[dict]:
    """Connected components labelled as a cycle, a linear chain, or other."""
    adj: Dict[str, set] = {v: set() for v in q.vertices}
    for s, t in q.arrows:
        adj[s].add(t)
        adj[t].add(s)
    seen, comps = set(), []
    for v in q.vertices:
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in sorted(adj[u]):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comp = [u for u in q.vertices if u in set(comp)]
        sub = ExtQuiver(comp, {e: d for e, d in q.arrows.items() if e[0] in comp}, {})
        ok, _ = gabriel_uniserial_check(sub)
        n = len(comp)
        if not ok:
            kind = "other"
        elif all(sub.out_degree(u) == 1 and sub.in_degree(u) == 1 for u in comp):
            kind = "cycle"
        else:
            kind = "linear"
        item = {"vertices": comp, "type": kind, "size": n}
        if kind == "cycle":
            item["label"] = f"Ã_{n - 1}"
        elif kind == "linear":
            item["label"] = f"A_{n}"
        comps.append(item)
    return comps


def recognize_cycle(a: BoundAlgebra) -> Optional[List[str]]:
    """Vertices of a relation-free directed cycle in walk order, else None."""
    q = a.quiver
    if not is_directed_cycle(q) or effective_relations(a):
        return None
    order = [q.vertices[0]]
    while len(order) < len(q.vertices):
        order.append(q.out_arrows(order[-1])[0].target)
    return order


def serre_duality_check(a: BoundAlgebra, length_bound: int, level: Optional[int] = None, check_dtr: bool = True) -> dict:
    """dim Ext^1(X, Y) = dim Hom(Y, tau X) for uniserials of length <= bound.

    tau is the vertex shift M(i, l) -> M(i+1, l) along the cycle.
    """
    order = recognize_cycle(a)
    if order is None:
        raise ValueError("algebra is not a relation-free directed cycle")
    n = len(order)
    level = a.level if level is None else level
    if level < 2 * length_bound + n:
        raise ValueError(f"level {level} below 2*bound + n = {2 * length_bound + n}")
    b = a if level == a.level else a.with_level(level)
    nxt = {order[k]: order[(k + 1) % n] for k in range(n)}
    objs = [(v, l) for v in order for l in range(1, length_bound + 1)]
    reps = {o: cycle_uniserial(b, o[0], o[1]) for o in objs}
    pairs, violations = [], []
    for x in objs:
        tx = reps[(nxt[x[0]], x[1])]
        for y in objs:
            e = ext1_dim(reps[x], reps[y])
            h = hom_dim(reps[y], tx)
            item = {"X": [x[0], x[1]], "Y": [y[0], y[1]], "ext1": e, "hom_Y_tauX": h, "ok": e == h}
            pairs.append(item)
            if e != h:
                violations.append(item)
    dtr = None
    if check_dtr:
        dtr = []
        for x in objs:
            got = translate_DTr(reps[x])
            dtr.append({"X": [x[0], x[1]], "agrees": is_isomorphic(got, reps[(nxt[x[0]], x[1])])})
    return {
        "n": n,
        "level": level,
        "length_bound": length_bound,
        "pairs": pairs,
        "violations": violations,
        "all_pass": not violations and (dtr is None or all(d["agrees"] for d in dtr)),
        "dtr_agreement": dtr,
    }


def finite_height_report(a: BoundAlgebra, indecs: Sequence[Rep]) -> dict:
    """Simple count, Ext-finiteness and the largest Loewy height among ``indecs``."""
    heights = [height_and_length(x)[0] for x in indecs]
    mx = max(heights) if heights else 0
    q = ext_quiver(a) if a.level >= 2 else ExtQuiver(list(a.quiver.vertices))
    return {
        "level": a.level,
        "simples": len(a.quiver.vertices),
        "ext_finite": True,
        "ext_labels": sorted(q.arrows.values()),
        "max_height": mx,
        "height_capped_by_level": mx == a.level,
    }


def height_growth(a: BoundAlgebra, levels: Sequence[int], max_length: Optional[int] = None) -> dict:
    """Maximal height of a knitted indecomposable at each level; growth witnesses infinite height."""
    from .artheory import knit_ar_quiver

    rows = []
    for l in levels:
        b = a.with_level(l)
        Q = knit_ar_quiver(b, max_length=max_length)
        rep = finite_height_report(b, Q.reps)
        rep["complete"] = Q.complete
        rows.append(rep)
    hs = [r["max_height"] for r in rows]
    return {"levels": rows, "grows": all(x < y for x, y in zip(hs, hs[1:])) and len(hs) > 1}
