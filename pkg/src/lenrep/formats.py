"""JSON algebra and module files, deterministic report dumps, and DOT output."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional, Union

from .exactla import check_prime
from .quiveralg import Arrow, BoundAlgebra, Quiver, QuiverError, Relation, build_algebra
from .repcat import Rep


class SpecError(ValueError):
    """Malformed input; ``where`` is a JSON path or ``line:col`` position."""

    def __init__(self, message: str, where: str = "$", source: Optional[str] = None):
        self.where = where
        self.source = source
        loc = f"{source}: " if source else ""
        super().__init__(f"{loc}{where}: {message}")


def _load_text(text: str, source: Optional[str]) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(e.msg, f"line {e.lineno} column {e.colno}", source) from None


def _read(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SpecError(str(e.strerror or e), "$", str(path)) from None
    except UnicodeDecodeError:
        raise SpecError("file is not UTF-8", "$", str(path)) from None


def _need(obj, key, kind, where, source):
    if not isinstance(obj, dict) or key not in obj:
        raise SpecError(f"missing key {key!r}", where, source)
    val = obj[key]
    if kind is int:
        ok = isinstance(val, int) and not isinstance(val, bool)
    else:
        ok = isinstance(val, kind)
    if not ok:
        raise SpecError(f"expected {getattr(kind, '__name__', kind)}", f"{where}.{key}", source)
    return val


def algebra_from_dict(doc: Any, source: Optional[str] = None, level_override: Optional[int] = None) -> BoundAlgebra:
    if not isinstance(doc, dict):
        raise SpecError("expected an object", "$", source)
    fld = _need(doc, "field", dict, "$", source)
    p = _need(fld, "char", int, "$.field", source)
    try:
        check_prime(p)
    except ValueError as e:
        raise SpecError(str(e), "$.field.char", source) from None
    q = _need(doc, "quiver", dict, "$", source)
    verts = _need(q, "vertices", list, "$.quiver", source)
    for k, v in enumerate(verts):
        if not isinstance(v, (str, int)) or isinstance(v, bool):
            raise SpecError("vertex labels must be strings or integers", f"$.quiver.vertices[{k}]", source)
    arrows = []
    for k, a in enumerate(_need(q, "arrows", list, "$.quiver", source)):
        w = f"$.quiver.arrows[{k}]"
        name = _need(a, "name", str, w, source)
        frm, to = a.get("from") if isinstance(a, dict) else None, a.get("to") if isinstance(a, dict) else None
        for key, val in (("from", frm), ("to", to)):
            if val is None:
                raise SpecError(f"missing key {key!r}", w, source)
            if str(val) not in {str(v) for v in verts}:
                raise SpecError(f"unknown vertex {val!r}", f"{w}.{key}", source)
        arrows.append(Arrow(name, str(frm), str(to)))
    try:
        quiver = Quiver(verts, arrows)
    except QuiverError as e:
        raise SpecError(str(e), "$.quiver", source) from None
    rels = []
    for k, r in enumerate(doc.get("relations", []) or []):
        w = f"$.relations[{k}]"
        terms = []
        for t, term in enumerate(_need(r, "terms", list, w, source)):
            tw = f"{w}.terms[{t}]"
            c = _need(term, "coeff", int, tw, source)
            path = _need(term, "path", list, tw, source)
            if not all(isinstance(x, str) for x in path):
                raise SpecError("path entries must be arrow names", f"{tw}.path", source)
            terms.append((c, path))
        rel = Relation.of(*terms)
        try:
            rel.validate(quiver)
        except QuiverError as e:
            raise SpecError(str(e), w, source) from None
        rels.append(rel)
    level = _need(doc, "truncation", int, "$", source)
    if level_override is not None:
        level = level_override
    if level < 1:
        raise SpecError("truncation level must be >= 1", "$.truncation", source)
    return build_algebra(quiver, rels, level, p)


def load_algebra(path: Union[str, Path], level_override: Optional[int] = None) -> BoundAlgebra:
    src = str(path)
    return algebra_from_dict(_load_text(_read(path), src), src, level_override)


def algebra_to_dict(a: BoundAlgebra) -> dict:
    return {
        "field": {"char": a.p},
        "quiver": {
            "vertices": list(a.quiver.vertices),
            "arrows": [{"name": x.name, "from": x.source, "to": x.target} for x in a.quiver.arrows],
        },
        "relations": [{"terms": [{"coeff": c, "path": list(t)} for c, t in r.terms]} for r in a.relations],
        "truncation": a.level,
    }


def module_from_dict(doc: Any, a: BoundAlgebra, source: Optional[str] = None) -> Rep:
    if not isinstance(doc, dict):
        raise SpecError("expected an object", "$", source)
    dims = _need(doc, "dims", dict, "$", source)
    vs = set(a.quiver.vertices)
    clean = {}
    for v, d in dims.items():
        if v not in vs:
            raise SpecError(f"unknown vertex {v!r}", f"$.dims.{v}", source)
        if not isinstance(d, int) or isinstance(d, bool) or d < 0:
            raise SpecError("dimension must be a non-negative integer", f"$.dims.{v}", source)
        clean[v] = d
    full = {v: clean.get(v, 0) for v in a.quiver.vertices}
    maps = doc.get("maps", {}) or {}
    if not isinstance(maps, dict):
        raise SpecError("expected an object", "$.maps", source)
    out = {}
    for name, m in maps.items():
        w = f"$.maps.{name}"
        if name not in a.quiver.arrow:
            raise SpecError(f"unknown arrow {name!r}", w, source)
        arr = a.quiver.arrow[name]
        rows, cols = full[arr.target], full[arr.source]
        if rows == 0 or cols == 0:
            if not (m == [] or (isinstance(m, list) and len(m) == rows and all(r == [] for r in m))):
                raise SpecError(f"expected an empty {rows}x{cols} matrix", w, source)
            continue
        if not isinstance(m, list) or len(m) != rows:
            raise SpecError(f"expected {rows} rows (target dimension)", w, source)
        for k, row in enumerate(m):
            if not isinstance(row, list) or len(row) != cols:
                raise SpecError(f"expected {cols} columns (source dimension)", f"{w}[{k}]", source)
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in row):
                raise SpecError("entries must be integers", f"{w}[{k}]", source)
        out[name] = m
    return Rep(a, full, out)


def load_module(path: Union[str, Path], a: BoundAlgebra) -> Rep:
    src = str(path)
    return module_from_dict(_load_text(_read(path), src), a, src)


def module_to_dict(r: Rep) -> dict:
    return r.to_spec()


def dumps(obj: Any, indent: Optional[int] = 2) -> str:
    return json.dumps(obj, indent=indent, sort_keys=True, ensure_ascii=False) + "\n"


def ar_quiver_dot(Q) -> str:
    """DOT text: nodes labelled by dimension vector, solid irreducible maps, dashed tau."""
    lines = ["digraph ar {", "  rankdir=LR;", '  node [shape=box, fontname="monospace"];']
    for k, v in enumerate(Q.vertices):
        label = "".join(str(d) for d in v.dim_vector) if max(v.dim_vector, default=0) < 10 else ",".join(
            str(d) for d in v.dim_vector
        )
        extra = []
        if v.projective:
            extra.append("P")
        if v.injective:
            extra.append("I")
        tag = f"\\n{''.join(extra)}" if extra else ""
        lines.append(f'  n{k} [label="{label}{tag}"];')
    for (s, t), m in sorted(Q.arrows.items()):
        lab = f' [label="{m}"]' if m > 1 else ""
        lines.append(f"  n{s} -> n{t}{lab};")
    for z, x in sorted(Q.tau.items()):
        lines.append(f"  n{z} -> n{x} [style=dashed, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"
