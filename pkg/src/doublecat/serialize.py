"""JSON files for categories, double modules, grids and crossed modules.

Every file is one JSON object with a ``kind`` discriminator. Arrows are
referenced by id; composition tables, functors and actions are arrays of
tuples. Output is canonical (fixed key order, entries in arrow order, one
tuple per line) so ``dumps(loads(dumps(x))) == dumps(x)`` byte for byte.
The schema lives in ``doublecat/schema/structure.schema.json``.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any, NamedTuple, Union

from .category import FiniteCategory, IdObjFunctor, RightAction
from .double import Square, SquareGrid
from .errors import ParseError, ReferenceError
from .module import DoubleModule

FORMAT_VERSION = 1


class CrossedModule(NamedTuple):
    boundary: IdObjFunctor
    action: RightAction


Structure = Union[FiniteCategory, DoubleModule, SquareGrid, CrossedModule]


# writing


def category_body(cat: FiniteCategory) -> dict[str, Any]:
    ix = cat.index
    comp = sorted(cat.comp.items(), key=lambda kv: (ix[kv[0][0]], ix[kv[0][1]]))
    body = {
        "name": cat.name,
        "objects": list(cat.objects),
        "arrows": [[a, cat.src[a], cat.tgt[a]] for a in cat.arrows],
        "identities": [[x, cat.identities[x]] for x in cat.objects if x in cat.identities],
        "comp": [[f, g, h] for (f, g), h in comp],
        "groupoid": cat.is_groupoid,
    }
    if cat.inverses is not None:
        body["inverses"] = [[f, cat.inverses[f]] for f in cat.arrows if f in cat.inverses]
    return body


def _functor_rows(F: IdObjFunctor) -> list[list[str]]:
    return [[a, F.arrow_map[a]] for a in F.dom.arrows if a in F.arrow_map]


def _action_rows(act: RightAction) -> list[list[str]]:
    mix, hix = act.acted.index, act.actor.index
    big = len(mix) + len(hix) + 1

    def key(item):
        (m, h), _ = item
        return (mix.get(m, big), hix.get(h, big), m, h)

    return [[m, h, r] for (m, h), r in sorted(act.table.items(), key=key)]


def to_dict(obj: Structure) -> dict[str, Any]:
    if isinstance(obj, FiniteCategory):
        return {"kind": "category", "format": FORMAT_VERSION, **category_body(obj)}
    if isinstance(obj, DoubleModule):
        return {
            "kind": "double_module",
            "format": FORMAT_VERSION,
            "name": obj.name,
            "M": category_body(obj.M),
            "H": category_body(obj.H),
            "V": category_body(obj.V),
            "P": category_body(obj.P),
            "mu": _functor_rows(obj.mu),
            "phi": _functor_rows(obj.phi),
            "psi": _functor_rows(obj.psi),
            "actH": _action_rows(obj.actH),
            "actV": _action_rows(obj.actV),
        }
    if isinstance(obj, SquareGrid):
        r, c = obj.shape
        return {
            "kind": "grid",
            "format": FORMAT_VERSION,
            "rows": r,
            "cols": c,
            "squares": [[q._asdict() for q in row] for row in obj.rows],
        }
    if isinstance(obj, CrossedModule):
        return {
            "kind": "crossed_module",
            "format": FORMAT_VERSION,
            "group": category_body(obj.boundary.dom),
            "base": category_body(obj.boundary.cod),
            "boundary": _functor_rows(obj.boundary),
            "action": _action_rows(obj.action),
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _render(value: Any, indent: int) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f'{pad}  {json.dumps(k)}: {_render(v, indent + 1)}' for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            return json.dumps(value, ensure_ascii=False)
        items = [f"{pad}  {_render(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(value, ensure_ascii=False)


def dumps(obj: Structure | dict) -> str:
    data = obj if isinstance(obj, dict) else to_dict(obj)
    return _render(data, 0) + "\n"


def save_structure(obj: Structure, path: str | Path) -> None:
    text = dumps(obj)
    if str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# reading


def _field(d: dict, name: str, where: str, kind: type | tuple = None):
    if not isinstance(d, dict):
        raise ParseError(f"expected an object at {where or 'top level'}", field=where or None)
    if name not in d:
        raise ParseError("missing field", field=f"{where}.{name}" if where else name)
    v = d[name]
    if kind is not None and not isinstance(v, kind):
        raise ParseError(f"wrong type, expected {getattr(kind, '__name__', kind)}",
                         field=f"{where}.{name}" if where else name)
    return v


def _rows(d: dict, name: str, where: str, width: int, optional: bool = False) -> list[list[str]]:
    if optional and name not in d:
        return []
    rows = _field(d, name, where, list)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != width or not all(isinstance(x, str) for x in row):
            path = f"{where}.{name}" if where else name
            raise ParseError(f"expected a list of {width} strings", field=f"{path}[{i}]")
    return rows


def category_from_body(d: dict, where: str = "") -> FiniteCategory:
    objects = _field(d, "objects", where, list)
    arrows = _rows(d, "arrows", where, 3)
    identities = _rows(d, "identities", where, 2)
    comp = _rows(d, "comp", where, 3)
    groupoid = d.get("groupoid", False)
    inverses = _rows(d, "inverses", where, 2, optional=True)
    if groupoid and "inverses" not in d:
        raise ParseError("groupoid declared without inverses", field=f"{where}.inverses")
    for i, (f, g, _) in enumerate(comp):
        # duplicate keys would silently collapse in a dict
        if [f, g] in (row[:2] for row in comp[:i]):
            raise ReferenceError(f"duplicate composition entry ({f!r}, {g!r})", field=f"{where}.comp[{i}]")
    try:
        return FiniteCategory.build(
            objects=objects,
            arrows=[tuple(r) for r in arrows],
            identities={x: i for x, i in identities},
            comp={(f, g): h for f, g, h in comp},
            inverses={f: g for f, g in inverses} if groupoid else None,
            name=d.get("name", ""),
        )
    except ReferenceError as e:
        raise ReferenceError(str(e), field=f"{where}.{e.field}" if where and e.field else e.field) from None


def _functor(rows, dom, cod, where) -> IdObjFunctor:
    amap = {}
    for i, (a, b) in enumerate(rows):
        if a not in dom:
            raise ReferenceError(f"{where} maps unknown arrow {a!r}", field=f"{where}[{i}]")
        if b not in cod:
            raise ReferenceError(f"{where} sends {a!r} to unknown arrow {b!r}", field=f"{where}[{i}]")
        amap[a] = b
    return IdObjFunctor(dom, cod, amap, where)


def _action(rows, acted, actor, where) -> RightAction:
    table = {}
    for i, (m, h, r) in enumerate(rows):
        for x, cat in ((m, acted), (h, actor), (r, acted)):
            if x not in cat:
                raise ReferenceError(f"{where} entry names unknown arrow {x!r}", field=f"{where}[{i}]")
        table[m, h] = r
    return RightAction(acted, actor, table, where)


def from_dict(d: dict) -> Structure:
    kind = _field(d, "kind", "", str)
    if kind == "category":
        return category_from_body(d)
    if kind == "double_module":
        cats = {s: category_from_body(_field(d, s, "", dict), s) for s in ("M", "H", "V", "P")}
        M, H, V, P = (cats[s] for s in "MHVP")
        return DoubleModule(
            M, H, V, P,
            _functor(_rows(d, "mu", "", 2), M, P, "mu"),
            _functor(_rows(d, "phi", "", 2), H, P, "phi"),
            _functor(_rows(d, "psi", "", 2), V, P, "psi"),
            _action(_rows(d, "actH", "", 3), M, H, "actH"),
            _action(_rows(d, "actV", "", 3), M, V, "actV"),
            d.get("name", ""),
        )
    if kind == "grid":
        rows = _field(d, "squares", "", list)
        out = []
        for i, row in enumerate(rows):
            if not isinstance(row, list):
                raise ParseError("expected a row of squares", field=f"squares[{i}]")
            line = []
            for j, q in enumerate(row):
                where = f"squares[{i}][{j}]"
                line.append(Square(*(_field(q, k, where, str) for k in Square._fields)))
            out.append(tuple(line))
        grid = SquareGrid(tuple(out))
        if "rows" in d and "cols" in d and (d["rows"], d["cols"]) != grid.shape:
            raise ParseError(f"declared shape {d['rows']}x{d['cols']} != actual {grid.shape}", field="rows")
        return grid
    if kind == "crossed_module":
        G = category_from_body(_field(d, "group", "", dict), "group")
        B = category_from_body(_field(d, "base", "", dict), "base")
        return CrossedModule(_functor(_rows(d, "boundary", "", 2), G, B, "boundary"),
                             _action(_rows(d, "action", "", 3), G, B, "action"))
    raise ParseError(f"unknown kind {kind!r}", field="kind")


def loads(text: str) -> Structure:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("top level must be a JSON object", line=1)
    return from_dict(data)


def load_structure(path: str | Path) -> Structure:
    """Read a structure file (``-`` for stdin). Validation is not implied."""
    if str(path) == "-":
        return loads(sys.stdin.read())
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    return loads(text)
