"""Finite categories, identity-on-objects functors and right actions.

Everything is table-backed. Composition is diagrammatic: ``compose(f, g)``
is "f then g" and is defined exactly when ``tgt f == src g``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    NotAGroupoid,
    NotComposable,
    ReferenceError,
    SizeLimitExceeded,
    UnknownArrow,
    UnknownObject,
)
from .report import DiagnosticReport

MAX_ARROWS = 10_000
# dense int tables are n x n; past this the packed form gets unreasonable
MAX_PACKED_ARROWS = 4096


@dataclass(frozen=True)
class PackedCategory:
    """Integer-indexed view of a category, consumed by the numeric kernels.

    ``comp[i, j]`` is the index of ``arrows[i] ; arrows[j]`` or -1.
    """

    comp: np.ndarray
    src: np.ndarray
    tgt: np.ndarray
    ident: np.ndarray
    inv: np.ndarray


@dataclass(frozen=True)
class FiniteCategory:
    objects: tuple[str, ...]
    arrows: tuple[str, ...]
    src: Mapping[str, str]
    tgt: Mapping[str, str]
    identities: Mapping[str, str]
    comp: Mapping[tuple[str, str], str]
    inverses: Mapping[str, str] | None = None
    name: str = ""

    def __post_init__(self):
        if len(self.arrows) > MAX_ARROWS:
            raise SizeLimitExceeded(f"{len(self.arrows)} arrows exceeds the cap of {MAX_ARROWS}")
        for kind, ids in (("object", self.objects), ("arrow", self.arrows)):
            if any(not isinstance(i, str) or not i for i in ids):
                raise ReferenceError(f"{kind} ids must be non-empty strings", field=kind + "s")
            if len(set(ids)) != len(ids):
                dup = sorted({i for i in ids if ids.count(i) > 1})
                raise ReferenceError(f"duplicate {kind} ids {dup}", field=kind + "s")
        objs = set(self.objects)
        arrs = set(self.arrows)
        for f in self.arrows:
            for side, m in (("src", self.src), ("tgt", self.tgt)):
                if f not in m:
                    raise ReferenceError(f"arrow {f!r} has no {side}", field=side)
                if m[f] not in objs:
                    raise ReferenceError(f"{side} of {f!r} is unknown object {m[f]!r}", field=side)
        for x, i in self.identities.items():
            if x not in objs:
                raise ReferenceError(f"identity declared for unknown object {x!r}", field="identities")
            if i not in arrs:
                raise ReferenceError(f"identity of {x!r} is unknown arrow {i!r}", field="identities")
        for (f, g), h in self.comp.items():
            for a in (f, g, h):
                if a not in arrs:
                    raise ReferenceError(f"composition entry ({f!r}, {g!r}) -> {h!r} names unknown arrow {a!r}",
                                         field="comp")
            if self.tgt[f] != self.src[g]:
                raise ReferenceError(f"composition entry ({f!r}, {g!r}) is not a composable pair", field="comp")
        if self.inverses is not None:
            for f, g in self.inverses.items():
                if f not in arrs or g not in arrs:
                    raise ReferenceError(f"inverse entry ({f!r}, {g!r}) names an unknown arrow", field="inverses")

    # construction helpers

    @classmethod
    def build(cls, objects: Iterable[str], arrows: Iterable[tuple[str, str, str]],
              identities: Mapping[str, str], comp: Mapping[tuple[str, str], str],
              inverses: Mapping[str, str] | None = None, name: str = "") -> "FiniteCategory":
        arrows = list(arrows)
        return cls(
            objects=tuple(objects),
            arrows=tuple(a for a, _, _ in arrows),
            src={a: s for a, s, _ in arrows},
            tgt={a: t for a, _, t in arrows},
            identities=dict(identities),
            comp=dict(comp),
            inverses=None if inverses is None else dict(inverses),
            name=name,
        )

    def replace(self, **changes) -> "FiniteCategory":
        fields = dict(objects=self.objects, arrows=self.arrows, src=self.src, tgt=self.tgt,
                      identities=self.identities, comp=self.comp, inverses=self.inverses,
                      name=self.name)
        fields.update(changes)
        return FiniteCategory(**fields)

    # lookups

    @property
    def is_groupoid(self) -> bool:
        return self.inverses is not None

    @cached_property
    def index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.arrows)}

    @cached_property
    def object_index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.objects)}

    def __contains__(self, f: str) -> bool:
        return f in self.index

    def __len__(self) -> int:
        return len(self.arrows)

    def _known(self, f: str) -> None:
        if f not in self.index:
            raise UnknownArrow(f, self.name or None)

    def identity(self, x: str) -> str:
        if x not in self.object_index:
            raise UnknownObject(x, self.name or None)
        return self.identities[x]

    def compose(self, f: str, g: str) -> str:
        self._known(f)
        self._known(g)
        if self.tgt[f] != self.src[g]:
            raise NotComposable(f, g, f"tgt {self.tgt[f]!r} != src {self.src[g]!r}")
        try:
            return self.comp[f, g]
        except KeyError:
            raise NotComposable(f, g, "composable pair missing from the table") from None

    def compose_path(self, first: str, *rest: str) -> str:
        out = first
        for g in rest:
            out = self.compose(out, g)
        return out

    def inverse_of(self, f: str) -> str:
        if self.inverses is None:
            raise NotAGroupoid(f"{self.name or 'category'} is not a groupoid")
        self._known(f)
        try:
            return self.inverses[f]
        except KeyError:
            raise NotAGroupoid(f"no inverse recorded for {f!r}") from None

    def hom(self, x: str, y: str) -> tuple[str, ...]:
        for o in (x, y):
            if o not in self.object_index:
                raise UnknownObject(o, self.name or None)
        return tuple(a for a in self.arrows if self.src[a] == x and self.tgt[a] == y)

    def hom_monoid(self, x: str) -> tuple[str, ...]:
        return self.hom(x, x)

    def is_identity(self, f: str) -> bool:
        return self.identities.get(self.src[f]) == f

    @cached_property
    def packed(self) -> PackedCategory:
        n = len(self.arrows)
        if n > MAX_PACKED_ARROWS:
            raise SizeLimitExceeded(f"{n} arrows is too many for dense tables (cap {MAX_PACKED_ARROWS})")
        ix = self.index
        ox = self.object_index
        comp = np.full((n, n), -1, dtype=np.int64)
        for (f, g), h in self.comp.items():
            comp[ix[f], ix[g]] = ix[h]
        inv = np.full(n, -1, dtype=np.int64)
        if self.inverses is not None:
            for f, g in self.inverses.items():
                inv[ix[f]] = ix[g]
        ident = np.array([ix.get(self.identities.get(x, ""), -1) for x in self.objects], dtype=np.int64)
        return PackedCategory(
            comp=comp,
            src=np.array([ox[self.src[a]] for a in self.arrows], dtype=np.int64),
            tgt=np.array([ox[self.tgt[a]] for a in self.arrows], dtype=np.int64),
            ident=ident,
            inv=inv,
        )


def compose(cat: FiniteCategory, f: str, g: str) -> str:
    return cat.compose(f, g)


def inverse_of(cat: FiniteCategory, f: str) -> str:
    return cat.inverse_of(f)


def hom_monoid(cat: FiniteCategory, x: str) -> tuple[str, ...]:
    return cat.hom_monoid(x)


def is_totally_intransitive(cat: FiniteCategory) -> bool:
    return all(cat.src[m] == cat.tgt[m] for m in cat.arrows)


def validate_category(cat: FiniteCategory) -> DiagnosticReport:
    """Check table consistency, identities, associativity and (if flagged) inverses.

    Every finding carries the offending arrows; nothing is raised.
    """
    rep = DiagnosticReport(f"category {cat.name}".strip())
    arrows = cat.arrows
    by_src: dict[str, list[str]] = {x: [] for x in cat.objects}
    for a in arrows:
        by_src[cat.src[a]].append(a)

    table = rep.check("table")
    for f in arrows:
        for g in by_src[cat.tgt[f]]:
            table.instances += 1
            h = cat.comp.get((f, g))
            if h is None:
                table.add({"f": f, "g": g, "problem": "composable pair missing"})
            elif cat.src[h] != cat.src[f] or cat.tgt[h] != cat.tgt[g]:
                table.add({"f": f, "g": g, "fg": h, "problem": "composite has wrong endpoints"})

    ids = rep.check("identities")
    for x in cat.objects:
        ids.instances += 1
        i = cat.identities.get(x)
        if i is None:
            ids.add({"object": x, "problem": "no identity"})
            continue
        if cat.src[i] != x or cat.tgt[i] != x:
            ids.add({"object": x, "id": i, "problem": "identity is not an endo-arrow"})
            continue
        for f in arrows:
            if cat.src[f] == x:
                ids.instances += 1
                if cat.comp.get((i, f)) != f:
                    ids.add({"id": i, "f": f, "problem": "id;f != f"})
            if cat.tgt[f] == x:
                ids.instances += 1
                if cat.comp.get((f, i)) != f:
                    ids.add({"f": f, "id": i, "problem": "f;id != f"})

    assoc = rep.check("associativity")
    comp = cat.comp
    for f in arrows:
        for g in by_src[cat.tgt[f]]:
            fg = comp.get((f, g))
            for h in by_src[cat.tgt[g]]:
                assoc.instances += 1
                gh = comp.get((g, h))
                left = comp.get((fg, h)) if fg is not None else None
                right = comp.get((f, gh)) if gh is not None else None
                if left is None or left != right:
                    assoc.add({"f": f, "g": g, "h": h, "(fg)h": left, "f(gh)": right})

    if cat.is_groupoid:
        inv = rep.check("inverses")
        for f in arrows:
            inv.instances += 1
            g = cat.inverses.get(f)
            if g is None:
                inv.add({"f": f, "problem": "no inverse"})
                continue
            if comp.get((f, g)) != cat.identities.get(cat.src[f]) or \
                    comp.get((g, f)) != cat.identities.get(cat.tgt[f]):
                inv.add({"f": f, "inv": g, "f;inv": comp.get((f, g)), "inv;f": comp.get((g, f))})
    return rep


@dataclass(frozen=True)
class IdObjFunctor:
    """A functor that is the identity on objects, given by its arrow map."""

    dom: FiniteCategory
    cod: FiniteCategory
    arrow_map: Mapping[str, str]
    name: str = ""

    def __call__(self, f: str) -> str:
        try:
            return self.arrow_map[f]
        except KeyError:
            raise UnknownArrow(f, f"domain of {self.name or 'functor'}") from None

    @cached_property
    def packed(self) -> np.ndarray:
        cix = self.cod.index
        return np.array([cix.get(self.arrow_map.get(a, ""), -1) for a in self.dom.arrows], dtype=np.int64)


def identity_functor(cat: FiniteCategory, name: str = "") -> IdObjFunctor:
    return IdObjFunctor(cat, cat, {a: a for a in cat.arrows}, name)


def inclusion(sub: FiniteCategory, sup: FiniteCategory, name: str = "") -> IdObjFunctor:
    """Inclusion of a subcategory that shares arrow names with ``sup``."""
    return IdObjFunctor(sub, sup, {a: a for a in sub.arrows}, name)


def compose_functors(F: IdObjFunctor, G: IdObjFunctor, name: str = "") -> IdObjFunctor:
    return IdObjFunctor(F.dom, G.cod, {a: G(F(a)) for a in F.dom.arrows}, name)


def validate_functor(F: IdObjFunctor) -> DiagnosticReport:
    rep = DiagnosticReport(f"functor {F.name}".strip())
    dom, cod = F.dom, F.cod

    objs = rep.check("objects", instances=1)
    if set(dom.objects) != set(cod.objects):
        objs.add({"domain_only": sorted(set(dom.objects) - set(cod.objects)),
                  "codomain_only": sorted(set(cod.objects) - set(dom.objects))})
        return rep

    ends = rep.check("endpoints")
    for f in dom.arrows:
        ends.instances += 1
        g = F.arrow_map.get(f)
        if g is None:
            ends.add({"f": f, "problem": "unmapped"})
        elif g not in cod:
            ends.add({"f": f, "F(f)": g, "problem": "image not an arrow of the codomain"})
        elif cod.src[g] != dom.src[f] or cod.tgt[g] != dom.tgt[f]:
            ends.add({"f": f, "F(f)": g, "problem": "source/target not preserved"})

    ids = rep.check("identities")
    for x in dom.objects:
        ids.instances += 1
        i = dom.identities.get(x)
        if F.arrow_map.get(i) != cod.identities.get(x):
            ids.add({"object": x, "F(id)": F.arrow_map.get(i), "id": cod.identities.get(x)})

    comp = rep.check("composition")
    for (f, g), h in dom.comp.items():
        comp.instances += 1
        Ff, Fg, Fh = F.arrow_map.get(f), F.arrow_map.get(g), F.arrow_map.get(h)
        got = cod.comp.get((Ff, Fg))
        if got is None or got != Fh:
            comp.add({"f": f, "g": g, "F(fg)": Fh, "F(f)F(g)": got})
    return rep


@dataclass(frozen=True)
class RightAction:
    """A partial map ``(m, h) -> m^h`` of ``actor`` on a totally intransitive ``acted``."""

    acted: FiniteCategory
    actor: FiniteCategory
    table: Mapping[tuple[str, str], str]
    name: str = ""

    def act(self, m: str, h: str) -> str:
        if m not in self.acted:
            raise UnknownArrow(m, "acted category")
        if h not in self.actor:
            raise UnknownArrow(h, "acting category")
        try:
            return self.table[m, h]
        except KeyError:
            raise NotComposable(m, h, f"action undefined (m at {self.acted.src[m]!r}, "
                                      f"h from {self.actor.src[h]!r})") from None

    __call__ = act

    @cached_property
    def packed(self) -> np.ndarray:
        mix, hix = self.acted.index, self.actor.index
        out = np.full((len(self.acted.arrows), len(self.actor.arrows)), -1, dtype=np.int64)
        for (m, h), r in self.table.items():
            if m in mix and h in hix:
                out[mix[m], hix[h]] = mix.get(r, -1)
        return out


def validate_right_action(act: RightAction) -> DiagnosticReport:
    rep = DiagnosticReport(f"action {act.name}".strip())
    M, A = act.acted, act.actor
    table = act.table

    ti = rep.check("acted_totally_intransitive", instances=len(M.arrows))
    for m in M.arrows:
        if M.src[m] != M.tgt[m]:
            ti.add({"m": m, "src": M.src[m], "tgt": M.tgt[m]})
    objs = rep.check("objects", instances=1)
    if set(M.objects) != set(A.objects):
        objs.add({"acted": sorted(M.objects), "actor": sorted(A.objects)})
    if not ti.ok or not objs.ok:
        return rep

    typing = rep.check("typing")
    for (m, h), r in table.items():
        typing.instances += 1
        if m not in M or h not in A:
            typing.add({"m": m, "h": h, "problem": "entry names unknown arrows"})
        elif A.src[h] != M.src[m]:
            typing.add({"m": m, "h": h, "problem": "h does not start at the object of m"})
        elif r not in M:
            typing.add({"m": m, "h": h, "m^h": r, "problem": "result escapes the acted category"})
        elif M.src[r] != A.tgt[h]:
            typing.add({"m": m, "h": h, "m^h": r, "problem": "result not at the target of h"})

    total = rep.check("totality")
    from_obj: dict[str, list[str]] = {x: [] for x in A.objects}
    for h in A.arrows:
        from_obj[A.src[h]].append(h)
    for m in M.arrows:
        for h in from_obj[M.src[m]]:
            total.instances += 1
            if (m, h) not in table:
                total.add({"m": m, "h": h, "problem": "undefined"})

    def ok(r):
        return r is not None and r in M

    unit = rep.check("identity_fixed")  # 1^h = 1
    for h in A.arrows:
        unit.instances += 1
        r = table.get((M.identities.get(A.src[h]), h))
        if r is None or r != M.identities.get(A.tgt[h]):
            unit.add({"h": h, "1^h": r})

    trivial = rep.check("identity_acts_trivially")  # m^1 = m
    for m in M.arrows:
        trivial.instances += 1
        r = table.get((m, A.identities.get(M.src[m])))
        if r != m:
            trivial.add({"m": m, "m^1": r})

    prod = rep.check("product")  # (m m1)^h = m^h m1^h
    for x in M.objects:
        mon = M.hom_monoid(x)
        for h in from_obj[x]:
            for m, m1 in product(mon, mon):
                prod.instances += 1
                lhs = table.get((M.comp.get((m, m1)), h))
                a, b = table.get((m, h)), table.get((m1, h))
                rhs = M.comp.get((a, b)) if ok(a) and ok(b) else None
                if lhs is None or lhs != rhs:
                    prod.add({"m": m, "m1": m1, "h": h, "(mm1)^h": lhs, "m^h m1^h": rhs})

    chain = rep.check("composite")  # m^{hk} = (m^h)^k
    for m in M.arrows:
        for h in from_obj[M.src[m]]:
            for k in from_obj[A.tgt[h]]:
                chain.instances += 1
                lhs = table.get((m, A.comp.get((h, k))))
                mh = table.get((m, h))
                rhs = table.get((mh, k)) if ok(mh) else None
                if lhs is None or lhs != rhs:
                    chain.add({"m": m, "h": h, "k": k, "m^(hk)": lhs, "(m^h)^k": rhs})
    return rep
