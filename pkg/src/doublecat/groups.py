"""Small groups as one-object groupoids, plus the actions built from them.

Element names are canonical: residues ``"0".."n-1"`` for cyclic groups,
cycle notation with ``"e"`` for the identity for symmetric groups, and
``"r^i s"`` style words for dihedral groups.
"""

from __future__ import annotations

from itertools import permutations
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .category import FiniteCategory, RightAction
from .errors import NotAGroupoid, ReferenceError, SizeLimitExceeded, UnknownArrow

MAX_GROUP_ORDER = 48
STAR = "*"


def group_category(elements: Sequence[Hashable], mul: Callable, names: Callable[[Hashable], str],
                   name: str = "", obj: str = STAR) -> FiniteCategory:
    """Tabulate a finite group given by elements and a multiplication.

    ``mul(x, y)`` is the product "x then y". The first element must be the
    identity.
    """
    if len(elements) > MAX_GROUP_ORDER:
        raise SizeLimitExceeded(f"group order {len(elements)} exceeds {MAX_GROUP_ORDER}")
    label = {g: names(g) for g in elements}
    e = elements[0]
    comp = {}
    inverses = {}
    for g in elements:
        for h in elements:
            gh = mul(g, h)
            comp[label[g], label[h]] = label[gh]
            if gh == e:
                inverses[label[g]] = label[h]
    return FiniteCategory.build(
        objects=[obj],
        arrows=[(label[g], obj, obj) for g in elements],
        identities={obj: label[e]},
        comp=comp,
        inverses=inverses,
        name=name,
    )


def build_cyclic(n: int, obj: str = STAR) -> FiniteCategory:
    if not 1 <= n <= MAX_GROUP_ORDER:
        raise SizeLimitExceeded(f"cyclic group order must be in 1..{MAX_GROUP_ORDER}, got {n}")
    return group_category(list(range(n)), lambda a, b: (a + b) % n, str, f"C{n}", obj)


def cycle_notation(perm: Sequence[int]) -> str:
    """Name a permutation of ``1..n`` (given as its one-line tuple) by its cycles."""
    seen = set()
    out = []
    for start in range(1, len(perm) + 1):
        if start in seen or perm[start - 1] == start:
            continue
        cyc = [start]
        seen.add(start)
        nxt = perm[start - 1]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt - 1]
        out.append("(" + "".join(map(str, cyc)) + ")")
    return "".join(out) or "e"


def perm_then(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """Apply ``p`` first, then ``q`` (points act on the right)."""
    return tuple(q[p[i] - 1] for i in range(len(p)))


def build_symmetric(n: int, obj: str = STAR) -> FiniteCategory:
    if not 1 <= n <= 4:
        raise SizeLimitExceeded(f"symmetric groups are capped at n <= 4, got {n}")
    elements = list(permutations(range(1, n + 1)))  # identity first, lexicographic
    return group_category(elements, perm_then, cycle_notation, f"S{n}", obj)


def _dihedral_name(el: tuple[int, int]) -> str:
    i, j = el
    parts = []
    if i:
        parts.append("r" if i == 1 else f"r^{i}")
    if j:
        parts.append("s")
    return " ".join(parts) or "e"


def build_dihedral(n: int, obj: str = STAR) -> FiniteCategory:
    """Dihedral group of order 2n, elements ``r^i s^j`` with ``s r s = r^-1``."""
    if not 1 <= n or 2 * n > MAX_GROUP_ORDER:
        raise SizeLimitExceeded(f"dihedral group of order {2 * n} is outside 2..{MAX_GROUP_ORDER}")
    elements = [(i, j) for j in range(2) for i in range(n)]

    def mul(x, y):
        (i1, j1), (i2, j2) = x, y
        return ((i1 + (-i2 if j1 else i2)) % n, (j1 + j2) % 2)

    return group_category(elements, mul, _dihedral_name, f"D{n}", obj)


def _one_object(cat: FiniteCategory) -> str:
    if len(cat.objects) != 1 or not cat.is_groupoid:
        raise NotAGroupoid(f"{cat.name or 'category'} is not a one-object groupoid")
    return cat.objects[0]


def subgroup_closure(cat: FiniteCategory, gens: Iterable[str], name: str = "") -> FiniteCategory:
    """Smallest subgroup containing ``gens``; arrow names are shared with ``cat``."""
    obj = _one_object(cat)
    gens = list(gens)
    for g in gens:
        if g not in cat:
            raise UnknownArrow(g, cat.name or None)
    members = {cat.identities[obj]}
    frontier = list(members)
    # a finite subset closed under products is a subgroup
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = cat.comp[x, g]
                if y not in members:
                    members.add(y)
                    new.append(y)
        frontier = new
    keep = [a for a in cat.arrows if a in members]
    return FiniteCategory.build(
        objects=[obj],
        arrows=[(a, obj, obj) for a in keep],
        identities={obj: cat.identities[obj]},
        comp={(f, g): cat.comp[f, g] for f in keep for g in keep},
        inverses={f: cat.inverses[f] for f in keep},
        name=name or f"<{', '.join(gens)}> in {cat.name}".strip(),
    )


def conjugate(ambient: FiniteCategory, m: str, h: str) -> str:
    """``h^-1 m h`` computed in ``ambient``."""
    return ambient.compose_path(ambient.inverse_of(h), m, h)


def conjugation_action(acted: FiniteCategory, actor: FiniteCategory, ambient: FiniteCategory,
                       name: str = "") -> RightAction:
    """``m^h = h^-1 m h`` with all three categories sitting inside ``ambient``.

    Conjugates that leave ``acted`` are recorded anyway; ``validate_right_action``
    reports them as typing violations.
    """
    table = {}
    for m in acted.arrows:
        for h in actor.arrows:
            if actor.src[h] == acted.src[m]:
                table[m, h] = conjugate(ambient, m, h)
    return RightAction(acted, actor, table, name or "conjugation")


def trivial_action(acted: FiniteCategory, actor: FiniteCategory, name: str = "") -> RightAction:
    """``m^h = m`` on loops, and identities go to identities.

    On a multi-object actor a non-identity ``m`` cannot be moved along a
    non-loop ``h``; such pairs are left undefined.
    """
    table = {}
    for m in acted.arrows:
        x = acted.src[m]
        for h in actor.arrows:
            if actor.src[h] != x:
                continue
            y = actor.tgt[h]
            if acted.is_identity(m):
                table[m, h] = acted.identities[y]
            elif y == x:
                table[m, h] = m
    return RightAction(acted, actor, table, name or "trivial")


def action_from_function(acted: FiniteCategory, actor: FiniteCategory,
                         fn: Callable[[str, str], str], name: str = "") -> RightAction:
    table = {}
    for m in acted.arrows:
        for h in actor.arrows:
            if actor.src[h] == acted.src[m]:
                table[m, h] = fn(m, h)
    return RightAction(acted, actor, table, name)


def discrete_category(objects: Iterable[str], name: str = "") -> FiniteCategory:
    """Identities only; arrow ids are ``1_<object>``."""
    objects = list(objects)
    return FiniteCategory.build(
        objects=objects,
        arrows=[(f"1_{x}", x, x) for x in objects],
        identities={x: f"1_{x}" for x in objects},
        comp={(f"1_{x}", f"1_{x}"): f"1_{x}" for x in objects},
        inverses={f"1_{x}": f"1_{x}" for x in objects},
        name=name or "discrete",
    )


def disjoint_union(parts: Mapping[str, FiniteCategory], name: str = "") -> FiniteCategory:
    """Place one-object categories at distinct objects; arrows become ``<object>:<arrow>``."""
    arrows, identities, comp = [], {}, {}
    inverses: dict[str, str] | None = {}
    for x, cat in parts.items():
        if len(cat.objects) != 1:
            raise ReferenceError(f"part at {x!r} must have exactly one object")
        o = cat.objects[0]
        arrows += [(f"{x}:{a}", x, x) for a in cat.arrows]
        identities[x] = f"{x}:{cat.identities[o]}"
        comp.update({(f"{x}:{f}", f"{x}:{g}"): f"{x}:{h}" for (f, g), h in cat.comp.items()})
        if cat.inverses is None:
            inverses = None
        elif inverses is not None:
            inverses.update({f"{x}:{f}": f"{x}:{g}" for f, g in cat.inverses.items()})
    return FiniteCategory.build(list(parts), arrows, identities, comp, inverses, name)
