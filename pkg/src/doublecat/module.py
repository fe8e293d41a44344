"""Double P-modules.

A double P-module is three identity-on-objects functors ``mu: M -> P``,
``phi: H -> P``, ``psi: V -> P`` with M totally intransitive, together with
right actions of H and V on M. Two axioms tie the data together:

(i)  ``m d = d m^d`` and ``m y = y m^y`` evaluated in P;
(ii) whenever ``y f q = d z`` in P, then ``m^(yf) q = q m^(dz)`` in M.

Horizontal edges (H) are evaluated through ``phi`` and vertical edges (V)
through ``psi``, uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .category import (
    FiniteCategory,
    IdObjFunctor,
    PackedCategory,
    RightAction,
    compose_functors,
    identity_functor,
    inclusion,
    is_totally_intransitive,
    validate_category,
    validate_functor,
    validate_right_action,
)
from .errors import (
    NotComposableInP,
    NotNormal,
    SemicoreAxiomViolated,
    TypingMismatch,
    UnknownArrow,
)
from .groups import (
    action_from_function,
    conjugate,
    conjugation_action,
    discrete_category,
    subgroup_closure,
    trivial_action,
)
from .report import DiagnosticReport

SIDES = ("M", "H", "V")


@dataclass(frozen=True)
class PackedModule:
    M: PackedCategory
    H: PackedCategory
    V: PackedCategory
    P: PackedCategory
    mu: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    actH: np.ndarray
    actV: np.ndarray


@dataclass(frozen=True)
class DoubleModule:
    M: FiniteCategory
    H: FiniteCategory
    V: FiniteCategory
    P: FiniteCategory
    mu: IdObjFunctor
    phi: IdObjFunctor
    psi: IdObjFunctor
    actH: RightAction
    actV: RightAction
    name: str = ""

    def category(self, side: str) -> FiniteCategory:
        return {"M": self.M, "H": self.H, "V": self.V, "P": self.P}[side]

    def functor(self, side: str) -> IdObjFunctor:
        return {"M": self.mu, "H": self.phi, "V": self.psi}[side]

    @property
    def is_groupoid(self) -> bool:
        return all(c.is_groupoid for c in (self.M, self.H, self.V, self.P))

    def replace(self, **changes) -> "DoubleModule":
        fields = {k: getattr(self, k) for k in
                  ("M", "H", "V", "P", "mu", "phi", "psi", "actH", "actV", "name")}
        fields.update(changes)
        return DoubleModule(**fields)

    @cached_property
    def packed(self) -> PackedModule:
        # every category is indexed over P's object order
        order = self.P.object_index

        def repack(cat: FiniteCategory) -> PackedCategory:
            pk = cat.packed
            if cat.objects == self.P.objects:
                return pk
            remap = np.array([order.get(x, -1) for x in cat.objects], dtype=np.int64)
            ident = np.full(len(self.P.objects), -1, dtype=np.int64)
            for i, x in enumerate(cat.objects):
                if x in order:
                    ident[order[x]] = pk.ident[i]
            return PackedCategory(pk.comp, remap[pk.src], remap[pk.tgt], ident, pk.inv)

        return PackedModule(
            M=repack(self.M), H=repack(self.H), V=repack(self.V), P=self.P.packed,
            mu=self.mu.packed, phi=self.phi.packed, psi=self.psi.packed,
            actH=self.actH.packed, actV=self.actV.packed,
        )


def evaluate_in_P(dm: DoubleModule, word: Sequence[tuple[str, str]], at: str | None = None) -> str:
    """Map each ``(side, arrow)`` letter into P and compose left to right.

    ``side`` is one of ``"M"``, ``"H"``, ``"V"`` (or ``"P"`` for an arrow
    already in P). The empty word needs ``at``, the object whose identity it
    denotes. Raises :class:`NotComposableInP` at the first ill-typed pair.
    """
    P = dm.P
    images = []
    for side, a in word:
        if side == "P":
            if a not in P:
                raise UnknownArrow(a, "P")
            images.append(a)
            continue
        cat = dm.category(side)
        if a not in cat:
            raise UnknownArrow(a, side)
        images.append(dm.functor(side)(a))
    if not images:
        if at is None:
            raise TypingMismatch("the empty word needs an object to evaluate at")
        return P.identity(at)
    out = images[0]
    for i in range(1, len(images)):
        img = images[i]
        if P.tgt[out] != P.src[img]:
            raise NotComposableInP(word[i - 1][1], word[i][1],
                                   f"tgt {P.tgt[out]!r} != src {P.src[img]!r} in P")
        out = P.comp[out, img]
    if at is not None and P.src[out] != at:
        raise NotComposableInP(at, word[0][1], "word does not start at the given object")
    return out


def act_formal_word(dm: DoubleModule, m: str, word: Sequence[tuple[str, str]]) -> str:
    """``m^(w1 w2 ...)`` as the left-to-right fold ``(m^w1)^w2 ...``.

    Letters are ``("H", d)`` or ``("V", y)``. The two actions are never assumed
    to commute, so letter order matters.
    """
    if m not in dm.M:
        raise UnknownArrow(m, "M")
    out = m
    for side, a in word:
        if side not in ("H", "V"):
            raise TypingMismatch(f"formal words use H and V letters only, got {side!r}")
        act = dm.actH if side == "H" else dm.actV
        if a not in act.actor:
            raise UnknownArrow(a, side)
        here = dm.M.src[out]
        if act.actor.src[a] != here:
            raise TypingMismatch(f"letter {side}:{a} starts at {act.actor.src[a]!r}, "
                                 f"but the element sits at {here!r}")
        try:
            out = act.table[out, a]
        except KeyError:
            raise TypingMismatch(f"action of {side} undefined on ({out}, {a})") from None
        if out not in dm.M:
            raise TypingMismatch(f"action of {side} sends ({m}, {a}) outside M: {out!r}")
    return out


def _axiom_one(dm: DoubleModule, side: str, rep: DiagnosticReport) -> None:
    M, P = dm.M, dm.P
    act = dm.actH if side == "H" else dm.actV
    F = dm.functor(side)
    letter = "d" if side == "H" else "y"
    chk = rep.check(f"axiom_i_{side}")
    for m in M.arrows:
        x = M.src[m]
        for d in act.actor.arrows:
            if act.actor.src[d] != x:
                continue
            chk.instances += 1
            md = act.table.get((m, d))
            Fd = F.arrow_map.get(d)
            lhs = P.comp.get((dm.mu.arrow_map.get(m), Fd))
            if md is None or md not in M:
                chk.add({"m": m, letter: d, f"m^{letter}": md, "problem": "action undefined or outside M"})
                continue
            rhs = P.comp.get((Fd, dm.mu.arrow_map.get(md)))
            if lhs is None or lhs != rhs:
                chk.add({"m": m, letter: d, f"m^{letter}": md,
                         f"m{letter}": lhs, f"{letter}m^{letter}": rhs})


def axiom_two_report(dm: DoubleModule, rep: DiagnosticReport, limit: int = 20) -> None:
    pk = dm.packed
    instances, nviol, wit = kernels.backend().axiom_two(
        pk.P.comp, pk.M.src, pk.M.comp, pk.H.src, pk.H.tgt, pk.V.src, pk.V.tgt,
        pk.mu, pk.phi, pk.psi, pk.actH, pk.actV, limit)
    chk = rep.check("axiom_ii", instances=int(instances))
    if instances == 0:
        chk.note = "0 qualifying tuples: the axiom holds vacuously"
    Ma, Ha, Va = dm.M.arrows, dm.H.arrows, dm.V.arrows
    for row in wit[: min(int(nviol), limit)]:
        m, d, y, f, z, q = (int(i) for i in row)
        w = {"m": Ma[m], "d": Ha[d], "y": Va[y], "f": Ha[f], "z": Va[z], "q": Ma[q]}
        for key, word in (("m^(yf) q", [("V", w["y"]), ("H", w["f"])]),
                          ("q m^(dz)", [("H", w["d"]), ("V", w["z"])])):
            try:
                r = act_formal_word(dm, w["m"], word)
                w[key] = dm.M.comp[(r, w["q"]) if key.startswith("m") else (w["q"], r)]
            except Exception:  # undefined actions were already reported structurally
                w[key] = None
        chk.add(w)
    chk.violation_count = int(nviol)


def validate_double_module(dm: DoubleModule, axioms_only: bool = False) -> DiagnosticReport:
    """Full check: components, shared objects, and axioms (i) and (ii).

    Structural failures of the components are included in the report; the
    axiom checks still run on whatever entries are defined.
    """
    rep = DiagnosticReport(f"double module {dm.name}".strip())
    if not axioms_only:
        objs = rep.check("shared_objects", instances=1)
        base = set(dm.P.objects)
        for side in ("M", "H", "V"):
            if set(dm.category(side).objects) != base:
                objs.add({"category": side, "objects": sorted(dm.category(side).objects),
                          "P_objects": sorted(base)})
        ti = rep.check("M_totally_intransitive", instances=len(dm.M.arrows))
        for m in dm.M.arrows:
            if dm.M.src[m] != dm.M.tgt[m]:
                ti.add({"m": m, "src": dm.M.src[m], "tgt": dm.M.tgt[m]})
        for side in ("M", "H", "V", "P"):
            rep.extend(validate_category(dm.category(side)), side)
        for nm, F, dom, cod in (("mu", dm.mu, dm.M, dm.P), ("phi", dm.phi, dm.H, dm.P),
                                ("psi", dm.psi, dm.V, dm.P)):
            wiring = rep.check(f"{nm}.wiring", instances=1)
            if F.dom is not dom or F.cod is not cod:
                if F.dom.arrows != dom.arrows or F.cod.arrows != cod.arrows:
                    wiring.add({"functor": nm, "problem": "domain/codomain differ from the module's categories"})
            rep.extend(validate_functor(F), nm)
        for nm, act, actor in (("actH", dm.actH, dm.H), ("actV", dm.actV, dm.V)):
            wiring = rep.check(f"{nm}.wiring", instances=1)
            if act.acted.arrows != dm.M.arrows or act.actor.arrows != actor.arrows:
                wiring.add({"action": nm, "problem": "acts between the wrong categories"})
            rep.extend(validate_right_action(act), nm)
        if not rep.ok and not rep["shared_objects"].ok:
            return rep
    _axiom_one(dm, "H", rep)
    _axiom_one(dm, "V", rep)
    axiom_two_report(dm, rep)
    return rep


def check_crossed_module(mu: IdObjFunctor, act: RightAction) -> DiagnosticReport:
    """Equivariance ``mu(m^p) = p^-1 mu(m) p`` and Peiffer ``m^(mu n) = n^-1 m n``."""
    rep = DiagnosticReport(f"crossed module {mu.name}".strip())
    M, P = mu.dom, mu.cod
    rep.extend(validate_functor(mu), "mu")
    rep.extend(validate_right_action(act), "action")
    pg = rep.check("P_groupoid", instances=1)
    if not P.is_groupoid:
        pg.add({"P": P.name, "problem": "not a groupoid"})
        return rep
    if act.actor.arrows != P.arrows:
        rep.check("action_wiring", instances=1).add({"problem": "action is not by the codomain of mu"})
        return rep

    eq = rep.check("equivariance")
    for m in M.arrows:
        for p in P.arrows:
            if P.src[p] != M.src[m]:
                continue
            eq.instances += 1
            mp = act.table.get((m, p))
            lhs = mu.arrow_map.get(mp)
            rhs = conjugate(P, mu.arrow_map.get(m), p) if mu.arrow_map.get(m) in P else None
            if lhs is None or lhs != rhs:
                eq.add({"m": m, "p": p, "m^p": mp, "mu(m^p)": lhs, "p^-1 mu(m) p": rhs})

    peif = rep.check("peiffer")
    for x in M.objects:
        mon = M.hom_monoid(x)
        for m in mon:
            for n in mon:
                peif.instances += 1
                lhs = act.table.get((m, mu.arrow_map.get(n)))
                if not M.is_groupoid or n not in M.inverses:
                    peif.add({"m": m, "n": n, "problem": "n has no inverse in M"})
                    continue
                rhs = M.compose_path(M.inverses[n], m, n)
                if lhs != rhs:
                    peif.add({"m": m, "n": n, "m^(mu n)": lhs, "n^-1 m n": rhs})
    return rep


# builders


def from_commuting_shell(H: FiniteCategory, V: FiniteCategory, P: FiniteCategory,
                         phi: IdObjFunctor, psi: IdObjFunctor, name: str = "") -> DoubleModule:
    """M is identities only with trivial actions; squares are shells commuting in P."""
    M = discrete_category(P.objects, name="identities")
    mu = IdObjFunctor(M, P, {M.identities[x]: P.identities[x] for x in P.objects}, "mu")
    return DoubleModule(M, H, V, P, mu, phi, psi, trivial_action(M, H, "trivial"),
                        trivial_action(M, V, "trivial"), name or "commuting shells")


def from_crossed_module(mu: IdObjFunctor, actP: RightAction, H: FiniteCategory,
                        phi: IdObjFunctor, actH: RightAction, name: str = "") -> DoubleModule:
    """Double module with ``V = P`` and ``psi`` the identity."""
    P = mu.cod
    return DoubleModule(mu.dom, H, P, P, mu, phi, identity_functor(P, "psi"), actH, actP,
                        name or "crossed module")


def from_normal_subgroups(P: FiniteCategory, Hgens: Iterable[str], Vgens: Iterable[str],
                          Mgens: Iterable[str], name: str = "") -> DoubleModule:
    """Subgroups H, V, M of P with M normal in both; inclusions and conjugation."""
    H = subgroup_closure(P, Hgens, name="H")
    V = subgroup_closure(P, Vgens, name="V")
    M = subgroup_closure(P, Mgens, name="M")
    members = set(M.arrows)
    for label, G in (("H", H), ("V", V)):
        for h in G.arrows:
            for m in M.arrows:
                c = conjugate(P, m, h)
                if c not in members:
                    raise NotNormal(h, m, c, where=label)
    return DoubleModule(
        M, H, V, P,
        inclusion(M, P, "mu"), inclusion(H, P, "phi"), inclusion(V, P, "psi"),
        conjugation_action(M, H, P), conjugation_action(M, V, P),
        name or "normal subgroups",
    )


def check_semicore(M: FiniteCategory, H: FiniteCategory, P: FiniteCategory, eta: IdObjFunctor,
                   mu: IdObjFunctor, phi: IdObjFunctor, actP: RightAction) -> DiagnosticReport:
    rep = DiagnosticReport("semicore")
    rep.extend(validate_functor(eta), "eta")
    inj = rep.check("eta_inclusion", instances=len(M.arrows))
    if not is_totally_intransitive(M):
        inj.add({"problem": "M is not totally intransitive"})
    seen: dict[str, str] = {}
    for m in M.arrows:
        img = eta.arrow_map.get(m)
        if img in seen:
            inj.add({"m": m, "m'": seen[img], "eta": img, "problem": "not injective"})
        seen[img] = m

    fac = rep.check("mu_factors", instances=len(M.arrows))
    for m in M.arrows:
        via = phi.arrow_map.get(eta.arrow_map.get(m))
        if mu.arrow_map.get(m) != via:
            fac.add({"m": m, "mu(m)": mu.arrow_map.get(m), "phi(eta(m))": via})

    rep.extend(check_crossed_module(mu, actP), "crossed")

    compat = rep.check("compatibility")  # h^-1 m h = m^(phi h)
    normal = rep.check("M_normal_in_H")
    kernel = rep.check("kernel_acts_trivially")
    image = {v: k for k, v in eta.arrow_map.items()}
    for m in M.arrows:
        em = eta.arrow_map.get(m)
        for h in H.arrows:
            if H.src[h] != M.src[m]:
                continue
            compat.instances += 1
            normal.instances += 1
            ph = phi.arrow_map.get(h)
            acted = actP.table.get((m, ph))
            conj = conjugate(H, em, h)
            if eta.arrow_map.get(acted) != conj:
                compat.add({"m": m, "h": h, "h^-1 m h": conj, "m^(phi h)": acted})
            if conj not in image:
                normal.add({"m": m, "h": h, "h^-1 m h": conj})
            if ph is not None and P.is_identity(ph):
                kernel.instances += 1
                if acted != m:
                    kernel.add({"m": m, "h": h, "m^(phi h)": acted})
    return rep


def from_semicore(M: FiniteCategory, H: FiniteCategory, P: FiniteCategory, eta: IdObjFunctor,
                  mu: IdObjFunctor, phi: IdObjFunctor, actP: RightAction,
                  name: str = "") -> DoubleModule:
    """Double module with ``V = P``, ``actH(m, h) = m^(phi h)`` and ``actV = actP``.

    Raises :class:`SemicoreAxiomViolated` if the semicore conditions fail.
    """
    rep = check_semicore(M, H, P, eta, mu, phi, actP)
    if not rep.ok:
        chk = rep.failed()[0]
        raise SemicoreAxiomViolated(f"semicore check {chk.name} failed", chk.violations[0], rep)
    actH = action_from_function(M, H, lambda m, h: actP.table[m, phi(h)], "via phi")
    return DoubleModule(M, H, P, P, mu, phi, identity_functor(P, "psi"), actH, actP,
                        name or "semicore")


def semicore_from_subgroup(P: FiniteCategory, H: FiniteCategory, M: FiniteCategory,
                           phi: IdObjFunctor | None = None,
                           actP: RightAction | None = None) -> DoubleModule:
    """Convenience: ``M <= H`` inside ``P`` with inclusions and conjugation by default."""
    phi = phi or inclusion(H, P, "phi")
    eta = inclusion(M, H, "eta")
    mu = compose_functors(eta, phi, "mu")
    actP = actP or conjugation_action(M, P, P)
    return from_semicore(M, H, P, eta, mu, phi, actP)
