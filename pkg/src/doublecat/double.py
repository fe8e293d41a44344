"""The double category of squares built from a double P-module.

A square is a quintuple ``(m: u a/c v)``: top ``a`` and bottom ``c`` in H,
left ``u`` and right ``v`` in V, and ``m`` in M sitting at the bottom-right
corner, subject to ``a v = u c m`` evaluated in P. The compositions are

    (m: u a/c v) o2 (n: v b/d w) = (m^d n : u ab/cd w)      horizontal
    (m: u a/c v) o1 (p: x c/e y) = (p m^y : ux a/e vy)      vertical
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import kernels
from .category import FiniteCategory, IdObjFunctor, RightAction
from .errors import (
    InterchangeFailure,
    NotAGroupoid,
    NotComposable,
    SizeLimitExceeded,
    UnknownArrow,
    UnknownObject,
)
from .kernels._numpy import hcomp as _hcomp_rows, take, take1, vcomp as _vcomp_rows
from .module import DoubleModule, check_crossed_module, evaluate_in_P
from .report import WITNESS_LIMIT, DiagnosticReport
from .sampling import Lcg

MAX_CANDIDATES = 10_000_000
DEFAULT_MAX_GRIDS = 1_000_000
DEFAULT_SAMPLE = 100_000
DEFAULT_MAX_TRIPLES = 500_000_000


def default_max_grids() -> int:
    return int(os.environ.get("DCAT_MAX_GRIDS", DEFAULT_MAX_GRIDS))


class Square(NamedTuple):
    m: str
    a: str  # top, in H
    c: str  # bottom, in H
    u: str  # left, in V
    v: str  # right, in V

    def __str__(self) -> str:
        return f"({self.m}: {self.u} {self.a}/{self.c} {self.v})"


@dataclass(frozen=True)
class SquareGrid:
    rows: tuple[tuple[Square, ...], ...]

    @classmethod
    def of(cls, rows: Iterable[Iterable[Square]]) -> "SquareGrid":
        return cls(tuple(tuple(Square(*q) for q in row) for row in rows))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def adjacency_errors(self) -> list[NotComposable]:
        errs = []
        r, c = self.shape
        for i, row in enumerate(self.rows):
            if len(row) != c:
                errs.append(NotComposable(i, c, "ragged grid row", position=(i, 0)))
                continue
            for j in range(c - 1):
                if row[j].v != row[j + 1].u:
                    errs.append(NotComposable(str(row[j]), str(row[j + 1]),
                                              "right edge != left edge", position=(i, j)))
        for i in range(r - 1):
            for j in range(min(c, len(self.rows[i]), len(self.rows[i + 1]))):
                if self.rows[i][j].c != self.rows[i + 1][j].a:
                    errs.append(NotComposable(str(self.rows[i][j]), str(self.rows[i + 1][j]),
                                              "bottom edge != top edge", position=(i, j)))
        return errs


# single squares


def _known(dm: DoubleModule, q: Square) -> None:
    for side, a in (("M", q.m), ("H", q.a), ("H", q.c), ("V", q.u), ("V", q.v)):
        if a not in dm.category(side):
            raise UnknownArrow(a, side)


def is_square(dm: DoubleModule, q: Square) -> bool:
    """Typing plus the boundary law ``a v = u c m`` in P."""
    _known(dm, q)
    H, V, M = dm.H, dm.V, dm.M
    if not (H.src[q.a] == V.src[q.u] and H.tgt[q.a] == V.src[q.v] and V.tgt[q.u] == H.src[q.c]
            and H.tgt[q.c] == V.tgt[q.v] == M.src[q.m] == M.tgt[q.m]):
        return False
    try:
        top = evaluate_in_P(dm, [("H", q.a), ("V", q.v)])
        bottom = evaluate_in_P(dm, [("V", q.u), ("H", q.c), ("M", q.m)])
    except NotComposable:
        return False
    return top == bottom


def compose_h(dm: DoubleModule, q1: Square, q2: Square) -> Square:
    """``(m: u a/c v) o2 (n: v b/d w) = (m^d n : u ab/cd w)``."""
    if q1.v != q2.u:
        raise NotComposable(str(q1), str(q2), f"right edge {q1.v!r} != left edge {q2.u!r}")
    m = dm.M.compose(dm.actH.act(q1.m, q2.c), q2.m)
    return Square(m, dm.H.compose(q1.a, q2.a), dm.H.compose(q1.c, q2.c), q1.u, q2.v)


def compose_v(dm: DoubleModule, q1: Square, q2: Square) -> Square:
    """``(m: u a/c v) o1 (p: x c/e y) = (p m^y : ux a/e vy)``."""
    if q1.c != q2.a:
        raise NotComposable(str(q1), str(q2), f"bottom edge {q1.c!r} != top edge {q2.a!r}")
    m = dm.M.compose(q2.m, dm.actV.act(q1.m, q2.v))
    return Square(m, q1.a, q2.c, dm.V.compose(q1.u, q2.u), dm.V.compose(q1.v, q2.v))


def identity_h(dm: DoubleModule, u: str) -> Square:
    """Unit for o2 along the vertical edge ``u``: ``(1: u id/id u)``."""
    if u not in dm.V:
        raise UnknownArrow(u, "V")
    s, t = dm.V.src[u], dm.V.tgt[u]
    return Square(dm.M.identity(t), dm.H.identity(s), dm.H.identity(t), u, u)


def identity_v(dm: DoubleModule, a: str) -> Square:
    """Unit for o1 along the horizontal edge ``a``: ``(1: id a/a id)``."""
    if a not in dm.H:
        raise UnknownArrow(a, "H")
    s, t = dm.H.src[a], dm.H.tgt[a]
    return Square(dm.M.identity(t), a, a, dm.V.identity(s), dm.V.identity(t))


def _need_groupoid(dm: DoubleModule) -> None:
    if not dm.is_groupoid:
        bad = [s for s in "MHVP" if not dm.category(s).is_groupoid]
        raise NotAGroupoid(f"inverse squares need M, H, V, P groupoids; not groupoids: {', '.join(bad)}")


def inverse_h(dm: DoubleModule, q: Square) -> Square:
    """``((m^(c^-1))^-1 : v a^-1/c^-1 u)``, the o2-inverse."""
    _need_groupoid(dm)
    ci = dm.H.inverse_of(q.c)
    return Square(dm.M.inverse_of(dm.actH.act(q.m, ci)), dm.H.inverse_of(q.a), ci, q.v, q.u)


def inverse_v(dm: DoubleModule, q: Square) -> Square:
    """``((m^(v^-1))^-1 : u^-1 c/a v^-1)``, the o1-inverse."""
    _need_groupoid(dm)
    vi = dm.V.inverse_of(q.v)
    return Square(dm.M.inverse_of(dm.actV.act(q.m, vi)), q.c, q.a, dm.V.inverse_of(q.u), vi)


def is_thin(dm: DoubleModule, q: Square) -> bool:
    if q.m not in dm.M:
        raise UnknownArrow(q.m, "M")
    return dm.M.is_identity(q.m)


# the square set and its indexes


class SquareSpace:
    """All squares of a module as an int array, plus neighbour indexes.

    Rows of ``Q`` are ``(m, a, c, u, v)`` arrow indices, sorted
    lexicographically.
    """

    def __init__(self, dm: DoubleModule):
        self.dm = dm
        pk = self.pk = dm.packed
        nH, nV = len(dm.H.arrows), len(dm.V.arrows)
        self.candidates = candidate_count(dm)
        if self.candidates > MAX_CANDIDATES:
            raise SizeLimitExceeded(f"{self.candidates} candidate squares exceeds {MAX_CANDIDATES}")
        Q = kernels.backend().enumerate_squares(
            pk.P.comp, pk.M.src, pk.H.src, pk.H.tgt, pk.V.src, pk.V.tgt, pk.mu, pk.phi, pk.psi)
        if len(Q):
            Q = Q[np.lexsort(tuple(Q[:, c] for c in range(4, -1, -1)))]
        self.Q = np.ascontiguousarray(Q, dtype=np.int64)
        self.nH, self.nV = nH, nV
        # right neighbours: squares by left edge u; below neighbours: by top edge a
        self.r_order, self.r_start = _csr(self.Q[:, 3], nV)
        self.b_order, self.b_start = _csr(self.Q[:, 1], nH)
        key = self.Q[:, 3] * nH + self.Q[:, 1]
        self.ord4 = np.argsort(key, kind="stable")
        self.key4 = np.ascontiguousarray(key[self.ord4])
        self._index = None

    def __len__(self) -> int:
        return len(self.Q)

    def square(self, row) -> Square:
        dm = self.dm
        m, a, c, u, v = (int(i) for i in row)
        return Square(dm.M.arrows[m], dm.H.arrows[a], dm.H.arrows[c], dm.V.arrows[u], dm.V.arrows[v])

    def describe(self, row) -> str:
        """Render a row that may hold -1 entries (undefined)."""
        dm = self.dm
        names = []
        for cat, i in zip((dm.M, dm.H, dm.H, dm.V, dm.V), row):
            names.append(cat.arrows[int(i)] if int(i) >= 0 else "?")
        return str(Square(*names))

    def squares(self) -> list[Square]:
        return [self.square(r) for r in self.Q]

    def grid_count(self) -> int:
        """Exact number of composable 2x2 grids, by counting edge matches."""
        Q = self.Q
        if not len(Q):
            return 0
        nH, nV = self.nH, self.nV
        by_uc = np.zeros((nV, nH), np.int64)   # right neighbours of q by their bottom edge
        np.add.at(by_uc, (Q[:, 3], Q[:, 2]), 1)
        by_av = np.zeros((nH, nV), np.int64)   # below neighbours of q by their right edge
        np.add.at(by_av, (Q[:, 1], Q[:, 4]), 1)
        by_ua = np.zeros((nV, nH), np.int64)   # bottom-right square by (left, top)
        np.add.at(by_ua, (Q[:, 3], Q[:, 1]), 1)
        W = by_av @ by_ua
        return int(np.einsum("ij,ij->i", W[Q[:, 2]], by_uc[Q[:, 4]]).sum())

    def triple_count(self, horizontal: bool) -> int:
        Q = self.Q
        if horizontal:
            n_in = np.bincount(Q[:, 4], minlength=self.nV)[Q[:, 3]]   # squares ending at my left edge
            n_out = np.bincount(Q[:, 3], minlength=self.nV)[Q[:, 4]]
        else:
            n_in = np.bincount(Q[:, 2], minlength=self.nH)[Q[:, 1]]
            n_out = np.bincount(Q[:, 1], minlength=self.nH)[Q[:, 2]]
        return int((n_in * n_out).sum())

    def right_of(self, i: int) -> np.ndarray:
        k = self.Q[i, 4]
        return self.r_order[self.r_start[k]: self.r_start[k + 1]]

    def below(self, i: int) -> np.ndarray:
        k = self.Q[i, 2]
        return self.b_order[self.b_start[k]: self.b_start[k + 1]]


def _csr(keys: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(keys, kind="stable").astype(np.int64)
    start = np.zeros(n + 1, np.int64)
    np.cumsum(np.bincount(keys, minlength=n), out=start[1:])
    return order, start


def candidate_count(dm: DoubleModule) -> int:
    """Number of (a, c, u, v, m) tuples the enumeration has to test."""
    objs = dm.P.object_index
    n = len(objs)

    def homs(cat):
        C = np.zeros((n, n), np.int64)
        for f in cat.arrows:
            C[objs[cat.src[f]], objs[cat.tgt[f]]] += 1
        return C

    Hc, Vc = homs(dm.H), homs(dm.V)
    Mc = np.diag(homs(dm.M)).copy()
    return int(((Hc @ Vc) * (Vc @ Hc) * Mc[None, :]).sum())


def square_space(dm: DoubleModule) -> SquareSpace:
    cache = dm.__dict__
    key = ("_square_space", kernels.backend().NAME)
    if key not in cache:
        cache[key] = SquareSpace(dm)
    return cache[key]


def enumerate_squares(dm: DoubleModule) -> list[Square]:
    return square_space(dm).squares()


# grids


def paste_grid(dm: DoubleModule, grid: SquareGrid, verify: bool = False) -> Square:
    """Composite of a grid: each row with o2, then the rows with o1.

    With ``verify`` the columns-first composite is computed too and an
    :class:`InterchangeFailure` raised if the two differ.
    """
    errs = grid.adjacency_errors()
    if errs:
        raise errs[0]
    r, c = grid.shape
    if r == 0 or c == 0:
        raise NotComposable("grid", "grid", "empty grid")

    def fold(items, op, where):
        out = items[0]
        for k, q in enumerate(items[1:], 1):
            try:
                out = op(dm, out, q)
            except NotComposable as e:
                raise NotComposable(e.first, e.second, str(e), position=where(k)) from None
        return out

    rows = [fold(row, compose_h, lambda k, i=i: (i, k)) for i, row in enumerate(grid.rows)]
    result = fold(rows, compose_v, lambda k: (k, 0))
    if verify:
        cols = [fold([grid.rows[i][j] for i in range(r)], compose_v, lambda k, j=j: (k, j))
                for j in range(c)]
        other = fold(cols, compose_h, lambda k: (0, k))
        if other != result:
            raise InterchangeFailure(result, other)
    return result


def pasting_orders(dm: DoubleModule, grid: SquareGrid) -> tuple[Square, Square]:
    """(rows-first, columns-first) composites, without raising on disagreement."""
    try:
        paste_grid(dm, grid, verify=True)
    except InterchangeFailure as e:
        return e.rows_first, e.cols_first
    q = paste_grid(dm, grid)
    return q, q


def select_grids(space: SquareSpace, max_grids: int | None = None, sample: int = DEFAULT_SAMPLE,
                 seed: int = 0) -> tuple[np.ndarray, dict]:
    """Every composable 2x2 grid if there are at most ``max_grids``, else an LCG sample."""
    if max_grids is None:
        max_grids = default_max_grids()
    population = space.grid_count()
    if population <= max_grids:
        grids = kernels.backend().enumerate_grids(
            space.Q, space.r_order, space.r_start, space.b_order, space.b_start,
            space.key4, space.ord4, space.nH, max_grids)
        assert grids is not None and len(grids) == population
        return grids, {"mode": "exhaustive", "population": population}
    return sample_grids(space, sample, seed), {
        "mode": "sampled", "population": population, "sample_size": sample, "seed": seed,
        "scheme": "lcg64: q1 uniform, then q2, q3, q4 uniform among composable candidates"}


def sample_grids(space: SquareSpace, sample: int, seed: int = 0) -> np.ndarray:
    rng = Lcg(seed)
    Q = space.Q.tolist()
    N = len(Q)
    r_order, r_start = space.r_order.tolist(), space.r_start.tolist()
    b_order, b_start = space.b_order.tolist(), space.b_start.tolist()
    key4, ord4 = space.key4, space.ord4.tolist()
    nH = space.nH
    out = np.empty((sample, 4), np.int64)
    got = 0
    attempts = 0
    while got < sample and N:
        attempts += 1
        if attempts > 50 * sample + 1000:
            raise SizeLimitExceeded("grid sampling keeps failing to find composable grids")
        i1 = rng.below(N)
        _, _, c1, _, v1 = Q[i1]
        lo, hi = r_start[v1], r_start[v1 + 1]
        if lo == hi:
            continue
        i2 = r_order[lo + rng.below(hi - lo)]
        lo, hi = b_start[c1], b_start[c1 + 1]
        if lo == hi:
            continue
        i3 = b_order[lo + rng.below(hi - lo)]
        key = Q[i3][4] * nH + Q[i2][2]
        lo = int(np.searchsorted(key4, key, "left"))
        hi = int(np.searchsorted(key4, key, "right"))
        if lo == hi:
            continue
        i4 = ord4[lo + rng.below(hi - lo)]
        out[got] = (i1, i2, i3, i4)
        got += 1
    return out[:got]


def _grid_witness(space: SquareSpace, g) -> dict:
    dm = space.dm
    q1, q2, q3, q4 = (space.square(space.Q[i]) for i in g)
    grid = SquareGrid(((q1, q2), (q3, q4)))
    try:
        rows_first, cols_first = pasting_orders(dm, grid)
        rf, cf = str(rows_first), str(cols_first)
    except Exception as e:  # composites may leave the defined tables
        rf = cf = f"undefined ({e})"
    w = {"grid": f"[[{q1}, {q2}], [{q3}, {q4}]]", "rows_first": rf, "cols_first": cf,
         "m": q1.m, "y": q4.u, "f": q4.c, "d": q4.a, "z": q4.v, "q": q4.m}
    M = dm.M
    try:
        myf = dm.actH.act(dm.actV.act(q1.m, q4.u), q4.c)
        mdz = dm.actV.act(dm.actH.act(q1.m, q4.a), q4.v)
        w["m^(yf) q"] = M.compose(myf, q4.m)
        w["q m^(dz)"] = M.compose(q4.m, mdz)
    except Exception:
        w["m^(yf) q"] = w["q m^(dz)"] = None
    return w


def _grid_checks(dm: DoubleModule, rep: DiagnosticReport, max_grids, sample, seed, equivalence: bool):
    space = square_space(dm)
    grids, sampling = select_grids(space, max_grids, sample, seed)
    pk = dm.packed
    agree, eq2 = kernels.backend().grid_eval(space.Q, grids, pk.M.comp, pk.H.comp, pk.V.comp,
                                             pk.actH, pk.actV)
    inter = rep.check("interchange", instances=len(grids), sampling=sampling)
    _add_grid_witnesses(space, inter, grids, np.nonzero(~agree)[0])
    if equivalence:
        iff = rep.check("interchange_iff_square_equation", instances=len(grids), sampling=sampling,
                        note="per grid: both pasting orders agree iff m^(yf) q = q m^(dz)")
        _add_grid_witnesses(space, iff, grids, np.nonzero(agree != eq2)[0],
                            lambda g: {"orders_agree": bool(agree[g]), "equation_holds": bool(eq2[g])})
        eq = rep.check("square_equation", instances=len(grids), sampling=sampling)
        _add_grid_witnesses(space, eq, grids, np.nonzero(~eq2)[0])
    return grids, agree, eq2


def _add_grid_witnesses(space, chk, grids, failing, extra=None):
    for g in failing[:WITNESS_LIMIT]:
        w = _grid_witness(space, grids[g])
        if extra:
            w.update(extra(g))
        chk.add(w)
    chk.violation_count = len(failing)


def check_interchange_equiv(dm: DoubleModule, max_grids: int | None = None,
                            sample: int = DEFAULT_SAMPLE, seed: int = 0) -> DiagnosticReport:
    """Grid by grid: the two pasting orders agree iff ``m^(yf) q = q m^(dz)``.

    Does not assume axiom (ii); a module that breaks it should show
    interchange violations here, each paired with its failing equation.
    """
    rep = DiagnosticReport(f"interchange equivalence {dm.name}".strip())
    _grid_checks(dm, rep, max_grids, sample, seed, equivalence=True)
    return rep


# whole-structure validation


def _is_square_rows(pk, R: np.ndarray) -> np.ndarray:
    m, a, c, u, v = R.T
    ok = (R >= 0).all(axis=1)
    Hs, Ht, Vs, Vt = (take1(x, i) for x, i in ((pk.H.src, a), (pk.H.tgt, a), (pk.V.src, u), (pk.V.tgt, u)))
    ok &= (Hs == Vs) & (Ht == take1(pk.V.src, v)) & (Vt == take1(pk.H.src, c))
    ok &= (take1(pk.H.tgt, c) == take1(pk.V.tgt, v)) & (take1(pk.V.tgt, v) == take1(pk.M.src, m))
    top = take(pk.P.comp, take1(pk.phi, a), take1(pk.psi, v))
    bottom = take(pk.P.comp, take(pk.P.comp, take1(pk.psi, u), take1(pk.phi, c)), take1(pk.mu, m))
    return ok & (top >= 0) & (top == bottom)


def _unit_rows(pk, Q, horizontal: bool, side: str) -> np.ndarray:
    """Identity squares on the left/right (o2) or top/bottom (o1) edge of each row."""
    if horizontal:
        e = Q[:, 3] if side == "start" else Q[:, 4]
        s, t = pk.V.src[e], pk.V.tgt[e]
        return np.stack([pk.M.ident[t], pk.H.ident[s], pk.H.ident[t], e, e], axis=1)
    e = Q[:, 1] if side == "start" else Q[:, 2]
    s, t = pk.H.src[e], pk.H.tgt[e]
    return np.stack([pk.M.ident[t], e, e, pk.V.ident[s], pk.V.ident[t]], axis=1)


def _pairs(space: SquareSpace, horizontal: bool) -> tuple[np.ndarray, np.ndarray]:
    Q = space.Q
    if horizontal:
        key, order, start = Q[:, 4], space.r_order, space.r_start
    else:
        key, order, start = Q[:, 2], space.b_order, space.b_start
    cnt = start[key + 1] - start[key]
    i = np.repeat(np.arange(len(Q)), cnt)
    offs = np.arange(cnt.sum()) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    j = order[np.repeat(start[key], cnt) + offs]
    return i, j


def _sample_triples(space: SquareSpace, horizontal: bool, sample: int, seed: int) -> np.ndarray:
    rng = Lcg(seed)
    Q = space.Q
    into = {}
    col_in, col_out = (3, 4) if horizontal else (1, 2)
    for idx in range(len(Q)):
        into.setdefault(int(Q[idx, col_out]), []).append(idx)
    out = []
    attempts = 0
    while len(out) < sample and attempts < 50 * sample:
        attempts += 1
        j = rng.below(len(Q))
        left = into.get(int(Q[j, col_in]), [])
        right = space.right_of(j) if horizontal else space.below(j)
        if not left or not len(right):
            continue
        out.append((left[rng.below(len(left))], j, int(right[rng.below(len(right))])))
    return np.array(out, np.int64).reshape(-1, 3)


def _assoc_check(dm, space, rep, horizontal, max_triples, sample, seed):
    pk = dm.packed
    name = "associativity_h" if horizontal else "associativity_v"
    total = space.triple_count(horizontal)
    if total <= max_triples:
        order, start = (space.r_order, space.r_start) if horizontal else (space.b_order, space.b_start)
        inst, nv, wit = kernels.backend().assoc_triples(
            space.Q, horizontal, pk.M.comp, pk.H.comp, pk.V.comp, pk.actH, pk.actV, order, start, WITNESS_LIMIT)
        chk = rep.check(name, instances=int(inst), sampling={"mode": "exhaustive", "population": total})
        rows = wit[: min(int(nv), WITNESS_LIMIT)]
    else:
        T = _sample_triples(space, horizontal, sample, seed)
        comp = (lambda A, B: _hcomp_rows(pk.M.comp, pk.H.comp, pk.actH, A, B)) if horizontal else \
            (lambda A, B: _vcomp_rows(pk.M.comp, pk.V.comp, pk.actV, A, B))
        A, B, C = space.Q[T[:, 0]], space.Q[T[:, 1]], space.Q[T[:, 2]]
        lhs, rhs = comp(comp(A, B), C), comp(A, comp(B, C))
        bad = (lhs < 0).any(axis=1) | (lhs != rhs).any(axis=1)
        chk = rep.check(name, instances=len(T), sampling={
            "mode": "sampled", "population": total, "sample_size": len(T), "seed": seed})
        nv = int(bad.sum())
        rows = T[bad][:WITNESS_LIMIT]
    op = compose_h if horizontal else compose_v
    for i, j, k in rows:
        q1, q2, q3 = (space.square(space.Q[x]) for x in (i, j, k))
        w = {"q1": str(q1), "q2": str(q2), "q3": str(q3)}
        try:
            w["(q1 q2) q3"] = str(op(dm, op(dm, q1, q2), q3))
            w["q1 (q2 q3)"] = str(op(dm, q1, op(dm, q2, q3)))
        except Exception as e:
            w["error"] = str(e)
        chk.add(w)
    chk.violation_count = int(nv)


def validate_double_category(dm: DoubleModule, max_grids: int | None = None, sample: int = DEFAULT_SAMPLE,
                             seed: int = 0, max_triples: int = DEFAULT_MAX_TRIPLES) -> DiagnosticReport:
    """Closure, units, associativity and interchange of the squares; inverses for groupoids.

    Unary and pairwise laws are checked on every square; triples and grids
    exhaustively up to ``max_triples`` / ``max_grids``, beyond that on an LCG
    sample of size ``sample`` (recorded in the report).
    """
    rep = DiagnosticReport(f"double category {dm.name}".strip())
    space = square_space(dm)
    pk = dm.packed
    Q = space.Q
    rep.check("squares", instances=len(Q), note=f"{len(Q)} squares from {space.candidates} candidates")

    for horizontal, tag in ((True, "h"), (False, "v")):
        comp = (lambda A, B: _hcomp_rows(pk.M.comp, pk.H.comp, pk.actH, A, B)) if horizontal else \
            (lambda A, B: _vcomp_rows(pk.M.comp, pk.V.comp, pk.actV, A, B))
        i, j = _pairs(space, horizontal)
        R = comp(Q[i], Q[j])
        good = _is_square_rows(pk, R)
        clo = rep.check(f"closure_{tag}", instances=len(i))
        for k in np.nonzero(~good)[0][:WITNESS_LIMIT]:
            clo.add({"q1": str(space.square(Q[i[k]])), "q2": str(space.square(Q[j[k]])),
                     "composite": space.describe(R[k])})
        clo.violation_count = int((~good).sum())

        thin_ok = pk.M.ident[pk.M.src[Q[:, 0]]] == Q[:, 0]
        both = thin_ok[i] & thin_ok[j]
        thin = rep.check(f"thin_closure_{tag}", instances=int(both.sum()))
        rm = R[both, 0]
        broke = (rm < 0) | (pk.M.ident[np.where(rm >= 0, pk.M.src[np.maximum(rm, 0)], 0)] != rm)
        for k in np.nonzero(both)[0][broke][:WITNESS_LIMIT]:
            thin.add({"q1": str(space.square(Q[i[k]])), "q2": str(space.square(Q[j[k]])),
                      "composite": space.describe(R[k])})
        thin.violation_count = int(broke.sum())

        unit = rep.check(f"unit_{tag}", instances=2 * len(Q))
        lu = _unit_rows(pk, Q, horizontal, "start")
        ru = _unit_rows(pk, Q, horizontal, "end")
        left = comp(lu, Q)
        right = comp(Q, ru)
        bad = (left != Q).any(axis=1) | (right != Q).any(axis=1)
        for k in np.nonzero(bad)[0][:WITNESS_LIMIT]:
            unit.add({"q": str(space.square(Q[k])), "1 q": space.describe(left[k]),
                      "q 1": space.describe(right[k])})
        unit.violation_count = int(bad.sum())
        idsq = np.concatenate([lu, ru])
        thin_ids = rep.check(f"identity_squares_thin_{tag}", instances=len(idsq))
        for k in np.nonzero((pk.M.ident[pk.M.src[np.maximum(idsq[:, 0], 0)]] != idsq[:, 0])
                            | ~_is_square_rows(pk, idsq))[0][:WITNESS_LIMIT]:
            thin_ids.add({"identity": space.describe(idsq[k])})

    for horizontal in (True, False):
        _assoc_check(dm, space, rep, horizontal, max_triples, sample, seed)

    _grid_checks(dm, rep, max_grids, sample, seed, equivalence=False)

    if dm.is_groupoid:
        _inverse_checks(dm, space, rep)
    return rep


def _inverse_checks(dm, space, rep):
    pk = dm.packed
    Q = space.Q
    m, a, c, u, v = Q.T
    inv_h = np.stack([take1(pk.M.inv, take(pk.actH, m, pk.H.inv[c])), pk.H.inv[a], pk.H.inv[c], v, u], axis=1)
    inv_v = np.stack([take1(pk.M.inv, take(pk.actV, m, pk.V.inv[v])), c, a, pk.V.inv[u], pk.V.inv[v]], axis=1)
    hc = lambda A, B: _hcomp_rows(pk.M.comp, pk.H.comp, pk.actH, A, B)  # noqa: E731
    vc = lambda A, B: _vcomp_rows(pk.M.comp, pk.V.comp, pk.actV, A, B)  # noqa: E731
    for tag, inv, comp, horizontal in (("h", inv_h, hc, True), ("v", inv_v, vc, False)):
        chk = rep.check(f"inverse_{tag}", instances=len(Q))
        start_unit = _unit_rows(pk, Q, horizontal, "start")
        end_unit = _unit_rows(pk, Q, horizontal, "end")
        ok = _is_square_rows(pk, inv)
        ok &= (comp(Q, inv) == start_unit).all(axis=1)
        ok &= (comp(inv, Q) == end_unit).all(axis=1)
        for k in np.nonzero(~ok)[0][:WITNESS_LIMIT]:
            chk.add({"q": str(space.square(Q[k])), "inverse": space.describe(inv[k])})
        chk.violation_count = int((~ok).sum())


# crossed modules recovered from a double groupoid


@dataclass(frozen=True)
class ExtractedCrossedModule:
    group: FiniteCategory
    base: FiniteCategory
    boundary: IdObjFunctor
    action: RightAction
    report: DiagnosticReport
    elements: dict  # element id -> square it stands for


def vertex_group(cat: FiniteCategory, x: str, name: str = "") -> FiniteCategory:
    arrows = cat.hom_monoid(x)
    return FiniteCategory.build(
        [x], [(f, x, x) for f in arrows], {x: cat.identities[x]},
        {(f, g): cat.comp[f, g] for f in arrows for g in arrows},
        None if cat.inverses is None else {f: cat.inverses[f] for f in arrows},
        name or f"{cat.name}({x})",
    )


def _extract(dm: DoubleModule, x: str, horizontal: bool) -> ExtractedCrossedModule:
    _need_groupoid(dm)
    if x not in dm.P.object_index:
        raise UnknownObject(x, "P")
    edge = dm.H if horizontal else dm.V
    F = dm.phi if horizontal else dm.psi
    act = dm.actH if horizontal else dm.actV
    base = vertex_group(edge, x, name="H(x)" if horizontal else "V(x)")
    one_m, one_h, one_v = dm.M.identity(x), dm.H.identity(x), dm.V.identity(x)

    # squares (m: 1 a/1 1) resp. (m: 1 1/1 v), i.e. pairs with mu m = phi a resp. psi v
    pairs = [(m, e) for m in dm.M.hom_monoid(x) for e in base.arrows
             if dm.mu(m) == F(e)]
    label = {p: f"<{p[0]},{p[1]}>" for p in pairs}

    def as_square(p):
        m, e = p
        return Square(m, e, one_h, one_v, one_v) if horizontal else Square(m, one_h, one_h, one_v, e)

    def from_square(q):
        return (q.m, q.a) if horizontal else (q.m, q.v)

    op = compose_h if horizontal else compose_v
    comp = {}
    for p in pairs:
        for r in pairs:
            comp[label[p], label[r]] = label[from_square(op(dm, as_square(p), as_square(r)))]
    unit = label[(one_m, one_h if horizontal else one_v)]
    inverses = {}
    for p in pairs:
        for r in pairs:
            if comp[label[p], label[r]] == unit:
                inverses[label[p]] = label[r]
    group = FiniteCategory.build([x], [(label[p], x, x) for p in pairs], {x: unit}, comp, inverses,
                                 name="horizontal" if horizontal else "vertical")
    boundary = IdObjFunctor(group, base, {label[p]: p[1] for p in pairs}, "boundary")
    table = {}
    for p in pairs:
        m, e = p
        for h in base.arrows:
            conj = base.compose_path(base.inverse_of(h), e, h)
            table[label[p], h] = label.get((act.act(m, h), conj), f"<{act.act(m, h)},{conj}>")
    action = RightAction(group, base, table, "conjugation on the edge")
    report = check_crossed_module(boundary, action)
    report.title = f"extracted {'horizontal' if horizontal else 'vertical'} crossed module at {x}"
    return ExtractedCrossedModule(group, base, boundary, action, report,
                                  {label[p]: as_square(p) for p in pairs})


def extract_crossed_module_h(dm: DoubleModule, x: str) -> ExtractedCrossedModule:
    """Pairs (m, a) with mu m = phi a, i.e. squares (m: 1 a/1 1), multiplied by o2.

    Boundary ``(m, a) -> a`` into ``H(x)``; ``h`` acts by ``(m^h, h^-1 a h)``.
    """
    return _extract(dm, x, horizontal=True)


def extract_crossed_module_v(dm: DoubleModule, x: str) -> ExtractedCrossedModule:
    """Pairs (m, v) with mu m = psi v, i.e. squares (m: 1 1/1 v), multiplied by o1.

    The product is ``(m, v)(p, y) = (p m^y, v y)``; boundary into ``V(x)``.
    """
    return _extract(dm, x, horizontal=False)
