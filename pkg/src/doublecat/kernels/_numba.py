"""Loop kernels compiled with numba.

Squares are int64 rows ``(m, a, c, u, v)`` of arrow indices. Every table
lookup goes through ``_at`` so that -1 ("undefined") propagates instead of
wrapping around as a negative index.
"""

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True, inline="always")
def _at(T, i, j):
    if i < 0 or j < 0:
        return -1
    return T[i, j]


@njit(cache=True, inline="always")
def _get(A, i):
    if i < 0:
        return -1
    return A[i]


@njit(cache=True, inline="always")
def _hcomp(Mcomp, Hcomp, actH, m1, a1, c1, u1, v1, m2, a2, c2, u2, v2):
    return (_at(Mcomp, _at(actH, m1, c2), m2), _at(Hcomp, a1, a2), _at(Hcomp, c1, c2), u1, v2)


@njit(cache=True, inline="always")
def _vcomp(Mcomp, Vcomp, actV, m1, a1, c1, u1, v1, m2, a2, c2, u2, v2):
    return (_at(Mcomp, m2, _at(actV, m1, v2)), a1, c2, _at(Vcomp, u1, u2), _at(Vcomp, v1, v2))


@njit(cache=True)
def axiom_two(Pcomp, Mobj, Mcomp, Hsrc, Htgt, Vsrc, Vtgt, mu, phi, psi, actH, actV, limit):
    nM = Mobj.shape[0]
    nH = Hsrc.shape[0]
    nV = Vsrc.shape[0]
    wit = np.full((max(limit, 1), 6), -1, np.int64)
    inst = 0
    nv = 0
    for m in range(nM):
        x = Mobj[m]
        for d in range(nH):
            if Hsrc[d] != x:
                continue
            md = actH[m, d]
            for y in range(nV):
                if Vsrc[y] != x:
                    continue
                my = actV[m, y]
                for f in range(nH):
                    if Hsrc[f] != Vtgt[y]:
                        continue
                    yf = _at(Pcomp, _get(psi, y), _get(phi, f))
                    myf = _at(actH, my, f)
                    for z in range(nV):
                        if Vsrc[z] != Htgt[d] or Vtgt[z] != Htgt[f]:
                            continue
                        dz = _at(Pcomp, _get(phi, d), _get(psi, z))
                        if dz < 0:
                            continue
                        mdz = _at(actV, md, z)
                        for q in range(nM):
                            if Mobj[q] != Htgt[f]:
                                continue
                            if _at(Pcomp, yf, _get(mu, q)) != dz:
                                continue
                            inst += 1
                            lhs = _at(Mcomp, myf, q)
                            rhs = _at(Mcomp, q, mdz)
                            if lhs < 0 or lhs != rhs:
                                if nv < limit:
                                    wit[nv, 0] = m
                                    wit[nv, 1] = d
                                    wit[nv, 2] = y
                                    wit[nv, 3] = f
                                    wit[nv, 4] = z
                                    wit[nv, 5] = q
                                nv += 1
    return inst, nv, wit


@njit(cache=True)
def _squares_pass(Pcomp, Mobj, Hsrc, Htgt, Vsrc, Vtgt, mu, phi, psi, out, fill):
    nM = Mobj.shape[0]
    nH = Hsrc.shape[0]
    nV = Vsrc.shape[0]
    k = 0
    for a in range(nH):
        for v in range(nV):
            if Vsrc[v] != Htgt[a]:
                continue
            lhs = _at(Pcomp, phi[a], psi[v])
            if lhs < 0:
                continue
            for u in range(nV):
                if Vsrc[u] != Hsrc[a]:
                    continue
                for c in range(nH):
                    if Hsrc[c] != Vtgt[u] or Htgt[c] != Vtgt[v]:
                        continue
                    uc = _at(Pcomp, psi[u], phi[c])
                    for m in range(nM):
                        if Mobj[m] != Htgt[c]:
                            continue
                        if _at(Pcomp, uc, mu[m]) == lhs:
                            if fill:
                                out[k, 0] = m
                                out[k, 1] = a
                                out[k, 2] = c
                                out[k, 3] = u
                                out[k, 4] = v
                            k += 1
    return k


def enumerate_squares(Pcomp, Mobj, Hsrc, Htgt, Vsrc, Vtgt, mu, phi, psi):
    dummy = np.empty((0, 5), np.int64)
    n = _squares_pass(Pcomp, Mobj, Hsrc, Htgt, Vsrc, Vtgt, mu, phi, psi, dummy, False)
    out = np.empty((n, 5), np.int64)
    _squares_pass(Pcomp, Mobj, Hsrc, Htgt, Vsrc, Vtgt, mu, phi, psi, out, True)
    return out


@njit(cache=True)
def assoc_triples(Q, horizontal, Mcomp, Hcomp, Vcomp, actH, actV, order, start, limit):
    """Compare (ij)k with i(jk) on every composable triple.

    ``order``/``start`` is the neighbour index: squares sorted by their left
    edge (horizontal) or top edge (vertical), with CSR offsets.
    """
    N = Q.shape[0]
    wit = np.full((max(limit, 1), 3), -1, np.int64)
    inst = 0
    nv = 0
    out_col = 4 if horizontal else 2
    for i in range(N):
        m1, a1, c1, u1, v1 = Q[i, 0], Q[i, 1], Q[i, 2], Q[i, 3], Q[i, 4]
        ki = Q[i, out_col]
        for jj in range(start[ki], start[ki + 1]):
            j = order[jj]
            m2, a2, c2, u2, v2 = Q[j, 0], Q[j, 1], Q[j, 2], Q[j, 3], Q[j, 4]
            if horizontal:
                ij = _hcomp(Mcomp, Hcomp, actH, m1, a1, c1, u1, v1, m2, a2, c2, u2, v2)
            else:
                ij = _vcomp(Mcomp, Vcomp, actV, m1, a1, c1, u1, v1, m2, a2, c2, u2, v2)
            kj = Q[j, out_col]
            for kk in range(start[kj], start[kj + 1]):
                k = order[kk]
                m3, a3, c3, u3, v3 = Q[k, 0], Q[k, 1], Q[k, 2], Q[k, 3], Q[k, 4]
                if horizontal:
                    lhs = _hcomp(Mcomp, Hcomp, actH, ij[0], ij[1], ij[2], ij[3], ij[4],
                                 m3, a3, c3, u3, v3)
                    jk = _hcomp(Mcomp, Hcomp, actH, m2, a2, c2, u2, v2, m3, a3, c3, u3, v3)
                    rhs = _hcomp(Mcomp, Hcomp, actH, m1, a1, c1, u1, v1,
                                 jk[0], jk[1], jk[2], jk[3], jk[4])
                else:
                    lhs = _vcomp(Mcomp, Vcomp, actV, ij[0], ij[1], ij[2], ij[3], ij[4],
                                 m3, a3, c3, u3, v3)
                    jk = _vcomp(Mcomp, Vcomp, actV, m2, a2, c2, u2, v2, m3, a3, c3, u3, v3)
                    rhs = _vcomp(Mcomp, Vcomp, actV, m1, a1, c1, u1, v1,
                                 jk[0], jk[1], jk[2], jk[3], jk[4])
                inst += 1
                bad = lhs[0] < 0 or lhs[1] < 0 or lhs[2] < 0 or lhs[3] < 0 or lhs[4] < 0
                if bad or lhs != rhs:
                    if nv < limit:
                        wit[nv, 0] = i
                        wit[nv, 1] = j
                        wit[nv, 2] = k
                    nv += 1
    return inst, nv, wit


@njit(cache=True)
def grid_eval(Q, grids, Mcomp, Hcomp, Vcomp, actH, actV):
    """Per grid: do both pasting orders agree, and does the square equation hold?"""
    G = grids.shape[0]
    agree = np.zeros(G, np.bool_)
    eq2 = np.zeros(G, np.bool_)
    for g in range(G):
        i1, i2, i3, i4 = grids[g, 0], grids[g, 1], grids[g, 2], grids[g, 3]
        m1, a1, c1, u1, v1 = Q[i1, 0], Q[i1, 1], Q[i1, 2], Q[i1, 3], Q[i1, 4]
        m2, a2, c2, u2, v2 = Q[i2, 0], Q[i2, 1], Q[i2, 2], Q[i2, 3], Q[i2, 4]
        m3, a3, c3, u3, v3 = Q[i3, 0], Q[i3, 1], Q[i3, 2], Q[i3, 3], Q[i3, 4]
        m4, a4, c4, u4, v4 = Q[i4, 0], Q[i4, 1], Q[i4, 2], Q[i4, 3], Q[i4, 4]
        top = _hcomp(Mcomp, Hcomp, actH, m1, a1, c1, u1, v1, m2, a2, c2, u2, v2)
        bot = _hcomp(Mcomp, Hcomp, actH, m3, a3, c3, u3, v3, m4, a4, c4, u4, v4)
        R = _vcomp(Mcomp, Vcomp, actV, top[0], top[1], top[2], top[3], top[4],
                   bot[0], bot[1], bot[2], bot[3], bot[4])
        left = _vcomp(Mcomp, Vcomp, actV, m1, a1, c1, u1, v1, m3, a3, c3, u3, v3)
        right = _vcomp(Mcomp, Vcomp, actV, m2, a2, c2, u2, v2, m4, a4, c4, u4, v4)
        C = _hcomp(Mcomp, Hcomp, actH, left[0], left[1], left[2], left[3], left[4],
                   right[0], right[1], right[2], right[3], right[4])
        agree[g] = R == C and R[0] >= 0 and R[1] >= 0 and R[2] >= 0 and R[3] >= 0
        # m^(yf) q == q m^(dz) with q the bottom-right square (q: y d/f z)
        myf = _at(actH, _at(actV, m1, u4), c4)
        mdz = _at(actV, _at(actH, m1, a4), v4)
        lhs = _at(Mcomp, myf, m4)
        eq2[g] = lhs >= 0 and lhs == _at(Mcomp, m4, mdz)
    return agree, eq2


@njit(cache=True)
def _grids_pass(Q, r_order, r_start, b_order, b_start, key4, ord4, nH, out, fill, cap):
    N = Q.shape[0]
    k = 0
    for i1 in range(N):
        kr = Q[i1, 4]
        kb = Q[i1, 2]
        for jj in range(r_start[kr], r_start[kr + 1]):
            i2 = r_order[jj]
            for ii in range(b_start[kb], b_start[kb + 1]):
                i3 = b_order[ii]
                key = Q[i3, 4] * nH + Q[i2, 2]
                lo = np.searchsorted(key4, key)
                hi = np.searchsorted(key4, key + 1)
                if not fill:
                    k += hi - lo
                    if k > cap:
                        return k
                    continue
                for t in range(lo, hi):
                    out[k, 0] = i1
                    out[k, 1] = i2
                    out[k, 2] = i3
                    out[k, 3] = ord4[t]
                    k += 1
    return k


def enumerate_grids(Q, r_order, r_start, b_order, b_start, key4, ord4, nH, cap):
    """All composable 2x2 grids as index rows (top-left, top-right, bottom-left, bottom-right).

    Returns None when there are more than ``cap``.
    """
    dummy = np.empty((0, 4), np.int64)
    n = _grids_pass(Q, r_order, r_start, b_order, b_start, key4, ord4, nH, dummy, False, cap)
    if n > cap:
        return None
    out = np.empty((n, 4), np.int64)
    _grids_pass(Q, r_order, r_start, b_order, b_start, key4, ord4, nH, out, True, cap)
    return out
