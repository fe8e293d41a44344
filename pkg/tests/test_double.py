
import numpy as np
import pytest

from doublecat.category import identity_functor
from doublecat.double import (
    Square,
    SquareGrid,
    check_interchange_equiv,
    compose_h,
    compose_v,
    enumerate_squares,
    extract_crossed_module_h,
    extract_crossed_module_v,
    identity_h,
    identity_v,
    inverse_h,
    inverse_v,
    is_square,
    is_thin,
    paste_grid,
    pasting_orders,
    sample_grids,
    select_grids,
    square_space,
    validate_double_category,
)
from doublecat.errors import InterchangeFailure, NotAGroupoid, NotComposable, UnknownArrow
from doublecat.module import from_commuting_shell, validate_double_module
from doublecat.sampling import Lcg

import oracles as O
from test_category import codiscrete, walking_arrow


def s3_name(q):
    return Square(*(O.S3_NAMES[x] for x in q))


def c4_name(q):
    return Square(*(str(x) for x in q))


# enumeration against brute force


def test_c4_squares(c4):
    assert set(enumerate_squares(c4)) == {c4_name(q) for q in O.c4_squares()}
    assert len(enumerate_squares(c4)) == 16


def test_s3_squares(s3):
    got = enumerate_squares(s3)
    assert len(got) == 648 == 6 ** 4 // 2
    assert set(got) == {s3_name(q) for q in O.s3_squares()}


def test_shell_and_center_counts(shell, d4):
    assert set(enumerate_squares(shell)) == {s3_name(q)._replace(m="1_*") for q in O.shell_squares()}
    assert len(enumerate_squares(shell)) == 216
    assert len(enumerate_squares(d4)) == len(O.d4_center_squares()) == 1024


def test_squares_are_sorted_and_all_pass_is_square(s3):
    sp = square_space(s3)
    Q = sp.Q
    assert all(tuple(Q[i]) < tuple(Q[i + 1]) for i in range(len(Q) - 1))
    assert all(is_square(s3, q) for q in sp.squares()[::17])


def test_is_square_rejects(s3):
    assert not is_square(s3, Square("e", "(12)", "e", "e", "e"))
    with pytest.raises(UnknownArrow):
        is_square(s3, Square("(12)", "e", "e", "e", "e"))


def test_multi_object_shell_squares():
    # codiscrete groupoid: one arrow per ordered pair, so a square is its four corners
    G = codiscrete(("x", "y", "z"))
    dm = from_commuting_shell(G, G, G, identity_functor(G), identity_functor(G))
    assert len(enumerate_squares(dm)) == 3 ** 4
    rep = validate_double_category(dm)
    assert rep.ok, rep.render()


def test_non_groupoid_module_has_no_inverses():
    W = walking_arrow()
    dm = from_commuting_shell(W, W, W, identity_functor(W), identity_functor(W))
    assert validate_double_module(dm).ok
    # squares: commuting shells in the walking arrow
    assert len(enumerate_squares(dm)) == 6
    rep = validate_double_category(dm)
    assert rep.ok and "inverse_h" not in rep
    q = enumerate_squares(dm)[0]
    with pytest.raises(NotAGroupoid):
        inverse_h(dm, q)


# compositions against permutation formulas


def test_compositions_match_oracle(s3):
    sq = O.s3_squares()
    by_u = {}
    by_a = {}
    for q in sq:
        by_u.setdefault(q[3], []).append(q)
        by_a.setdefault(q[1], []).append(q)
    for q1 in sq[::7]:
        for q2 in by_u[q1[4]][::5]:
            assert compose_h(s3, s3_name(q1), s3_name(q2)) == s3_name(O.s3_hcomp(q1, q2))
        for q2 in by_a[q1[2]][::5]:
            assert compose_v(s3, s3_name(q1), s3_name(q2)) == s3_name(O.s3_vcomp(q1, q2))


def test_compose_needs_matching_edges(s3):
    q = Square("e", "e", "e", "(12)", "(12)")
    r = Square("e", "e", "e", "(13)", "(13)")
    with pytest.raises(NotComposable):
        compose_h(s3, q, r)
    with pytest.raises(NotComposable):
        compose_v(s3, Square("e", "e", "(12)", "e", "(12)"), Square("e", "e", "e", "e", "e"))


def test_units(s3, c4):
    for dm in (s3, c4):
        for q in enumerate_squares(dm):
            assert compose_h(dm, identity_h(dm, q.u), q) == q
            assert compose_h(dm, q, identity_h(dm, q.v)) == q
            assert compose_v(dm, identity_v(dm, q.a), q) == q
            assert compose_v(dm, q, identity_v(dm, q.c)) == q
    assert is_square(s3, identity_h(s3, "(12)")) and is_thin(s3, identity_v(s3, "(123)"))


def test_inverse_formulas(s3):
    for q in enumerate_squares(s3):
        ih, iv = inverse_h(s3, q), inverse_v(s3, q)
        assert is_square(s3, ih) and is_square(s3, iv)
        assert compose_h(s3, q, ih) == identity_h(s3, q.u)
        assert compose_h(s3, ih, q) == identity_h(s3, q.v)
        assert compose_v(s3, q, iv) == identity_v(s3, q.a)
        assert compose_v(s3, iv, q) == identity_v(s3, q.c)


def test_thin_squares(shell, s3):
    assert all(is_thin(shell, q) for q in enumerate_squares(shell))
    thin = [q for q in enumerate_squares(s3) if is_thin(s3, q)]
    # thin S3 squares are the commuting shells: 6^4 / 6
    assert len(thin) == 216


# pasting


def test_paste_grid_both_orders(s3):
    sp = square_space(s3)
    grids = sample_grids(sp, 50, seed=3)
    for g in grids:
        q1, q2, q3, q4 = (sp.square(sp.Q[i]) for i in g)
        grid = SquareGrid(((q1, q2), (q3, q4)))
        want = compose_v(s3, compose_h(s3, q1, q2), compose_h(s3, q3, q4))
        assert paste_grid(s3, grid) == want
        assert paste_grid(s3, grid, verify=True) == want
        a, b = pasting_orders(s3, grid)
        assert a == b == want


def test_paste_larger_grid(d4):
    # a 3x2 grid of identity squares along edges pastes to an identity square
    a, b = "r", "s"
    row = (identity_v(d4, a), identity_v(d4, b))
    q = paste_grid(d4, SquareGrid((row, row, row)), verify=True)
    assert q == identity_v(d4, d4.H.compose(a, b))


def test_paste_errors(s3, broken):
    bad = SquareGrid(((Square("e", "e", "e", "e", "(12)"), Square("e", "e", "e", "e", "e")),))
    with pytest.raises(NotComposable):
        paste_grid(s3, bad)
    with pytest.raises(NotComposable):
        paste_grid(s3, SquareGrid(()))
    # in the broken module some grid has two different composites
    sp = square_space(broken)
    grids, _ = select_grids(sp, max_grids=1, sample=2000, seed=0)
    raised = 0
    for g in grids:
        grid = SquareGrid(((sp.square(sp.Q[g[0]]), sp.square(sp.Q[g[1]])),
                           (sp.square(sp.Q[g[2]]), sp.square(sp.Q[g[3]]))))
        try:
            paste_grid(broken, grid, verify=True)
        except InterchangeFailure as e:
            assert e.rows_first != e.cols_first
            raised += 1
    assert raised > 0


def test_adjacency_errors():
    g = SquareGrid.of([[("e", "e", "x", "e", "y"), ("e", "e", "e", "z", "e")],
                       [("e", "w", "e", "e", "e")]])
    errs = g.adjacency_errors()
    # right edge y != left edge z, the short second row, bottom edge x != top edge w
    assert [e.position for e in errs] == [(0, 0), (1, 0), (0, 0)]
    assert "ragged" in str(errs[1])


# grid populations


def test_c4_grid_count_oracle(c4):
    sp = square_space(c4)
    assert sp.grid_count() == O.grid_count_bruteforce(O.c4_squares()) == 4096
    grids, info = select_grids(sp, max_grids=10 ** 6)
    assert info["mode"] == "exhaustive" and len(grids) == 4096
    assert len({tuple(g) for g in grids}) == 4096


@pytest.mark.parametrize("name, oracle", [
    ("s3_a3", O.s3_squares), ("s3_shell", O.shell_squares), ("d4_center", O.d4_center_squares)])
def test_grid_count_by_edges(name, oracle):
    from conftest import example
    assert square_space(example(name)).grid_count() == O.grid_count_by_edges(oracle())


def test_grid_enumeration_matches_count(shell):
    sp = square_space(shell)
    grids, info = select_grids(sp, max_grids=2_000_000)
    assert info["mode"] == "exhaustive"
    assert len(grids) == sp.grid_count() == 1679616
    assert select_grids(sp, max_grids=10, sample=100)[1]["mode"] == "sampled"


def test_triple_count(s3):
    sp = square_space(s3)
    # each square has 108 right neighbours, each of those 108 more
    assert sp.triple_count(True) == sp.triple_count(False) == 648 * 108 * 108


def test_sampling_is_deterministic_and_composable(s3):
    sp = square_space(s3)
    a = sample_grids(sp, 500, seed=11)
    b = sample_grids(sp, 500, seed=11)
    c = sample_grids(sp, 500, seed=12)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
    Q = sp.Q
    for i1, i2, i3, i4 in a:
        assert Q[i1, 4] == Q[i2, 3] and Q[i3, 4] == Q[i4, 3]
        assert Q[i1, 2] == Q[i3, 1] and Q[i2, 2] == Q[i4, 1]


def test_lcg_reference_values():
    g = Lcg(0)
    assert g.next_u64() == 1442695040888963407
    assert g.next_u64() == (6364136223846793005 * 1442695040888963407 + 1442695040888963407) % 2 ** 64
    h = Lcg(5)
    assert all(0 <= h.below(7) < 7 for _ in range(100))


# validation reports


def test_validate_c4_exhaustive(c4):
    rep = validate_double_category(c4)
    assert rep.ok and rep.status == "pass"
    assert rep["interchange"].sampling["mode"] == "exhaustive"
    assert rep["interchange"].instances == 4096
    assert rep["squares"].instances == 16


def test_broken_interchange_report(broken):
    rep = check_interchange_equiv(broken, sample=5000, seed=1)
    assert rep["interchange"].violation_count > 0
    assert rep["interchange_iff_square_equation"].ok
    w = rep["interchange"].violations[0]
    assert w["rows_first"] != w["cols_first"]
    assert w["m^(yf) q"] != w["q m^(dz)"]
    assert rep["interchange"].sampling["seed"] == 1


def test_reports_are_deterministic(broken):
    a = check_interchange_equiv(broken, sample=3000, seed=9).to_json()
    b = check_interchange_equiv(broken, sample=3000, seed=9).to_json()
    assert a == b


# crossed modules from double groupoids


def test_extract_s3(s3):
    h = extract_crossed_module_h(s3, "*")
    assert len(h.group.arrows) == 3
    assert h.report.ok
    assert all(is_square(s3, q) for q in h.elements.values())
    assert {h.boundary(k) for k in h.group.arrows} == {"e", "(123)", "(132)"}
    v = extract_crossed_module_v(s3, "*")
    assert len(v.group.arrows) == 3 and v.report.ok


def test_extract_c4_is_c2(c4):
    for fn in (extract_crossed_module_h, extract_crossed_module_v):
        e = fn(c4, "*")
        assert len(e.group.arrows) == 2
        assert e.report.ok
        g = [k for k in e.group.arrows if k != e.group.identities["*"]][0]
        assert e.group.compose(g, g) == e.group.identities["*"]


def test_extract_shell_is_trivial(shell):
    assert len(extract_crossed_module_h(shell, "*").group.arrows) == 1


def test_extract_order_oracle(d4):
    # pairs (m, a) with m in the center and a = m
    assert len(extract_crossed_module_h(d4, "*").group.arrows) == 2
    assert len(extract_crossed_module_v(d4, "*").group.arrows) == 2
