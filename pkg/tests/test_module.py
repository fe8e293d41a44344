from itertools import product

import pytest

from doublecat.category import IdObjFunctor, identity_functor, inclusion
from doublecat.errors import NotComposableInP, NotNormal, SemicoreAxiomViolated, TypingMismatch, UnknownArrow
from doublecat.groups import (
    build_cyclic,
    build_symmetric,
    conjugation_action,
    subgroup_closure,
    trivial_action,
)
from doublecat.module import (
    act_formal_word,
    check_crossed_module,
    check_semicore,
    evaluate_in_P,
    from_commuting_shell,
    from_crossed_module,
    from_normal_subgroups,
    from_semicore,
    semicore_from_subgroup,
    validate_double_module,
)

import oracles as O
from test_category import codiscrete


def shell_over(G):
    return from_commuting_shell(G, G, G, identity_functor(G, "phi"), identity_functor(G, "psi"))


def test_evaluate_in_P_matches_permutation_product(s3):
    for a, v, m in product(["(12)", "(123)"], ["(13)", "e"], ["(132)", "e"]):
        word = [("H", a), ("V", v), ("M", m)]
        want = O.then(O.then(O.S3_PERMS[a], O.S3_PERMS[v]), O.S3_PERMS[m])
        assert evaluate_in_P(s3, word) == O.S3_NAMES[want]


def test_evaluate_in_P_typing():
    dm = shell_over(codiscrete())
    assert evaluate_in_P(dm, [("H", "xy"), ("V", "yx")]) == "xx"
    with pytest.raises(NotComposableInP) as e:
        evaluate_in_P(dm, [("H", "xy"), ("V", "xy")])
    assert (e.value.first, e.value.second) == ("xy", "xy")
    assert evaluate_in_P(dm, [], at="y") == "yy"
    with pytest.raises(TypingMismatch):
        evaluate_in_P(dm, [])
    with pytest.raises(UnknownArrow):
        evaluate_in_P(dm, [("M", "xy")])


def test_act_formal_word(s3):
    assert act_formal_word(s3, "(123)", [("H", "(12)")]) == "(132)"
    assert act_formal_word(s3, "(123)", [("H", "(12)"), ("V", "(13)")]) == "(123)"
    assert act_formal_word(s3, "(123)", []) == "(123)"
    for m, w in product(O.A3, O.S3):
        assert act_formal_word(s3, O.S3_NAMES[m], [("V", O.S3_NAMES[w])]) == O.S3_NAMES[O.conj(m, w)]
    with pytest.raises(TypingMismatch):
        act_formal_word(s3, "(123)", [("P", "(12)")])


def test_act_formal_word_letter_order_matters(broken):
    # H acts by conjugation, V trivially: (123)^(12 then V:e) vs (123)^(V:(12) then H:e)
    assert act_formal_word(broken, "(123)", [("H", "(12)"), ("V", "(12)")]) == "(132)"
    assert act_formal_word(broken, "(123)", [("V", "(12)"), ("H", "e")]) == "(123)"


@pytest.mark.parametrize("name", ["c4", "s3_a3", "s3_shell", "d4_center", "semicore_s3"])
def test_fixtures_are_double_modules(name):
    from conftest import example
    rep = validate_double_module(example(name))
    assert rep.ok and rep.status == "pass", rep.render()


def test_axiom_two_instance_count_oracle(s3):
    # q = (yf)^-1 d z must be even: half of all (d, y, f, z), times |A3| choices of m
    assert validate_double_module(s3)["axiom_ii"].instances == 3 * 6 ** 4 // 2


def test_broken_action_witnesses(broken):
    rep = validate_double_module(broken)
    assert not rep.ok
    assert rep["axiom_i_H"].ok
    ax = rep["axiom_i_V"]
    assert ax.violation_count == 6  # (123), (132) against each transposition
    w = ax.violations[0]
    assert set(w) == {"m", "y", "m^y", "my", "ym^y"}
    assert w["my"] != w["ym^y"]
    two = rep["axiom_ii"]
    assert two.violation_count > 0
    w2 = two.violations[0]
    assert w2["m^(yf) q"] != w2["q m^(dz)"]


def test_not_normal_witness():
    S3 = build_symmetric(3)
    with pytest.raises(NotNormal) as e:
        from_normal_subgroups(S3, ["(13)"], [], ["(12)"])
    err = e.value
    assert (err.h, err.m, err.conjugate) == ("(13)", "(12)", "(23)")
    assert O.S3_NAMES[O.conj(O.S3_PERMS["(12)"], O.S3_PERMS["(13)"])] == "(23)"


def test_crossed_module_builder_and_check():
    S3 = build_symmetric(3)
    A3 = subgroup_closure(S3, ["(123)"], name="M")
    mu = inclusion(A3, S3, "mu")
    act = conjugation_action(A3, S3, S3)
    assert check_crossed_module(mu, act).ok
    dm = from_crossed_module(mu, act, S3, identity_functor(S3, "phi"), conjugation_action(A3, S3, S3))
    assert validate_double_module(dm).ok
    assert dm.V is S3 and dm.psi("(12)") == "(12)"


def test_crossed_module_failures():
    S3 = build_symmetric(3)
    A3 = subgroup_closure(S3, ["(123)"])
    eq = check_crossed_module(inclusion(A3, S3), trivial_action(A3, S3))
    assert eq["equivariance"].violation_count > 0 and eq["peiffer"].ok
    C1 = build_cyclic(1)
    triv = IdObjFunctor(S3, C1, {a: "0" for a in S3.arrows})
    pf = check_crossed_module(triv, trivial_action(S3, C1))
    assert pf["equivariance"].ok
    assert pf["peiffer"].violation_count > 0
    w = pf["peiffer"].violations[0]
    assert w["m^(mu n)"] != w["n^-1 m n"]


def test_semicore(semicore):
    assert validate_double_module(semicore).ok
    S3 = build_symmetric(3)
    A3 = subgroup_closure(S3, ["(123)"], name="M")
    rep = check_semicore(A3, S3, S3, inclusion(A3, S3, "eta"), inclusion(A3, S3, "mu"),
                         identity_functor(S3, "phi"), conjugation_action(A3, S3, S3))
    assert rep.ok
    assert rep["compatibility"].instances == 18
    assert rep["M_normal_in_H"].instances == 18


def test_semicore_violation_is_raised_with_witness():
    S3 = build_symmetric(3)
    A3 = subgroup_closure(S3, ["(123)"], name="M")
    with pytest.raises(SemicoreAxiomViolated) as e:
        semicore_from_subgroup(S3, S3, A3, actP=trivial_action(A3, S3))
    assert e.value.witness
    assert not e.value.report.ok
    with pytest.raises(SemicoreAxiomViolated):
        # a non-normal M inside H
        Z2 = subgroup_closure(S3, ["(12)"], name="M")
        from_semicore(Z2, S3, S3, inclusion(Z2, S3, "eta"), inclusion(Z2, S3, "mu"),
                      identity_functor(S3, "phi"), conjugation_action(Z2, S3, S3))


def test_multi_object_shell_module():
    dm = shell_over(codiscrete(("x", "y", "z")))
    assert validate_double_module(dm).ok
    assert not dm.P.objects == ("x",)
