import pytest

from doublecat.category import (
    FiniteCategory,
    IdObjFunctor,
    RightAction,
    compose_functors,
    identity_functor,
    inclusion,
    is_totally_intransitive,
    validate_category,
    validate_functor,
    validate_right_action,
)
from doublecat.errors import NotComposable, ReferenceError, SizeLimitExceeded, UnknownArrow
from doublecat.groups import build_cyclic, build_symmetric, subgroup_closure


def walking_arrow():
    """x --f--> y, not a groupoid."""
    return FiniteCategory.build(
        ["x", "y"], [("1x", "x", "x"), ("1y", "y", "y"), ("f", "x", "y")],
        {"x": "1x", "y": "1y"},
        {("1x", "1x"): "1x", ("1y", "1y"): "1y", ("1x", "f"): "f", ("f", "1y"): "f"},
        name="arrow",
    )


def codiscrete(objs=("x", "y")):
    arrows = [(a + b, a, b) for a in objs for b in objs]
    comp = {(a + b, b + c): a + c for a in objs for b in objs for c in objs}
    return FiniteCategory.build(objs, arrows, {a: a + a for a in objs}, comp,
                                {a + b: b + a for a in objs for b in objs}, "codiscrete")


def test_walking_arrow_is_a_category():
    cat = walking_arrow()
    rep = validate_category(cat)
    assert rep.ok and rep.status == "pass"
    assert not cat.is_groupoid
    assert cat.compose("1x", "f") == "f"
    assert cat.hom("x", "y") == ("f",)
    assert cat.hom_monoid("x") == ("1x",)


def test_compose_errors():
    cat = walking_arrow()
    with pytest.raises(NotComposable):
        cat.compose("f", "f")
    with pytest.raises(UnknownArrow):
        cat.compose("f", "g")


def test_codiscrete_groupoid():
    cat = codiscrete()
    assert validate_category(cat).ok
    assert cat.inverse_of("xy") == "yx"
    assert cat.compose_path("xy", "yx", "xy") == "xy"
    assert not is_totally_intransitive(cat)


def test_missing_composite_is_reported_with_witness():
    cat = walking_arrow()
    bad = cat.replace(comp={k: v for k, v in cat.comp.items() if k != ("1x", "f")})
    rep = validate_category(bad)
    assert not rep.ok
    assert rep["table"].violations[0]["f"] == "1x"
    assert rep["identities"].violation_count >= 1


def test_non_associative_table_is_caught():
    # Z/3 with one product entry corrupted
    C3 = build_cyclic(3)
    comp = dict(C3.comp)
    comp["1", "1"] = "0"
    rep = validate_category(C3.replace(comp=comp))
    assert rep["associativity"].violation_count > 0
    w = rep["associativity"].violations[0]
    assert {"f", "g", "h", "(fg)h", "f(gh)"} <= set(w)


def test_wrong_inverse_is_caught():
    C3 = build_cyclic(3)
    rep = validate_category(C3.replace(inverses={"0": "0", "1": "1", "2": "1"}))
    assert rep["inverses"].violation_count == 1
    assert rep["inverses"].violations[0]["f"] == "1"


@pytest.mark.parametrize("change, field", [
    (dict(comp={("f", "f"): "f"}), "comp"),
    (dict(comp={("1x", "g"): "f"}), "comp"),
    (dict(identities={"z": "1x"}), "identities"),
    (dict(arrows=("1x", "1x", "f")), "arrows"),
])
def test_structural_reference_errors(change, field):
    cat = walking_arrow()
    with pytest.raises(ReferenceError) as e:
        cat.replace(**change)
    assert e.value.field == field


def test_size_cap():
    with pytest.raises(SizeLimitExceeded):
        FiniteCategory.build(["x"], [(str(i), "x", "x") for i in range(10_001)], {"x": "0"}, {})


def test_packed_tables_match_dicts():
    S3 = build_symmetric(3)
    pk = S3.packed
    ix = S3.index
    for (f, g), h in S3.comp.items():
        assert pk.comp[ix[f], ix[g]] == ix[h]
    for f in S3.arrows:
        assert pk.inv[ix[f]] == ix[S3.inverses[f]]
    W = walking_arrow().packed
    i = walking_arrow().index
    assert W.comp[i["f"], i["f"]] == -1
    assert W.inv[i["f"]] == -1


def test_functors():
    S3 = build_symmetric(3)
    A3 = subgroup_closure(S3, ["(123)"])
    assert validate_functor(inclusion(A3, S3)).ok
    assert validate_functor(identity_functor(S3)).ok
    twice = compose_functors(inclusion(A3, S3), identity_functor(S3))
    assert twice("(132)") == "(132)"
    # sign map S3 -> C2 is a homomorphism; a constant non-identity map is not
    C2 = build_cyclic(2)
    sign = IdObjFunctor(S3, C2, {a: ("0" if a in A3 else "1") for a in S3.arrows})
    assert validate_functor(sign).ok
    const = IdObjFunctor(S3, C2, {a: "1" for a in S3.arrows})
    rep = validate_functor(const)
    assert rep["identities"].violation_count == 1
    assert rep["composition"].violation_count > 0


def test_right_action_checks():
    S3 = build_symmetric(3)
    A3 = subgroup_closure(S3, ["(123)"])
    conj = {(m, h): S3.compose_path(S3.inverse_of(h), m, h) for m in A3.arrows for h in S3.arrows}
    assert validate_right_action(RightAction(A3, S3, conj)).ok
    # (123) fixed by (12) but inverted by (13) and (23): not compatible with composition
    broken = dict(conj)
    broken["(123)", "(12)"] = "(123)"
    rep = validate_right_action(RightAction(A3, S3, broken))
    assert not rep.ok
    assert rep["composite"].violation_count > 0
    missing = {k: v for k, v in conj.items() if k != ("(123)", "(12)")}
    assert validate_right_action(RightAction(A3, S3, missing))["totality"].violation_count == 1
