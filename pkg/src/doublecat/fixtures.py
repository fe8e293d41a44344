"""Built-in example instances, as emitted by ``dcat examples <name>``."""

from __future__ import annotations

from typing import Callable

from .groups import (
    build_cyclic,
    build_dihedral,
    build_symmetric,
    subgroup_closure,
    trivial_action,
)
from .category import identity_functor
from .module import (
    DoubleModule,
    from_commuting_shell,
    from_normal_subgroups,
    semicore_from_subgroup,
)


def c4() -> DoubleModule:
    """P = C4 with H = V = M = {0, 2}; conjugation is trivial here."""
    return from_normal_subgroups(build_cyclic(4), ["2"], ["2"], ["2"], name="c4")


def s3_a3() -> DoubleModule:
    """P = H = V = S3, M = A3, inclusions and conjugation."""
    return from_normal_subgroups(build_symmetric(3), ["(12)", "(123)"], ["(12)", "(123)"], ["(123)"],
                                 name="s3_a3")


def s3_shell() -> DoubleModule:
    """Shells of S3 commuting in S3; M is identities only."""
    S3 = build_symmetric(3)
    return from_commuting_shell(S3, S3, S3, identity_functor(S3, "phi"), identity_functor(S3, "psi"),
                                name="s3_shell")


def d4_center() -> DoubleModule:
    """P = H = V = D4, M its center {e, r^2}."""
    return from_normal_subgroups(build_dihedral(4), ["r", "s"], ["r", "s"], ["r^2"], name="d4_center")


def semicore_s3() -> DoubleModule:
    """A3 inside H = S3 = P with the conjugation crossed module."""
    S3 = build_symmetric(3)
    A3 = subgroup_closure(S3, ["(123)"], name="M")
    return semicore_from_subgroup(S3, S3, A3).replace(name="semicore_s3")


def broken_action() -> DoubleModule:
    """``s3_a3`` with the V-action replaced by the trivial one; breaks axiom (i)."""
    dm = s3_a3()
    return dm.replace(actV=trivial_action(dm.M, dm.V, "trivial"), name="broken_action")


EXAMPLES: dict[str, Callable[[], DoubleModule]] = {
    "c4": c4,
    "s3_a3": s3_a3,
    "s3_shell": s3_shell,
    "d4_center": d4_center,
    "semicore_s3": semicore_s3,
    "broken_action": broken_action,
}

VALID = ("c4", "s3_a3", "s3_shell", "d4_center", "semicore_s3")
