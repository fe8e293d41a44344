"""Double categories and double groupoids from finite double modules."""

from .category import (
    FiniteCategory,
    IdObjFunctor,
    RightAction,
    compose,
    hom_monoid,
    identity_functor,
    inclusion,
    inverse_of,
    is_totally_intransitive,
    validate_category,
    validate_functor,
    validate_right_action,
)
from .double import (
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
    validate_double_category,
)
from .groups import build_cyclic, build_dihedral, build_symmetric, subgroup_closure
from .module import (
    DoubleModule,
    act_formal_word,
    check_crossed_module,
    evaluate_in_P,
    from_commuting_shell,
    from_crossed_module,
    from_normal_subgroups,
    from_semicore,
    validate_double_module,
)
from .report import DiagnosticReport
from .serialize import dumps, load_structure, loads, save_structure

__version__ = "0.1.0"

__all__ = [
    "DiagnosticReport",
    "DoubleModule",
    "FiniteCategory",
    "IdObjFunctor",
    "RightAction",
    "Square",
    "SquareGrid",
    "act_formal_word",
    "build_cyclic",
    "build_dihedral",
    "build_symmetric",
    "check_crossed_module",
    "check_interchange_equiv",
    "compose",
    "compose_h",
    "compose_v",
    "dumps",
    "enumerate_squares",
    "evaluate_in_P",
    "extract_crossed_module_h",
    "extract_crossed_module_v",
    "from_commuting_shell",
    "from_crossed_module",
    "from_normal_subgroups",
    "from_semicore",
    "hom_monoid",
    "identity_functor",
    "identity_h",
    "identity_v",
    "inclusion",
    "inverse_h",
    "inverse_of",
    "inverse_v",
    "is_square",
    "is_thin",
    "is_totally_intransitive",
    "load_structure",
    "loads",
    "paste_grid",
    "save_structure",
    "subgroup_closure",
    "validate_category",
    "validate_double_category",
    "validate_double_module",
    "validate_functor",
    "validate_right_action",
]
