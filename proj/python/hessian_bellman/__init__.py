from ._core import (
    ControlNet,
    admissible,
    build_control_net,
    cone_root,
    elem_sym,
    free_term,
    g_value,
    in_cone,
    k_matrix,
    kappa,
    normalized_coeff,
    pm,
    quasiconvexity_check,
    solve,
)

__all__ = [
    "ControlNet",
    "admissible",
    "build_control_net",
    "cone_root",
    "elem_sym",
    "free_term",
    "g_value",
    "in_cone",
    "k_matrix",
    "kappa",
    "normalized_coeff",
    "pm",
    "quasiconvexity_check",
    "solve",
]
