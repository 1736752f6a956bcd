"""Escaping sets of affine-exponential entire functions and their compositions."""
from .function import (
    FATOU,
    IDENTITY,
    OVERFLOW,
    Affine,
    Compose,
    ExpAffine,
    ExprError,
    FunctionExpr,
    Iterate,
    Translate,
    commutes_numerically,
    compose,
    eval_derivative,
    evaluate,
    exp_map,
    explus,
    format_expr,
    is_overflow,
    iterate_expr,
    parse_complex,
    parse_expr,
    translate,
)
from .orbit import (
    Certificate,
    Classification,
    EscapeConfig,
    EscapingPointNotFound,
    OrbitRecord,
    Verdict,
    classify,
    classify_array,
    find_escaping_point,
    orbit,
)

__version__ = "0.1.0"
