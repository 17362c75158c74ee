"""Reasoning toolkit for quantifier-free topological constraint
languages with connectedness predicates: parsing, finite Aleksandrov
(quasi-saw) semantics, bounded satisfiability search, exact planar
polygon semantics, and generators for the standard formula families.
"""

from .parser import ParseError, parse, parse_term
from .quasisaw import (
    FrameClass,
    QsModel,
    QuasiSaw,
    RcSet,
    check,
    classify_frame,
    contact,
    full_points,
    is_connected,
    is_interior_connected,
    make_frame,
    model_from_json,
    model_to_json,
    oracle_check,
    rc_complement,
    rc_expand,
    rc_product,
    rc_sum,
)
from .solver import (
    Bounds,
    ResourceExhausted,
    Sat,
    SolveResult,
    UnsatUpTo,
    enumerate_models,
    solve,
    solve_rc3,
    solve_rcp3,
    verify,
)
from .syntax import (
    Formula,
    LanguageId,
    Polarity,
    PolarityReport,
    Term,
    eliminate_contact,
    language_of,
    polarity,
    to_bullet,
    to_source,
    variables,
)

__all__ = [name for name in dir() if not name.startswith("_")]
