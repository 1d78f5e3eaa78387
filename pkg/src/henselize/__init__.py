"""Exact computations in the henselization of a p-adic valued field.

The library adjoins Hensel-coded zeros to (Q, v_p) one at a time, turning
each into the special zero of a special polynomial via Newton-polygon
transforms, and keeps equality, valuation, and immediate descriptions
decidable throughout the resulting extension tower.
"""

from .extension import (
    ExtElement,
    HenselZeroResult,
    InternalComputationError,
    SpecialExtension,
    Tower,
    choose_exponent,
    describe_to_base,
    merge_towers,
)
from .fields import PAdicRationals, ValuedField, check_prime, padic_val
from .hensel import (
    Exact,
    Extended,
    HenselCode,
    HenselCodeError,
    MobiusForm,
    SpecialPoly,
    SpecialPolyError,
    as_special,
    immediate_from_isolated_slope,
    shift_to_isolated_slope,
    specialize,
    unit_factor_polynomial,
    validate_hensel_code,
)
from .newton import (
    NewtonPolygon,
    Segment,
    newton_polygon,
    polygon_from_vals,
    root_valuations,
)
from .oracle import (
    DEFAULT_PRECISION,
    ModularApprox,
    PrecisionError,
    check_description,
    evaluate_approx,
    hensel_lift,
    special_zero_approx,
)
from .parsing import ParseError, parse_element, parse_polynomial
from .polynomials import Matrix, Polynomial, char_poly, companion_matrix, mat_poly_eval
from .session import CommandResult, Session
from .valgroup import Val

__version__ = "0.1.0"

__all__ = [
    "CommandResult",
    "DEFAULT_PRECISION",
    "Exact",
    "ExtElement",
    "Extended",
    "HenselCode",
    "HenselCodeError",
    "HenselZeroResult",
    "InternalComputationError",
    "Matrix",
    "MobiusForm",
    "ModularApprox",
    "NewtonPolygon",
    "PAdicRationals",
    "ParseError",
    "Polynomial",
    "PrecisionError",
    "Segment",
    "Session",
    "SpecialExtension",
    "SpecialPoly",
    "SpecialPolyError",
    "Tower",
    "Val",
    "ValuedField",
    "as_special",
    "char_poly",
    "check_description",
    "check_prime",
    "choose_exponent",
    "companion_matrix",
    "describe_to_base",
    "evaluate_approx",
    "hensel_lift",
    "immediate_from_isolated_slope",
    "mat_poly_eval",
    "merge_towers",
    "newton_polygon",
    "padic_val",
    "parse_element",
    "parse_polynomial",
    "polygon_from_vals",
    "root_valuations",
    "shift_to_isolated_slope",
    "special_zero_approx",
    "specialize",
    "unit_factor_polynomial",
    "validate_hensel_code",
]
