"""Exact cohomological invariants and ddbar-type criteria for nilmanifolds and raw double complexes."""

from .cohomology import CohomologyTable, cohomology_table
from .criteria import CriteriaReport, criteria_report
from .doublecomplex import DoubleComplex, dump_raw_complex, load_raw_complex
from .exterior import Form, e, parse_form
from .metrics import check_metric, find_balanced
from .scalar import Scalar, parse_assignment, parse_scalar
from .structure import (
    StructureEquations,
    build_complex,
    change_coframe,
    load_manifold,
    parse_manifold,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "CohomologyTable",
    "CriteriaReport",
    "DoubleComplex",
    "Form",
    "Scalar",
    "StructureEquations",
    "build_complex",
    "change_coframe",
    "check_metric",
    "cohomology_table",
    "criteria_report",
    "dump_raw_complex",
    "e",
    "find_balanced",
    "load_manifold",
    "load_raw_complex",
    "parse_assignment",
    "parse_form",
    "parse_manifold",
    "parse_scalar",
    "validate",
]
