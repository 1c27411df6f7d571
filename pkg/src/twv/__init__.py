"""Twisted Alexander invariants of symmetric-power holonomy lifts and volume estimates."""
from .fixtures import LinkData, figure8, load_example, whitehead
from .laurent import LaurentMatrix, LaurentPoly, PrecisionError, compare_up_to_unit, laurent_det
from .reps import SignAssignment, Sl2Rep, lift_rep, sym_power, verify_rep
from .volume import (EstimateTable, Pipeline, SeriesConfig, VolumeEstimate, corrected_ratio,
                     estimator, minus_one_series, run_series, tilde_value)
from .wada import WadaInvariant, cross_check_epsilon, limit_value, wada_invariant
from .words import (AlphaMap, GroupRingElement, Presentation, Word, fox_derivative,
                    parse_presentation, parse_word, validate_presentation)

__version__ = "0.1.0"

__all__ = [
    "AlphaMap", "EstimateTable", "GroupRingElement", "LaurentMatrix", "LaurentPoly", "LinkData",
    "Pipeline", "PrecisionError", "Presentation", "SeriesConfig", "SignAssignment", "Sl2Rep",
    "VolumeEstimate", "WadaInvariant", "Word", "compare_up_to_unit", "corrected_ratio",
    "cross_check_epsilon", "estimator", "figure8", "fox_derivative", "laurent_det", "lift_rep",
    "limit_value", "load_example", "minus_one_series", "parse_presentation", "parse_word",
    "run_series", "sym_power", "tilde_value", "validate_presentation", "verify_rep",
    "wada_invariant", "whitehead",
]
