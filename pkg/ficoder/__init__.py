"""
Functional index coding toolkit.

Builds confusion graphs of functional index coding instances, computes
optimal code sizes by graph coloring, synthesizes and verifies codes, and
extends them to codes that correct symbol errors.

Usage:
    from ficoder import load_instance_file, build_graph, exact_chromatic, synthesize

    inst = load_instance_file("fixtures/two_receiver_majority.json")
    graph = build_graph(inst)
    result = exact_chromatic(graph)
    code = synthesize(inst, result.coloring, graph=graph)
"""

from ficoder.codec import (
    Fic,
    decode,
    encode,
    fic_from_assignment,
    fic_from_codewords,
    fic_from_matrix,
    is_perfect,
    synthesize,
    verify_fic,
)
from ficoder.coloring import Coloring, code_size_bounds, exact_chromatic, mu_bound
from ficoder.confusion import ConfusionGraph, build_graph, confusable, or_power
from ficoder.ecc import builtin_code, concatenate, simulate_errors, verify_delta
from ficoder.exceptions import FicoderError
from ficoder.models import FicpInstance, lift_instance
from ficoder.validator import load_instance_file, validate_instance_file, validate_instance_text

__version__ = "0.1.0"

__all__ = [
    "Fic",
    "decode",
    "encode",
    "fic_from_assignment",
    "fic_from_codewords",
    "fic_from_matrix",
    "is_perfect",
    "synthesize",
    "verify_fic",
    "Coloring",
    "code_size_bounds",
    "exact_chromatic",
    "mu_bound",
    "ConfusionGraph",
    "build_graph",
    "confusable",
    "or_power",
    "builtin_code",
    "concatenate",
    "simulate_errors",
    "verify_delta",
    "FicoderError",
    "FicpInstance",
    "lift_instance",
    "load_instance_file",
    "validate_instance_file",
    "validate_instance_text",
    "__version__",
]
