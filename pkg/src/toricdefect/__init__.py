"""Exact combinatorial toolkit for smooth toric Fano varieties.

Computes the Lefschetz defect from fan data, runs special minimal model
programs for the negative of a torus-invariant prime divisor entirely on
fans, and batch-verifies the structure theorems that constrain varieties
with small defect.
"""

from .fan import Fan, fan_from_polytope, local_properties, make_fan, walls
from .defect import c_of_divisor, lefschetz_defect, restriction_kernel_oracle
from .mmp import classify_run, special_mmp, type_b_structure
from .verify import (
    verify_codim_theorem,
    verify_main_dichotomy,
    verify_small_dimension_facts,
    verify_toric_proposition,
)

__version__ = "0.1.0"

__all__ = [
    "Fan",
    "c_of_divisor",
    "classify_run",
    "fan_from_polytope",
    "lefschetz_defect",
    "local_properties",
    "make_fan",
    "restriction_kernel_oracle",
    "special_mmp",
    "type_b_structure",
    "verify_codim_theorem",
    "verify_main_dichotomy",
    "verify_small_dimension_facts",
    "verify_toric_proposition",
    "walls",
]
