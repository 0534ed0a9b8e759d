"""Exact FI-homology of finitely presented FI-modules.

A module is stored degreewise up to a truncation N; homology comes from the
Koszul complex and every invariant is reported as a certified interval.
"""

from .exactla import RATIONALS, FieldSpec, prime_field, rank, set_backend, use_backend
from .fimodule import (
    Presentation,
    Relation,
    RelationTerm,
    TruncatedFIModule,
    WindowError,
    free_module,
    from_presentation,
    iterated_derivative,
    iterated_shift,
    shift,
    sub_generated_below,
    zero_module,
)
from .fincat import Injection, Permutation, sorted_wedge_sign
from .invariants import (
    Estimate,
    PresentationBounds,
    Study,
    Verdict,
    invariant_report,
    theorem_suite,
)
from .io import dump_module_file, parse_module_file
from .koszul import cone_phi_check, homology_table, les_exactness_check

__version__ = "0.1.0"

__all__ = [
    "Estimate",
    "FieldSpec",
    "Injection",
    "Permutation",
    "Presentation",
    "PresentationBounds",
    "RATIONALS",
    "Relation",
    "RelationTerm",
    "Study",
    "TruncatedFIModule",
    "Verdict",
    "WindowError",
    "cone_phi_check",
    "dump_module_file",
    "free_module",
    "from_presentation",
    "homology_table",
    "invariant_report",
    "iterated_derivative",
    "iterated_shift",
    "les_exactness_check",
    "parse_module_file",
    "prime_field",
    "rank",
    "set_backend",
    "shift",
    "sorted_wedge_sign",
    "sub_generated_below",
    "theorem_suite",
    "use_backend",
    "zero_module",
]
