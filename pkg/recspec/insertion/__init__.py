from recspec.insertion.construction import (
    insert,
    insertion_mask,
    largest_executable_index,
    required_source_length,
    strip_insertions,
    verify_lemma_g,
)
from recspec.insertion.ell import (
    achieved_rates,
    build_ell_sequence,
    ceil_exp,
    fit_ell_sequence,
    iter_ell,
)
from recspec.insertion.schemas import EllSequence, InsertionSpec, LemmaReport

__all__ = [
    "EllSequence",
    "InsertionSpec",
    "LemmaReport",
    "achieved_rates",
    "build_ell_sequence",
    "ceil_exp",
    "fit_ell_sequence",
    "insert",
    "insertion_mask",
    "iter_ell",
    "largest_executable_index",
    "required_source_length",
    "strip_insertions",
    "verify_lemma_g",
]
