"""Substitution shifts of free-monoid endomorphisms, erasing ones included."""

from .core import (
    Alphabet,
    AlphabetError,
    CapExceeded,
    ImageTooLong,
    Morphism,
    ParseError,
    SubshiftError,
    apply,
    compose,
    iterate,
    load_morphism,
    morphism,
    parse_morphism,
    power,
    serialize,
)
from .decide import (
    Verdict,
    find_decomposition,
    growing_periodic_orbits,
    is_aperiodic,
    is_elementary,
    is_fully_recognizable,
    is_irreducible,
    is_minimal,
    is_periodic_shift,
    period_bound,
)
from .graph import build_graph, classify_letters, languages_equal, shift_nonempty
from .langtools import KERNEL, factors_oracle, language_factors, member_language, member_shift_language
from .points import enumerate_fixed_orbits, enumerate_quasi_fixed_orbits, expand
from .transforms import (
    cobham_normalize,
    higher_block,
    power_stabilize,
    primitive_conjugate,
    rauzy_refine,
    return_words,
)

__all__ = [
    "Alphabet",
    "AlphabetError",
    "CapExceeded",
    "ImageTooLong",
    "Morphism",
    "ParseError",
    "SubshiftError",
    "apply",
    "compose",
    "iterate",
    "load_morphism",
    "morphism",
    "parse_morphism",
    "power",
    "serialize",
    "Verdict",
    "find_decomposition",
    "growing_periodic_orbits",
    "is_aperiodic",
    "is_elementary",
    "is_fully_recognizable",
    "is_irreducible",
    "is_minimal",
    "is_periodic_shift",
    "period_bound",
    "build_graph",
    "classify_letters",
    "languages_equal",
    "shift_nonempty",
    "KERNEL",
    "factors_oracle",
    "language_factors",
    "member_language",
    "member_shift_language",
    "enumerate_fixed_orbits",
    "enumerate_quasi_fixed_orbits",
    "expand",
    "cobham_normalize",
    "higher_block",
    "power_stabilize",
    "primitive_conjugate",
    "rauzy_refine",
    "return_words",
]

__version__ = "0.1.0"
