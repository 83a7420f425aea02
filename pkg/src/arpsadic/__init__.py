"""Arnoux-Rauzy-Poincare continued fractions, the S-adic words they direct and
the bispecial factors of those words."""

from .arithmetic import (
    PartitionCell,
    Scalar,
    SimplexVector,
    UnimodularMatrix,
    classify,
    named_matrix,
    normalize,
    orbit,
    parse_vector,
    step,
)
from .automaton import Automaton, accepts, build_G, build_markov_nfa, determinize, isomorphic, minimize
from .convergence import ConeProduct, balance_report, cone_diameter, frequency_report
from .errors import *  # noqa: F401,F403
from .factors import (
    ExtensionTable,
    FactorLanguage,
    build_language,
    check_bounds,
    classify_bispecial,
    complexity_bruteforce,
    complexity_profile,
    multiplicity,
)
from .genealogy import (
    alternance_report,
    antecedent_bispecial,
    classify_history,
    compare_abelian,
    desubstitute,
    empty_word_table,
    extended_images,
    life,
)
from .sadic import DirectiveSequence, SadicWord, classify_type, directive_from_vector, word_from_labels
from .substitutions import AbelianVector, Substitution, abelianize, named_substitution, parse_labels

__version__ = "0.1.0"
