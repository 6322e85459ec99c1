"""Greedy linear numeration systems, their automata, and divisibility languages.

The package is organised bottom-up:

- ``numera.numeration``: exact integer arithmetic for linear recurrence
  sequences, greedy representations, and residue periodicity.
- ``numera.automata``: a partial-DFA/NFA kernel (trim, minimize, product,
  equivalence, SCCs, canonical forms, serialization).
- ``numera.numlang``: automata recognising the greedy representations of a
  numeration system, plus structural checks on them.
- ``numera.divisibility``: Hankel analysis mod m, the two constructions of
  the divisibility automaton, and the state-count verification report.
- ``numera.cli``: the ``numera`` command-line front end.
"""

from numera.numeration import (
    PRESET_NAMES,
    InvalidSystemError,
    NumerationSystem,
    ResiduePeriod,
    Word,
    alphabet_bound_profile,
    compute_alphabet_bound,
    is_greedy,
    iter_greedy_multiples,
    load_system_definition,
    make_system,
    preset_system,
    rep,
    residue_period,
    term,
    val,
    word_from_string,
    word_to_string,
)
from numera.automata import (
    AlphabetMismatchError,
    Dfa,
    Nfa,
    SccDecomposition,
    canonical_form,
    determinize,
    empty_language_dfa,
    enumerate_accepted,
    equivalent,
    first_divergence,
    intersect,
    is_trim,
    iter_accepted,
    minimize,
    minimize_brzozowski,
    reverse,
    scc,
    states_with_infinite_right_language,
    to_dot,
    transition_table,
    trim,
)
from numera.numlang import (
    HypothesisReport,
    InadmissibleDirectiveError,
    build_bertrand_automaton,
    build_preset_automaton,
    check_hypotheses,
    hypothesis_report_json,
    preset_pair,
    verify_numeration_automaton,
)
from numera.divisibility import (
    HankelAnalysis,
    VerificationReport,
    build_divisibility_direct,
    build_divisibility_lsd,
    equiv_um,
    hankel_analysis,
    hankel_determinant_profile,
    hankel_matrix,
    image_count_at_order,
    k_um,
    lower_bound,
    lsd_value_automaton,
    mod_recurrence_coeffs,
    raw_divisibility_product,
    s_um,
    smith_normal_form,
    verify_theorem,
)

__all__ = [name for name in dir() if not name.startswith("_")]
