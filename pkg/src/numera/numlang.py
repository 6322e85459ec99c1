"""Automata recognising greedy numeration languages, and checks on them.

No general construction from an arbitrary recurrence is attempted: automata
come from explicit presets, or from a canonical expansion directive, and are
then verified against the system's greedy predicate by exhaustive comparison
up to a length bound.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from numera.automata import Dfa, first_divergence, is_trim, iter_accepted, scc
from numera.numeration import (
    InvalidSystemError,
    NumerationSystem,
    Word,
    iter_greedy_multiples,
    preset_system,
    word_to_string,
)


def _lbonacci_automaton(ell: int) -> Dfa:
    """Chain automaton rejecting a run of ell consecutive 1-digits."""
    transitions = {}
    for q in range(ell):
        transitions[(q, 0)] = 0
        if q + 1 < ell:
            transitions[(q, 1)] = q + 1
    return Dfa(ell, 2, transitions, 0, frozenset(range(ell)))


def build_preset_automaton(name: str) -> Dfa:
    """Greedy-language automaton for a preset system, states all final.

    ``fibonacci`` (alias ``lbonacci:2``): two states, 1 toggles forward,
    0 returns to the start.  ``lbonacci:<l>``: the length-l chain.
    ``sqrt2plus1``: digit 2 must be followed by 0 (or end the word).
    """
    if name == "fibonacci":
        return _lbonacci_automaton(2)
    if name.startswith("lbonacci:"):
        ell = int(name.split(":", 1)[1])
        if ell < 2:
            raise InvalidSystemError("lbonacci order must be at least 2")
        return _lbonacci_automaton(ell)
    if name == "sqrt2plus1":
        return Dfa(2, 3, {(0, 0): 0, (0, 1): 0, (0, 2): 1, (1, 0): 0}, 0, frozenset({0, 1}))
    raise InvalidSystemError(f"unknown preset {name!r}")


def preset_pair(name: str) -> tuple[NumerationSystem, Dfa]:
    """The preset system together with its greedy-language automaton."""
    return preset_system(name), build_preset_automaton(name)


class InadmissibleDirectiveError(ValueError):
    """The directive is not a lexicographically admissible expansion."""


def _directive_digit(preperiod: Word, period: Word, index: int) -> int:
    if index < len(preperiod):
        return preperiod[index]
    if period:
        return period[(index - len(preperiod)) % len(period)]
    return 0


def build_bertrand_automaton(preperiod, period=()) -> Dfa:
    """Canonical automaton of an expansion directive t_1 t_2 t_3 ...

    A finite directive is passed entirely in ``preperiod`` (the greedy
    expansion of 1: the maximal digit at the last position has no outgoing
    edge).  An eventually periodic directive repeats ``period`` forever (the
    quasi-greedy expansion: the maximal digit at the last position wraps to
    the period entry).  State j reads digits below t_{j+1} back to the start
    state and digit t_{j+1} onward to state j+1.  All states are final.

    Admissibility requires every shifted tail of the directive to stay
    lexicographically at or below the directive itself; one window of
    2n + period + 1 positions decides each comparison.
    """
    preperiod = tuple(int(d) for d in preperiod)
    period = tuple(int(d) for d in period)
    n = len(preperiod) + len(period)
    if n == 0:
        raise InadmissibleDirectiveError("directive must not be empty")
    if any(d < 0 for d in preperiod + period):
        raise InadmissibleDirectiveError("directive digits must be non-negative")
    if _directive_digit(preperiod, period, 0) < 1:
        raise InadmissibleDirectiveError("leading directive digit must be at least 1")
    if period and all(d == 0 for d in period):
        raise InadmissibleDirectiveError("period must contain a nonzero digit")
    window = 2 * n + max(len(period), 1) + 1
    for shift in range(1, n + 1):
        for i in range(window):
            tail = _directive_digit(preperiod, period, shift + i)
            head = _directive_digit(preperiod, period, i)
            if tail < head:
                break
            if tail > head:
                raise InadmissibleDirectiveError(
                    f"shift {shift} exceeds the directive at position {i} "
                    f"({tail} > {head})"
                )
    sequence = preperiod + period
    alphabet_size = max(sequence) + 1
    transitions = {}
    for j, t in enumerate(sequence):
        for c in range(t):
            transitions[(j, c)] = 0
        if j + 1 < n:
            transitions[(j, t)] = j + 1
        elif period:
            transitions[(j, t)] = len(preperiod)
    return Dfa(n, alphabet_size, transitions, 0, frozenset(range(n)))


def verify_numeration_automaton(
    a: Dfa, system: NumerationSystem, max_length: int
) -> tuple[bool, Word | None]:
    """Exhaustively compare ``a`` with the greedy predicate up to a length.

    Both the automaton's accepted words and the greedy words are enumerated
    in radix order and merged; together the two streams cover every word of
    length <= max_length (a word in neither stream is correctly rejected by
    both sides).  Returns (True, None) or (False, shortest offending word).
    """
    if a.alphabet_size != system.alphabet_bound:
        raise ValueError(
            f"alphabet mismatch: automaton {a.alphabet_size}, "
            f"system {system.alphabet_bound}"
        )
    witness = first_divergence(
        iter_accepted(a, max_length), iter_greedy_multiples(system, max_length)
    )
    return witness is None, witness


@dataclass(frozen=True)
class HypothesisReport:
    """Structural properties of a greedy-language automaton.

    ``h1_holds``: the automaton is a single non-trivial strongly connected
    component.  ``c_u_states``: the component of the initial state.
    ``h2_holds``: every pair of distinct component states has a word whose
    two runs end on opposite sides of the component boundary (a dying run
    counts as outside); witnesses are recorded per pair.
    ``zero_return_bounds``: per component state, the least N from which all
    longer zero-runs sit at the initial state (None if there is none within
    state_count + 1 steps).  ``one_step_in_cu``: digit 1 keeps the initial
    state inside its component.
    """

    h1_holds: bool
    c_u_states: frozenset[int]
    h2_holds: bool
    h2_witnesses: dict[tuple[int, int], Word]
    zero_return_bounds: dict[int, int | None]
    one_step_in_cu: bool


def _boundary_witness(a: Dfa, component: frozenset[int], p: int, q: int) -> Word | None:
    """Shortest word sending exactly one of p, q outside the component.

    Once a run leaves a strongly connected component it cannot re-enter, so
    pairs with both runs outside are dead ends and pairs with equal states
    can never separate.
    """
    start = (p, q)
    parents: dict[tuple[int, int], tuple] = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        s, t = pair
        for d in range(a.alphabet_size):
            ns, nt = a.step(s, d), a.step(t, d)
            inside_s = ns is not None and ns in component
            inside_t = nt is not None and nt in component
            if inside_s != inside_t:
                word = [d]
                cursor = pair
                while parents[cursor] is not None:
                    cursor, digit = parents[cursor]
                    word.append(digit)
                return tuple(reversed(word))
            if inside_s and inside_t and ns != nt and (ns, nt) not in parents:
                parents[(ns, nt)] = (pair, d)
                queue.append((ns, nt))
    return None


def check_hypotheses(a: Dfa) -> HypothesisReport:
    """Check the structural hypotheses on a trim greedy-language automaton."""
    if not is_trim(a):
        raise ValueError("automaton must be trim")
    decomposition = scc(a)
    component_index = decomposition.component_of[a.initial]
    component = frozenset(decomposition.components[component_index])
    h1 = len(decomposition.components) == 1 and decomposition.non_trivial[0]
    witnesses: dict[tuple[int, int], Word] = {}
    h2 = True
    for p, q in combinations(sorted(component), 2):
        witness = _boundary_witness(a, component, p, q)
        if witness is None:
            h2 = False
        else:
            witnesses[(p, q)] = witness
    zero_loop = a.rows[a.initial].get(0) == a.initial
    bound = a.state_count + 1
    zero_return: dict[int, int | None] = {}
    for p in sorted(component):
        found = None
        if zero_loop:
            state: int | None = p
            for steps in range(bound + 1):
                if state == a.initial:
                    found = steps
                    break
                state = a.step(state, 0)
                if state is None:
                    break
        zero_return[p] = found
    one_step = a.rows[a.initial].get(1) in component
    return HypothesisReport(h1, component, h2, witnesses, zero_return, one_step)


def hypothesis_report_json(report: HypothesisReport) -> dict:
    """JSON-ready view with keys h1, h2, witnesses, one_step_in_cu."""
    return {
        "h1": report.h1_holds,
        "h2": report.h2_holds,
        "witnesses": {
            f"{p},{q}": word_to_string(word)
            for (p, q), word in sorted(report.h2_witnesses.items())
        },
        "one_step_in_cu": report.one_step_in_cu,
    }
