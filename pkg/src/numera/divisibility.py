"""Divisibility languages: Hankel analysis mod m and automaton constructions.

For a system U and modulus m, the words of interest are the greedy
representations (leading zeros allowed) of multiples of m.  A closed-form
state-count prediction comes from the Hankel matrices H_t = (U_{i+j}) read
mod m; the constructions below build the automaton two independent ways so
the prediction can be checked against reality.

Determinants and Smith normal forms are computed over the exact integers and
only then reduced mod m; eliminating mod a composite m directly would lose
rank information.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from math import gcd, prod

from numera.automata import (
    Dfa,
    determinize,
    equivalent,
    first_divergence,
    intersect,
    iter_accepted,
    minimize,
    reverse,
    states_with_infinite_right_language,
)
from numera.numeration import (
    NumerationSystem,
    ResiduePeriod,
    Word,
    iter_greedy_multiples,
    rep,
    residue_period,
    term,
    val,
)
from numera.numlang import HypothesisReport, check_hypotheses

BRUTE_FORCE_BUDGET = 10**6


def hankel_matrix(system: NumerationSystem, t: int) -> tuple[tuple[int, ...], ...]:
    """t x t matrix with entry (i, j) = U_{i+j}, exact integers."""
    if t < 1:
        raise ValueError("matrix order must be positive")
    return tuple(
        tuple(term(system, i + j) for j in range(t)) for i in range(t)
    )


def _determinant(matrix) -> int:
    """Exact integer determinant by fraction-free Bareiss elimination."""
    n = len(matrix)
    work = [list(row) for row in matrix]
    sign = 1
    previous_pivot = 1
    for i in range(n - 1):
        if work[i][i] == 0:
            for r in range(i + 1, n):
                if work[r][i] != 0:
                    work[i], work[r] = work[r], work[i]
                    sign = -sign
                    break
            else:
                return 0
        pivot = work[i][i]
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                work[r][c] = (
                    work[r][c] * pivot - work[r][i] * work[i][c]
                ) // previous_pivot
            work[r][i] = 0
        previous_pivot = pivot
    return sign * work[-1][-1]


def hankel_determinant_profile(system: NumerationSystem, m: int) -> tuple[int, ...]:
    """det H_t mod m for t = 1..K (K the recurrence order)."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    order = system.order
    return tuple(
        _determinant(hankel_matrix(system, t)) % m for t in range(1, order + 1)
    )


def k_um(system: NumerationSystem, m: int) -> int:
    """Largest t <= K with det H_t nonzero mod m.

    Always at least 1 because det H_1 = U_0 = 1.  Beyond K every Hankel
    matrix is singular over the integers, so larger t never qualify.
    """
    profile = hankel_determinant_profile(system, m)
    best = 0
    for t, residue in enumerate(profile, start=1):
        if residue != 0:
            best = t
    if best == 0:
        raise RuntimeError("det H_1 = U_0 = 1 cannot vanish mod m")
    return best


def smith_normal_form(matrix) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of a square integer matrix.

    Classical elimination: bring the absolutely smallest entry to the pivot,
    clear its row and column by euclidean steps, then force the pivot to
    divide the remaining block before recursing.  Exact integers throughout.
    """
    work = [[int(v) for v in row] for row in matrix]
    n = len(work)
    if any(len(row) != n for row in work):
        raise ValueError("matrix must be square")
    invariants: list[int] = []
    for t in range(n):
        while True:
            pivot_pos = None
            for i in range(t, n):
                for j in range(t, n):
                    v = work[i][j]
                    if v != 0 and (
                        pivot_pos is None
                        or abs(v) < abs(work[pivot_pos[0]][pivot_pos[1]])
                    ):
                        pivot_pos = (i, j)
            if pivot_pos is None:
                invariants.extend([0] * (n - t))
                return tuple(invariants)
            pi, pj = pivot_pos
            if pi != t:
                work[t], work[pi] = work[pi], work[t]
            if pj != t:
                for row in work:
                    row[t], row[pj] = row[pj], row[t]
            pivot = work[t][t]
            dirty = False
            for i in range(t + 1, n):
                if work[i][t]:
                    q = work[i][t] // pivot
                    for j in range(t, n):
                        work[i][j] -= q * work[t][j]
                    dirty = dirty or work[i][t] != 0
            for j in range(t + 1, n):
                if work[t][j]:
                    q = work[t][j] // pivot
                    for i in range(t, n):
                        work[i][j] -= q * work[i][t]
                    dirty = dirty or work[t][j] != 0
            if dirty:
                continue
            offender = next(
                (
                    i
                    for i in range(t + 1, n)
                    for j in range(t + 1, n)
                    if work[i][j] % pivot != 0
                ),
                None,
            )
            if offender is None:
                break
            for j in range(t, n):
                work[t][j] += work[offender][j]
        invariants.append(abs(work[t][t]))
    return tuple(invariants)


def _image_count_brute(matrix, m: int) -> int:
    """|{Hx mod m}| by enumerating all of (Z_m)^n.  Exponential; budgeted."""
    n = len(matrix)
    images = set()
    for x in itertools.product(range(m), repeat=n):
        images.add(tuple(sum(row[j] * x[j] for j in range(n)) % m for row in matrix))
    return len(images)


def _image_count_smith(invariants, m: int) -> int:
    return prod(m // gcd(d, m) for d in invariants)


def s_um(system: NumerationSystem, m: int) -> int:
    """Number of residue vectors b with H_k x = b solvable mod m (k = k_um).

    Computed from the Smith invariant factors of H_k; cross-checked by brute
    enumeration whenever m^k fits the budget.  A mismatch would mean a bug in
    one of the two routes and is raised as an internal error.
    """
    k = k_um(system, m)
    matrix = hankel_matrix(system, k)
    count = _image_count_smith(smith_normal_form(matrix), m)
    if m**k <= BRUTE_FORCE_BUDGET:
        brute = _image_count_brute(matrix, m)
        if brute != count:
            raise RuntimeError(
                f"image count mismatch: smith {count}, enumeration {brute}"
            )
    return count


def image_count_at_order(system: NumerationSystem, m: int, order: int) -> int:
    """Image size of H_order over (Z_m)^order, Smith route with brute check.

    Stabilises for order >= k_um: enlarging the matrix beyond the mod-m rank
    adds no new reachable residue vectors.
    """
    if order < 1:
        raise ValueError("matrix order must be positive")
    matrix = hankel_matrix(system, order)
    count = _image_count_smith(smith_normal_form(matrix), m)
    if m**order <= BRUTE_FORCE_BUDGET:
        brute = _image_count_brute(matrix, m)
        if brute != count:
            raise RuntimeError(
                f"image count mismatch: smith {count}, enumeration {brute}"
            )
    return count


def mod_recurrence_coeffs(
    system: NumerationSystem, m: int
) -> tuple[int, ...] | None:
    """Coefficients c with U_{n+k} = c_0 U_n + ... + c_{k-1} U_{n+k-1} mod m.

    Solves H_k c = (U_k, ..., U_{2k-1}) mod m by exhaustive search (first
    solution in lexicographic order), then validates the recurrence over a
    full preperiod + period + k window, which settles it for every n.
    Returns None when m^k exceeds the search budget or nothing validates.
    """
    k = k_um(system, m)
    if m**k > BRUTE_FORCE_BUDGET:
        return None
    matrix = hankel_matrix(system, k)
    rhs = tuple(term(system, k + i) % m for i in range(k))
    rp = residue_period(system, m)
    horizon = rp.preperiod + rp.period + k
    for candidate in itertools.product(range(m), repeat=k):
        if any(
            sum(row[j] * candidate[j] for j in range(k)) % m != rhs[i]
            for i, row in enumerate(matrix)
        ):
            continue
        if all(
            term(system, n + k) % m
            == sum(candidate[i] * term(system, n + i) for i in range(k)) % m
            for n in range(horizon + 1)
        ):
            return candidate
    return None


@dataclass(frozen=True)
class HankelAnalysis:
    """Everything the prediction needs, for one (system, m) pair."""

    modulus: int
    k: int
    hankel: tuple[tuple[int, ...], ...]
    smith_invariants: tuple[int, ...]
    s_um: int
    mod_recurrence: tuple[int, ...] | None
    det_residue_profile: tuple[int, ...]


def hankel_analysis(system: NumerationSystem, m: int) -> HankelAnalysis:
    """Bundle k_um, the Hankel matrix, its Smith invariants, and S."""
    k = k_um(system, m)
    matrix = hankel_matrix(system, k)
    return HankelAnalysis(
        modulus=m,
        k=k,
        hankel=matrix,
        smith_invariants=smith_normal_form(matrix),
        s_um=s_um(system, m),
        mod_recurrence=mod_recurrence_coeffs(system, m),
        det_residue_profile=hankel_determinant_profile(system, m),
    )


def raw_divisibility_product(
    a_u: Dfa,
    system: NumerationSystem,
    m: int,
    residue_length: int | None = None,
    mod_coeffs: tuple[int, ...] | None = None,
) -> Dfa:
    """Reachable product of a_u with residue vectors, before minimization.

    Each state pairs a state of a_u with the vector of val(w 0^s) mod m for
    s = 0..R-1.  Appending digit d shifts the vector and tops it up through
    the recurrence: the default R is the recurrence order K with the integer
    coefficients; callers holding validated mod-m coefficients of length
    k < K may shorten the vector accordingly.  A state is final when the base
    state is final and the current value residue is 0.
    """
    if a_u.alphabet_size != system.alphabet_bound:
        raise ValueError(
            f"alphabet mismatch: automaton {a_u.alphabet_size}, "
            f"system {system.alphabet_bound}"
        )
    if m < 2:
        raise ValueError("modulus must be at least 2")
    if residue_length is None:
        length, coeffs = system.order, system.recurrence_coefficients
    else:
        if mod_coeffs is None or len(mod_coeffs) != residue_length:
            raise ValueError("residue_length requires matching mod_coeffs")
        length, coeffs = residue_length, mod_coeffs
    shifts = [term(system, s) % m for s in range(length)]
    start = (a_u.initial, (0,) * length)
    ids: dict[tuple[int, tuple[int, ...]], int] = {start: 0}
    queue = deque([start])
    transitions: dict[tuple[int, int], int] = {}
    finals = set()
    while queue:
        state = queue.popleft()
        i = ids[state]
        q, residues = state
        if q in a_u.finals and residues[0] == 0:
            finals.add(i)
        wrap = sum(c * b for c, b in zip(coeffs, residues))
        for d in range(a_u.alphabet_size):
            nq = a_u.rows[q].get(d)
            if nq is None:
                continue
            shifted = tuple(
                (residues[s + 1] + d * shifts[s]) % m for s in range(length - 1)
            )
            key = (nq, shifted + ((wrap + d * shifts[length - 1]) % m,))
            if key not in ids:
                ids[key] = len(ids)
                queue.append(key)
            transitions[(i, d)] = ids[key]
    return Dfa(len(ids), a_u.alphabet_size, transitions, 0, frozenset(finals))


def build_divisibility_direct(
    a_u: Dfa,
    system: NumerationSystem,
    m: int,
    residue_length: int | None = None,
    mod_coeffs: tuple[int, ...] | None = None,
) -> Dfa:
    """Trim minimal automaton of the divisibility language, residue route."""
    return minimize(
        raw_divisibility_product(a_u, system, m, residue_length, mod_coeffs)
    )


def lsd_value_automaton(system: NumerationSystem, m: int) -> Dfa:
    """Complete DFA reading digits least-significant first, accepting value 0 mod m.

    States pair a phase below preperiod + period with a running residue; the
    phase tracks which U_n the next digit multiplies and wraps into the
    periodic part.  State count is exactly m * (preperiod + period).
    """
    rp = residue_period(system, m)
    span = rp.preperiod + rp.period
    alphabet_size = system.alphabet_bound
    transitions: dict[tuple[int, int], int] = {}
    for phase in range(span):
        weight = rp.residues[phase]
        next_phase = phase + 1 if phase + 1 < span else rp.preperiod
        for r in range(m):
            base = phase * m + r
            for d in range(alphabet_size):
                transitions[(base, d)] = next_phase * m + (r + d * weight) % m
    finals = frozenset(phase * m for phase in range(span))
    return Dfa(span * m, alphabet_size, transitions, 0, finals)


def build_divisibility_lsd(a_u: Dfa, system: NumerationSystem, m: int) -> Dfa:
    """Trim minimal divisibility automaton, via the least-significant route.

    Reverse the LSD value automaton into most-significant reading order,
    determinize, intersect with the greedy-language automaton, minimize.
    Independent of the residue-vector construction except for sharing a_u.
    """
    msd_value = determinize(reverse(lsd_value_automaton(system, m)))
    return minimize(intersect(msd_value, a_u))


def equiv_um(
    system: NumerationSystem, a_u: Dfa, m: int, u: Word, v: Word
) -> bool:
    """Right-congruence test: same a_u run state (or both dead) and matching
    values of u 0^i and v 0^i mod m for every i below k_um."""
    if a_u.run(u) != a_u.run(v):
        return False
    k = k_um(system, m)
    for i in range(k):
        pad = (0,) * i
        if val(system, u + pad) % m != val(system, v + pad) % m:
            return False
    return True


def lower_bound(system: NumerationSystem, m: int) -> int:
    """Any automaton for the divisibility language needs at least |rep(m)| states."""
    if m < 1:
        raise ValueError("modulus must be positive")
    return len(rep(system, m))


@dataclass(frozen=True)
class VerificationReport:
    """Prediction versus construction for one (system, m) pair.

    ``violations`` lists every asserted invariant that failed; the state
    count assertion only applies when both structural hypotheses hold and
    the residues are purely periodic, otherwise counts are informational.
    """

    system_name: str | None
    modulus: int
    analysis: HankelAnalysis
    period: ResiduePeriod
    hypotheses: HypothesisReport
    c_u_size: int
    predicted_infinite_count: int
    constructed_total_count: int
    constructed_infinite_count: int
    constructed_finite_count: int
    purely_periodic: bool
    lower_bound: int
    oracle_checked_to_length: int
    oracle_counterexample: Word | None
    cross_construction_equivalent: bool
    cross_counterexample: Word | None

    def violations(self) -> tuple[str, ...]:
        problems = []
        if not self.cross_construction_equivalent:
            problems.append(
                f"constructions disagree on {self.cross_counterexample}"
            )
        if self.oracle_counterexample is not None:
            problems.append(
                f"oracle disagreement at {self.oracle_counterexample}"
            )
        if self.constructed_total_count < self.lower_bound:
            problems.append(
                f"total {self.constructed_total_count} below lower bound "
                f"{self.lower_bound}"
            )
        applicable = (
            self.hypotheses.h1_holds
            and self.hypotheses.h2_holds
            and self.purely_periodic
        )
        if applicable and (
            self.predicted_infinite_count != self.constructed_infinite_count
        ):
            problems.append(
                f"predicted {self.predicted_infinite_count} infinite states, "
                f"constructed {self.constructed_infinite_count}"
            )
        return tuple(problems)

    def to_json_dict(self) -> dict:
        """Fixed-order dictionary used by the command line interface."""
        return {
            "m": self.modulus,
            "k": self.analysis.k,
            "smith": list(self.analysis.smith_invariants),
            "S": self.analysis.s_um,
            "period": {
                "preperiod": self.period.preperiod,
                "period": self.period.period,
            },
            "predicted_infinite": self.predicted_infinite_count,
            "total_states": self.constructed_total_count,
            "infinite_states": self.constructed_infinite_count,
            "finite_states": self.constructed_finite_count,
            "lower_bound": self.lower_bound,
            "h1": self.hypotheses.h1_holds,
            "h2": self.hypotheses.h2_holds,
            "purely_periodic": self.purely_periodic,
            "cross_equivalent": self.cross_construction_equivalent,
            "oracle_length": self.oracle_checked_to_length,
        }


def verify_theorem(
    system: NumerationSystem, a_u: Dfa, m: int, oracle_length: int = 12
) -> VerificationReport:
    """Build the divisibility automaton both ways and compare with theory.

    The oracle check replays every word of length <= oracle_length through
    the arithmetic predicate (greedy and divisible): accepted words and
    predicate words are merged as radix-ordered streams, so a divergence
    surfaces as the shortest offending word.
    """
    analysis = hankel_analysis(system, m)
    rp = residue_period(system, m)
    hypotheses = check_hypotheses(a_u)
    direct = build_divisibility_direct(a_u, system, m)
    lsd = build_divisibility_lsd(a_u, system, m)
    cross_ok, cross_witness = equivalent(direct, lsd)
    oracle_witness = first_divergence(
        iter_accepted(direct, oracle_length),
        iter_greedy_multiples(system, oracle_length, m),
    )
    infinite = len(states_with_infinite_right_language(direct))
    total = direct.state_count
    return VerificationReport(
        system_name=system.name,
        modulus=m,
        analysis=analysis,
        period=rp,
        hypotheses=hypotheses,
        c_u_size=len(hypotheses.c_u_states),
        predicted_infinite_count=len(hypotheses.c_u_states) * analysis.s_um,
        constructed_total_count=total,
        constructed_infinite_count=infinite,
        constructed_finite_count=total - infinite,
        purely_periodic=rp.preperiod == 0,
        lower_bound=lower_bound(system, m),
        oracle_checked_to_length=oracle_length,
        oracle_counterexample=oracle_witness,
        cross_construction_equivalent=cross_ok,
        cross_counterexample=cross_witness,
    )
