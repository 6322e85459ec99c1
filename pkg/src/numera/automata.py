"""Partial deterministic automata over digit alphabets.

Transitions are partial maps: a missing transition rejects.  Completion with
a sink happens only inside algorithms that need it (minimization), never in
the data.  All constructions number states deterministically so serialized
output is byte-stable across runs.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

Word = tuple[int, ...]


class AlphabetMismatchError(ValueError):
    """Binary automaton operations need a common alphabet size."""


@dataclass(frozen=True)
class Dfa:
    """Partial DFA: states 0..state_count-1, digits 0..alphabet_size-1."""

    state_count: int
    alphabet_size: int
    transitions: dict[tuple[int, int], int]
    initial: int
    finals: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "transitions", dict(self.transitions))
        object.__setattr__(self, "finals", frozenset(self.finals))
        if self.state_count < 1:
            raise ValueError("automaton needs at least one state")
        if self.alphabet_size < 1:
            raise ValueError("alphabet must be non-empty")
        if not 0 <= self.initial < self.state_count:
            raise ValueError("initial state out of range")
        for (q, d), t in self.transitions.items():
            if not (0 <= q < self.state_count and 0 <= t < self.state_count):
                raise ValueError(f"transition ({q},{d})->{t} out of range")
            if not 0 <= d < self.alphabet_size:
                raise ValueError(f"digit {d} outside alphabet")
        if not self.finals <= frozenset(range(self.state_count)):
            raise ValueError("final state out of range")

    @cached_property
    def rows(self) -> tuple[dict[int, int], ...]:
        """Per-state digit->target maps (read-only convenience view)."""
        rows: tuple[dict[int, int], ...] = tuple({} for _ in range(self.state_count))
        for (q, d), t in self.transitions.items():
            rows[q][d] = t
        return rows

    def step(self, state: int | None, digit: int) -> int | None:
        if state is None:
            return None
        return self.rows[state].get(digit)

    def run(self, word: Iterable[int], start: int | None = None) -> int | None:
        """End state of the run from ``start`` (default initial), None if it dies."""
        state = self.initial if start is None else start
        for digit in word:
            state = self.step(state, digit)
            if state is None:
                return None
        return state

    def accepts(self, word: Iterable[int]) -> bool:
        state = self.run(word)
        return state is not None and state in self.finals


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton with a set of initial states."""

    state_count: int
    alphabet_size: int
    transitions: dict[tuple[int, int], frozenset[int]]
    initials: frozenset[int]
    finals: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "transitions",
            {key: frozenset(targets) for key, targets in self.transitions.items()},
        )
        object.__setattr__(self, "initials", frozenset(self.initials))
        object.__setattr__(self, "finals", frozenset(self.finals))


def empty_language_dfa(alphabet_size: int) -> Dfa:
    """Canonical automaton of the empty language: one non-final state."""
    return Dfa(1, alphabet_size, {}, 0, frozenset())


def _accessible(a: Dfa) -> set[int]:
    seen = {a.initial}
    stack = [a.initial]
    while stack:
        q = stack.pop()
        for t in a.rows[q].values():
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def _coaccessible(a: Dfa) -> set[int]:
    rev: list[list[int]] = [[] for _ in range(a.state_count)]
    for (q, _d), t in a.transitions.items():
        rev[t].append(q)
    seen = set(a.finals)
    stack = list(a.finals)
    while stack:
        q = stack.pop()
        for p in rev[q]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def is_trim(a: Dfa) -> bool:
    """True when every state is both accessible and co-accessible."""
    full = set(range(a.state_count))
    return _accessible(a) == full and _coaccessible(a) == full


def trim(a: Dfa) -> Dfa:
    """Restrict to accessible and co-accessible states, renumbered in order.

    An automaton with empty language trims to the canonical one-state reject.
    """
    keep = _accessible(a) & _coaccessible(a)
    if a.initial not in keep:
        return empty_language_dfa(a.alphabet_size)
    renum = {q: i for i, q in enumerate(sorted(keep))}
    transitions = {
        (renum[q], d): renum[t]
        for (q, d), t in a.transitions.items()
        if q in keep and t in keep
    }
    finals = frozenset(renum[q] for q in a.finals if q in keep)
    return Dfa(len(renum), a.alphabet_size, transitions, renum[a.initial], finals)


def _hopcroft(n: int, alphabet_size: int, succ: list[list[int]], finals) -> set:
    """Partition refinement on a complete DFA; returns the coarsest stable
    partition (as a set of frozensets) separating finals from non-finals."""
    preds: list[list[list[int]]] = [
        [[] for _ in range(n)] for _ in range(alphabet_size)
    ]
    for q in range(n):
        for d in range(alphabet_size):
            preds[d][succ[q][d]].append(q)
    finals = frozenset(finals)
    others = frozenset(range(n)) - finals
    partition = {block for block in (finals, others) if block}
    if len(partition) < 2:
        return partition
    block_of = {}
    for block in partition:
        for q in block:
            block_of[q] = block
    work = {min(partition, key=len)}
    while work:
        splitter = work.pop()
        for d in range(alphabet_size):
            hits: dict[frozenset, set[int]] = {}
            for q in splitter:
                for p in preds[d][q]:
                    hits.setdefault(block_of[p], set()).add(p)
            for block, inside in hits.items():
                if len(inside) == len(block):
                    continue
                part_a = frozenset(inside)
                part_b = block - part_a
                partition.discard(block)
                partition.add(part_a)
                partition.add(part_b)
                for q in part_a:
                    block_of[q] = part_a
                for q in part_b:
                    block_of[q] = part_b
                if block in work:
                    work.discard(block)
                    work.add(part_a)
                    work.add(part_b)
                else:
                    # only the smaller half needs reprocessing
                    work.add(min((part_a, part_b), key=len))
    return partition


def minimize(a: Dfa) -> Dfa:
    """Unique trim minimal partial DFA of the same language.

    Runs Hopcroft refinement on the sink completion of the trimmed automaton,
    then drops the sink class again.  States are numbered by the smallest
    original state in each class.
    """
    t = trim(a)
    if not t.finals:
        return t
    n, alpha = t.state_count, t.alphabet_size
    sink = n
    succ = [[t.rows[q].get(d, sink) for d in range(alpha)] for q in range(n)]
    succ.append([sink] * alpha)
    partition = _hopcroft(n + 1, alpha, succ, t.finals)
    sink_block = next(block for block in partition if sink in block)
    # trim states all accept something, so nothing shares the sink class
    assert sink_block == frozenset({sink})
    blocks = sorted(partition - {sink_block}, key=min)
    index = {}
    for i, block in enumerate(blocks):
        for q in block:
            index[q] = i
    transitions = {}
    for i, block in enumerate(blocks):
        rep_state = min(block)
        for d in range(alpha):
            target = succ[rep_state][d]
            if target != sink and target not in sink_block:
                transitions[(i, d)] = index[target]
    finals = frozenset(index[q] for q in t.finals)
    return Dfa(len(blocks), alpha, transitions, index[t.initial], finals)


def reverse(a: Dfa) -> Nfa:
    """NFA for the reversed language: edges flipped, finals become initials."""
    reversed_transitions: dict[tuple[int, int], set[int]] = {}
    for (q, d), t in a.transitions.items():
        reversed_transitions.setdefault((t, d), set()).add(q)
    return Nfa(
        a.state_count,
        a.alphabet_size,
        {key: frozenset(sources) for key, sources in reversed_transitions.items()},
        frozenset(a.finals),
        frozenset({a.initial}),
    )


def determinize(n: Nfa) -> Dfa:
    """Subset construction; the empty subset is omitted (partial result).

    Subsets are numbered in BFS discovery order with digits ascending.
    """
    if not n.initials:
        return empty_language_dfa(n.alphabet_size)
    start = frozenset(n.initials)
    ids: dict[frozenset[int], int] = {start: 0}
    queue = deque([start])
    transitions: dict[tuple[int, int], int] = {}
    finals = set()
    while queue:
        subset = queue.popleft()
        i = ids[subset]
        if subset & n.finals:
            finals.add(i)
        for d in range(n.alphabet_size):
            image: set[int] = set()
            for q in subset:
                image |= n.transitions.get((q, d), frozenset())
            if not image:
                continue
            key = frozenset(image)
            if key not in ids:
                ids[key] = len(ids)
                queue.append(key)
            transitions[(i, d)] = ids[key]
    return Dfa(len(ids), n.alphabet_size, transitions, 0, frozenset(finals))


def intersect(a: Dfa, b: Dfa) -> Dfa:
    """Product automaton of the intersection, restricted to reachable pairs."""
    if a.alphabet_size != b.alphabet_size:
        raise AlphabetMismatchError(
            f"alphabet sizes differ: {a.alphabet_size} vs {b.alphabet_size}"
        )
    start = (a.initial, b.initial)
    ids = {start: 0}
    queue = deque([start])
    transitions: dict[tuple[int, int], int] = {}
    finals = set()
    while queue:
        pair = queue.popleft()
        i = ids[pair]
        p, q = pair
        if p in a.finals and q in b.finals:
            finals.add(i)
        for d in range(a.alphabet_size):
            np, nq = a.rows[p].get(d), b.rows[q].get(d)
            if np is None or nq is None:
                continue
            key = (np, nq)
            if key not in ids:
                ids[key] = len(ids)
                queue.append(key)
            transitions[(i, d)] = ids[key]
    return Dfa(len(ids), a.alphabet_size, transitions, 0, frozenset(finals))


def equivalent(a: Dfa, b: Dfa) -> tuple[bool, Word | None]:
    """Language equality, with a shortest separating word on failure.

    BFS over the pair graph with an implicit dead side for missing
    transitions; the first pair disagreeing on acceptance yields the witness.
    """
    if a.alphabet_size != b.alphabet_size:
        raise AlphabetMismatchError(
            f"alphabet sizes differ: {a.alphabet_size} vs {b.alphabet_size}"
        )
    start = (a.initial, b.initial)
    parents: dict[tuple, tuple | None] = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        p, q = pair
        accept_a = p is not None and p in a.finals
        accept_b = q is not None and q in b.finals
        if accept_a != accept_b:
            word: list[int] = []
            cursor = pair
            while parents[cursor] is not None:
                cursor, digit = parents[cursor]
                word.append(digit)
            return False, tuple(reversed(word))
        for d in range(a.alphabet_size):
            np, nq = a.step(p, d), b.step(q, d)
            if np is None and nq is None:
                continue
            key = (np, nq)
            if key not in parents:
                parents[key] = (pair, d)
                queue.append(key)
    return True, None


@dataclass(frozen=True)
class SccDecomposition:
    """Strongly connected components, numbered by smallest member state."""

    component_of: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]
    non_trivial: tuple[bool, ...]


def scc(a: Dfa) -> SccDecomposition:
    """Tarjan's algorithm, iterative to cope with deep graphs."""
    n = a.state_count
    adjacency = [sorted(set(a.rows[q].values())) for q in range(n)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    raw_components: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, edge_pos = work[-1]
            if edge_pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            for pos in range(edge_pos, len(adjacency[v])):
                w = adjacency[v][pos]
                if index[w] == -1:
                    work[-1] = (v, pos + 1)
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            work.pop()
            if low[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component.append(w)
                    if w == v:
                        break
                raw_components.append(sorted(component))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    raw_components.sort(key=lambda component: component[0])
    component_of = [0] * n
    non_trivial = []
    for ci, component in enumerate(raw_components):
        for q in component:
            component_of[q] = ci
        loops = len(component) > 1 or any(
            t == component[0] for t in a.rows[component[0]].values()
        )
        non_trivial.append(loops)
    return SccDecomposition(
        tuple(component_of),
        tuple(tuple(component) for component in raw_components),
        tuple(non_trivial),
    )


def states_with_infinite_right_language(a: Dfa) -> frozenset[int]:
    """States of the trim part from which infinitely many words are accepted.

    Within the accessible-and-co-accessible subgraph these are exactly the
    states that can reach a cycle.
    """
    keep = _accessible(a) & _coaccessible(a)
    if not keep:
        return frozenset()
    decomposition = scc(a)
    seeds = {
        q for q in keep if decomposition.non_trivial[decomposition.component_of[q]]
    }
    rev: dict[int, list[int]] = {q: [] for q in keep}
    for (q, _d), t in a.transitions.items():
        if q in keep and t in keep:
            rev[t].append(q)
    result = set(seeds)
    stack = list(seeds)
    while stack:
        q = stack.pop()
        for p in rev[q]:
            if p not in result:
                result.add(p)
                stack.append(p)
    return frozenset(result)


def canonical_form(a: Dfa) -> Dfa:
    """Renumber states in BFS order from the initial state, digits ascending.

    Isomorphic automata get equal transition tables; unreachable states are
    dropped.  Idempotent.
    """
    order = {a.initial: 0}
    queue = deque([a.initial])
    while queue:
        q = queue.popleft()
        row = a.rows[q]
        for d in range(a.alphabet_size):
            t = row.get(d)
            if t is not None and t not in order:
                order[t] = len(order)
                queue.append(t)
    transitions = {
        (order[q], d): order[t] for (q, d), t in a.transitions.items() if q in order
    }
    finals = frozenset(order[q] for q in a.finals if q in order)
    return Dfa(len(order), a.alphabet_size, transitions, 0, finals)


def minimize_brzozowski(a: Dfa) -> Dfa:
    """Minimal automaton by double reversal; cross-check for :func:`minimize`."""
    t = trim(a)
    if not t.finals:
        return t
    once = determinize(reverse(t))
    twice = determinize(reverse(once))
    return trim(twice)


def iter_accepted(a: Dfa, max_length: int) -> Iterator[Word]:
    """Accepted words of length <= max_length in radix order.

    Walks live prefixes breadth-first by length, so cost scales with the
    number of live words rather than with alphabet_size ** max_length.
    """
    if a.initial in a.finals:
        yield ()
    frontier: list[tuple[Word, int]] = [((), a.initial)]
    for _length in range(1, max_length + 1):
        nxt: list[tuple[Word, int]] = []
        for word, q in frontier:
            row = a.rows[q]
            for d in range(a.alphabet_size):
                t = row.get(d)
                if t is not None:
                    nxt.append((word + (d,), t))
        for word, q in nxt:
            if q in a.finals:
                yield word
        frontier = nxt
        if not frontier:
            return


def enumerate_accepted(a: Dfa, max_length: int) -> list[Word]:
    """List of accepted words of length <= max_length in radix order."""
    return list(iter_accepted(a, max_length))


_STREAM_END = object()


def first_divergence(stream_a, stream_b) -> Word | None:
    """First word on which two radix-ordered word streams differ.

    Returns None when the streams are identical.  Because both streams are
    sorted, whenever the heads differ the radix-smaller head belongs to
    exactly one of the two languages.
    """
    for x, y in itertools.zip_longest(stream_a, stream_b, fillvalue=_STREAM_END):
        if x == y:
            continue
        if x is _STREAM_END:
            return y
        if y is _STREAM_END:
            return x
        return min(x, y, key=lambda w: (len(w), w))
    return None


def to_dot(a: Dfa) -> str:
    """Graphviz rendering in a fixed dialect.

    States appear as q0..qN in numeric order, finals with a double circle,
    the initial state marked by an edge from an invisible node.  Edges are
    grouped per source by target and labeled with their digits joined by
    commas in ascending order; groups are ordered by smallest digit.
    """
    lines = [
        "digraph {",
        "  rankdir=LR;",
        '  __start [shape=none, label=""];',
        f"  __start -> q{a.initial};",
    ]
    for q in range(a.state_count):
        shape = "doublecircle" if q in a.finals else "circle"
        lines.append(f"  q{q} [shape={shape}];")
    for q in range(a.state_count):
        row = a.rows[q]
        grouped: dict[int, list[int]] = {}
        for d in sorted(row):
            grouped.setdefault(row[d], []).append(d)
        for t, digits in sorted(grouped.items(), key=lambda item: item[1][0]):
            label = ",".join(str(d) for d in digits)
            lines.append(f'  q{q} -> q{t} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def transition_table(a: Dfa) -> str:
    """Plain-text transition table, one line per state.

    Format: a header ``states=N alphabet=A initial=I`` followed by lines
    ``q<i>[*] 0->q<t> 1->q<t> ...`` where ``*`` marks finals and ``-`` an
    undefined transition.  Byte-stable for equal automata.
    """
    lines = [f"states={a.state_count} alphabet={a.alphabet_size} initial={a.initial}"]
    for q in range(a.state_count):
        marker = "*" if q in a.finals else ""
        cells = []
        for d in range(a.alphabet_size):
            t = a.rows[q].get(d)
            cells.append(f"{d}->" + ("-" if t is None else f"q{t}"))
        lines.append(f"q{q}{marker} " + " ".join(cells))
    return "\n".join(lines) + "\n"
