"""Exact arithmetic for greedy linear numeration systems.

A system is an increasing integer sequence U_0 = 1 < U_1 < U_2 < ... obeying
a fixed linear recurrence

    U_{n+K} = a_{K-1} U_{n+K-1} + ... + a_1 U_{n+1} + a_0 U_n

with integer coefficients.  Every natural number has a unique greedy
representation over the digit alphabet {0, ..., C-1}, where C bounds the
consecutive-term ratios.  All arithmetic here is exact; no floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator

Word = tuple[int, ...]

DEFAULT_HORIZON = 200


class InvalidSystemError(ValueError):
    """The recurrence data does not define a valid increasing sequence."""


@dataclass(frozen=True)
class NumerationSystem:
    """A linear numeration system.

    ``recurrence_coefficients`` lists a_0 first (the coefficient of the
    oldest term).  ``initial_terms`` are U_0, ..., U_{K-1} and must start
    at 1 and increase strictly.  ``alphabet_bound`` is the digit-alphabet
    size C; every ratio ceil(U_{n+1}/U_n) must stay within it.
    """

    recurrence_coefficients: tuple[int, ...]
    initial_terms: tuple[int, ...]
    alphabet_bound: int
    name: str | None = None
    _terms: list[int] = field(
        default_factory=list, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "recurrence_coefficients", tuple(self.recurrence_coefficients)
        )
        object.__setattr__(self, "initial_terms", tuple(self.initial_terms))
        order = len(self.recurrence_coefficients)
        if order < 1:
            raise InvalidSystemError("recurrence must have at least one coefficient")
        if len(self.initial_terms) != order:
            raise InvalidSystemError(
                f"expected {order} initial terms, got {len(self.initial_terms)}"
            )
        if self.initial_terms[0] != 1:
            raise InvalidSystemError("U_0 must equal 1")
        for prev, cur in zip(self.initial_terms, self.initial_terms[1:]):
            if cur <= prev:
                raise InvalidSystemError("initial terms must increase strictly")
        if self.alphabet_bound < 2:
            raise InvalidSystemError("alphabet bound must be at least 2")
        self._terms.extend(self.initial_terms)

    @property
    def order(self) -> int:
        """Recurrence order K."""
        return len(self.recurrence_coefficients)

    @property
    def dominant_root_estimate(self) -> Fraction:
        """Rational approximation of the growth rate (diagnostic only)."""
        return Fraction(term(self, DEFAULT_HORIZON), term(self, DEFAULT_HORIZON - 1))


def term(system: NumerationSystem, n: int) -> int:
    """U_n, generated on demand and cached on the system."""
    if n < 0:
        raise ValueError("term index must be non-negative")
    cache = system._terms
    coeffs = system.recurrence_coefficients
    order = len(coeffs)
    while len(cache) <= n:
        nxt = sum(c * u for c, u in zip(coeffs, cache[-order:]))
        if nxt <= cache[-1]:
            raise InvalidSystemError(
                f"generated term U_{len(cache)} = {nxt} does not increase"
            )
        cache.append(nxt)
    return cache[n]


def alphabet_bound_profile(
    system: NumerationSystem, horizon: int = DEFAULT_HORIZON
) -> tuple[int, bool]:
    """Max of ceil(U_{n+1}/U_n) over n < horizon, and whether that max was
    already attained strictly before horizon/2 (a stability heuristic: a late
    max suggests the horizon is too short for this recurrence)."""
    if horizon < 1:
        raise ValueError("horizon must be positive")
    best = 0
    argmax = 0
    for n in range(horizon):
        u, v = term(system, n), term(system, n + 1)
        ratio = -(-v // u)
        if ratio > best:
            best, argmax = ratio, n
    return best, argmax < horizon // 2


def compute_alphabet_bound(
    system: NumerationSystem, horizon: int = DEFAULT_HORIZON
) -> int:
    """Digit-alphabet size C = max over n < horizon of ceil(U_{n+1}/U_n)."""
    return alphabet_bound_profile(system, horizon)[0]


def make_system(
    coefficients,
    initial_terms,
    alphabet_bound: int | None = None,
    name: str | None = None,
    horizon: int = DEFAULT_HORIZON,
) -> NumerationSystem:
    """Build a system, computing the alphabet bound when not supplied.

    A supplied bound is validated against every ratio up to the horizon.
    """
    probe = NumerationSystem(
        tuple(int(c) for c in coefficients),
        tuple(int(u) for u in initial_terms),
        alphabet_bound=2,
        name=name,
    )
    computed, _stable = alphabet_bound_profile(probe, horizon)
    if alphabet_bound is None:
        bound = computed
    else:
        bound = int(alphabet_bound)
        if bound < computed:
            raise InvalidSystemError(
                f"alphabet bound {bound} contradicted by ratio {computed} "
                f"within horizon {horizon}"
            )
    return NumerationSystem(
        probe.recurrence_coefficients, probe.initial_terms, bound, name
    )


def preset_system(name: str) -> NumerationSystem:
    """Named example systems: ``fibonacci``, ``lbonacci:<l>``, ``sqrt2plus1``."""
    if name == "fibonacci":
        return make_system((1, 1), (1, 2), name=name)
    if name.startswith("lbonacci:"):
        ell = int(name.split(":", 1)[1])
        if ell < 2:
            raise InvalidSystemError("lbonacci order must be at least 2")
        return make_system((1,) * ell, tuple(2**i for i in range(ell)), name=name)
    if name == "sqrt2plus1":
        return make_system((1, 2), (1, 3), name=name)
    raise InvalidSystemError(f"unknown preset {name!r}")


PRESET_NAMES = ("fibonacci", "lbonacci:2", "lbonacci:3", "lbonacci:4", "sqrt2plus1")


def rep(system: NumerationSystem, n: int) -> Word:
    """Greedy representation of n, most-significant digit first; rep(0) = ()."""
    if n < 0:
        raise ValueError("cannot represent negative values")
    if n == 0:
        return ()
    top = 0
    while term(system, top + 1) <= n:
        top += 1
    digits = []
    x = n
    for i in range(top, -1, -1):
        u = term(system, i)
        d = x // u
        if d >= system.alphabet_bound:
            raise InvalidSystemError(
                f"greedy digit {d} at position {i} exceeds alphabet bound"
            )
        digits.append(d)
        x -= d * u
    return tuple(digits)


def val(system: NumerationSystem, word: Word) -> int:
    """Value of a digit word: sum of digit * U_position, least digit at U_0."""
    total = 0
    for i, d in enumerate(reversed(word)):
        if not 0 <= d < system.alphabet_bound:
            raise ValueError(f"digit {d} outside alphabet")
        total += d * term(system, i)
    return total


def is_greedy(system: NumerationSystem, word: Word) -> bool:
    """Membership in the greedy language with leading zeros allowed.

    A word qualifies exactly when every length-j suffix has value below U_j;
    once some suffix reaches U_j no extension can repair it.
    """
    partial = 0
    for j in range(1, len(word) + 1):
        d = word[-j]
        if not 0 <= d < system.alphabet_bound:
            raise ValueError(f"digit {d} outside alphabet")
        partial += d * term(system, j - 1)
        if partial >= term(system, j):
            return False
    return True


def iter_greedy_multiples(
    system: NumerationSystem, max_length: int, multiple_of: int = 1
) -> Iterator[Word]:
    """All greedy words (leading zeros allowed) of value divisible by
    ``multiple_of`` and length <= max_length, in radix order.

    Radix order is by length first, then lexicographic; within one length,
    lexicographic order of greedy words is value order, so padding the
    representations of 0, m, 2m, ... in turn yields the stream sorted.
    """
    if multiple_of < 1:
        raise ValueError("multiple_of must be positive")
    yield ()
    for length in range(1, max_length + 1):
        top = term(system, length)
        for n in range(0, top, multiple_of):
            w = rep(system, n)
            yield (0,) * (length - len(w)) + w


@dataclass(frozen=True)
class ResiduePeriod:
    """Eventual periodicity of (U_n mod m): residues for n < preperiod + period."""

    modulus: int
    preperiod: int
    period: int
    residues: tuple[int, ...]


def residue_period(system: NumerationSystem, m: int) -> ResiduePeriod:
    """Minimal preperiod and period of U_n mod m.

    Consecutive K-tuples of residues evolve deterministically, so the first
    repeated tuple pins down both the entry point and the cycle length.
    """
    if m < 2:
        raise ValueError("modulus must be at least 2")
    order = len(system.recurrence_coefficients)
    seen: dict[tuple[int, ...], int] = {}
    residues: list[int] = []
    n = 0
    state = tuple(term(system, i) % m for i in range(order))
    while state not in seen:
        seen[state] = n
        residues.append(state[0])
        n += 1
        state = tuple(term(system, n + i) % m for i in range(order))
    preperiod = seen[state]
    period = n - preperiod
    return ResiduePeriod(m, preperiod, period, tuple(residues[: preperiod + period]))


def word_to_string(word: Word) -> str:
    """Digit string, most-significant first; comma-separated if any digit > 9."""
    if any(d > 9 for d in word):
        return ",".join(str(d) for d in word)
    return "".join(str(d) for d in word)


def word_from_string(text: str) -> Word:
    """Inverse of :func:`word_to_string`."""
    if not text:
        return ()
    if "," in text:
        return tuple(int(part) for part in text.split(","))
    return tuple(int(ch) for ch in text)


def load_system_definition(
    source: str | Path | dict,
) -> tuple[NumerationSystem, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """Parse a system definition from JSON (path, text, or parsed dict).

    Recognised keys: ``coefficients`` (a_0 first), ``initial_terms``,
    optional ``alphabet_bound``, ``name``, and ``bertrand_directive``
    (an object with ``preperiod`` and ``period`` digit lists).  Returns the
    system together with the directive, when present, as a
    (preperiod, period) pair of digit tuples.
    """
    if isinstance(source, dict):
        data = source
    else:
        text = Path(source).read_text() if Path(str(source)).exists() else str(source)
        data = json.loads(text)
    if not isinstance(data, dict):
        raise InvalidSystemError("system definition must be a JSON object")
    try:
        coefficients = data["coefficients"]
        initial_terms = data["initial_terms"]
    except KeyError as missing:
        raise InvalidSystemError(f"missing key {missing} in system definition")
    system = make_system(
        coefficients,
        initial_terms,
        alphabet_bound=data.get("alphabet_bound"),
        name=data.get("name"),
    )
    directive = None
    if "bertrand_directive" in data:
        raw = data["bertrand_directive"]
        if not isinstance(raw, dict):
            raise InvalidSystemError("bertrand_directive must be an object")
        directive = (
            tuple(int(d) for d in raw.get("preperiod", ())),
            tuple(int(d) for d in raw.get("period", ())),
        )
    return system, directive
