"""Turing machines with indexed states and symbols, and their step semantics.

States are ``1..num_states`` with ``1`` initial and ``num_states`` final.
Symbols are ``1..num_symbols``; the blank (default ``1``) fills the tape
whenever the head leaves the written part.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence

MOVES = ("L", "N", "R")

Word = tuple


class MachineError(ValueError):
    """Raised for an ill-formed machine definition."""


class MalformedConfigurationError(ValueError):
    pass


class DomainError(ValueError):
    """Input outside the domain of a (partial) function, e.g. an empty word."""


class FuelExhausted(RuntimeError):
    """The step budget ran out before any final configuration was reached."""

    def __init__(self, fuel, frontier=None):
        super().__init__(f"no final configuration within {fuel} steps")
        self.fuel = fuel
        self.frontier = frontier


class Rule(NamedTuple):
    from_state: int
    read: int
    to_state: int
    write: int
    move: str


class Configuration(NamedTuple):
    """``left · state · right`` with the head on ``right[0]``."""

    left: tuple
    state: int
    right: tuple

    @property
    def word(self) -> tuple:
        return self.left + self.right

    def __str__(self):
        left = " ".join(f"s{i}" for i in self.left)
        right = " ".join(f"s{i}" for i in self.right)
        return f"{left}|q{self.state}|{right}".strip()


@dataclass(frozen=True)
class Machine:
    num_states: int
    num_symbols: int
    rules: tuple
    deterministic: bool = True
    blank: int = 1
    name: str = ""
    _table: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        rules = tuple(Rule(*r) for r in self.rules)
        object.__setattr__(self, "rules", rules)
        if self.num_states < 2:
            raise MachineError("a machine needs at least an initial and a final state")
        if self.num_symbols < 1:
            raise MachineError("a machine needs at least one symbol")
        if not 1 <= self.blank <= self.num_symbols:
            raise MachineError(f"blank s{self.blank} out of range")
        table = {}
        for r in rules:
            if not (1 <= r.from_state <= self.num_states and 1 <= r.to_state <= self.num_states):
                raise MachineError(f"state out of range in {r}")
            if not (1 <= r.read <= self.num_symbols and 1 <= r.write <= self.num_symbols):
                raise MachineError(f"symbol out of range in {r}")
            if r.move not in MOVES:
                raise MachineError(f"bad move {r.move!r} in {r}")
            if r.from_state == self.num_states:
                raise MachineError(f"rule leaves the final state: {r}")
            key = (r.from_state, r.read)
            if self.deterministic and key in table:
                raise MachineError(f"two rules for (q{key[0]}, s{key[1]}) in a deterministic machine")
            table.setdefault(key, []).append(r)
        object.__setattr__(self, "_table", {k: tuple(v) for k, v in table.items()})

    @property
    def final(self) -> int:
        return self.num_states

    def rules_for(self, state: int, symbol: int) -> tuple:
        return self._table.get((state, symbol), ())

    def initial(self, word: Sequence[int]) -> Configuration:
        """Normal-form initial configuration ``q_1 w``."""
        word = tuple(word)
        check_word(self, word)
        return Configuration((), 1, word)

    def canonical_rules(self) -> tuple:
        """Rules sorted by (state, symbol); ties keep their given order."""
        return tuple(sorted(self.rules, key=lambda r: (r.from_state, r.read)))


def check_word(m: Machine, word: Sequence[int]) -> None:
    if not word:
        raise DomainError("the empty word is outside the domain")
    for s in word:
        if not 1 <= s <= m.num_symbols:
            raise DomainError(f"symbol s{s} not in the alphabet of {m.name or 'machine'}")


def check_configuration(m: Machine, c: Configuration) -> None:
    if not 1 <= c.state <= m.num_states:
        raise MalformedConfigurationError(f"state q{c.state} out of range")
    if not c.right:
        raise MalformedConfigurationError("right part of a configuration must be nonempty")
    for s in c.left + c.right:
        if not 1 <= s <= m.num_symbols:
            raise MalformedConfigurationError(f"symbol s{s} out of range")


def apply_rule(m: Machine, c: Configuration, r: Rule) -> Configuration:
    right = (r.write,) + c.right[1:]
    if r.move == "N":
        return Configuration(c.left, r.to_state, right)
    if r.move == "R":
        left = c.left + (r.write,)
        rest = right[1:] or (m.blank,)
        return Configuration(left, r.to_state, rest)
    # move left; at the left end the tape grows by one blank
    if c.left:
        return Configuration(c.left[:-1], r.to_state, (c.left[-1],) + right)
    return Configuration((), r.to_state, (m.blank,) + right)


def step(m: Machine, c: Configuration) -> frozenset:
    """All configurations reachable by exactly one rule application."""
    check_configuration(m, c)
    if c.state == m.final:
        return frozenset()
    return frozenset(apply_rule(m, c, r) for r in m.rules_for(c.state, c.right[0]))


def run_n(m: Machine, c: Configuration, n: int) -> frozenset:
    if n < 0:
        raise ValueError("n must be non-negative")
    current = frozenset([c])
    check_configuration(m, c)
    for _ in range(n):
        current = frozenset(d for e in current for d in step(m, e))
        if not current:
            break
    return current


def trace(m: Machine, c: Configuration, fuel: int) -> list:
    """Configuration sequence of a deterministic run, at most ``fuel`` steps long."""
    seq = [c]
    for _ in range(fuel):
        nxt = step(m, seq[-1])
        if not nxt:
            break
        (d,) = nxt
        seq.append(d)
    return seq


def _run_det(m: Machine, c: Configuration, fuel: int) -> Optional[Configuration]:
    for _ in range(fuel + 1):
        if c.state == m.final:
            return c
        nxt = step(m, c)
        if not nxt:
            return None
        (c,) = nxt
    raise FuelExhausted(fuel)


def _bfs_finals(m: Machine, c: Configuration, fuel: int):
    """Breadth-first search; returns (finals, exhausted) where exhausted
    means the frontier emptied before the fuel ran out."""
    check_configuration(m, c)
    seen = {c}
    frontier = deque([c])
    finals = set()
    for _ in range(fuel + 1):
        nxt = deque()
        for e in frontier:
            if e.state == m.final:
                finals.add(e)
                continue
            for d in step(m, e):
                if d not in seen:
                    seen.add(d)
                    nxt.append(d)
        frontier = nxt
        if not frontier:
            return finals, True
    return finals, False


def run_to_final(m: Machine, c: Configuration, fuel: int):
    """Run to a final configuration.

    Deterministic machines give the final configuration or ``None`` when the
    machine halts in a non-final state. Nondeterministic machines give the set
    of final configurations reachable within ``fuel`` steps. Running out of
    fuel with nothing found raises :class:`FuelExhausted`.
    """
    if c.state != 1:
        raise DomainError("run_to_final expects an initial configuration (state q1)")
    if m.deterministic:
        return _run_det(m, c, fuel)
    finals, exhausted = _bfs_finals(m, c, fuel)
    if not finals and not exhausted:
        raise FuelExhausted(fuel)
    return frozenset(finals)


def computed_function(m: Machine, w: Iterable[int], fuel: int = 10**6) -> Optional[tuple]:
    """The word function: ``w'`` with ``q_1 w =>* ... q_final ...``, or ``None``."""
    if not m.deterministic:
        raise DomainError("computed_function is defined for deterministic machines")
    w = tuple(w)
    c = _run_det(m, m.initial(w), fuel)
    return None if c is None else c.word


def reachable_finals(m: Machine, w: Iterable[int], fuel: int) -> frozenset:
    w = tuple(w)
    finals, _ = _bfs_finals(m, m.initial(w), fuel)
    return frozenset(c.word for c in finals)


def configurations(m: Machine, max_len: int, min_len: int = 1):
    """Every configuration with tape length in ``[min_len, max_len]``."""
    from itertools import product

    syms = range(1, m.num_symbols + 1)
    for n in range(min_len, max_len + 1):
        for tape in product(syms, repeat=n):
            for head in range(n):
                for q in range(1, m.num_states + 1):
                    yield Configuration(tape[:head], q, tape[head:])
