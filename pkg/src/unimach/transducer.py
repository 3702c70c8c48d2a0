"""Deterministic finite-state transducers.

These are the only devices used for encoding and decoding.  A run consumes
exactly one input symbol per step; emitting output is free.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, NamedTuple, Optional


class Transduction(NamedTuple):
    output: tuple
    steps: int
    accepted: bool
    failed_at: Optional[int] = None

    @property
    def text(self) -> str:
        return "".join(map(str, self.output))


@dataclass(frozen=True)
class DFST:
    num_states: int
    initial: int
    transitions: Mapping  # (state, symbol) -> (next_state, output tuple)
    input_alphabet: frozenset
    output_alphabet: frozenset
    accepting: frozenset

    def __post_init__(self):
        for (q, a), (p, out) in self.transitions.items():
            if not (0 <= q < self.num_states and 0 <= p < self.num_states):
                raise ValueError(f"transition {(q, a)} -> {p} leaves the state range")
            if a not in self.input_alphabet:
                raise ValueError(f"transition on {a!r} outside the input alphabet")
            bad = [o for o in out if o not in self.output_alphabet]
            if bad:
                raise ValueError(f"output symbols {bad} outside the output alphabet")

    @classmethod
    def explore(
        cls,
        initial: Hashable,
        input_alphabet: Iterable,
        delta: Callable,
        is_accepting: Callable,
        output_alphabet: Iterable,
    ) -> "DFST":
        """Build a DFST from a step function over abstract states.

        ``delta(state, symbol)`` returns ``(next_state, output)`` or ``None``
        for a missing transition.  Only reachable states are materialized, so
        ``delta`` must generate finitely many of them.
        """
        alphabet = sorted(set(input_alphabet), key=repr)
        index = {initial: 0}
        order = [initial]
        todo = deque([initial])
        trans = {}
        while todo:
            s = todo.popleft()
            for a in alphabet:
                res = delta(s, a)
                if res is None:
                    continue
                t, out = res
                if t not in index:
                    index[t] = len(order)
                    order.append(t)
                    todo.append(t)
                trans[(index[s], a)] = (index[t], tuple(out))
        return cls(
            num_states=len(order),
            initial=0,
            transitions=trans,
            input_alphabet=frozenset(alphabet),
            output_alphabet=frozenset(output_alphabet),
            accepting=frozenset(index[s] for s in order if is_accepting(s)),
        )


def transduce(t: DFST, word: Iterable) -> Transduction:
    out = []
    q = t.initial
    steps = 0
    for pos, a in enumerate(word):
        if a not in t.input_alphabet:
            raise ValueError(f"symbol {a!r} at position {pos} is not in the input alphabet")
        move = t.transitions.get((q, a))
        if move is None:
            return Transduction(tuple(out), steps, False, pos)
        q, emitted = move
        out.extend(emitted)
        steps += 1
    return Transduction(tuple(out), steps, q in t.accepting)


def symbolwise_dfst(table: Mapping) -> DFST:
    """One-state transducer for the homomorphic extension of ``table``."""
    if not table:
        raise ValueError("symbol table is empty")
    trans = {}
    outputs = set()
    for a, code in table.items():
        code = tuple(code)
        if not code:
            raise ValueError(f"empty code for {a!r}; codes must be nonempty")
        trans[(0, a)] = (0, code)
        outputs.update(code)
    return DFST(1, 0, trans, frozenset(table), frozenset(outputs), frozenset([0]))
