"""Universal finite automata for classes with a bounded number of states.

No finite automaton is universal for all finite automata: it would need at
least as many states as any automaton it simulates.  Fixing the number of
states ``k`` and the alphabet makes the class finite, and a single DFA can
then read ``enc(A) # w`` and decide whether ``A`` accepts ``w``.  That DFA
always has more than ``k`` states.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .codec import clog2
from .transducer import symbolwise_dfst, transduce

CLASS_LIMIT = 10**6
SEPARATOR = "#"


class ClassTooLarge(ValueError):
    def __init__(self, size: int):
        super().__init__(f"class has {size} automata, more than the limit {CLASS_LIMIT}")
        self.size = size


@dataclass(frozen=True)
class FA:
    num_states: int
    alphabet: tuple
    transitions: Mapping  # (state, symbol) -> state, states 1..num_states
    accepting: frozenset
    initial: int = 1

    def __post_init__(self):
        for q in range(1, self.num_states + 1):
            for a in self.alphabet:
                p = self.transitions.get((q, a))
                if p is None:
                    raise ValueError(f"missing transition for state {q} on {a!r}")
                if not 1 <= p <= self.num_states:
                    raise ValueError(f"transition ({q}, {a!r}) -> {p} out of range")
        if len(self.transitions) != self.num_states * len(self.alphabet):
            raise ValueError("transitions mention states or symbols outside the automaton")
        if not set(self.accepting) <= set(range(1, self.num_states + 1)):
            raise ValueError("accepting states out of range")

    def table(self) -> tuple:
        return tuple(self.transitions[(q, a)] for q in range(1, self.num_states + 1) for a in self.alphabet)


def run_fa(a: FA, w: Sequence) -> bool:
    q = a.initial
    for pos, sym in enumerate(w):
        if sym not in a.alphabet:
            raise ValueError(f"symbol {sym!r} at position {pos} is not in the alphabet")
        q = a.transitions[(q, sym)]
    return q in a.accepting


def _alphabet(alphabet) -> tuple:
    alpha = tuple(dict.fromkeys(alphabet))
    if not alpha:
        raise ValueError("alphabet is empty")
    if SEPARATOR in alpha:
        raise ValueError(f"{SEPARATOR!r} is reserved as the separator")
    return alpha


def class_size(k: int, alphabet) -> int:
    return k ** (k * len(_alphabet(alphabet))) * 2**k


def _check_size(k: int, alphabet) -> int:
    if k < 1:
        raise ValueError("k must be positive")
    size = class_size(k, alphabet)
    if size > CLASS_LIMIT:
        raise ClassTooLarge(size)
    return size


def _make(k: int, alpha: tuple, table: Sequence, accept_bits: Sequence) -> FA:
    keys = [(q, a) for q in range(1, k + 1) for a in alpha]
    return FA(
        k,
        alpha,
        dict(zip(keys, table)),
        frozenset(q for q, bit in zip(range(1, k + 1), accept_bits) if bit),
    )


def enumerate_k_class(k: int, alphabet) -> list:
    """All complete DFAs with exactly ``k`` states, ordered by transition
    table, then by accepting bit-vector."""
    alpha = _alphabet(alphabet)
    _check_size(k, alpha)
    tables = itertools.product(range(1, k + 1), repeat=k * len(alpha))
    return [_make(k, alpha, t, bits) for t in tables for bits in itertools.product((0, 1), repeat=k)]


def field_width(k: int) -> int:
    return max(1, clog2(k))


def code_length(k: int, alphabet) -> int:
    return k * len(_alphabet(alphabet)) * field_width(k) + k


def encoder(k: int):
    """Symbolwise DFST from tokens ``('t', target)`` and ``('f', bit)``."""
    width = field_width(k)
    table = {("t", p): tuple(format(p - 1, f"0{width}b")) for p in range(1, k + 1)}
    table.update({("f", 0): ("0",), ("f", 1): ("1",)})
    return symbolwise_dfst(table)


def encode_fa(a: FA, k: int) -> str:
    if a.num_states != k:
        raise ValueError(f"automaton has {a.num_states} states, not {k}")
    tokens = [("t", p) for p in a.table()]
    tokens += [("f", int(q in a.accepting)) for q in range(1, k + 1)]
    return transduce(encoder(k), tokens).text


def decode_fa(code: str, k: int, alphabet) -> Optional[FA]:
    """Inverse of ``encode_fa``; ``None`` for strings that encode nothing."""
    alpha = _alphabet(alphabet)
    width = field_width(k)
    if len(code) != code_length(k, alpha) or set(code) - {"0", "1"}:
        return None
    n = k * len(alpha)
    table = [int(code[i * width : (i + 1) * width], 2) + 1 for i in range(n)]
    if any(p > k for p in table):
        return None
    return _make(k, alpha, table, [int(b) for b in code[n * width :]])


# -- the universal automaton ---------------------------------------------------


def build_universal_fa(k: int, alphabet) -> FA:
    """DFA over ``{0,1,#}`` and the alphabet accepting ``enc(A) # w`` exactly
    when ``A`` accepts ``w``.

    Abstract states are ``("code", prefix)`` while the code is read,
    ``("ready", code)`` after a complete code, ``("run", code, q)`` after the
    separator and ``("dead",)``.  Only reachable states are built.
    """
    alpha = _alphabet(alphabet)
    _check_size(k, alpha)
    width = field_width(k)
    length = code_length(k, alpha)
    sigma = tuple(dict.fromkeys(("0", "1", SEPARATOR) + alpha))
    dead = ("dead",)

    members = {}

    def delta(s, a):
        if s[0] == "code":
            if a not in "01":
                return dead
            prefix = s[1] + a
            n = len(prefix)
            # reject a transition field naming a state >= k as soon as it is complete
            if n <= k * len(alpha) * width and n % width == 0 and int(prefix[-width:], 2) >= k:
                return dead
            if n == length:
                members[prefix] = decode_fa(prefix, k, alpha)
                return ("ready", prefix)
            return ("code", prefix)
        if s[0] == "ready":
            return ("run", s[1], 1) if a == SEPARATOR else dead
        if s[0] == "run":
            fa = members[s[1]]
            if a not in fa.alphabet:
                return dead
            return ("run", s[1], fa.transitions[(s[2], a)])
        return dead

    start = ("code", "")
    index = {start: 1}
    order = [start]
    todo = deque([start])
    trans = {}
    while todo:
        s = todo.popleft()
        for a in sigma:
            t = delta(s, a)
            if t not in index:
                index[t] = len(order) + 1
                order.append(t)
                todo.append(t)
            trans[(index[s], a)] = index[t]
    accepting = frozenset(index[s] for s in order if s[0] == "run" and s[2] in members[s[1]].accepting)
    return FA(len(order), sigma, trans, accepting)


def redirect(u: FA, state: int, symbol, target: int) -> FA:
    trans = dict(u.transitions)
    trans[(state, symbol)] = target
    return FA(u.num_states, u.alphabet, trans, u.accepting, u.initial)


def mutate(u: FA) -> FA:
    """Redirect the first transition (in state, symbol order) that enters an
    accepting state to a rejecting one."""
    rejecting = min(q for q in range(1, u.num_states + 1) if q not in u.accepting)
    for q in range(1, u.num_states + 1):
        for a in u.alphabet:
            if u.transitions[(q, a)] in u.accepting:
                return redirect(u, q, a, rejecting)
    raise ValueError("automaton has no transition into an accepting state")


@dataclass
class FAReport:
    ok: bool
    k: int
    class_size: int
    universal_states: int
    checked: int
    counterexample: Optional[tuple] = None  # (code, word, expected)

    @property
    def strict(self) -> bool:
        return self.universal_states > self.k


def verify_universal_fa(k: int, alphabet, max_len: int, u: Optional[FA] = None) -> FAReport:
    """Exhaustive check of ``U_k(enc(A) # w) == A(w)`` over the class and all
    words of length at most ``max_len``."""
    alpha = _alphabet(alphabet)
    members = enumerate_k_class(k, alpha)
    if u is None:
        u = build_universal_fa(k, alpha)
    words = [w for n in range(max_len + 1) for w in itertools.product(alpha, repeat=n)]
    checked = 0
    for a in members:
        code = tuple(encode_fa(a, k)) + (SEPARATOR,)
        for w in words:
            expected = run_fa(a, w)
            checked += 1
            if run_fa(u, code + w) != expected:
                return FAReport(False, k, len(members), u.num_states, checked, ("".join(code[:-1]), "".join(w), expected))
    return FAReport(u.num_states > k, k, len(members), u.num_states, checked)
