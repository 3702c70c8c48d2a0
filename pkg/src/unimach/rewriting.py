"""Semi-Thue systems and their translations to and from Turing machines.

``tm_to_sts`` turns each machine step into exactly one rewrite step on the
word ``[ left q right ]``.  ``sts_to_tm`` builds a nondeterministic machine
that, between two visits of its initial state at the left end marker,
performs exactly one rewrite of the word stored between the end markers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .machine import Configuration, Machine, check_configuration, step

LEFT_END = "["
RIGHT_END = "]"


@dataclass(frozen=True)
class SemiThue:
    alphabet: frozenset
    rules: tuple  # (lhs, rhs) word pairs

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        rules = tuple((tuple(l), tuple(r)) for l, r in self.rules)
        object.__setattr__(self, "rules", rules)
        for lhs, rhs in rules:
            if not lhs:
                raise ValueError("left-hand sides must be nonempty")
            bad = set(lhs + rhs) - self.alphabet
            if bad:
                raise ValueError(f"rule {lhs} -> {rhs} uses symbols outside the alphabet: {sorted(map(str, bad))}")


def _check(s: SemiThue, w) -> tuple:
    w = tuple(w)
    bad = set(w) - s.alphabet
    if bad:
        raise ValueError(f"word uses symbols outside the alphabet: {sorted(map(str, bad))}")
    return w


def sts_step(s: SemiThue, w) -> frozenset:
    w = _check(s, w)
    out = set()
    for lhs, rhs in s.rules:
        n = len(lhs)
        for i in range(len(w) - n + 1):
            if w[i : i + n] == lhs:
                out.add(w[:i] + rhs + w[i + n :])
    return frozenset(out)


def reach_exact(s: SemiThue, w, n: int) -> frozenset:
    """Words reachable in exactly ``n`` rewrite steps."""
    current = frozenset([_check(s, w)])
    for _ in range(n):
        current = frozenset(v for u in current for v in sts_step(s, u))
    return current


def reach_within(s: SemiThue, w, n: int) -> frozenset:
    """Words reachable in at most ``n`` rewrite steps."""
    w = _check(s, w)
    seen = {w}
    frontier = [w]
    for _ in range(n):
        frontier = [v for u in frontier for v in sts_step(s, u) if v not in seen]
        frontier = list(dict.fromkeys(frontier))
        seen.update(frontier)
    return frozenset(seen)


def derivable(s: SemiThue, source, target, fuel: int) -> str:
    """``"yes"`` if ``target`` is reachable within ``fuel`` steps, ``"no"``
    if the search space was exhausted without it, ``"unknown"`` otherwise."""
    source, target = _check(s, source), _check(s, target)
    seen = {source}
    frontier = deque([source])
    for _ in range(fuel + 1):
        if target in frontier:
            return "yes"
        nxt = deque()
        for u in frontier:
            for v in sts_step(s, u):
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        if not nxt:
            return "no"
        frontier = nxt
    return "unknown"


# -- machines as rewriting systems -----------------------------------------------


@dataclass(frozen=True)
class MachineRewriting:
    sts: SemiThue
    machine: Machine
    origin: tuple  # per rewrite rule: (machine rule, "window" | "end")

    def embed(self, c: Configuration) -> tuple:
        check_configuration(self.machine, c)
        body = tuple(("s", i) for i in c.left) + (("q", c.state),) + tuple(("s", i) for i in c.right)
        return (LEFT_END,) + body + (RIGHT_END,)

    def unembed(self, word) -> Optional[Configuration]:
        word = tuple(word)
        if len(word) < 3 or word[0] != LEFT_END or word[-1] != RIGHT_END:
            return None
        body = word[1:-1]
        heads = [i for i, x in enumerate(body) if x[0] == "q"]
        if len(heads) != 1 or heads[0] == len(body) - 1:
            return None
        h = heads[0]
        return Configuration(
            tuple(x[1] for x in body[:h]), body[h][1], tuple(x[1] for x in body[h + 1 :])
        )

    @property
    def end_rules(self) -> int:
        return sum(1 for _, kind in self.origin if kind == "end")


def tm_rule_count(m: Machine) -> int:
    """``|P_N| + (|Sigma| + 1) * |P_LR|``."""
    moving = sum(1 for r in m.rules if r.move != "N")
    return len(m.rules) - moving + (m.num_symbols + 1) * moving


def tm_to_sts(m: Machine) -> MachineRewriting:
    syms = [("s", i) for i in range(1, m.num_symbols + 1)]
    blank = ("s", m.blank)
    rules, origin = [], []
    for r in m.canonical_rules():
        q, q2 = ("q", r.from_state), ("q", r.to_state)
        read, write = ("s", r.read), ("s", r.write)
        if r.move == "N":
            rules.append(((q, read), (q2, write)))
            origin.append((r, "window"))
        elif r.move == "R":
            for t in syms:
                rules.append(((q, read, t), (write, q2, t)))
                origin.append((r, "window"))
            rules.append(((q, read, RIGHT_END), (write, q2, blank, RIGHT_END)))
            origin.append((r, "end"))
        else:
            for t in syms:
                rules.append(((t, q, read), (q2, t, write)))
                origin.append((r, "window"))
            rules.append(((LEFT_END, q, read), (LEFT_END, q2, blank, write)))
            origin.append((r, "end"))
    alphabet = set(syms) | {("q", j) for j in range(1, m.num_states + 1)} | {LEFT_END, RIGHT_END}
    return MachineRewriting(SemiThue(alphabet, tuple(rules)), m, tuple(origin))


# -- rewriting systems as machines -----------------------------------------------

BLANK, LEFT, RIGHT, HOLE = 1, 2, 3, 4


@dataclass(frozen=True)
class RewritingMachine:
    """A machine simulating a semi-Thue system on tapes ``LEFT w RIGHT``.

    Each rewrite takes one round trip that starts and ends in state 1 on the
    left marker; ``loop_state`` names that state.
    """

    machine: Machine
    sts: SemiThue
    letters: tuple  # letter i is machine symbol i + 5
    loop_state: int = 1

    def symbol(self, letter) -> int:
        return self.letters.index(letter) + HOLE + 1

    def embed(self, w) -> tuple:
        return (LEFT,) + tuple(self.symbol(a) for a in _check(self.sts, w)) + (RIGHT,)

    def unembed(self, tape) -> Optional[tuple]:
        """Inverse of ``embed``, ignoring blanks left behind by deletions."""
        tape = tuple(tape)
        while tape and tape[-1] == BLANK:
            tape = tape[:-1]
        if len(tape) < 2 or tape[0] != LEFT or tape[-1] != RIGHT:
            return None
        body = tape[1:-1]
        if any(x <= HOLE for x in body):
            return None
        return tuple(self.letters[x - HOLE - 1] for x in body)


def sts_to_tm(s: SemiThue) -> RewritingMachine:
    letters = tuple(sorted(s.alphabet, key=repr))
    sym = {a: i + HOLE + 1 for i, a in enumerate(letters)}
    letter_syms = list(sym.values())
    rules = []

    def add(q, read, q2, write, move):
        rules.append((q, read, q2, write, move))

    add("loop", LEFT, "scan", LEFT, "R")
    add("loop", LEFT, "final", LEFT, "N")
    for x in letter_syms:
        add("scan", x, "scan", x, "R")
    for x in letter_syms + [RIGHT, BLANK]:
        add("ret", x, "ret", x, "L")
    add("ret", LEFT, "loop", LEFT, "N")

    inserts, deletes = set(), set()
    for k, (lhs, rhs) in enumerate(s.rules):
        u = [sym[a] for a in lhs]
        v = [sym[a] for a in rhs]
        common = min(len(u), len(v))
        if len(v) == len(u):
            after = "ret"
        elif len(v) > len(u):
            after = ("ins", tuple(v[common:]))
            inserts.add(after)
        else:
            after = ("after", k)
            deletes.add(len(u) - len(v))
            for x in letter_syms:
                add(after, x, ("delgo", len(u) - len(v)), HOLE, "R")

        def write(i):
            return ("write", k, i) if i < common else after

        def back(j):
            return write(0) if j == 0 else ("back", k, j)

        # match u left to right from a scan position, then return to its start
        for i, x in enumerate(u):
            src = "scan" if i == 0 else ("match", k, i)
            if i < len(u) - 1:
                add(src, x, ("match", k, i + 1), x, "R")
            elif len(u) == 1:
                add(src, x, back(0), x, "N")
            else:
                add(src, x, back(len(u) - 2), x, "L")
        for j in range(1, len(u) - 1):
            for x in letter_syms:
                add(back(j), x, back(j - 1), x, "L")
        # overwrite the common part, leaving the head just behind it
        for i in range(common):
            for x in letter_syms:
                add(write(i), x, write(i + 1), v[i], "R")
    _insertions(add, inserts, letter_syms)
    _deletions(add, deletes, letter_syms)

    names = {"loop": 1}
    for q, _, q2, _, _ in rules:
        for name in (q, q2):
            if name != "final" and name not in names:
                names[name] = len(names) + 1
    names["final"] = len(names) + 1
    numbered = [(names[a], b, names[c], d, e) for a, b, c, d, e in dict.fromkeys(rules)]
    m = Machine(len(names), HOLE + len(letters), numbered, deterministic=False, name="rewriting")
    return RewritingMachine(m, s, letters)


def _insertions(add, inserts, letter_syms):
    """States ``("ins", queue)`` write the queue head, enqueue the symbol read,
    and drain the queue once past the right marker."""
    todo = sorted(inserts)
    seen = set()
    while todo:
        key = todo.pop()
        if key in seen:
            continue
        seen.add(key)
        queue = key[1]
        for x in letter_syms + [RIGHT]:
            nxt = ("ins", queue[1:] + (x,))
            add(key, x, nxt, queue[0], "R")
            todo.append(nxt)
        rest = queue[1:]
        if rest:
            add(key, BLANK, ("ins", rest), queue[0], "R")
            todo.append(("ins", rest))
        else:
            add(key, BLANK, "ret", queue[0], "L")


def _deletions(add, deletes, letter_syms):
    """Deleting ``d`` cells at a hole marker: walk to the right marker, then
    walk back shifting every cell ``d`` places left."""
    for d in sorted(deletes):
        go = ("delgo", d)
        for x in letter_syms:
            add(go, x, go, x, "R")
        first = (BLANK,) * (d - 1) + (RIGHT,)
        add(go, RIGHT, ("del", first), BLANK, "L")
        todo = [first]
        seen = set()
        while todo:
            queue = todo.pop()
            if queue in seen:
                continue
            seen.add(queue)
            for x in letter_syms:
                nxt = queue[1:] + (x,)
                add(("del", queue), x, ("del", nxt), queue[0], "L")
                todo.append(nxt)
            add(("del", queue), HOLE, "ret", queue[0], "L")


def rewrite_rounds(rm: RewritingMachine, w, rounds: int, fuel_per_round: int = 10**5) -> list:
    """Words with which the machine can stop after exactly ``r`` rewrites,
    for ``r = 0..rounds``; the search is synchronized on visits to the loop
    state."""
    m = rm.machine
    start = m.initial(rm.embed(w))
    level = {start}
    out = []
    for _ in range(rounds + 1):
        stopped = set()
        returned = set()
        for c in level:
            frontier = {c}
            for _ in range(fuel_per_round):
                nxt = set()
                for e in frontier:
                    for d in step(m, e):
                        if d.state == m.final:
                            stopped.add(rm.unembed(d.word))
                        elif d.state == rm.loop_state:
                            returned.add(d)
                        else:
                            nxt.add(d)
                if not nxt:
                    break
                frontier = nxt
            else:
                raise RuntimeError("a rewrite round did not finish within its step budget")
        out.append(frozenset(stopped))
        level = returned
    return out
