"""A fixed universal Turing machine over unary codes.

The tape of the universal machine ``U`` at every checkpoint reads::

    x 1^m 0 <program code> # y <configuration code>

where ``m`` is the number of states of the simulated machine (so ``U`` can
recognise the final state ``q_m``) and both codes are the unary ones from
:mod:`unimach.codec`.  ``U`` sits in its fetch state on the ``x`` cell at each
checkpoint; one lap of its control loop simulates one step of ``M``:

1. fetch: mark the state block of the configuration with ``S``;
2. match: walk a pointer ``P`` over the rules, comparing the state and
   scanned-symbol fields by ticking off ``1``s (``A`` in the program,
   ``B`` in the configuration);
3. when no rule matches, compare the state block with the ``1^m`` header:
   equal means ``M`` is final (it has no rules there) and ``U`` enters its
   own final state; otherwise ``M`` is stuck and so is ``U``;
4. execute: delete the state block, rewrite the scanned block, move the
   head marker ``T`` and re-insert the new state block in front of it.
   Inserting and deleting cells shifts the tail of the tape one cell at a
   time, carrying the displaced symbol in the control state.

The nondeterministic variant differs only at the end of a successful match,
where it may also skip the matching rule and keep looking.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .codec import UNARY, CodecError, Scheme, decode_config, encode_config, encode_program
from .machine import Configuration, DomainError, FuelExhausted, Machine, check_configuration, check_word

ALPHABET = ("_", "0", "1", "#", "x", "y", "A", "B", "P", "S", "T", "Z")
SYMBOL = {ch: i + 1 for i, ch in enumerate(ALPHABET)}
CHAR = {i + 1: ch for i, ch in enumerate(ALPHABET)}

FETCH = "fetch"
FINAL = "final"
STUCK = "stuck"

DEFAULT_FUEL = 10**6


class UniversalCorruption(RuntimeError):
    """The universal tape no longer decodes; this indicates a broken ``U``."""


class _Builder:
    def __init__(self):
        self.table = {}
        self.states = [FETCH]

    def on(self, state, syms, move, nxt, write=None):
        for s in syms:
            self.table.setdefault((state, s), []).append((write or s, move, nxt))
            for name in (state, nxt):
                if name not in self.states:
                    self.states.append(name)

    def scan(self, state, over, move, stops):
        """Move over ``over`` in direction ``move``; ``stops`` maps a symbol to
        ``(write, move, next)``."""
        self.on(state, over, move, state)
        for sym, (write, mv, nxt) in stops.items():
            self.on(state, sym, mv, nxt, write)

    # The shifting routines only generate carries for the neighbour pairs
    # ``pairs`` (left symbol, right symbol) that the tail of the tape can
    # contain, and ``last`` lists the symbols that can end the tape.

    def delete(self, name, at, first, pairs, last, nxt):
        """Delete the scanned cell (one of ``at``), shifting the tail left;
        ends on the same cell.  ``first`` lists the symbols that can follow it."""
        carried = sorted(set("".join(pairs)) | set(first) | set(last))
        self.on(name, at, "R", f"{name}.seek", write="Z")
        self.scan(f"{name}.seek", carried, "R", {"_": ("_", "L", f"{name}.last")})
        for c in last:
            self.on(f"{name}.last", c, "L", f"{name}.carry{c}", write="_")
        for t, c in pairs:
            self.on(f"{name}.carry{c}", t, "L", f"{name}.carry{t}", write=c)
        for c in first:
            self.on(f"{name}.carry{c}", "Z", "N", nxt, write=c)

    def insert(self, name, sym, at, pairs, last, nxt):
        """Write ``sym`` on the scanned cell (one of ``at``) and shift the old
        tail right by one; ends on the new last cell of the tape."""
        for a in at:
            self.on(name, a, "R", f"{name}.carry{a}", write=sym)
        for c, t in pairs:
            self.on(f"{name}.carry{c}", t, "R", f"{name}.carry{t}", write=c)
        for c in last:
            self.on(f"{name}.carry{c}", "_", "N", nxt, write=c)

    def compare(self, name, field, anchor, cfg_block, on_eq, on_ne, extra="", longer=True):
        """Compare a unary field of the program with a unary block of the
        configuration.  Entry ``{name}.back`` scans left to ``anchor``;
        ``extra`` lists further marks that may lie on the way.  ``longer``
        says whether the block can be longer than the field."""
        between = "01#y" + extra
        self.scan(f"{name}.back", "01ABS#y" + extra, "L", {anchor: (anchor, "R", f"{name}.f0")})
        for k in range(field):
            self.on(f"{name}.f{k}", "1", "R", f"{name}.f{k}")
            self.on(f"{name}.f{k}", "0", "R", f"{name}.f{k + 1}")
        scan = f"{name}.f{field}"
        self.on(scan, "A", "R", scan)
        self.on(scan, "1", "R", f"{name}.tocfg", write="A")
        self.on(scan, "0", "R", f"{name}.tocfg0")
        for target, then in ((f"{name}.tocfg", f"{name}.tick"), (f"{name}.tocfg0", f"{name}.check")):
            if cfg_block == "state":
                self.scan(target, between, "R", {"S": ("S", "R", then)})
            else:
                self.scan(target, between, "R", {"S": ("S", "R", f"{target}.skip")})
                self.scan(f"{target}.skip", "1", "R", {"0": ("0", "R", then)})
        self.on(f"{name}.tick", "B", "R", f"{name}.tick")
        self.on(f"{name}.tick", "1", "L", f"{name}.back", write="B")
        self.on(f"{name}.tick", "0", "N", on_ne)
        self.on(f"{name}.check", "B", "R", f"{name}.check")
        if longer:
            self.on(f"{name}.check", "1", "N", on_ne)
        self.on(f"{name}.check", "0", "N", on_eq)

    def sweep_left(self, state, over, convert, nxt, stop="x"):
        """Scan left to ``stop`` rewriting marks per ``convert``; then enter
        ``nxt`` without moving."""
        for sym in over:
            self.on(state, sym, "L", state, write=convert.get(sym))
        self.on(state, stop, "N", nxt)


# neighbour pairs inside a run of symbol blocks 1^i 0, and around the
# head block 1^i T
BLOCKS = ("11", "10", "01")
HEAD = BLOCKS + ("1T", "T1")


def _program(nondeterministic: bool) -> _Builder:
    b = _Builder()

    # fetch: walk to the configuration and mark its state block
    b.on(FETCH, "x", "R", "to#")
    b.scan("to#", "01", "R", {"#": ("#", "R", "aty")})
    b.on("aty", "y", "R", "blk")
    b.on("blk", "1", "R", "inblk")
    b.on("blk", "0", "L", "home", write="S")
    b.scan("inblk", "1", "R", {"0": ("0", "R", "blk")})
    b.scan("home", "01#y", "L", {"x": ("x", "R", "ptr")})
    b.scan("ptr", "1", "R", {"0": ("P", "R", "rule")})

    # match: try the rule right after the pointer
    b.on("rule", "1", "R", "q.tocfg", write="A")
    b.on("rule", "#", "N", "hdr.back")

    # no rule applies: U halts in its final state iff the state block
    # equals the 1^m header, and in the stuck state otherwise
    b.compare("hdr", 0, "x", "state", "hdr.eq", STUCK, extra="P", longer=False)
    b.sweep_left("hdr.eq", "01AB#ySP", {"A": "1", "B": "1", "S": "0", "P": "0"}, FINAL)
    b.compare("q", 0, "P", "state", "q.eq", "q.ne")
    b.compare("s", 1, "P", "scanned", "s.eq", "s.ne")
    unmark = {"A": "1", "B": "1"}
    b.sweep_left("q.eq", "01AB#yS", unmark, "s.back", stop="P")
    b.sweep_left("q.ne", "01AB#yS", unmark, "adv", stop="P")
    b.sweep_left("s.ne", "01AB#yS", unmark, "adv", stop="P")
    b.sweep_left("s.eq", "01AB#yS", unmark, "chosen", stop="P")
    b.on("chosen", "P", "R", "exec")
    if nondeterministic:
        b.on("chosen", "P", "R", "adv.f0", write="0")

    # advance the pointer past the current rule (five fields and a terminator)
    b.on("adv", "P", "R", "adv.f0", write="0")
    for k in range(5):
        b.on(f"adv.f{k}", "1", "R", f"adv.f{k}")
        b.on(f"adv.f{k}", "0", "R", f"adv.f{k + 1}")
    b.on("adv.f5", "0", "R", "rule", write="P")

    # execute: drop the state block
    b.scan("exec", "01#y", "R", {"S": ("S", "N", "dels")})
    b.delete("dels", "S1", "01", BLOCKS, "0", "dels.next")
    b.on("dels.next", "1", "N", "dels")
    b.on("dels.next", "0", "N", "dels.last0")
    b.delete("dels.last0", "0", "1", BLOCKS, "0", "markT")
    b.scan("markT", "1", "R", {"0": ("T", "L", "delc")})

    # empty the scanned block, then copy the written symbol (field 3) into it
    b.on("delc", "1", "N", "delc.rm")
    b.on("delc", "0y", "R", "wr.back")
    b.delete("delc.rm", "1", "T", BLOCKS + ("T1",), "0T", "delc.again")
    b.on("delc.again", "T", "L", "delc")
    b.scan("wr.back", "01TAy#", "L", {"P": ("P", "R", "wr.f0")})
    for k in range(3):
        b.on(f"wr.f{k}", "1", "R", f"wr.f{k}")
        b.on(f"wr.f{k}", "0", "R", f"wr.f{k + 1}")
    b.on("wr.f3", "A", "R", "wr.f3")
    b.on("wr.f3", "1", "R", "wr.tocfg", write="A")
    b.on("wr.f3", "0", "L", "wr.done")
    b.scan("wr.tocfg", "01#y", "R", {"T": ("T", "N", "wr.ins")})
    b.insert("wr.ins", "1", "T", BLOCKS + ("T1",), "0T", "wr.back")
    for sym in "01A":
        b.on("wr.done", sym, "L", "wr.done", write="1" if sym == "A" else None)
    b.on("wr.done", "P", "R", "mv.f0")

    # read the move (field 4) and shift the head marker
    for k in range(4):
        b.on(f"mv.f{k}", "1", "R", f"mv.f{k}")
        b.on(f"mv.f{k}", "0", "R", f"mv.f{k + 1}")
    b.on("mv.f4", "1", "R", "mv.d1")
    b.on("mv.d1", "0", "R", "go.L")
    b.on("mv.d1", "1", "R", "mv.d2")
    b.on("mv.d2", "0", "R", "go.N")
    b.on("mv.d2", "1", "R", "go.R")
    b.scan("go.N", "01#y", "R", {"T": ("T", "L", "st.l")})
    for d in "LR":
        b.scan(f"go.{d}", "01#y", "R", {"T": ("T", "N", f"move.{d}")})
    b.on("move.R", "T", "R", "move.R1", write="0")
    b.on("move.R1", "1", "R", "move.R2")
    b.on("move.R1", "_", "R", "move.Rblank", write="1")
    b.scan("move.R2", "1", "R", {"0": ("T", "N", "st")})
    b.on("move.Rblank", "_", "N", "st", write="T")
    b.on("move.L", "T", "L", "move.L1", write="0")
    b.scan("move.L1", "1", "L", {"0": ("T", "N", "st"), "y": ("y", "R", "lend")})
    b.insert("lend", "T", "1", BLOCKS, "0", "lend.back")
    b.scan("lend.back", "01T", "L", {"y": ("y", "R", "lend2")})
    b.insert("lend2", "1", "T", BLOCKS + ("T1",), "0", "lend2.back")
    b.scan("lend2.back", "01T", "L", {"y": ("y", "R", "lend3")})
    b.on("lend3", "1", "R", "st")

    # rebuild the state block S 1^q' 0 in front of the head block
    b.on("st", "T", "L", "st.l")
    b.scan("st.l", "1", "L", {"0": ("0", "R", "st.insS"), "y": ("y", "R", "st.insS")})
    b.insert("st.insS", "S", "1", HEAD, "0T", "st.backS")
    b.scan("st.backS", "01T", "L", {"S": ("S", "R", "st.ins0")})
    b.insert("st.ins0", "0", "1", HEAD, "0T", "st.copy")
    b.scan("st.copy", "01STy#A", "L", {"P": ("P", "R", "st.f0")})
    for k in range(2):
        b.on(f"st.f{k}", "1", "R", f"st.f{k}")
        b.on(f"st.f{k}", "0", "R", f"st.f{k + 1}")
    b.on("st.f2", "A", "R", "st.f2")
    b.on("st.f2", "1", "R", "st.tocfg", write="A")
    b.on("st.f2", "0", "R", "fin")
    b.scan("st.tocfg", "01#y", "R", {"S": ("S", "R", "st.ins1")})
    b.insert("st.ins1", "1", "01", HEAD, "0T", "st.copy")

    # clear every mark and return to x
    b.scan("fin", "01S#y", "R", {"T": ("0", "L", "fin.sweep")})
    b.sweep_left("fin.sweep", "01AS#yP", {"A": "1", "S": "0", "P": "0"}, FETCH)
    return b


def _assemble(b: _Builder, name: str, nondeterministic: bool) -> Machine:
    names = [s for s in b.states if s not in (FETCH, FINAL)]
    order = [FETCH] + names + [FINAL]
    index = {s: i + 1 for i, s in enumerate(order)}
    rules = []
    for (state, sym), outs in b.table.items():
        for write, move, nxt in outs:
            rules.append((index[state], SYMBOL[sym], index[nxt], SYMBOL[write], move))
    m = Machine(len(order), len(ALPHABET), tuple(rules), deterministic=not nondeterministic, name=name)
    object.__setattr__(m, "_state_names", tuple(order))
    return m


@lru_cache(maxsize=None)
def build_utm() -> Machine:
    """The universal deterministic machine (the same object on every call)."""
    return _assemble(_program(False), "U", False)


@lru_cache(maxsize=None)
def build_untm() -> Machine:
    """The universal nondeterministic machine."""
    return _assemble(_program(True), "U-nondet", True)


def state_index(u: Machine, name: str) -> int:
    return u._state_names.index(name) + 1 if hasattr(u, "_state_names") else {FETCH: 1, FINAL: u.num_states}[name]


def rule_table_hash(u: Machine) -> str:
    text = "\n".join(" ".join(map(str, r)) for r in sorted(u.rules))
    return hashlib.sha256(f"{u.num_states} {u.num_symbols}\n{text}".encode()).hexdigest()


def without_rule(u: Machine, k: int) -> Machine:
    """Copy of ``u`` with its ``k``-th rule removed (mutation testing)."""
    rules = u.rules[:k] + u.rules[k + 1 :]
    m = Machine(u.num_states, u.num_symbols, rules, u.deterministic, u.blank, f"{u.name}-r{k}")
    if hasattr(u, "_state_names"):
        object.__setattr__(m, "_state_names", u._state_names)
    return m


# -- tape layout ---------------------------------------------------------------


def program_region(m: Machine) -> str:
    return "1" * m.num_states + "0" + encode_program(Scheme.for_machine(UNARY, m), m)


@dataclass(frozen=True)
class UniversalLayout:
    program_region: str
    config_region: str

    @property
    def text(self) -> str:
        return "x" + self.program_region + "#y" + self.config_region

    @property
    def markers(self) -> tuple:
        return 0, len(self.program_region) + 2

    @property
    def separator(self) -> int:
        return len(self.program_region) + 1


def layout(m: Machine, c: Configuration, program: Optional[str] = None) -> UniversalLayout:
    """Tape layout for ``c``; ``program`` replaces the program region (used
    to test ``U`` on damaged tapes)."""
    region = program_region(m) if program is None else program
    return UniversalLayout(region, encode_config(Scheme.for_machine(UNARY, m), c))


def _check_simulable(m: Machine, w) -> tuple:
    w = tuple(w)
    check_word(m, w)
    if m.blank != 1:
        raise DomainError("the universal machine expects s1 as the blank symbol")
    return w


def assemble_initial(m: Machine, w) -> Configuration:
    """Initial configuration ``q_1 x <program> # y <q_1 w>`` of ``U``."""
    w = _check_simulable(m, w)
    text = layout(m, m.initial(w)).text
    return Configuration((), 1, tuple(SYMBOL[ch] for ch in text))


def split_tape(text: str) -> tuple:
    """Return ``(program_region, config_region)`` of a universal tape."""
    text = text.strip("_")
    if not text.startswith("x") or text.count("#") != 1 or "#y" not in text:
        raise UniversalCorruption(f"tape does not have the x...#y... layout: {text!r}")
    prog, cfg = text[1:].split("#y")
    return prog, cfg


def decode_tape(m: Machine, text: str) -> Configuration:
    prog, cfg = split_tape(text)
    try:
        return decode_config(Scheme.for_machine(UNARY, m), cfg)
    except CodecError as exc:
        raise UniversalCorruption(f"configuration region does not decode: {exc}") from None


# -- running U -----------------------------------------------------------------


class _Compiled:
    def __init__(self, u: Machine):
        self.k = u.num_symbols + 1
        self.fetch = state_index(u, FETCH)
        self.final = u.num_states
        self.stuck = state_index(u, STUCK) if hasattr(u, "_state_names") else None
        self.table = [None] * ((u.num_states + 1) * self.k)
        for r in u.rules:
            key = r.from_state * self.k + r.read
            entry = (r.write, {"L": -1, "N": 0, "R": 1}[r.move], r.to_state)
            if self.table[key] is None:
                self.table[key] = [entry]
            else:
                self.table[key].append(entry)
        self.det = [t[0] if t and len(t) == 1 else None for t in self.table]
        self.blank = u.blank


@lru_cache(maxsize=8)
def _compile(u: Machine) -> _Compiled:
    return _Compiled(u)


@dataclass
class Checkpoint:
    u_step: int
    decoded: Configuration


@dataclass
class UniversalRun:
    result: Optional[tuple]
    u_steps: int
    checkpoints: list
    outcome: str  # final | stuck | timeout | corrupted | violation
    peak_cells: int = 0
    violation_step: Optional[int] = None
    program_intact: bool = True
    final_tape: str = ""

    @property
    def halted_final(self) -> bool:
        return self.outcome == "final"


def _tape_text(tape) -> str:
    return "".join(CHAR[s] for s in tape)


def run_deterministic(u: Machine, tape: list, fuel: int, limit: Optional[int] = None, on_fetch=None):
    """Run a deterministic ``u`` from its fetch state on the leftmost cell.

    Returns ``(state, steps, peak_cells, violation_step, halted)`` where
    ``halted`` means no rule applied.  ``tape`` is
    modified in place.  ``limit`` caps the number of tape cells.
    """
    cu = _compile(u)
    k, det, blank, fetch, final = cu.k, cu.det, cu.blank, cu.fetch, cu.final
    state, head, steps = fetch, 0, 0
    size = len(tape)
    if limit is not None and size > limit:
        return state, 0, size, 0, False
    while steps < fuel:
        entry = det[state * k + tape[head]]
        if entry is None:
            return state, steps, size, None, state != final
        write, move, state = entry
        tape[head] = write
        steps += 1
        if move == 1:
            head += 1
            if head == size:
                tape.append(blank)
                size += 1
        elif move == -1:
            if head == 0:
                tape.insert(0, blank)
                size += 1
            else:
                head -= 1
        if limit is not None and size > limit:
            return state, steps, size, steps, False
        if state == fetch and on_fetch is not None:
            on_fetch(steps, tape)
        if state == final:
            break
    return state, steps, size, None, False


def simulate_universal(
    m: Machine,
    w,
    fuel: int = DEFAULT_FUEL,
    utm: Optional[Machine] = None,
    limit: Optional[int] = None,
    program: Optional[str] = None,
) -> UniversalRun:
    """Run ``U`` on the encoding of ``m`` and ``w`` for at most ``fuel`` steps of ``U``."""
    w = _check_simulable(m, w)
    u = utm or build_utm()
    if not u.deterministic:
        raise DomainError("simulate_universal needs a deterministic universal machine")
    start = layout(m, m.initial(w), program)
    tape = [SYMBOL[ch] for ch in start.text]
    checkpoints = [Checkpoint(0, m.initial(w))]
    intact = [True]

    def on_fetch(steps, tape):
        prog, _ = split_tape(_tape_text(tape))
        intact[0] = intact[0] and prog == start.program_region
        checkpoints.append(Checkpoint(steps, decode_tape(m, _tape_text(tape))))

    cu = _compile(u)
    state, steps, peak, violation, halted = run_deterministic(u, tape, fuel, limit, on_fetch)
    text = _tape_text(tape)
    if violation is not None:
        outcome = "violation"
    elif state == cu.final:
        outcome = "final"
    elif halted:
        outcome = "stuck" if state == cu.stuck else "corrupted"
    else:
        outcome = "timeout"
    result = None
    if outcome == "final":
        prog, _ = split_tape(text)
        intact[0] = intact[0] and prog == start.program_region
        result = decode_tape(m, text).word
    return UniversalRun(result, steps, checkpoints, outcome, peak, violation, intact[0], text)


class _LapDone(Exception):
    pass


def universal_lap(m: Machine, c: Configuration, fuel: int = DEFAULT_FUEL, utm: Optional[Machine] = None):
    """Run ``U`` from the layout of an arbitrary configuration ``c`` up to
    its next checkpoint.

    Returns ``(tape_text, decoded)`` at that checkpoint, or ``None`` when
    ``U`` halts first (``c`` is final or stuck).
    """
    if m.blank != 1:
        raise DomainError("the universal machine expects s1 as the blank symbol")
    check_configuration(m, c)
    u = utm or build_utm()
    tape = [SYMBOL[ch] for ch in layout(m, c).text]
    found = []

    def on_fetch(steps, tape):
        text = _tape_text(tape)
        found.append((text, decode_tape(m, text)))
        raise _LapDone

    try:
        state, steps, _, _, halted = run_deterministic(u, tape, fuel, None, on_fetch)
    except _LapDone:
        return found[0]
    if not halted and state != _compile(u).final:
        raise FuelExhausted(fuel)
    return None


def verify_step_correspondence(m: Machine, w, fuel: int = DEFAULT_FUEL, utm: Optional[Machine] = None):
    """Compare the checkpoints of ``U`` with the direct run of ``m``.

    Returns ``(ok, report)``; ``report`` is empty on success and otherwise
    names the first divergence.
    """
    from .machine import trace

    run = simulate_universal(m, w, fuel, utm)
    seen = [cp.decoded for cp in run.checkpoints]
    direct = trace(m, m.initial(tuple(w)), len(seen))
    if not run.program_intact:
        return False, "program region changed during the simulation"
    for k, (a, b) in enumerate(zip(seen, direct)):
        if a != b:
            return False, f"checkpoint {k}: U decodes {a}, direct run has {b}"
    if run.outcome in ("final", "stuck"):
        if len(seen) != len(direct):
            return False, f"U stopped after {len(seen)} checkpoints, direct run has {len(direct)} configurations"
        last = direct[-1]
        if (last.state == m.final) != (run.outcome == "final"):
            return False, f"U outcome {run.outcome} but direct run ends in {last}"
    elif run.outcome != "timeout":
        return False, f"U halted abnormally ({run.outcome}) after {run.u_steps} steps"
    elif len(seen) > len(direct):
        return False, "U produced more checkpoints than the direct run has steps"
    return True, ""


# -- nondeterministic search ---------------------------------------------------


@dataclass
class NondetSearch:
    finals: frozenset
    u_steps: int
    checkpoints: int
    violations: list = field(default_factory=list)
    exhausted: bool = True


def simulate_universal_nondet(
    m: Machine,
    w,
    fuel: int,
    u_fuel: int = 10**7,
    utm: Optional[Machine] = None,
    limit: Optional[int] = None,
    program: Optional[str] = None,
) -> NondetSearch:
    """Breadth-first search of ``U``'s computations, level by level in
    simulated steps.

    ``fuel`` bounds the number of simulated steps (checkpoint laps), so the
    result is comparable with :func:`unimach.machine.reachable_finals` at the
    same fuel.  Paths whose tape would exceed ``limit`` cells are cut and
    reported as ``(depth, u_step_on_path)``.
    """
    w = _check_simulable(m, w)
    u = utm or build_untm()
    cu = _compile(u)
    k, table, blank, fetch, final = cu.k, cu.table, cu.blank, cu.fetch, cu.final
    start = tuple(SYMBOL[ch] for ch in layout(m, m.initial(w), program).text)
    seen = {start}
    level = [start]
    finals = set()
    violations = []
    total = 0
    checkpoints = 1
    exhausted = True

    def arrived(state, tape, depth) -> bool:
        """Record a final tape or a new checkpoint; True ends the path's lap."""
        nonlocal exhausted
        if state == final:
            finals.add(decode_tape(m, _tape_text(tape)).word)
            return True
        if state == fetch:
            key = tuple(tape)
            if depth >= fuel:
                exhausted = False
            elif key not in seen:
                seen.add(key)
                nxt.append(key)
            return True
        return False

    for depth in range(fuel + 1):
        nxt = []
        for tape0 in level:
            # each element: (state, head, tape list, steps on this lap)
            stack = [(fetch, 0, list(tape0), 0)]
            while stack:
                state, head, tape, lap = stack.pop()
                if limit is not None and len(tape) > limit:
                    violations.append((depth, lap))
                    continue
                while lap == 0 or not arrived(state, tape, depth):
                    if total >= u_fuel:
                        raise FuelExhausted(u_fuel)
                    entries = table[state * k + tape[head]]
                    if not entries:
                        break
                    if len(entries) > 1:
                        for write, move, to in entries[1:]:
                            t = list(tape)
                            h = _apply(t, head, write, move, blank)
                            stack.append((to, h, t, lap + 1))
                            total += 1
                    write, move, state = entries[0]
                    head = _apply(tape, head, write, move, blank)
                    lap += 1
                    total += 1
                    if limit is not None and len(tape) > limit:
                        violations.append((depth, lap))
                        break
        if not nxt:
            break
        checkpoints += len(nxt)
        level = nxt
    return NondetSearch(frozenset(finals), total, checkpoints, violations, exhausted)


def _apply(tape: list, head: int, write: int, move: int, blank: int) -> int:
    tape[head] = write
    if move == 1:
        head += 1
        if head == len(tape):
            tape.append(blank)
    elif move == -1:
        if head == 0:
            tape.insert(0, blank)
        else:
            head -= 1
    return head
