"""Unary and binary codes for programs and configurations.

Unary codes use ``s_i -> 1^i 0`` with the state written as a ``0 1^j 0``
block in front of the scanned symbol.  Binary codes use fixed-width,
zero-based fields: ``bin(i-1) a`` for symbols and ``c bin(j-1) c`` for the
state.  The packed variant rewrites ``0, 1, a, c`` as ``00, 01, 10, 11``.

Every encoder and decoder is also available as a :class:`DFST` working on a
stream of tagged tokens ``('s', i)``, ``('q', j)`` and ``('d', move)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .machine import MOVES, Configuration, Machine, Rule
from .transducer import DFST, symbolwise_dfst

UNARY, BINARY, PACKED = "unary", "binary", "packed"
KINDS = (UNARY, BINARY, PACKED)

UNIVERSAL_ALPHABET = frozenset("01ac#xy")

PACK = {"0": "00", "1": "01", "a": "10", "c": "11"}
UNPACK = {v: k for k, v in PACK.items()}

MOVE_CODE = {"L": 1, "N": 2, "R": 3}
CODE_MOVE = {v: k for k, v in MOVE_CODE.items()}


class CodecError(ValueError):
    """Malformed code word or a value the scheme cannot represent."""


def clog2(n: int) -> int:
    return (n - 1).bit_length()


@dataclass(frozen=True)
class Scheme:
    kind: str
    num_symbols: int
    num_states: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.num_symbols < 1 or self.num_states < 2:
            raise ValueError("scheme needs |Sigma| >= 1 and |Q| >= 2")

    @classmethod
    def for_machine(cls, kind: str, m: Machine) -> "Scheme":
        return cls(kind, m.num_symbols, m.num_states)

    @property
    def width_s(self) -> int:
        return clog2(self.num_symbols)

    @property
    def width_q(self) -> int:
        return clog2(self.num_states)


def _bin(value: int, width: int) -> str:
    return format(value, "b").zfill(width) if width else ""


def pack(code: str) -> str:
    try:
        return "".join(PACK[ch] for ch in code)
    except KeyError as exc:
        raise CodecError(f"cannot pack symbol {exc.args[0]!r}") from None


def unpack(code: str) -> str:
    if len(code) % 2:
        raise CodecError("packed code has odd length")
    try:
        return "".join(UNPACK[code[i : i + 2]] for i in range(0, len(code), 2))
    except KeyError as exc:
        raise CodecError(f"bad packed pair {exc.args[0]!r}") from None


# -- token streams -----------------------------------------------------------


def config_tokens(c: Configuration) -> tuple:
    return tuple(("s", i) for i in c.left) + (("q", c.state),) + tuple(("s", i) for i in c.right)


def tokens_to_config(tokens) -> Configuration:
    tokens = list(tokens)
    states = [k for k, t in enumerate(tokens) if t[0] == "q"]
    if len(states) != 1:
        raise CodecError("token stream needs exactly one state token")
    k = states[0]
    left = tuple(i for _, i in tokens[:k])
    right = tuple(i for _, i in tokens[k + 1 :])
    if not right:
        raise CodecError("no scanned symbol after the state")
    return Configuration(left, tokens[k][1], right)


def program_tokens(rules) -> tuple:
    out = []
    for r in rules:
        out += [("q", r.from_state), ("s", r.read), ("q", r.to_state), ("s", r.write), ("d", r.move)]
    return tuple(out)


def tokens_to_rules(tokens) -> tuple:
    tokens = list(tokens)
    if len(tokens) % 5:
        raise CodecError("program stream is not a whole number of rules")
    rules = []
    for k in range(0, len(tokens), 5):
        (_, q), (_, s), (_, q2), (_, s2), (_, d) = tokens[k : k + 5]
        rules.append(Rule(q, s, q2, s2, d))
    return tuple(rules)


# -- symbol tables -------------------------------------------------------------


@lru_cache(maxsize=None)
def _config_table(sch: Scheme) -> dict:
    table = {}
    for i in range(1, sch.num_symbols + 1):
        table[("s", i)] = "1" * i + "0" if sch.kind == UNARY else _bin(i - 1, sch.width_s) + "a"
    for j in range(1, sch.num_states + 1):
        table[("q", j)] = "0" + "1" * j + "0" if sch.kind == UNARY else "c" + _bin(j - 1, sch.width_q) + "c"
    if sch.kind == PACKED:
        table = {k: pack(v) for k, v in table.items()}
    return table


@lru_cache(maxsize=None)
def _program_table(sch: Scheme) -> dict:
    table = {}
    for i in range(1, sch.num_symbols + 1):
        table[("s", i)] = "1" * i + "0" if sch.kind == UNARY else _bin(i - 1, sch.width_s) + "a"
    for j in range(1, sch.num_states + 1):
        table[("q", j)] = "1" * j + "0" if sch.kind == UNARY else _bin(j - 1, sch.width_q) + "a"
    for d in MOVES:
        n = MOVE_CODE[d]
        table[("d", d)] = "1" * n + "00" if sch.kind == UNARY else _bin(n - 1, 2) + "c"
    if sch.kind == PACKED:
        table = {k: pack(v) for k, v in table.items()}
    return table


def _check_config(sch: Scheme, c: Configuration) -> None:
    if not 1 <= c.state <= sch.num_states:
        raise CodecError(f"state q{c.state} exceeds |Q| = {sch.num_states}")
    if not c.right:
        raise CodecError("configuration has no scanned symbol")
    for s in c.left + c.right:
        if not 1 <= s <= sch.num_symbols:
            raise CodecError(f"symbol s{s} exceeds |Sigma| = {sch.num_symbols}")


def encode_config(sch: Scheme, c: Configuration) -> str:
    _check_config(sch, c)
    table = _config_table(sch)
    return "".join(table[t] for t in config_tokens(c))


def encode_program(sch: Scheme, m) -> str:
    """Code of a rule set; ``m`` is a Machine or a rule sequence (already ordered)."""
    rules = m.canonical_rules() if isinstance(m, Machine) else tuple(m)
    table = _program_table(sch)
    for r in rules:
        if not (r.from_state <= sch.num_states and r.to_state <= sch.num_states):
            raise CodecError(f"state out of range for scheme in {r}")
        if not (r.read <= sch.num_symbols and r.write <= sch.num_symbols):
            raise CodecError(f"symbol out of range for scheme in {r}")
    return "".join(table[t] for t in program_tokens(rules))


# -- direct decoders -----------------------------------------------------------


def _decode_unary_config(sch: Scheme, code: str) -> Configuration:
    left, right = [], []
    state = None
    pos, n = 0, len(code)
    while pos < n:
        if code[pos] == "0":
            if state is not None:
                raise CodecError(f"second state block at position {pos}")
            pos += 1
            j = 0
            while pos < n and code[pos] == "1":
                j += 1
                pos += 1
            if pos >= n or code[pos] != "0" or j == 0:
                raise CodecError(f"malformed state block ending at position {pos}")
            if j > sch.num_states:
                raise CodecError(f"state q{j} exceeds |Q| = {sch.num_states}")
            state = j
            pos += 1
            continue
        i = 0
        while pos < n and code[pos] == "1":
            i += 1
            pos += 1
        if pos >= n:
            raise CodecError("unterminated symbol block")
        if code[pos] != "0":
            raise CodecError(f"unexpected {code[pos]!r} at position {pos}")
        if i > sch.num_symbols:
            raise CodecError(f"symbol s{i} exceeds |Sigma| = {sch.num_symbols}")
        (left if state is None else right).append(i)
        pos += 1
    if state is None:
        raise CodecError("missing state block")
    if not right:
        raise CodecError("no scanned symbol after the state block")
    return Configuration(tuple(left), state, tuple(right))


def _read_bits(code: str, pos: int, width: int, limit: int, what: str):
    bits = code[pos : pos + width]
    if len(bits) != width or set(bits) - {"0", "1"}:
        raise CodecError(f"bad {what} field at position {pos}")
    value = int(bits, 2) + 1 if width else 1
    if value > limit:
        raise CodecError(f"{what} {value} exceeds {limit} at position {pos}")
    return value, pos + width


def _expect(code: str, pos: int, ch: str) -> int:
    if pos >= len(code) or code[pos] != ch:
        raise CodecError(f"expected {ch!r} at position {pos}")
    return pos + 1


def _decode_binary_config(sch: Scheme, code: str) -> Configuration:
    left, right = [], []
    state = None
    pos = 0
    while pos < len(code):
        if code[pos] == "c":
            if state is not None:
                raise CodecError(f"second state block at position {pos}")
            state, pos = _read_bits(code, pos + 1, sch.width_q, sch.num_states, "state")
            pos = _expect(code, pos, "c")
        else:
            i, pos = _read_bits(code, pos, sch.width_s, sch.num_symbols, "symbol")
            pos = _expect(code, pos, "a")
            (left if state is None else right).append(i)
    if state is None:
        raise CodecError("missing state block")
    if not right:
        raise CodecError("no scanned symbol after the state block")
    return Configuration(tuple(left), state, tuple(right))


def decode_config(sch: Scheme, code: str) -> Configuration:
    if sch.kind == UNARY:
        return _decode_unary_config(sch, code)
    if sch.kind == PACKED:
        code = unpack(code)
    return _decode_binary_config(sch, code)


def decode_program(sch: Scheme, code: str) -> tuple:
    rules = []
    pos = 0
    if sch.kind == PACKED:
        code = unpack(code)
    limits = (sch.num_states, sch.num_symbols, sch.num_states, sch.num_symbols, 3)
    widths = (sch.width_q, sch.width_s, sch.width_q, sch.width_s, 2)
    while pos < len(code):
        fields = []
        for f, limit in enumerate(limits):
            if sch.kind == UNARY:
                k = 0
                while pos < len(code) and code[pos] == "1":
                    k += 1
                    pos += 1
                if k == 0 or k > limit:
                    raise CodecError(f"bad unary field {f} at position {pos}")
                pos = _expect(code, pos, "0")
            else:
                k, pos = _read_bits(code, pos, widths[f], limit, "field")
                pos = _expect(code, pos, "a" if f < 4 else "c")
            fields.append(k)
        if sch.kind == UNARY:
            pos = _expect(code, pos, "0")
        q, s, q2, s2, d = fields
        rules.append(Rule(q, s, q2, s2, CODE_MOVE[d]))
    return tuple(rules)


# -- transducer realizations ---------------------------------------------------


def _unary_config_delta(sch: Scheme):
    def delta(state, ch):
        phase, k = state
        if ch == "1":
            limit = sch.num_states if phase == "Q" else sch.num_symbols
            return ((phase, k + 1), ()) if k < limit else None
        if phase == "L" and k == 0:
            return ("Q", 0), ()
        if k == 0:
            return None
        if phase == "L":
            return ("L", 0), (("s", k),)
        if phase == "Q":
            return ("R0", 0), (("q", k),)
        return ("R", 0), (("s", k),)

    return ("L", 0), delta, lambda s: s == ("R", 0)


def _binary_config_delta(sch: Scheme):
    ws, wq = sch.width_s, sch.width_q

    def close_symbol(phase, bits):
        i = int("".join(bits), 2) + 1 if bits else 1
        if i > sch.num_symbols:
            return None
        return (None, (), "L" if phase == "L" else "R"), (("s", i),)

    def delta(state, ch):
        mode, bits, phase = state
        if mode is None:
            if ch == "c":
                return ((("q", (), phase), ()) if phase == "L" else None)
            if ch == "a":
                return close_symbol(phase, ()) if ws == 0 else None
            return (("s", (ch,), phase), ()) if ws else None
        if mode == "s":
            if ch in "01" and len(bits) < ws:
                return ("s", bits + (ch,), phase), ()
            if ch == "a" and len(bits) == ws:
                return close_symbol(phase, bits)
            return None
        if ch in "01" and len(bits) < wq:
            return ("q", bits + (ch,), phase), ()
        if ch == "c" and len(bits) == wq:
            j = int("".join(bits), 2) + 1
            return ((None, (), "R0"), (("q", j),)) if j <= sch.num_states else None
        return None

    return (None, (), "L"), delta, lambda s: s == (None, (), "R")


def _unary_program_delta(sch: Scheme):
    limits = (sch.num_states, sch.num_symbols, sch.num_states, sch.num_symbols, 3)
    tags = ("q", "s", "q", "s", "d")

    def delta(state, ch):
        f, k = state
        if f == 5:
            return ((0, 0), ()) if ch == "0" else None
        if ch == "1":
            return ((f, k + 1), ()) if k < limits[f] else None
        if k == 0:
            return None
        value = CODE_MOVE[k] if f == 4 else k
        return (f + 1, 0), ((tags[f], value),)

    return (0, 0), delta, lambda s: s == (0, 0)


def _binary_program_delta(sch: Scheme):
    limits = (sch.num_states, sch.num_symbols, sch.num_states, sch.num_symbols, 3)
    widths = (sch.width_q, sch.width_s, sch.width_q, sch.width_s, 2)
    tags = ("q", "s", "q", "s", "d")

    def delta(state, ch):
        f, bits = state
        if ch in "01":
            return ((f, bits + (ch,)), ()) if len(bits) < widths[f] else None
        if len(bits) != widths[f] or ch != ("a" if f < 4 else "c"):
            return None
        value = int("".join(bits), 2) + 1 if bits else 1
        if value > limits[f]:
            return None
        if f == 4:
            value = CODE_MOVE[value]
        return ((f + 1) % 5, ()), ((tags[f], value),)

    return (0, ()), delta, lambda s: s == (0, ())


def _packed(initial, delta, accept):
    def packed_delta(state, ch):
        pending, inner = state
        if pending is None:
            return (ch, inner), ()
        res = delta(inner, UNPACK[pending + ch])
        if res is None:
            return None
        nxt, out = res
        return (None, nxt), out

    return (None, initial), packed_delta, lambda s: s[0] is None and accept(s[1])


def codec_as_dfst(sch: Scheme, direction: str, target: str) -> DFST:
    """Transducer for ``encode``/``decode`` of a ``program``/``config``."""
    if direction not in ("encode", "decode") or target not in ("program", "config"):
        raise ValueError(f"unsupported codec transducer {direction}/{target}")
    if direction == "encode":
        table = _config_table(sch) if target == "config" else _program_table(sch)
        return symbolwise_dfst({k: tuple(v) for k, v in table.items()})

    if target == "config":
        build = _unary_config_delta if sch.kind == UNARY else _binary_config_delta
    else:
        build = _unary_program_delta if sch.kind == UNARY else _binary_program_delta
    initial, delta, accept = build(sch)
    chars = "01" if sch.kind != BINARY else "01ac"
    if sch.kind == PACKED:
        initial, delta, accept = _packed(initial, delta, accept)
    tokens = set(_config_table(sch)) | set(_program_table(sch))
    return DFST.explore(initial, chars, delta, accept, tokens)


def space_bound(sch: Scheme, w_len: int) -> int:
    """Upper bound on the length of a configuration code for a tape of ``w_len`` cells."""
    if w_len < 1:
        raise ValueError("w_len must be at least 1")
    if sch.kind == UNARY:
        return w_len * (sch.num_symbols + 1) + sch.num_states + 4
    half = w_len * (clog2(sch.num_symbols) + 1) + clog2(sch.num_states) + 2
    return 2 * half if sch.kind == PACKED else half
