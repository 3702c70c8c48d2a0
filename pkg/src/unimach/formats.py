"""Line-oriented text formats for machines, words, rewriting rules and
abstract universality instances.

Machine files::

    machine increment
    states 3
    symbols 2
    blank 1            # optional
    nondeterministic   # optional
    rule 1 2 -> 1 2 R

Errors carry the 1-based line number.
"""

from __future__ import annotations

import shlex

from .abstract import EncodedSystem, RelationSystem
from .machine import Configuration, Machine, MachineError
from .rewriting import SemiThue


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def _content(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def _int(tok: str, n: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be a decimal index, got {tok!r}", n) from None


def parse_machine_file(text: str) -> Machine:
    header = {}
    deterministic = True
    rules = []
    for n, line in _content(text):
        toks = line.split()
        key = toks[0]
        if key in ("machine", "states", "symbols", "blank"):
            if rules:
                raise ParseError(f"header line {key!r} after the first rule", n)
            if key in header:
                raise ParseError(f"duplicate {key!r} line", n)
            if len(toks) != 2:
                raise ParseError(f"expected '{key} <value>'", n)
            header[key] = toks[1] if key == "machine" else _int(toks[1], n, key)
        elif key in ("deterministic", "nondeterministic"):
            deterministic = key == "deterministic"
        elif key == "rule":
            missing = [k for k in ("machine", "states", "symbols") if k not in header]
            if missing:
                raise ParseError(f"missing header: {', '.join(missing)}", n)
            if len(toks) != 7 or toks[3] != "->":
                raise ParseError("expected 'rule <q> <s> -> <q'> <s'> <L|R|N>'", n)
            q, s, q2, s2 = (_int(t, n, "index") for t in (toks[1], toks[2], toks[4], toks[5]))
            move = toks[6]
            if move not in ("L", "R", "N"):
                raise ParseError(f"move must be L, R or N, got {move!r}", n)
            m, k = header["states"], header["symbols"]
            for state in (q, q2):
                if not 1 <= state <= m:
                    raise ParseError(f"state {state} out of range 1..{m}", n)
            for sym in (s, s2):
                if not 1 <= sym <= k:
                    raise ParseError(f"symbol {sym} out of range 1..{k}", n)
            if q == m:
                raise ParseError(f"rule leaves the final state {m}", n)
            if deterministic and any(r[0] == q and r[1] == s for r, _ in rules):
                raise ParseError(f"second rule for (q{q}, s{s}) in a deterministic machine", n)
            rules.append(((q, s, q2, s2, move), n))
        else:
            raise ParseError(f"unknown line type {key!r}", n)
    missing = [k for k in ("machine", "states", "symbols") if k not in header]
    if missing:
        raise ParseError(f"missing header: {', '.join(missing)}")
    try:
        return Machine(
            header["states"],
            header["symbols"],
            [r for r, _ in rules],
            deterministic=deterministic,
            blank=header.get("blank", 1),
            name=header["machine"],
        )
    except MachineError as exc:
        raise ParseError(str(exc)) from None


def format_machine(m: Machine) -> str:
    lines = [f"machine {m.name or 'unnamed'}", f"states {m.num_states}", f"symbols {m.num_symbols}"]
    if m.blank != 1:
        lines.append(f"blank {m.blank}")
    if not m.deterministic:
        lines.append("nondeterministic")
    lines += [f"rule {r.from_state} {r.read} -> {r.to_state} {r.write} {r.move}" for r in m.rules]
    return "\n".join(lines) + "\n"


def _index(tok: str, prefix: str) -> int:
    body = tok[1:] if tok[:1] == prefix else tok
    try:
        return int(body)
    except ValueError:
        raise ParseError(f"bad index {tok!r}") from None


def parse_word(text: str) -> tuple:
    """``"s1 s2 s2"`` (or ``"1 2 2"``) as a tuple of symbol indices."""
    return tuple(_index(t, "s") for t in text.split())


def format_word(w) -> str:
    return " ".join(f"s{i}" for i in w)


def parse_config(text: str) -> Configuration:
    """``"s1 s2|q1|s2"``: left part, state, right part starting at the head."""
    parts = text.split("|")
    if len(parts) != 3:
        raise ParseError(f"configuration needs the form 'left|q|right', got {text!r}")
    left, state, right = parts
    return Configuration(parse_word(left), _index(state.strip(), "q"), parse_word(right))


def parse_rules_file(text: str, extra=()) -> SemiThue:
    """One ``lhs -> rhs`` rule per line; symbols are single characters.  An
    optional ``alphabet <chars>`` line adds symbols that occur in no rule."""
    alphabet = set(extra)
    rules = []
    for n, line in _content(text):
        if line.startswith("alphabet"):
            alphabet.update(line.split(None, 1)[1] if " " in line else "")
            continue
        if "->" not in line:
            raise ParseError("expected 'lhs -> rhs'", n)
        lhs, rhs = (side.strip() for side in line.split("->", 1))
        if not lhs:
            raise ParseError("left-hand side must be nonempty", n)
        if " " in lhs or " " in rhs:
            raise ParseError("sides are words of single-character symbols without spaces", n)
        alphabet.update(lhs + rhs)
        rules.append((lhs, rhs))
    return SemiThue(alphabet, tuple(rules))


def parse_instance_file(text: str):
    """Abstract universality instance; elements are whitespace-free tokens.

    ::

        relation lt          # starts a relation; its lines follow
        carrier 0 1 2
        pair 0 1
        code lt G            # g(lt) = G
        encode lt 0 E0       # f_lt(0) = E0
        op G E0 A            # G o E0 = A
        pairing E0 E1 P01
        R A B
        host X Y             # optional extra host elements

    Returns ``(EncodedSystem, [RelationSystem])``.
    """
    relations = {}
    current = None
    rel_encoder, elem_encoders, op, pairing, R = {}, {}, {}, {}, set()
    host = set()
    for n, line in _content(text):
        toks = shlex.split(line)
        key, args = toks[0], toks[1:]

        def need(k):
            if len(args) != k:
                raise ParseError(f"{key!r} takes {k} arguments", n)

        if key == "relation":
            need(1)
            current = args[0]
            if current in relations:
                raise ParseError(f"relation {current!r} defined twice", n)
            relations[current] = (set(), set())
        elif key in ("carrier", "pair"):
            if current is None:
                raise ParseError(f"{key!r} before any 'relation' line", n)
            if key == "carrier":
                relations[current][0].update(args)
            else:
                need(2)
                relations[current][1].add(tuple(args))
        elif key == "code":
            need(2)
            rel_encoder[args[0]] = args[1]
        elif key == "encode":
            need(3)
            elem_encoders.setdefault(args[0], {})[args[1]] = args[2]
        elif key == "op":
            need(3)
            op[(args[0], args[1])] = args[2]
        elif key == "pairing":
            need(3)
            pairing[(args[0], args[1])] = args[2]
        elif key == "R":
            need(2)
            R.add(tuple(args))
        elif key == "host":
            host.update(args)
        else:
            raise ParseError(f"unknown line type {key!r}", n)
    cls = []
    for name, (carrier, rel) in relations.items():
        try:
            cls.append(RelationSystem(name, carrier, rel))
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    host |= set(rel_encoder.values()) | set(op.values()) | set(pairing.values())
    host |= {x for pair in R for x in pair} | {a for a, b in op} | {b for a, b in op}
    for f in elem_encoders.values():
        host |= set(f.values())
    return EncodedSystem(frozenset(host), op, rel_encoder, elem_encoders, pairing, frozenset(R)), cls


def format_instance(sys: EncodedSystem, cls) -> str:
    """Inverse of ``parse_instance_file`` for systems whose elements print as
    whitespace-free tokens."""

    def t(x):
        return shlex.quote(str(x))

    lines = []
    for r in sorted(cls, key=lambda r: r.name):
        lines.append(f"relation {t(r.name)}")
        lines.append("carrier " + " ".join(t(x) for x in sorted(r.carrier, key=str)))
        lines += [f"pair {t(x)} {t(y)}" for x, y in sorted(r.relation, key=str)]
    lines += [f"code {t(k)} {t(v)}" for k, v in sorted(sys.rel_encoder.items(), key=str)]
    for name, f in sorted(sys.elem_encoders.items(), key=str):
        lines += [f"encode {t(name)} {t(x)} {t(v)}" for x, v in sorted(f.items(), key=str)]
    lines += [f"op {t(a)} {t(b)} {t(c)}" for (a, b), c in sorted(sys.op.items(), key=str)]
    lines += [f"pairing {t(a)} {t(b)} {t(c)}" for (a, b), c in sorted(sys.pairing.items(), key=str)]
    lines += [f"R {t(a)} {t(b)}" for a, b in sorted(sys.R, key=str)]
    lines.append("host " + " ".join(t(x) for x in sorted(sys.host, key=str)))
    return "\n".join(lines) + "\n"
