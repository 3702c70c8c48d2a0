"""Independent reference implementations used as test oracles.

They use different data representations from the package (a flat tape
with a head index, strings instead of token streams) so that agreement is
evidence rather than tautology.
"""

from itertools import product


def ref_step(rules, final, blank, left, state, right):
    """All successors of ``left state right`` on a flat tape."""
    if state == final:
        return set()
    tape = list(left) + list(right)
    head = len(left)
    out = set()
    for q, s, q2, s2, d in rules:
        if q != state or s != tape[head]:
            continue
        t = list(tape)
        t[head] = s2
        h = head + {"L": -1, "N": 0, "R": 1}[d]
        if h < 0:
            t.insert(0, blank)
            h = 0
        if h == len(t):
            t.append(blank)
        out.add((tuple(t[:h]), q2, tuple(t[h:])))
    return out


def ref_unary_config(left, state, right):
    code = "".join("1" * i + "0" for i in left)
    code += "0" + "1" * state + "0"
    return code + "".join("1" * i + "0" for i in right)


def ref_binary_config(left, state, right, n_syms, n_states):
    ws = (n_syms - 1).bit_length()
    wq = (n_states - 1).bit_length()

    def bits(v, w):
        return format(v, "b").zfill(w)[-w:] if w else ""

    code = "".join(bits(i - 1, ws) + "a" for i in left)
    code += "c" + bits(state - 1, wq) + "c"
    return code + "".join(bits(i - 1, ws) + "a" for i in right)


def ref_pack(code):
    return "".join({"0": "00", "1": "01", "a": "10", "c": "11"}[ch] for ch in code)


def ref_unary_program(rules):
    d = {"L": 1, "N": 2, "R": 3}
    ordered = sorted(rules, key=lambda r: (r[0], r[1]))
    return "".join(
        "1" * q + "0" + "1" * s + "0" + "1" * q2 + "0" + "1" * s2 + "0" + "1" * d[m] + "00"
        for q, s, q2, s2, m in ordered
    )


def ref_rewrites(rules, word):
    """One-step rewrites of a string using ``str.find``."""
    out = set()
    for lhs, rhs in rules:
        i = word.find(lhs)
        while i != -1:
            out.add(word[:i] + rhs + word[i + len(lhs):])
            i = word.find(lhs, i + 1)
    return out


def ref_power(pairs, n, carrier):
    """Relation power by boolean matrix products."""
    idx = {x: i for i, x in enumerate(sorted(carrier))}
    size = len(idx)
    rel = [[False] * size for _ in range(size)]
    for a, b in pairs:
        rel[idx[a]][idx[b]] = True
    acc = [[i == j for j in range(size)] for i in range(size)]
    for _ in range(n):
        acc = [[any(acc[i][k] and rel[k][j] for k in range(size)) for j in range(size)] for i in range(size)]
    inv = {i: x for x, i in idx.items()}
    return {(inv[i], inv[j]) for i in range(size) for j in range(size) if acc[i][j]}


def all_machines(max_states, max_symbols, max_rules=None):
    """Every deterministic machine up to the given sizes, in a fixed order
    (rule tables enumerated per (state, symbol) slot, empty slot allowed)."""
    from unimach.machine import Machine

    for m in range(2, max_states + 1):
        for n in range(1, max_symbols + 1):
            slots = [(q, s) for q in range(1, m) for s in range(1, n + 1)]
            choices = [None] + [(q2, s2, d) for q2 in range(1, m + 1) for s2 in range(1, n + 1) for d in "LNR"]
            for pick in product(choices, repeat=len(slots)):
                rules = [(q, s) + c for (q, s), c in zip(slots, pick) if c is not None]
                if max_rules is not None and len(rules) > max_rules:
                    continue
                yield Machine(m, n, rules)
