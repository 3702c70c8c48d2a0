"""Universality of a single relation over an encoded host universe.

A class of finite relations ``r`` over carriers ``M_r`` is simulated by one
relation ``R`` on a host carrier when, for encoders ``f_r`` of elements and
``g`` of relations,

* op form:      ``(g(r) o f_r(x), g(r) o f_r(y)) in R^n``  iff  ``(x, y) in r``
* pairing form: ``(g(r), phi(f_r(x), f_r(y))) in R^n``     iff  ``(x, y) in r``

for some ``n``.  Here ``n`` ranges over ``1..n_max``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional

from .codec import UNARY, Scheme, encode_config, encode_program
from .machine import DomainError, Machine, configurations, step
from .universal import DEFAULT_FUEL, build_utm, layout, universal_lap

HOLDS, FAILS, UNKNOWN, PRECONDITION = "holds", "fails", "unknown", "precondition"


def compose(a: Iterable, b: Iterable) -> frozenset:
    succ = {}
    for y, z in b:
        succ.setdefault(y, set()).add(z)
    return frozenset((x, z) for x, y in a for z in succ.get(y, ()))


def relation_power(r: Iterable, n: int, carrier: Optional[Iterable] = None) -> frozenset:
    """``n``-fold composition of ``r``; ``n = 0`` gives the identity on
    ``carrier`` (default: every element mentioned by ``r``)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    r = frozenset(r)
    if carrier is None:
        carrier = {x for pair in r for x in pair}
    out = frozenset((x, x) for x in carrier)
    for _ in range(n):
        out = compose(out, r)
    return out


@dataclass(frozen=True)
class RelationSystem:
    name: str
    carrier: frozenset
    relation: frozenset

    def __post_init__(self):
        object.__setattr__(self, "carrier", frozenset(self.carrier))
        object.__setattr__(self, "relation", frozenset(self.relation))
        outside = {x for pair in self.relation for x in pair} - self.carrier
        if outside:
            raise ValueError(f"relation {self.name} mentions elements outside its carrier")


@dataclass
class EncodedSystem:
    host: frozenset
    op: Mapping  # (a, b) -> c; only the entries the checks need
    rel_encoder: Mapping  # relation name -> host element
    elem_encoders: Mapping  # relation name -> {element -> host element}
    pairing: Mapping  # (a, b) -> host element
    R: frozenset = field(default_factory=frozenset)


@dataclass
class Verdict:
    status: str
    counterexample: Optional[tuple] = None  # (relation, x, y, "soundness" | "completeness")
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == HOLDS


def _injective(mapping: Mapping) -> Optional[tuple]:
    seen = {}
    for k in sorted(mapping, key=repr):
        v = mapping[k]
        if v in seen:
            return seen[v], k
        seen[v] = k
    return None


def check_preconditions(sys: EncodedSystem, cls: Iterable[RelationSystem], form: str) -> Optional[str]:
    cls = list(cls)
    host = sys.host
    clash = _injective(sys.rel_encoder)
    if clash:
        return f"relation encoder maps {clash[0]} and {clash[1]} to the same element"
    element_images = set()
    for r in cls:
        if r.name not in sys.rel_encoder:
            return f"relation {r.name} has no code"
        f = sys.elem_encoders.get(r.name)
        if f is None or set(r.carrier) - set(f):
            return f"element encoder of {r.name} is not defined on its whole carrier"
        clash = _injective({x: f[x] for x in r.carrier})
        if clash:
            return f"element encoder of {r.name} maps {clash[0]} and {clash[1]} to the same element"
        element_images.update(f[x] for x in r.carrier)
    codes = {sys.rel_encoder[r.name] for r in cls}
    if element_images & codes:
        return "element codes and relation codes overlap"
    if not (element_images | codes) <= host:
        return "encoders leave the host carrier"
    if form == "pairing":
        clash = _injective(sys.pairing)
        if clash:
            return f"pairing maps {clash[0]} and {clash[1]} to the same element"
    if not {x for pair in sys.R for x in pair} <= host:
        return "R mentions elements outside the host carrier"
    return None


def _reach(R: frozenset, n_max: int):
    succ = {}
    for a, b in R:
        succ.setdefault(a, set()).add(b)
    memo = {}

    def within(a) -> frozenset:
        """Elements reachable from ``a`` in ``1..n_max`` steps."""
        if a not in memo:
            out, level = set(), {a}
            for _ in range(n_max):
                level = {c for b in level for c in succ.get(b, ())}
                out |= level
            memo[a] = frozenset(out)
        return memo[a]

    return within


def _check(sys, cls, n_max, form) -> Verdict:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    cls = sorted(cls, key=lambda r: r.name)
    problem = check_preconditions(sys, cls, form)
    if problem:
        return Verdict(PRECONDITION, message=problem)
    within = _reach(frozenset(sys.R), n_max)
    # past |host| steps nothing new becomes reachable
    bounded = n_max < len(sys.host)
    first, status = None, HOLDS
    for r in cls:
        g, f = sys.rel_encoder[r.name], sys.elem_encoders[r.name]
        for x in sorted(r.carrier, key=repr):
            for y in sorted(r.carrier, key=repr):
                if form == "op":
                    a, b = sys.op.get((g, f[x])), sys.op.get((g, f[y]))
                    if a is None or b is None:
                        return Verdict(PRECONDITION, message=f"op undefined for {r.name} at {x!r} or {y!r}")
                else:
                    a, b = g, sys.pairing.get((f[x], f[y]))
                    if b is None:
                        return Verdict(PRECONDITION, message=f"pairing undefined for {r.name} at ({x!r}, {y!r})")
                encoded = b in within(a)
                related = (x, y) in r.relation
                if encoded == related:
                    continue
                kind = "soundness" if encoded else "completeness"
                if first is None:
                    first = (r.name, x, y, kind)
                if kind == "soundness" or not bounded:
                    status = FAILS
                elif status == HOLDS:
                    status = UNKNOWN
    return Verdict(status, first)


def check_universal_op_form(sys: EncodedSystem, cls, n_max: int) -> Verdict:
    return _check(sys, cls, n_max, "op")


def check_universal_pairing_form(sys: EncodedSystem, cls, n_max: int) -> Verdict:
    return _check(sys, cls, n_max, "pairing")


def witness_system(cls) -> EncodedSystem:
    """Tagged encoders plus the image relations for both forms."""
    cls = list(cls)
    rel_encoder = {r.name: ("rel", r.name) for r in cls}
    elem_encoders = {r.name: {x: ("el", r.name, x) for x in r.carrier} for r in cls}
    op, pairing, R = {}, {}, set()
    for r in cls:
        g, f = rel_encoder[r.name], elem_encoders[r.name]
        for x in r.carrier:
            op[(g, f[x])] = ("op", r.name, x)
            for y in r.carrier:
                pairing[(f[x], f[y])] = ("pair", r.name, x, y)
        for x, y in r.relation:
            R.add((op[(g, f[x])], op[(g, f[y])]))
            R.add((g, pairing[(f[x], f[y])]))
    host = set(rel_encoder.values()) | set(op.values()) | set(pairing.values())
    for f in elem_encoders.values():
        host |= set(f.values())
    return EncodedSystem(frozenset(host), op, rel_encoder, elem_encoders, pairing, frozenset(R))


def without_pair(sys: EncodedSystem, pair) -> EncodedSystem:
    return replace(sys, R=frozenset(sys.R) - {pair})


def swap_codes(sys: EncodedSystem, name: str, x, y) -> EncodedSystem:
    f = dict(sys.elem_encoders[name])
    f[x], f[y] = f[y], f[x]
    encoders = dict(sys.elem_encoders)
    encoders[name] = f
    return replace(sys, elem_encoders=encoders)


# -- Turing machines through the universal machine ---------------------------------


def tm_instance(corpus: Iterable[Machine], depth: int, fuel: int = DEFAULT_FUEL):
    """Step relations of ``corpus`` on configurations of tape length at most
    ``depth``, hosted by the checkpoint-successor relation of ``U``.

    Host elements are ``("prog", code)``, ``("cfg", code)``,
    ``("pair", cfg, cfg)`` and ``("tape", text)``; ``g o f(c)`` is ``U``'s
    tape for ``c``.  Steps leaving the depth bound are dropped with a
    warning.  Returns ``(system, cls)``; use ``n_max = 1``.
    """
    u = build_utm()
    cls, rel_encoder, elem_encoders, op, pairing, R = [], {}, {}, {}, {}, set()
    host = set()
    for m in corpus:
        if not m.deterministic:
            raise DomainError(f"{m.name} is nondeterministic; the host relation comes from the deterministic U")
        sch = Scheme.for_machine(UNARY, m)
        g = ("prog", encode_program(sch, m))
        carrier = list(configurations(m, depth))
        f = {c: ("cfg", encode_config(sch, c)) for c in carrier}
        relation, dropped = set(), 0
        for c in carrier:
            for d in step(m, c):
                if d in f:
                    relation.add((c, d))
                else:
                    dropped += 1
        if dropped:
            warnings.warn(f"{m.name}: {dropped} steps leave tape length {depth} and are excluded")
        name = m.name or f"machine{len(cls)}"
        cls.append(RelationSystem(name, carrier, relation))
        rel_encoder[name] = g
        elem_encoders[name] = f
        host |= {g} | set(f.values())
        for c in carrier:
            lap = universal_lap(m, c, fuel, u)
            tape = ("tape", layout(m, c).text)
            op[(g, f[c])] = tape
            host.add(tape)
            if lap is not None and lap[1] in f:
                R.add((tape, ("tape", lap[0].strip("_"))))
                R.add((g, ("pair", f[c], f[lap[1]])))
        for c in carrier:
            for d in carrier:
                pairing[(f[c], f[d])] = ("pair", f[c], f[d])
        host |= set(pairing.values())
    host |= {x for pair in R for x in pair}
    return EncodedSystem(frozenset(host), op, rel_encoder, elem_encoders, pairing, frozenset(R)), cls

