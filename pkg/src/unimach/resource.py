"""Complexity-constrained universal simulation.

Space bounds are single-variable functions built from ``c*x``, ``x^k``,
``2^(...)`` and polynomials with non-negative coefficients.  Such a ``g``
admits a constant ``c_g`` with ``c_g + g(x) >= x`` for every ``x``; the
universal machine then runs within ``g(x) + r_g`` cells, ``r_g`` being the
length of the written form of ``g``.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

from .machine import Machine
from .universal import (
    DEFAULT_FUEL,
    assemble_initial,
    build_untm,
    simulate_universal,
    simulate_universal_nondet,
)


class ExpressionError(ValueError):
    pass


# -- expression trees ----------------------------------------------------------


@dataclass(frozen=True)
class Var:
    def __str__(self):
        return "x"


@dataclass(frozen=True)
class Const:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class LinMul:
    factor: int
    sub: object

    def __str__(self):
        # '^' binds tighter than '*'
        inner = str(self.sub) if isinstance(self.sub, (Pow, Exp2)) else _atom(self.sub)
        return f"{self.factor}*{inner}"


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int

    def __str__(self):
        return f"{_atom(self.base)}^{self.exponent}"


@dataclass(frozen=True)
class Exp2:
    sub: object

    def __str__(self):
        return f"2^{_atom(self.sub)}"


@dataclass(frozen=True)
class Poly:
    """``sum(coeffs[i] * x^(k-1-i))``, highest power first."""

    coeffs: tuple

    def __str__(self):
        k = len(self.coeffs)
        terms = []
        for i, c in enumerate(self.coeffs):
            e = k - 1 - i
            if c == 0:
                continue
            power = "x" if e == 1 else f"x^{e}"
            if e == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(power)
            else:
                terms.append(f"{c}*{power}")
        return "+".join(terms) or "0"


@dataclass(frozen=True)
class Log2:
    """``ceil(log2(x))``; parseable so that it can be rejected."""

    sub: object

    def __str__(self):
        return f"log2({self.sub})"


def _atom(e) -> str:
    text = str(e)
    if isinstance(e, (Var, Const, Log2)) or (isinstance(e, Poly) and "+" not in text and "*" not in text and "^" not in text):
        return text
    return f"({text})"


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(log2)|(.))")


def _tokens(text: str) -> list:
    out = []
    for num, log, ch in _TOKEN.findall(text):
        if num:
            out.append(int(num))
        elif log:
            out.append("log2")
        elif ch.strip():
            out.append(ch)
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokens(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, tok=None):
        t = self.peek()
        if tok is not None and t != tok:
            raise ExpressionError(f"expected {tok!r} at token {self.pos}, found {t!r}")
        self.pos += 1
        return t

    def expr(self):
        terms = [self.term()]
        while self.peek() == "+":
            self.take()
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else ("+", terms)

    def term(self):
        left = self.power()
        while self.peek() == "*":
            self.take()
            left = ("*", left, self.power())
        return left

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            return ("^", base, self.power())
        return base

    def atom(self):
        t = self.take()
        if isinstance(t, int):
            return ("n", t)
        if t == "x":
            return ("x",)
        if t == "log2":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return ("log2", inner)
        if t == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ExpressionError(f"unexpected token {t!r}")


def _monomial(raw):
    """``(coefficient, exponent)`` if ``raw`` is ``c``, ``x``, ``x^e`` or ``c*x^e``."""
    kind = raw[0]
    if kind == "n":
        return raw[1], 0
    if kind == "x":
        return 1, 1
    if kind == "^" and raw[1] == ("x",) and raw[2][0] == "n":
        return 1, raw[2][1]
    if kind == "*" and raw[1][0] == "n":
        inner = _monomial(raw[2])
        if inner and inner[1] >= 1:
            return raw[1][1] * inner[0], inner[1]
    return None


def _build(raw):
    kind = raw[0]
    if kind == "n":
        return Const(raw[1])
    if kind == "x":
        return Var()
    if kind == "log2":
        return Log2(_build(raw[1]))
    if kind == "+":
        monos = [_monomial(t) for t in raw[1]]
        if any(m is None for m in monos):
            raise ExpressionError("sums must be polynomials in x with non-negative coefficients")
        degree = max(e for _, e in monos)
        coeffs = [0] * (degree + 1)
        for c, e in monos:
            coeffs[degree - e] += c
        return Poly(tuple(coeffs))
    if kind == "*":
        if raw[1][0] != "n":
            raise ExpressionError("products must have a constant left factor")
        return LinMul(raw[1][1], _build(raw[2]))
    if kind == "^":
        base, exp = raw[1], raw[2]
        if base == ("n", 2) and exp[0] != "n":
            return Exp2(_build(exp))
        if exp[0] == "n":
            return Pow(_build(base), exp[1])
        raise ExpressionError("only 2^(...) may have a non-constant exponent")
    raise ExpressionError(f"cannot build {raw!r}")


def parse_g(text: str):
    p = _Parser(text)
    raw = p.expr()
    if p.peek() is not None:
        raise ExpressionError(f"trailing input after token {p.pos}")
    return _build(raw)


# -- evaluation ----------------------------------------------------------------


def eval_g(g, x: int) -> int:
    """Exact value of ``g`` at ``x``."""
    if isinstance(g, Var):
        return x
    if isinstance(g, Const):
        return g.value
    if isinstance(g, LinMul):
        return g.factor * eval_g(g.sub, x)
    if isinstance(g, Pow):
        return eval_g(g.base, x) ** g.exponent
    if isinstance(g, Exp2):
        return 1 << eval_g(g.sub, x)
    if isinstance(g, Poly):
        value = 0
        for c in g.coeffs:
            value = value * x + c
        return value
    if isinstance(g, Log2):
        v = eval_g(g.sub, x)
        return (v - 1).bit_length() if v > 0 else 0
    raise TypeError(f"not a complexity expression: {g!r}")


def eval_capped(g, x: int, cap: int) -> int:
    """``min(eval_g(g, x), cap)`` without building huge intermediate values.

    Every constructor is nondecreasing in its argument, so capping inner
    values is safe.
    """
    if isinstance(g, (Var, Const, Poly, Log2)):
        if isinstance(g, Poly) and x > 1 and (len(g.coeffs) - 1) * math.log2(x) > cap.bit_length() + 64:
            return cap
        return min(eval_g(g, x), cap)
    if isinstance(g, LinMul):
        return min(g.factor * eval_capped(g.sub, x, cap), cap)
    if isinstance(g, Pow):
        b = eval_capped(g.base, x, cap)
        if b > 1 and g.exponent * math.log2(b) > cap.bit_length() + 1:
            return cap
        return min(b**g.exponent, cap)
    if isinstance(g, Exp2):
        e = eval_capped(g.sub, x, cap.bit_length() + 1)
        return min(1 << e, cap)
    raise TypeError(f"not a complexity expression: {g!r}")


def grows(g) -> bool:
    """True when ``g`` contains a term of positive degree in ``x``."""
    if isinstance(g, Var):
        return True
    if isinstance(g, (Const, Log2)):
        return False
    if isinstance(g, LinMul):
        return g.factor >= 1 and grows(g.sub)
    if isinstance(g, Pow):
        return g.exponent >= 1 and grows(g.base)
    if isinstance(g, Exp2):
        return grows(g.sub)
    if isinstance(g, Poly):
        return any(c > 0 for c in g.coeffs[:-1])
    raise TypeError(f"not a complexity expression: {g!r}")


def _constants(g) -> int:
    if isinstance(g, Const):
        return g.value
    if isinstance(g, LinMul):
        return g.factor + _constants(g.sub)
    if isinstance(g, Pow):
        return g.exponent + _constants(g.base)
    if isinstance(g, (Exp2, Log2)):
        return _constants(g.sub)
    if isinstance(g, Poly):
        return sum(g.coeffs)
    return 0


def _degree(g) -> int:
    if isinstance(g, Var):
        return 1
    if isinstance(g, LinMul):
        return _degree(g.sub)
    if isinstance(g, Pow):
        return g.exponent * _degree(g.base)
    if isinstance(g, (Exp2, Log2)):
        return _degree(g.sub) + 1
    if isinstance(g, Poly):
        return len(g.coeffs) - 1
    return 0


def crossover(g) -> int:
    return 4 * (_constants(g) + _degree(g) + 2)


def validate_subclass(g, x_max: Optional[int] = None) -> Optional[int]:
    """Smallest ``c_g`` with ``c_g + g(x) >= x`` on ``0..x_max``, or ``None``
    when ``g`` is outside the subclass.

    ``x_max`` defaults to (and is raised to at least) the crossover bound;
    past it a growing ``g`` satisfies ``g(x) >= x`` outright.
    """
    if isinstance(g, str):
        g = parse_g(g)
    if not grows(g):
        return None
    x_max = max(x_max or 0, crossover(g))
    if eval_capped(g, x_max, x_max) < x_max:
        return None
    return max(0, max(x - eval_capped(g, x, x) for x in range(x_max + 1)))


def repr_length(g) -> int:
    if isinstance(g, str):
        g = parse_g(g)
    return len(str(g))


@dataclass(frozen=True)
class Budget:
    g: object
    c_g: int
    r_g: int

    @classmethod
    def of(cls, g) -> "Budget":
        if isinstance(g, str):
            g = parse_g(g)
        c_g = validate_subclass(g)
        if c_g is None:
            raise ExpressionError(f"{g} is not in the supported subclass")
        return cls(g, c_g, repr_length(g))

    def space_cells(self, x: int) -> int:
        return eval_g(self.g, x) + self.r_g


# -- bounded runs --------------------------------------------------------------


@dataclass
class BoundedRun:
    result: Optional[tuple]
    peak_cells: int
    limit: int
    outcome: str  # final | stuck | timeout | violation
    u_steps: int
    violation_step: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.outcome != "violation"


def run_space_bounded(m: Machine, w, budget, fuel: int = DEFAULT_FUEL, utm=None) -> BoundedRun:
    """Universal simulation that aborts once ``U``'s tape needs more than
    ``g(|w|) + r_g`` cells."""
    if not isinstance(budget, Budget):
        budget = Budget.of(budget)
    w = tuple(w)
    limit = budget.space_cells(len(w))
    run = simulate_universal(m, w, fuel, utm, limit=limit)
    return BoundedRun(run.result, run.peak_cells, limit, run.outcome, run.u_steps, run.violation_step)


def run_space_bounded_nondet(m: Machine, w, budget, fuel: int, u_fuel: int = 10**7):
    """Nondeterministic counterpart; returns the search with its per-path
    violations ``(simulated_step, u_step_within_lap)``."""
    if not isinstance(budget, Budget):
        budget = Budget.of(budget)
    w = tuple(w)
    return simulate_universal_nondet(m, w, fuel, u_fuel, build_untm(), limit=budget.space_cells(len(w)))


def initial_cells(m: Machine, w) -> int:
    return len(assemble_initial(m, w).right)


# -- time overhead -------------------------------------------------------------


def measure_time_overhead(entries: Sequence, g, fuel: int = DEFAULT_FUEL) -> list:
    """Rows ``(name, x, t_U, g(x))`` for each ``(machine, word)`` entry,
    sorted by machine name and input length."""
    if isinstance(g, str):
        g = parse_g(g)
    rows = []
    for m, w in entries:
        w = tuple(w)
        run = simulate_universal(m, w, fuel)
        if run.outcome == "timeout":
            warnings.warn(f"{m.name} on {w} did not terminate within {fuel} steps; excluded")
            continue
        rows.append((m.name, len(w), run.u_steps, eval_g(g, len(w)), w))
    rows.sort(key=lambda r: (r[0], r[1], r[4]))
    return [r[:4] for r in rows]


def fit_overhead(rows: Sequence, max_degree: int = 4):
    """Smallest ``d <= max_degree`` such that ``t <= C*g^d + C`` covers every
    row, with ``C`` calibrated on the rows of smallest ``x``.

    Returns ``(C, d)`` or ``None``.  This is a measurement, not a bound.
    """
    if not rows:
        return None
    x0 = min(r[1] for r in rows)
    base = [r for r in rows if r[1] == x0]
    for d in range(max_degree + 1):
        C = max(-(-t // (gx**d + 1)) for _, _, t, gx in base)
        if all(t <= C * gx**d + C for _, _, t, gx in rows):
            return C, d
    return None
