"""Small hand-built machines used by the tests, the CLI and the benchmarks.

All machines use two symbols with ``s1`` as the blank; ``s2`` plays the role
of a tally mark.
"""

from .machine import Machine


def identity() -> Machine:
    return Machine(2, 2, [(1, 1, 2, 1, "N"), (1, 2, 2, 2, "N")], name="identity")


def increment() -> Machine:
    """Skip the leading ``s2`` run and turn the first ``s1`` into ``s2``."""
    rules = [
        (1, 2, 1, 2, "R"),
        (1, 1, 2, 2, "R"),
        (2, 1, 3, 1, "L"),
        (2, 2, 3, 2, "L"),
    ]
    return Machine(3, 2, rules, name="increment")


def parity() -> Machine:
    """Replace the first ``s1`` by ``s2`` iff the ``s2`` prefix has odd length."""
    rules = [
        (1, 2, 2, 2, "R"),
        (2, 2, 1, 2, "R"),
        (1, 1, 3, 1, "N"),
        (2, 1, 3, 2, "N"),
    ]
    return Machine(3, 2, rules, name="parity")


def right_mover() -> Machine:
    """Walk right until two consecutive blanks, then step back onto the first."""
    rules = [
        (1, 2, 1, 2, "R"),
        (1, 1, 2, 1, "R"),
        (2, 2, 1, 2, "R"),
        (2, 1, 3, 1, "L"),
    ]
    return Machine(3, 2, rules, name="right_mover")


def copier() -> Machine:
    """Unary copy: ``s2^n`` becomes ``s2^n s1 s2^n``.

    The cell being copied is blanked as a bookmark and restored afterwards.
    """
    rules = [
        (1, 2, 2, 1, "R"),
        (1, 1, 6, 1, "N"),
        (2, 2, 2, 2, "R"),
        (2, 1, 3, 1, "R"),
        (3, 2, 3, 2, "R"),
        (3, 1, 4, 2, "L"),
        (4, 2, 4, 2, "L"),
        (4, 1, 5, 1, "L"),
        (5, 2, 5, 2, "L"),
        (5, 1, 1, 2, "R"),
    ]
    return Machine(6, 2, rules, name="copier")


def eraser() -> Machine:
    """Blank the leading ``s2`` run, then step one cell left (growing the tape
    when the run started at the left end)."""
    rules = [
        (1, 2, 1, 1, "R"),
        (1, 1, 2, 1, "L"),
        (2, 1, 3, 1, "N"),
        (2, 2, 3, 2, "N"),
    ]
    return Machine(3, 2, rules, name="eraser")


def stopper() -> Machine:
    """Halts in the final state on an ``s1`` at an odd position and gets stuck
    on an ``s1`` at an even one."""
    return Machine(3, 2, [(1, 2, 2, 2, "R"), (2, 2, 1, 2, "R"), (2, 1, 3, 1, "N")], name="stopper")


def no_rules() -> Machine:
    return Machine(2, 1, [], name="no_rules")


def marcher() -> Machine:
    """Moves right forever."""
    return Machine(2, 2, [(1, 1, 1, 1, "R"), (1, 2, 1, 2, "R")], name="marcher")


def deterministic_corpus() -> list:
    return [identity(), increment(), parity(), right_mover(), copier(), eraser(), stopper()]


# -- nondeterministic machines ---------------------------------------------------


def branching() -> Machine:
    """On ``s1`` either stop or step right and try again."""
    rules = [(1, 1, 2, 1, "N"), (1, 1, 1, 1, "R"), (1, 2, 1, 2, "R")]
    return Machine(2, 2, rules, deterministic=False, name="branching")


def writer() -> Machine:
    """Writes either symbol on the first cell, then stops."""
    rules = [(1, 1, 2, 1, "N"), (1, 1, 2, 2, "N"), (1, 2, 2, 2, "N")]
    return Machine(2, 2, rules, deterministic=False, name="writer")


def guesser() -> Machine:
    """Walks right over ``s2`` and guesses where to plant a marker, moving
    left afterwards."""
    rules = [
        (1, 2, 1, 2, "R"),
        (1, 2, 2, 1, "L"),
        (1, 1, 2, 2, "L"),
        (2, 1, 3, 1, "N"),
        (2, 2, 3, 2, "N"),
    ]
    return Machine(3, 2, rules, deterministic=False, name="guesser")


def nondeterministic_corpus() -> list:
    return [branching(), writer(), guesser()]
