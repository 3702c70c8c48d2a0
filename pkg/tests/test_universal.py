import pytest

from unimach import corpus
from unimach.codec import UNARY, Scheme, encode_config, encode_program
from unimach.machine import Configuration, DomainError, Machine, computed_function, reachable_finals, step
from unimach.universal import (
    CHAR,
    SYMBOL,
    UniversalCorruption,
    assemble_initial,
    build_untm,
    build_utm,
    decode_tape,
    layout,
    program_region,
    rule_table_hash,
    simulate_universal,
    simulate_universal_nondet,
    split_tape,
    universal_lap,
    verify_step_correspondence,
    without_rule,
)

U = build_utm()


def test_utm_is_fixed_and_deterministic():
    assert U.deterministic
    assert rule_table_hash(build_utm()) == rule_table_hash(U)
    assert not build_untm().deterministic


def test_layout_example():
    m = Machine(2, 1, [(1, 1, 2, 1, "N")])
    c = m.initial((1,))
    assert layout(m, c).text == "x110" + "1010110101100" + "#y" + "010" + "10"
    assert split_tape("__" + layout(m, c).text + "_") == ("110" + "1010110101100", "010" + "10")
    assert decode_tape(m, layout(m, c).text) == c
    assert assemble_initial(m, (1,)).right[0] == SYMBOL["x"]


def test_split_tape_rejects_bad_layout():
    with pytest.raises(UniversalCorruption):
        split_tape("110#y10")
    with pytest.raises(UniversalCorruption):
        split_tape("x1#1#y10")


def test_blank_must_be_first_symbol():
    m = Machine(2, 2, [(1, 2, 2, 2, "N")], blank=2)
    with pytest.raises(DomainError):
        simulate_universal(m, (1,))


@pytest.mark.parametrize("m", corpus.deterministic_corpus(), ids=lambda m: m.name)
def test_small_inputs_match_direct_run(m):
    for w in [(1,), (2,), (2, 1), (1, 2, 2)]:
        run = simulate_universal(m, w, utm=U)
        assert run.result == computed_function(m, w)
        assert run.program_intact
        ok, report = verify_step_correspondence(m, w, utm=U)
        assert ok, report


def test_outcomes():
    assert simulate_universal(corpus.no_rules(), (1,), utm=U).outcome == "stuck"
    assert simulate_universal(corpus.marcher(), (1,), fuel=5000, utm=U).outcome == "timeout"
    assert simulate_universal(corpus.identity(), (1,), utm=U).outcome == "final"


def test_universal_lap_is_one_step():
    m = corpus.increment()
    c = m.initial((2, 1))
    tape, d = universal_lap(m, c, utm=U)
    assert {d} == step(m, c)
    assert tape.strip("_") == layout(m, d).text
    assert universal_lap(m, Configuration((), m.final, (1,)), utm=U) is None


def test_removed_rule_breaks_something():
    broken = without_rule(U, 0)
    assert len(broken.rules) == len(U.rules) - 1
    assert rule_table_hash(broken) != rule_table_hash(U)


@pytest.mark.parametrize("m", corpus.nondeterministic_corpus(), ids=lambda m: m.name)
def test_nondet_finals_match(m):
    for w in [(1,), (2, 1)]:
        search = simulate_universal_nondet(m, w, 30)
        assert search.finals == reachable_finals(m, w, 30)


def test_nondet_on_damaged_program_finds_nothing():
    m = corpus.writer()
    search = simulate_universal_nondet(m, (1,), 10, program="1" * m.num_states + "0")
    assert search.finals == frozenset()


def test_program_region_starts_with_state_count():
    m = corpus.parity()
    assert program_region(m).startswith("1" * m.num_states + "0")


def test_increment_initial_tape_and_run():
    m = corpus.increment()
    sch = Scheme.for_machine(UNARY, m)
    text = "".join(CHAR[s] for s in assemble_initial(m, (1,)).right)
    assert text == "x" + "1" * m.num_states + "0" + encode_program(sch, m) + "#y" + encode_config(sch, m.initial((1,)))
    run = simulate_universal(m, (1, 1), utm=U)
    assert run.outcome == "final" and run.result == (2, 1)
    assert run.checkpoints[-1].decoded == Configuration((), m.final, (2, 1))


def test_broken_utm_reports_divergence():
    m = corpus.increment()
    failures = [verify_step_correspondence(m, (1, 1), utm=without_rule(U, k)) for k in range(0, len(U.rules), 40)]
    assert any(not ok and report for ok, report in failures)
