import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unimach.automata import (
    FA,
    ClassTooLarge,
    build_universal_fa,
    class_size,
    code_length,
    decode_fa,
    encode_fa,
    enumerate_k_class,
    mutate,
    run_fa,
    verify_universal_fa,
)


def test_class_size_formula():
    for k, alpha in [(1, "a"), (1, "01"), (2, "01"), (3, "a")]:
        assert class_size(k, alpha) == k ** (k * len(alpha)) * 2**k
        assert len(enumerate_k_class(k, alpha)) == class_size(k, alpha)


def test_class_limit():
    with pytest.raises(ClassTooLarge):
        enumerate_k_class(4, "abc")


def test_one_state_codes():
    assert sorted(encode_fa(a, 1) for a in enumerate_k_class(1, "a")) == ["00", "01"]


def test_one_state_automata_are_constant():
    for a in enumerate_k_class(1, "01"):
        verdicts = {run_fa(a, w) for n in range(4) for w in itertools.product("01", repeat=n)}
        assert len(verdicts) == 1


def test_universal_examples():
    u = build_universal_fa(1, "a")
    assert run_fa(u, "01#") and run_fa(u, "01#a") and run_fa(u, "01#aa")
    assert not run_fa(u, "00#a") and not run_fa(u, "0#") and not run_fa(u, "01a")
    assert u.num_states > 1


def test_run_fa_rejects_foreign_symbols():
    a = enumerate_k_class(1, "a")[0]
    with pytest.raises(ValueError):
        run_fa(a, "b")


def test_fa_validation():
    with pytest.raises(ValueError):
        FA(1, ("a",), {}, frozenset())
    with pytest.raises(ValueError):
        FA(1, ("a",), {(1, "a"): 2}, frozenset())


def test_decode_rejects_bad_codes():
    assert decode_fa("0", 2, "01") is None
    assert decode_fa("2" * code_length(2, "01"), 2, "01") is None
    assert decode_fa("11" * 2 + "00", 3, "a") is None  # target 4 > 3


@pytest.mark.parametrize("k,alpha", [(1, "01"), (2, "01"), (2, "a")])
def test_verify_passes(k, alpha):
    report = verify_universal_fa(k, alpha, 4)
    assert report.ok and report.strict
    assert report.checked == class_size(k, alpha) * sum(len(alpha) ** n for n in range(5))


def test_mutation_is_caught():
    u = build_universal_fa(2, "01")
    report = verify_universal_fa(2, "01", 5, mutate(u))
    assert not report.ok and report.counterexample is not None
    code, word, expected = report.counterexample
    a = decode_fa(code, 2, "01")
    assert run_fa(a, word) == expected


@given(st.data())
def test_encode_decode_round_trip(data):
    k = data.draw(st.integers(1, 4))
    alpha = data.draw(st.sampled_from(["a", "ab", "abc"]))
    table = data.draw(st.lists(st.integers(1, k), min_size=k * len(alpha), max_size=k * len(alpha)))
    bits = data.draw(st.lists(st.booleans(), min_size=k, max_size=k))
    trans = {(q, a): table[(q - 1) * len(alpha) + i] for q in range(1, k + 1) for i, a in enumerate(alpha)}
    fa = FA(k, tuple(alpha), trans, frozenset(q for q in range(1, k + 1) if bits[q - 1]))
    code = encode_fa(fa, k)
    assert len(code) == code_length(k, alpha)
    assert decode_fa(code, k, alpha) == fa
