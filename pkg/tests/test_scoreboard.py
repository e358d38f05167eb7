import pytest
from hypothesis import given, settings, strategies as st

from totient_forest.core import DomainError, euler_phi
from totient_forest.scoreboard import (
    evaluate_trace,
    iteration_walk,
    scoreboard_sequence,
    scoreboard_value,
    scoreboard_values,
)
from totient_forest.sequences import SequenceRangeError, cubes, explicit, naturals, odds, polynomial, squares


def test_trace_naturals_3():
    trace = evaluate_trace(naturals(), 3)
    assert trace.values == (2, 2, 2, 0)
    assert trace.final == 2
    assert iteration_walk(naturals(), 3) == [0, 3, 2, 4, 2, 3, 2]


def test_trace_small_cases():
    assert evaluate_trace(naturals(), 1).values == (1, 0)
    assert evaluate_trace(squares(), 3).final == 4


@pytest.mark.parametrize("seq, n, expected", [
    (naturals(), 10, 4),
    (squares(), 5, 6),
    (cubes(), 13, 110),
    (cubes(), 9, 156),
])
def test_scoreboard_values(seq, n, expected):
    assert scoreboard_value(seq, n) == expected


def test_scoreboard_sequences():
    assert scoreboard_sequence(naturals(), 7) == [1, 1, 2, 2, 4, 4, 4]
    assert scoreboard_sequence(squares(), 6) == [1, 2, 4, 6, 6, 6]


def test_odds_regression():
    # no closed form is known; values frozen from a gcd-count evaluation
    assert scoreboard_sequence(odds(), 20) == [
        1, 2, 6, 12, 18, 22, 42, 42, 72, 20, 48, 18, 12, 108, 20, 42, 20, 42, 20, 36
    ]


def test_compiled_matches_python():
    for seq in (naturals(), squares(), cubes(), odds(), polynomial([3, 0, 2])):
        assert scoreboard_sequence(seq, 150) == scoreboard_sequence(seq, 150, compiled=False)
    assert scoreboard_values(cubes(), 300, 320) == [scoreboard_value(cubes(), n) for n in range(300, 321)]


def test_errors():
    with pytest.raises(DomainError):
        evaluate_trace(naturals(), 0)
    with pytest.raises(SequenceRangeError):
        evaluate_trace(explicit([1, 2, 3]), 4)
    with pytest.raises(SequenceRangeError):
        scoreboard_sequence(explicit([1, 2, 3]), 4)


SEQS = st.sampled_from([naturals(), squares(), cubes(), odds(), polynomial([1, 1, 1])])


@given(SEQS, st.integers(1, 400))
@settings(max_examples=60, deadline=None)
def test_trace_recurrence(seq, n):
    v = evaluate_trace(seq, n).values
    assert v[n] == 0
    for k in range(1, n + 1):
        assert v[k - 1] == euler_phi(seq.term(k) + v[k])
    for k in range(n):
        assert v[k] >= 1
        assert v[k] == 1 or v[k] % 2 == 0
    assert v[0] == scoreboard_value(seq, n)


def test_naturals_partial_evaluations_within_builtin_bounds():
    for n in range(1, 2001):
        v = evaluate_trace(naturals(), n).values
        for k, y in enumerate(v):
            assert y <= (2 * k + 4 if k % 2 else 3 * k + 6)
