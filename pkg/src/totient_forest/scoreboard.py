"""Partial evaluations and scoreboard values of the adversarial iteration.

For a sequence A the partial evaluations are A(n, n) = 0 and
A(n, k-1) = phi(a_k + A(n, k)); the scoreboard value is A(n, 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _fast
from .core import DomainError, euler_phi
from .sequences import IncrementSequence


@dataclass(frozen=True)
class PartialEvaluationTrace:
    n: int
    values: tuple[int, ...]  # values[k] == A(n, k) for k = 0..n

    @property
    def final(self) -> int:
        return self.values[0]


def _check_n(n: int) -> None:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")


def evaluate_trace(seq: IncrementSequence, n: int) -> PartialEvaluationTrace:
    _check_n(n)
    values = [0] * (n + 1)
    y = 0
    for k in range(n, 0, -1):
        y = euler_phi(seq.term(k) + y)
        values[k - 1] = y
    return PartialEvaluationTrace(n, tuple(values))


def iteration_walk(seq: IncrementSequence, n: int) -> list[int]:
    """Alternating add/phi walk: 0, a_n, A(n,n-1), a_{n-1} + A(n,n-1), ..., A(n)."""
    trace = evaluate_trace(seq, n)
    walk = [0]
    for k in range(n, 0, -1):
        walk.append(seq.term(k) + trace.values[k])
        walk.append(trace.values[k - 1])
    return walk


def scoreboard_value(seq: IncrementSequence, n: int) -> int:
    _check_n(n)
    y = 0
    for k in range(n, 0, -1):
        y = euler_phi(seq.term(k) + y)
    return y


def _terms_array(seq: IncrementSequence, n: int) -> np.ndarray | None:
    terms = seq.terms(n)
    if max(terms) >= _fast.FAST_LIMIT:
        return None
    return np.array(terms, dtype=np.int64)


def scoreboard_sequence(seq: IncrementSequence, n_max: int, *, compiled: bool = True) -> list[int]:
    """[A(1), ..., A(n_max)], each n walked independently from A(n, n) = 0.

    The compiled kernel is used while every intermediate argument stays below
    2**50; otherwise (or with ``compiled=False``) the walks run in Python.
    """
    _check_n(n_max)
    if compiled:
        terms = _terms_array(seq, n_max)
        if terms is not None:
            out = _fast.walks(terms, 1, n_max)
            if out is not None:
                return out.tolist()
    return [scoreboard_value(seq, n) for n in range(1, n_max + 1)]


def scoreboard_values(seq: IncrementSequence, n_lo: int, n_hi: int) -> list[int]:
    """[A(n_lo), ..., A(n_hi)]."""
    _check_n(n_lo)
    terms = _terms_array(seq, n_hi)
    if terms is not None:
        out = _fast.walks(terms, n_lo, n_hi)
        if out is not None:
            return out.tolist()
    return [scoreboard_value(seq, n) for n in range(n_lo, n_hi + 1)]
