"""Increment sequences a_1, a_2, ... fed to the adversarial iteration."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import U64_MAX

KINDS = ("naturals", "squares", "cubes", "odds", "polynomial", "explicit")


class SequenceRangeError(IndexError):
    """A term was requested outside the sequence's defined range."""


class InvalidSequence(ValueError):
    pass


def _poly(coefficients, j):
    r = 0
    for c in reversed(coefficients):
        r = r * j + c
    return r


@dataclass(frozen=True)
class IncrementSequence:
    """A positive integer sequence indexed from 1.

    ``coefficients`` (ascending degree) is used by the polynomial kind and is
    filled in for the named generated kinds too, so every generated kind can
    be treated as a polynomial. ``values`` holds the terms of an explicit
    sequence.
    """

    kind: str
    coefficients: tuple[int, ...] = ()
    values: tuple[int, ...] = ()
    checked_through: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSequence(f"unknown sequence kind {self.kind!r}")
        if self.kind == "explicit":
            if not self.values:
                raise InvalidSequence("explicit sequence needs at least one term")
            for j, v in enumerate(self.values, 1):
                if v < 1:
                    raise InvalidSequence(f"term {j} is {v}; increments must be >= 1")
        if self.kind == "polynomial":
            if not self.coefficients:
                raise InvalidSequence("polynomial sequence needs coefficients")
            for j in range(1, self.checked_through + 1):
                v = _poly(self.coefficients, j)
                if v < 1:
                    raise InvalidSequence(f"polynomial value at j={j} is {v}; increments must be >= 1")

    @property
    def limit(self) -> int | None:
        """Number of available terms, or None when unbounded."""
        return len(self.values) if self.kind == "explicit" else None

    @property
    def is_polynomial(self) -> bool:
        return self.kind != "explicit"

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def term(self, j: int) -> int:
        if j < 1:
            raise SequenceRangeError(f"sequence index must be >= 1, got {j}")
        if self.kind == "explicit":
            if j > len(self.values):
                raise SequenceRangeError(f"explicit sequence has {len(self.values)} terms; asked for term {j}")
            return self.values[j - 1]
        v = _poly(self.coefficients, j)
        if v < 1:
            raise InvalidSequence(f"polynomial value at j={j} is {v}; increments must be >= 1")
        if v > U64_MAX:
            raise OverflowError(f"term {j} of {self.describe()} exceeds 64 bits")
        return v

    __call__ = term

    def terms(self, count: int) -> list[int]:
        return [self.term(j) for j in range(1, count + 1)]

    def describe(self) -> str:
        if self.kind == "polynomial":
            return "poly:" + ",".join(map(str, self.coefficients))
        if self.kind == "explicit":
            return "list:" + ",".join(map(str, self.values))
        return self.kind


def naturals() -> IncrementSequence:
    return IncrementSequence("naturals", (0, 1))


def squares() -> IncrementSequence:
    return IncrementSequence("squares", (0, 0, 1))


def cubes() -> IncrementSequence:
    return IncrementSequence("cubes", (0, 0, 0, 1))


def odds() -> IncrementSequence:
    return IncrementSequence("odds", (-1, 2))


def polynomial(coefficients, check_through: int = 10_000) -> IncrementSequence:
    """Polynomial sequence f(j) = sum c_i j**i; rejected if f(j) < 1 for some j <= check_through."""
    coefficients = tuple(int(c) for c in coefficients)
    while len(coefficients) > 1 and coefficients[-1] == 0:
        coefficients = coefficients[:-1]
    return IncrementSequence("polynomial", coefficients, checked_through=check_through)


def explicit(values) -> IncrementSequence:
    return IncrementSequence("explicit", values=tuple(int(v) for v in values))


def parse_sequence(spec: str) -> IncrementSequence:
    """Parse ``naturals|squares|cubes|odds|poly:c0,c1,...|list:a1,a2,...``."""
    spec = spec.strip()
    named = {"naturals": naturals, "squares": squares, "cubes": cubes, "odds": odds}
    if spec in named:
        return named[spec]()
    head, sep, body = spec.partition(":")
    if not sep or head not in ("poly", "list"):
        raise InvalidSequence(f"cannot parse sequence {spec!r}")
    try:
        nums = [int(tok) for tok in body.split(",") if tok.strip()]
    except ValueError as exc:
        raise InvalidSequence(f"cannot parse sequence {spec!r}: {exc}") from None
    return polynomial(nums) if head == "poly" else explicit(nums)
