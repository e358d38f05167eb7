"""Upper bounds b_k on partial evaluations, used to prune totient trees from above.

A polynomial bound is a pair of polynomials, one for the "tight" heights k
(where a_{k+1} is even, so the next totient halves) and one for the other
"loose" heights. For the positive integers and the squares the tight heights
are the odd ones and the pairs are

    naturals:  2k + 4          / 3k + 6
    squares:   2k^2 + 14k + 40 / 3k^2 + 20k + 57

Soundness rests on a descending induction over k. ``check_inductive``
certifies the induction steps for a given pair, and ``derive_polynomial_bound``
constructs a certified pair for any integer polynomial sequence that takes
even values at every index of one parity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .sequences import IncrementSequence, naturals, squares

NUMERIC_CHECK_LIMIT = 10_000


class BoundDerivationError(RuntimeError):
    pass


def _peval(coeffs, x):
    r = 0
    for c in reversed(coeffs):
        r = r * x + c
    return r


def _shift(coeffs):
    """Coefficients of p(x + 1)."""
    out = [0] * len(coeffs)
    for j, c in enumerate(coeffs):
        for i in range(j + 1):
            out[i] += c * math.comb(j, i)
    return out


def _add(*polys):
    n = max(len(p) for p in polys)
    out = [0] * n
    for p in polys:
        for i, c in enumerate(p):
            out[i] += c
    return out


def _scale(p, s):
    return [c * s for c in p]


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _eventually_above(p, threshold) -> tuple[bool, int]:
    """Whether p(x) > threshold for all large x, and an x0 past which it holds.

    x0 comes from the Cauchy bound on the real roots of p - threshold.
    """
    q = _trim(_add(p, [-threshold]))
    lead = q[-1]
    if len(q) == 1:
        return lead > 0, 0
    if lead < 0:
        return False, 0
    cauchy = 1 + max(abs(Fraction(c) / lead) for c in q[:-1])
    return True, math.ceil(cauchy)


def _even_floor(x):
    x = math.floor(x)
    return x - (x & 1)


@dataclass(frozen=True)
class BoundProvider:
    """Pruning bound k -> b_k. ``None`` from ``__call__`` means no bound."""

    kind: str
    tight: tuple[int, ...] = ()
    loose: tuple[int, ...] = ()
    tight_parity: int = 1
    evidence: dict = field(default_factory=dict, compare=False, hash=False)
    cap_value: int | None = None

    def __call__(self, k: int) -> int | None:
        if k < 0:
            raise ValueError(f"height must be >= 0, got {k}")
        if self.kind == "unbounded":
            return None
        if self.kind == "constant":
            return self.cap_value
        coeffs = self.tight if k % 2 == self.tight_parity else self.loose
        return _peval(coeffs, k)

    @property
    def bounded(self) -> bool:
        return self.kind != "unbounded"

    def describe(self) -> str:
        if self.kind in ("naturals", "squares", "unbounded"):
            return self.kind
        if self.kind == "constant":
            return f"constant:{self.cap_value}"
        return f"{self.kind}(tight={list(self.tight)},loose={list(self.loose)},tight_parity={self.tight_parity})"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "tight_coefficients": list(self.tight),
            "loose_coefficients": list(self.loose),
            "tight_parity": self.tight_parity,
            "constant": self.cap_value,
            "evidence": self.evidence,
        }


def bound_naturals(k: int) -> int:
    return 2 * k + 4 if k % 2 else 3 * k + 6


def bound_squares(k: int) -> int:
    return 2 * k * k + 14 * k + 40 if k % 2 else 3 * k * k + 20 * k + 57


NATURALS_BOUND = BoundProvider("naturals", (4, 2), (6, 3), 1)
SQUARES_BOUND = BoundProvider("squares", (40, 14, 2), (57, 20, 3), 1)
UNBOUNDED = BoundProvider("unbounded")


def constant_bound(value: int) -> BoundProvider:
    return BoundProvider("constant", cap_value=value)


def tight_parity_of(seq: IncrementSequence) -> int:
    """Parity of heights k whose next increment a_{k+1} is always even.

    Polynomial values mod 2 depend only on the index mod 2, so two terms decide.
    Odd heights win ties. Raises when the sequence is entirely odd-valued.
    """
    coeffs = seq.coefficients
    even_at_even_index = _peval(coeffs, 2) % 2 == 0
    even_at_odd_index = _peval(coeffs, 1) % 2 == 0
    if even_at_even_index:
        return 1
    if even_at_odd_index:
        return 0
    raise BoundDerivationError(f"{seq.describe()} only takes odd values; no halving step exists")


def inductive_conditions(f, tight, loose):
    """Polynomials that must stay above given thresholds for the induction to go through.

    Returns a list of (name, polynomial, threshold, height parity) where the
    parity says which heights the condition is quantified over ("tight" or "loose").
    """
    f = list(f)
    tight = list(tight)
    loose = list(loose)
    f1 = _shift(f)
    # loose l: A(l) = phi(f(l+1) + A(l+1)) <= f(l+1) + B_T(l+1) - 1
    loose_step = _add(loose, _scale(f1, -1), _scale(_shift(tight), -1), [1])
    # tight k: A(k+1) even => A(k) <= even_floor((f(k+1) + B_L(k+1)) / 2)
    tight_half = _add(_scale([Fraction(c) for c in tight], 2), _scale(f1, -1), _scale(_shift(loose), -1))
    # tight k: A(k+1) in {0, 1} => A(k) <= f(k+1)
    tight_small = _add(tight, _scale(f1, -1))
    return [
        ("loose_step", loose_step, -1, "loose"),
        ("loose_positive", loose, 0, "loose"),
        ("tight_halving", tight_half, None, "tight"),
        ("tight_small_predecessor", tight_small, -1, "tight"),
    ]


def check_inductive(seq: IncrementSequence, tight, loose, tight_parity: int | None = None,
                    limit: int = NUMERIC_CHECK_LIMIT) -> dict:
    """Certify the descending induction for the pair (tight, loose).

    Each condition is checked two ways: exactly for every height up to
    ``limit``, and through its polynomial for all heights past a root bound.
    The two ranges must overlap for the pair to be accepted.
    """
    if tight_parity is None:
        tight_parity = tight_parity_of(seq)
    f = list(seq.coefficients)
    for k in (tight_parity, tight_parity + 2):
        if _peval(f, k + 1) % 2:
            raise BoundDerivationError(f"a_{k + 1} is odd although height {k} is tight")
    tight_even = all(_peval(tight, k) % 2 == 0 for k in (tight_parity, tight_parity + 2))
    report = {"tight_parity": tight_parity, "numeric_limit": limit, "conditions": {}, "ok": True}

    failures = []
    for k in range(0, limit + 1):
        fk1 = _peval(f, k + 1)
        if k % 2 == tight_parity:
            bt = _peval(tight, k)
            bl_next = _peval(loose, k + 1)
            if bt < _even_floor((fk1 + _even_floor(bl_next)) // 2) or bt < fk1:
                failures.append(k)
        else:
            bl = _peval(loose, k)
            bt_next = _peval(tight, k + 1)
            if bl < fk1 + bt_next - 1 or bl < 1:
                failures.append(k)
        if len(failures) > 20:
            break
    report["numeric_failures"] = failures

    symbolic_ok = True
    for name, poly, threshold, _ in inductive_conditions(f, tight, loose):
        if threshold is None:
            # tight_halving is stated for 2*B_T; the even floor buys slack when B_T is even
            threshold = -4 if tight_even else -2
        ok, x0 = _eventually_above(poly, threshold)
        report["conditions"][name] = {
            "polynomial": [str(c) for c in _trim(poly)],
            "threshold": threshold,
            "eventually_holds": ok,
            "holds_from": x0,
        }
        if not ok or x0 > limit:
            symbolic_ok = False
    report["symbolic_ok"] = symbolic_ok
    report["ok"] = symbolic_ok and not failures
    return report


def derive_polynomial_bound(seq: IncrementSequence, limit: int = NUMERIC_CHECK_LIMIT,
                            max_rounds: int = 64) -> BoundProvider:
    """Construct and certify a polynomial bound pair for a polynomial sequence.

    Leading coefficients are 2c and 3c for leading sequence coefficient c.
    Lower coefficients are solved top-down so each condition polynomial has
    a nonnegative coefficient at every power, then trimmed greedily while
    the certificate still holds.
    """
    if not seq.is_polynomial:
        raise BoundDerivationError("bound derivation needs a polynomial sequence")
    f = list(seq.coefficients)
    d = len(f) - 1
    c = f[-1]
    if c <= 0:
        raise BoundDerivationError("leading coefficient must be positive")
    parity = tight_parity_of(seq)
    f1 = _shift(f)

    tight = [0] * (d + 1)
    loose = [0] * (d + 1)
    tight[d], loose[d] = 2 * c, 3 * c
    for i in range(d - 1, -1, -1):
        # contributions of already-fixed higher coefficients at power i
        h_t = sum(tight[j] * math.comb(j, i) for j in range(i + 1, d + 1))
        h_l = sum(loose[j] * math.comb(j, i) for j in range(i + 1, d + 1))
        tight[i] = max(2 * f1[i] + h_t + h_l, f1[i])
        loose[i] = tight[i] + f1[i] + h_t
    tight[0] = max(tight[0], 1)
    loose[0] = max(loose[0], 1)

    report = check_inductive(seq, tight, loose, parity, limit)
    if not report["ok"]:
        raise BoundDerivationError(f"constructed pair failed certification: {report}")

    # tighten lower-order coefficients while the certificate holds
    moves = [(w, i) for i in range(d) for w in ("both", "tight", "loose")]
    for _ in range(max_rounds):
        improved = False
        for which, i in moves:
            step = max(1, min(abs(tight[i]), abs(loose[i])) // 2)
            while step >= 1:
                trial_t, trial_l = list(tight), list(loose)
                if which in ("both", "tight"):
                    trial_t[i] -= step
                if which in ("both", "loose"):
                    trial_l[i] -= step
                rep = check_inductive(seq, trial_t, trial_l, parity, limit)
                if rep["ok"]:
                    tight, loose, report = trial_t, trial_l, rep
                    improved = True
                else:
                    step //= 2
        if not improved:
            break

    evidence = dict(report)
    evidence["tight_coefficients"] = tight
    evidence["loose_coefficients"] = loose
    return BoundProvider("polynomial", tuple(tight), tuple(loose), parity, evidence)


def validate_bound_empirically(seq: IncrementSequence, bound, n_max: int) -> list[tuple[int, int, int, int]]:
    """Every (n, k, A(n,k), b_k) with A(n,k) > b_k for n <= n_max; empty means no violations."""
    from .scoreboard import evaluate_trace

    if not callable(bound):
        raise TypeError("bound must be callable")
    limits = [bound(k) for k in range(n_max + 1)]
    violations = []
    for n in range(1, n_max + 1):
        values = evaluate_trace(seq, n).values
        for k, v in enumerate(values):
            b = limits[k]
            if b is not None and v > b:
                violations.append((n, k, v, b))
    return violations


def resolve_bound(name: str, seq: IncrementSequence) -> BoundProvider:
    """Map a CLI bound name to a provider. ``auto`` picks the builtin for the
    matching sequence and otherwise derives one for polynomial sequences."""
    if name == "naturals":
        return NATURALS_BOUND
    if name == "squares":
        return SQUARES_BOUND
    if name == "none":
        return UNBOUNDED
    if name == "poly-derive":
        return derive_polynomial_bound(seq)
    if name == "auto":
        if seq == naturals():
            return NATURALS_BOUND
        if seq == squares():
            return SQUARES_BOUND
        if seq.is_polynomial:
            try:
                return derive_polynomial_bound(seq)
            except BoundDerivationError:
                return UNBOUNDED
        return UNBOUNDED
    raise ValueError(f"unknown bound {name!r}")
