"""Totient trees: climbing from a candidate scoreboard value through totient fibers.

A node at height k holds a possible value y of A(n, k). Its children at
height k + 1 are the values z = w - a_{k+1} for w in phi^{-1}(y), kept when
1 <= z <= b_{k+1}. A child equal to 0 is a fruit: it certifies A(k + 1) = root.
Empty fibers prune from below and the bound prunes from above.

Every node has exactly one parent (phi(a_{k+1} + z)), so a tree never
contains the same value twice at one height and per-level path counts equal
per-level node counts.
"""

from __future__ import annotations

import bisect
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bounds import BoundProvider
from .fibers import totient_fiber
from .scoreboard import evaluate_trace, scoreboard_value, scoreboard_values
from .sequences import IncrementSequence

DEFAULT_HEIGHT_CAP = 2000
DEFAULT_NODE_CAP = 10_000_000


class ConsistencyError(RuntimeError):
    """Forest output disagrees with direct evaluation. Always a bug."""


@dataclass(frozen=True)
class TreeStatus:
    kind: str  # "died" | "survived" | "overgrown" | "node_cap"
    height: int

    def __str__(self) -> str:
        name = {"died": "Died", "survived": "Survived", "overgrown": "Overgrown", "node_cap": "NodeCapExceeded"}
        return f"{name[self.kind]}({self.height})"


def Died(h):
    return TreeStatus("died", h)


def Survived(h):
    return TreeStatus("survived", h)


def Overgrown(h):
    return TreeStatus("overgrown", h)


def NodeCapExceeded(h):
    return TreeStatus("node_cap", h)


@dataclass
class TotientTree:
    """Growth record for one root.

    ``levels[k]`` holds the sorted distinct values at height k. When a tree
    outgrows the node cap its levels stop at ``materialized_height``; it may
    still be certified Survived by ``witness``, an n >= height_cap with
    A(n) = root whose whole trace respects the bound.
    """

    root: int
    levels: list[np.ndarray]
    fruit_heights: list[int]
    status: TreeStatus
    path_counts: list[int] = field(default_factory=list)
    witness: int | None = None

    @property
    def materialized_height(self) -> int:
        return len(self.levels) - 1

    @property
    def complete(self) -> bool:
        return self.status.kind in ("died", "survived") and self.witness is None

    @property
    def node_count(self) -> int:
        return sum(len(lv) for lv in self.levels)

    def level_sizes(self) -> list[int]:
        return [len(lv) for lv in self.levels]

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "status": str(self.status),
            "status_kind": self.status.kind,
            "status_height": self.status.height,
            "fruit_heights": list(self.fruit_heights),
            "level_counts": self.level_sizes(),
            "materialized_height": self.materialized_height,
            "witness": self.witness,
        }


def _children(x: int, k: int, seq: IncrementSequence, bound: BoundProvider):
    """(fruit?, child values) for a node of value x at height k."""
    members = totient_fiber(x).members
    if not members:
        return False, ()
    a = seq.term(k + 1)
    b = bound(k + 1)
    lo = bisect.bisect_left(members, a)
    hi = len(members) if b is None else bisect.bisect_right(members, a + b)
    fruit = lo < len(members) and members[lo] == a
    start = lo + 1 if fruit else lo
    return fruit, tuple(w - a for w in members[start:hi])


def _needs_term(x: int, k: int, seq: IncrementSequence) -> bool:
    """True when expanding x at height k needs a term the sequence lacks."""
    lim = seq.limit
    return lim is not None and k + 1 > lim and len(totient_fiber(x)) > 0


def fruit(x: int, k: int, seq: IncrementSequence, bound: BoundProvider,
          height_cap: int = DEFAULT_HEIGHT_CAP, node_cap: int = DEFAULT_NODE_CAP):
    """Depth-first fruit search from value x at height k.

    Yields every fruit height (ints) in depth-first order, then one final
    TreeStatus. Nodes at ``height_cap`` are not expanded.
    """
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x == 0:
        yield k
        yield Died(k)
        return
    b0 = bound(k)
    if b0 is not None and x > b0:
        yield Died(k)
        return
    stack = [(x, k)]
    visited = 0
    top = k
    reached_cap = False
    overgrown_at = None
    while stack:
        v, h = stack.pop()
        visited += 1
        if visited > node_cap:
            yield NodeCapExceeded(h)
            return
        top = max(top, h)
        if h >= height_cap:
            reached_cap = True
            continue
        if _needs_term(v, h, seq):
            overgrown_at = h if overgrown_at is None else min(overgrown_at, h)
            continue
        has_fruit, kids = _children(v, h, seq, bound)
        if has_fruit:
            yield h + 1
        # reversed so smaller values are explored first
        stack.extend((z, h + 1) for z in reversed(kids))
    if overgrown_at is not None:
        yield Overgrown(overgrown_at)
    elif reached_cap:
        yield Survived(height_cap)
    else:
        yield Died(top)


@lru_cache(maxsize=8)
def _window_values(seq: IncrementSequence, n_lo: int, n_hi: int) -> dict[int, int]:
    return dict(zip(range(n_lo, n_hi + 1), scoreboard_values(seq, n_lo, n_hi)))


def find_witness(root: int, seq: IncrementSequence, bound: BoundProvider, height_cap: int,
                 window: int | None = None, values: dict[int, int] | None = None) -> int | None:
    """Smallest n in [height_cap, height_cap + window] with A(n) = root and a trace inside the bound.

    ``values`` may carry precomputed {n: A(n)} for the window.
    """
    window = height_cap if window is None else window
    n_lo, n_hi = max(height_cap, 1), max(height_cap, 1) + window
    if seq.limit is not None:
        n_hi = min(n_hi, seq.limit)
    if n_lo > n_hi:
        return None
    if values is None:
        values = _window_values(seq, n_lo, n_hi)
    for n in range(n_lo, n_hi + 1):
        if values.get(n) != root:
            continue
        trace = evaluate_trace(seq, n).values
        if all(bound(k) is None or v <= bound(k) for k, v in enumerate(trace)):
            return n
    return None


def grow_tree(x: int, seq: IncrementSequence, bound: BoundProvider,
              height_cap: int = DEFAULT_HEIGHT_CAP, node_cap: int = DEFAULT_NODE_CAP,
              witness_window: int | None = None, witness_values: dict[int, int] | None = None) -> TotientTree:
    """Grow the tree rooted at x one height at a time.

    ``node_cap`` limits the total number of stored nodes. A tree that hits it
    is searched for a witness (see ``find_witness``); with one it is
    Survived, otherwise NodeCapExceeded.
    """
    if x < 1:
        raise ValueError(f"root must be >= 1, got {x}")
    b0 = bound(0)
    levels = [np.array([x], dtype=np.int64)]
    counts = [1]
    fruits: list[int] = []
    if b0 is not None and x > b0:
        return TotientTree(x, [np.array([], dtype=np.int64)], [], Died(0), [0])
    current = {x: 1}
    total = 1
    for k in range(height_cap):
        if seq.limit is not None and k + 1 > seq.limit:
            if any(_needs_term(v, k, seq) for v in current):
                return TotientTree(x, levels, fruits, Overgrown(k), counts)
        nxt: dict[int, int] = {}
        for v, paths in current.items():
            has_fruit, kids = _children(v, k, seq, bound)
            if has_fruit and (not fruits or fruits[-1] != k + 1):
                fruits.append(k + 1)
            for z in kids:
                nxt[z] = nxt.get(z, 0) + paths
        if not nxt:
            return TotientTree(x, levels, fruits, Died(k), counts)
        total += len(nxt)
        if total > node_cap:
            w = find_witness(x, seq, bound, height_cap, witness_window, witness_values)
            status = Survived(height_cap) if w is not None else NodeCapExceeded(k + 1)
            return TotientTree(x, levels, fruits, status, counts, witness=w)
        levels.append(np.array(sorted(nxt), dtype=np.int64))
        counts.append(sum(nxt.values()))
        current = nxt
    return TotientTree(x, levels, fruits, Survived(height_cap), counts)


@dataclass
class ForestReport:
    sequence: str
    bound: str
    trees: list[TotientTree]
    height_cap: int
    node_cap: int

    @property
    def roots(self) -> list[int]:
        return [t.root for t in self.trees]

    def tree(self, root: int) -> TotientTree:
        for t in self.trees:
            if t.root == root:
                return t
        raise KeyError(root)

    def survivors(self) -> list[int]:
        return [t.root for t in self.trees if t.status.kind == "survived"]

    def to_json(self) -> dict:
        return {
            "sequence": self.sequence,
            "bound": self.bound,
            "height_cap": self.height_cap,
            "node_cap": self.node_cap,
            "trees": [t.to_json() for t in self.trees],
        }


def candidate_roots(bound: BoundProvider) -> list[int]:
    """1 and every even number up to b_0: the only possible totient values in range."""
    b0 = bound(0)
    if b0 is None:
        raise ValueError("an unbounded provider needs explicit roots")
    return [1] + list(range(2, b0 + 1, 2)) if b0 >= 1 else []


def _grow_one(args):
    return grow_tree(*args)


def default_threads() -> int:
    env = os.environ.get("TOTIENT_FOREST_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def grow_forest(seq: IncrementSequence, bound: BoundProvider, height_cap: int = DEFAULT_HEIGHT_CAP,
                node_cap: int = DEFAULT_NODE_CAP, roots=None, threads: int = 1,
                witness_window: int | None = None) -> ForestReport:
    """One independent tree per candidate root, reported in ascending root order."""
    if roots is None:
        roots = candidate_roots(bound)
    roots = sorted(set(roots))
    args = [(r, seq, bound, height_cap, node_cap, witness_window) for r in roots]
    if threads > 1 and len(roots) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            trees = list(pool.map(_grow_one, args))
    else:
        trees = [_grow_one(a) for a in args]
    return ForestReport(seq.describe(), bound.describe(), trees, height_cap, node_cap)


@dataclass
class CaseEquation:
    cases: list[tuple[int, tuple[int, ...]]]
    otherwise: int | None
    conclusive: bool
    statuses: dict[int, str]

    def value_at(self, n: int) -> int:
        if not self.conclusive:
            raise ValueError("inconclusive case equation")
        for value, ns in self.cases:
            if n in ns:
                return value
        return self.otherwise

    def to_json(self) -> dict:
        return {
            "conclusive": self.conclusive,
            "cases": [{"value": v, "n": list(ns)} for v, ns in self.cases],
            "otherwise": self.otherwise,
            "statuses": {str(k): v for k, v in self.statuses.items()},
        }

    def __str__(self) -> str:
        if not self.conclusive:
            alive = [r for r, s in self.statuses.items() if not s.startswith("Died")]
            return "inconclusive: " + ", ".join(f"{r}:{self.statuses[r]}" for r in alive)
        lines = [f"{v} if n in {{{','.join(map(str, ns))}}}" for v, ns in self.cases]
        lines.append(f"{self.otherwise} otherwise")
        return "\n".join(lines)


def synthesize_case_equation(forest: ForestReport, seq: IncrementSequence,
                             otherwise_sample: int = 200) -> CaseEquation:
    """Closed-form cases when exactly one tree survives and every other one died.

    Each listed n and the n in a sample range past them are re-evaluated
    directly; any disagreement raises ConsistencyError.
    """
    statuses = {t.root: str(t.status) for t in forest.trees}
    survivors = [t for t in forest.trees if t.status.kind == "survived"]
    dead = [t for t in forest.trees if t.status.kind == "died"]
    if len(survivors) != 1 or len(dead) != len(forest.trees) - 1:
        return CaseEquation([], None, False, statuses)
    cases = [(t.root, tuple(t.fruit_heights)) for t in dead if t.fruit_heights]
    cases.sort(key=lambda c: c[1][0])
    eq = CaseEquation(cases, survivors[0].root, True, statuses)

    listed = {n for _, ns in cases for n in ns}
    last = max(listed, default=0)
    check = sorted(listed | set(range(1, last + otherwise_sample + 1)))
    if seq.limit is not None:
        check = [n for n in check if n <= seq.limit]
    direct = scoreboard_values(seq, 1, check[-1]) if check else []
    for n in check:
        if direct[n - 1] != eq.value_at(n):
            raise ConsistencyError(f"n={n}: forest says {eq.value_at(n)}, direct evaluation gives {direct[n - 1]}")
    return eq


__all__ = [
    "CaseEquation", "ConsistencyError", "ForestReport", "TotientTree", "TreeStatus",
    "Died", "Survived", "Overgrown", "NodeCapExceeded",
    "candidate_roots", "find_witness", "fruit", "grow_forest", "grow_tree",
    "synthesize_case_equation", "scoreboard_value",
]
