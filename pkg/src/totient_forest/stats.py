"""Statistics over forests and scoreboard sequences, plus their CSV emitters.

Counts are exact integers and shares are Fractions; floats appear only
when rows are written out.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .arboreal import ForestReport, TotientTree
from .scoreboard import scoreboard_sequence, scoreboard_values
from .sequences import IncrementSequence


def tree_size_profile(tree: TotientTree, mode: str = "distinct") -> list[tuple[int, int]]:
    """(height, node count) for every materialized height, ending with a 0 row if the tree died.

    ``mode="paths"`` counts root-to-node paths instead of distinct values.
    """
    if mode == "distinct":
        sizes = tree.level_sizes()
    elif mode == "paths":
        sizes = list(tree.path_counts)
    else:
        raise ValueError(f"unknown counting mode {mode!r}")
    rows = list(enumerate(sizes))
    if tree.status.kind == "died":
        rows.append((len(sizes), 0))
    return rows


def _profile_horizon(forest: ForestReport) -> int:
    """Last height at which every tree's node count is known."""
    horizon = max(t.materialized_height + (1 if t.status.kind == "died" else 0) for t in forest.trees)
    for t in forest.trees:
        if t.status.kind != "died":
            horizon = min(horizon, t.materialized_height)
    return horizon


def canopy_density(forest: ForestReport) -> list[dict[int, tuple[int, Fraction]]]:
    """Per height, {root: (node count, share of all nodes at that height)} for roots with nodes there."""
    horizon = _profile_horizon(forest)
    out = []
    for h in range(horizon + 1):
        counts = {}
        for t in forest.trees:
            c = len(t.levels[h]) if h < len(t.levels) else 0
            if c:
                counts[t.root] = c
        total = sum(counts.values())
        out.append({r: (c, Fraction(c, total)) for r, c in counts.items()})
    return out


def fruit_rolling_share(seq: IncrementSequence, n_max: int, window: int,
                        values: list[int] | None = None) -> list[tuple[int, int, Fraction]]:
    """Rows (n, value, share) where share is the fraction of m in (n - window, n] with A(m) = value.

    Rows start at n = window; only values with a nonzero share appear.
    """
    if window < 1 or window > n_max:
        raise ValueError(f"window must be in [1, {n_max}], got {window}")
    if values is None:
        values = scoreboard_sequence(seq, n_max)
    counts = Counter(values[:window])
    rows = []
    for n in range(window, n_max + 1):
        if n > window:
            counts[values[n - 1]] += 1
            old = values[n - window - 1]
            counts[old] -= 1
            if not counts[old]:
                del counts[old]
        for v in sorted(counts):
            rows.append((n, v, Fraction(counts[v], window)))
    return rows


@dataclass
class FrequencyEntry:
    value: int
    count: int
    share: Fraction
    ns: list[int] = field(default_factory=list)


@dataclass
class FrequencyTable:
    n_lo: int
    n_hi: int
    entries: dict[int, FrequencyEntry]

    @property
    def size(self) -> int:
        return self.n_hi - self.n_lo + 1

    def share(self, value: int) -> Fraction:
        e = self.entries.get(value)
        return e.share if e else Fraction(0)

    def percent(self, value: int) -> float:
        return float(100 * self.share(value))

    def rows(self) -> list[tuple[int, int, Fraction]]:
        return [(v, e.count, e.share) for v, e in sorted(self.entries.items())]


def value_frequencies(seq: IncrementSequence, n_range, values: list[int] | None = None) -> FrequencyTable:
    """Exact counts of each scoreboard value over ``n_range`` (a range or an inclusive (lo, hi) pair)."""
    if isinstance(n_range, range):
        if n_range.step != 1 or not n_range:
            raise ValueError("n_range must be a nonempty unit-step range")
        lo, hi = n_range.start, n_range.stop - 1
    else:
        lo, hi = n_range
    if lo < 1 or hi < lo:
        raise ValueError(f"empty or invalid range [{lo}, {hi}]")
    if values is None:
        values = scoreboard_values(seq, lo, hi)
    elif len(values) != hi - lo + 1:
        raise ValueError("values must cover the range exactly")
    by_value: dict[int, list[int]] = {}
    for n, v in zip(range(lo, hi + 1), values):
        by_value.setdefault(v, []).append(n)
    size = hi - lo + 1
    entries = {v: FrequencyEntry(v, len(ns), Fraction(len(ns), size), ns) for v, ns in by_value.items()}
    return FrequencyTable(lo, hi, entries)


def _fmt(share: Fraction) -> str:
    return f"{float(share):.6f}"


def write_canopy_csv(fh, density) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["height", "root", "count", "share"])
    for h, per_root in enumerate(density):
        for root in sorted(per_root):
            count, share = per_root[root]
            w.writerow([h, root, count, _fmt(share)])


def write_rolling_csv(fh, rows) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "value", "share"])
    for n, v, share in rows:
        w.writerow([n, v, _fmt(share)])


def write_frequency_csv(fh, table: FrequencyTable) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["value", "count", "share"])
    for v, count, share in table.rows():
        w.writerow([v, count, _fmt(share)])


def write_profile_csv(fh, forest: ForestReport, mode: str = "distinct") -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["root", "height", "count"])
    for t in forest.trees:
        for h, c in tree_size_profile(t, mode):
            w.writerow([t.root, h, c])


def write_levels_csv(fh, tree: TotientTree) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["height", "value"])
    for h, level in enumerate(tree.levels):
        for v in level.tolist():
            w.writerow([h, v])
