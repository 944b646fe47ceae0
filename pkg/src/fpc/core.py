"""Code primitives and exact collusion-resistance checkers.

Words are tuples of 1-based symbols from {1..q}. A code is a set of distinct
words of a common length. The two checkers, `is_frameproof` and
`is_cover_free`, decide the same property through deliberately different
routes (coordinate products vs. set unions) so they can cross-validate each
other; both are exact and refuse oversized instances instead of sampling.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

Word = tuple[int, ...]
Edge = frozenset[tuple[int, int]]  # {(position, symbol)}, positions 1-based

DEFAULT_BUDGET = 10**10

# Instances smaller than this skip the numpy bulk path; loop overhead wins.
_BULK_THRESHOLD = 2_000_000


class BudgetExceededError(Exception):
    """The exact enumeration would exceed the comparison budget."""


def validate_word(word: Sequence[int], l: int, q: int) -> Word:
    w = tuple(word)
    if len(w) != l:
        raise ValueError(f"word {w} has length {len(w)}, expected {l}")
    for s in w:
        if not (isinstance(s, int) and 1 <= s <= q):
            raise ValueError(f"word {w} has symbol {s!r} outside 1..{q}")
    return w


@dataclass(frozen=True)
class Code:
    """A set of distinct length-l words over symbols {1..q}, kept sorted."""

    q: int
    l: int
    words: tuple[Word, ...]

    def __init__(self, q: int, l: int, words: Iterable[Sequence[int]]):
        if q < 1 or l < 1:
            raise ValueError("q and l must be positive")
        validated = [validate_word(w, l, q) for w in words]
        if len(set(validated)) != len(validated):
            dupes = [w for w, k in Counter(validated).items() if k > 1]
            raise ValueError(f"duplicate words rejected: {dupes[:3]}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "words", tuple(sorted(validated)))

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word) -> bool:
        return tuple(word) in set(self.words)


@dataclass(frozen=True)
class Witness:
    """A concrete violation: `word` is a descendant of `coalition`."""

    word: Word
    coalition: tuple[Word, ...]


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: Optional[Witness] = None


@dataclass(frozen=True)
class OwnCounts:
    own_t_count: int
    own_tminus1_count: int


def _check_coalition(coalition: Sequence[Word], l: int) -> tuple[Word, ...]:
    coal = tuple(sorted(set(map(tuple, coalition))))
    if not coal:
        raise ValueError("coalition must be nonempty")
    for w in coal:
        if len(w) != l:
            raise ValueError(f"coalition word {w} has length {len(w)}, expected {l}")
    return coal


def desc_contains(y: Sequence[int], coalition: Sequence[Word]) -> bool:
    """True iff every coordinate of y appears in some coalition member there."""
    y = tuple(y)
    coal = _check_coalition(coalition, len(y))
    for i, s in enumerate(y):
        if all(x[i] != s for x in coal):
            return False
    return True


def desc_size(coalition: Sequence[Word]) -> int:
    """Number of descendants: product of per-coordinate symbol-set sizes."""
    first = next(iter(coalition), None)
    if first is None:
        raise ValueError("coalition must be nonempty")
    coal = _check_coalition(coalition, len(first))
    size = 1
    for col in zip(*coal):
        size *= len(set(col))
    return size


# ---------------------------------------------------------------------------
# Frameproof checker (word side)
# ---------------------------------------------------------------------------
#
# A violation is a pair (x0, coalition) with x0 a codeword outside the
# coalition and x0 a descendant of it. Checking coalitions of size exactly
# s = min(c, |C|-1) is complete: descendants only grow with the coalition.
# Witnesses are canonical: least (x0, sorted coalition) over all violations,
# so results never depend on evaluation order.


def _frameproof_estimates(n: int, s: int, l: int) -> tuple[int, int]:
    n_coal = _comb(n, s)
    est_pairs = n_coal * (n - s) * l
    est_desc = n_coal * (s**l) * l
    return est_pairs, est_desc


def _comb(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def is_frameproof(code: Code, c: int, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Exact c-frameproof check.

    Picks whichever enumeration is smaller: coalitions x outside codewords,
    or the descendant set of each coalition probed against a word index.
    Raises BudgetExceededError rather than sampling when both exceed `budget`.
    """
    if c < 2:
        raise ValueError("c must be at least 2")
    words = code.words
    n = len(words)
    if n <= 1:
        return Verdict(True)
    s = min(c, n - 1)
    est_pairs, est_desc = _frameproof_estimates(n, s, code.l)
    if min(est_pairs, est_desc) > budget:
        raise BudgetExceededError(
            f"frameproof check needs ~{min(est_pairs, est_desc):.2e} comparisons, "
            f"budget is {budget:.2e}"
        )
    if est_pairs <= est_desc:
        if est_pairs >= _BULK_THRESHOLD:
            witness = _frameproof_scan_bulk(words, s)
        else:
            witness = _frameproof_scan_pairs(words, s)
    else:
        witness = _frameproof_scan_desc(words, s)
    return Verdict(witness is None, witness)


def _frameproof_scan_pairs(words: tuple[Word, ...], s: int) -> Optional[Witness]:
    # x0 ascending, coalitions in lex order: first hit is the canonical least.
    for i0, x0 in enumerate(words):
        others = words[:i0] + words[i0 + 1 :]
        for coal in itertools.combinations(others, s):
            if desc_contains(x0, coal):
                return Witness(x0, coal)
    return None


def _frameproof_scan_bulk(words: tuple[Word, ...], s: int) -> Optional[Witness]:
    arr = np.asarray(words, dtype=np.int32)
    n = len(words)
    best: Optional[tuple[Word, tuple[Word, ...]]] = None
    idx = np.arange(n)
    for coal_idx in itertools.combinations(range(n), s):
        eq = arr == arr[coal_idx[0]]
        for i in coal_idx[1:]:
            eq |= arr == arr[i]
        covered = eq.all(axis=1)
        covered[list(coal_idx)] = False
        if covered.any():
            coal = tuple(words[i] for i in coal_idx)
            for j in idx[covered]:
                cand = (words[j], coal)
                if best is None or cand < best:
                    best = cand
    return None if best is None else Witness(*best)


def _frameproof_scan_desc(words: tuple[Word, ...], s: int) -> Optional[Witness]:
    member = set(words)
    best: Optional[tuple[Word, tuple[Word, ...]]] = None
    for coal in itertools.combinations(words, s):
        coal_set = set(coal)
        columns = [sorted(set(col)) for col in zip(*coal)]
        for y in itertools.product(*columns):
            if y in member and y not in coal_set:
                cand = (y, coal)
                if best is None or cand < best:
                    best = cand
    return None if best is None else Witness(*best)


# ---------------------------------------------------------------------------
# Cover-free checker (hypergraph side)
# ---------------------------------------------------------------------------


def pi(code: Code) -> list[Edge]:
    """Map each word to its transversal edge {(i, x_i)} of the complete
    l-partite hypergraph; order follows the sorted word order."""
    return [frozenset((i + 1, sym) for i, sym in enumerate(w)) for w in code.words]


def pi_inverse(edges: Iterable[Edge], q: int, l: Optional[int] = None) -> Code:
    """Inverse of `pi`. Every edge must carry exactly one symbol per position."""
    edge_list = list(edges)
    if not edge_list:
        if l is None:
            raise ValueError("cannot infer word length from an empty edge list")
        return Code(q, l, [])
    words = []
    for e in edge_list:
        positions = sorted(p for p, _ in e)
        ll = len(e)
        if l is not None and ll != l:
            raise ValueError(f"edge {sorted(e)} has size {ll}, expected {l}")
        if positions != list(range(1, ll + 1)):
            raise ValueError(f"edge {sorted(e)} is not a transversal of positions 1..{ll}")
        by_pos = dict(e)
        words.append(tuple(by_pos[p] for p in range(1, ll + 1)))
    return Code(q, len(edge_list[0]), words)


def is_cover_free(code: Code, c: int, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Exact c-cover-free check on the edge family pi(code).

    Independent of `is_frameproof`: for each candidate victim edge it asks
    whether the agreement sets of s other edges can union to all positions,
    by breadth-first closure over the distinct agreement masks. Witnesses use
    the same canonical (word, coalition) order as the frameproof checker.
    """
    if c < 2:
        raise ValueError("c must be at least 2")
    words = code.words
    n = len(words)
    if n <= 1:
        return Verdict(True)
    l = code.l
    s = min(c, n - 1)
    estimate = n * n * l + n * (4**l) * s
    if estimate > budget:
        raise BudgetExceededError(
            f"cover-free check needs ~{estimate:.2e} comparisons, budget is {budget:.2e}"
        )
    edges = pi(code)
    full = (1 << l) - 1
    pos_bit = {p: 1 << (p - 1) for p in range(1, l + 1)}
    for i0 in range(n):
        e0 = edges[i0]
        values = set()
        for j in range(n):
            if j == i0:
                continue
            m = 0
            for p, _sym in e0 & edges[j]:
                m |= pos_bit[p]
            if m:
                values.add(m)
        if not _unions_reach(values, full, s):
            continue
        # Rare path: locate the lexicographically least covering coalition.
        others = [j for j in range(n) if j != i0]
        for coal_j in itertools.combinations(others, s):
            union = frozenset().union(*(edges[j] for j in coal_j))
            if e0 <= union:
                coalition = tuple(words[j] for j in coal_j)
                return Verdict(False, Witness(words[i0], coalition))
        raise AssertionError("mask closure found a cover but no coalition realizes it")
    return Verdict(True)


def _unions_reach(values: set[int], full: int, steps: int) -> bool:
    """Can at most `steps` of the masks union to `full`?

    Reusing a mask value never enlarges a union, so closure over distinct
    values is equivalent to closure over distinct edges.
    """
    reach = {0}
    for _ in range(steps):
        new = set()
        for u in reach:
            for v in values:
                uv = u | v
                if uv == full:
                    return True
                new.add(uv)
        if new <= reach:
            return False
        reach |= new
    return False


# ---------------------------------------------------------------------------
# Own subsequences / own subsets
# ---------------------------------------------------------------------------


def own_profile(code: Code, t: int) -> dict[Word, OwnCounts]:
    """Per-word counts of own t- and (t-1)-subsequences.

    A restriction x_S is own when no other codeword agrees with x on S.
    """
    if not (1 <= t <= code.l):
        raise ValueError(f"t={t} outside 1..{code.l}")
    counts_t = _own_subsequence_counts(code.words, code.l, t)
    counts_tm1 = _own_subsequence_counts(code.words, code.l, t - 1)
    return {
        w: OwnCounts(counts_t[k], counts_tm1[k]) for k, w in enumerate(code.words)
    }


def _own_subsequence_counts(words: tuple[Word, ...], l: int, t: int) -> list[int]:
    counts = [0] * len(words)
    for positions in itertools.combinations(range(l), t):
        groups = Counter(tuple(w[i] for i in positions) for w in words)
        for k, w in enumerate(words):
            if groups[tuple(w[i] for i in positions)] == 1:
                counts[k] += 1
    return counts


def own_subset_counts(edges: Sequence[Edge], t: int) -> list[int]:
    """Per-edge counts of own t-subsets, computed purely on vertex sets.

    Cross-checks `own_profile` through the pi correspondence: a position set
    is own for a word exactly when the matching vertex set is an own t-subset.
    """
    incidence: Counter = Counter()
    subsets_of = []
    for e in edges:
        subs = [frozenset(c) for c in itertools.combinations(sorted(e), t)]
        subsets_of.append(subs)
        incidence.update(subs)
    return [sum(1 for T in subs if incidence[T] == 1) for subs in subsets_of]
