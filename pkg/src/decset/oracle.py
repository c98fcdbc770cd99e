"""Brute-force reference implementations for tests.

Nothing here imports the solving pipeline; terms are plain tuples of
``(feature, polarity)`` pairs and matrices plain lists of row sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

OracleTerm = Tuple[Tuple[int, int], ...]


class OracleLimitError(ValueError):
    pass


@dataclass(frozen=True)
class OracleLimits:
    max_features: int = 12
    max_columns: int = 22
    max_variables: int = 20


LIMITS = OracleLimits()


def _agrees(term: OracleTerm, vec: Sequence[int]) -> bool:
    for r, s in term:
        if vec[r] != s:
            return False
    return True


def _valid(term: OracleTerm, pos, neg) -> bool:
    return not any(_agrees(term, v) for v in neg) and any(_agrees(term, v) for v in pos)


def all_irreducible_terms(pos, neg, K: int, limits: OracleLimits = LIMITS) -> Set[OracleTerm]:
    """Every valid term none of whose proper subterms is valid, by scanning
    all 3^K candidates."""
    if K > limits.max_features:
        raise OracleLimitError(f"K={K} exceeds {limits.max_features}")
    if not pos:
        return set()
    valid = set()
    for choice in itertools.product((None, 0, 1), repeat=K):
        term = tuple((r, s) for r, s in enumerate(choice) if s is not None)
        if _valid(term, pos, neg):
            valid.add(term)
    out = set()
    for term in valid:
        reducible = False
        for k in range(len(term)):
            for sub in itertools.combinations(term, k):
                if sub in valid:
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            out.add(term)
    return out


def term_coverage(term: OracleTerm, pos) -> FrozenSet[int]:
    return frozenset(i for i, v in enumerate(pos) if _agrees(term, v))


def min_cover_bruteforce(columns: Sequence[Iterable[int]], n_rows: int, weights: Sequence[int],
                         limits: OracleLimits = LIMITS) -> Optional[int]:
    """Minimum total weight of a column subset covering every row; None if
    no subset covers.

    Subsets are scanned by size.  An optimum never needs more columns than
    rows, and once ``k * min(weights)`` reaches the best cost no larger
    subset can improve on it, so the scan stays exhaustive.
    """
    cols = [frozenset(c) for c in columns]
    L = len(cols)
    if L > limits.max_columns:
        raise OracleLimitError(f"{L} columns exceed {limits.max_columns}")
    need = frozenset(range(n_rows))
    if not need:
        return 0
    if not need <= frozenset().union(*cols):
        return None
    wmin = min(weights)
    best = None
    for k in range(1, min(L, n_rows) + 1):
        if best is not None and k * wmin >= best:
            break
        for combo in itertools.combinations(range(L), k):
            w = sum(weights[j] for j in combo)
            if best is not None and w >= best:
                continue
            if frozenset().union(*(cols[j] for j in combo)) >= need:
                best = w
    return best


def sat_truthtable(clauses: Sequence[Sequence[int]], nvars: int, limits: OracleLimits = LIMITS):
    """(satisfiable, model count, first satisfying assignment or None) over
    variables 1..nvars."""
    if nvars > limits.max_variables:
        raise OracleLimitError(f"{nvars} variables exceed {limits.max_variables}")
    count = 0
    first = None
    for bits in itertools.product((False, True), repeat=nvars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            count += 1
            if first is None:
                first = bits
    return count > 0, count, first


def min_cost_bruteforce(hard, soft, nvars: int, limits: OracleLimits = LIMITS) -> Optional[int]:
    """Fewest falsified unit soft literals over models of ``hard``."""
    if nvars > limits.max_variables:
        raise OracleLimitError(f"{nvars} variables exceed {limits.max_variables}")
    best = None
    for bits in itertools.product((False, True), repeat=nvars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in hard):
            cost = sum(1 for s in soft if bits[abs(s) - 1] != (s > 0))
            if best is None or cost < best:
                best = cost
    return best


def min_removals_for_consistency(rows: Sequence[Tuple[Tuple[int, ...], int]]) -> int:
    """Fewest rows to delete so no vector carries two labels (subset search)."""
    n = len(rows)
    for k in range(n + 1):
        for drop in itertools.combinations(range(n), k):
            gone = set(drop)
            seen = {}
            ok = True
            for i, (v, c) in enumerate(rows):
                if i in gone:
                    continue
                if seen.setdefault(v, c) != c:
                    ok = False
                    break
            if ok:
                return k
    return n
