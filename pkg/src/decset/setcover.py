"""Exact minimum set cover of positive examples by enumerated terms.

Rows are positive examples, columns are terms.  Coverage is stored per
column as an int bitset over rows.  Two objectives: ``rules`` (every column
costs 1) and ``literals`` (a column costs its term size).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .maxsat import PartialInstance, solve_min

OBJECTIVES = ("rules", "literals")
BACKENDS = ("bnb", "maxsat")
_ALIASES = {"r": "rules", "l": "literals"}


def objective_name(objective: str) -> str:
    obj = _ALIASES.get(objective, objective)
    if obj not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    return obj


@dataclass
class CoverMatrix:
    n_rows: int
    columns: List[int]
    sizes: List[int]

    def __post_init__(self):
        if len(self.columns) != len(self.sizes):
            raise ValueError("columns and sizes differ in length")

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    @property
    def full(self) -> int:
        return (1 << self.n_rows) - 1

    def weights(self, objective: str) -> List[int]:
        if objective_name(objective) == "rules":
            return [1] * len(self.columns)
        return list(self.sizes)

    def uncovered(self) -> List[int]:
        union = 0
        for c in self.columns:
            union |= c
        return [i for i in range(self.n_rows) if not union >> i & 1]

    def dumps(self) -> str:
        lines = [f"{self.n_cols} {self.n_rows}"]
        for i in range(self.n_rows):
            lines.append(" ".join(str(c >> i & 1) for c in self.columns))
        lines.append(" ".join(map(str, self.sizes)))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "CoverMatrix":
        rows = [l.split() for l in text.strip().splitlines() if l.strip()]
        L, M = int(rows[0][0]), int(rows[0][1])
        if len(rows) != M + 2:
            raise ValueError(f"expected {M} matrix rows and a weight row")
        cols = [0] * L
        for i, row in enumerate(rows[1 : M + 1]):
            if len(row) != L:
                raise ValueError(f"matrix row {i + 1} has {len(row)} entries, expected {L}")
            for j, x in enumerate(row):
                if x == "1":
                    cols[j] |= 1 << i
        return cls(M, cols, [int(x) for x in rows[M + 1]])


@dataclass
class CoverSolution:
    selected: Tuple[int, ...]
    cost: int


def build_matrix(terms) -> CoverMatrix:
    """Columns are term coverages, sizes are term sizes.  A ``TermSet``
    fixes the row count; every row must be covered by some term."""
    items = list(terms)
    if not items:
        raise ValueError("empty term set")
    cols = [t.coverage for t in items]
    n_rows = getattr(terms, "n_positives", 0) or max(c.bit_length() for c in cols)
    m = CoverMatrix(n_rows, cols, [t.size for t in items])
    missing = m.uncovered()
    if missing:
        raise AssertionError(f"positive examples {missing} are not covered by any term")
    return m


def _cost(m: CoverMatrix, sel, w: Sequence[int]) -> int:
    return sum(w[j] for j in sel)


def _check(m: CoverMatrix, sel) -> bool:
    cov = 0
    for j in sel:
        cov |= m.columns[j]
    return cov == m.full


# -- reductions ----------------------------------------------------------


def reduce(m: CoverMatrix, objective: str):
    """Classical set-cover reductions applied to a fixpoint.

    Returns ``(reduced, forced, remap)``: ``forced`` holds original column
    indices that belong to every optimum of the remaining problem, and
    ``remap[k]`` is the original index of reduced column ``k``.  The optimum
    of the input equals ``cost(forced) + optimum(reduced)``.
    """
    w_all = m.weights(objective)
    cols: Dict[int, int] = {j: c for j, c in enumerate(m.columns) if c}
    rows = m.full
    forced: List[int] = []
    changed = True
    while changed:
        changed = False
        # restrict to live rows, drop columns covering nothing live
        for j in list(cols):
            c = cols[j] & rows
            if c:
                cols[j] = c
            else:
                del cols[j]
        # duplicate and dominated columns
        order = sorted(cols, key=lambda j: (w_all[j], -(cols[j]).bit_count(), j))
        kept: List[int] = []
        for j in order:
            cj = cols[j]
            if any(cols[k] | cj == cols[k] for k in kept):
                del cols[j]
                changed = True
            else:
                kept.append(j)
        # rows with a single covering column force it
        row_cols: Dict[int, int] = {}
        for j, c in cols.items():
            x = c
            while x:
                low = x & -x
                i = low.bit_length() - 1
                row_cols[i] = row_cols.get(i, 0) | (1 << j)
                x ^= low
        for i, rc in sorted(row_cols.items()):
            if not rows >> i & 1:
                continue
            if rc & (rc - 1) == 0:
                j = rc.bit_length() - 1
                if j in cols:
                    forced.append(j)
                    rows &= ~cols[j]
                    del cols[j]
                    changed = True
        if changed:
            continue
        # dominated rows: covering row r' also covers r if cols(r') <= cols(r)
        live = sorted(i for i in row_cols if rows >> i & 1)
        for a in live:
            for b in live:
                if a == b or not rows >> b & 1 or not rows >> a & 1:
                    continue
                ra, rb = row_cols[a], row_cols[b]
                if ra & rb == ra and (ra != rb or a < b):
                    rows &= ~(1 << b)
                    changed = True
    live_rows = [i for i in range(m.n_rows) if rows >> i & 1]
    remap = sorted(cols)
    new_cols = []
    for j in remap:
        c, nc = cols[j], 0
        for k, i in enumerate(live_rows):
            if c >> i & 1:
                nc |= 1 << k
        new_cols.append(nc)
    reduced = CoverMatrix(len(live_rows), new_cols, [m.sizes[j] for j in remap])
    return reduced, sorted(forced), remap


# -- bounds --------------------------------------------------------------


def greedy_cover(m: CoverMatrix, objective: str) -> CoverSolution:
    """Repeatedly take the column of least weight per newly covered row."""
    w = m.weights(objective)
    left = m.full
    sel = []
    while left:
        best, score = None, None
        for j, c in enumerate(m.columns):
            gain = (c & left).bit_count()
            if not gain:
                continue
            s = (w[j] / gain, j)
            if score is None or s < score:
                best, score = j, s
        if best is None:
            raise ValueError("matrix has an uncovered row")
        sel.append(best)
        left &= ~m.columns[best]
    sel = _drop_redundant(m, sel, w)
    return CoverSolution(tuple(sorted(sel)), _cost(m, sel, w))


def _drop_redundant(m: CoverMatrix, sel: List[int], w) -> List[int]:
    sel = sorted(sel, key=lambda j: (-w[j], -j))
    for j in list(sel):
        rest = [k for k in sel if k != j]
        if _check(m, rest):
            sel = rest
    return sel


class _Search:
    """Row-branching branch and bound over bitsets of rows and columns."""

    def __init__(self, m: CoverMatrix, w: Sequence[int], deadline: Optional[float]):
        self.m = m
        self.w = list(w)
        self.deadline = deadline
        self.nodes = 0
        self.row_cols = [0] * m.n_rows
        for j, c in enumerate(m.columns):
            x = c
            while x:
                low = x & -x
                self.row_cols[low.bit_length() - 1] |= 1 << j
                x ^= low

    def tick(self):
        self.nodes += 1
        if self.deadline is not None and self.nodes % 256 == 1 and time.monotonic() > self.deadline:
            raise TimeoutError("set cover exceeded the time budget")

    def lower_bound(self, left: int, avail: int) -> Optional[int]:
        """Max of a disjoint-row packing bound and a best-ratio bound; None
        if some row has no candidate left."""
        rows = []
        x = left
        while x:
            low = x & -x
            i = low.bit_length() - 1
            cand = self.row_cols[i] & avail
            if not cand:
                return None
            rows.append((cand.bit_count(), i, cand))
            x ^= low
        rows.sort()
        used = 0
        pack = 0
        w = self.w
        for _, _, cand in rows:
            if cand & used:
                continue
            used |= cand
            pack += min(w[j] for j in _bits(cand))
        # every cover pays at least min(w/gain) per remaining row
        n = len(rows)
        cols = self.m.columns
        bw, bg = 1, 0
        for j in _bits(avail):
            g = (cols[j] & left).bit_count()
            if g and w[j] * bg < bw * g:
                bw, bg = w[j], g
        ratio = -(-n * bw // bg)
        return max(pack, ratio)

    def search(self, left: int, avail: int, bound: int, first: bool = False) -> Optional[Tuple[int, ...]]:
        """Cheapest cover of ``left`` from ``avail`` costing less than
        ``bound``, or None.  With ``first`` stop at any such cover."""
        m, w = self.m, self.w
        best: List = [bound, None]
        chosen: List[int] = []

        def rec(left: int, avail: int, cost: int) -> bool:
            self.tick()
            if not left:
                best[0], best[1] = cost, tuple(chosen)
                return first
            lb = self.lower_bound(left, avail)
            if lb is None or cost + lb >= best[0]:
                return False
            pick_cand, pick_n = 0, None
            for i in _bits(left):
                cand = self.row_cols[i] & avail
                k = cand.bit_count()
                if pick_n is None or k < pick_n:
                    pick_cand, pick_n = cand, k
                    if k == 1:
                        break
            cands = sorted((w[j], -(m.columns[j] & left).bit_count(), j) for j in _bits(pick_cand))
            for _, _, j in cands:
                avail &= ~(1 << j)
                if cost + w[j] >= best[0]:
                    continue
                chosen.append(j)
                stop = rec(left & ~m.columns[j], avail, cost + w[j])
                chosen.pop()
                if stop:
                    return True
            return False

        rec(left, avail, 0)
        return best[1]


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _bnb_cost(m: CoverMatrix, w: Sequence[int], ub: int, deadline) -> int:
    """Optimal cost, given that a cover of cost ``ub`` exists."""
    sol = _Search(m, w, deadline).search(m.full, (1 << m.n_cols) - 1, ub)
    return ub if sol is None else sum(w[j] for j in sol)


def _lex_first(m: CoverMatrix, w: Sequence[int], target: int, deadline) -> Tuple[int, ...]:
    """Lexicographically smallest column set of cost ``target`` covering all
    rows.  Walk the columns in index order, keeping a column whenever some
    completion from later columns still fits the budget."""
    srch = _Search(m, w, deadline)
    left, budget = m.full, target
    chosen: List[int] = []
    for j, c in enumerate(m.columns):
        if not left:
            break
        later = ((1 << m.n_cols) - 1) & ~((1 << (j + 1)) - 1)
        if not c & left or w[j] > budget:
            continue
        rest = left & ~c
        if not rest or srch.search(rest, later, budget - w[j] + 1, first=True) is not None:
            chosen.append(j)
            left, budget = rest, budget - w[j]
    if left or budget:
        raise AssertionError("no cover attains the optimal cost")
    return tuple(chosen)


def solve_exact(
    m: CoverMatrix,
    objective: str = "rules",
    backend: str = "bnb",
    seed: int = 0,
    deadline: Optional[float] = None,
) -> CoverSolution:
    """Globally optimal cover.

    The ``bnb`` backend returns the lexicographically smallest optimal index
    set; ``maxsat`` returns whichever optimum the MaxSAT search reaches.
    """
    objective = objective_name(objective)
    if m.uncovered():
        raise ValueError(f"rows {m.uncovered()} are not covered by any column")
    if m.n_rows == 0:
        return CoverSolution((), 0)
    w = m.weights(objective)
    if backend == "maxsat":
        return _solve_maxsat(m, w, seed, deadline)
    if backend != "bnb":
        raise ValueError(f"unknown backend {backend!r}")
    red, forced, remap = reduce(m, objective)
    fcost = _cost(m, forced, w)
    if red.n_rows == 0:
        opt = fcost
    else:
        rw = red.weights(objective)
        ub = greedy_cover(red, objective).cost
        opt = fcost + _bnb_cost(red, rw, ub, deadline)
    sel = _lex_first(m, w, opt, deadline)
    return CoverSolution(sel, _cost(m, sel, w))


def _solve_maxsat(m: CoverMatrix, w: Sequence[int], seed: int, deadline) -> CoverSolution:
    b = list(range(1, m.n_cols + 1))
    hard = []
    for i in range(m.n_rows):
        hard.append([b[j] for j, c in enumerate(m.columns) if c >> i & 1])
    soft = []
    for j in range(m.n_cols):
        soft.extend([-b[j]] * w[j])
    cm = solve_min(PartialInstance(hard, soft, m.n_cols), seed=seed, deadline=deadline)
    sel = tuple(j for j in range(m.n_cols) if cm.value(b[j]))
    return CoverSolution(sel, _cost(m, sel, w))
