"""Incremental CDCL SAT engine with a totalizer cardinality encoding.

Literals are DIMACS-style integers at the public boundary (``v`` or ``-v``,
``v >= 1``).  Internally a literal is coded as ``2*v + neg`` so that negation
is ``code ^ 1`` and assignments live in flat lists.
"""

from __future__ import annotations

import heapq
import random
import time
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence


@dataclass
class SolveOutcome:
    sat: bool
    model: List[int] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.sat

    def value(self, var: int) -> bool:
        return self.model[var - 1] > 0


def _luby(i: int) -> int:
    # 1 1 2 1 1 2 4 1 1 2 ...
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class Solver:
    """CDCL solver: two watched literals, first-UIP learning, VSIDS with
    phase saving, Luby restarts and LBD-based learnt clause reduction.

    Clauses may be added between :meth:`solve` calls; every call starts from
    decision level 0 and may be given assumption literals.

    With ``seed == 0`` branching ties are broken by variable index; any other
    seed jitters the initial activities.
    """

    restart_unit = 64

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._rng = random.Random(seed) if seed else None
        self.nvars = 0
        self.ok = True
        self.original: List[List[int]] = []
        self._clauses: List[list] = []
        self._learnts: List[list] = []
        self._lbd = {}
        self.vals: List[int] = [0, 0]
        self.watches: List[list] = [[], []]
        self.bins: List[list] = [[], []]  # false literal -> [implied, false literal] reasons
        self.level: List[int] = [0]
        self.reason: List[Optional[list]] = [None]
        self.activity: List[float] = [0.0]
        self.phase: List[int] = [1]
        self.seen: List[int] = [0]
        self.trail: List[int] = []
        self.trail_lim: List[int] = []
        self.qhead = 0
        self.heap: list = []
        self.var_inc = 1.0
        self.var_decay = 0.95
        self.max_learnts = 2000
        self.conflicts = 0
        self.deadline: Optional[float] = None

    # -- variables -------------------------------------------------------

    def new_var(self) -> int:
        self.nvars += 1
        v = self.nvars
        self.vals.extend((0, 0))
        self.watches.extend(([], []))
        self.bins.extend(([], []))
        self.level.append(0)
        self.reason.append(None)
        act = self._rng.random() * 1e-3 if self._rng else 0.0
        self.activity.append(act)
        self.phase.append(1)  # 1 = prefer the negative literal
        self.seen.append(0)
        heapq.heappush(self.heap, (-act, v))
        return v

    def reserve(self, nvars: int) -> None:
        while self.nvars < nvars:
            self.new_var()

    def _code(self, lit: int) -> int:
        if lit == 0:
            raise ValueError("0 is not a literal")
        v = abs(lit)
        if v > self.nvars:
            self.reserve(v)
        return 2 * v + (lit < 0)

    @staticmethod
    def _dimacs(code: int) -> int:
        return -(code >> 1) if code & 1 else code >> 1

    # -- clause database -------------------------------------------------

    def add_clause(self, lits: Iterable[int]) -> None:
        lits = list(lits)
        self.original.append(lits)
        if not self.ok:
            return
        codes = sorted(set(self._code(l) for l in lits))
        if self.trail_lim:
            self._backtrack(0)
        out = []
        vals = self.vals
        for i, c in enumerate(codes):
            if i and codes[i - 1] == c ^ 1:
                return  # tautology
            val = vals[c]
            if val == 1:
                return
            if val == 0:
                out.append(c)
        if not out:
            self.ok = False
        elif len(out) == 1:
            self._enqueue(out[0], None)
            if self._propagate() is not None:
                self.ok = False
        else:
            self._attach(out)
            self._clauses.append(out)

    def add_atmost(self, lits: Sequence[int], bound: int) -> None:
        """Enforce ``sum(lits) <= bound`` with a totalizer."""
        if bound < 0:
            raise ValueError("bound must be nonnegative")
        if bound >= len(lits):
            return
        if bound == 0:
            for l in lits:
                self.add_clause([-l])
            return
        outs = totalizer(self, lits, bound + 1)
        self.add_clause([-outs[bound]])

    def _attach(self, c: list) -> None:
        if len(c) == 2:
            a, b = c
            self.bins[a].append([b, a])
            self.bins[b].append([a, b])
            return
        self.watches[c[0]].append(c)
        self.watches[c[1]].append(c)

    # -- trail -----------------------------------------------------------

    def _enqueue(self, code: int, reason: Optional[list]) -> None:
        v = code >> 1
        self.vals[code] = 1
        self.vals[code ^ 1] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(code)

    def _backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        vals, phase, reason, act, heap = self.vals, self.phase, self.reason, self.activity, self.heap
        for code in self.trail[stop:]:
            v = code >> 1
            vals[code] = 0
            vals[code ^ 1] = 0
            phase[v] = code & 1
            reason[v] = None
            heapq.heappush(heap, (-act[v], v))
        del self.trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _propagate(self) -> Optional[list]:
        vals, watches, trail, bins = self.vals, self.watches, self.trail, self.bins
        level, reason = self.level, self.reason
        while self.qhead < len(trail):
            false_lit = trail[self.qhead] ^ 1
            self.qhead += 1
            lvl = len(self.trail_lim)
            for r in bins[false_lit]:
                other = r[0]
                val = vals[other]
                if val == 1:
                    continue
                if val == -1:
                    self.qhead = len(trail)
                    return r
                vals[other] = 1
                vals[other ^ 1] = -1
                level[other >> 1] = lvl
                reason[other >> 1] = r
                trail.append(other)
            ws = watches[false_lit]
            n = len(ws)
            i = j = 0
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if vals[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if vals[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if vals[first] == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(trail)
                        return c
                    self._enqueue(first, c)
            del ws[j:]
        return None

    # -- conflict analysis -----------------------------------------------

    def _bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for u in range(1, self.nvars + 1):
                act[u] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[u], u) for u in range(1, self.nvars + 1) if self.vals[2 * u] == 0]
            heapq.heapify(self.heap)
        elif self.vals[2 * v] == 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _analyze(self, confl: list):
        seen, level, reason, trail = self.seen, self.level, self.reason, self.trail
        cur = len(self.trail_lim)
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        touched = []
        while True:
            for q in (confl if p < 0 else confl[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    self._bump(v)
                    seen[v] = 1
                    touched.append(v)
                    if level[v] >= cur:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            confl = reason[p >> 1]
            seen[p >> 1] = 0
            path -= 1
            if path <= 0:
                break
        learnt[0] = p ^ 1
        # local minimization: drop literals implied by the rest
        keep = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r is None or any(not seen[x >> 1] and level[x >> 1] > 0 for x in r[1:]):
                keep.append(q)
        for v in touched:
            seen[v] = 0
        learnt = keep
        if len(learnt) == 1:
            return learnt, 0
        best = 1
        for k in range(2, len(learnt)):
            if level[learnt[k] >> 1] > level[learnt[best] >> 1]:
                best = k
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[learnt[1] >> 1]

    def _reduce_db(self) -> None:
        # Called at level 0 only, so no learnt clause is a live reason.
        self._learnts.sort(key=lambda c: (self._lbd.get(id(c), 0), len(c)))
        keep = self._learnts[: len(self._learnts) // 2]
        keep_ids = {id(c) for c in keep}
        self._lbd = {k: v for k, v in self._lbd.items() if k in keep_ids}
        self._learnts = keep
        self._rebuild_watches()
        self.max_learnts = int(self.max_learnts * 1.1)

    def _rebuild_watches(self) -> None:
        vals = self.vals
        for ws in self.watches:
            ws.clear()
        for ws in self.bins:
            ws.clear()
        for db in (self._clauses, self._learnts):
            live = []
            for c in db:
                if any(vals[x] == 1 for x in c):
                    continue
                c[:] = [x for x in c if vals[x] == 0]
                if len(c) == 0:
                    self.ok = False
                    return
                if len(c) == 1:
                    self._enqueue(c[0], None)
                    continue
                self._attach(c)
                live.append(c)
            db[:] = live
        if self._propagate() is not None:
            self.ok = False

    # -- search ----------------------------------------------------------

    def _pick(self) -> int:
        heap, vals, act = self.heap, self.vals, self.activity
        while heap:
            neg, v = heapq.heappop(heap)
            if vals[2 * v] == 0 and -neg == act[v]:
                return 2 * v + self.phase[v]
        for v in range(1, self.nvars + 1):
            if vals[2 * v] == 0:
                return 2 * v + self.phase[v]
        return -1

    def solve(self, assumptions: Sequence[int] = ()) -> SolveOutcome:
        if not self.ok:
            return SolveOutcome(False)
        assumps = [self._code(a) for a in assumptions]
        self._backtrack(0)
        if self._propagate() is not None:
            self.ok = False
            return SolveOutcome(False)
        restarts = 0
        budget = _luby(restarts) * self.restart_unit
        vals = self.vals
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                budget -= 1
                if not self.trail_lim:
                    self.ok = False
                    return SolveOutcome(False)
                learnt, bt = self._analyze(confl)
                self._backtrack(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self._attach(learnt)
                    self._learnts.append(learnt)
                    self._lbd[id(learnt)] = len({self.level[x >> 1] for x in learnt})
                    self._enqueue(learnt[0], learnt)
                self.var_inc /= self.var_decay
                if self.deadline is not None and self.conflicts % 256 == 0:
                    if time.monotonic() > self.deadline:
                        self._backtrack(0)
                        raise TimeoutError("SAT call exceeded the time budget")
                continue
            if budget <= 0:
                restarts += 1
                budget = _luby(restarts) * self.restart_unit
                self._backtrack(0)
                if len(self._learnts) > self.max_learnts:
                    self._reduce_db()
                    if not self.ok:
                        return SolveOutcome(False)
                continue
            nxt = -1
            while len(self.trail_lim) < len(assumps):
                a = assumps[len(self.trail_lim)]
                if vals[a] == 1:
                    self.trail_lim.append(len(self.trail))
                elif vals[a] == -1:
                    self._backtrack(0)
                    return SolveOutcome(False)
                else:
                    nxt = a
                    break
            if nxt < 0:
                nxt = self._pick()
                if nxt < 0:
                    model = [v if vals[2 * v] == 1 else -v for v in range(1, self.nvars + 1)]
                    self._backtrack(0)
                    return SolveOutcome(True, model)
            self.trail_lim.append(len(self.trail))
            self._enqueue(nxt, None)

    # -- output ----------------------------------------------------------

    def to_dimacs(self) -> str:
        """Dump the clauses added so far (learnt clauses excluded)."""
        lines = [f"p cnf {self.nvars} {len(self.original)}"]
        lines.extend(" ".join(map(str, c + [0])) for c in self.original)
        return "\n".join(lines) + "\n"


def new_solver(seed: int = 0) -> Solver:
    return Solver(seed=seed)


def totalizer(solver: Solver, lits: Sequence[int], cap: Optional[int] = None) -> List[int]:
    """Build a totalizer over ``lits`` and return output literals ``o`` with
    ``sum(lits) >= i + 1  ->  o[i]`` for ``i < min(cap, len(lits))``.

    Only the upward implications are encoded, which is what an at-most
    constraint needs and keeps propagation arc-consistent.
    """
    lits = list(lits)
    if cap is None:
        cap = len(lits)
    if not lits:
        return []

    def build(lo: int, hi: int) -> List[int]:
        if hi - lo == 1:
            return [lits[lo]]
        mid = (lo + hi) // 2
        a = build(lo, mid)
        b = build(mid, hi)
        width = min(len(a) + len(b), cap)
        out = [solver.new_var() for _ in range(width)]
        for i in range(len(a) + 1):
            for j in range(len(b) + 1):
                k = i + j
                if k == 0 or k > width:
                    continue
                clause = [out[k - 1]]
                if i:
                    clause.append(-a[i - 1])
                if j:
                    clause.append(-b[j - 1])
                solver.add_clause(clause)
        return out

    return build(0, len(lits))[: min(cap, len(lits))]


def parse_dimacs(text: str):
    """Parse DIMACS CNF text into ``(nvars, clauses)``."""
    nvars = None
    clauses, cur = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad header {line!r}")
            nvars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(lit)
    if cur:
        clauses.append(cur)
    if nvars is None:
        raise ValueError("missing 'p cnf' header")
    return nvars, clauses
