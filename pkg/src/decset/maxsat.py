"""Partial MaxSAT over unit soft clauses via linear lower-bound search."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional, Sequence

from .sat import Solver, totalizer


class HardUnsat(Exception):
    """The hard part of a partial instance is unsatisfiable."""


class BlockingContractError(RuntimeError):
    """A blocking callback returned clauses that do not exclude the model."""


@dataclass
class PartialInstance:
    """Hard clauses plus unit soft clauses of weight 1 (repeat a literal to
    weight it)."""

    hard: List[List[int]] = field(default_factory=list)
    soft: List[int] = field(default_factory=list)
    nvars: int = 0

    def __post_init__(self):
        top = max((abs(l) for c in self.hard for l in c), default=0)
        top = max([top] + [abs(l) for l in self.soft])
        self.nvars = max(self.nvars, top)

    def cost(self, model: Sequence[int]) -> int:
        return sum(1 for s in self.soft if model[abs(s) - 1] != s)

    def to_wdimacs(self) -> str:
        top = len(self.soft) + 1
        lines = [f"p wcnf {self.nvars} {len(self.hard) + len(self.soft)} {top}"]
        lines.extend(f"{top} {' '.join(map(str, c))} 0" for c in self.hard)
        lines.extend(f"1 {s} 0" for s in self.soft)
        return "\n".join(lines) + "\n"


@dataclass
class CostedModel:
    model: List[int]
    cost: int

    def value(self, var: int) -> bool:
        return self.model[var - 1] > 0


def _load(inst: PartialInstance, seed: int, deadline: Optional[float]) -> Solver:
    s = Solver(seed=seed)
    s.deadline = deadline
    s.reserve(inst.nvars)
    for c in inst.hard:
        s.add_clause(c)
    return s


def _trim(model: List[int], nvars: int) -> List[int]:
    return model[:nvars]


def solve_min(inst: PartialInstance, seed: int = 0, deadline: Optional[float] = None) -> CostedModel:
    """Minimum-cost model of ``inst``; raises :class:`HardUnsat`."""
    s = _load(inst, seed, deadline)
    first = s.solve()
    if not first:
        raise HardUnsat()
    ub = inst.cost(first.model)
    if ub == 0:
        return CostedModel(_trim(first.model, inst.nvars), 0)
    outs = totalizer(s, [-l for l in inst.soft], ub)
    for k in range(ub):
        res = s.solve([-outs[k]])
        if res:
            return CostedModel(_trim(res.model, inst.nvars), inst.cost(res.model))
    return CostedModel(_trim(first.model, inst.nvars), ub)


def enumerate_nondecreasing(
    inst: PartialInstance,
    block: Callable[[CostedModel], List[List[int]]],
    seed: int = 0,
    deadline: Optional[float] = None,
) -> Iterator[CostedModel]:
    """Yield models of the hard part level by level in nondecreasing cost.

    After a model is consumed, ``block(model)`` must return at least one
    clause, each falsified by that model; the clauses become hard.  The
    stream ends when the hard part becomes unsatisfiable.
    """
    s = _load(inst, seed, deadline)
    n = len(inst.soft)
    outs = totalizer(s, [-l for l in inst.soft], n)
    k = 0
    pending = None
    while True:
        if pending is not None:
            res, pending = pending, None
        elif k < n:
            res = s.solve([-outs[k]])
        else:
            res = s.solve()
        if not res:
            if k >= n:
                return
            # level k exhausted; probe whether anything is left at all
            probe = s.solve()
            if not probe:
                return
            k += 1
            if inst.cost(probe.model) == k:
                pending = probe
            continue
        cm = CostedModel(_trim(res.model, inst.nvars), inst.cost(res.model))
        yield cm
        clauses = block(cm)
        if not clauses:
            raise BlockingContractError("blocking callback returned no clauses")
        for c in clauses:
            if any(cm.model[abs(l) - 1] == l for l in c):
                raise BlockingContractError(f"blocking clause {c} is satisfied by the blocked model")
            s.add_clause(c)
