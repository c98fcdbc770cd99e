"""Dual-rail MaxSAT encoding of valid terms and their exhaustive enumeration.

For feature ``r`` the dual-rail pair ``(p_r, n_r)`` says whether ``f_r``
occurs positively, negatively or not at all in the term.  ``t_i`` is true
exactly when the term covers positive example ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .maxsat import CostedModel, HardUnsat, PartialInstance, enumerate_nondecreasing

Literal = Tuple[int, int]  # (feature index, polarity)


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class Term:
    literals: Tuple[Literal, ...]
    coverage: int = field(default=0, compare=False)  # bitset over positive-example indices

    def __post_init__(self):
        lits = tuple(sorted(set(self.literals)))
        if len({r for r, _ in lits}) != len(lits):
            raise EncodingError(f"term mentions a feature twice: {lits}")
        object.__setattr__(self, "literals", lits)

    @property
    def size(self) -> int:
        return len(self.literals)

    def agrees(self, vec: Sequence[int]) -> bool:
        return all(vec[r] == s for r, s in self.literals)

    def covered(self) -> List[int]:
        return [i for i in range(self.coverage.bit_length()) if self.coverage >> i & 1]

    def to_json(self) -> dict:
        return {"literals": [list(l) for l in self.literals], "size": self.size, "coverage": self.covered()}

    def __str__(self) -> str:
        if not self.literals:
            return "(true)"
        return " & ".join(("" if s else "~") + f"f{r + 1}" for r, s in self.literals)


@dataclass
class TermSet:
    cls: int
    terms: List[Term] = field(default_factory=list)
    n_positives: int = 0
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def to_json(self) -> list:
        return [t.to_json() for t in self.terms]


@dataclass
class DualRailVars:
    p: List[int]
    n: List[int]
    t: List[int]

    def rail(self, r: int, v: int) -> int:
        """The variable whose truth makes a term discriminate value ``v`` at ``r``."""
        return self.p[r] if v == 0 else self.n[r]


def build_encoding(positives: Sequence[Sequence[int]], negatives: Sequence[Sequence[int]], K: int):
    """Partial MaxSAT instance whose hard models are exactly the valid terms
    (one model per term) with cost equal to the term size."""
    if not positives:
        raise EncodingError("no positive examples")
    if not negatives:
        raise EncodingError("no negative examples")
    for v in list(positives) + list(negatives):
        if len(v) != K:
            raise EncodingError(f"vector width {len(v)} != {K}")
    p = [2 * r + 1 for r in range(K)]
    n = [2 * r + 2 for r in range(K)]
    t = [2 * K + 1 + i for i in range(len(positives))]
    dv = DualRailVars(p, n, t)
    hard = [[-p[r], -n[r]] for r in range(K)]
    for vec in negatives:
        hard.append([dv.rail(r, vec[r]) for r in range(K)])
    for i, vec in enumerate(positives):
        deltas = [dv.rail(r, vec[r]) for r in range(K)]
        hard.extend([-t[i], -d] for d in deltas)
        hard.append([t[i]] + deltas)
    hard.append(list(t))
    soft = []
    for r in range(K):
        soft.extend((-p[r], -n[r]))
    return PartialInstance(hard, soft, 2 * K + len(positives)), dv


def decode_term(model: CostedModel, dv: DualRailVars) -> Term:
    lits = []
    for r, (pv, nv) in enumerate(zip(dv.p, dv.n)):
        pos, neg = model.value(pv), model.value(nv)
        if pos and neg:
            raise EncodingError(f"feature {r} selected with both polarities")
        if pos:
            lits.append((r, 1))
        elif neg:
            lits.append((r, 0))
    cov = 0
    for i, tv in enumerate(dv.t):
        if model.value(tv):
            cov |= 1 << i
    return Term(tuple(lits), cov)


def enumerate_terms(
    positives: Sequence[Sequence[int]],
    negatives: Sequence[Sequence[int]],
    K: int,
    symmetry_breaking: bool = True,
    cls: int = 0,
    max_terms: Optional[int] = None,
    seed: int = 0,
    deadline: Optional[float] = None,
) -> TermSet:
    """All irreducible terms for ``positives`` against ``negatives``,
    smallest first.  With ``symmetry_breaking`` each new term must cover a
    positive example left uncovered by every earlier one."""
    ts = TermSet(cls, n_positives=len(positives))
    if not positives:
        return ts
    if not negatives:
        ts.terms.append(Term((), (1 << len(positives)) - 1))
        return ts
    inst, dv = build_encoding(positives, negatives, K)
    full = (1 << len(positives)) - 1

    def block(cm: CostedModel) -> List[List[int]]:
        term = decode_term(cm, dv)
        clauses = [[-(dv.p[r] if s else dv.n[r]) for r, s in term.literals]]
        if symmetry_breaking:
            clauses.append([dv.t[i] for i in range(len(positives)) if not term.coverage >> i & 1])
        return clauses

    try:
        for cm in enumerate_nondecreasing(inst, block, seed=seed, deadline=deadline):
            term = decode_term(cm, dv)
            ts.terms.append(term)
            if symmetry_breaking and term.coverage == full:
                break
            if max_terms is not None and len(ts.terms) >= max_terms:
                ts.truncated = True
                break
    except TimeoutError as e:
        raise TimeoutError(f"{e}; {len(ts.terms)} terms enumerated for class {cls}") from None
    if not ts.terms:
        raise HardUnsat("hard part unsatisfiable although the class split is consistent")
    return ts
