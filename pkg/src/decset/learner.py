"""End-to-end learning: per class, enumerate terms then pick an optimal cover."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .dataset import BinarizationMap, BinaryDataset, majority_labels, resolve_consistency
from .enumerator import TermSet, enumerate_terms
from .model import DecisionSet, assemble, majority_class, metrics
from .setcover import CoverSolution, build_matrix, objective_name, solve_exact

log = logging.getLogger(__name__)


@dataclass
class ClassReport:
    cls: int
    name: str
    positives: int
    negatives: int
    terms: int
    term_sizes: List[int]
    truncated: bool
    cover_cost: int
    selected: List[int]
    enum_seconds: float
    cover_seconds: float


@dataclass
class LearnReport:
    objective: str
    symmetry_breaking: bool
    backend: str
    training_errors: int
    classes: List[ClassReport] = field(default_factory=list)

    @property
    def truncated(self) -> bool:
        return any(c.truncated for c in self.classes)


def learn(
    data: BinaryDataset,
    bmap: BinarizationMap,
    objective: str = "rules",
    symmetry_breaking: bool = True,
    backend: str = "bnb",
    keep_duplicates: bool = False,
    seed: int = 0,
    max_terms: Optional[int] = None,
    timeout_s: Optional[float] = None,
):
    """Return ``(DecisionSet, LearnReport)``; raises ``TimeoutError``."""
    objective = objective_name(objective)
    deadline = time.monotonic() + timeout_s if timeout_s else None
    per_class: Dict[int, tuple] = {}
    report = LearnReport(objective, symmetry_breaking, backend, 0)
    for cls in range(data.class_count):
        split = resolve_consistency(data, cls, keep_duplicates=keep_duplicates)
        report.training_errors = split.errors
        t0 = time.perf_counter()
        done = ", ".join(f"{c.name}: {c.terms} terms, cost {c.cover_cost}" for c in report.classes) or "none"
        try:
            terms = enumerate_terms(
                split.positives, split.negatives, data.K, symmetry_breaking,
                cls=cls, max_terms=max_terms, seed=seed, deadline=deadline,
            )
        except TimeoutError as e:
            raise TimeoutError(f"enumeration of class {bmap.classes[cls]!r}: {e} (finished classes: {done})") from None
        t1 = time.perf_counter()
        try:
            if terms.terms:
                sol = solve_exact(build_matrix(terms), objective, backend, seed=seed, deadline=deadline)
            else:
                sol = CoverSolution((), 0)
        except TimeoutError as e:
            raise TimeoutError(f"set cover of class {bmap.classes[cls]!r} over {len(terms)} terms: {e} "
                               f"(finished classes: {done})") from None
        t2 = time.perf_counter()
        log.info("class %s: %d terms, cover cost %d", bmap.classes[cls], len(terms), sol.cost)
        per_class[cls] = (terms, sol)
        report.classes.append(ClassReport(
            cls, bmap.classes[cls], len(split.positives), len(split.negatives), len(terms),
            [t.size for t in terms], terms.truncated, sol.cost, list(sol.selected), t1 - t0, t2 - t1,
        ))
    stats = {
        "objective": objective,
        "symmetry_breaking": symmetry_breaking,
        "backend": backend,
        "seed": seed,
        "training_errors": report.training_errors,
        "majority_class": bmap.classes[majority_class(data)],
        "truncated": report.truncated,
        "per_class": {
            c.name: {"positives": c.positives, "negatives": c.negatives, "terms": c.terms, "cover_cost": c.cover_cost}
            for c in report.classes
        },
    }
    model = assemble(per_class, bmap, stats)
    model.stats.update(metrics(model, data))
    return model, report


def training_disagreements(model: DecisionSet, data: BinaryDataset) -> List[int]:
    """Indices of rows whose (majority) class the model fails to predict.
    Empty for every model this package learns."""
    bad = []
    groups = majority_labels(data)
    for i, (v, _) in enumerate(data.examples):
        want = groups[v][0]
        if model.predict(v).label != want:
            bad.append(i)
    return bad
