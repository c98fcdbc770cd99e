"""Decision sets: assembly, prediction, explanation and JSON round trips."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .dataset import BinarizationMap, BinaryDataset, DataError
from .enumerator import Term, TermSet
from .setcover import CoverSolution

FORMAT_VERSION = 1


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    term: Term
    cls: int


@dataclass(frozen=True)
class Prediction:
    status: str  # "class" | "abstain" | "ambiguous"
    classes: Tuple[int, ...]
    fired: Tuple[int, ...]

    @property
    def label(self) -> Optional[int]:
        return self.classes[0] if self.status == "class" else None


@dataclass
class DecisionSet:
    rules: List[Rule]
    bmap: BinarizationMap
    stats: Dict = field(default_factory=dict)

    @property
    def K(self) -> int:
        return self.bmap.K

    @property
    def classes(self) -> List[str]:
        return self.bmap.classes

    def rules_for(self, cls: int) -> List[Rule]:
        return [r for r in self.rules if r.cls == cls]

    # -- inference ------------------------------------------------------

    def predict(self, vec: Sequence[int], default_class: Optional[int] = None) -> Prediction:
        if len(vec) != self.K:
            raise ModelError(f"instance has {len(vec)} features, model expects {self.K}")
        fired = tuple(k for k, r in enumerate(self.rules) if r.term.agrees(vec))
        classes = tuple(sorted({self.rules[k].cls for k in fired}))
        if not fired:
            if default_class is not None:
                return Prediction("class", (default_class,), ())
            return Prediction("abstain", (), ())
        if len(classes) == 1:
            return Prediction("class", classes, fired)
        return Prediction("ambiguous", classes, fired)

    def explain(self, vec: Sequence[int]) -> List[Tuple[Rule, str]]:
        pred = self.predict(vec)
        return [(self.rules[k], self.render_rule(self.rules[k])) for k in pred.fired]

    # -- rendering ------------------------------------------------------

    def literal_text(self, r: int, sigma: int) -> str:
        col, val, neg = self.bmap.decode_literal(r, sigma)
        return f"{col}{'!=' if neg else '='}{val}"

    def render_rule(self, rule: Rule) -> str:
        body = " AND ".join(self.literal_text(r, s) for r, s in rule.term.literals) or "TRUE"
        return f"IF {body} THEN {self.bmap.class_name}={self.classes[rule.cls]}"

    def render(self) -> str:
        return "\n".join(self.render_rule(r) for r in self.rules) + ("\n" if self.rules else "")

    # -- serialization --------------------------------------------------

    def to_dict(self) -> dict:
        rules = []
        for rule in self.rules:
            lits = []
            for r, s in rule.term.literals:
                col, val, neg = self.bmap.decode_literal(r, s)
                lits.append([col, val, False] if neg else [col, val])
            rules.append({"class": self.classes[rule.cls], "literals": lits})
        return {
            "format": FORMAT_VERSION,
            "classes": list(self.classes),
            "rules": rules,
            "binarization": self.bmap.to_json(),
            "stats": self.stats,
            "text": self.render().splitlines(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def serialize(ds: DecisionSet) -> str:
    return ds.dumps()


def deserialize(text: str) -> DecisionSet:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"malformed model JSON: {e}") from None
    if not isinstance(d, dict) or "rules" not in d or "binarization" not in d:
        raise ModelError("model JSON needs 'rules' and 'binarization'")
    bmap = BinarizationMap.from_json(d["binarization"])
    rules = []
    for k, rd in enumerate(d["rules"]):
        try:
            cls = bmap.class_index(rd["class"])
            lits = []
            for lit in rd["literals"]:
                if len(lit) == 2:
                    col, val, neg = lit[0], lit[1], False
                elif len(lit) == 3 and lit[2] is False:
                    col, val, neg = lit[0], lit[1], True
                else:
                    raise ModelError(f"rule {k}: bad literal {lit!r}")
                try:
                    lits.append(bmap.encode_literal(col, val, neg))
                except DataError as e:
                    raise ModelError(f"rule {k}: {e}") from None
        except (KeyError, TypeError) as e:
            raise ModelError(f"rule {k}: malformed ({e})") from None
        except DataError as e:
            raise ModelError(f"rule {k}: {e}") from None
        rules.append(Rule(Term(tuple(lits)), cls))
    return DecisionSet(rules, bmap, d.get("stats", {}))


def assemble(per_class: Mapping[int, Tuple[TermSet, CoverSolution]], bmap: BinarizationMap, stats=None) -> DecisionSet:
    """Rules are the selected terms of each class, classes in index order."""
    rules = []
    for cls in sorted(per_class):
        terms, sol = per_class[cls]
        rules.extend(Rule(terms.terms[j], cls) for j in sol.selected)
    return DecisionSet(rules, bmap, dict(stats or {}))


def metrics(ds: DecisionSet, data: Optional[BinaryDataset] = None, default_class: Optional[int] = None) -> dict:
    """Size measures plus accuracy over every row of ``data``.  Abstentions
    and disagreeing overlaps count as errors."""
    out = {
        "rule_count": len(ds.rules),
        "literal_count": sum(r.term.size for r in ds.rules),
    }
    out["total_size"] = out["rule_count"] + out["literal_count"]
    if data is not None:
        if data.K != ds.K:
            raise ModelError(f"data has {data.K} features, model expects {ds.K}")
        ok = sum(1 for v, c in data.examples if ds.predict(v, default_class).label == c)
        out["train_accuracy"] = ok / len(data.examples) if data.examples else 0.0
    return out


def majority_class(data: BinaryDataset) -> int:
    cnt = Counter(c for _, c in data.examples)
    return min(cnt, key=lambda c: (-cnt[c], c))
