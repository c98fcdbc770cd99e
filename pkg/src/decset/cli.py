"""Command-line interface: ``decset learn|predict|explain|enumerate|stats``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from typing import List, Optional

from .dataset import BinaryDataset, DataError, binarize, parse_csv, resolve_consistency
from .enumerator import enumerate_terms
from .learner import learn, training_disagreements
from .maxsat import HardUnsat
from .model import ModelError, deserialize, metrics
from .report import stats_rows, write_report, write_stats_csv
from .setcover import BACKENDS

SEED_ENV = "DECSET_SEED"

log = logging.getLogger("decset")


class CliError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from None


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise CliError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _load_data(path: str):
    raw = parse_csv(_read(path))
    return raw, *binarize(raw)


def _load_model(path: str):
    return deserialize(_read(path))


def _encode_rows(model, raw):
    if list(raw.feature_names) != list(model.bmap.columns):
        raise CliError(f"data columns {raw.feature_names} do not match model columns {model.bmap.columns}")
    return [model.bmap.encode_row(vals) for vals, _ in raw.rows]


def cmd_learn(args) -> int:
    raw, data, bmap = _load_data(args.data)
    model, report = learn(
        data, bmap,
        objective=args.objective,
        symmetry_breaking=args.symmetry_breaking,
        backend=args.backend,
        keep_duplicates=args.keep_duplicates,
        seed=_seed(args),
        max_terms=args.max_terms,
        timeout_s=args.timeout_s,
    )
    bad = training_disagreements(model, data)
    if bad and not report.truncated:
        raise CliError(f"learned model disagrees with training rows {bad[:10]}")
    text = model.dumps()
    out = sys.stdout
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        with open(os.path.splitext(args.output)[0] + ".txt", "w") as fh:
            fh.write(model.render())
    else:
        sys.stdout.write(text)
        out = sys.stderr
    if report.truncated:
        out.write("# WARNING: term enumeration truncated by --max-terms; optimality not guaranteed\n")
    write_stats_csv(stats_rows(report, model), out)
    if args.report_dir:
        for p in write_report(report, model, args.report_dir):
            log.info("wrote %s", p)
    return 0


def cmd_predict(args) -> int:
    model = _load_model(args.model)
    raw = parse_csv(_read(args.data))
    vecs = _encode_rows(model, raw)
    default = model.bmap.class_index(model.stats["majority_class"]) if args.default_class else None
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["row", "prediction", "status", "fired", "label"])
    for i, (vec, (_, label)) in enumerate(zip(vecs, raw.rows), 1):
        p = model.predict(vec, default)
        pred = model.classes[p.label] if p.label is not None else ""
        if p.status == "ambiguous":
            pred = "|".join(model.classes[c] for c in p.classes)
        w.writerow([i, pred, p.status, " ".join(map(str, p.fired)), label])
    return 0


def cmd_explain(args) -> int:
    model = _load_model(args.model)
    raw = parse_csv(_read(args.data))
    for i, vec in enumerate(_encode_rows(model, raw), 1):
        entries = model.explain(vec)
        if not entries:
            print(f"row {i}: no rule applies")
        for _, text in entries:
            print(f"row {i}: {text}")
    return 0


def cmd_enumerate(args) -> int:
    raw, data, bmap = _load_data(args.data)
    target = bmap.class_index(args.cls)
    split = resolve_consistency(data, target, keep_duplicates=args.keep_duplicates)
    terms = enumerate_terms(split.positives, split.negatives, data.K, args.symmetry_breaking,
                            cls=target, max_terms=args.max_terms, seed=_seed(args))
    doc = terms.to_json()
    if terms.truncated:
        log.warning("enumeration truncated at %d terms; the set is incomplete", len(terms))
    json.dump(doc, sys.stdout, indent=args.indent)
    sys.stdout.write("\n")
    return 0


def cmd_stats(args) -> int:
    model = _load_model(args.model)
    data = None
    if args.data:
        raw = parse_csv(_read(args.data))
        vecs = _encode_rows(model, raw)
        labels = [model.bmap.class_index(c) for _, c in raw.rows]
        data = BinaryDataset(model.K, list(zip(vecs, labels)), len(model.classes))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["metric", "value"])
    for k, v in metrics(model, data).items():
        w.writerow([k, v])
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="decset", description="Minimum-size decision sets by rule enumeration and set cover.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help=f"SAT branching seed (default 0, or ${SEED_ENV})")
        p.add_argument("--no-symmetry-breaking", dest="symmetry_breaking", action="store_false")
        p.add_argument("--symmetry-breaking", dest="symmetry_breaking", action="store_true")
        p.set_defaults(symmetry_breaking=True)
        p.add_argument("--keep-duplicates", action="store_true", help="do not merge identical feature vectors")
        p.add_argument("--max-terms", type=int, default=None, help="stop enumeration early (voids optimality)")

    p = sub.add_parser("learn", help="learn a decision set from a CSV file")
    p.add_argument("data")
    p.add_argument("-o", "--output", help="model JSON path (default: stdout)")
    p.add_argument("--objective", default="rules", choices=["rules", "literals", "r", "l"])
    p.add_argument("--backend", default="bnb", choices=list(BACKENDS))
    p.add_argument("--timeout-s", type=float, default=None)
    p.add_argument("--report-dir", help="write stats.csv and figures here")
    common(p)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("predict", help="classify the rows of a CSV file")
    p.add_argument("model")
    p.add_argument("data")
    p.add_argument("--default-class", action="store_true", help="map abstentions to the training majority class")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("explain", help="print the rules firing on each row")
    p.add_argument("model")
    p.add_argument("data")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("enumerate", help="dump all irreducible terms of one class as JSON")
    p.add_argument("data")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--indent", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("stats", help="model size (and accuracy with data)")
    p.add_argument("model")
    p.add_argument("data", nargs="?")
    p.set_defaults(func=cmd_stats)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except TimeoutError as e:
        print(f"decset: timeout: {e}", file=sys.stderr)
        return 3
    except (CliError, DataError, ModelError, HardUnsat) as e:
        print(f"decset: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
