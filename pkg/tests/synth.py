"""Deterministic random datasets and matrices shared by the tests."""

import random

from decset.dataset import BinaryDataset, binarize, parse_csv


def random_binary(seed, max_k=8, max_m=32, classes=2):
    """Consistent dataset of distinct vectors with every class present."""
    rng = random.Random(seed)
    while True:
        K = rng.randint(1, max_k)
        m = rng.randint(2, min(max_m, 2 ** K))
        vecs = rng.sample(range(2 ** K), m)
        ex = [(tuple(x >> r & 1 for r in range(K)), rng.randrange(classes)) for x in vecs]
        if len({c for _, c in ex}) == classes:
            return BinaryDataset(K, ex, classes)


def split(ds, cls):
    pos = [v for v, c in ds.examples if c == cls]
    neg = [v for v, c in ds.examples if c != cls]
    return pos, neg


def random_matrix(seed, max_cols=20, max_rows=12):
    """(n_rows, column bitsets, sizes) with every row covered."""
    rng = random.Random(seed)
    M = rng.randint(1, max_rows)
    L = rng.randint(1, max_cols)
    density = rng.uniform(0.1, 0.6)
    cols = []
    for _ in range(L):
        c = 0
        for i in range(M):
            if rng.random() < density:
                c |= 1 << i
        cols.append(c or 1 << rng.randrange(M))
    union = 0
    for c in cols:
        union |= c
    for i in range(M):
        if not union >> i & 1:
            j = rng.randrange(L)
            cols[j] |= 1 << i
    sizes = [rng.randint(1, 6) for _ in range(L)]
    return M, cols, sizes


def bits(x):
    return [i for i in range(x.bit_length()) if x >> i & 1]


def planted_csv(M=500, seed=7, ncols=5, nvals=4):
    """Categorical CSV (one-hot width ``ncols * nvals``) labelled by a fixed
    rule set over the first three columns."""
    rng = random.Random(seed)
    vals = "abcdefgh"[:nvals]
    lines = [",".join(f"c{j}" for j in range(ncols)) + ",y"]
    for _ in range(M):
        row = [rng.choice(vals) for _ in range(ncols)]
        y = int((row[0] in "ab" and row[1] == "a") or row[2] == "d")
        lines.append(",".join(row) + f",{y}")
    return "\n".join(lines) + "\n"


def planted(M=500, seed=7):
    return binarize(parse_csv(planted_csv(M, seed)))


def binary_map(K, class_count=2):
    """Identity binarization for datasets generated directly as bitvectors."""
    from decset.dataset import BinarizationMap, BoolFeature

    cols = [f"x{r}" for r in range(K)]
    feats = [BoolFeature(c, "binary", ("0", "1")) for c in cols]
    return BinarizationMap(cols, {c: ["0", "1"] for c in cols}, feats, [str(c) for c in range(class_count)], "y")
