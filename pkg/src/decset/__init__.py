"""Minimum-size decision sets from exhaustive rule enumeration and exact set cover."""

from .dataset import BinarizationMap, BinaryDataset, ClassSplit, RawDataset, binarize, parse_csv, resolve_consistency
from .enumerator import Term, TermSet, build_encoding, decode_term, enumerate_terms
from .learner import learn
from .model import DecisionSet, Prediction, Rule, assemble, deserialize, metrics, serialize
from .setcover import CoverMatrix, CoverSolution, build_matrix, greedy_cover, reduce, solve_exact

__version__ = "0.1.0"
