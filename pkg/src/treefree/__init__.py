"""Discreteness and freeness of two-generated groups acting on trees.

The main entry points are :func:`decide` (Nielsen reduction over translation
lengths), :func:`build_certificate` / :func:`membership` (ping-pong data and
word recovery on the Bruhat-Tits tree), and :func:`decide_amalgam` for
amalgamated free products of finite groups.
"""

from .amalgam import AmalgamSpec, FiniteGroup, NormalForm, decide_amalgam
from .bt_tree import TreeVertex, act, axes_relation, distance, geodesic
from .pingpong import PingPongCertificate, Region, build_certificate, classify_vertex, membership
from .reduction import (DiscreteFree, NotDiscreteFree, decide, decide_with_restarts,
                        overlap_from_lengths)
from .sl2 import Mat2, normalize_psl, parse_matrix, translation_length
from .valued_field import FpTField, PrecisionLoss, QpField, RatFunc, TruncatedElement, truncate

__all__ = [
    "AmalgamSpec", "FiniteGroup", "NormalForm", "decide_amalgam",
    "TreeVertex", "act", "axes_relation", "distance", "geodesic",
    "PingPongCertificate", "Region", "build_certificate", "classify_vertex", "membership",
    "DiscreteFree", "NotDiscreteFree", "decide", "decide_with_restarts", "overlap_from_lengths",
    "Mat2", "normalize_psl", "parse_matrix", "translation_length",
    "FpTField", "PrecisionLoss", "QpField", "RatFunc", "TruncatedElement", "truncate",
]
