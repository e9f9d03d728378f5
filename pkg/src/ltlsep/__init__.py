"""Separating sets of finite traces with LTL formulas, via a combinatorial proof system."""

from .formula import (
    COSAFETY_U, F_PURE_PAST, PROP, PURE_PAST, XF, XWXFG, Formula, Fragment,
    parse_formula, size,
)
from .proof import DeductionTree, SepInstance, formula_from_tree, tree_from_formula, verify_tree
from .search import BudgetExceeded, SearchConfig, Unseparable, min_search
from .semantics import eval_lasso, holds, separates
from .traces import Trace, TraceSet, trace_set

__all__ = [
    "COSAFETY_U", "F_PURE_PAST", "PROP", "PURE_PAST", "XF", "XWXFG",
    "Formula", "Fragment", "parse_formula", "size",
    "DeductionTree", "SepInstance", "formula_from_tree", "tree_from_formula", "verify_tree",
    "BudgetExceeded", "SearchConfig", "Unseparable", "min_search",
    "eval_lasso", "holds", "separates",
    "Trace", "TraceSet", "trace_set",
]
