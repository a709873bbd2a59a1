"""Verification laboratory for parametrized weighted sum formulas among multiple zeta values."""

from .algebra import MzvExpr, ProductExpr, expand_products, ohno_expr, stuffle, sum_formula_expr
from .evaluator import EvalResult, eval_expr, eval_product_expr, zeta, zeta_naive
from .indices import Index, assemble, compositions, dual, index_to_word, weak_compositions, word_to_index
from .montecarlo import mc_integral
from .theorems import ParamVector, elo_lhs, t1_lhs, t1_rhs, t2_lhs, t2_rhs, verify_theorem

__version__ = "0.1.0"
