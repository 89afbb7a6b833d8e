"""Modal mu-calculus model checking and refinement checks."""

from .formula import (
    ANY, FF, TT, AlternationError, And, Box, Diamond, Formula, FormulaError,
    FormulaSyntaxError, LabelSet, Mu, NotMonotone, Nu, Or, UnboundVariable,
    Var, WeakBox, WeakDiamond, check_formula, dual, format_formula,
    free_vars, parse_formula,
)
from .checker import ModelCheckResult, model_check, satisfying_states
from .refine import Relation, refine_check
