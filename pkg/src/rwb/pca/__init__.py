"""Step-budgeted partial combinatory algebra."""

from .abstraction import AbstractionError, abstract, fix, i_combinator, lam
from .reduction import (
    ReductionOutcome,
    Timeout,
    Undefined,
    Value,
    apply,
    backend_name,
    clear_cache,
    is_value,
    proj0,
    proj1,
    reduce,
    set_backend,
)
from .syntax import TermSyntaxError, format_term, parse_term, term_from_sexpr
from .terms import (
    FIX,
    IFZ,
    K,
    P,
    P0,
    P1,
    S,
    SUCC,
    App,
    Const,
    Fix,
    Num,
    OpenTermError,
    Term,
    Var,
    app,
    free_vars,
    is_closed,
    is_pair,
    pair_val,
    size,
)
from .pool import Pool, candidate_pool, default_atoms, enumerate_values
