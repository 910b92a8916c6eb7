"""Realizability universes: trees, fragments, tree realizers and forcing."""

from .trees import (
    EMPTY_U,
    EMPTY_V,
    ENCODE_BOUND,
    Tree,
    TreeSyntaxError,
    UTree,
    VTree,
    format_tree,
    parse_tree,
    subtrees,
    u_encode,
    vn_encode,
)
from .fragment import (
    Fragment,
    FragmentError,
    UnknownConstant,
    format_fragment,
    generate_fragment,
    generation_count,
    parse_fragment,
)
from .realizers import (
    mk_refl_realizer,
    mk_sym_realizer,
    mk_trans_realizer,
    standard_library,
    uniform_realizer,
)
from .forcing import (
    REALIZED,
    TIMEOUT,
    FoundRealizer,
    ForceOutcome,
    Forcing,
    NotFoundWithinPool,
    Realized,
    Refuted,
    Timeout,
    check_force,
    default_pool,
    is_tree_realizer,
    search_realizer,
)
