"""Formula language of set theory: AST, parser, bounded classifier, substitution."""

from .formula import *  # noqa: F401,F403
from .formula import __all__  # noqa: F401
