"""Assemblies over finite carriers and their constructions."""

from .realizer_sets import *  # noqa: F401,F403
from .realizer_sets import __all__ as _r
from .core import *  # noqa: F401,F403
from .core import __all__ as _c
from .constructions import *  # noqa: F401,F403
from .constructions import __all__ as _k
from .display import *  # noqa: F401,F403
from .display import __all__ as _d
from .io import *  # noqa: F401,F403
from .io import __all__ as _i

__all__ = list(_r) + list(_c) + list(_k) + list(_d) + list(_i)
