"""Named experiment suites: axiom instances and principles over the universes."""

from .realizers import *  # noqa: F401,F403
from .manifest import *  # noqa: F401,F403
from .runner import *  # noqa: F401,F403
from . import manifest as _manifest, realizers as _realizers, runner as _runner

__all__ = _realizers.__all__ + _manifest.__all__ + _runner.__all__
