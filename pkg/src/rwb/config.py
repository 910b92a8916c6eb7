"""Process-wide defaults. ``RWB_BUDGET`` overrides the default step budget."""

import os

DEFAULT_BUDGET = int(os.environ.get("RWB_BUDGET", "100000"))
DEFAULT_POOL_SIZE = 9
DEFAULT_FRAG_DEPTH = 3
DEFAULT_FRAG_WIDTH = 2

# realizers of Full sets that every tracking check visits
FULL_SAMPLE = 16
