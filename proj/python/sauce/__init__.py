"""Seed-based corpus expansion with truncated sparse document signatures."""

from ._sauce import *  # noqa: F401,F403
from ._sauce import InputError, LoadError, __doc__  # noqa: F401
