"""Squeezed-state distillation of a bosonic field mode by repeated
measurements on an auxiliary particle.

The heavy lifting lives in the compiled extension ``_zsq``; this package
re-exports its public surface.
"""

try:
    from ._zsq import *  # noqa: F401,F403
    from ._zsq import __doc__ as _core_doc  # noqa: F401
except ImportError:  # extension on PYTHONPATH next to an in-tree build
    from _zsq import *  # noqa: F401,F403

__version__ = "0.1.0"
