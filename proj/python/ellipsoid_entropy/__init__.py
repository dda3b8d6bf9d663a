"""Worst-case quantization codec, exact ellipsoid lattice counts, and the
dimension-explicit entropy bound."""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:  # extension built next to the package (build tree)
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
