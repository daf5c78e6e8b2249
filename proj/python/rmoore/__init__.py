"""Compositional Moore machine toolkit (python surface of the C++ core)."""

try:
    from ._rmoore import *  # noqa: F401,F403
    from ._rmoore import examples, specfmt  # noqa: F401
except ImportError:  # in-tree runs put the extension next to this package
    from _rmoore import *  # noqa: F401,F403
    from _rmoore import examples, specfmt  # noqa: F401
