"""Python bindings for the hslab C++ core."""

try:
    from ._hslab import *  # installed wheel layout
    from . import _hslab as _core
except ImportError:  # build-tree layout used by the test suite
    from _hslab import *
    import _hslab as _core

__doc__ = _core.__doc__
__version__ = "0.1.0"
