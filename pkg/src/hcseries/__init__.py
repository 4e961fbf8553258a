"""Basic Harish-Chandra series for Koornwinder and GL/semisimple Macdonald-Cherednik theory.

Main entry points:

* ``build_datum`` constructs an initial datum (root system, lattices, multiplicities, q).
* ``HCSeries`` / ``phi`` evaluate the truncated basic Harish-Chandra series.
* ``connection_matrix`` and ``m_simple`` give the connection coefficients.
* ``QKZCocycle`` evaluates the bispectral quantum KZ cocycle.
* ``c_sph`` is the spherical quantum c-function.
"""
__version__ = "0.1.0"

from .errors import (ConfigError, ConvergenceError, DatumError, HCError, ResonanceError,  # noqa: E402
                     SingularPointError)
from .rootdata import AffineWeyl, InitialDatum, build_datum  # noqa: E402
from .harish_chandra import HCSeries, phi, phi_rank_one  # noqa: E402
from .connection import connection_matrix, m_simple  # noqa: E402
from .qkz import QKZCocycle  # noqa: E402
from .cfunction import c_sph, xi_sph  # noqa: E402

__all__ = [
    "AffineWeyl", "ConfigError", "ConvergenceError", "DatumError", "HCError", "HCSeries", "InitialDatum",
    "QKZCocycle", "ResonanceError", "SingularPointError", "build_datum", "c_sph", "connection_matrix",
    "m_simple", "phi", "phi_rank_one", "xi_sph",
]
