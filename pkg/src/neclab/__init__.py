"""Exact desk-scale calculators for Neciporuk-style formula-size lower bounds,
one-way communication measures, the explicit constructions behind them, and
the supporting quantum-information facts.

All values are immutable after construction and every operation is pure, so
everything here is safe to call concurrently.
"""

__version__ = "0.1.0"

from . import boolfn, commcx, constructions, formula, neciporuk, quantum  # noqa: F401
from .errors import CapExceeded, InvalidInput  # noqa: F401
