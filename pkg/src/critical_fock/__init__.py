"""Exact computations with critical-level sl2 modules realized on Fock spaces.

Everything is over the rationals: coefficients are ``Fraction`` and vectors
are sparse ``{basis key: coefficient}`` dicts.
"""

from .amodule import ModuleSpec
from .affine import AffineModuleSpec, hw_identify, sl2_apply, sl2_relation_check
from .report import CarrierError, CheckReport

__version__ = "0.1.0"

__all__ = [
    "ModuleSpec", "AffineModuleSpec", "sl2_apply", "sl2_relation_check", "hw_identify",
    "CarrierError", "CheckReport", "__version__",
]
