"""Exact workbench for quasireductive Lie superalgebras."""
from .exactla import QQ, ExtensionNeeded, NumberField, session_field
from .liealg import SuperLieAlgebra
from .catalog import DEFAULT_BATTERY, FamilySpec, construct, parse_spec

__all__ = ["QQ", "ExtensionNeeded", "NumberField", "session_field", "SuperLieAlgebra",
           "DEFAULT_BATTERY", "FamilySpec", "construct", "parse_spec"]
__version__ = "0.1.0"
