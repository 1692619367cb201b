"""pvcubics: exact verification engine for the Painleve monodromy cubics."""

from .rings import (CoeffPoly, DivisionFailure, MonomialSubstitution, Q,
                    RingFraction, SymbolTable, SymbolTableMismatch,
                    DEFAULT_TABLE)
from .torus import (TorusElement, TorusSubstitution, weyl_quantize,
                    exact_divide_torus, pairing, chi, sigma,
                    CLASSICAL, QUANTUM)

__all__ = [
    "CoeffPoly", "DivisionFailure", "MonomialSubstitution", "Q",
    "RingFraction", "SymbolTable", "SymbolTableMismatch", "DEFAULT_TABLE",
    "TorusElement", "TorusSubstitution", "weyl_quantize",
    "exact_divide_torus", "pairing", "chi", "sigma", "CLASSICAL", "QUANTUM",
]
