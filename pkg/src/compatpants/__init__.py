"""Compatible pants decompositions for finite and dihedral surface-group representations."""
from __future__ import annotations

__version__ = "0.1.0"
