"""Domain layer: finite structures, lattice field theory and checks."""

from . import (
    ccr,
    compare,
    engine,
    kleingordon,
    lattice,
    lbord,
    linalg,
    models,
    pseudocat,
    scalars,
)

__all__ = [
    "ccr",
    "compare",
    "engine",
    "kleingordon",
    "lattice",
    "lbord",
    "linalg",
    "models",
    "pseudocat",
    "scalars",
]
