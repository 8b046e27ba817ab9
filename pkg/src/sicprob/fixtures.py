"""Access to the bundled fixture files used by the acceptance suite.

Ships known-good fiducials for d = 2..8 (the d = 2, 3 ones are the exact
built-ins; the rest were found by the search and refined to residuals near
1e-13), a few regression circuits, and the Born-rule regression cases.
"""

from __future__ import annotations

from importlib import resources

from .serialize import load_document
from .sic import SicStructure, orbit

FIDUCIAL_DIMS = (2, 3, 4, 5, 6, 7, 8)


def fixture_path(name: str) -> str:
    """Absolute path of a bundled fixture file."""
    return str(resources.files("sicprob").joinpath("fixtures", name))


def load_fixture_sic(dim: int) -> SicStructure:
    """Certified SIC for a supported dimension, rebuilt from its fiducial."""
    fiducial = load_document(fixture_path(f"fiducial_d{dim}.json"))
    structure = orbit(fiducial)
    if not structure.certified:
        raise RuntimeError(f"bundled fiducial for d={dim} no longer certifies: {structure.residual:.3e}")
    return structure
