"""Typed errors raised by the toolkit.

Validation errors carry the measured deviation so callers (and the CLI)
can report how badly an invariant failed, not just that it failed.
"""

from __future__ import annotations


class SicProbError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(SicProbError):
    """Objects with different Hilbert-space dimensions were combined."""


class ShapeMismatch(SicProbError):
    """Array shapes disagree (probability vector vs conditional matrix)."""


class WrongCount(SicProbError):
    """A set of operators has the wrong number of elements (expected d^2)."""


class InvalidInput(SicProbError):
    """Precondition violation on user-supplied values."""


class SchemaError(InvalidInput):
    """A JSON document does not match the expected file schema."""


class NotHermitian(SicProbError):
    def __init__(self, deviation: float, context: str = "matrix"):
        self.deviation = float(deviation)
        super().__init__(f"{context} is not Hermitian: max |M - M^dag| = {deviation:.3e}")


class NotUnitTrace(SicProbError):
    def __init__(self, deviation: float):
        self.deviation = float(deviation)
        super().__init__(f"trace differs from 1 by {deviation:.3e}")


class NotPositive(SicProbError):
    def __init__(self, deviation: float, context: str = "matrix"):
        self.deviation = float(deviation)
        super().__init__(f"{context} is not positive semidefinite: min eigenvalue = {-deviation:.3e}")


class NotUnitary(SicProbError):
    def __init__(self, deviation: float):
        self.deviation = float(deviation)
        super().__init__(f"matrix is not unitary: max |U U^dag - I| = {deviation:.3e}")


class PovmIncomplete(SicProbError):
    def __init__(self, deviation: float):
        self.deviation = float(deviation)
        super().__init__(f"effects do not sum to the identity: max deviation = {deviation:.3e}")


class ZeroProbabilityOutcome(SicProbError):
    def __init__(self, probability: float):
        self.probability = float(probability)
        super().__init__(f"outcome probability {probability:.3e} is too small to condition on")


class NoBuiltinForDimension(SicProbError):
    def __init__(self, dim: int):
        self.dim = int(dim)
        super().__init__(f"no built-in fiducial for dimension {dim} (available: 2, 3)")


class UncertifiedSic(SicProbError):
    def __init__(self, residual: float, threshold: float):
        self.residual = float(residual)
        super().__init__(
            f"SIC structure is not certified: residual {residual:.3e} exceeds {threshold:.1e}"
        )


class NotAQuantumState(SicProbError):
    """Reconstruction from probabilities landed outside the state space."""

    def __init__(self, min_eigenvalue: float):
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(
            f"reconstructed operator is not positive semidefinite "
            f"(min eigenvalue = {min_eigenvalue:.3e}); the probability vector "
            f"does not correspond to a quantum state"
        )


class NotInformationallyComplete(SicProbError):
    def __init__(self, scaled_determinant: float):
        self.scaled_determinant = float(scaled_determinant)
        super().__init__(
            f"effects are not informationally complete: scaled Gram determinant "
            f"modulus {scaled_determinant:.3e} <= 1e-12"
        )
