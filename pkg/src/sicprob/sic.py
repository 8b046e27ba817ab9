"""Weyl-Heisenberg orbits, SIC candidates and their verification.

A SIC in dimension d is a set of d^2 rank-one projectors with pairwise
overlaps tr(Pi_k Pi_l) = (d*delta_kl + 1)/(d + 1); rescaled by 1/d they form
an informationally complete measurement. Candidates are built here as the
orbit of a single unit fiducial vector under the d^2 displacement operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidInput,
    NoBuiltinForDimension,
    UncertifiedSic,
    WrongCount,
)
from .quantum import check_dim, dagger, frozen_array

# A structure counts as certified once its overlap residual is at most this:
# one order of magnitude above the cross-track comparison tolerance, two
# below the search stopping noise.
CERTIFIED_RESIDUAL = 1e-8

GAUGE_EPS = 1e-9  # modulus threshold picking the phase-reference component


def sic_overlap_target(dim: int, k: int, l: int) -> float:
    """Ideal overlap tr(Pi_k Pi_l) = (d*delta_kl + 1)/(d + 1)."""
    return (dim * (k == l) + 1.0) / (dim + 1.0)


def frame_potential_minimum(dim: int) -> float:
    """Lower bound d^2 (d^2 - 1)/(d + 1)^2, attained exactly by SICs."""
    d = float(dim)
    return d * d * (d * d - 1.0) / (d + 1.0) ** 2


@lru_cache(maxsize=32)
def wh_displacements(dim: int) -> np.ndarray:
    """The d^2 displacement operators D_{a,b} = tau^{ab} X^a Z^b.

    X is the cyclic shift |k> -> |k+1 mod d>, Z = diag(omega^k) with
    omega = exp(2 pi i / d), and tau = -exp(i pi / d). Ordering is row-major
    in (a, b) with D_{0,0} = I. Returned as a read-only (d^2, d, d) stack.
    """
    d = check_dim(dim)
    shift = np.zeros((d, d), dtype=complex)
    for k in range(d):
        shift[(k + 1) % d, k] = 1.0
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))

    shift_powers = [np.eye(d, dtype=complex)]
    clock_powers = [np.eye(d, dtype=complex)]
    for _ in range(d - 1):
        shift_powers.append(shift @ shift_powers[-1])
        clock_powers.append(clock @ clock_powers[-1])

    out = np.empty((d * d, d, d), dtype=complex)
    for a in range(d):
        for b in range(d):
            # tau^(ab) = exp(i pi (d+1) a b / d); reduce the exponent mod 2d
            # so the phase stays exact for large a*b.
            phase = np.exp(1j * np.pi * (((d + 1) * a * b) % (2 * d)) / d)
            out[a * d + b] = phase * (shift_powers[a] @ clock_powers[b])
    return frozen_array(out)


@dataclass(frozen=True)
class Fiducial:
    """Unit vector generating a SIC candidate; global phase is fixed so the
    first component of modulus > 1e-9 is real and nonnegative."""

    vector: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=complex)
        if vec.ndim != 1:
            raise InvalidInput(f"fiducial must be a vector, got shape {vec.shape}")
        check_dim(vec.shape[0])
        norm_dev = abs(float(np.linalg.norm(vec)) ** 2 - 1.0)
        if norm_dev > 1e-12:
            raise InvalidInput(f"fiducial norm^2 deviates from 1 by {norm_dev:.3e}")
        object.__setattr__(self, "vector", frozen_array(vec))

    @property
    def dim(self) -> int:
        return self.vector.shape[0]


def gauge_fix(vector: np.ndarray) -> np.ndarray:
    """Normalize and rotate the global phase to the canonical gauge."""
    vec = np.asarray(vector, dtype=complex)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise InvalidInput("cannot gauge-fix the zero vector")
    vec = vec / norm
    for component in vec:
        if abs(component) > GAUGE_EPS:
            vec = vec * (component.conjugate() / abs(component))
            break
    return vec


def make_fiducial(vector: np.ndarray) -> Fiducial:
    """Build a Fiducial from any nonzero vector (normalizing, fixing gauge)."""
    return Fiducial(gauge_fix(vector))


@dataclass(frozen=True)
class SicVerification:
    """Result of checking a projector set against the SIC conditions."""

    residual: float           # max |tr(Pi_k Pi_l) - (d delta_kl + 1)/(d+1)|
    povm_deviation: float     # max entry of |sum_i Pi_i / d - I|
    worst_pair: tuple[int, int]


@dataclass(frozen=True)
class SicStructure:
    """d^2 rank-one projectors Pi_i with effects O_i = Pi_i / d.

    ``residual`` is the verified deviation from the defining overlap
    condition; structures are returned even when it is large so that the
    fiducial search can inspect intermediate candidates.
    """

    projectors: np.ndarray            # (d^2, d, d)
    effects: np.ndarray               # (d^2, d, d), projectors / d
    residual: float
    povm_deviation: float
    fiducial: Fiducial | None = None

    def __post_init__(self):
        object.__setattr__(self, "projectors", frozen_array(self.projectors))
        object.__setattr__(self, "effects", frozen_array(self.effects))

    @property
    def dim(self) -> int:
        return self.projectors.shape[1]

    @property
    def n_outcomes(self) -> int:
        return self.projectors.shape[0]

    @property
    def certified(self) -> bool:
        return self.residual <= CERTIFIED_RESIDUAL


def require_certified(structure: SicStructure):
    """Raise UncertifiedSic unless the structure meets the residual threshold."""
    if not structure.certified:
        raise UncertifiedSic(structure.residual, CERTIFIED_RESIDUAL)


def verify_sic(projectors, dim: int) -> SicVerification:
    """Measure how far a projector set is from the SIC defining conditions.

    Parameters
    ----------
    projectors : array-like, shape (d^2, d, d)
        Candidate rank-one projectors.
    dim : int
        Hilbert-space dimension d.

    Returns
    -------
    SicVerification with the overlap residual, the deviation of the
    rescaled sum from the identity, and the worst (k, l) pair.
    """
    d = check_dim(dim)
    arr = np.asarray(projectors, dtype=complex)
    if arr.ndim != 3 or arr.shape[0] != d * d:
        raise WrongCount(f"expected {d * d} projectors, got {arr.shape[0] if arr.ndim == 3 else arr.shape}")
    if arr.shape[1] != d or arr.shape[2] != d:
        raise DimensionMismatch(f"projectors have shape {arr.shape[1:]}, expected ({d}, {d})")

    overlaps = np.einsum("kab,lba->kl", arr, arr)
    target = (d * np.eye(d * d) + 1.0) / (d + 1.0)
    deviations = np.abs(overlaps - target)
    flat_worst = int(np.argmax(deviations))
    worst_pair = (flat_worst // (d * d), flat_worst % (d * d))
    residual = float(deviations.flat[flat_worst])
    povm_deviation = float(np.max(np.abs(arr.sum(axis=0) / d - np.eye(d))))
    return SicVerification(residual, povm_deviation, worst_pair)


def orbit(fiducial: Fiducial) -> SicStructure:
    """Displacement orbit of a fiducial: Pi_{a,b} = D_{a,b} |psi><psi| D_{a,b}^dag.

    The structure is returned whether or not it satisfies the SIC overlap
    condition; ``residual`` reports the verified deviation.
    """
    d = fiducial.dim
    displaced = np.einsum("kab,b->ka", wh_displacements(d), fiducial.vector)
    projectors = np.einsum("ka,kb->kab", displaced, displaced.conj())
    verification = verify_sic(projectors, d)
    return SicStructure(
        projectors=projectors,
        effects=projectors / d,
        residual=verification.residual,
        povm_deviation=verification.povm_deviation,
        fiducial=fiducial,
    )


def sic_from_projectors(projectors, dim: int,
                        fiducial: Fiducial | None = None) -> SicStructure:
    """Wrap a hand-supplied projector set, verifying it first.

    Accepts any set that passes the projector sanity checks; certification
    is still decided by the measured residual, exactly as for orbits.
    """
    d = check_dim(dim)
    verification = verify_sic(projectors, d)
    arr = np.asarray(projectors, dtype=complex)
    for i, p in enumerate(arr):
        herm = float(np.max(np.abs(p - dagger(p))))
        idem = float(np.max(np.abs(p @ p - p)))
        if herm > 1e-9 or idem > 1e-9:
            raise InvalidInput(
                f"projector {i} is not a rank-one projector "
                f"(hermiticity {herm:.3e}, idempotency {idem:.3e})"
            )
    return SicStructure(
        projectors=arr,
        effects=arr / d,
        residual=verification.residual,
        povm_deviation=verification.povm_deviation,
        fiducial=fiducial,
    )


def gram_log_determinant(structure: SicStructure) -> float:
    """log |det| of the d^2 x d^2 projector overlap matrix.

    Linear independence of the projectors as Hermitian operators requires
    this to be finite and not astronomically small; for an exact SIC the
    determinant is d * (d/(d+1))^(d^2-1).
    """
    overlaps = np.einsum("kab,lba->kl", structure.projectors, structure.projectors).real
    sign, logdet = np.linalg.slogdet(overlaps)
    if sign == 0:
        return float("-inf")
    return float(logdet)


def builtin_fiducial(dim: int) -> Fiducial:
    """Known SIC fiducials for d = 2 and d = 3."""
    d = check_dim(dim)
    if d == 2:
        up = np.sqrt((1.0 + 1.0 / np.sqrt(3.0)) / 2.0)
        down = np.exp(1j * np.pi / 4.0) * np.sqrt((1.0 - 1.0 / np.sqrt(3.0)) / 2.0)
        return Fiducial(np.array([up, down]))
    if d == 3:
        return Fiducial(np.array([0.0, 1.0, -1.0]) / np.sqrt(2.0))
    raise NoBuiltinForDimension(d)


def wh_overlaps(fiducial_vector: np.ndarray, dim: int) -> np.ndarray:
    """The d^2 overlaps <psi| D_{a,b} |psi> (index 0 is the identity)."""
    disp = wh_displacements(dim)
    return np.einsum("a,kab,b->k", fiducial_vector.conj(), disp, fiducial_vector)


def frame_potential(fiducial: Fiducial) -> float:
    """Sum of |<psi_k|psi_l>|^4 over ordered pairs k != l of the orbit.

    Displacement covariance collapses the double sum: each difference
    (a, b) != (0, 0) accounts for exactly d^2 ordered pairs, so the value is
    d^2 * sum_{(a,b) != 0} |<psi|D_{a,b}|psi>|^4.
    """
    d = fiducial.dim
    c = wh_overlaps(fiducial.vector, d)
    mags4 = np.abs(c[1:]) ** 4
    return float(d * d * np.sum(mags4))
