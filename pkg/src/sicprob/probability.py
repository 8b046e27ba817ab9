"""States as pure probability vectors, and the Born rule without amplitudes.

A certified SIC turns every density matrix into a probability vector
p_i = (1/d) tr(rho Pi_i) and back via rho = sum_i [(d+1) p_i - 1/d] Pi_i.
Outcome probabilities of any other measurement follow from p and the
conditional matrix tr(E_j Pi_i) alone; the density matrix is never
materialized on that path. The trace-based functions in ``quantum`` exist
only as the verification oracle for these identities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidInput,
    NotAQuantumState,
    NotInformationallyComplete,
    ShapeMismatch,
    WrongCount,
)
from .quantum import (
    COMPARISON_TOL,
    VALIDITY_TOL,
    DensityMatrix,
    OutcomeDistribution,
    Povm,
    check_dim,
    dagger,
    frozen_array,
    make_distribution,
    validate_povm,
)
from .sic import SicStructure, require_certified as _require_certified


@dataclass(frozen=True)
class ProbVector:
    """The d^2 SIC outcome probabilities representing a quantum state."""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        check_dim(self.dim)
        arr = np.asarray(self.entries, dtype=float)
        if arr.shape != (self.dim * self.dim,):
            raise ShapeMismatch(
                f"probability vector needs {self.dim * self.dim} entries, got {arr.shape}"
            )
        if float(arr.min()) < -1e-12 or float(arr.max()) > 1.0 + 1e-12:
            raise InvalidInput("probability entries must lie in [-1e-12, 1]")
        total = float(arr.sum())
        if abs(total - 1.0) > VALIDITY_TOL:
            raise InvalidInput(f"probability entries sum to {total!r}, not 1")
        object.__setattr__(self, "entries", frozen_array(arr, dtype=float))

    @property
    def purity(self) -> float:
        """d(d+1) sum p_i^2 - 1, the purity tr(rho^2) of the represented state."""
        d = self.dim
        return float(d * (d + 1) * np.sum(self.entries**2) - 1.0)


@dataclass(frozen=True)
class CondProbMatrix:
    """p(E_j | O_i) = tr(E_j Pi_i); rows index POVM outcomes, columns SIC outcomes."""

    dim: int
    matrix: np.ndarray  # (m, d^2) real

    def __post_init__(self):
        check_dim(self.dim)
        arr = np.asarray(self.matrix, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != self.dim * self.dim:
            raise ShapeMismatch(
                f"conditional matrix needs {self.dim * self.dim} columns, got shape {arr.shape}"
            )
        object.__setattr__(self, "matrix", frozen_array(arr, dtype=float))

    @property
    def n_outcomes(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class MicStructure:
    """A minimal informationally complete POVM together with its dual frame.

    The duals are generally not positive; they satisfy
    tr(dual_k effect_i) = delta_ki and reconstruct states from raw outcome
    probabilities the way the SIC reconstruction formula does.
    """

    effects: np.ndarray   # (d^2, d, d)
    duals: np.ndarray     # (d^2, d, d)

    def __post_init__(self):
        object.__setattr__(self, "effects", frozen_array(self.effects))
        object.__setattr__(self, "duals", frozen_array(self.duals))

    @property
    def dim(self) -> int:
        return self.effects.shape[1]


def _require_same_dim(a: int, b: int, what: str):
    if a != b:
        raise DimensionMismatch(f"{what}: dimensions {a} and {b} differ")


def state_to_probs(rho: DensityMatrix, sic: SicStructure) -> ProbVector:
    """SIC representation p_i = (1/d) tr(rho Pi_i)."""
    _require_same_dim(rho.dim, sic.dim, "state_to_probs")
    _require_certified(sic)
    d = sic.dim
    raw = np.einsum("ab,iba->i", rho.matrix, sic.projectors).real / d
    return ProbVector(d, raw)


def probs_to_state(p: ProbVector, sic: SicStructure) -> DensityMatrix:
    """Reconstruction rho = sum_i [(d+1) p_i - 1/d] Pi_i.

    Hermitian with unit trace by construction; positivity is checked, not
    repaired -- probability vectors outside the state space raise
    NotAQuantumState carrying the offending eigenvalue.
    """
    _require_same_dim(p.dim, sic.dim, "probs_to_state")
    _require_certified(sic)
    d = sic.dim
    coefficients = (d + 1) * p.entries - 1.0 / d
    rho = np.einsum("i,iab->ab", coefficients, sic.projectors)
    rho = (rho + dagger(rho)) / 2
    lowest = float(np.linalg.eigvalsh(rho)[0])
    if lowest < -COMPARISON_TOL:
        raise NotAQuantumState(lowest)
    return DensityMatrix(rho)


def cond_prob_matrix(povm: Povm, sic: SicStructure) -> CondProbMatrix:
    """Conditional probabilities r(j, i) = tr(E_j Pi_i); columns sum to 1."""
    _require_same_dim(povm.dim, sic.dim, "cond_prob_matrix")
    _require_certified(sic)
    matrix = np.einsum("jab,iba->ji", povm.effects, sic.projectors).real
    return CondProbMatrix(sic.dim, matrix)


def _born_urgleichung_raw(p: ProbVector, r: CondProbMatrix, dim: int) -> np.ndarray:
    if p.dim != dim or r.dim != dim:
        raise ShapeMismatch(f"probability vector (d={p.dim}) and conditional matrix (d={r.dim}) must both use d={dim}")
    alpha = (dim + 1) * p.entries - 1.0 / dim
    return r.matrix @ alpha


def born_urgleichung(p: ProbVector, r: CondProbMatrix, dim: int) -> OutcomeDistribution:
    """Born rule in pure probabilities: Q_j = sum_i [(d+1) p_i - 1/d] r(j, i)."""
    return make_distribution(_born_urgleichung_raw(p, r, dim))


def _classical_ltp_raw(p: ProbVector, r: CondProbMatrix) -> np.ndarray:
    if p.dim != r.dim:
        raise ShapeMismatch(f"probability vector (d={p.dim}) and conditional matrix (d={r.dim}) disagree")
    return r.matrix @ p.entries


def classical_ltp(p: ProbVector, r: CondProbMatrix) -> OutcomeDistribution:
    """Law of Total Probability Q_j = sum_i p_i r(j, i), ignoring quantum structure."""
    return make_distribution(_classical_ltp_raw(p, r))


def ltp_deviation(p: ProbVector, r: CondProbMatrix, dim: int) -> float:
    """Largest gap between the Born rule and the classical total-probability rule."""
    born = _born_urgleichung_raw(p, r, dim)
    ltp = _classical_ltp_raw(p, r)
    return float(np.max(np.abs(born - ltp)))


def mic_duals(effects, dim: int) -> MicStructure:
    """Dual frame of an informationally complete POVM via its Gram matrix.

    dual_k = sum_i (G^-1)_ki effect_i with G_ki = tr(effect_k effect_i),
    obtained from one linear solve rather than an explicit inverse.
    Informational completeness is judged on the Gram matrix rescaled to unit
    diagonal; repeated or dependent effects make it singular.
    """
    d = check_dim(dim)
    povm = validate_povm(effects)
    if povm.dim != d:
        raise DimensionMismatch(f"effects act on dimension {povm.dim}, expected {d}")
    if povm.n_outcomes != d * d:
        raise WrongCount(f"expected {d * d} effects, got {povm.n_outcomes}")
    arr = povm.effects
    gram = np.einsum("kab,iba->ki", arr, arr).real
    diag = np.diagonal(gram)
    if np.any(diag <= 0):
        raise NotInformationallyComplete(0.0)
    scale = 1.0 / np.sqrt(diag)
    sign, logdet = np.linalg.slogdet(gram * scale[:, None] * scale[None, :])
    scaled_det = 0.0 if sign == 0 else float(sign * np.exp(logdet))
    if abs(scaled_det) <= 1e-12:
        raise NotInformationallyComplete(scaled_det)
    flat = arr.reshape(d * d, d * d)
    duals = np.linalg.solve(gram, flat).reshape(d * d, d, d)
    duality_dev = float(np.max(np.abs(np.einsum("kab,iba->ki", duals, arr).real - np.eye(d * d))))
    if duality_dev > COMPARISON_TOL:
        raise NotInformationallyComplete(scaled_det)
    return MicStructure(effects=arr, duals=duals)


def state_to_probs_mic(rho: DensityMatrix, mic: MicStructure) -> ProbVector:
    """Outcome probabilities p_i = tr(rho effect_i) of the MIC itself."""
    _require_same_dim(rho.dim, mic.dim, "state_to_probs_mic")
    raw = np.einsum("ab,iba->i", rho.matrix, mic.effects).real
    return ProbVector(mic.dim, raw)


def probs_to_state_mic(p: ProbVector, mic: MicStructure) -> DensityMatrix:
    """Dual-frame reconstruction rho = sum_i p_i dual_i; positivity checked."""
    _require_same_dim(p.dim, mic.dim, "probs_to_state_mic")
    rho = np.einsum("i,iab->ab", p.entries, mic.duals)
    rho = (rho + dagger(rho)) / 2
    lowest = float(np.linalg.eigvalsh(rho)[0])
    if lowest < -COMPARISON_TOL:
        raise NotAQuantumState(lowest)
    return DensityMatrix(rho)
