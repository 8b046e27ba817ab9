"""Density matrices, unitaries, POVMs and the conventional Born rule.

This is the amplitude-side ground truth: every probability-space operation
elsewhere in the package is checked against the trace formulas defined here.
All functions are pure; all wrapped arrays are frozen after construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidInput,
    NotHermitian,
    NotPositive,
    NotUnitTrace,
    NotUnitary,
    PovmIncomplete,
    ZeroProbabilityOutcome,
)

# Tolerance hierarchy: each layer accumulates roughly one matrix product of
# rounding on top of the previous one.
CONSTRUCTION_TOL = 1e-12
VALIDITY_TOL = 1e-10
COMPARISON_TOL = 1e-9


def frozen_array(values, dtype=complex) -> np.ndarray:
    """Copy ``values`` into a read-only ndarray."""
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def check_dim(d: int) -> int:
    d = int(d)
    if d < 2:
        raise InvalidInput(f"Hilbert-space dimension must be >= 2, got {d}")
    return d


def _check_square(matrix: np.ndarray, what: str = "matrix") -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInput(f"{what} must be square, got shape {m.shape}")
    return m


def hermiticity_deviation(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def min_eigenvalue(m: np.ndarray) -> float:
    """Smallest eigenvalue of a (numerically) Hermitian matrix."""
    return float(np.linalg.eigvalsh((m + dagger(m)) / 2)[0])


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive-semidefinite, unit-trace operator on C^d."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", frozen_array(self.matrix))
        _check_square(self.matrix, "density matrix")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True)
class Unitary:
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", frozen_array(self.matrix))
        _check_square(self.matrix, "unitary")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Povm:
    """Ordered measurement effects: positive operators summing to identity."""

    effects: np.ndarray  # shape (m, d, d), read-only

    def __post_init__(self):
        arr = np.asarray(self.effects, dtype=complex)
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise InvalidInput(f"POVM effects must have shape (m, d, d), got {arr.shape}")
        object.__setattr__(self, "effects", frozen_array(arr))

    @property
    def dim(self) -> int:
        return self.effects.shape[1]

    @property
    def n_outcomes(self) -> int:
        return self.effects.shape[0]


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities of measurement outcomes, clamped to [0, 1].

    ``pre_clamp_deviation`` records how far the raw values strayed outside
    [0, 1] before clamping; identities are checked on the raw values, the
    clamped entries are the user-facing output.
    """

    entries: np.ndarray
    pre_clamp_deviation: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "entries", frozen_array(self.entries, dtype=float))

    @property
    def n_outcomes(self) -> int:
        return self.entries.shape[0]


def make_distribution(raw: np.ndarray, sum_tol: float = VALIDITY_TOL) -> OutcomeDistribution:
    """Clamp raw outcome probabilities to [0, 1], retaining the deviation."""
    raw = np.asarray(raw, dtype=float)
    total = float(raw.sum())
    if abs(total - 1.0) > sum_tol:
        raise InvalidInput(f"outcome probabilities sum to {total!r}, not 1")
    deviation = float(max(np.max(-raw, initial=0.0), np.max(raw - 1.0, initial=0.0), 0.0))
    return OutcomeDistribution(np.clip(raw, 0.0, 1.0), deviation)


def validate_density(matrix: np.ndarray, tol: float = VALIDITY_TOL) -> DensityMatrix:
    """Check the density-matrix invariants, reporting the first violation.

    Order of checks: Hermitian, unit trace, positive semidefinite.
    """
    m = _check_square(matrix, "density matrix")
    check_dim(m.shape[0])
    dev = hermiticity_deviation(m)
    if dev > tol:
        raise NotHermitian(dev, "density matrix")
    trace_dev = abs(complex(np.trace(m)) - 1.0)
    if trace_dev > tol:
        raise NotUnitTrace(trace_dev)
    lo = min_eigenvalue(m)
    if lo < -tol:
        raise NotPositive(-lo, "density matrix")
    return DensityMatrix(m)


def validate_unitary(matrix: np.ndarray, tol: float = VALIDITY_TOL) -> Unitary:
    m = _check_square(matrix, "unitary")
    check_dim(m.shape[0])
    dev = float(np.max(np.abs(m @ dagger(m) - np.eye(m.shape[0]))))
    if dev > tol:
        raise NotUnitary(dev)
    return Unitary(m)


def validate_povm(effects, tol: float = VALIDITY_TOL) -> Povm:
    """Check that each effect is Hermitian and PSD and that they sum to I."""
    arr = np.asarray(effects, dtype=complex)
    if arr.ndim != 3 or arr.shape[0] < 1 or arr.shape[1] != arr.shape[2]:
        raise InvalidInput(f"POVM effects must have shape (m, d, d) with m >= 1, got {arr.shape}")
    check_dim(arr.shape[1])
    for j, effect in enumerate(arr):
        dev = hermiticity_deviation(effect)
        if dev > tol:
            raise NotHermitian(dev, f"effect {j}")
        lo = min_eigenvalue(effect)
        if lo < -tol:
            raise NotPositive(-lo, f"effect {j}")
    completeness = float(np.max(np.abs(arr.sum(axis=0) - np.eye(arr.shape[1]))))
    if completeness > tol:
        raise PovmIncomplete(completeness)
    return Povm(arr)


def _same_dim(a: int, b: int, what: str):
    if a != b:
        raise DimensionMismatch(f"{what}: dimensions {a} and {b} differ")


def born_direct(rho: DensityMatrix, povm: Povm) -> OutcomeDistribution:
    """Outcome probabilities Q(E_j) = tr(rho E_j)."""
    _same_dim(rho.dim, povm.dim, "born_direct")
    raw = np.einsum("ab,jba->j", rho.matrix, povm.effects).real
    return make_distribution(raw)


def psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    """Matrix square root of a PSD matrix via eigendecomposition.

    Eigenvalues that are negative by rounding are clamped to zero first.
    """
    m = _check_square(matrix)
    vals, vecs = np.linalg.eigh((m + dagger(m)) / 2)
    roots = np.sqrt(np.clip(vals, 0.0, None))
    return (vecs * roots) @ dagger(vecs)


def luders_update(rho: DensityMatrix, effect: np.ndarray,
                  tol: float = VALIDITY_TOL) -> DensityMatrix:
    """Post-measurement state sqrt(E) rho sqrt(E) / tr(rho E).

    For a rank-one projector E the output is E itself, whatever rho was.
    """
    e = _check_square(effect, "effect")
    _same_dim(rho.dim, e.shape[0], "luders_update")
    dev = hermiticity_deviation(e)
    if dev > tol:
        raise NotHermitian(dev, "effect")
    lo = min_eigenvalue(e)
    if lo < -tol:
        raise NotPositive(-lo, "effect")
    prob = float(np.real(np.trace(rho.matrix @ e)))
    if prob <= 1e-12:
        raise ZeroProbabilityOutcome(prob)
    root = psd_sqrt(e)
    updated = root @ rho.matrix @ root / prob
    updated = (updated + dagger(updated)) / 2
    updated /= np.real(np.trace(updated))
    return validate_density(updated, tol=COMPARISON_TOL)


def random_density(dim: int, seed: int) -> DensityMatrix:
    """Seeded random mixed state A A^dag / tr(A A^dag), A complex Gaussian."""
    d = check_dim(dim)
    rng = np.random.default_rng(seed)
    a = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    m = a @ dagger(a)
    m /= np.real(np.trace(m))
    return validate_density(m)


def random_unitary(dim: int, seed: int) -> Unitary:
    """Seeded Haar-random unitary via QR with R's diagonal made real-positive."""
    d = check_dim(dim)
    rng = np.random.default_rng(seed)
    a = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(a)
    diag = np.diagonal(r)
    absd = np.abs(diag)
    phases = np.where(absd > 0, diag, 1.0) / np.where(absd > 0, absd, 1.0)
    return validate_unitary(q * phases)


def random_povm(dim: int, n_outcomes: int, seed: int) -> Povm:
    """Seeded random POVM: Wishart pieces G_j whitened by (sum G)^(-1/2)."""
    d = check_dim(dim)
    if n_outcomes < 1:
        raise InvalidInput(f"POVM needs at least one outcome, got {n_outcomes}")
    rng = np.random.default_rng(seed)
    pieces = []
    for _ in range(n_outcomes):
        a = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
        pieces.append(a @ dagger(a))
    total = np.sum(pieces, axis=0)
    vals, vecs = np.linalg.eigh(total)
    whiten = (vecs / np.sqrt(vals)) @ dagger(vecs)
    return validate_povm(np.stack([whiten @ g @ whiten for g in pieces]))


def projective_povm(u: Unitary) -> Povm:
    """Rank-one projective measurement onto the columns of a unitary."""
    effects = np.einsum("ak,bk->kab", u.matrix, u.matrix.conj())
    return validate_povm(effects)
