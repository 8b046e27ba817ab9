"""Numerical search for SIC fiducials by frame-potential minimization.

The objective is the frame potential of the displacement orbit, evaluated
through the d^2 overlaps c_ab = <psi|D_ab|psi>. On unit vectors the
displacement operators form an orthogonal operator basis, which gives the
exact identity

    frame_potential = minimum + d^2 * sum_{(a,b) != 0} (|c_ab|^2 - 1/(d+1))^2,

so the optimizer works on the nonnegative excess sum directly: its decrements
stay resolvable long after differences of the raw potential (an O(1) number)
have fallen below machine precision, which is what allows residuals near
1e-13 rather than stalling around 1e-8.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .quantum import check_dim
from .sic import (
    Fiducial,
    SicStructure,
    frame_potential_minimum,
    make_fiducial,
    orbit,
    wh_displacements,
)

FOUND = "found"
NOT_FOUND = "not_found"

_ARMIJO = 1e-4
_MAX_STEP = 1e6


@dataclass(frozen=True)
class SearchConfig:
    dim: int
    max_restarts: int = 64
    max_iterations: int = 20000
    target_residual: float = 1e-9
    seed: int = 0
    initial_step: float = 0.1
    shrink_factor: float = 0.5
    min_step: float = 1e-12

    def __post_init__(self):
        check_dim(self.dim)
        if self.max_restarts < 1:
            raise InvalidInput(f"max_restarts must be >= 1, got {self.max_restarts}")
        if self.max_iterations < 1:
            raise InvalidInput(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.target_residual <= 0:
            raise InvalidInput(f"target_residual must be > 0, got {self.target_residual}")
        if not (0 < self.shrink_factor < 1):
            raise InvalidInput(f"shrink_factor must be in (0, 1), got {self.shrink_factor}")
        if self.initial_step <= 0 or self.min_step <= 0:
            raise InvalidInput("step sizes must be positive")


@dataclass(frozen=True)
class SearchResult:
    status: str                     # "found" | "not_found"
    fiducial: Fiducial | None
    residual: float
    frame_potential_gap: float
    restarts_used: int
    iterations_used: int
    seed: int

    @property
    def found(self) -> bool:
        return self.status == FOUND


def _overlap_state(displacements: np.ndarray, z: np.ndarray):
    """Overlaps c_k = <z|D_k|z>, their excesses over 1/(d+1), and D_k z."""
    dz = np.einsum("kab,b->ka", displacements, z)
    c = np.einsum("a,ka->k", z.conj(), dz)
    return c, dz


def _excess(c: np.ndarray, dim: int) -> np.ndarray:
    return np.abs(c[1:]) ** 2 - 1.0 / (dim + 1.0)


def _gap_objective(excess: np.ndarray, dim: int) -> float:
    """frame_potential - minimum, computed as d^2 * sum of squared excesses."""
    return float(dim * dim * np.sum(excess * excess))


def _gap_and_gradient(displacements: np.ndarray, z: np.ndarray, dim: int):
    """Objective gap and its gradient with respect to the 2d real parameters.

    Uses the Wirtinger derivative of the scale-invariant extension
    c_k(z) = z^dag D_k z / z^dag z; the returned complex vector g encodes the
    real gradient as (d/dRe z) + i (d/dIm z), so a real step x -= s * grad is
    the complex update z -= s * g. ``z`` must be unit-norm.
    """
    c, dz = _overlap_state(displacements, z)
    ddag_z = np.einsum("kba,b->ka", displacements.conj(), z)
    excess = _excess(c, dim)
    gap = _gap_objective(excess, dim)
    # d|c_k|^2/dzbar = cbar_k D_k z + c_k D_k^dag z - 2|c_k|^2 z  (unit z)
    weights = 2.0 * excess
    mixed = (
        np.einsum("k,k,ka->a", weights, c[1:].conj(), dz[1:])
        + np.einsum("k,k,ka->a", weights, c[1:], ddag_z[1:])
        - 2.0 * np.einsum("k,k->", weights, np.abs(c[1:]) ** 2) * z
    )
    grad = 2.0 * dim * dim * mixed
    return gap, grad, excess


def frame_potential_gradient(vector: np.ndarray, dim: int) -> np.ndarray:
    """Gradient of the orbit frame potential over the 2d real parameters.

    Layout: first d entries are derivatives with respect to the real parts,
    last d with respect to the imaginary parts. The function differentiated
    is scale-invariant (the vector is normalized before evaluation), so the
    gradient of the gap equals the gradient of the frame potential itself.
    """
    z = np.asarray(vector, dtype=complex)
    z = z / np.linalg.norm(z)
    _, grad, _ = _gap_and_gradient(wh_displacements(dim), z, dim)
    return np.concatenate([grad.real, grad.imag])


def _minimize(z: np.ndarray, dim: int, config: SearchConfig):
    """Descent core; returns (unit vector, frame-potential gap, iterations)."""
    displacements = wh_displacements(dim)
    gap, grad, excess = _gap_and_gradient(displacements, z, dim)
    step = config.initial_step
    prev_z = None
    prev_grad = None
    iterations = 0

    for _ in range(config.max_iterations):
        iterations += 1
        if float(np.max(np.abs(excess))) <= config.target_residual:
            break
        grad_norm_sq = float(np.sum(grad.real**2 + grad.imag**2))
        if grad_norm_sq == 0.0:
            break

        trial = step
        if prev_z is not None:
            dz = z - prev_z
            dg = grad - prev_grad
            sy = float(np.sum(dz.real * dg.real + dz.imag * dg.imag))
            ss = float(np.sum(dz.real**2 + dz.imag**2))
            if sy > 0 and ss > 0:
                trial = min(max(ss / sy, config.min_step), _MAX_STEP)

        accepted = False
        while trial >= config.min_step:
            candidate = z - trial * grad
            candidate /= np.linalg.norm(candidate)
            cand_gap, cand_grad, cand_excess = _gap_and_gradient(displacements, candidate, dim)
            if cand_gap <= gap - _ARMIJO * trial * grad_norm_sq:
                prev_z, prev_grad = z, grad
                z, gap, grad, excess = candidate, cand_gap, cand_grad, cand_excess
                step = trial
                accepted = True
                break
            trial *= config.shrink_factor
        if not accepted:
            break

    return z, gap, iterations


def local_minimize(start: Fiducial, config: SearchConfig):
    """Projected gradient descent on the frame potential with backtracking.

    Accepted iterates have nonincreasing frame potential; each step is
    renormalized back to the unit sphere. A Barzilai-Borwein trial step is
    used when the previous move defines one, safeguarded by Armijo
    backtracking under the configured step policy.

    Returns
    -------
    (fiducial, frame_potential, iterations)
    """
    z = np.array(start.vector, dtype=complex)
    z, gap, iterations = _minimize(z, start.dim, config)
    return make_fiducial(z), frame_potential_minimum(start.dim) + gap, iterations


def _run_restart(config: SearchConfig, index: int):
    """One seeded restart: random unit start, minimize, verify the orbit."""
    rng = np.random.default_rng((config.seed + index) % 2**63)
    d = config.dim
    raw = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    z = raw / np.linalg.norm(raw)
    z, gap, iterations = _minimize(z, d, config)
    fiducial = make_fiducial(z)
    structure = orbit(fiducial)
    return fiducial, structure, gap, iterations


def search(config: SearchConfig, jobs: int = 1) -> SearchResult:
    """Random-restart fiducial search.

    Restarts draw independent seeded starts (stream k uses seed + k) and are
    judged by the verified residual of their orbit; the lowest restart index
    reaching the target wins, which keeps the outcome independent of how many
    restarts execute concurrently. Absence of a SIC is reported as a
    ``not_found`` status, not an error.
    """
    jobs = max(1, int(jobs))
    best_residual = np.inf
    best_fiducial = None
    best_gap = np.inf
    iterations_total = 0

    def finish_found(index: int, fiducial: Fiducial, structure: SicStructure,
                     gap: float, iterations_before: int) -> SearchResult:
        return SearchResult(
            status=FOUND,
            fiducial=fiducial,
            residual=structure.residual,
            frame_potential_gap=gap,
            restarts_used=index + 1,
            iterations_used=iterations_before,
            seed=config.seed,
        )

    for chunk_start in range(0, config.max_restarts, jobs):
        indices = range(chunk_start, min(chunk_start + jobs, config.max_restarts))
        if jobs == 1:
            outcomes = [_run_restart(config, k) for k in indices]
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                outcomes = list(pool.map(lambda k: _run_restart(config, k), indices))
        for k, (fiducial, structure, gap, iterations) in zip(indices, outcomes):
            iterations_total += iterations
            if structure.residual <= config.target_residual:
                return finish_found(k, fiducial, structure, gap, iterations_total)
            if structure.residual < best_residual:
                best_residual = structure.residual
                best_fiducial = fiducial
                best_gap = gap

    return SearchResult(
        status=NOT_FOUND,
        fiducial=best_fiducial,
        residual=float(best_residual),
        frame_potential_gap=float(best_gap),
        restarts_used=config.max_restarts,
        iterations_used=iterations_total,
        seed=config.seed,
    )
