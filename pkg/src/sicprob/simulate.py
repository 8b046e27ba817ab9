"""Dual-track circuit runner: density matrices vs pure probability vectors.

Unitary evolution acts on the probability side as the affine map

    q_j = (d+1) sum_i p_i r(j, i) - 1/d,    r(j, i) = (1/d) tr(Pi_j U Pi_i U^dag),

where r(j, i) is the probability of SIC outcome j after the state collapsed
to Pi_i and then evolved -- a conditional probability between two
hypothetical measurements at different times, which makes the evolution a
rescaled Law of Total Probability. Circuits are run on both tracks and the
final distributions compared entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidInput
from .probability import (
    CondProbMatrix,
    ProbVector,
    born_urgleichung,
    cond_prob_matrix,
    probs_to_state,
    state_to_probs,
)
from .quantum import (
    DensityMatrix,
    OutcomeDistribution,
    Povm,
    Unitary,
    born_direct,
    dagger,
    make_distribution,
    validate_density,
)
from .sic import SicStructure, require_certified as _require_certified

SIC_READOUT = "sic"


@dataclass(frozen=True)
class CircuitStep:
    unitary: Unitary
    label: str | None = None  # e.g. a time tag


@dataclass(frozen=True)
class Circuit:
    """A flat unitary sequence with one final readout.

    ``initial`` is either a DensityMatrix or a ProbVector; the final
    measurement is a Povm or the string "sic", meaning: read out the SIC
    probability vector itself.
    """

    dim: int
    initial: DensityMatrix | ProbVector
    steps: tuple[CircuitStep, ...] = ()
    final_measurement: Povm | str = SIC_READOUT

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if isinstance(self.final_measurement, str) and self.final_measurement != SIC_READOUT:
            raise InvalidInput(
                f"final_measurement must be a Povm or {SIC_READOUT!r}, got {self.final_measurement!r}"
            )
        if self.initial.dim != self.dim:
            raise DimensionMismatch(
                f"initial state has dimension {self.initial.dim}, circuit declares {self.dim}"
            )
        for k, step in enumerate(self.steps):
            if step.unitary.dim != self.dim:
                raise DimensionMismatch(f"step {k} acts on dimension {step.unitary.dim}, expected {self.dim}")
        if isinstance(self.final_measurement, Povm) and self.final_measurement.dim != self.dim:
            raise DimensionMismatch(
                f"final measurement acts on dimension {self.final_measurement.dim}, expected {self.dim}"
            )


@dataclass(frozen=True)
class TrackReport:
    amplitude_outcome: OutcomeDistribution
    probability_outcome: OutcomeDistribution
    max_abs_deviation: float
    per_step_deviations: tuple[float, ...] = field(default_factory=tuple)


def rotate_sic(u: Unitary, sic: SicStructure) -> Povm:
    """Unitarily rotated SIC measurement with effects (1/d) U Pi_j U^dag."""
    if u.dim != sic.dim:
        raise DimensionMismatch(f"unitary (d={u.dim}) and SIC (d={sic.dim}) disagree")
    _require_certified(sic)
    rotated = np.einsum("ab,jbc,dc->jad", u.matrix, sic.projectors, u.matrix.conj())
    return Povm(rotated / sic.dim)


def evolution_cond_matrix(u: Unitary, sic: SicStructure) -> CondProbMatrix:
    """r(j, i) = (1/d) tr(Pi_j U Pi_i U^dag): SIC outcome j after evolving Pi_i."""
    if u.dim != sic.dim:
        raise DimensionMismatch(f"unitary (d={u.dim}) and SIC (d={sic.dim}) disagree")
    _require_certified(sic)
    evolved = np.einsum("ab,ibc,dc->iad", u.matrix, sic.projectors, u.matrix.conj())
    matrix = np.einsum("jab,iba->ji", sic.projectors, evolved).real / sic.dim
    return CondProbMatrix(sic.dim, matrix)


def evolve_probs(p: ProbVector, u: Unitary, sic: SicStructure) -> ProbVector:
    """Evolve a probability vector: q_j = (d+1) sum_i p_i r(j, i) - 1/d.

    Agrees with state_to_probs(U rho U^dag) whenever p = state_to_probs(rho).
    """
    if p.dim != sic.dim:
        raise DimensionMismatch(f"probabilities (d={p.dim}) and SIC (d={sic.dim}) disagree")
    r = evolution_cond_matrix(u, sic)
    d = sic.dim
    q = (d + 1) * (r.matrix @ p.entries) - 1.0 / d
    return ProbVector(d, q)


def evolve_state(rho: DensityMatrix, u: Unitary) -> DensityMatrix:
    """Schroedinger update rho' = U rho U^dag."""
    if rho.dim != u.dim:
        raise DimensionMismatch(f"state (d={rho.dim}) and unitary (d={u.dim}) disagree")
    updated = u.matrix @ rho.matrix @ dagger(u.matrix)
    updated = (updated + dagger(updated)) / 2
    return validate_density(updated)


def transfer_matrix(u: Unitary, sic: SicStructure):
    """Evolution as an affine map: returns (M, offset) with M = (d+1) r.

    evolve_probs(p) == M @ p + offset entrywise; transfers compose the way
    the unitaries do.
    """
    r = evolution_cond_matrix(u, sic)
    return (sic.dim + 1) * r.matrix, -1.0 / sic.dim


def run_dual(circuit: Circuit, sic: SicStructure) -> TrackReport:
    """Run a circuit on both tracks and report their agreement.

    Amplitude track: fold rho' = U rho U^dag, then the trace Born rule.
    Probability track: fold the affine evolution map, then the
    probability-space Born rule. Neither track borrows intermediate results
    from the other; per-step deviations convert the amplitude state to
    probabilities after each step purely for diagnostics.
    """
    if circuit.dim != sic.dim:
        raise DimensionMismatch(f"circuit (d={circuit.dim}) and SIC (d={sic.dim}) disagree")
    _require_certified(sic)

    if isinstance(circuit.initial, DensityMatrix):
        rho = circuit.initial
        p = state_to_probs(rho, sic)
    else:
        p = circuit.initial
        rho = probs_to_state(p, sic)  # raises NotAQuantumState outside the state space

    per_step = []
    for step in circuit.steps:
        rho = evolve_state(rho, step.unitary)
        p = evolve_probs(p, step.unitary, sic)
        shadow = state_to_probs(rho, sic)
        per_step.append(float(np.max(np.abs(shadow.entries - p.entries))))

    if circuit.final_measurement == SIC_READOUT:
        amplitude = make_distribution(state_to_probs(rho, sic).entries)
        probability = make_distribution(p.entries)
    else:
        povm = circuit.final_measurement
        amplitude = born_direct(rho, povm)
        probability = born_urgleichung(p, cond_prob_matrix(povm, sic), sic.dim)

    deviation = float(np.max(np.abs(amplitude.entries - probability.entries)))
    return TrackReport(
        amplitude_outcome=amplitude,
        probability_outcome=probability,
        max_abs_deviation=deviation,
        per_step_deviations=tuple(per_step),
    )
