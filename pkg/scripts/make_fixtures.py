#!/usr/bin/env python3
"""Regenerate the bundled fixtures deterministically.

Writes fiducials for d = 2..8 (built-ins for 2 and 3, deep-refined search
results for the rest), three regression circuits, and twenty Born-rule
regression cases. Every artifact is a pure function of the seeds below, so
rerunning this script must reproduce the files byte for byte.
"""

from __future__ import annotations

import json
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from sicprob import serialize as ser
from sicprob.probability import state_to_probs
from sicprob.quantum import random_density, random_povm, random_unitary
from sicprob.search import SearchConfig, search
from sicprob.sic import builtin_fiducial, orbit
from sicprob.simulate import Circuit, CircuitStep

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "src", "sicprob", "fixtures")

SEARCH_SEED = 0
DEEP_TARGET = 1e-13


def write(path: str, payload: dict):
    full = os.path.join(FIXTURES, path)
    os.makedirs(os.path.dirname(full), exist_ok=True)
    with open(full, "w", encoding="utf-8") as handle:
        handle.write(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {path}")


def fiducials():
    for d in (2, 3):
        write(f"fiducial_d{d}.json", ser.fiducial_to_json(builtin_fiducial(d)))
    for d in (4, 5, 6, 7, 8):
        config = SearchConfig(
            dim=d, seed=SEARCH_SEED, target_residual=DEEP_TARGET,
            max_restarts=128, max_iterations=50000,
        )
        result = search(config)
        if not result.found:
            raise SystemExit(f"deep search failed for d={d}: residual {result.residual:.3e}")
        print(f"d={d}: residual {result.residual:.3e} after {result.restarts_used} restart(s)")
        write(f"fiducial_d{d}.json", ser.fiducial_to_json(result.fiducial))


def circuits():
    # trivial regression: no steps, SIC readout of the maximally mixed state
    mixed = random_density(2, 0)
    trivial = Circuit(dim=2, initial=mixed, steps=(), final_measurement="sic")
    write("circuit_d2_trivial.json", ser.circuit_to_json(trivial))

    # flagship: three steps in d=4 ending in a random six-outcome measurement
    flagship = Circuit(
        dim=4,
        initial=random_density(4, 5),
        steps=tuple(CircuitStep(random_unitary(4, 50 + k), label=f"t{k + 1}") for k in range(3)),
        final_measurement=random_povm(4, 6, 55),
    )
    write("circuit_d4_3step.json", ser.circuit_to_json(flagship))

    # three-qubit-sized: five steps in d=8, probability-vector initial state
    sic8 = orbit(ser.load_document(os.path.join(FIXTURES, "fiducial_d8.json")))
    initial8 = state_to_probs(random_density(8, 8), sic8)
    big = Circuit(
        dim=8,
        initial=initial8,
        steps=tuple(CircuitStep(random_unitary(8, 80 + k), label=f"t{k + 1}") for k in range(5)),
        final_measurement=random_povm(8, 4, 88),
    )
    write("circuit_d8_5step.json", ser.circuit_to_json(big))


def born_cases():
    index = []
    for i in range(20):
        d = (2, 3, 4, 5)[i % 4]
        state = random_density(d, 1000 + i)
        if i % 3 == 0:
            povm = random_povm(d, 2 + (i % 7), 2000 + i)
        elif i % 3 == 1:
            from sicprob.quantum import projective_povm
            povm = projective_povm(random_unitary(d, 2000 + i))
        else:
            fid = ser.load_document(os.path.join(FIXTURES, f"fiducial_d{d}.json"))
            from sicprob.quantum import Povm
            povm = Povm(orbit(fid).effects)
        state_name = f"born_cases/state_{i:02d}.json"
        povm_name = f"born_cases/povm_{i:02d}.json"
        write(state_name, ser.density_to_json(state))
        write(povm_name, ser.povm_to_json(povm))
        index.append({"dim": d, "state": f"state_{i:02d}.json", "povm": f"povm_{i:02d}.json"})
    write("born_cases/cases.json", {"kind": "born_case_index", "cases": index})


if __name__ == "__main__":
    fiducials()
    circuits()
    born_cases()
