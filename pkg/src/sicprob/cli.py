"""Command-line interface: find/verify SICs, convert representations,
evaluate the Born rule both ways, and run dual-track simulations.

Human-readable summaries go to stdout; JSON reports go only to --out/--report
files, each embedding a run manifest. Exit codes: 0 success/verified,
1 verification failed, 2 invalid input, 3 search found nothing, 4 internal
error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time

import numpy as np

from . import __version__
from .errors import NotAQuantumState, SicProbError
from .probability import (
    born_urgleichung,
    classical_ltp,
    cond_prob_matrix,
    ltp_deviation,
    probs_to_state,
    probs_to_state_mic,
    state_to_probs,
    state_to_probs_mic,
)
from .quantum import born_direct, make_distribution
from .search import SearchConfig, search
from .serialize import (
    density_to_json,
    load_document,
    parse_document,
    probs_to_json,
    read_json,
    search_result_to_json,
    track_report_to_json,
    write_json_atomic,
)
from .sic import CERTIFIED_RESIDUAL, orbit
from .simulate import SIC_READOUT, evolve_probs, evolve_state, run_dual

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_NOT_FOUND = 3
EXIT_INTERNAL = 4


def _manifest(argv: list[str], seed, input_paths: list[str], started: float) -> dict:
    digests = {}
    for path in input_paths:
        with open(path, "rb") as handle:
            digests[path] = hashlib.sha256(handle.read()).hexdigest()
    return {
        "command": "sicprob " + " ".join(argv),
        "seed": seed,
        "version": __version__,
        "inputs": digests,
        "wall_time_s": time.perf_counter() - started,
    }


def _say(args, message: str):
    if not args.quiet:
        print(message)


def _format_dist(entries) -> str:
    return " ".join(f"{x:.12g}" for x in entries)


def _load_sic(path: str):
    """A SIC or fiducial file, turned into a certified-or-not structure."""
    doc = read_json(path)
    obj = parse_document(doc)
    if doc.get("kind") == "fiducial":
        return orbit(obj)
    return obj


def cmd_sic_find(args, argv) -> int:
    started = time.perf_counter()
    config = SearchConfig(
        dim=args.dim,
        max_restarts=args.restarts,
        max_iterations=args.iterations,
        target_residual=args.target,
        seed=args.seed,
    )
    result = search(config, jobs=args.jobs)
    _say(args, f"status={result.status} residual={result.residual:.3e} "
               f"restarts={result.restarts_used} iterations={result.iterations_used}")
    if args.out:
        payload = search_result_to_json(result, args.dim)
        payload["manifest"] = _manifest(argv, args.seed, [], started)
        write_json_atomic(args.out, payload)
    return EXIT_OK if result.found else EXIT_NOT_FOUND


def cmd_sic_verify(args, argv) -> int:
    structure = _load_sic(args.infile)
    _say(args, f"residual={structure.residual:.6e} povm_deviation={structure.povm_deviation:.6e}")
    return EXIT_OK if structure.residual <= args.tol else EXIT_VERIFY_FAILED


def cmd_convert(args, argv) -> int:
    started = time.perf_counter()
    inputs = [args.infile]
    if args.sic:
        inputs.append(args.sic)
        sic = _load_sic(args.sic)
        mic = None
    else:
        inputs.append(args.mic)
        mic = load_document(args.mic)
        sic = None

    doc = read_json(args.infile)
    source = parse_document(doc)
    doc_kind = doc.get("kind")

    if args.to == "probs":
        if doc_kind != "density":
            raise SicProbError(f"--to probs expects a density input, got {doc_kind!r}")
        p = state_to_probs(source, sic) if sic is not None else state_to_probs_mic(source, mic)
        payload = probs_to_json(p)
        _say(args, f"probs: {_format_dist(p.entries)}")
    else:
        if doc_kind != "probs":
            raise SicProbError(f"--to state expects a probs input, got {doc_kind!r}")
        try:
            rho = probs_to_state(source, sic) if sic is not None else probs_to_state_mic(source, mic)
        except NotAQuantumState as exc:
            _say(args, f"not a quantum state: min eigenvalue {exc.min_eigenvalue:.6e}")
            if args.out:
                payload = {
                    "kind": "convert_error",
                    "error": "NotAQuantumState",
                    "min_eigenvalue": exc.min_eigenvalue,
                    "manifest": _manifest(argv, None, inputs, started),
                }
                write_json_atomic(args.out, payload)
            return EXIT_VERIFY_FAILED
        payload = density_to_json(rho)
        _say(args, f"state: dim={rho.dim} purity={rho.purity:.12g}")

    if args.out:
        payload["manifest"] = _manifest(argv, None, inputs, started)
        write_json_atomic(args.out, payload)
    return EXIT_OK


def _born_inputs(args):
    """Resolve (rho, p, sic) for the requested method, or complain."""
    sic = _load_sic(args.sic) if args.sic else None
    rho = load_document(args.state) if args.state else None
    p = load_document(args.probs) if args.probs else None
    if rho is None and p is None:
        raise SicProbError("born requires --state or --probs")
    if rho is None and sic is not None:
        rho = probs_to_state(p, sic)
    if p is None and sic is not None:
        p = state_to_probs(rho, sic)
    return rho, p, sic


def cmd_born(args, argv) -> int:
    started = time.perf_counter()
    povm = load_document(args.povm)
    rho, p, sic = _born_inputs(args)
    if args.method in ("urgleichung", "both", "ltp") and sic is None:
        raise SicProbError(f"--method {args.method} requires --sic")
    if args.method == "direct" and rho is None:
        raise SicProbError("--method direct requires --state (or --probs with --sic)")

    inputs = [path for path in (args.state, args.probs, args.povm, args.sic) if path]
    payload = {"kind": "born_report", "method": args.method}
    code = EXIT_OK

    if args.method in ("direct", "both"):
        direct = born_direct(rho, povm)
        payload["direct"] = [float(x) for x in direct.entries]
        _say(args, f"direct:      {_format_dist(direct.entries)}")
    if args.method in ("urgleichung", "both"):
        r = cond_prob_matrix(povm, sic)
        urgleichung = born_urgleichung(p, r, sic.dim)
        payload["urgleichung"] = [float(x) for x in urgleichung.entries]
        _say(args, f"urgleichung: {_format_dist(urgleichung.entries)}")
    if args.method == "both":
        deviation = float(np.max(np.abs(direct.entries - urgleichung.entries)))
        payload["max_deviation"] = deviation
        _say(args, f"max deviation: {deviation:.3e}")
        if deviation > args.tol:
            code = EXIT_VERIFY_FAILED
    if args.method == "ltp":
        r = cond_prob_matrix(povm, sic)
        classical = classical_ltp(p, r)
        deviation = ltp_deviation(p, r, sic.dim)
        payload["ltp"] = [float(x) for x in classical.entries]
        payload["ltp_deviation"] = deviation
        _say(args, f"classical:   {_format_dist(classical.entries)}")
        _say(args, f"ltp deviation: {deviation:.6e}")

    if args.out:
        payload["manifest"] = _manifest(argv, None, inputs, started)
        write_json_atomic(args.out, payload)
    return code


def cmd_simulate(args, argv) -> int:
    started = time.perf_counter()
    circuit = load_document(args.circuit)
    sic = _load_sic(args.sic)
    inputs = [args.circuit, args.sic]

    if args.track == "both":
        report = run_dual(circuit, sic)
        _say(args, f"amplitude:   {_format_dist(report.amplitude_outcome.entries)}")
        _say(args, f"probability: {_format_dist(report.probability_outcome.entries)}")
        _say(args, f"max deviation: {report.max_abs_deviation:.3e}")
        if args.report:
            payload = track_report_to_json(report)
            payload["manifest"] = _manifest(argv, None, inputs, started)
            write_json_atomic(args.report, payload)
        return EXIT_OK if report.max_abs_deviation <= args.tol else EXIT_VERIFY_FAILED

    from .probability import ProbVector
    from .quantum import DensityMatrix

    if args.track == "amplitude":
        rho = circuit.initial if isinstance(circuit.initial, DensityMatrix) else probs_to_state(circuit.initial, sic)
        for step in circuit.steps:
            rho = evolve_state(rho, step.unitary)
        if circuit.final_measurement == SIC_READOUT:
            outcome = make_distribution(state_to_probs(rho, sic).entries)
        else:
            outcome = born_direct(rho, circuit.final_measurement)
    else:
        p = circuit.initial if isinstance(circuit.initial, ProbVector) else state_to_probs(circuit.initial, sic)
        if isinstance(circuit.initial, ProbVector):
            probs_to_state(p, sic)  # reject initial vectors outside the state space
        for step in circuit.steps:
            p = evolve_probs(p, step.unitary, sic)
        if circuit.final_measurement == SIC_READOUT:
            outcome = make_distribution(p.entries)
        else:
            outcome = born_urgleichung(p, cond_prob_matrix(circuit.final_measurement, sic), sic.dim)

    _say(args, f"{args.track}: {_format_dist(outcome.entries)}")
    if args.report:
        payload = {
            "kind": "track_outcome",
            "track": args.track,
            "entries": [float(x) for x in outcome.entries],
            "manifest": _manifest(argv, None, inputs, started),
        }
        write_json_atomic(args.report, payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sicprob",
        description="SIC-POVM toolkit: states as probability vectors, Born rule both ways.",
    )
    parser.add_argument("--version", action="version", version=f"sicprob {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    sic_cmd = commands.add_parser("sic", help="find or verify SIC structures")
    sic_sub = sic_cmd.add_subparsers(dest="sic_command", required=True)

    find = sic_sub.add_parser("find", help="search for a SIC fiducial")
    find.add_argument("--dim", type=int, required=True)
    find.add_argument("--seed", type=int, default=0)
    find.add_argument("--restarts", type=int, default=64)
    find.add_argument("--iterations", type=int, default=20000)
    find.add_argument("--target", type=float, default=1e-9)
    find.add_argument("--jobs", type=int, default=1)
    find.add_argument("--out", default=None)
    find.add_argument("--quiet", action="store_true")
    find.set_defaults(handler=cmd_sic_find)

    verify = sic_sub.add_parser("verify", help="check a SIC or fiducial file")
    verify.add_argument("--in", dest="infile", required=True)
    verify.add_argument("--tol", type=float, default=CERTIFIED_RESIDUAL)
    verify.add_argument("--quiet", action="store_true")
    verify.set_defaults(handler=cmd_sic_verify)

    convert = commands.add_parser("convert", help="convert states <-> probability vectors")
    convert.add_argument("--to", choices=("probs", "state"), required=True)
    convert.add_argument("--in", dest="infile", required=True)
    group = convert.add_mutually_exclusive_group(required=True)
    group.add_argument("--sic", default=None)
    group.add_argument("--mic", default=None)
    convert.add_argument("--out", default=None)
    convert.add_argument("--quiet", action="store_true")
    convert.set_defaults(handler=cmd_convert)

    born = commands.add_parser("born", help="evaluate the Born rule")
    born.add_argument("--state", default=None)
    born.add_argument("--probs", default=None)
    born.add_argument("--povm", required=True)
    born.add_argument("--sic", default=None)
    born.add_argument("--method", choices=("direct", "urgleichung", "both", "ltp"), required=True)
    born.add_argument("--tol", type=float, default=1e-9)
    born.add_argument("--out", default=None)
    born.add_argument("--quiet", action="store_true")
    born.set_defaults(handler=cmd_born)

    simulate = commands.add_parser("simulate", help="run a circuit on both tracks")
    simulate.add_argument("--circuit", required=True)
    simulate.add_argument("--sic", required=True)
    simulate.add_argument("--track", choices=("amplitude", "probability", "both"), default="both")
    simulate.add_argument("--tol", type=float, default=1e-9)
    simulate.add_argument("--report", default=None)
    simulate.add_argument("--quiet", action="store_true")
    simulate.set_defaults(handler=cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args, argv)
    except SicProbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
