"""Command line interface.

Subcommands: verify (self-check suites), sweep (analytic fringe tables),
mc (seeded Monte Carlo counting), stokes (state observables), synth (plate
synthesis for trit transitions), info (conventions and defaults).

Exit codes: 0 success, 1 verification failure, 2 usage/config error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import replace

import numpy as np
import yaml

from . import __version__, io, observables, qutrit, synthesis, verify
from .errors import ConfigError
from .experiment import SourceSpec, simulate_counts, source_state, sweep
from .optics import PlateSpec
from .qutrit import TRIT_DIGITS

_ANGLE_RE = re.compile(r"^([+-]?[\d.]*)\s*pi\s*(?:/\s*([\d.]+))?$")


def parse_angle(text: str, degrees: bool = False) -> float:
    """Parse an angle: plain number (radians, or degrees with --deg) or a
    'pi' expression such as 'pi', '-pi/2', '3pi/8'."""
    text = text.strip().lower()
    match = _ANGLE_RE.match(text)
    if match:
        num = match.group(1)
        coeff = float(num) if num not in ("", "+", "-") else float(num + "1")
        return coeff * np.pi / (float(match.group(2)) if match.group(2) else 1.0)
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}") from None
    return np.deg2rad(value) if degrees else value


def _echo_config(cfg) -> None:
    print(yaml.safe_dump({"resolved_config": io.config_to_mapping(cfg)}, sort_keys=False), end="")


def _apply_overrides(cfg, args):
    source = cfg.source
    plate = cfg.plate
    deg = getattr(args, "deg", False)
    if args.phi is not None:
        source = replace(source, phase=parse_angle(args.phi, deg))
    if args.t20 is not None:
        source = replace(source, t20=args.t20)
    if args.t02 is not None:
        source = replace(source, t02=args.t02)
    if args.jitter is not None:
        source = replace(source, phase_jitter=args.jitter)
    if args.pair_rate is not None:
        source = replace(source, pair_rate=args.pair_rate)
    if args.chi is not None:
        plate = replace(plate, angle=parse_angle(args.chi, deg))
    if args.retardance is not None:
        plate = replace(plate, retardance=io._parse_retardance(args.retardance))
    cfg = replace(cfg, source=source, plate=plate)
    if args.analysis is not None:
        cfg = replace(cfg, analysis=args.analysis)
    if args.eta1 is not None:
        cfg = replace(cfg, eta1=args.eta1)
    if args.eta2 is not None:
        cfg = replace(cfg, eta2=args.eta2)
    if args.accidental_rate is not None:
        cfg = replace(cfg, accidental_rate=args.accidental_rate)
    return cfg


def _add_override_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--phi", help="override source phase (radians or 'pi' form)")
    parser.add_argument("--chi", help="override plate angle")
    parser.add_argument("--retardance", help="override plate retardance ('half', 'quarter' or radians)")
    parser.add_argument("--analysis", choices=["none", "x", "y"], help="override analysis block")
    parser.add_argument("--eta1", type=float, help="override detector 1 efficiency")
    parser.add_argument("--eta2", type=float, help="override detector 2 efficiency")
    parser.add_argument("--pair-rate", dest="pair_rate", type=float, help="override pair rate (1/s)")
    parser.add_argument(
        "--accidental-rate", dest="accidental_rate", type=float, help="override accidental rate (1/s)"
    )
    parser.add_argument("--t20", type=float, help="override |2,0> arm amplitude transmission")
    parser.add_argument("--t02", type=float, help="override |0,2> arm amplitude transmission")
    parser.add_argument("--jitter", type=float, help="override source phase jitter (radians)")
    parser.add_argument("--deg", action="store_true", help="interpret numeric angles as degrees")


def cmd_verify(args) -> int:
    print(f"triphot verify: grid {args.grid}x{args.grid}, {args.samples} samples, seed {args.seed}")
    results = verify.run_checks(args.grid, args.samples, args.seed)
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"  {res.name:<46} max residual {res.residual:.3e}  tol {res.tol:.0e}  {status}")
    if all(res.passed for res in results):
        print("verification PASSED")
        return 0
    print("verification FAILED")
    return 1


def cmd_sweep(args) -> int:
    cfg = _apply_overrides(io.load_config(args.config), args)
    deg = args.deg
    start = parse_angle(args.start, deg) if args.start is not None else 0.0
    if args.stop is not None:
        stop = parse_angle(args.stop, deg)
    else:
        stop = 2.0 * np.pi if args.param == "phi" else np.pi
    table = sweep(cfg, args.param, start, stop, args.steps)
    _echo_config(cfg)
    print(f"sweep: {args.param} from {start:.12g} to {stop:.12g} in {args.steps} steps")
    if args.output.endswith((".yaml", ".yml")):
        io.write_sweep_yaml(table, args.output)
    else:
        io.write_sweep_csv(table, args.output)
    print(f"wrote {args.output}")
    return 0


def cmd_mc(args) -> int:
    cfg = _apply_overrides(io.load_config(args.config), args)
    records = simulate_counts(cfg, args.seed, args.duration, args.bin)
    _echo_config(cfg)
    run_meta = {"seed": args.seed, "duration": args.duration, "bin": args.bin}
    print(f"mc: {len(records)} bins, run {run_meta}")
    total = sum(r.coincidences for r in records)
    print(f"total coincidences: {total} (mean rate {total / (len(records) * args.bin):.6g}/s)")
    if args.output.endswith((".yaml", ".yml")):
        io.write_counts_yaml(records, cfg, args.output, run_meta)
    else:
        io.write_counts_csv(records, cfg, args.output, run_meta)
    print(f"wrote {args.output}")
    return 0


_FOCK_NAMES = {(2, 0): 0, (1, 1): 1, (0, 2): 2}


def parse_state(text: str) -> np.ndarray:
    """State spec: trit label ('psi_plus', 'minus', ...), Fock pair 'Nx,Ny',
    or three comma-separated complex amplitudes (normalized automatically)."""
    text = text.strip()
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        label = parts[0].lower().removeprefix("psi_")
        if label in TRIT_DIGITS:
            return qutrit.trit_basis(label)
        raise ConfigError(f"unknown state label {text!r}")
    if len(parts) == 2:
        try:
            pair = (int(parts[0]), int(parts[1]))
        except ValueError:
            raise ConfigError(f"Fock state must be two integers, got {text!r}") from None
        if pair not in _FOCK_NAMES:
            raise ConfigError(f"Fock occupation must be one of 2,0 / 1,1 / 0,2, got {text!r}")
        return qutrit.fock_basis(_FOCK_NAMES[pair])
    if len(parts) == 3:
        try:
            amps = [complex(p) for p in parts]
        except ValueError:
            raise ConfigError(f"cannot parse amplitudes {text!r} (use e.g. '1,0,0.5+0.5j')") from None
        return qutrit.make_state(*amps)
    raise ConfigError(f"cannot parse state {text!r}")


def cmd_stokes(args) -> int:
    state = parse_state(args.state)
    vec = observables.stokes(state)
    corr = observables.correlators(state)
    amps = ", ".join(f"{c.real:+.6f}{c.imag:+.6f}j" for c in state)
    print(f"state amplitudes (c1, c2, c3): [{amps}]")
    print(f"stokes: s0={vec.s0:.12g} s1={vec.s1:.12g} s2={vec.s2:.12g} s3={vec.s3:.12g}")
    print(f"degree of polarization P = {observables.degree_of_polarization(state):.12g}")
    print(f"correlators: gxy={corr.gxy:.12g} gxx={corr.gxx:.12g} gyy={corr.gyy:.12g}")
    return 0


_PLATE_NAMES = {"hwp": np.pi, "qwp": np.pi / 2, "free": synthesis.FREE}


def _plate_name(retardance: float) -> str:
    if abs(retardance - np.pi) < 1e-12:
        return "half-wave"
    if abs(retardance - np.pi / 2) < 1e-12:
        return "quarter-wave"
    return f"retardance {retardance:.9g} rad"


def cmd_synth(args) -> int:
    match = re.match(r"^\s*(\w+)\s*(?:->|→)\s*(\w+)\s*$", args.transition)
    if not match:
        raise ConfigError(
            f"cannot parse transition {args.transition!r} (expected e.g. 'minus->zero')"
        )
    labels = []
    for raw in match.groups():
        label = raw.lower().removeprefix("psi_")
        if label not in TRIT_DIGITS:
            raise ConfigError(f"unknown trit label {raw!r} (use plus, minus or zero)")
        labels.append(label)
    input_state = qutrit.trit_basis(labels[0])
    target = qutrit.trit_basis(labels[1])

    plates = [p.strip().lower() for p in args.plates.split(",")]
    unknown = [p for p in plates if p not in _PLATE_NAMES]
    if unknown:
        raise ConfigError(f"unknown plate kind(s) {unknown} (use hwp, qwp or free)")
    retardances = []
    for p in plates:
        if _PLATE_NAMES[p] not in retardances:
            retardances.append(_PLATE_NAMES[p])

    # Source-phase handling: an explicit --phi pins the input to the matching
    # source setting; '--phi free' (the default for plus/minus inputs) lets
    # the search retune the source phase alongside the plates.
    optimize_phase = False
    if args.phi is None:
        optimize_phase = labels[0] in ("plus", "minus")
    elif args.phi.strip().lower() == "free":
        optimize_phase = True
    else:
        phi = parse_angle(args.phi, args.deg)
        pinned = source_state(SourceSpec(phase=phi))
        if not qutrit.states_equal(pinned, input_state, tol=1e-9):
            raise ConfigError(
                f"--phi {args.phi} prepares a source state inconsistent with input "
                f"'{labels[0]}' (expected phi = 0 for plus, pi for minus)"
            )
    if optimize_phase and labels[0] == "zero":
        raise ConfigError("source-phase optimization needs a plus or minus input")

    problem = synthesis.SynthesisProblem(
        input_state=input_state,
        target=target,
        budget=len(plates),
        retardances=tuple(retardances),
        optimize_source_phase=optimize_phase,
    )
    result = synthesis.synthesize(problem, args.grid_density, args.tol, args.seed)
    print(f"transition: {labels[0]} -> {labels[1]} (budget {len(plates)}, plates {args.plates})")
    for k, spec in enumerate(result.plates, start=1):
        print(f"  plate {k}: {_plate_name(spec.retardance)} at chi = {spec.angle:.9f} rad")
    if result.source_phase is not None:
        print(f"  source phase phi = {result.source_phase:.9f} rad")
    print(f"fidelity: {result.fidelity:.15f}")
    print(f"reachability: {synthesis.reachability_report(problem, result)}")
    print(f"objective evaluations: {result.evaluations}")
    return 0


def cmd_info(args) -> int:
    print(f"triphot {__version__}")
    print("basis: |2,0>, |1,1>, |0,2> (photon counts in x and y polarization modes)")
    print("trit basis: psi_plus = (|2,0>+|0,2>)/sqrt2, psi_minus = (|2,0>-|0,2>)/sqrt2, psi_zero = |1,1>")
    digits = ", ".join(f"{label} -> {digit}" for label, digit in TRIT_DIGITS.items())
    print(f"ternary digit assignment: {digits}")
    print("retarder convention: J = R(chi) diag(e^{+i d/2}, e^{-i d/2}) R(-chi),")
    print("  pinned by the quarter-wave interference law at chi=pi/8, phi=pi/2")
    print("angles: radians everywhere (CLI accepts 'pi' forms and --deg)")
    print("parallelism: single-threaded vectorized kernels; TRIPHOT_THREADS caps are honored trivially")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triphot",
        description="Polarization qutrit simulator for collinear photon pairs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the closed-form, lift-oracle and invariance suites")
    p.add_argument("--grid", type=int, default=101, help="grid points per axis (default 101)")
    p.add_argument("--samples", type=int, default=1000, help="random samples per suite (default 1000)")
    p.add_argument("--seed", type=int, default=12345)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="write an analytic rate sweep as CSV (or YAML)")
    p.add_argument("config", help="experiment config file (YAML)")
    p.add_argument("--param", choices=["phi", "chi"], required=True)
    p.add_argument("--start", help="sweep start (default 0)")
    p.add_argument("--stop", help="sweep stop (default 2pi for phi, pi for chi)")
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("-o", "--output", required=True)
    _add_override_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mc", help="simulate binned coincidence counting")
    p.add_argument("config", help="experiment config file (YAML)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--duration", type=float, required=True, help="simulated seconds")
    p.add_argument("--bin", type=float, default=1.0, help="bin width in seconds")
    p.add_argument("-o", "--output", required=True)
    _add_override_flags(p)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("stokes", help="print Stokes parameters, P and correlators of a state")
    p.add_argument("state", help="trit label, 'Nx,Ny' Fock pair, or three complex amplitudes")
    p.set_defaults(func=cmd_stokes)

    p = sub.add_parser("synth", help="search plate settings for a trit transition")
    p.add_argument("transition", help="e.g. 'minus->zero'")
    p.add_argument("--plates", default="hwp", help="comma list per plate: hwp, qwp or free")
    p.add_argument("--phi", help="source phase: radians, 'pi' forms, or 'free' (default: free for plus/minus)")
    p.add_argument("--grid-density", dest="grid_density", type=int, default=24)
    p.add_argument("--tol", type=float, default=1e-8, help="refinement tolerance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--deg", action="store_true", help="interpret numeric angles as degrees")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("info", help="print version and conventions")
    p.set_defaults(func=cmd_info)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
