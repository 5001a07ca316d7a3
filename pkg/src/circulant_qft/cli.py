"""Experiment runner: JSON config in, CSV (and optional SVG) out.

Subcommands: eigentraj, evolve, adiabaticity, qpe, models, sweep.  Each
run writes CSV files with a fixed 12-significant-digit float format plus
a .meta.json sidecar echoing the config, so identical configs produce
byte-identical outputs.  Exit codes: 0 success, 2 config error,
3 numerical failure, 4 violated physics precondition.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, svg
from .circulant import CirculantSpec, circulant_eigenvalues, phase_equivalent_circulant
from .errors import (
    AmbiguousPermutationError,
    BranchTrackingError,
    ConfigError,
    CouplingPatternError,
    DegenerateSpectrumError,
    EigenConvergenceError,
    IntegrationError,
    NonHermitianError,
    NotPhaseEquivalentError,
)
from .models import build_four_level, build_six_level, solve_level_shifts
from .propagator import dynamical_phase_prediction, evolve, factor_phased_dft
from .qpe import ideal_distribution, run_qpe, to_bits
from .schedule import (
    FORWARD,
    Schedule,
    SechMaskedPair,
    TanhPair,
    adiabaticity_report,
    eigen_trajectories,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_PHYSICS = 4

_CONFIG_ERRORS = (ConfigError,)
_NUMERICAL_ERRORS = (IntegrationError, EigenConvergenceError)
_PHYSICS_ERRORS = (
    DegenerateSpectrumError,
    NotPhaseEquivalentError,
    CouplingPatternError,
    AmbiguousPermutationError,
    BranchTrackingError,
    NonHermitianError,
)


def _fmt(x):
    return f"{float(x):.12g}"


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(c) if isinstance(c, str) else _fmt(c)
                              for c in row) + "\n")


def write_meta(path, command, config):
    meta = {"artifact_version": __version__, "command": command,
            "config": config}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_config(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return cfg


def _check_keys(section, mapping, allowed, required):
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise ConfigError(f"{section}: unknown key(s) {', '.join(unknown)}")
    missing = sorted(set(required) - set(mapping))
    if missing:
        raise ConfigError(f"{section}: missing required key(s) {', '.join(missing)}")


def _as_complex(section, value):
    if isinstance(value, (int, float)):
        return complex(value)
    if (isinstance(value, list) and len(value) == 2
            and all(isinstance(v, (int, float)) for v in value)):
        return complex(value[0], value[1])
    raise ConfigError(f"{section}: expected a number or [re, im] pair, got {value!r}")


def _as_matrix(section, rows):
    if not isinstance(rows, list) or not rows:
        raise ConfigError(f"{section}: expected a list of rows")
    mat = [[_as_complex(f"{section}[{i}][{j}]", v) for j, v in enumerate(row)]
           for i, row in enumerate(rows)]
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ConfigError(f"{section}: matrix must be square")
    return np.array(mat, dtype=np.complex128)


def build_model(cfg):
    """(H0, H1) from the config's model section."""
    model = cfg.get("model")
    if not isinstance(model, dict):
        raise ConfigError("model: expected an object with a 'kind' key")
    kind = model.get("kind")
    if kind == "four_level":
        _check_keys("model", model, ["kind", "E", "V"], ["kind", "E", "V"])
        if not isinstance(model["E"], (int, float)) or model["E"] <= 0:
            raise ConfigError("model.E: expected a positive number")
        return build_four_level(float(model["E"]), _as_complex("model.V", model["V"]))
    if kind == "six_level":
        _check_keys("model", model,
                    ["kind", "omega1", "omega2", "h0_diag"],
                    ["kind", "omega1", "omega2", "h0_diag"])
        h1 = build_six_level(_as_complex("model.omega1", model["omega1"]),
                             _as_complex("model.omega2", model["omega2"]))
        diag = model["h0_diag"]
        if not (isinstance(diag, list) and len(diag) == 6
                and all(isinstance(v, (int, float)) for v in diag)):
            raise ConfigError("model.h0_diag: expected 6 real numbers")
        return np.diag(np.array(diag, dtype=np.complex128)), h1
    if kind == "custom":
        _check_keys("model", model, ["kind", "h0", "h1"], ["kind", "h0", "h1"])
        return _as_matrix("model.h0", model["h0"]), _as_matrix("model.h1", model["h1"])
    raise ConfigError(
        f"model.kind: expected four_level, six_level or custom, got {kind!r}"
    )


def build_pulses(cfg):
    pulses = cfg.get("pulses")
    if not isinstance(pulses, dict):
        raise ConfigError("pulses: expected an object with a 'kind' key")
    kind = pulses.get("kind")
    try:
        if kind == "tanh":
            _check_keys("pulses", pulses, ["kind", "T"], ["kind", "T"])
            return TanhPair(T=float(pulses["T"]))
        if kind == "sech_masked":
            _check_keys("pulses", pulses, ["kind", "T", "tau"], ["kind", "T", "tau"])
            return SechMaskedPair(T=float(pulses["T"]), tau=float(pulses["tau"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"pulses: {exc}") from exc
    raise ConfigError(f"pulses.kind: expected tanh or sech_masked, got {kind!r}")


def build_schedule(cfg, default_direction=FORWARD, steps_override=None):
    h0, h1 = build_model(cfg)
    pulses = build_pulses(cfg)
    direction = cfg.get("direction", default_direction)
    window = cfg.get("window")
    if window is not None:
        if not (isinstance(window, list) and len(window) == 2
                and all(isinstance(v, (int, float)) for v in window)):
            raise ConfigError("window: expected [t_min, t_max]")
        window = (float(window[0]), float(window[1]))
    steps = steps_override if steps_override is not None else cfg.get("steps", 4000)
    if not isinstance(steps, int) or steps < 1:
        raise ConfigError(f"steps: expected a positive integer, got {steps!r}")
    try:
        return Schedule(pulses=pulses, h0=h0, h1=h1, direction=direction,
                        window=window, steps=steps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


_COMMON_KEYS = ["model", "pulses", "window", "steps", "direction"]


def cmd_eigentraj(cfg, args):
    _check_keys("config", cfg, _COMMON_KEYS, ["model", "pulses"])
    sched = build_schedule(cfg, steps_override=args.steps)
    traj = eigen_trajectories(sched)
    n = traj.energies.shape[1]
    out = Path(args.out)
    header = ["t"] + [f"eps_{k}" for k in range(n)]
    rows = [[t, *row] for t, row in zip(traj.times, traj.energies)]
    write_csv(out / "eigentraj.csv", header, rows)
    write_meta(out / "eigentraj.meta.json", "eigentraj", cfg)
    if args.svg:
        svg.write_line_plot(
            out / "eigentraj.svg", traj.times,
            {f"eps_{k}": traj.energies[:, k] for k in range(n)},
            title="Instantaneous eigenvalues", xlabel="t", ylabel="energy",
        )
    print(f"eigentraj: {len(traj.times)} points, "
          f"min gap {_fmt(traj.min_gap)} at t = {_fmt(traj.min_gap_time)}")
    return EXIT_OK


def cmd_evolve(cfg, args):
    _check_keys("config", cfg, _COMMON_KEYS, ["model", "pulses"])
    sched = build_schedule(cfg, steps_override=args.steps)
    result = evolve(sched)
    factorization = factor_phased_dft(result.u_final, sched.direction)
    predicted = dynamical_phase_prediction(sched)

    out = Path(args.out)
    n = result.dim
    rows = [
        [str(i), str(j), np.abs(result.u_final[i, j]),
         np.angle(result.u_final[i, j])]
        for i in range(n) for j in range(n)
    ]
    write_csv(out / "propagator.csv", ["row", "col", "modulus", "phase"], rows)
    write_csv(
        out / "factorization.csv",
        ["n", "sigma", "alpha", "alpha_predicted"],
        [[str(k), str(int(factorization.sigma[k])), factorization.alpha[k],
          predicted[k]] for k in range(n)],
    )
    write_meta(out / "propagator.meta.json", "evolve", cfg)
    print(f"evolve: unitarity drift {result.unitarity_drift:.3e}, "
          f"convergence estimate {result.convergence_estimate:.3e}")
    print(f"factorization residual {factorization.residual:.6f}, "
          f"sigma {factorization.sigma.tolist()}")
    return EXIT_OK


def cmd_adiabaticity(cfg, args):
    _check_keys("config", cfg, _COMMON_KEYS, ["model", "pulses"])
    sched = build_schedule(cfg, steps_override=args.steps)
    report = adiabaticity_report(sched)
    out = Path(args.out)
    rows = [[t, g, c] for t, g, c in
            zip(report.times, report.gap_trace, report.coupling_trace)]
    write_csv(out / "adiabaticity.csv", ["t", "min_gap", "max_coupling"], rows)
    write_meta(out / "adiabaticity.meta.json", "adiabaticity", cfg)
    print(f"adiabaticity: min gap {_fmt(report.min_gap)}, "
          f"max coupling {_fmt(report.max_coupling)}, "
          f"margin {_fmt(report.margin)} (1/T = {_fmt(report.rate_scale)})")
    for t, message in report.degeneracy_warnings[:5]:
        print(f"  degeneracy at t = {_fmt(t)}: {message}")
    return EXIT_OK


def cmd_qpe(cfg, args):
    _check_keys("config", cfg,
                ["model", "pulses", "window", "steps", "phi", "r", "shots"],
                ["model", "pulses", "phi", "r"])
    h0, h1 = build_model(cfg)
    pulses = build_pulses(cfg)
    phi = cfg["phi"]
    r = cfg["r"]
    if not isinstance(phi, (int, float)) or not 0 <= phi < 1:
        raise ConfigError(f"phi: expected a number in [0, 1), got {phi!r}")
    if not isinstance(r, int) or r < 1:
        raise ConfigError(f"r: expected a positive integer, got {r!r}")
    shots = cfg.get("shots", 0)
    if not isinstance(shots, int) or shots < 0:
        raise ConfigError(f"shots: expected a nonnegative integer, got {shots!r}")
    window = cfg.get("window")
    if window is not None:
        window = (float(window[0]), float(window[1]))
    steps = args.steps if args.steps is not None else cfg.get("steps", 4000)

    result = run_qpe(phi, r, h0, h1, pulses, window=window, steps=steps,
                     shots=shots or None, seed=args.seed)

    out = Path(args.out)
    f_vals, g_vals = pulses.values(result.fidelity_times)
    write_csv(
        out / "qpe_trace.csv", ["t", "f", "g", "fidelity"],
        [[t, fv, gv, p] for t, fv, gv, p in
         zip(result.fidelity_times, f_vals, g_vals, result.fidelity_trace)],
    )
    n = len(result.distribution)
    dist_header = ["value", "bits", "raw_probability", "relabeled_probability"]
    dist_rows = []
    for k in range(n):
        bits = "".join(str(b) for b in to_bits(k / n, r)[0])
        row = [str(k), bits, result.distribution[k],
               result.relabeled_distribution[k]]
        if result.counts is not None:
            row.append(str(int(result.counts[k])))
        dist_rows.append(row)
    if result.counts is not None:
        dist_header.append("counts")
    write_csv(out / "qpe_distribution.csv", dist_header, dist_rows)
    write_meta(out / "qpe_trace.meta.json", "qpe", cfg)
    if args.svg:
        svg.write_line_plot(out / "qpe_pulses.svg", result.fidelity_times,
                            {"f": f_vals, "g": g_vals},
                            title="Field functions", xlabel="t", ylabel="amplitude")
        svg.write_line_plot(out / "qpe_fidelity.svg", result.fidelity_times,
                            {"fidelity": result.fidelity_trace},
                            title="Phase estimation fidelity", xlabel="t",
                            ylabel="probability")

    # sigma maps basis -> DFT column; the oracle wants its inverse
    sigma_inv = np.empty_like(result.sigma)
    sigma_inv[result.sigma] = np.arange(n)
    ideal = ideal_distribution(phi, r, sigma=sigma_inv)
    tv = 0.5 * float(np.abs(ideal - result.relabeled_distribution).sum())

    bits_str = "".join(str(b) for b in result.top_bits)
    target_str = "".join(str(b) for b in result.target_bits)
    print(f"qpe: phi = {_fmt(phi)}, recovered bits {bits_str} "
          f"(target {target_str}, "
          f"{'exact' if result.exact_expansion else 'nearest'} expansion)")
    if not result.exact_expansion:
        target_value = int(target_str, 2)
        print(f"  phi has no exact {r}-bit expansion; nearest bits carry "
              f"probability {_fmt(result.relabeled_distribution[target_value])}")
    print(f"  final fidelity {_fmt(result.final_fidelity)}, "
          f"total variation vs ideal oracle {_fmt(tv)}")
    if result.counts is not None:
        print(f"  sampled counts ({shots} shots): {result.counts.tolist()}")
    return EXIT_OK


def cmd_models(cfg, args):
    _check_keys("config", cfg, ["model"], ["model"])
    h0, h1 = build_model(cfg)
    out = Path(args.out)
    write_meta(out / "models.meta.json", "models", cfg)
    np.set_printoptions(precision=6, suppress=True, linewidth=120)
    print("H0 diagonal:", np.diag(h0).real.tolist())
    print("H1:")
    print(h1)

    kind = cfg["model"].get("kind")
    if kind == "four_level":
        energy = float(cfg["model"]["E"])
        lam = circulant_eigenvalues_of(h1)
        print("circulant eigenvalues (index order):", _round_list(lam))
        shifts = solve_level_shifts(energy)
        ez, gs, es = shifts.as_floats()
        print(f"level shifts realizing H0: E_Z = {_fmt(ez)}, "
              f"E_gS = {_fmt(gs)}, E_eS = {_fmt(es)}")
        print(f"  shift equation residuals: "
              f"{[_fmt(x) for x in shifts.equation_residuals()]}")
    elif kind == "six_level":
        beta, spec, residual = phase_equivalent_circulant(h1)
        print(f"gauge phases beta: {_round_list(beta)}")
        print(f"circulant first column: {_round_list(spec.first_column)}")
        print(f"gauge residual: {residual:.3e}")
        lam = np.sort(circulant_eigenvalues(spec).real)
        print(f"circulant spectrum (sorted): {_round_list(lam)}")
        gaps = np.diff(lam)
        if gaps.size and gaps.min() < 1e-9 * max(np.abs(lam).max(), 1e-300):
            print("  note: spectrum is degenerate for every choice of the "
                  "Rabi phases (the ring's loop product has a fixed argument)")
    return EXIT_OK


def circulant_eigenvalues_of(h1):
    return circulant_eigenvalues(CirculantSpec(np.asarray(h1)[:, 0].copy())).real


def _round_list(values):
    return [complex(np.round(v, 9)) if np.iscomplexobj(values) else round(float(v), 9)
            for v in np.asarray(values)]


def cmd_sweep(cfg, args):
    _check_keys(
        "config", cfg,
        ["pulses", "et_values", "v_over_e", "phi", "r", "window", "steps"],
        ["pulses", "et_values"],
    )
    pulses = build_pulses(cfg)
    ets = cfg["et_values"]
    if not (isinstance(ets, list) and ets
            and all(isinstance(v, (int, float)) and v > 0 for v in ets)):
        raise ConfigError("et_values: expected a list of positive numbers")
    v_over_e = _as_complex("v_over_e", cfg.get("v_over_e", [1.0, 1.0 / 3.0]))
    phi = cfg.get("phi", 0.75)
    r = cfg.get("r", 2)
    steps = args.steps if args.steps is not None else cfg.get("steps", 4000)
    window = cfg.get("window")
    if window is not None:
        window = (float(window[0]), float(window[1]))

    t_scale = pulses.crossing_time()
    rows = []
    for et in ets:
        energy = float(et) / t_scale
        h0, h1 = build_four_level(energy, energy * v_over_e)
        sched = Schedule(pulses=pulses, h0=h0, h1=h1, direction=FORWARD,
                         window=window, steps=steps)
        res = evolve(sched)
        factorization = factor_phased_dft(res.u_final, FORWARD)
        qpe_res = run_qpe(phi, r, h0, h1, pulses, window=window, steps=steps)
        rows.append([float(et), factorization.residual, qpe_res.final_fidelity])
        print(f"sweep: E*T = {_fmt(et)} -> residual {_fmt(factorization.residual)}, "
              f"fidelity {_fmt(qpe_res.final_fidelity)}")

    out = Path(args.out)
    write_csv(out / "sweep.csv", ["et", "residual", "final_fidelity"], rows)
    write_meta(out / "sweep.meta.json", "sweep", cfg)
    return EXIT_OK


_COMMANDS = {
    "eigentraj": cmd_eigentraj,
    "evolve": cmd_evolve,
    "adiabaticity": cmd_adiabaticity,
    "qpe": cmd_qpe,
    "models": cmd_models,
    "sweep": cmd_sweep,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="circulant-qft",
        description="Adiabatic synthesis of phased Fourier transforms from "
                    "circulant Hamiltonians: trajectories, propagators, "
                    "phase estimation.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("eigentraj", "instantaneous eigenvalue trajectories over the window"),
        ("evolve", "integrate the propagator and factor it as a phased DFT"),
        ("adiabaticity", "gap vs nonadiabatic-coupling diagnostics"),
        ("qpe", "phase estimation via the simulated inverse transform"),
        ("models", "build and inspect the model Hamiltonians"),
        ("sweep", "factorization residual and fidelity across E*T values"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--svg", action="store_true", help="also write SVG plots")
        p.add_argument("--steps", type=int, default=None,
                       help="override integrator step count")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for sampled measurements (qpe only)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](cfg, args)
    except _CONFIG_ERRORS as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except _PHYSICS_ERRORS as exc:
        print(f"physics precondition violated: {exc}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
