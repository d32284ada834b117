"""Command-line front end.

Exit codes: 0 success, 1 bad configuration, 2 numerical failure,
3 expansion/RK4 disagreement in crosscheck mode, 4 model not in block form.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import zoo
from .errors import ConditionFailed, InvalidModel, InvalidState, LindspectError, NotStructured, NumericalError
from .model import DensityMatrix, LindbladModel, fidelity, matrix_from_json, matrix_to_json, model_from_dict
from .spectral import (
    ModeClass,
    _g17,
    evolve_expansion,
    evolve_rk4,
    spectrum,
    spectrum_csv,
    spectrum_records,
    trajectory_csv,
)
from .structure import (
    BlockPartition,
    construct_modes,
    discover_partition,
    dissipator_residual,
    find_dfs,
    mode_residual,
    partition_from_dict,
    partition_to_dict,
    report_to_dict,
    solve_rstar,
    verify_block_form,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_MISMATCH, EXIT_UNSTRUCTURED = 0, 1, 2, 3, 4
CROSSCHECK_TOL = 1e-6
SPECTRUM_MATCH_TOL = 1e-8


class ConfigError(Exception):
    pass


# --- config parsing ---------------------------------------------------------

def _parse_assignments(items: Sequence[str], what: str) -> Dict[str, str]:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"{what} must look like key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _parse_params(items: Sequence[str]) -> Dict[str, float]:
    params = {}
    for k, v in _parse_assignments(items, "--param").items():
        try:
            params[k] = float(v)
        except ValueError:
            raise ConfigError(f"parameter {k} is not a number: {v!r}") from None
    return params


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None


def load_config_model(spec: str, params: Dict[str, float]) -> Tuple[LindbladModel, Optional[BlockPartition], Optional[str]]:
    """``(model, known partition, builtin name)`` from ``builtin:name`` or a JSON file."""
    if spec.startswith("builtin:"):
        name = spec[len("builtin:"):]
        model, part = zoo.build(name, params)
        return model, part, name
    data = _read_json(spec)
    if not isinstance(data, dict):
        raise ConfigError(f"{spec} must hold a JSON object")
    if "builtin" in data:
        merged = dict(data.get("params", {}))
        merged.update(params)
        model, part = zoo.build(data["builtin"], merged)
        return model, part, data["builtin"]
    if params:
        raise ConfigError("--param only applies to builtin models")
    try:
        model = model_from_dict(data)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed model file {spec}: {exc}") from None
    part = partition_from_dict(data["partition"]) if "partition" in data else None
    return model, part, None


def _positive(name: str, value: Optional[float]) -> Optional[float]:
    if value is not None and not (value > 0 and math.isfinite(value)):
        raise ConfigError(f"{name} must be a positive number")
    return value


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("LINDSPECT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ConfigError(f"LINDSPECT_SEED must be an integer, got {env!r}") from None


# --- output -----------------------------------------------------------------

def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", newline="") as fh:
        fh.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _complex_json(z: complex) -> List[float]:
    return [float(z.real), float(z.imag)]


def _info(args, line: str) -> None:
    """Summary lines go to stdout when data goes to a file, else to stderr."""
    stream = sys.stdout if args.out is not None else sys.stderr
    stream.write(line + "\n")
    stream.flush()


# --- commands ---------------------------------------------------------------

def cmd_spectrum(args) -> int:
    model, _, _ = load_config_model(args.model, _parse_params(args.param))
    spec = spectrum(model, eps_re=args.eps_re, eps_im=args.eps_im)
    if args.format == "json":
        counts = {c.value: k for c, k in spec.counts().items()}
        text = _json_text({"summary": counts, "modes": spectrum_records(spec)})
    else:
        text = spectrum_csv(spec)
    _emit(text, args.out)
    _info(args, spec.summary())
    return EXIT_OK


def _initial_state(args, model, partition) -> DensityMatrix:
    label = args.state
    if label is None:
        raise ConfigError("evolve needs --state (a named state or a JSON matrix file)")
    if label in zoo.INITIAL_STATES:
        return zoo.initial_state(label, model, partition)
    data = _read_json(label)
    mat = data["matrix"] if isinstance(data, dict) else data
    try:
        return DensityMatrix(matrix_from_json(mat))
    except ValueError as exc:
        raise ConfigError(f"bad state file {label}: {exc}") from None


def _time_grid(args) -> Tuple[np.ndarray, int]:
    t_end = args.t_end
    if not (t_end >= 0 and math.isfinite(t_end)):
        raise ConfigError("--t-end must be a non-negative number")
    if args.samples < 2:
        raise ConfigError("--samples must be at least 2")
    intervals = args.samples - 1
    stride = t_end / intervals
    per = int(round(stride / args.dt)) if t_end > 0 else 1
    if t_end > 0 and (per < 1 or abs(per * args.dt - stride) > 1e-9 * max(1.0, stride)):
        raise ConfigError("the sample spacing t_end/(samples-1) must be an integer multiple of --dt")
    times = np.arange(args.samples) * stride
    return times, per


def cmd_evolve(args) -> int:
    _positive("--dt", args.dt)
    model, part, _ = load_config_model(args.model, _parse_params(args.param))
    rho0 = _initial_state(args, model, part)
    times, per = _time_grid(args)

    exp_states = rk_states = None
    if args.method in ("expansion", "crosscheck"):
        spec = spectrum(model, eps_re=args.eps_re, eps_im=args.eps_im)
        exp_states = [s.matrix for s in evolve_expansion(spec, rho0, times)]
    if args.method in ("rk4", "crosscheck"):
        n_steps = per * (len(times) - 1)
        traj = evolve_rk4(model, rho0, n_steps * args.dt, args.dt, record_every=per)
        rk_states = list(traj.states)

    primary = exp_states if exp_states is not None else rk_states
    fids = [fidelity(rho0, s) for s in primary]
    extra = {}
    status = EXIT_OK
    if args.method == "crosscheck":
        diff = [float(np.linalg.norm(a - b)) for a, b in zip(exp_states, rk_states)]
        extra = {"fidelity_rk4": [fidelity(rho0, s) for s in rk_states], "frobenius_diff": diff}
        if max(diff) > CROSSCHECK_TOL:
            status = EXIT_MISMATCH
    if args.format == "json":
        rows = [{"t": float(t), "fidelity": f} for t, f in zip(times, fids)]
        for k, vals in extra.items():
            for row, v in zip(rows, vals):
                row[k] = v
        text = _json_text({"method": args.method, "trajectory": rows})
    else:
        text = trajectory_csv(times, fids, extra)
    _emit(text, args.out)
    if status == EXIT_MISMATCH:
        sys.stderr.write(f"crosscheck failed: max Frobenius difference {max(extra['frobenius_diff']):.3e}\n")
    return status


def _resolve_partition(args, model, known) -> Tuple[Optional[BlockPartition], dict]:
    meta = {}
    if args.partition is not None:
        part = partition_from_dict(_read_json(args.partition))
        meta["partition_source"] = "file"
        return part, meta
    if args.discover is not None:
        opts = _parse_assignments(args.discover, "--discover")
        unknown = set(opts) - {"seed", "trials"}
        if unknown:
            raise ConfigError(f"unknown --discover options {sorted(unknown)}")
        try:
            seed = int(opts["seed"]) if "seed" in opts else _seed(args)
            trials = int(opts.get("trials", 20))
        except ValueError:
            raise ConfigError("--discover seed and trials must be integers") from None
        if trials < 1:
            raise ConfigError("--discover trials must be at least 1")
        meta.update({"partition_source": "discover", "seed": seed, "trials": trials})
        return discover_partition(model, trials=trials, seed=seed), meta
    if known is None:
        raise ConfigError("no partition: pass --partition FILE, --discover, or use a builtin with a known partition")
    meta["partition_source"] = "builtin"
    return known, meta


def cmd_check(args) -> int:
    model, known, _ = load_config_model(args.model, _parse_params(args.param))
    part, meta = _resolve_partition(args, model, known)
    if part is None:
        _emit(_json_text({**meta, "structured": False, "condition": "none", "omega": None, "partition": None}), args.out)
        sys.stderr.write("no block partition found\n")
        return EXIT_UNSTRUCTURED
    tol = args.tol
    try:
        report = verify_block_form(model, part, tol=tol)
    except NotStructured as exc:
        _emit(_json_text({**meta, **report_to_dict(exc.report), "partition": partition_to_dict(part)}), args.out)
        sys.stderr.write(f"{exc}\n")
        return EXIT_UNSTRUCTURED
    sol = solve_rstar(report, model.rates, tol=tol)
    out = {**meta, **report_to_dict(report, sol), "partition": partition_to_dict(part)}
    modes = construct_modes(model, part, sol)
    spec = spectrum(model, eps_re=args.eps_re, eps_im=args.eps_im)
    records = []
    for md in modes:
        hit = bool(np.min(np.abs(spec.values - md.value)) <= SPECTRUM_MATCH_TOL * max(1.0, abs(md.value)))
        records.append(
            {
                "label": md.label,
                "value": _complex_json(md.value),
                "eigen_residual": mode_residual(model, md.value, md.matrix),
                "dissipator_residual": dissipator_residual(model, md.matrix),
                "in_spectrum": hit,
            }
        )
    out["modes"] = records
    out["spectrum_crosscheck"] = all(r["in_spectrum"] for r in records)
    _emit(_json_text(out), args.out)
    _info(args, f"condition={sol.condition.value} omega={'none' if sol.omega is None else _g17(sol.omega)}")
    return EXIT_OK


def cmd_dfs(args) -> int:
    model, _, _ = load_config_model(args.model, _parse_params(args.param))
    result = find_dfs(model, tol=args.tol)
    subs = []
    for sub in result:
        freqs = sub.frequencies()
        subs.append(
            {
                "dim": sub.dim,
                "xi": [_complex_json(x) for x in sub.xi],
                "energies": [float(e) for e in sub.energies()],
                "frequencies": freqs,
                "basis": matrix_to_json(sub.basis),
            }
        )
    if args.format == "json":
        text = _json_text({"subspaces": subs})
    else:
        buf = io.StringIO(newline="")
        buf.write("subspace,dim,xi,energies,frequencies\n")
        for k, s in enumerate(subs):
            xi = ";".join(f"{_g17(a)}{'+' if b >= 0 else '-'}{_g17(abs(b))}j" for a, b in s["xi"])
            en = ";".join(_g17(e) for e in s["energies"])
            fr = ";".join(_g17(f) for f in s["frequencies"])
            buf.write(f"{k},{s['dim']},{xi},{en},{fr}\n")
        text = buf.getvalue()
    _emit(text, args.out)
    _info(args, f"subspaces={len(subs)}")
    return EXIT_OK


def _parse_sweep(items: Sequence[str]) -> List[Tuple[str, np.ndarray]]:
    if not items:
        raise ConfigError("sweep needs --sweep name=min:max:steps (once or twice)")
    if len(items) > 2:
        raise ConfigError("at most two --sweep axes")
    axes = []
    for name, rng in _parse_assignments(items, "--sweep").items():
        if "," in rng:
            try:
                axes.append((name, np.array([float(v) for v in rng.split(",")])))
            except ValueError:
                raise ConfigError(f"--sweep {name}: bad value list {rng!r}") from None
            continue
        parts = rng.split(":")
        if len(parts) != 3:
            raise ConfigError(f"--sweep {name} needs min:max:steps or a comma-separated list")
        try:
            lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ConfigError(f"--sweep {name}: bad range {rng!r}") from None
        if steps < 1:
            raise ConfigError("--sweep steps must be at least 1")
        axes.append((name, np.linspace(lo, hi, steps)))
    return axes


def _sweep_point(job):
    name, params, eps_re, eps_im = job
    try:
        model, _ = zoo.build(name, params)
        spec = spectrum(model, eps_re=eps_re, eps_im=eps_im)
        osc = spec.of_class(ModeClass.PERSISTENT_OSCILLATORY)
        return len(osc), max((abs(m.value.imag) for m in osc), default=0.0), None
    except (LindspectError, ValueError, ArithmeticError) as exc:
        return None, None, f"{type(exc).__name__}: {exc}"


def cmd_sweep(args) -> int:
    if not args.model.startswith("builtin:"):
        raise ConfigError("sweep needs a builtin model")
    name = args.model[len("builtin:"):]
    base = _parse_params(args.param)
    zoo.build(name, base)
    axes = _parse_sweep(args.sweep)
    names = [a for a, _ in axes]
    grid = [()]
    for _, vals in axes:
        grid = [g + (float(v),) for g in grid for v in vals]
    jobs = [(name, {**base, **dict(zip(names, point))}, args.eps_re, args.eps_im) for point in grid]
    workers = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    if workers < 1:
        raise ConfigError("--jobs must be at least 1")
    if workers == 1 or len(jobs) == 1:
        results = [_sweep_point(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, jobs))
    failures = 0
    if args.format == "json":
        rows = []
        for point, (n, im, err) in zip(grid, results):
            row = dict(zip(names, point))
            row.update({"n_oscillatory": n, "max_abs_im": im} if err is None else {"error": err})
            failures += err is not None
            rows.append(row)
        text = _json_text({"rows": rows})
    else:
        buf = io.StringIO(newline="")
        buf.write(",".join(names + ["n_oscillatory", "max_abs_im"]) + "\n")
        for point, (n, im, err) in zip(grid, results):
            cells = [_g17(v) for v in point]
            cells += [str(n), _g17(im)] if err is None else ["error", "error"]
            failures += err is not None
            buf.write(",".join(cells) + "\n")
        text = buf.getvalue()
    _emit(text, args.out)
    if failures:
        sys.stderr.write(f"{failures} sweep point(s) failed\n")
    return EXIT_OK


# --- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", required=True, help="builtin:NAME or a JSON model file")
    common.add_argument("--param", action="append", default=[], metavar="K=V", help="model parameter (repeatable)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--eps-re", type=float, help="|Re| threshold for undamped modes")
    common.add_argument("--eps-im", type=float, help="|Im| threshold for oscillating modes")
    common.add_argument("--tol", type=float, default=1e-9, help="structure tolerance")
    common.add_argument("--seed", type=int, help="random seed (fallback: LINDSPECT_SEED, then 0)")

    parser = argparse.ArgumentParser(prog="lindspect", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="Liouvillian eigenvalues and mode classes")

    ev = sub.add_parser("evolve", parents=[common], help="fidelity trajectory F[rho(0), rho(t)]")
    ev.add_argument("--state", help=f"one of {', '.join(zoo.INITIAL_STATES)} or a JSON matrix file")
    ev.add_argument("--t-end", type=float, default=1.0)
    ev.add_argument("--dt", type=float, default=1e-3, help="RK4 step")
    ev.add_argument("--samples", type=int, default=101, help="number of output times on [0, t_end]")
    ev.add_argument("--method", choices=("expansion", "rk4", "crosscheck"), default="expansion")

    ch = sub.add_parser("check", parents=[common], help="block form, R*, Delta_H condition, modes")
    ch.add_argument("--partition", help="JSON partition file")
    ch.add_argument("--discover", nargs="*", metavar="K=V", help="search for a partition (seed=S trials=K)")

    sub.add_parser("dfs", parents=[common], help="decoherence-free subspaces")

    sw = sub.add_parser("sweep", parents=[common], help="oscillatory-mode count over a parameter grid")
    sw.add_argument("--sweep", action="append", metavar="NAME=MIN:MAX:STEPS|V1,V2,..")
    sw.add_argument("--jobs", type=int, help="worker processes (default: CPU count)")
    return parser


COMMANDS = {
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "check": cmd_check,
    "dfs": cmd_dfs,
    "sweep": cmd_sweep,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        _positive("--eps-re", args.eps_re)
        _positive("--eps-im", args.eps_im)
        _positive("--tol", args.tol)
        return COMMANDS[args.command](args)
    except (ConfigError, InvalidModel, InvalidState, ValueError, KeyError) as exc:
        sys.stderr.write(f"lindspect: configuration error: {exc}\n")
        return EXIT_CONFIG
    except NotStructured as exc:
        sys.stderr.write(f"lindspect: {exc}\n")
        return EXIT_UNSTRUCTURED
    except (NumericalError, ConditionFailed, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"lindspect: numerical error: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
