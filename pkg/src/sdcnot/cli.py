"""Command-line interface: spectra, rates, simulations, sweeps, dissipation.

Configuration is a strict JSON document (unknown keys rejected); results
are emitted as CSV (one header row, 12 significant digits, every column
name carrying a unit suffix, ``_1`` for dimensionless) or as a single
JSON object that embeds the resolved configuration under ``"config"`` so
outputs can be re-ingested as configs.

Exit codes: 0 success, 2 configuration/parse error, 3 physics error,
4 integrator non-convergence.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import sys as _sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .coupled import CoupledSystem, assemble, zz_rate
from .dynamics import PulseSpec, simulate_gate
from .errors import (
    ConfigError,
    ConvergenceError,
    SdcnotError,
)
from .fluxonium import FluxoniumSpec, diagonalize
from .lindblad import DissipationSpec, gate_error, process_tomography
from .optimizer import initial_guess, optimize, sweep_gate_duration
from .rates import (
    effective_hamiltonian_rates,
    eta_sd,
    lambda_drive,
)

__all__ = ["RunConfig", "parse_config", "default_config", "main", "entrypoint"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_CONVERGENCE = 4

SWEEP_AXES = ("t_gate", "j_c", "omega_d", "lambda")

# relaxation scenarios (t1_01 us, t1_12 us) reported by dissipative sweeps
T1_SCENARIOS = (
    ("t1_100us_1us", 100.0, 1.0),
    ("t1_100us_inf", 100.0, math.inf),
    ("t1_500us_50us", 500.0, 50.0),
)

FLOAT_FMT = "%.12g"


# --------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    """Parsed and validated run configuration."""

    qubit_a: FluxoniumSpec
    qubit_b: FluxoniumSpec
    j_c: float
    levels_per_qubit: int = 5
    pulse: dict = None
    dissipation: DissipationSpec = None
    rates: dict = None
    sweep: dict = None
    optimizer: dict = field(default_factory=dict)
    timeseries_initial: tuple = (1, 0)
    output: dict = field(default_factory=dict)
    seed: int = 0
    raw: dict = field(default=None, repr=False)


def default_config() -> dict:
    """Built-in configuration: both qubits at their sweet spots with the
    coupling used throughout, plus a pre-calibrated 50 ns pulse."""
    return {
        "qubit_a": {"e_c": 1.06, "e_l": 1.09, "e_j": 4.62},
        "qubit_b": {"e_c": 1.03, "e_l": 1.88, "e_j": 5.05},
        "j_c": 0.35,
        "levels_per_qubit": 5,
        "pulse": {
            "omega_d": 1.0131357682,
            "f_peak": 0.6557857415,
            "eta": 0.0113920815,
            "t_gate": 50.0,
            "envelope_kind": "gaussian",
            "dt": 0.001,
        },
        "seed": 0,
    }


def _check_keys(section: dict, allowed: set, where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key(s) {sorted(unknown)} in {where}; allowed: "
            f"{sorted(allowed)}"
        )


def _get_number(section: dict, key: str, where: str, default=None):
    if key not in section:
        if default is not None:
            return default
        raise ConfigError(f"missing required field '{key}' in {where}")
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{key}' in {where} must be a number")
    return float(value)


def _parse_qubit(section, where: str) -> FluxoniumSpec:
    if not isinstance(section, dict):
        raise ConfigError(f"{where} must be an object")
    _check_keys(section, {"e_c", "e_l", "e_j", "phi_ext", "basis_size"}, where)
    e_c = _get_number(section, "e_c", where)
    e_l = _get_number(section, "e_l", where)
    e_j = _get_number(section, "e_j", where)
    phi_ext = _get_number(section, "phi_ext", where, default=math.pi)
    basis_size = int(section.get("basis_size", 100))
    return FluxoniumSpec(
        e_c=e_c, e_l=e_l, e_j=e_j, phi_ext=phi_ext, basis_size=basis_size
    )


def _parse_t1(section, key: str):
    value = section.get(key, "inf")
    if value is None or value == "inf":
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"dissipation field '{key}' must be a number or 'inf'")
    return float(value)


def _parse_pulse(section) -> dict:
    where = "pulse"
    _check_keys(
        section,
        {"omega_d", "f_peak", "eta", "t_gate", "sigma", "envelope_kind", "dt"},
        where,
    )
    out = {
        "t_gate": _get_number(section, "t_gate", where),
        "dt": _get_number(section, "dt", where, default=0.001),
        "envelope_kind": section.get("envelope_kind", "gaussian"),
    }
    if section.get("sigma") is not None:
        out["sigma"] = _get_number(section, "sigma", where)
    for key in ("omega_d", "f_peak", "eta"):
        if key in section:
            out[key] = _get_number(section, key, where)
    return out


def _parse_sweep(section) -> dict:
    where = "sweep"
    _check_keys(
        section,
        {"axis", "start", "stop", "points", "warm_start", "dissipation_scenarios"},
        where,
    )
    axis = section.get("axis")
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    points = section.get("points")
    if not isinstance(points, int) or isinstance(points, bool) or points < 2:
        raise ConfigError("sweep points must be an integer >= 2")
    return {
        "axis": axis,
        "start": _get_number(section, "start", where),
        "stop": _get_number(section, "stop", where),
        "points": points,
        "warm_start": bool(section.get("warm_start", True)),
        "dissipation_scenarios": bool(section.get("dissipation_scenarios", False)),
    }


def parse_config(document: dict) -> RunConfig:
    """Validate a configuration document (strict schema)."""
    if not isinstance(document, dict):
        raise ConfigError("configuration must be a JSON object")
    _check_keys(
        document,
        {
            "qubit_a", "qubit_b", "j_c", "levels_per_qubit", "pulse",
            "dissipation", "rates", "sweep", "optimizer",
            "timeseries_initial", "output", "seed",
        },
        "configuration",
    )
    for required in ("qubit_a", "qubit_b", "j_c"):
        if required not in document:
            raise ConfigError(f"missing required field '{required}'")
    qubit_a = _parse_qubit(document["qubit_a"], "qubit_a")
    qubit_b = _parse_qubit(document["qubit_b"], "qubit_b")
    j_c = _get_number(document, "j_c", "configuration")

    dissipation = None
    if "dissipation" in document:
        sect = document["dissipation"]
        _check_keys(sect, {"t1_01", "t1_12"}, "dissipation")
        dissipation = DissipationSpec(
            t1_01=_parse_t1(sect, "t1_01"), t1_12=_parse_t1(sect, "t1_12")
        )

    rates_sect = None
    if "rates" in document:
        sect = document["rates"]
        _check_keys(sect, {"f", "lambda", "eta"}, "rates")
        if ("f" in sect) == ("lambda" in sect):
            raise ConfigError("rates requires exactly one of 'f' or 'lambda'")
        rates_sect = dict(sect)

    optimizer_sect = {}
    if "optimizer" in document:
        sect = document["optimizer"]
        _check_keys(sect, {"max_evals", "f_tol"}, "optimizer")
        optimizer_sect = dict(sect)

    ts_initial = (1, 0)
    if "timeseries_initial" in document:
        value = str(document["timeseries_initial"])
        if len(value) != 2 or not value.isdigit():
            raise ConfigError(
                "timeseries_initial must be a two-digit bare label like '10'"
            )
        ts_initial = (int(value[0]), int(value[1]))

    output = {}
    if "output" in document:
        sect = document["output"]
        _check_keys(sect, {"path", "format"}, "output")
        output = dict(sect)
        if output.get("format") not in (None, "csv", "json"):
            raise ConfigError("output format must be 'csv' or 'json'")

    seed = document.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError("seed must be an integer")

    return RunConfig(
        qubit_a=qubit_a,
        qubit_b=qubit_b,
        j_c=j_c,
        levels_per_qubit=int(document.get("levels_per_qubit", 5)),
        pulse=_parse_pulse(document["pulse"]) if "pulse" in document else None,
        dissipation=dissipation,
        rates=rates_sect,
        sweep=_parse_sweep(document["sweep"]) if "sweep" in document else None,
        optimizer=optimizer_sect,
        timeseries_initial=ts_initial,
        output=output,
        seed=seed,
        raw=document,
    )


def load_config(path) -> RunConfig:
    if path is None:
        return parse_config(default_config())
    try:
        with open(path, "r", encoding="utf-8") as fh:
            document = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(document)


# --------------------------------------------------------------------------
# output helpers


def _fmt(value) -> str:
    if isinstance(value, float):
        return FLOAT_FMT % value
    return str(value)


def _write_csv(stream, header, rows) -> None:
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(_fmt(v) for v in row) + "\n")


def _emit(config: RunConfig, args, payload: dict, header, rows) -> None:
    """Write results as CSV rows or a JSON object with config echo."""
    fmt = args.format or config.output.get("format") or "csv"
    path = args.output or config.output.get("path")
    if fmt == "json":
        document = dict(payload)
        document["config"] = config.raw
        document["seed"] = config.seed
        text = json.dumps(document, indent=2, default=_json_default) + "\n"
    else:
        import io

        buf = io.StringIO()
        _write_csv(buf, header, rows)
        text = buf.getvalue()
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if obj == math.inf:
        return "inf"
    raise TypeError(f"cannot serialize {type(obj)}")


def _build_system(config: RunConfig) -> CoupledSystem:
    return assemble(
        config.qubit_a, config.qubit_b, config.j_c, config.levels_per_qubit
    )


def _pulse_from_config(config: RunConfig, system: CoupledSystem) -> PulseSpec:
    """Explicit pulse if fully specified, otherwise the initial guess."""
    section = dict(config.pulse or {})
    if not section:
        return initial_guess(system, 50.0)
    if all(k in section for k in ("omega_d", "f_peak", "eta")):
        return PulseSpec(**section)
    t_gate = section.get("t_gate", 50.0)
    guess = initial_guess(
        system, t_gate, dt=section.get("dt", 0.001),
        envelope_kind=section.get("envelope_kind", "gaussian"),
    )
    for key in ("omega_d", "f_peak", "eta"):
        if key in section:
            guess = __import__("dataclasses").replace(guess, **{key: section[key]})
    return guess


# --------------------------------------------------------------------------
# commands


def cmd_spectrum(config: RunConfig, args) -> int:
    header = [
        "qubit", "omega_01_GHz", "omega_12_GHz", "omega_03_GHz",
        "n01_abs_1", "n12_abs_1", "n03_abs_1",
    ]
    rows = []
    payload_rows = []
    for name, spec in (("A", config.qubit_a), ("B", config.qubit_b)):
        spectrum = diagonalize(spec, keep=4)
        row = [
            name,
            spectrum.transition(0, 1),
            spectrum.transition(1, 2),
            spectrum.transition(0, 3),
            abs(spectrum.n_elements[0, 1]),
            abs(spectrum.n_elements[1, 2]),
            abs(spectrum.n_elements[0, 3]),
        ]
        rows.append(row)
        payload_rows.append(dict(zip(header, row)))
    _emit(config, args, {"spectrum": payload_rows}, header, rows)
    return EXIT_OK


def _rates_row(system: CoupledSystem, f: float, eta) -> dict:
    eta_value = eta_sd(system) if eta in (None, "sd") else float(eta)
    rates = effective_hamiltonian_rates(system, f, eta_value)
    return {
        "j_c_GHz": system.j_c,
        "f_GHz": f,
        "eta_1": rates.eta,
        "xi_zx_GHz": rates.xi_zx,
        "xi_ix_GHz": rates.xi_ix,
        "xi_zz_GHz": rates.xi_zz,
        "omega_rabi_10_11_GHz": rates.omega_rabi_10_11,
        "lambda_1": rates.lambda_,
        "lambda_12_1": rates.lambda_12,
        "t_fsl_ns": rates.t_fsl,
    }


def cmd_rates(config: RunConfig, args) -> int:
    section = config.rates or {"lambda": 0.2, "eta": "sd"}
    eta = section.get("eta", "sd")

    def f_for(system):
        if "f" in section:
            return float(section["f"])
        return float(section["lambda"]) / lambda_drive(system, 1.0)

    records = []
    if config.sweep is not None:
        if config.sweep["axis"] != "j_c":
            raise ConfigError("rates sweep supports only the j_c axis")
        grid = np.linspace(
            config.sweep["start"], config.sweep["stop"], config.sweep["points"]
        )
        for j_c in grid:
            system = assemble(
                config.qubit_a, config.qubit_b, float(j_c),
                config.levels_per_qubit,
            )
            records.append(_rates_row(system, f_for(system), eta))
    else:
        system = _build_system(config)
        records.append(_rates_row(system, f_for(system), eta))

    header = list(records[0])
    rows = [[rec[k] for k in header] for rec in records]
    _emit(config, args, {"rates": records}, header, rows)
    return EXIT_OK


def cmd_simulate(config: RunConfig, args) -> int:
    system = _build_system(config)
    pulse = _pulse_from_config(config, system)
    record = [config.timeseries_initial] if args.timeseries else None
    report = simulate_gate(system, pulse, auto_dt=True, record_populations=record)
    e_c0, e_c1, e_control, e_leak = report.budget
    summary = {
        "omega_d_GHz": pulse.omega_d,
        "f_peak_GHz": pulse.f_peak,
        "eta_1": pulse.eta,
        "t_gate_ns": pulse.t_gate,
        "dt_ns": report.dt_used,
        "f_coherent_1": report.f_coherent,
        "coherent_error_1": 1.0 - report.f_coherent,
        "e_target_c0_1": e_c0,
        "e_target_c1_1": e_c1,
        "e_control_1": e_control,
        "e_leakage_1": e_leak,
    }
    if config.dissipation is not None:
        chi = process_tomography(system, pulse, config.dissipation)
        summary["dissipative_error_1"] = gate_error(chi)
        summary["chi_trace_deficit_1"] = chi.trace_deficit

    if args.timeseries:
        series = report.populations
        table = series["by_initial"][config.timeseries_initial]
        header = [
            "t_ns", "P_00_1", "P_01_1", "P_10_1", "P_11_1",
            "P_20_1", "P_21_1", "P_02_1", "P_12_1", "leak_other_1",
        ]
        keys = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1), (0, 2), (1, 2)]
        rows = []
        for i, t in enumerate(series["t_ns"]):
            rows.append(
                [t] + [table[k][i] for k in keys] + [table["other"][i]]
            )
        payload = {"report": summary, "timeseries": {
            "header": header, "rows": [[float(v) for v in r] for r in rows]}}
        _emit(config, args, payload, header, rows)
    else:
        header = list(summary)
        _emit(config, args, {"report": summary}, header, [list(summary.values())])
    return EXIT_OK


def cmd_optimize(config: RunConfig, args) -> int:
    system = _build_system(config)
    section = dict(config.pulse or {})
    t_gate = section.get("t_gate", 50.0)
    result = optimize(
        system,
        t_gate,
        max_evals=int(config.optimizer.get("max_evals", 500)),
        f_tol=float(config.optimizer.get("f_tol", 1e-8)),
        dt=section.get("dt", 0.001),
        envelope_kind=section.get("envelope_kind", "gaussian"),
    )
    pulse = result.best_pulse
    summary = {
        "t_gate_ns": pulse.t_gate,
        "omega_d_GHz": pulse.omega_d,
        "f_peak_GHz": pulse.f_peak,
        "eta_1": pulse.eta,
        "coherent_error_1": result.best_error,
        "evaluations_1": result.evaluations,
        "converged_1": int(result.converged),
    }
    payload = {
        "optimization": summary,
        "trace": [
            {"omega_d_GHz": p[0], "f_peak_GHz": p[1], "eta_1": p[2],
             "error_1": e}
            for p, e in result.trace
        ],
    }
    header = list(summary)
    _emit(config, args, payload, header, [list(summary.values())])
    return EXIT_OK


def _optimize_point(payload):
    """Worker for parallel sweeps; rebuilds the system from plain data."""
    (qa, qb, j_c, levels, t_gate, max_evals, dt) = payload
    system = assemble(FluxoniumSpec(**qa), FluxoniumSpec(**qb), j_c, levels)
    result = optimize(system, t_gate, max_evals=max_evals, dt=dt)
    return result


def _sweep_record(axis, value, system, result, scenarios) -> dict:
    pulse = result.best_pulse
    report = simulate_gate(system, pulse)
    e_c0, e_c1, e_control, e_leak = report.budget
    record = {
        f"{axis}_{'ns' if axis == 't_gate' else 'GHz'}": value,
        "omega_d_GHz": pulse.omega_d,
        "f_peak_GHz": pulse.f_peak,
        "eta_1": pulse.eta,
        "coherent_error_1": result.best_error,
        "e_target_c0_1": e_c0,
        "e_target_c1_1": e_c1,
        "e_control_1": e_control,
        "e_leakage_1": e_leak,
        "evaluations_1": result.evaluations,
    }
    if scenarios:
        for tag, t1_01, t1_12 in T1_SCENARIOS:
            chi = process_tomography(
                system, pulse, DissipationSpec(t1_01=t1_01, t1_12=t1_12)
            )
            record[f"error_{tag}_1"] = gate_error(chi)
    return record


def cmd_sweep(config: RunConfig, args) -> int:
    if config.sweep is None:
        raise ConfigError("sweep command requires a 'sweep' section")
    sweep = config.sweep
    axis = sweep["axis"]
    grid = np.linspace(sweep["start"], sweep["stop"], sweep["points"])
    max_evals = int(config.optimizer.get("max_evals", 500))
    section = dict(config.pulse or {})
    dt = section.get("dt", 0.001)
    records = []

    if axis == "t_gate":
        system = _build_system(config)
        if sweep["warm_start"]:
            results = sweep_gate_duration(
                system, [float(t) for t in grid], max_evals=max_evals, dt=dt
            )
        else:
            results = _parallel_optimize(config, grid, max_evals, dt, args)
        for value, result in zip(grid, results):
            records.append(
                _sweep_record(
                    axis, float(value), system, result,
                    sweep["dissipation_scenarios"],
                )
            )
    elif axis == "j_c":
        t_gate = section.get("t_gate", 50.0)
        previous = None
        for value in grid:
            system = assemble(
                config.qubit_a, config.qubit_b, float(value),
                config.levels_per_qubit,
            )
            x0 = previous if sweep["warm_start"] else None
            result = optimize(
                system, t_gate, x0=x0, max_evals=max_evals, dt=dt
            )
            previous = result.best_pulse
            records.append(
                _sweep_record(
                    axis, float(value), system, result,
                    sweep["dissipation_scenarios"],
                )
            )
    else:
        # pulse-perturbation sweeps around an explicit pulse
        system = _build_system(config)
        base = _pulse_from_config(config, system)
        from dataclasses import replace as _replace

        for value in grid:
            if axis == "omega_d":
                pulse = _replace(base, omega_d=float(value))
            else:
                f_peak = float(value) / lambda_drive(system, 1.0)
                pulse = _replace(base, f_peak=f_peak)
            report = simulate_gate(system, pulse)
            e_c0, e_c1, e_control, e_leak = report.budget
            records.append({
                f"{axis}_{'GHz' if axis == 'omega_d' else '1'}": float(value),
                "f_coherent_1": report.f_coherent,
                "coherent_error_1": 1.0 - report.f_coherent,
                "e_target_c0_1": e_c0,
                "e_target_c1_1": e_c1,
                "e_control_1": e_control,
                "e_leakage_1": e_leak,
            })

    header = list(records[0])
    rows = [[rec[k] for k in header] for rec in records]
    _emit(config, args, {"sweep": records}, header, rows)
    return EXIT_OK


def _parallel_optimize(config, grid, max_evals, dt, args):
    qa = {k: getattr(config.qubit_a, k)
          for k in ("e_c", "e_l", "e_j", "phi_ext", "basis_size")}
    qb = {k: getattr(config.qubit_b, k)
          for k in ("e_c", "e_l", "e_j", "phi_ext", "basis_size")}
    payloads = [
        (qa, qb, config.j_c, config.levels_per_qubit, float(t), max_evals, dt)
        for t in grid
    ]
    workers = max(1, int(args.parallelism))
    if workers == 1:
        return [_optimize_point(p) for p in payloads]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_optimize_point, payloads))


# --------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdcnot",
        description="Selective-darkening CNOT simulator for coupled fluxoniums",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("spectrum", cmd_spectrum),
        ("rates", cmd_rates),
        ("simulate", cmd_simulate),
        ("optimize", cmd_optimize),
        ("sweep", cmd_sweep),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON config path")
        p.add_argument("--output", default=None, help="output file path")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--parallelism", type=int, default=1)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--timeseries", action="store_true")
        p.set_defaults(handler=fn)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        if args.seed is not None:
            config.seed = args.seed
        return args.handler(config, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=_sys.stderr)
        return EXIT_CONVERGENCE
    except SdcnotError as exc:
        print(f"physics error: {exc}", file=_sys.stderr)
        return EXIT_PHYSICS


def entrypoint() -> None:
    raise SystemExit(main())
