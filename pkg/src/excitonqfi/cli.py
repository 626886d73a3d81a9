"""Command-line interface: every workflow as a subcommand with CSV/JSON outputs.

Each run writes its data file(s) plus exactly one manifest recording the
subcommand, the fully resolved configuration, the seed, the tool version, and
a sha256 digest of every output, so reruns can be compared byte for byte.
Stochastic commands (disorder, optimize) require --seed and are bit-reproducible
for a fixed (config, seed).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
from importlib import resources
from pathlib import Path

import numpy as np

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from . import __version__, dimer
from .aggregate import (
    AggregateSpec,
    DisorderSpec,
    analytic_chain_state,
    analytic_ring_state,
    build_hamiltonian,
    chain_transition_dipole_sq,
    diagonalize,
    participation_ratio,
    specs_from_mapping,
    thermal_state,
)
from .constants import KB_CM1_PER_K
from .disorder import SweepConfig, run_sweep
from .errors import ExcitonQFIError
from .optimize import OptimizerConfig, maximize_qfi
from .oracle import MAX_ORACLE_SITES, dense_qfi_mixed, dense_qfi_pure
from .qfi import (
    chain_qfi_closed_form,
    classify_depth,
    depth_report,
    dipole_field_generator,
    qfi_thermal_dipole,
    ring_qfi_closed_form,
)
from .spectra import (
    ExtinctionTrace,
    SpectralDensity,
    SpectrumTrace,
    default_time_grid,
    dipole_correlation,
    ingest_extinction,
    qfi_from_spectrum,
    qfi_from_symmetric_correlation,
    spectrum,
)

ORACLE_TRIP_TOL = 1e-8

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_ORACLE_MISMATCH = 3


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _digest(path: Path) -> str:
    return "sha256:" + hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(out_dir: Path, subcommand: str, config: dict, seed,
                    outputs, notes=None) -> Path:
    manifest = {
        "subcommand": subcommand,
        "version": __version__,
        "seed": seed,
        "config": config,
        "outputs": {p.name: _digest(p) for p in outputs},
    }
    if notes:
        manifest["notes"] = notes
    path = out_dir / f"{subcommand.replace('-', '_')}_manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path


def _load_preset(name: str) -> dict:
    ref = resources.files("excitonqfi.presets").joinpath(f"{name}.toml")
    try:
        text = ref.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ExcitonQFIError(f"unknown preset {name!r}") from None
    return tomllib.loads(text)


def _dimer_params(args, parser) -> dimer.DimerParams:
    if args.preset:
        data = _load_preset(args.preset)
        if data.get("topology") != "dimer":
            parser.error(f"preset {args.preset!r} is not a dimer")
        energies = data["site_energy_cm1"]
        return dimer.DimerParams(float(energies[0]), float(energies[1]),
                                 float(data["j_cm1"]))
    if args.omega_a is None or args.omega_b is None or args.j is None:
        parser.error("give --preset or all of --omega-a, --omega-b, --j")
    return dimer.DimerParams(args.omega_a, args.omega_b, args.j)


def _dimer_config(params: dimer.DimerParams) -> dict:
    return {"omega_a_cm1": params.omega_a, "omega_b_cm1": params.omega_b,
            "j_cm1": params.j}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _warn_oracle_ignored(args, command: str) -> None:
    if args.oracle:
        print(f"note: --oracle has no dense counterpart for {command}; ignored",
              file=sys.stderr)


def _cmd_dimer_sweep(args, parser) -> int:
    _warn_oracle_ignored(args, "dimer-sweep")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "dimer_sweep.csv"

    if args.theta_sweep:
        # the mixing angle is the whole parametrization; no site energies needed
        thetas = np.linspace(0.0, 0.5 * np.pi, args.points)
        rows = []
        for theta in thetas:
            s = math.sin(2.0 * theta)
            rows.append((theta, s, dimer.purity_pure(theta), 2.0 + 2.0 * s,
                         2.0 + 2.0 * abs(s)))
        _write_csv(csv_path, ["theta_rad", "sin_2theta", "purity_a",
                              "fq_dipole", "fq_max"], rows)
        _write_manifest(out, "dimer-sweep", {"mode": "theta", "points": args.points},
                        args.seed, [csv_path])
        return EXIT_OK

    params = _dimer_params(args, parser)
    betas = np.linspace(args.beta_max / args.rows, args.beta_max, args.rows)
    rows = []
    for beta in betas:
        at_t = dimer.DimerParams(params.omega_a, params.omega_b, params.j,
                                 temperature=1.0 / (KB_CM1_PER_K * beta))
        purity_ab, purity_a = dimer.purity_thermal(at_t)
        rows.append((beta, purity_ab, purity_a,
                     dimer.concurrence_thermal(at_t),
                     dimer.thermal_qfi_dipole(at_t),
                     dimer.thermal_qfi_max(at_t)))
    _write_csv(csv_path, ["beta_cm", "purity_ab", "purity_a", "concurrence",
                          "fq_dipole", "fq_max"], rows)
    config = {"mode": "beta", "beta_max_cm": args.beta_max, "rows": args.rows}
    config.update(_dimer_config(params))
    _write_manifest(out, "dimer-sweep", config, args.seed, [csv_path])
    return EXIT_OK


def _heatmap_params(s: float, y: float) -> dimer.DimerParams:
    """Dimer with sin(2 theta) = s and |J|/k_B T = y at T = 1/k_B kelvin."""
    if s == 0.0:
        return dimer.DimerParams(0.0, 2.0 * y, 0.0, temperature=1.0 / KB_CM1_PER_K)
    j = math.copysign(y, s)
    splitting = 2.0 * y / abs(s)
    delta = splitting * math.sqrt(max(0.0, 1.0 - s * s))
    return dimer.DimerParams(-0.5 * delta, 0.5 * delta, j,
                             temperature=1.0 / KB_CM1_PER_K)


def _cmd_thermal_heatmap(args, parser) -> int:
    _warn_oracle_ignored(args, "thermal-heatmap")
    sizes = {"small": 21, "medium": 41, "large": 81}
    n_grid = sizes[args.grid]
    s_values = np.linspace(-1.0, 1.0, n_grid)
    y_values = np.linspace(args.b_max / n_grid, args.b_max, n_grid)
    rows = []
    for s in s_values:
        for y in y_values:
            p = _heatmap_params(float(s), float(y))
            purity_ab, purity_a = dimer.purity_thermal(p)
            rows.append((s, y, purity_ab, purity_a,
                         dimer.concurrence_thermal(p),
                         dimer.thermal_qfi_dipole(p), dimer.thermal_qfi_max(p)))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "thermal_heatmap.csv"
    _write_csv(csv_path, ["sin_2theta", "j_over_kbt", "purity_ab", "purity_a",
                          "concurrence", "fq_dipole", "fq_max"], rows)
    _write_manifest(out, "thermal-heatmap",
                    {"grid": args.grid, "points": n_grid, "b_max": args.b_max},
                    args.seed, [csv_path])
    return EXIT_OK


def _oracle_check(states_and_n, printer) -> tuple:
    """Dense-oracle column for (state, n) pairs; returns (values, max deviation)."""
    values = []
    max_dev = 0.0
    for state, n, closed in states_and_n:
        f = dense_qfi_pure(np.asarray(state), dipole_field_generator(n))
        values.append(f)
        max_dev = max(max_dev, abs(f - closed))
    printer(f"oracle max deviation: {max_dev:.3e}")
    return values, max_dev


def _cmd_chain(args, parser) -> int:
    if args.n_max is not None:
        n_values = range(args.n_min, args.n_max + 1)
        k_list = [int(k) for k in args.k_list.split(",")]
    else:
        if args.n is None:
            parser.error("give --n or --n-max")
        n_values = [args.n]
        k_list = [args.k] if args.k is not None else None

    rows = []
    oracle_inputs = []
    for n in n_values:
        ks = k_list if k_list is not None else range(1, n + 1)
        for k in ks:
            if not 1 <= k <= n:
                continue
            f = chain_qfi_closed_form(n, k)
            state = analytic_chain_state(n, k)
            rows.append([n, k, f, chain_transition_dipole_sq(n, k),
                         participation_ratio(state), classify_depth(f, n)])
            oracle_inputs.append((state, n, f))

    if args.oracle:
        if any(r[0] > MAX_ORACLE_SITES for r in rows):
            parser.error(f"--oracle needs every N <= {MAX_ORACLE_SITES}")
        values, max_dev = _oracle_check(oracle_inputs, print)
        for row, value in zip(rows, values):
            row.append(value)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "chain.csv"
    header = ["n_sites", "k", "fq", "mu_k_sq", "participation", "depth"]
    if args.oracle:
        header.append("fq_oracle")
    _write_csv(csv_path, header, rows)
    config = {"n": args.n, "n_min": args.n_min, "n_max": args.n_max,
              "k": args.k, "k_list": args.k_list, "oracle": args.oracle}
    _write_manifest(out, "chain", config, args.seed, [csv_path])
    if args.oracle and max_dev > ORACLE_TRIP_TOL:
        print(f"oracle mismatch beyond {ORACLE_TRIP_TOL}", file=sys.stderr)
        return EXIT_ORACLE_MISMATCH
    return EXIT_OK


def _cmd_ring(args, parser) -> int:
    n = args.n
    ks = [args.k] if args.k is not None else range(n)
    rows = []
    oracle_inputs = []
    for k in ks:
        f = ring_qfi_closed_form(n, k)
        state = analytic_ring_state(n, k)
        rows.append([n, k, f, participation_ratio(state), classify_depth(f, n)])
        oracle_inputs.append((state, n, f))

    if args.oracle:
        if n > MAX_ORACLE_SITES:
            parser.error(f"--oracle needs N <= {MAX_ORACLE_SITES}")
        values, max_dev = _oracle_check(oracle_inputs, print)
        for row, value in zip(rows, values):
            row.append(value)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "ring.csv"
    header = ["n_sites", "k", "fq", "participation", "depth"]
    if args.oracle:
        header.append("fq_oracle")
    _write_csv(csv_path, header, rows)
    _write_manifest(out, "ring", {"n": n, "k": args.k, "oracle": args.oracle},
                    args.seed, [csv_path])
    if args.oracle and max_dev > ORACLE_TRIP_TOL:
        print(f"oracle mismatch beyond {ORACLE_TRIP_TOL}", file=sys.stderr)
        return EXIT_ORACLE_MISMATCH
    return EXIT_OK


def _cmd_optimize(args, parser) -> int:
    if args.seed is None:
        parser.error("--seed is mandatory for optimize")
    config = OptimizerConfig(n_starts=args.starts, max_iters=args.max_iters,
                             seed=args.seed)
    if args.system == "chain":
        if args.n is None or args.k is None:
            parser.error("chain optimization needs --n and --k")
        target = analytic_chain_state(args.n, args.k)
        resolved = {"system": "chain", "n": args.n, "k": args.k}
    elif args.system == "ring":
        if args.n is None or args.k is None:
            parser.error("ring optimization needs --n and --k")
        target = analytic_ring_state(args.n, args.k)
        resolved = {"system": "ring", "n": args.n, "k": args.k}
    else:
        params = _dimer_params(args, parser)
        if args.temperature is None:
            parser.error("dimer-thermal optimization needs --temperature")
        spec = AggregateSpec.dimer(params.omega_a, params.omega_b, params.j)
        basis = diagonalize(build_hamiltonian(spec))
        target = (thermal_state(basis, args.temperature), basis)
        resolved = {"system": "dimer-thermal", "temperature_k": args.temperature}
        resolved.update(_dimer_config(params))

    result = maximize_qfi(target, config)
    if not result.any_converged:
        print("warning: no optimizer start converged; best value reported",
              file=sys.stderr)
    payload = result.to_json_dict()
    payload["converged"] = result.any_converged

    max_dev = 0.0
    if args.oracle:
        n = result.generator.n_sites
        if n > MAX_ORACLE_SITES:
            parser.error(f"--oracle needs N <= {MAX_ORACLE_SITES}")
        if isinstance(target, tuple):
            state, basis_or_states = target
            populations = state.populations
            columns = basis_or_states.states
            oracle_f = dense_qfi_mixed(populations, columns, result.generator)
        else:
            oracle_f = dense_qfi_pure(np.asarray(target), result.generator)
        max_dev = abs(oracle_f - result.f_max)
        payload["f_max_oracle"] = oracle_f
        print(f"oracle max deviation: {max_dev:.3e}")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / "optimize.json"
    json_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                         encoding="utf-8")
    resolved.update({"n_starts": args.starts, "max_iters": args.max_iters,
                     "oracle": args.oracle})
    _write_manifest(out, "optimize", resolved, args.seed, [json_path])
    if args.oracle and max_dev > ORACLE_TRIP_TOL:
        print(f"oracle mismatch beyond {ORACLE_TRIP_TOL}", file=sys.stderr)
        return EXIT_ORACLE_MISMATCH
    return EXIT_OK


def _cmd_disorder(args, parser) -> int:
    if args.seed is None:
        parser.error("--seed is mandatory for disorder")
    if args.config:
        data = tomllib.loads(Path(args.config).read_text(encoding="utf-8"))
    else:
        data = _load_preset(args.preset or "pic")
    spec, disorder_spec = specs_from_mapping(data)
    if disorder_spec is None:
        parser.error("config must include disorder keys")
    sweep_table = data.get("sweep")
    if not sweep_table:
        parser.error("config must include a [sweep] table")

    m = args.realizations or disorder_spec.n_realizations
    disorder_spec = DisorderSpec(
        sigma_site_energy=disorder_spec.sigma_site_energy
        if sweep_table.get("mode") != "off-diagonal" else 0.0,
        sigma_position=disorder_spec.sigma_position
        if sweep_table.get("mode") == "off-diagonal" else 0.0,
        seed=args.seed,
        n_realizations=m,
    )
    mode = sweep_table.get("mode", "diagonal")
    sigma_key = "sigma_over_j" if mode == "diagonal" else "sigma_x_over_a"
    sigma_values = sweep_table.get(sigma_key) or sweep_table.get("sigma_over_j")
    config = SweepConfig(
        spec=spec,
        disorder=disorder_spec,
        mode=mode,
        sigma_values=tuple(float(s) for s in sigma_values),
        j_over_kbt=tuple(float(x) for x in sweep_table["j_over_kbt"]),
    )
    threads = args.threads if args.threads is not None else (os.cpu_count() or 1)
    result = run_sweep(config, threads=threads)

    oracle_dev = None
    if args.oracle:
        if spec.n_sites > MAX_ORACLE_SITES:
            parser.error(f"--oracle needs n_sites <= {MAX_ORACLE_SITES}")
        oracle_dev = _disorder_oracle_deviation(config)
        print(f"oracle max deviation: {oracle_dev:.3e}")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "disorder.csv"
    rows = [(c.mode, c.sigma, c.j_over_kbt, c.n_sites, c.n_realizations,
             c.mean_fq_per_n, c.stderr, c.depth, c.resamples, c.seed)
            for c in result.cells]
    _write_csv(csv_path, ["mode", "sigma_over_j", "j_over_kbt", "n_sites", "m",
                          "mean_fq_per_n", "stderr", "depth", "resamples",
                          "seed"], rows)
    resolved = {
        "mode": mode,
        "sigma_values": list(config.sigma_values),
        "j_over_kbt": list(config.j_over_kbt),
        "n_sites": spec.n_sites,
        "jprime_cm1": spec.jprime_cm1,
        "lattice_a": spec.lattice_a,
        "realizations": m,
        "config_digest": result.config_digest,
    }
    notes = {"coupling": "full 1/r^3 dipole law, untruncated"}
    if oracle_dev is not None:
        notes["oracle_max_deviation"] = oracle_dev
    _write_manifest(out, "disorder", resolved, args.seed, [csv_path], notes)
    if oracle_dev is not None and oracle_dev > ORACLE_TRIP_TOL:
        print(f"oracle mismatch beyond {ORACLE_TRIP_TOL}", file=sys.stderr)
        return EXIT_ORACLE_MISMATCH
    return EXIT_OK


def _cmd_spectrum(args, parser) -> int:
    _warn_oracle_ignored(args, "spectrum")
    params = _dimer_params(args, parser)
    sd = SpectralDensity(args.reorganization, args.cutoff)
    grid = default_time_grid(params, sd, args.temperature)
    corr = dipole_correlation(params, args.initial, sd, args.temperature, grid)
    trace = spectrum(corr)
    if args.initial == "e0":
        # ground-state probe: the absorption bands bleach, not emit
        trace = SpectrumTrace(
            omega=trace.omega, intensity=trace.intensity,
            bands=tuple("GSB" for _ in trace.bands),
            dt=trace.dt, t_window=trace.t_window, n_samples=trace.n_samples,
        )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "spectrum.csv"
    _write_csv(csv_path, ["omega_cm1", "intensity", "band"],
               zip(trace.omega, trace.intensity, trace.bands))
    notes = {
        "fq_from_spectrum": qfi_from_spectrum(trace),
        "fq_from_symmetric_correlation": qfi_from_symmetric_correlation(corr),
        "four_c0": 4.0 * float(np.real(corr.values[0])),
    }
    resolved = {
        "initial": args.initial,
        "reorganization_cm1": args.reorganization,
        "cutoff_cm1": args.cutoff,
        "temperature_k": args.temperature,
        "n_samples": trace.n_samples,
        "dt_cm": trace.dt,
    }
    resolved.update(_dimer_config(params))
    _write_manifest(out, "spectrum", resolved, args.seed, [csv_path], notes)
    return EXIT_OK


def _cmd_ingest(args, parser) -> int:
    _warn_oracle_ignored(args, "ingest")
    path = Path(args.input)
    omegas, eps, bands = [], [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"omega_cm1", "eps_L_per_mol_cm", "band"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            parser.error(f"input must have columns {sorted(required)}")
        for record in reader:
            omegas.append(float(record["omega_cm1"]))
            eps.append(float(record["eps_L_per_mol_cm"]))
            bands.append(record["band"])
    trace = ExtinctionTrace(omega_cm1=np.array(omegas), eps=np.array(eps),
                            bands=tuple(bands), mu_site_ccm=args.mu_ccm,
                            n_sites=args.n)
    fq_per_site = ingest_extinction(trace)
    report = depth_report(fq_per_site * args.n, args.n)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / "ingest.json"
    payload = {"fq_per_site": fq_per_site, **report.to_json_dict()}
    json_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                         encoding="utf-8")
    resolved = {"input": str(path), "mu_site_ccm": args.mu_ccm, "n_sites": args.n}
    _write_manifest(out, "ingest", resolved, args.seed, [json_path])
    return EXIT_OK


def _disorder_oracle_deviation(config: SweepConfig) -> float:
    """Dense-oracle spot check: realization 0 of every sigma, all temperatures."""
    from .disorder import _disorder_for, sample_realization

    j_scale = abs(config.spec.nn_coupling_cm1)
    worst = 0.0
    for sigma in config.sigma_values:
        disorder = _disorder_for(config, sigma)
        sample = sample_realization(config.spec, disorder, config.disorder.seed, 0)
        basis = diagonalize(sample.hamiltonian)
        gen = dipole_field_generator(config.spec.n_sites)
        for x in config.j_over_kbt:
            state = thermal_state(basis, j_scale / (KB_CM1_PER_K * x))
            got = qfi_thermal_dipole(basis, state)
            ref = dense_qfi_mixed(state.populations, basis.states, gen)
            worst = max(worst, abs(got - ref))
    return worst


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--seed", type=int, default=None,
                        help="master seed (mandatory for stochastic commands)")
    common.add_argument("--threads", type=int, default=None,
                        help="Monte Carlo worker count (default: machine parallelism)")
    common.add_argument("--oracle", action="store_true",
                        help="cross-check against the dense 2^N oracle (N <= 12)")

    dimer_flags = argparse.ArgumentParser(add_help=False)
    dimer_flags.add_argument("--preset", choices=["fmo", "pic"], default=None)
    dimer_flags.add_argument("--omega-a", type=float, default=None)
    dimer_flags.add_argument("--omega-b", type=float, default=None)
    dimer_flags.add_argument("--j", type=float, default=None)

    parser = argparse.ArgumentParser(
        prog="excitonqfi",
        description="QFI entanglement witnesses for molecular exciton aggregates",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dimer-sweep", parents=[common, dimer_flags],
                       help="thermal dimer measures vs inverse temperature (or theta)")
    p.add_argument("--beta-max", type=float, default=100.0, help="max beta in cm")
    p.add_argument("--rows", type=int, default=100)
    p.add_argument("--theta-sweep", action="store_true",
                   help="sweep the mixing angle instead of temperature")
    p.add_argument("--points", type=int, default=101, help="theta-sweep points")

    p = sub.add_parser("thermal-heatmap", parents=[common],
                       help="dimer heatmap over sin(2 theta) and J/kBT")
    p.add_argument("--grid", choices=["small", "medium", "large"], default="medium")
    p.add_argument("--b-max", type=float, default=3.0, help="max |J|/k_B T")

    p = sub.add_parser("chain", parents=[common],
                       help="open-chain QFI closed forms")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--k-list", default="1,3,5", help="k values for --n-max sweeps")

    p = sub.add_parser("ring", parents=[common], help="ring QFI closed forms")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("optimize", parents=[common, dimer_flags],
                       help="maximize QFI over local generators")
    p.add_argument("--system", choices=["chain", "ring", "dimer-thermal"],
                   required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--temperature", type=float, default=None)
    p.add_argument("--starts", type=int, default=32)
    p.add_argument("--max-iters", type=int, default=2000)

    p = sub.add_parser("disorder", parents=[common],
                       help="Monte Carlo disorder sweep of thermal QFI")
    p.add_argument("--config", default=None, help="TOML config with [sweep] table")
    p.add_argument("--preset", choices=["pic"], default=None)
    p.add_argument("--realizations", type=int, default=None,
                   help="override realization count")

    p = sub.add_parser("spectrum", parents=[common, dimer_flags],
                       help="simulated linear-response spectrum of a dimer")
    p.add_argument("--initial", choices=["e0", "e1"], default="e1")
    p.add_argument("--reorganization", type=float, default=35.0,
                   help="reorganization energy in cm^-1")
    p.add_argument("--cutoff", type=float, default=50.0,
                   help="Drude cutoff in cm^-1")
    p.add_argument("--temperature", type=float, default=300.0)

    p = sub.add_parser("ingest", parents=[common],
                       help="QFI per site from an extinction spectrum CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--mu-ccm", type=float, required=True,
                   help="single-site transition dipole in C cm")
    p.add_argument("--n", type=int, required=True, help="sites per aggregate")

    return parser


_HANDLERS = {
    "dimer-sweep": _cmd_dimer_sweep,
    "thermal-heatmap": _cmd_thermal_heatmap,
    "chain": _cmd_chain,
    "ring": _cmd_ring,
    "optimize": _cmd_optimize,
    "disorder": _cmd_disorder,
    "spectrum": _cmd_spectrum,
    "ingest": _cmd_ingest,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args, parser)
    except ExcitonQFIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
