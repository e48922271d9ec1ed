"""Batch driver: parameter sweeps over ramp rates and decay exponents, with
plot-ready CSV output.

Subcommands: quench, scaling, collapse, finite-ramp, phase-diagram.
Configuration comes from a TOML file (--config) with flag overrides; flags
win.  Energy units fix J = 1 unless overridden in the config.  Every output
file starts with a '#'-prefixed single-line JSON metadata block (resolved
config, artifact version, timestamp) followed by a CSV header row; rerunning
an identical config reproduces the data section byte for byte.

Exit codes: 0 success, 1 config error, 2 numerical failure, 3 partial
completion (manifest written).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, analysis, theory
from .dynamics import GridSpec, RampProtocol, run_quench
from .model import ChainParams, critical_data, winding_number

__all__ = ["main", "RunConfig", "ConfigError"]


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    alphas: list[float] = field(default_factory=lambda: [math.inf])
    betas: list[float] = field(default_factory=lambda: [math.inf])
    deltas: list[float] = field(default_factory=list)
    hopping: float = 1.0
    pairing: float = 1.0
    tol: float = 1e-9
    workers: int = 1
    out_dir: Path = Path("out")
    n_log: int = 110
    n_uniform: int = 60
    k_min_floor: float = 1e-4
    mu_start: float | None = None  # override of the default 2 mu_c ramp start
    g_f: float | None = None  # reduced final field for non-crossing ramps
    mu_values: list[float] = field(default_factory=list)  # phase-diagram scan
    grid_points: int = 10000  # winding-number grid

    def validate(self, command: str) -> None:
        for name in ("alphas", "betas"):
            vals = getattr(self, name)
            if not vals:
                raise ConfigError(f"{name} sweep list is empty")
            if any(not (g > 1.0) for g in vals):
                raise ConfigError(f"all {name} must exceed 1")
        if command != "phase-diagram":
            if not self.deltas:
                raise ConfigError("delta sweep list is empty")
            if any(d <= 0 for d in self.deltas):
                raise ConfigError("all deltas must be positive")
        if command == "scaling" and len(self.deltas) < 5:
            raise ConfigError("scaling needs a delta sweep of >= 5 values")
        if command == "collapse":
            if len(self.alphas) != 1 or len(self.betas) != 1:
                raise ConfigError("collapse takes exactly one (alpha, beta) pair")
            if len(self.deltas) < 3:
                raise ConfigError("collapse needs >= 3 deltas")
        if command == "finite-ramp":
            if self.g_f is None or self.g_f <= 1.0:
                raise ConfigError("finite-ramp needs g_f > 1 (non-crossing)")
        if command == "phase-diagram" and not self.mu_values:
            raise ConfigError("phase-diagram needs a mu list")
        if self.hopping <= 0 or self.pairing <= 0:
            raise ConfigError("hopping and pairing strengths must be positive")
        if not 1e-12 <= self.tol <= 1e-6:
            raise ConfigError("tol must lie in [1e-12, 1e-6]")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def grid_spec(self) -> GridSpec:
        return GridSpec(
            n_log=self.n_log, n_uniform=self.n_uniform, k_min_floor=self.k_min_floor
        )

    def as_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items()}
        d["out_dir"] = str(self.out_dir)
        d["alphas"] = [_exp_str(a) for a in self.alphas]
        d["betas"] = [_exp_str(b) for b in self.betas]
        return d


def _exp_str(g: float) -> str:
    return "inf" if g == math.inf else f"{g:g}"


def _parse_exponent(text: str) -> float:
    if text.strip().lower() in ("inf", "infinite", "infinity"):
        return math.inf
    return float(text)


def _load_config(path: Path) -> dict:
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    flat: dict = {}
    model = raw.get("model", {})
    for src, dst in (("alpha", "alphas"), ("beta", "betas")):
        if src in model:
            vals = model[src] if isinstance(model[src], list) else [model[src]]
            flat[dst] = [_parse_exponent(str(v)) for v in vals]
    for key in ("hopping", "pairing"):
        if key in model:
            flat[key] = float(model[key])
    ramp = raw.get("ramp", {})
    if "delta" in ramp:
        vals = ramp["delta"] if isinstance(ramp["delta"], list) else [ramp["delta"]]
        flat["deltas"] = [float(v) for v in vals]
    for key in ("mu_start", "g_f"):
        if key in ramp:
            flat[key] = float(ramp[key])
    grid = raw.get("grid", {})
    for key in ("n_log", "n_uniform", "grid_points"):
        if key in grid:
            flat[key] = int(grid[key])
    if "k_min_floor" in grid:
        flat["k_min_floor"] = float(grid["k_min_floor"])
    run = raw.get("run", {})
    for key, cast in (("tol", float), ("workers", int), ("out", str)):
        if key in run:
            flat["out_dir" if key == "out" else key] = cast(run[key])
    phase = raw.get("phase_diagram", {})
    if "mu" in phase:
        flat["mu_values"] = [float(v) for v in phase["mu"]]
    return flat


def _build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config is not None:
        for key, value in _load_config(Path(args.config)).items():
            if key == "out_dir":
                cfg.out_dir = Path(value)
            else:
                setattr(cfg, key, value)
    if args.alpha:
        cfg.alphas = [_parse_exponent(a) for a in args.alpha]
    if args.beta:
        cfg.betas = [_parse_exponent(b) for b in args.beta]
    if args.delta:
        cfg.deltas = [float(d) for d in args.delta]
    if args.out is not None:
        cfg.out_dir = Path(args.out)
    if args.workers is not None:
        cfg.workers = args.workers
    if args.tol is not None:
        cfg.tol = args.tol
    if args.grid_points is not None:
        cfg.grid_points = args.grid_points
    if getattr(args, "g_f", None) is not None:
        cfg.g_f = args.g_f
    if getattr(args, "mu", None):
        cfg.mu_values = [float(m) for m in args.mu]
    return cfg


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _write_table(path: Path, config: RunConfig, columns: list[str], rows, extra_meta=None):
    meta = {
        "artifact": "lrkitaev",
        "version": __version__,
        "units": "J = 1 fixes the energy scale; delta, mu in these units",
        "config": config.as_dict(),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    if extra_meta:
        meta.update(extra_meta)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write("# " + json.dumps(meta, sort_keys=True) + "\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


class Manifest:
    """Tracks completed sweep cells so interrupted runs can be resumed."""

    def __init__(self, out_dir: Path):
        self.path = out_dir / "manifest.json"
        self.data = {"completed": {}, "failed": {}}
        if self.path.exists():
            self.data = json.loads(self.path.read_text())
            self.data.setdefault("completed", {})
            self.data.setdefault("failed", {})

    def done(self, key: str) -> bool:
        fname = self.data["completed"].get(key)
        return fname is not None and (self.path.parent / fname).exists()

    def mark(self, key: str, filename: str) -> None:
        self.data["completed"][key] = filename
        self.data["failed"].pop(key, None)
        self._flush()

    def fail(self, key: str, message: str) -> None:
        self.data["failed"][key] = message
        self._flush()

    def _flush(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(json.dumps(self.data, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cells(config: RunConfig):
    for a in config.alphas:
        for b in config.betas:
            for d in config.deltas:
                yield a, b, d


def _cell_key(alpha, beta, delta) -> str:
    return f"alpha={_exp_str(alpha)},beta={_exp_str(beta)},delta={delta:g}"


def _lz_quadrature(
    params: ChainParams, ramp: RampProtocol, delta: float, ks: np.ndarray
) -> float:
    from .model import hopping_profile, pairing_profile

    gaps = pairing_profile(params, ks)
    plz = np.exp(-math.pi * gaps**2 / delta)
    # The two-level crossing picture only applies to modes whose detuning
    # changes sign during the ramp; the rest stay adiabatic.
    js = hopping_profile(params, ks)
    crossing = (ramp.mu_start / 2.0 - js) * (ramp.mu_end / 2.0 - js) < 0.0
    plz = np.where(crossing, plz, 0.0)
    area = np.trapezoid(plz, ks) + plz[0] * ks[0] + plz[-1] * (math.pi - ks[-1])
    return float(area / math.pi)


def cmd_quench(config: RunConfig) -> int:
    manifest = Manifest(config.out_dir)
    summary_rows = []
    failures = 0
    for alpha, beta, delta in _cells(config):
        key = _cell_key(alpha, beta, delta)
        params = ChainParams(
            hopping=config.hopping,
            pairing=config.pairing,
            hopping_exponent=alpha,
            pairing_exponent=beta,
        )
        fname = f"modes_alpha{_exp_str(alpha)}_beta{_exp_str(beta)}_delta{delta:g}.csv"
        mu_c = 2.0 * config.hopping
        ramp = RampProtocol.to_final_mu(mu_c, delta, 0.0, mu_start=config.mu_start)
        try:
            res = run_quench(
                params, ramp, config.grid_spec(), tol=config.tol, workers=config.workers
            )
        except (RuntimeError, ValueError) as exc:
            manifest.fail(key, f"{type(exc).__name__}: {exc}")
            print(f"FAILED {key}: {exc}", file=sys.stderr)
            failures += 1
            continue
        from .model import pairing_profile

        plz = np.exp(-math.pi * pairing_profile(params, res.k) ** 2 / delta)
        if not manifest.done(key):
            _write_table(
                config.out_dir / fname,
                config,
                ["k", "p_k_numeric", "p_k_lz_prediction"],
                zip(res.k.tolist(), res.p.tolist(), plz.tolist()),
                extra_meta={"cell": key, "n_exc": res.n_exc},
            )
            manifest.mark(key, fname)
        saddle, _ = theory.predicted_defect_density(beta, delta)
        summary_rows.append(
            (
                _exp_str(alpha),
                _exp_str(beta),
                delta,
                res.n_exc,
                _lz_quadrature(params, ramp, delta, res.k),
                saddle,
            )
        )
    _write_table(
        config.out_dir / "summary.csv",
        config,
        ["alpha", "beta", "delta", "n_exc", "n_exc_lz_quadrature", "n_exc_saddle_point"],
        summary_rows,
    )
    return 3 if failures else 0


def _sweep(config: RunConfig, alpha: float, beta: float, manifest: Manifest):
    """Run the delta sweep for one (alpha, beta) cell, resuming if possible."""
    params = ChainParams(
        hopping=config.hopping,
        pairing=config.pairing,
        hopping_exponent=alpha,
        pairing_exponent=beta,
    )
    mu_c = 2.0 * config.hopping
    results = []
    for delta in sorted(config.deltas):
        ramp = RampProtocol.to_final_mu(mu_c, delta, 0.0, mu_start=config.mu_start)
        res = run_quench(
            params, ramp, config.grid_spec(), tol=config.tol, workers=config.workers
        )
        results.append(res)
    return results


def cmd_scaling(config: RunConfig) -> int:
    manifest = Manifest(config.out_dir)
    phase_rows = []
    failures = 0
    for alpha in config.alphas:
        for beta in config.betas:
            key = f"alpha={_exp_str(alpha)},beta={_exp_str(beta)}"
            try:
                results = _sweep(config, alpha, beta, manifest)
                points = [(r.delta, r.n_exc) for r in results]
                fit = analysis.fit_power_law(points)
            except (RuntimeError, ValueError) as exc:
                manifest.fail(key, f"{type(exc).__name__}: {exc}")
                print(f"FAILED {key}: {exc}", file=sys.stderr)
                failures += 1
                continue
            fname = f"sweep_alpha{_exp_str(alpha)}_beta{_exp_str(beta)}.csv"
            _write_table(
                config.out_dir / fname,
                config,
                ["delta", "n_exc"],
                points,
                extra_meta={"cell": key, "theta_hat": fit.theta_hat},
            )
            manifest.mark(key, fname)
            phase_rows.append(
                (
                    _exp_str(alpha),
                    _exp_str(beta),
                    fit.theta_hat,
                    fit.stderr,
                    theory.theta_exponent(beta),
                )
            )
    _write_table(
        config.out_dir / "phase_diagram.csv",
        config,
        ["alpha", "beta", "theta_hat", "stderr", "theta_predicted"],
        phase_rows,
    )
    return 3 if failures else 0


def cmd_collapse(config: RunConfig) -> int:
    alpha, beta = config.alphas[0], config.betas[0]
    params = ChainParams(
        hopping=config.hopping,
        pairing=config.pairing,
        hopping_exponent=alpha,
        pairing_exponent=beta,
    )
    mu_c = 2.0 * config.hopping
    kz_exp = theory.kz_variables(critical_data(params).phi).kz_exponent
    # The spread statistic needs well-sampled transition regions, so the
    # collapse command enforces a denser logarithmic section than the default.
    grid = replace(config.grid_spec(), n_log=max(config.n_log, 240))
    curves = []
    for delta in sorted(config.deltas):
        ramp = RampProtocol.to_final_mu(mu_c, delta, 0.0, mu_start=config.mu_start)
        res = run_quench(params, ramp, grid, tol=config.tol, workers=config.workers)
        curves.append((delta, res.k, res.p))
    reports = []
    for label, exponent in (("kz", kz_exp), ("dynamical", 0.5)):
        rows = []
        for delta, ks, ps in curves:
            x = ks * delta ** (-exponent)
            rows.extend(zip([delta] * len(ks), x.tolist(), ps.tolist()))
        report = analysis.collapse_spread(curves, exponent)
        _write_table(
            config.out_dir / f"collapse_{label}.csv",
            config,
            ["delta", "x_rescaled", "p_k"],
            rows,
            extra_meta={"exponent": exponent, "spread": report.spread},
        )
        reports.append((label, exponent, report.spread))
    _write_table(
        config.out_dir / "collapse_report.csv",
        config,
        ["exponent_label", "exponent", "spread"],
        reports,
    )
    return 0


def cmd_finite_ramp(config: RunConfig) -> int:
    alpha, beta = config.alphas[0], config.betas[0]
    params = ChainParams(
        hopping=config.hopping,
        pairing=config.pairing,
        hopping_exponent=alpha,
        pairing_exponent=beta,
    )
    mu_c = 2.0 * config.hopping
    g_f = float(config.g_f)
    mu_end = 2.0 * g_f * config.hopping
    rows = []
    points = []
    for delta in sorted(config.deltas):
        ramp = RampProtocol.to_final_mu(mu_c, delta, mu_end, mu_start=config.mu_start)
        res = run_quench(
            params, ramp, config.grid_spec(), tol=config.tol, workers=config.workers
        )
        closed = [
            theory.finite_ramp_excitation(params, delta, float(k), g_f) for k in res.k
        ]
        closed_n = float(
            (
                np.trapezoid(closed, res.k)
                + closed[0] * res.k[0]
                + closed[-1] * (math.pi - res.k[-1])
            )
            / math.pi
        )
        rows.append((delta, res.n_exc, closed_n))
        points.append((delta, res.n_exc))
    slope = analysis.fit_power_law(points).theta_hat if len(points) >= 5 else math.nan
    _write_table(
        config.out_dir / "finite_ramp.csv",
        config,
        ["delta", "n_exc", "n_exc_closed_form"],
        rows,
        extra_meta={"g_f": g_f, "loglog_slope": slope},
    )
    print(f"finite-ramp log-log slope: {slope:.4g}")
    return 0


def cmd_phase_diagram(config: RunConfig) -> int:
    rows = []
    for alpha in config.alphas:
        for beta in config.betas:
            for mu in config.mu_values:
                params = ChainParams(
                    hopping=config.hopping,
                    pairing=config.pairing,
                    hopping_exponent=alpha,
                    pairing_exponent=beta,
                    chemical_potential=mu,
                )
                w = winding_number(params, grid_size=config.grid_points)
                rows.append((_exp_str(alpha), _exp_str(beta), mu, w))
    _write_table(
        config.out_dir / "winding.csv",
        config,
        ["alpha", "beta", "mu", "winding"],
        rows,
    )
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

_COMMANDS = {
    "quench": cmd_quench,
    "scaling": cmd_scaling,
    "collapse": cmd_collapse,
    "finite-ramp": cmd_finite_ramp,
    "phase-diagram": cmd_phase_diagram,
}


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrkitaev",
        description="Slow-quench sweeps for the long-range Kitaev chain",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("quench", "per-mode excitation probabilities for (alpha, beta, delta) cells"),
        ("scaling", "delta sweeps, exponent fits, and the dynamical phase diagram"),
        ("collapse", "rescaled excitation curves under KZ and dynamical exponents"),
        ("finite-ramp", "non-crossing ramps to a final reduced field g_f > 1"),
        ("phase-diagram", "winding-number map over a chemical-potential grid"),
    ):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", type=Path, help="TOML config file")
        sp.add_argument("--out", type=Path, help="output directory")
        sp.add_argument("--workers", type=int, help="parallel workers")
        sp.add_argument("--tol", type=float, help="integrator tolerance")
        sp.add_argument("--alpha", action="append", help="hopping exponent (repeatable; 'inf' allowed)")
        sp.add_argument("--beta", action="append", help="pairing exponent (repeatable; 'inf' allowed)")
        sp.add_argument("--delta", action="append", help="ramp rate (repeatable)")
        sp.add_argument("--grid-points", dest="grid_points", type=int, help="winding grid size")
        if name == "finite-ramp":
            sp.add_argument("--g-f", dest="g_f", type=float, help="final reduced field (> 1)")
        if name == "phase-diagram":
            sp.add_argument("--mu", action="append", help="chemical potential (repeatable)")
    return parser


def main(argv=None) -> int:
    parser = _make_parser()
    args = parser.parse_args(argv)
    try:
        config = _build_config(args)
        config.validate(args.command)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](config)
    except (RuntimeError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
