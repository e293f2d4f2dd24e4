"""Command-line entry point, run configuration, and output serialization.

Subcommands
-----------
verify      run the operator-identity battery; exit 0 iff every check passes.
simulate    stream one run's diagnostics records (NDJSON or CSV).
sweep       breakdown times against amplitude, CSV + NDJSON summary.
study       energy-drift scaling against amplitude, CSV + NDJSON summary.
stability   perturbation growth over the lifespan window, NDJSON report.

Configuration may come from a flat ``key = value`` file (``--config``);
explicit command-line flags override file values, and the ``BH_SEED``
environment variable overrides any seed given elsewhere.  Every output file
embeds the fully resolved configuration, making runs self-describing.
Exit codes: 0 success, 1 assertion/verification failure, 2 configuration
error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from dataclasses import dataclass

from . import experiments as ex
from .records import dumps_header, dumps_record
from .solver import EvolutionConfig, simulate
from .spectral_core import ConfigurationError, GridField
from .verify import run_battery

SCHEMAS = {
    "records": "bh.records/1",
    "sweep": "bh.sweep/1",
    "sweep_summary": "bh.sweep_summary/1",
    "study": "bh.study/1",
    "study_summary": "bh.study_summary/1",
    "stability": "bh.stability/1",
}

SWEEP_CSV_COLUMNS = "eps,t_break,cause,n,t_break_2n"
STUDY_CSV_COLUMNS = "eps,rate"


@dataclass
class RunConfig:
    """Fully resolved configuration of one CLI invocation."""

    command: str = ""
    n: int = 256
    hilbert_term: bool = True
    cfl: float = 0.5
    t_max: float = 10.0
    sample_dt: float = 0.1
    breakdown_slope_factor: float = 10.0
    tail_fraction_max: float = 1e-6
    hyperviscosity: float = 0.0
    eps_list: tuple = (0.1,)
    k_list: tuple = ()
    seed: int = 7
    output_path: str = ""
    output_format: str = "ndjson"
    profile: str = "sine"
    w_profile: str = "cos_pair"
    quantity: str = "modified_energy_drift"
    k: int = 2
    jobs: int = 1

    def validate(self) -> None:
        if self.command not in ("verify", "simulate", "sweep", "study",
                                "stability"):
            raise ConfigurationError(f"unknown command {self.command!r}")
        if self.output_format not in ("ndjson", "csv"):
            raise ConfigurationError(
                f"output_format must be ndjson or csv, got {self.output_format!r}")
        if self.profile not in ex.PROFILES:
            raise ConfigurationError(
                f"unknown profile {self.profile!r}; options: "
                + ", ".join(sorted(ex.PROFILES)))
        if self.w_profile not in ex.PROFILES:
            raise ConfigurationError(f"unknown w_profile {self.w_profile!r}")
        if self.quantity not in ex.DRIFT_QUANTITIES:
            raise ConfigurationError(
                f"unknown quantity {self.quantity!r}; options: "
                + ", ".join(ex.DRIFT_QUANTITIES))
        if self.jobs < 1:
            raise ConfigurationError("jobs must be at least 1")
        if not self.eps_list:
            raise ConfigurationError("eps_list must not be empty")
        if any(e < 0 for e in self.eps_list):
            raise ConfigurationError("amplitudes must be nonnegative")
        # Delegate grid/time validation.
        self.evolution_config()

    def evolution_config(self) -> EvolutionConfig:
        return EvolutionConfig(
            n=self.n, hilbert_term=self.hilbert_term, cfl=self.cfl,
            t_max=self.t_max, sample_dt=self.sample_dt,
            breakdown_slope_factor=self.breakdown_slope_factor,
            tail_fraction_max=self.tail_fraction_max,
            hyperviscosity=self.hyperviscosity, k_list=tuple(self.k_list))

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["eps_list"] = list(self.eps_list)
        d["k_list"] = list(self.k_list)
        return d


_BOOL_WORDS = {"on": True, "true": True, "1": True, "yes": True,
               "off": False, "false": False, "0": False, "no": False}


def _parse_value(key: str, raw: str):
    kind = RunConfig.__dataclass_fields__[key].type
    raw = raw.strip()
    if key in ("eps_list",):
        return tuple(float(v) for v in raw.split(",") if v.strip())
    if key in ("k_list",):
        return tuple(int(v) for v in raw.split(",") if v.strip())
    if kind == "bool" or key == "hilbert_term":
        word = raw.lower()
        if word not in _BOOL_WORDS:
            raise ConfigurationError(f"cannot parse boolean value {raw!r} for {key}")
        return _BOOL_WORDS[word]
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    return raw


def parse_config_file(path: str) -> dict:
    """Flat ``key = value`` file with exactly the RunConfig keys."""
    values: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}")
    for lineno, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigurationError(
                f"{path}:{lineno}: expected 'key = value', got {text!r}")
        key, raw = (part.strip() for part in text.split("=", 1))
        if key not in RunConfig.__dataclass_fields__:
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _parse_value(key, raw)
    return values


# ----------------------------------------------------------------------------
# Argument parsing.

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bhsim",
        description="Pseudospectral Burgers-Hilbert simulator and verifier")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="flat key=value configuration file")
        p.add_argument("--n", type=int, help="grid size (power of two)")
        p.add_argument("--hilbert", choices=["on", "off"],
                       help="include the Hilbert forcing term")
        p.add_argument("--cfl", type=float, help="Courant factor in (0,1]")
        p.add_argument("--t-max", type=float, help="simulation horizon")
        p.add_argument("--sample-dt", type=float, help="diagnostics interval")
        p.add_argument("--breakdown-slope-factor", type=float,
                       help="slope blow-up threshold multiple")
        p.add_argument("--tail-fraction-max", type=float,
                       help="spectral tail threshold")
        p.add_argument("--hyperviscosity", type=float,
                       help="optional |d/dx|^8 coefficient (default 0)")
        p.add_argument("--eps", help="amplitude, or comma-separated list")
        p.add_argument("--k-list", help="comma-separated derivative counts")
        p.add_argument("--seed", type=int,
                       help="RNG seed (BH_SEED env overrides)")
        p.add_argument("--output", help="output path (default: stdout)")
        p.add_argument("--format", choices=["ndjson", "csv"],
                       help="record stream format")
        p.add_argument("--profile", help="initial profile name")
        p.add_argument("--jobs", type=int, help="concurrent simulations")

    p_verify = sub.add_parser("verify", help="run the identity battery")
    add_common(p_verify)

    p_sim = sub.add_parser("simulate", help="stream one run's records")
    add_common(p_sim)

    p_sweep = sub.add_parser("sweep", help="lifespan sweep over amplitudes")
    add_common(p_sweep)

    p_study = sub.add_parser("study", help="energy-drift scaling study")
    add_common(p_study)
    p_study.add_argument("--quantity", choices=list(ex.DRIFT_QUANTITIES),
                         help="which drift rate to measure")
    p_study.add_argument("--k", type=int, help="derivative count for E_k")
    p_study.add_argument("--w-profile", help="perturbation profile name")

    p_stab = sub.add_parser("stability", help="perturbation growth window")
    add_common(p_stab)
    p_stab.add_argument("--w-profile", help="perturbation profile name")
    return parser


_FLAG_TO_FIELD = {
    "n": "n", "cfl": "cfl", "t_max": "t_max", "sample_dt": "sample_dt",
    "breakdown_slope_factor": "breakdown_slope_factor",
    "tail_fraction_max": "tail_fraction_max",
    "hyperviscosity": "hyperviscosity", "seed": "seed",
    "output": "output_path", "format": "output_format", "profile": "profile",
    "jobs": "jobs", "quantity": "quantity", "k": "k", "w_profile": "w_profile",
}


def resolve_config(argv: list[str]) -> RunConfig:
    args = _build_parser().parse_args(argv)
    values: dict = {"command": args.command}
    if getattr(args, "config", None):
        file_values = parse_config_file(args.config)
        file_values.pop("command", None)
        values.update(file_values)
    for flag, field in _FLAG_TO_FIELD.items():
        val = getattr(args, flag, None)
        if val is not None:
            values[field] = val
    if getattr(args, "hilbert", None) is not None:
        values["hilbert_term"] = args.hilbert == "on"
    if getattr(args, "eps", None) is not None:
        values["eps_list"] = _parse_value("eps_list", args.eps)
    if getattr(args, "k_list", None) is not None:
        values["k_list"] = _parse_value("k_list", args.k_list)
    if os.environ.get("BH_SEED"):
        try:
            values["seed"] = int(os.environ["BH_SEED"])
        except ValueError:
            raise ConfigurationError(
                f"BH_SEED must be an integer, got {os.environ['BH_SEED']!r}")
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


# ----------------------------------------------------------------------------
# Output helpers.

class _Output:
    """Single-writer sink for one run; collects lines, then flushes once."""

    def __init__(self, path: str):
        self.path = path
        self.lines: list[str] = []

    def write(self, line: str) -> None:
        self.lines.append(line)

    def flush(self) -> None:
        text = "\n".join(self.lines) + "\n"
        if self.path:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _float_str(v) -> str:
    if v is None:
        return ""
    return repr(float(v))


def _record_csv_header(k_list, with_lin: bool) -> str:
    cols = ["t", "l2_norm", "max_slope", "tail_fraction", "dt"]
    for k in sorted(k_list):
        cols += [f"hk_{k}", f"standard_{k}", f"modified_{k}", f"correction_{k}",
                 f"ratio_{k}", f"hux_inf_{k}"]
    if with_lin:
        cols += ["lin_form_a", "lin_form_b", "lin_l2"]
    return ",".join(cols)


def _record_csv_row(rec, k_list, with_lin: bool) -> str:
    vals = [rec.t, rec.l2_norm, rec.max_slope, rec.tail_fraction, rec.dt]
    for k in sorted(k_list):
        r = rec.energies[k]
        vals += [rec.hk_norms[k], r.standard, r.modified, r.correction,
                 r.ratio, r.hux_inf]
    if with_lin:
        vals += [rec.lin.form_a, rec.lin.form_b, rec.lin.l2]
    return ",".join(_float_str(v) for v in vals)


# ----------------------------------------------------------------------------
# Subcommands.

def _cmd_verify(cfg: RunConfig) -> int:
    start = time.monotonic()
    checks, infos = run_battery(n=cfg.n, seed=cfg.seed)
    elapsed = time.monotonic() - start
    out = _Output(cfg.output_path)
    failures = 0
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        failures += 0 if c.passed else 1
        out.write(f"{status}  {c.name}: residual={c.residual:.3e} "
                  f"tol={c.tolerance:.1e}")
    for i in infos:
        out.write(f"INFO  {i.name}: {i.value:.6g}")
    out.write(f"{len(checks) - failures}/{len(checks)} identity checks passed "
              f"in {elapsed:.2f}s (n={cfg.n}, seed={cfg.seed})")
    out.flush()
    return 0 if failures == 0 else 1


def _cmd_simulate(cfg: RunConfig) -> int:
    if len(cfg.eps_list) != 1:
        raise ConfigurationError("simulate expects exactly one amplitude")
    eps = cfg.eps_list[0]
    u0 = ex.scaled_profile(ex.PROFILES[cfg.profile], cfg.n, eps)
    ecfg = cfg.evolution_config()
    out = _Output(cfg.output_path)
    if cfg.output_format == "ndjson":
        out.write(dumps_header(SCHEMAS["records"], cfg.as_dict()))
        simulate(u0, ecfg, lambda rec: out.write(dumps_record(rec)))
    else:
        out.write(f"# schema: {SCHEMAS['records']}")
        out.write("# config: " + json.dumps(cfg.as_dict(), separators=(",", ":")))
        out.write(_record_csv_header(cfg.k_list, with_lin=False))
        simulate(u0, ecfg,
                 lambda rec: out.write(_record_csv_row(rec, cfg.k_list, False)))
    out.flush()
    return 0


def _sweep_files(cfg: RunConfig) -> tuple[str, str]:
    base = cfg.output_path or "sweep"
    if base.endswith(".csv"):
        base = base[:-4]
    return base + ".csv", base + ".summary.ndjson"


def _cmd_sweep(cfg: RunConfig) -> int:
    result = ex.lifespan_sweep(list(cfg.eps_list), cfg.profile,
                               cfg.evolution_config(), jobs=cfg.jobs)
    csv_path, summary_path = _sweep_files(cfg)
    csv_out = _Output(csv_path)
    csv_out.write(f"# schema: {SCHEMAS['sweep']}")
    csv_out.write("# config: " + json.dumps(cfg.as_dict(), separators=(",", ":")))
    csv_out.write(SWEEP_CSV_COLUMNS)
    for e in result.entries:
        csv_out.write(",".join([
            _float_str(e.eps), _float_str(e.t_break), e.cause, str(e.n),
            _float_str(e.t_break_2n)]))
    csv_out.flush()

    summary = {
        "schema": SCHEMAS["sweep_summary"],
        "config": cfg.as_dict(),
        "slope": result.slope,
        "intercept": result.intercept,
        "r2": result.r2,
        "slope_2n": result.slope_2n,
        "slope_threshold_doubled": result.slope_m2,
        "entries": [
            {"eps": e.eps, "t_break": e.t_break, "cause": e.cause, "n": e.n,
             "t_break_2n": e.t_break_2n, "cause_2n": e.cause_2n,
             "t_break_m2": e.t_break_m2}
            for e in result.entries
        ],
        "warnings": result.warnings,
    }
    sum_out = _Output(summary_path)
    sum_out.write(json.dumps(summary, separators=(",", ":")))
    sum_out.flush()

    print(f"sweep: {len(result.entries)} amplitudes "
          f"({sum(1 for e in result.entries if e.t_break is None)} censored)")
    if result.slope is not None:
        print(f"  slope={result.slope:.4f} intercept={result.intercept:.4f} "
              f"r2={result.r2:.5f}")
        print(f"  slope at 2n={result.slope_2n}  "
              f"slope at doubled threshold={result.slope_m2}")
    else:
        print("  fit unavailable (fewer than 3 uncensored points)")
    for w in result.warnings:
        print(f"  warning: {w}")
    print(f"  wrote {csv_path} and {summary_path}")
    return 0


def _cmd_study(cfg: RunConfig) -> int:
    ecfg = cfg.evolution_config()
    if cfg.quantity in ("modified_energy_drift", "standard_energy_drift"):
        study = ex.energy_drift_study(list(cfg.eps_list), cfg.profile, cfg.k,
                                      ecfg, quantity=cfg.quantity)
    else:
        study = ex.lin_drift_study(list(cfg.eps_list), cfg.profile,
                                   cfg.w_profile, ecfg, quantity=cfg.quantity)
    base = cfg.output_path or "study"
    if base.endswith(".csv"):
        base = base[:-4]
    csv_out = _Output(base + ".csv")
    csv_out.write(f"# schema: {SCHEMAS['study']}")
    csv_out.write("# config: " + json.dumps(cfg.as_dict(), separators=(",", ":")))
    csv_out.write(STUDY_CSV_COLUMNS)
    for eps, rate in study.pairs:
        csv_out.write(f"{_float_str(eps)},{_float_str(rate)}")
    csv_out.flush()
    summary = {
        "schema": SCHEMAS["study_summary"],
        "config": cfg.as_dict(),
        "quantity": study.quantity,
        "exponent": study.exponent,
        "intercept": study.intercept,
        "r2": study.r2,
        "tolerance": study.tolerance,
        "pairs": [[e, r] for e, r in study.pairs],
        "warnings": study.warnings,
    }
    sum_out = _Output(base + ".summary.ndjson")
    sum_out.write(json.dumps(summary, separators=(",", ":")))
    sum_out.flush()
    print(f"study {study.quantity}: exponent="
          f"{'n/a' if study.exponent is None else f'{study.exponent:.4f}'}")
    for w in study.warnings:
        print(f"  warning: {w}")
    print(f"  wrote {base}.csv and {base}.summary.ndjson")
    return 0


def _cmd_stability(cfg: RunConfig) -> int:
    if len(cfg.eps_list) != 1:
        raise ConfigurationError("stability expects exactly one amplitude")
    eps = cfg.eps_list[0]
    u0 = ex.scaled_profile(ex.PROFILES[cfg.profile], cfg.n, eps)
    w0 = ex.PROFILES[cfg.w_profile](cfg.n)
    report = ex.stability_study(u0, w0, eps, cfg.evolution_config())
    payload = {
        "schema": SCHEMAS["stability"],
        "config": cfg.as_dict(),
        "eps": report.eps,
        "n": report.n,
        "t_end": report.t_end,
        "max_ratio": report.max_ratio,
        "max_lin_drift": report.max_lin_drift,
        "samples": report.samples,
        "broke_down": report.verdict.broke_down,
        "cause": report.verdict.cause,
    }
    out = _Output(cfg.output_path)
    out.write(json.dumps(payload, separators=(",", ":")))
    out.flush()
    print(f"stability eps={eps}: max ratio {report.max_ratio:.4f} over "
          f"t <= {report.t_end:.1f} ({report.samples} samples, "
          f"cause={report.verdict.cause})")
    return 0


def run(argv: list[str]) -> int:
    """Execute one CLI invocation; returns the process exit code."""
    try:
        cfg = resolve_config(argv)
        handler = {
            "verify": _cmd_verify,
            "simulate": _cmd_simulate,
            "sweep": _cmd_sweep,
            "study": _cmd_study,
            "stability": _cmd_stability,
        }[cfg.command]
        return handler(cfg)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
