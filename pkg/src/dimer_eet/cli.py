"""Command-line front end.

Verbs: ``evolve``, ``steady``, ``figure --id N``, ``validate --tol X`` and
``sweep``.  Settings may also come from a flat ``key = value`` file given
with ``--config``; explicit flags win over the file.

Exit codes: 0 success, 1 validation failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import itertools
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import analytic, figures, numeric
from .exceptions import DimerError
from .model import DimerParams

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2

SCENARIOS = ("evolve", "steady", "figure", "validate", "sweep")
SWEEP_AXES = ("theta", "delta_omega", "xi", "gamma", "eta", "tm", "dt_bath")

DEFAULTS = {
    "theta": None,
    "delta_omega": None,
    "xi": 5.0,
    "gamma": 1.0,
    "eta1": 0.005,
    "eta2": 0.005,
    "tm": 0.0,
    "dt_bath": 0.0,
    "t_max": 10.0,
    "points": 501,
    "format": "csv",
    "out": None,
    "id": None,
    "tol": 1e-6,
    "axis": None,
    "series": False,
    "include_zero": False,
}


class ConfigError(Exception):
    pass


def parse_number(text) -> float:
    """Float with an optional ``pi`` factor: ``0.3pi``, ``pi/2``, ``-1.5``."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().lower().replace(" ", "")
    try:
        if "pi" in s:
            head, _, tail = s.partition("pi")
            coeff = 1.0 if head in ("", "+") else -1.0 if head == "-" else float(head.rstrip("*"))
            value = coeff * math.pi
            if tail:
                if not tail.startswith("/"):
                    raise ValueError(text)
                value /= float(tail[1:])
            return value
        return float(s)
    except ValueError:
        raise ConfigError(f"cannot parse number {text!r}") from None


def parse_axis(spec: str):
    """``name=start:stop:n`` (inclusive linspace) or ``name=v1,v2,...``."""
    name, sep, values = spec.partition("=")
    name = name.strip().replace("-", "_")
    if not sep or name not in SWEEP_AXES:
        raise ConfigError(f"invalid axis {spec!r}; names are {', '.join(SWEEP_AXES)}")
    if ":" in values:
        parts = values.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range axis must be start:stop:n, got {values!r}")
        n = int(parts[2])
        if n < 1:
            raise ConfigError("axis needs at least one point")
        grid = np.linspace(parse_number(parts[0]), parse_number(parts[1]), n)
    else:
        grid = np.array([parse_number(v) for v in values.split(",") if v.strip()])
    if grid.size == 0:
        raise ConfigError(f"axis {name!r} is empty")
    return name, [float(v) for v in grid]


def read_config_file(path) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lstrip("-").replace("-", "_")
        if not sep or key not in DEFAULTS:
            raise ConfigError(f"{path}:{lineno}: unknown or malformed entry {raw!r}")
        value = value.strip()
        if key == "axis":
            values.setdefault("axis", []).append(value)
        else:
            values[key] = value
    return values


@dataclass
class RunConfig:
    scenario: str
    theta: Optional[float] = None
    delta_omega: Optional[float] = None
    xi: float = 5.0
    gamma: float = 1.0
    eta1: float = 0.005
    eta2: float = 0.005
    t_mean: float = 0.0
    t_diff: float = 0.0
    t_max: float = 10.0
    n_points: int = 501
    out: Optional[str] = None
    format: str = "csv"
    figure_id: Optional[int] = None
    tol: float = 1e-6
    axes: list = field(default_factory=list)
    series: bool = False
    include_zero: bool = False

    def validate(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.n_points < 2:
            raise ConfigError("points must be >= 2")
        if not self.t_max > 0:
            raise ConfigError("t-max must be > 0")
        if self.theta is not None and self.delta_omega is not None:
            raise ConfigError("give only one of --theta and --delta-omega")
        if self.scenario in ("evolve", "steady") and self.theta is None and self.delta_omega is None:
            raise ConfigError("give exactly one of --theta and --delta-omega")
        if self.scenario == "figure" and self.figure_id not in figures.FIGURE_IDS:
            raise ConfigError(f"figure id must be one of {figures.FIGURE_IDS}")
        if self.scenario == "validate" and not self.tol > 0:
            raise ConfigError("tol must be > 0")
        if self.scenario == "sweep" and not self.axes:
            raise ConfigError("sweep needs at least one --axis")

    def params(self, **overrides) -> DimerParams:
        values = dict(theta=self.theta, delta_omega=self.delta_omega, xi=self.xi,
                      gamma=self.gamma, eta1=self.eta1, eta2=self.eta2,
                      tm=self.t_mean, dt_bath=self.t_diff)
        values.update(overrides)
        if "eta" in values:
            values["eta1"] = values["eta2"] = values.pop("eta")
        if "theta" in overrides:
            values["delta_omega"] = None
        if "delta_omega" in overrides:
            values["theta"] = None
        if (values["theta"] is None) == (values["delta_omega"] is None):
            raise ConfigError("give exactly one of theta and delta_omega")
        T1 = values["tm"] + values["dt_bath"] / 2
        T2 = values["tm"] - values["dt_bath"] / 2
        return DimerParams(xi=values["xi"], theta=values["theta"],
                           delta_omega=values["delta_omega"],
                           gamma1=values["gamma"], gamma2=values["gamma"],
                           eta1=values["eta1"], eta2=values["eta2"], T1=T1, T2=T2)

    def digest(self) -> str:
        settings = {k: v for k, v in asdict(self).items() if k != "out"}
        blob = json.dumps(settings, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return value


def render(records, columns, metadata, fmt: str) -> str:
    """Serialize records; CSV carries metadata as leading ``#`` comments."""
    if fmt == "json":
        return json.dumps({"metadata": metadata, "columns": list(columns),
                           "records": records}, indent=1, sort_keys=True) + "\n"
    buf = io.StringIO()
    for key in sorted(metadata):
        buf.write(f"# {key}: {metadata[key]}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_fmt(rec.get(c, "")) for c in columns])
    return buf.getvalue()


def emit(text: str, out: Optional[str]):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def _metadata(cfg: RunConfig, **extra) -> dict:
    meta = {"config_sha256": cfg.digest(), "scenario": cfg.scenario}
    meta.update({k: v for k, v in extra.items() if v is not None})
    return meta


def _param_meta(p: DimerParams) -> dict:
    return {"theta": repr(p.mixing_angle), "xi": repr(p.xi), "T1": repr(p.T1),
            "T2": repr(p.T2), "gamma": repr(p.gamma1), "eta1": repr(p.eta1),
            "eta2": repr(p.eta2)}


def run_evolve(cfg: RunConfig) -> int:
    p = cfg.params()
    times = np.linspace(0.0, cfg.t_max, cfg.n_points)
    records = figures.time_records(p, times)
    emit(render(records, figures.TIME_COLUMNS, _metadata(cfg, **_param_meta(p)), cfg.format),
         cfg.out)
    return EXIT_OK


def steady_record(p: DimerParams) -> dict:
    rec = {"theta": p.mixing_angle, "T_m": p.t_mean, "dT": p.t_diff,
           "P_ss": analytic.steady_transfer_probability(p),
           "C_ss": analytic.steady_concurrence(p)}
    if p.t_mean > 0:
        rec["P_ss_high_T"] = analytic.steady_transfer_probability(p, high_t_approx=True)
    return rec


def run_steady(cfg: RunConfig) -> int:
    p = cfg.params()
    rec = steady_record(p)
    cols = ("theta", "T_m", "dT", "P_ss", "C_ss", "P_ss_high_T")
    emit(render([rec], cols, _metadata(cfg, **_param_meta(p)), cfg.format), cfg.out)
    return EXIT_OK


def run_figure(fig_id: int, out, fmt: str = "csv", cfg: Optional[RunConfig] = None) -> list:
    """Write one dataset file per curve of figure ``fig_id`` into ``out``."""
    cfg = cfg or RunConfig("figure", figure_id=fig_id, format=fmt)
    outdir = Path(out if out is not None else f"figure{fig_id}")
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for curve in figures.figure_curves(fig_id):
        meta = _metadata(cfg, figure=fig_id, curve=curve.label, kind=curve.kind)
        meta.update({k: repr(v) if isinstance(v, float) else v
                     for k, v in curve.metadata.items()})
        if curve.params is not None:
            meta.update(_param_meta(curve.params))
        path = outdir / f"fig{fig_id}_{curve.label}.{fmt}"
        path.write_text(render(curve.records(), curve.columns, meta, fmt))
        written.append(path)
    return written


def run_validate(tol: float, out=None, fmt: str = "json", include_zero: bool = False,
                 t_max: float = 10.0, n_points: int = 201):
    """Run the analytic-vs-numeric gate; returns (exit code, report)."""
    if not tol > 0:
        raise ConfigError("tol must be > 0")
    report = numeric.cross_validate(numeric.default_validation_grid(include_zero),
                                    np.linspace(0.0, t_max, n_points), tol=tol)
    doc = report.to_dict()
    if fmt == "json":
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    else:
        text = render(report.to_records(),
                      ("quantity", "max_abs_deviation", "tol", "pass", "worst_point"),
                      {"status": doc["status"]}, "csv")
    if out is not None:
        emit(text, out)
    return (EXIT_OK if report.passed else EXIT_VALIDATION), report


def run_sweep(cfg: RunConfig) -> list:
    """Cartesian product over ``cfg.axes``; one record per point."""
    if not cfg.axes:
        raise ConfigError("sweep needs at least one axis")
    names = [name for name, _ in cfg.axes]
    if len(set(names)) != len(names):
        raise ConfigError("duplicate sweep axis")
    if "theta" in names and "delta_omega" in names:
        raise ConfigError("sweep over theta and delta_omega at once is ambiguous")
    times = np.linspace(0.0, cfg.t_max, cfg.n_points) if cfg.series else None
    records = []
    for combo in itertools.product(*(vals for _, vals in cfg.axes)):
        point = dict(zip(names, combo))
        try:
            p = cfg.params(**point)
        except DimerError as exc:
            raise ConfigError(f"invalid sweep point {point}: {exc}") from None
        base = dict(point)
        base.update({"P_ss": analytic.steady_transfer_probability(p),
                     "C_ss": analytic.steady_concurrence(p)})
        if times is None:
            records.append(base)
        else:
            for row in figures.time_records(p, times):
                records.append({**base, "t": row["t"], "P": row["P"], "C": row["C"]})
    return records


def _sweep_columns(cfg: RunConfig):
    cols = [name for name, _ in cfg.axes] + ["P_ss", "C_ss"]
    if cfg.series:
        cols += ["t", "P", "C"]
    return cols


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("physical parameters")
    angle = g.add_mutually_exclusive_group()
    angle.add_argument("--theta", help="mixing angle in rad; accepts e.g. 0.3pi")
    angle.add_argument("--delta-omega", dest="delta_omega", help="detuning omega1 - omega2")
    g.add_argument("--xi", help="dipole coupling (default 5)")
    g.add_argument("--gamma", help="bath coupling rate for both baths (default 1)")
    g.add_argument("--eta1", help="Ohmic slope of bath 1 (default 0.005)")
    g.add_argument("--eta2", help="Ohmic slope of bath 2 (default 0.005)")
    g.add_argument("--tm", help="mean bath temperature T_m (default 0)")
    g.add_argument("--dt-bath", dest="dt_bath", help="temperature difference T1 - T2")
    g.add_argument("--t-max", dest="t_max", help="end of the time grid (default 10)")
    g.add_argument("--points", help="time grid points (default 501)")
    o = common.add_argument_group("output")
    o.add_argument("--format", choices=("csv", "json"))
    o.add_argument("--out", help="output file (directory for figure); stdout if omitted")
    o.add_argument("--config", help="flat key=value file; flags override it")

    parser = argparse.ArgumentParser(
        prog="dimer-eet",
        description="Energy transfer and entanglement in a dissipative dimer.")
    sub = parser.add_subparsers(dest="scenario", required=True)
    sub.add_parser("evolve", parents=[common], help="P(t), C(t) and moments from |eg>")
    sub.add_parser("steady", parents=[common], help="steady-state P_ss and C_ss")
    fig = sub.add_parser("figure", parents=[common], help="regenerate a figure dataset")
    fig.add_argument("--id", help="figure number 2-11")
    val = sub.add_parser("validate", parents=[common], help="analytic vs numeric gate")
    val.add_argument("--tol", help="max allowed deviation (default 1e-6)")
    val.add_argument("--include-zero", dest="include_zero", action="store_const",
                     const="true", help="add T_m = 0 to the validation grid")
    sw = sub.add_parser("sweep", parents=[common], help="Cartesian parameter sweep")
    sw.add_argument("--axis", action="append",
                    help="name=start:stop:n or name=v1,v2; names: " + ", ".join(SWEEP_AXES))
    sw.add_argument("--series", action="store_const", const="true",
                    help="include P(t), C(t) per point")
    return parser


def _truthy(value) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in ("1", "true", "yes", "on")


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    merged = dict(DEFAULTS)
    if getattr(ns, "config", None):
        try:
            merged.update(read_config_file(ns.config))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
    for key in DEFAULTS:
        value = getattr(ns, key, None)
        if value is not None:
            merged[key] = value
    def opt(key):
        return None if merged[key] is None else parse_number(merged[key])

    try:
        cfg = RunConfig(
            scenario=ns.scenario,
            theta=opt("theta"),
            delta_omega=opt("delta_omega"),
            xi=parse_number(merged["xi"]),
            gamma=parse_number(merged["gamma"]),
            eta1=parse_number(merged["eta1"]),
            eta2=parse_number(merged["eta2"]),
            t_mean=parse_number(merged["tm"]),
            t_diff=parse_number(merged["dt_bath"]),
            t_max=parse_number(merged["t_max"]),
            n_points=int(merged["points"]),
            out=merged["out"],
            format=str(merged["format"]),
            figure_id=None if merged["id"] is None else int(merged["id"]),
            tol=parse_number(merged["tol"]),
            axes=[parse_axis(a) for a in (merged["axis"] or [])],
            series=_truthy(merged["series"]),
            include_zero=_truthy(merged["include_zero"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        if cfg.scenario == "evolve":
            return run_evolve(cfg)
        if cfg.scenario == "steady":
            return run_steady(cfg)
        if cfg.scenario == "figure":
            for path in run_figure(cfg.figure_id, cfg.out, cfg.format, cfg):
                print(path)
            return EXIT_OK
        if cfg.scenario == "validate":
            try:
                code, report = run_validate(cfg.tol, cfg.out, cfg.format, cfg.include_zero,
                                            cfg.t_max, cfg.n_points)
            except DimerError as exc:
                print(f"FAIL: {exc}", file=sys.stderr)
                return EXIT_VALIDATION
            status = "PASS" if report.passed else "FAIL"
            key, dev, point = report.worst
            print(f"{status}: worst {key} deviation {dev:.3e} (tol {cfg.tol:g}) at {point}")
            return code
        records = run_sweep(cfg)
        meta = _metadata(cfg, axes=";".join(f"{n}[{len(v)}]" for n, v in cfg.axes))
        emit(render(records, _sweep_columns(cfg), meta, cfg.format), cfg.out)
        return EXIT_OK
    except (ConfigError, DimerError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
