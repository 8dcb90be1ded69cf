"""Command-line experiment driver.

Every subcommand reads an :class:`ExperimentConfig` (``key = value`` file,
JSON manifest, and ``--set key=value`` overrides), writes CSV (and SVG)
results plus a ``manifest.json`` that reproduces the run, and exits with 0
only if every task succeeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from gmpy2 import mpq

from . import __version__
from .breakdown import (capacity_trace, delta_trace, detect_Nc_kink, detect_Nc_spurious, pade_block,
                        slope_fit)
from .conformal import composition_matrix, find_z_inf, mcut_map, parse_map
from .noise import NoiseSpec, derived_seed, draw_matrix
from .numeric import PrecisionContext, as_rational, required_precision
from .output import default_out_dir, write_csv, write_json, write_svg_scatter
from .pade import build_pade, find_poles, flag_spurious, mcut_locus, psi_from_pade_diff
from .series import (add_noise, binomial_series, painleve1_series, parse_bfile, phi36_series,
                     series_from_file)
from .theory import predict_Nc, variance_asymptotic, variance_exact

log = logging.getLogger("padenoise")

COMMANDS = ("poles", "capacity", "kink", "slope", "variance", "zinf", "application")
DEFAULT_EPS_GRID = "1e-10,1e-15,1e-20,1e-25,1e-30,1e-35,1e-40"


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    function: str = "binomial"
    alpha: str = "-1/9"
    M: int = 1
    sequence_file: str | None = None
    series_file: str | None = None
    noise: str | None = None
    epsilon: str | None = None
    digits: int | None = None
    seed: int = 0
    realizations: int = 5
    N: str | None = None
    eps_grid: str | None = None
    delta: float = 1e-3
    detector: str = "kink"
    precision: int | None = None
    map: str | None = None
    tol: float = 0.1
    window: float = 3.0
    doublet_tol: float | None = None
    samples: int = 256
    m_values: str = "10,20,30,40,50,60,80"
    mc_realizations: int = 10000
    formats: str = "csv,svg"
    jobs: int = 1

    @classmethod
    def field_names(cls) -> set[str]:
        return {f.name for f in fields(cls)}

    def updated(self, pairs: dict) -> "ExperimentConfig":
        known = self.field_names()
        kw = {}
        types = {f.name: f.type for f in fields(self)}
        for k, v in pairs.items():
            if k not in known:
                raise ConfigError(f"unknown config key {k!r}")
            kw[k] = _coerce(types[k], v)
        return replace(self, **kw)


def _coerce(tp: str, v):
    if v is None or (isinstance(v, str) and v.strip().lower() in ("", "none", "null")):
        return None
    base = tp.replace(" | None", "")
    try:
        if base == "int":
            return int(v)
        if base == "float":
            return float(v)
    except ValueError:
        raise ConfigError(f"bad value {v!r} for {tp}") from None
    return str(v)


def read_config_file(path) -> dict:
    """``key = value`` lines ('#' comments) or a JSON manifest's ``config`` block."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        return data.get("config", data)
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip().strip('"').strip("'")
    return out


def parse_N(text: str) -> list[int]:
    """``"30,33,36"`` or ``"lo:hi"`` / ``"lo:hi:step"`` (inclusive)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            bits = [int(b) for b in part.split(":")]
            lo, hi = bits[0], bits[1]
            step = bits[2] if len(bits) > 2 else 1
            out.extend(range(lo, hi + 1, step))
        elif part:
            out.append(int(part))
    if not out or min(out) < 1:
        raise ConfigError(f"bad N specification {text!r}")
    return sorted(set(out))


def parse_grid(text: str) -> list[mpq]:
    return [as_rational(t.strip()) for t in text.split(",") if t.strip()]


# ------------------------------------------------------------------ config -> objects

_COMMAND_DEFAULTS = {
    "poles": {"N": "30,33,36", "noise": "truncation", "digits": 40},
    "capacity": {"N": "2:60", "noise": "none"},
    "kink": {"N": "2:80", "noise": "additive", "epsilon": "1e-20"},
    "slope": {"N": "2:80", "noise": "additive", "eps_grid": DEFAULT_EPS_GRID},
    "variance": {"noise": "additive", "epsilon": "1"},
    "zinf": {"N": "60", "noise": "none"},
    "application": {"N": "2:80", "noise": "additive", "eps_grid": DEFAULT_EPS_GRID, "function": "painleve1"},
}


def with_command_defaults(cfg: ExperimentConfig, command: str, explicit: set[str]) -> ExperimentConfig:
    kw = {k: v for k, v in _COMMAND_DEFAULTS.get(command, {}).items() if k not in explicit}
    return cfg.updated(kw) if kw else cfg


def effective_M(cfg: ExperimentConfig) -> int:
    if cfg.function == "painleve1":
        return 2
    if cfg.function == "phi36":
        return 1
    return cfg.M


def config_map(cfg: ExperimentConfig):
    return parse_map(cfg.map) if cfg.map else mcut_map(effective_M(cfg))


def build_series(cfg: ExperimentConfig, order: int):
    if cfg.function == "binomial":
        return binomial_series(as_rational(cfg.alpha), cfg.M, order)
    if cfg.function == "painleve1":
        return painleve1_series(order // 2 + 1)
    if cfg.function == "phi36":
        if not cfg.sequence_file:
            raise ConfigError("phi36 needs --sequence-file")
        return phi36_series(parse_bfile(cfg.sequence_file), order)
    if cfg.function == "file":
        if not cfg.series_file:
            raise ConfigError("function=file needs series_file")
        return series_from_file(cfg.series_file)
    raise ConfigError(f"unknown function {cfg.function!r}")


def noise_spec(cfg: ExperimentConfig, epsilon=None) -> NoiseSpec:
    mode = cfg.noise or "none"
    if mode == "additive":
        eps = epsilon if epsilon is not None else cfg.epsilon
        if eps is None:
            raise ConfigError("additive noise needs epsilon")
        e = as_rational(eps)
        if e == 0:
            return NoiseSpec("none", seed=cfg.seed, realizations=cfg.realizations)
        return NoiseSpec.additive(e, cfg.seed, cfg.realizations)
    if mode == "truncation":
        if cfg.digits is None:
            raise ConfigError("truncation noise needs digits")
        return NoiseSpec("truncation", digits=cfg.digits, seed=cfg.seed, realizations=1)
    if mode == "none":
        return NoiseSpec("none", seed=cfg.seed, realizations=1)
    raise ConfigError(f"unknown noise mode {mode!r}")


class _CtxFor:
    """Picklable per-N precision policy."""

    def __init__(self, precision, noise_digits, capacity):
        self.precision, self.noise_digits, self.capacity = precision, noise_digits, capacity

    def __call__(self, N: int) -> PrecisionContext:
        if self.precision:
            return PrecisionContext(int(self.precision))
        return required_precision(max(N, 1), self.noise_digits, self.capacity)


def ctx_policy(cfg: ExperimentConfig, spec: NoiseSpec) -> _CtxFor:
    return _CtxFor(cfg.precision, spec.noise_digits, config_map(cfg).capacity)


# ------------------------------------------------------------------ tasks

def _task_kink(cfg_d: dict, eps: str | None, index: int):
    cfg = ExperimentConfig(**cfg_d)
    Ns = parse_N(cfg.N)
    f = build_series(cfg, 2 * max(Ns) + 2)
    spec = noise_spec(cfg, eps)
    if spec.mode == "none":
        return {"N_c": None, "trace": [(n, 0.0) for n in Ns]}
    tr = delta_trace(f, spec, Ns, index, cfg.delta, ctx_for=ctx_policy(cfg, spec))
    return {"N_c": detect_Nc_kink(tr, cfg.delta), "trace": [(p.N, p.delta) for p in tr]}


def _task_spurious(cfg_d: dict, eps: str | None, index: int):
    cfg = ExperimentConfig(**cfg_d)
    Ns = parse_N(cfg.N)
    f = build_series(cfg, 2 * max(Ns) + 2)
    spec = noise_spec(cfg, eps)
    nc = detect_Nc_spurious(f, spec, mcut_locus(effective_M(cfg)), Ns, index, cfg.tol, cfg.window,
                            cfg.doublet_tol, ctx_for=ctx_policy(cfg, spec))
    return {"N_c": nc, "trace": []}


def run_tasks(tasks: list, jobs: int = 1) -> dict:
    """Run ``(key, fn, args)`` tasks; results keyed and merged in key order."""
    results = {}
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futs = {key: ex.submit(fn, *args) for key, fn, args in tasks}
            for key, fut in futs.items():
                try:
                    results[key] = {"ok": True, "value": fut.result()}
                except Exception as e:  # recorded per task
                    results[key] = {"ok": False, "error": f"{type(e).__name__}: {e}"}
    else:
        for key, fn, args in tasks:
            try:
                results[key] = {"ok": True, "value": fn(*args)}
            except Exception as e:
                log.error("task %s failed: %s", key, e)
                results[key] = {"ok": False, "error": f"{type(e).__name__}: {e}"}
    return dict(sorted(results.items()))


def _ensemble_tasks(cfg: ExperimentConfig, eps_values: list):
    fn = _task_kink if cfg.detector == "kink" else _task_spurious
    if cfg.detector not in ("kink", "spurious"):
        raise ConfigError(f"unknown detector {cfg.detector!r}")
    d = asdict(cfg)
    R = cfg.realizations if (cfg.noise or "none") == "additive" else 1
    return [((str(e), i), fn, (d, None if e is None else str(e), i)) for e in eps_values for i in range(R)]


def _summaries(results: dict, cfg: ExperimentConfig, eps_values: list):
    import statistics

    rows, traces = [], []
    for e in eps_values:
        vals, seeds = [], []
        for (ek, i), r in results.items():
            if ek != str(e):
                continue
            seeds.append(derived_seed(cfg.seed, i))
            if r["ok"] and r["value"]["N_c"] is not None:
                vals.append(r["value"]["N_c"])
            if r["ok"]:
                traces.extend((float(e) if e is not None else 0.0, n, d, i) for n, d in r["value"]["trace"])
        med = statistics.median(vals) if vals else None
        rows.append((e, med, min(vals) if vals else None, max(vals) if vals else None,
                     statistics.fmean(vals) if vals else None, cfg.seed, len(vals)))
    return rows, traces


def _meta(cfg: ExperimentConfig, command: str) -> dict:
    return {"command": command, "seed": cfg.seed, "noise": cfg.noise, "version": __version__}


# ------------------------------------------------------------------ commands

def cmd_poles(cfg: ExperimentConfig, out: Path) -> dict:
    Ns = parse_N(cfg.N)
    f = build_series(cfg, 2 * max(Ns) + 2)
    spec = noise_spec(cfg)
    g, real = add_noise(f, spec, 0)
    M = effective_M(cfg)
    locus = mcut_locus(M)
    ctx_for = ctx_policy(cfg, spec)
    dt = cfg.doublet_tol
    if dt is None:
        from .breakdown import noise_resolution

        dt = noise_resolution(spec) or 1e-3
    summary, failures, svg = [], {}, {}
    for N in Ns:
        ctx = ctx_for(N)
        try:
            L, Nd = pade_block(f, N, ctx)
            ps = find_poles(build_pade(g, Nd, L, ctx), ctx)
            part = flag_spurious(ps, expected_locus=locus, tol=cfg.tol, doublet_tol=dt, window=cfg.window)
        except Exception as e:
            failures[N] = f"{type(e).__name__}: {e}"
            continue
        rows = []
        for i, w in enumerate(ps.poles):
            wc = complex(w)
            rows.append((wc.real, wc.imag, float(ps.residues[i]), float(ps.nearest_zero[i]), part.labels[i]))
        write_csv(out / f"poles_N{N}.csv", ["re", "im", "residue_mag", "nearest_zero_dist", "classification"],
                  rows, dict(_meta(cfg, "poles"), N=N, block=f"[{L},{Nd}]", precision=ctx.decimal_digits))
        nsp = len(part.spurious_in_window(ps.poles))
        summary.append((N, len(ps), len(part.on_locus), len(part.spurious), nsp, len(part.doublet)))
        svg[f"N={N}"] = [(complex(w).real, complex(w).imag) for w in ps.poles if abs(complex(w)) < cfg.window]
    write_csv(out / "poles_summary.csv", ["N", "poles", "on_locus", "spurious", "spurious_in_window", "doublet"],
              summary, _meta(cfg, "poles"))
    onset = next((r[0] for r in summary if r[4] > 0), None)
    if "svg" in cfg.formats:
        write_svg_scatter(out / "poles.svg", svg, "Pade poles", "Re w", "Im w", equal_aspect=True)
    return {"onset": onset, "summary": summary, "failures": failures}


def cmd_capacity(cfg: ExperimentConfig, out: Path) -> dict:
    Ns = parse_N(cfg.N)
    f = build_series(cfg, 2 * max(Ns) + 2)
    spec = noise_spec(cfg)
    g, _ = add_noise(f, spec, 0)
    tr = capacity_trace(g, Ns, ctx_for=ctx_policy(cfg, spec))
    write_csv(out / "capacity.csv", ["N", "d_N", "inv", "richardson"], tr.rows(), _meta(cfg, "capacity"))
    if "svg" in cfg.formats:
        write_svg_scatter(out / "capacity.svg",
                          {"1/d_N": [(e.N, e.inv) for e in tr.entries],
                           "richardson": [(e.N, e.richardson) for e in tr.entries if e.richardson is not None]},
                          "capacity estimate", "N", "1/d_N")
    return {"rows": tr.rows(), "skipped": tr.skipped, "failures": {}}


def _breakdown_run(cfg: ExperimentConfig, out: Path, eps_values: list, command: str) -> dict:
    tasks = _ensemble_tasks(cfg, eps_values)
    results = run_tasks(tasks, cfg.jobs)
    rows, traces = _summaries(results, cfg, eps_values)
    write_csv(out / "breakdown.csv", ["epsilon", "N_c_median", "N_c_min", "N_c_max", "N_c_mean", "seed", "count"],
              rows, _meta(cfg, command))
    if traces:
        write_csv(out / "delta_traces.csv", ["epsilon", "N", "delta", "realization"], traces, _meta(cfg, command))
    failures = {f"{k[0]}#{k[1]}": r["error"] for k, r in results.items() if not r["ok"]}
    return {"rows": rows, "failures": failures}


def cmd_kink(cfg: ExperimentConfig, out: Path) -> dict:
    eps = cfg.epsilon
    res = _breakdown_run(cfg, out, [eps], "kink")
    if "svg" in cfg.formats:
        from .output import read_csv

        if (out / "delta_traces.csv").exists():
            _, body = read_csv(out / "delta_traces.csv")
            by = {}
            for e, n, d, i in body:
                if float(d) > 0:
                    by.setdefault(f"realization {i}", []).append((int(n), math.log10(float(d))))
            write_svg_scatter(out / "kink.svg", by, "deviation", "N", "log10 Delta_N")
    return res


def _slope_common(cfg: ExperimentConfig, out: Path, command: str, theory_variants: list) -> dict:
    grid = parse_grid(cfg.eps_grid)
    res = _breakdown_run(cfg, out, [str(e) for e in grid], command)
    M = effective_M(cfg)
    cmap = config_map(cfg)
    pts = [(as_rational(r[0]), r[1]) for r in res["rows"] if r[1] is not None]
    overlay = {}
    for v in theory_variants:
        overlay[v] = [(math.log10(float(e)), predict_Nc(e, v, M=M, cmap=cmap)) for e in grid if 0 < e < 1]
    fit = None
    try:
        fit = slope_fit(pts, M=M, capacity=cmap.capacity, z_inf=cmap.z_inf)
    except ValueError as e:
        # too few breakdowns to fit (e.g. an eps = 0 control run); not a task failure
        res["note"] = f"slope fit skipped: {e}"
    write_json(out / "slope.json", {"fit": fit.as_dict() if fit else None, "theory": overlay})
    if "svg" in cfg.formats:
        write_svg_scatter(out / "slope.svg", {"N_c": [(math.log10(float(e)), n) for e, n in pts]},
                          "breakdown order", "log10 eps", "N_c", lines=overlay)
    res["fit"] = fit.as_dict() if fit else None
    return res


def cmd_slope(cfg: ExperimentConfig, out: Path) -> dict:
    return _slope_common(cfg, out, "slope", ["nc1", "ncM", "resultM", "final"])


def cmd_application(cfg: ExperimentConfig, out: Path) -> dict:
    if cfg.function not in ("painleve1", "phi36"):
        raise ConfigError("application needs function = painleve1 or phi36")
    variants = ["ncM", "resultM"] if cfg.function == "painleve1" else ["nc1"]
    return _slope_common(cfg, out, "application", variants)


def cmd_variance(cfg: ExperimentConfig, out: Path) -> dict:
    ms = [int(m) for m in cfg.m_values.split(",")]
    eps = as_rational(cfg.epsilon or "1")
    mmax = max(ms)
    R = cfg.mc_realizations
    mc = None
    if R > 0:
        T = composition_matrix(mmax)
        draws = draw_matrix(cfg.seed, range(R), mmax + 1)
        vals = draws @ T.T
        mc = (vals * float(eps)).var(axis=0)
    rows = []
    for m in ms:
        ex = variance_exact(eps, m)
        asy = variance_asymptotic(eps, m) if m >= 1 else None
        rows.append((m, float(ex), None if asy is None else float(asy),
                     None if asy is None else float(asy / ex),
                     None if mc is None else float(mc[m]), None if mc is None else float(mc[m] / float(ex))))
    write_csv(out / "variance.csv", ["m", "exact", "asymptotic", "asymptotic_over_exact", "monte_carlo", "mc_over_exact"],
              rows, dict(_meta(cfg, "variance"), realizations=R))
    if "svg" in cfg.formats:
        write_svg_scatter(out / "variance.svg",
                          {"exact": [(r[0], math.log10(r[1])) for r in rows],
                           "monte carlo": [(r[0], math.log10(r[4])) for r in rows if r[4]]},
                          "variance of mapped noise", "m", "log10 sigma^2",
                          lines={"asymptotic": [(r[0], math.log10(r[2])) for r in rows if r[2]]})
    return {"rows": rows, "failures": {}}


def _angle(w: complex) -> float:
    a = math.atan2(w.imag, w.real)
    return 0.0 if abs(a) < 1e-12 else a % (2 * math.pi)


def cmd_zinf(cfg: ExperimentConfig, out: Path) -> dict:
    cmap = config_map(cfg)
    ctx = PrecisionContext(cfg.precision or 40)
    z, omegas = find_z_inf(cmap, max(cfg.samples, 256), ctx)
    rows = [("map", cmap.label(), z, ";".join(f"{_angle(w):.12g}" for w in omegas))]
    failures = {}
    if cfg.N:
        for N in parse_N(cfg.N):
            try:
                f = build_series(cfg, 2 * N)
                pctx = PrecisionContext(cfg.precision or max(60, int(2 * N * math.log10(1 / cmap.capacity)) + 30))
                est = psi_from_pade_diff(f, N, max(cfg.samples, 64), pctx)
                rows.append((f"pade_diff_N{N}", f.label, est.value, ";".join(f"{a:.12g}" for a in est.angles)))
            except Exception as e:
                failures[N] = f"{type(e).__name__}: {e}"
    write_csv(out / "zinf.csv", ["source", "label", "z_inf", "angles"], rows, _meta(cfg, "zinf"))
    return {"rows": rows, "failures": failures}


HANDLERS = {
    "poles": cmd_poles,
    "capacity": cmd_capacity,
    "kink": cmd_kink,
    "slope": cmd_slope,
    "variance": cmd_variance,
    "zinf": cmd_zinf,
    "application": cmd_application,
}


def task_count(cfg: ExperimentConfig, command: str) -> int:
    if command in ("kink", "slope", "application"):
        n_eps = 1 if command == "kink" else len(parse_grid(cfg.eps_grid))
        R = cfg.realizations if (cfg.noise or "none") == "additive" else 1
        return n_eps * R
    if command in ("poles", "capacity"):
        return len(parse_N(cfg.N))
    if command == "variance":
        return len(cfg.m_values.split(","))
    return 1 + (len(parse_N(cfg.N)) if cfg.N else 0)


# ------------------------------------------------------------------ argument parsing

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="padenoise", description="Noise-induced breakdown of Padé and conformal approximants")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name, help=HANDLERS[name].__doc__ or name)
        s.add_argument("--config", help="key = value file or JSON manifest")
        s.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
        s.add_argument("--out", help="output directory (default $PADENOISE_OUT or ./padenoise-out)")
        s.add_argument("--dry-run", action="store_true", help="validate the config and print the task count")
        s.add_argument("--function", help="binomial | painleve1 | phi36 | file")
        s.add_argument("--alpha")
        s.add_argument("--M", type=int)
        s.add_argument("--N", help="orders: '30,33,36' or 'lo:hi[:step]'")
        s.add_argument("--noise", choices=["none", "additive", "truncation"])
        s.add_argument("--epsilon")
        s.add_argument("--digits", type=int, help="truncation digits D")
        s.add_argument("--seed", type=int)
        s.add_argument("--realizations", type=int)
        s.add_argument("--eps-grid", dest="eps_grid")
        s.add_argument("--delta", type=float)
        s.add_argument("--detector", choices=["kink", "spurious"])
        s.add_argument("--precision", type=int, help="decimal digits (overrides the precision policy)")
        s.add_argument("--map", help="conformal map, e.g. mcut:2")
        s.add_argument("--sequence-file", dest="sequence_file", help="b-file for the phi^3 sequence")
        s.add_argument("--series-file", dest="series_file")
        s.add_argument("--jobs", type=int)
        s.add_argument("-v", "--verbose", action="store_true")
    return p


_FLAG_KEYS = ("function", "alpha", "M", "N", "noise", "epsilon", "digits", "seed", "realizations", "eps_grid",
              "delta", "detector", "precision", "map", "sequence_file", "series_file", "jobs")


def resolve_config(args) -> tuple[ExperimentConfig, set[str]]:
    pairs = {}
    if args.config:
        pairs.update(read_config_file(args.config))
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        pairs[k.strip()] = v.strip()
    for k in _FLAG_KEYS:
        v = getattr(args, k, None)
        if v is not None:
            pairs[k] = v
    cfg = ExperimentConfig().updated(pairs)
    return with_command_defaults(cfg, args.command, set(pairs)), set(pairs)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg, _ = resolve_config(args)
        n = task_count(cfg, args.command)
        if cfg.function == "phi36" and not cfg.sequence_file:
            raise ConfigError("phi36 needs --sequence-file (no network download is attempted)")
    except (ConfigError, ValueError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    if args.dry_run:
        print(f"{args.command}: {n} task(s); config ok")
        return 0
    out = Path(args.out) if args.out else default_out_dir() / args.command
    out.mkdir(parents=True, exist_ok=True)
    try:
        result = HANDLERS[args.command](cfg, out)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    write_json(out / "manifest.json", {"command": args.command, "config": asdict(cfg), "version": __version__,
                                       "failures": result.get("failures", {})})
    failures = result.get("failures", {})
    for k, v in failures.items():
        print(f"task {k} failed: {v}", file=sys.stderr)
    _report(args.command, result)
    return 0 if not failures else 1


def _report(command: str, result: dict) -> None:
    if command == "poles":
        print(f"spurious onset: {result['onset']}")
    elif command in ("kink", "slope", "application"):
        for r in result["rows"]:
            if r[1] is None:
                print(f"eps={r[0]} no breakdown detected")
            else:
                print(f"eps={r[0]} N_c median={r[1]} min={r[2]} max={r[3]}")
        if result.get("note"):
            print(result["note"])
        if result.get("fit"):
            f = result["fit"]
            print(f"slope={f['slope']:.4f} ratios={ {k: round(v, 4) for k, v in f['comparisons'].items()} }")
    elif command == "capacity":
        for r in result["rows"][-3:]:
            print(f"N={r[0]} 1/d_N={r[2]:.6f} richardson={r[3]}")
    elif command == "variance":
        for r in result["rows"]:
            print(f"m={r[0]} asym/exact={r[3]} mc/exact={r[5]}")
    elif command == "zinf":
        for r in result["rows"]:
            print(f"{r[0]}: {r[2]:.8f} angles={r[3]}")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
