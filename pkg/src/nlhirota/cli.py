"""
Command-line driver.

    nlhirota scatter      reflection coefficients on the lambda grid
    nlhirota asymptotics  leading-order q along the configured rays
    nlhirota oracle       numerical RH solution vs leading order along the rays
    nlhirota sweep        numerical RH solution over the x grid at fixed times
    nlhirota verify       named invariant checks with residuals

Configuration is a JSON file with an explicit ``schema_version``; unknown
keys are rejected and every validation message carries the field path.
Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 verification failure.
"""
from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np

from . import asymptotics, deltafun, modelrh, rhoracle, scattering
from .errors import ConfigError, NlHirotaError, NumericalError, SectorError, WindingError
from .phase import geometry

log = logging.getLogger("nlhirota")

SCHEMA_VERSION = 1
EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_VERIFY = 0, 1, 2, 3

SCATTER_COLUMNS = ["lambda", "re_r1", "im_r1", "re_r2", "im_r2", "det_defect", "symmetry_defect"]
ASYMPTOTICS_COLUMNS = ["xi", "t", "re_q", "im_q", "abs_q", "error_exponent",
                       "re_vartheta0", "im_vartheta0", "re_vartheta1", "im_vartheta1"]
ORACLE_COLUMNS = ["xi", "t", "x", "re_q_oracle", "im_q_oracle", "re_q_leading", "im_q_leading",
                  "abs_diff", "error_exponent", "scaled_error", "nodes", "residual"]
SWEEP_COLUMNS = ["t", "x", "re_q", "im_q", "re_q0", "im_q0", "abs_err"]
VERIFY_COLUMNS = ["check", "passed", "value", "threshold", "detail"]

DEFAULTS: dict[str, Any] = {
    "schema_version": SCHEMA_VERSION,
    "alpha": 0.0,
    "beta": 1.0,
    "profile": {"kind": "gaussian", "amplitude": 0.5, "width": 1.0, "center": 0.0,
                "table_file": None, "domain_halfwidth": None},
    "scattering_file": None,
    "lambda_grid": {"min": -8.0, "max": 8.0, "n": 2001},
    "rays": [{"xi": -3.0, "t": [10.0, 20.0, 40.0]}],
    "x_domain": {"min": -5.0, "max": 5.0, "n": 11},
    "sweep_times": [0.0],
    "tolerances": {"ode": 1e-8, "quad": 1e-12, "linear": 1e-10, "roundtrip": 1e-4},
    "eps_disk": None,
    "oracle_mode": "full_lens",
    "output": {"dir": "out", "format": "csv"},
    "threads": 1,
}


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

def _fail(path: str, msg: str):
    raise ConfigError(f"{path}: {msg}")


def _real(v, path: str, positive: bool = False) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        _fail(path, f"expected a finite number, got {v!r}")
    if positive and not v > 0:
        _fail(path, f"must be positive, got {v!r}")
    return float(v)


def _int(v, path: str, minimum: int) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(path, f"expected an integer, got {v!r}")
    if v < minimum:
        _fail(path, f"must be >= {minimum}, got {v}")
    return int(v)


def _merge(default: dict, given: dict, path: str) -> dict:
    if not isinstance(given, dict):
        _fail(path, "expected an object")
    unknown = sorted(set(given) - set(default))
    if unknown:
        _fail(f"{path}.{unknown[0]}", "unknown key")
    out = copy.deepcopy(default)
    out.update(given)
    return out


@dataclass
class RunConfig:
    """Validated run configuration; ``to_dict`` is the canonical serialization."""

    alpha: float
    beta: float
    profile: dict
    scattering_file: Optional[str]
    lambda_grid: dict
    rays: list
    x_domain: dict
    sweep_times: list
    tolerances: dict
    eps_disk: Optional[float]
    oracle_mode: str
    output: dict
    threads: int
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        root = "config"
        if not isinstance(raw, dict):
            _fail(root, "expected a JSON object")
        if "schema_version" not in raw:
            _fail(f"{root}.schema_version", "missing")
        if raw["schema_version"] != SCHEMA_VERSION:
            _fail(f"{root}.schema_version", f"unsupported version {raw['schema_version']!r}")
        d = _merge(DEFAULTS, raw, root)
        alpha = _real(d["alpha"], f"{root}.alpha")
        beta = _real(d["beta"], f"{root}.beta")

        prof = _merge(DEFAULTS["profile"], d["profile"], f"{root}.profile")
        if prof["kind"] not in ("gaussian", "sech", "table"):
            _fail(f"{root}.profile.kind", f"expected gaussian, sech or table, got {prof['kind']!r}")
        prof["amplitude"] = _real(prof["amplitude"], f"{root}.profile.amplitude")
        prof["width"] = _real(prof["width"], f"{root}.profile.width", positive=True)
        prof["center"] = _real(prof["center"], f"{root}.profile.center")
        if prof["kind"] == "table" and not isinstance(prof["table_file"], str):
            _fail(f"{root}.profile.table_file", "required for a table profile")
        if prof["domain_halfwidth"] is not None:
            prof["domain_halfwidth"] = _real(prof["domain_halfwidth"], f"{root}.profile.domain_halfwidth", True)

        sfile = d["scattering_file"]
        if sfile is not None and not isinstance(sfile, str):
            _fail(f"{root}.scattering_file", "expected a path string or null")

        grid = _merge(DEFAULTS["lambda_grid"], d["lambda_grid"], f"{root}.lambda_grid")
        grid["min"] = _real(grid["min"], f"{root}.lambda_grid.min")
        grid["max"] = _real(grid["max"], f"{root}.lambda_grid.max")
        grid["n"] = _int(grid["n"], f"{root}.lambda_grid.n", 2)
        if not grid["max"] > grid["min"]:
            _fail(f"{root}.lambda_grid.max", "must exceed lambda_grid.min")

        if not isinstance(d["rays"], list):
            _fail(f"{root}.rays", "expected a list")
        rays = []
        for i, ray in enumerate(d["rays"]):
            p = f"{root}.rays[{i}]"
            if not isinstance(ray, dict):
                _fail(p, "expected an object")
            unknown = sorted(set(ray) - {"xi", "t"})
            if unknown:
                _fail(f"{p}.{unknown[0]}", "unknown key")
            if "xi" not in ray or "t" not in ray:
                _fail(p, "needs xi and t")
            xi = _real(ray["xi"], f"{p}.xi")
            if not alpha * alpha - 3.0 * beta * xi > 0:
                _fail(f"{p}.xi", "alpha^2 - 3 beta xi must be positive (two real stationary points)")
            if not isinstance(ray["t"], list) or not ray["t"]:
                _fail(f"{p}.t", "expected a non-empty list")
            ts = [_real(v, f"{p}.t[{k}]", positive=True) for k, v in enumerate(ray["t"])]
            rays.append({"xi": xi, "t": ts})

        xd = _merge(DEFAULTS["x_domain"], d["x_domain"], f"{root}.x_domain")
        xd["min"] = _real(xd["min"], f"{root}.x_domain.min")
        xd["max"] = _real(xd["max"], f"{root}.x_domain.max")
        xd["n"] = _int(xd["n"], f"{root}.x_domain.n", 2)
        if not xd["max"] > xd["min"]:
            _fail(f"{root}.x_domain.max", "must exceed x_domain.min")

        if not isinstance(d["sweep_times"], list):
            _fail(f"{root}.sweep_times", "expected a list")
        sweep = [_real(v, f"{root}.sweep_times[{k}]") for k, v in enumerate(d["sweep_times"])]
        if any(v < 0 for v in sweep):
            _fail(f"{root}.sweep_times", "times must be >= 0")

        tol = _merge(DEFAULTS["tolerances"], d["tolerances"], f"{root}.tolerances")
        for k in tol:
            tol[k] = _real(tol[k], f"{root}.tolerances.{k}", positive=True)

        eps = d["eps_disk"]
        if eps is not None:
            eps = _real(eps, f"{root}.eps_disk", positive=True)
        if d["oracle_mode"] not in ("full_lens", "partial_lens", "real"):
            _fail(f"{root}.oracle_mode", f"expected full_lens, partial_lens or real, got {d['oracle_mode']!r}")

        out = _merge(DEFAULTS["output"], d["output"], f"{root}.output")
        if not isinstance(out["dir"], str):
            _fail(f"{root}.output.dir", "expected a path string")
        if out["format"] not in ("csv", "json"):
            _fail(f"{root}.output.format", f"expected csv or json, got {out['format']!r}")
        threads = _int(d["threads"], f"{root}.threads", 1)
        return cls(alpha, beta, prof, sfile, grid, rays, xd, sweep, tol, eps,
                   d["oracle_mode"], out, threads)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "alpha": self.alpha,
            "beta": self.beta,
            "profile": dict(self.profile),
            "scattering_file": self.scattering_file,
            "lambda_grid": dict(self.lambda_grid),
            "rays": [{"xi": r["xi"], "t": list(r["t"])} for r in self.rays],
            "x_domain": dict(self.x_domain),
            "sweep_times": list(self.sweep_times),
            "tolerances": dict(self.tolerances),
            "eps_disk": self.eps_disk,
            "oracle_mode": self.oracle_mode,
            "output": dict(self.output),
            "threads": self.threads,
        }


def parse_config(text: str) -> RunConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON ({exc})") from exc
    return RunConfig.from_dict(raw)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path} ({exc})") from exc
    return parse_config(text)


def serialize_config(cfg: RunConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------

def build_profile(cfg: RunConfig) -> scattering.Profile:
    p = cfg.profile
    if p["kind"] == "table":
        try:
            prof = scattering.load_profile_table(p["table_file"], p["domain_halfwidth"])
        except OSError as exc:
            raise ConfigError(f"config.profile.table_file: cannot read ({exc})") from exc
        return prof
    return scattering.Profile(p["kind"], p["amplitude"], p["width"], p["center"],
                              domain_halfwidth=p["domain_halfwidth"])


def lambda_grid(cfg: RunConfig) -> np.ndarray:
    g = cfg.lambda_grid
    return np.linspace(g["min"], g["max"], g["n"])


def load_scattering_file(path, alpha: float, beta: float) -> scattering.ScatteringData:
    """Read reflection data in the ``scatter`` CSV layout."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise ConfigError(f"config.scattering_file: cannot read ({exc})") from exc
    if not rows or any(c not in rows[0] for c in SCATTER_COLUMNS[:5]):
        raise ConfigError("config.scattering_file: expected columns " + ",".join(SCATTER_COLUMNS[:5]))
    try:
        a = np.array([[float(r[c]) for c in SCATTER_COLUMNS[:5]] for r in rows])
    except ValueError as exc:
        raise ConfigError(f"config.scattering_file: non-numeric entry ({exc})") from exc
    try:
        return scattering.ScatteringData(alpha, beta, a[:, 0], a[:, 1] + 1j * a[:, 2], a[:, 3] + 1j * a[:, 4])
    except ValueError as exc:
        raise ConfigError(f"config.scattering_file: {exc}") from exc


def scattering_data(cfg: RunConfig) -> scattering.ScatteringData:
    if cfg.scattering_file is not None:
        return load_scattering_file(cfg.scattering_file, cfg.alpha, cfg.beta)
    return scattering.reflection_coefficients(build_profile(cfg), lambda_grid(cfg), cfg.alpha, cfg.beta)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def write_table(path: Path, columns: list, rows: list, fmt: str, extra: Optional[dict] = None) -> Path:
    path = path.with_suffix("." + fmt)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        path.write_text(buf.getvalue())
    else:
        doc = {"columns": columns, "rows": [[_jsonable(v) for v in r] for r in rows]}
        if extra:
            doc.update(extra)
        path.write_text(json.dumps(doc, indent=1) + "\n")
    return path


def _pmap(fn: Callable, items: list, threads: int) -> list:
    """Ordered map; results are merged in input order regardless of thread count."""
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_scatter(cfg: RunConfig, out_dir: Path, fmt: str) -> int:
    sd = scattering_data(cfg)
    n = sd.lambda_grid.size
    det = sd.det_defect if sd.det_defect is not None else np.full(n, np.nan)
    sym = sd.symmetry_defect if sd.symmetry_defect is not None else np.full(n, np.nan)
    rows = [(sd.lambda_grid[i], sd.r1[i].real, sd.r1[i].imag, sd.r2[i].real, sd.r2[i].imag, det[i], sym[i])
            for i in range(n)]
    path = write_table(out_dir / "scatter", SCATTER_COLUMNS, rows, fmt)
    worst = float(np.nanmax(np.maximum(det, sym))) if np.any(np.isfinite(det)) else float("nan")
    log.info("wrote %s (max invariant defect %.3g)", path, worst)
    if math.isfinite(worst) and worst > cfg.tolerances["ode"]:
        log.error("scattering invariants exceed tolerance: %.3g > %.3g", worst, cfg.tolerances["ode"])
        return EXIT_NUMERICAL
    return EXIT_OK


def _ray_tasks(cfg: RunConfig):
    return [(ray["xi"], t) for ray in cfg.rays for t in ray["t"]]


def cmd_asymptotics(cfg: RunConfig, out_dir: Path, fmt: str) -> int:
    sd = scattering_data(cfg)
    rows, diagnostics = [], []
    for i, ray in enumerate(cfg.rays):
        xi = ray["xi"]
        try:
            dfun = deltafun.DeltaFunction(sd, geometry(cfg.alpha, cfg.beta, xi), cfg.tolerances["quad"])
            terms = [asymptotics.asymptotic_terms(xi * t, t, sd, t_min=0.0, dfun=dfun) for t in ray["t"]]
        except NumericalError as exc:
            kind = "winding" if isinstance(exc, WindingError) else type(exc).__name__
            msg = f"rays[{i}] (xi = {xi:g}) rejected [{kind}]: {exc}"
            log.error(msg)
            diagnostics.append(msg)
            continue
        for t, T in zip(ray["t"], terms):
            dd = T.delta_data
            rows.append((xi, t, T.q_leading.real, T.q_leading.imag, abs(T.q_leading), T.error_exponent,
                         dd.vartheta0.real, dd.vartheta0.imag, dd.vartheta1.real, dd.vartheta1.imag))
            if t < asymptotics.T_MIN:
                log.warning("rays[%d]: t = %g is below %g; the leading term is extrapolated", i, t, asymptotics.T_MIN)
    write_table(out_dir / "asymptotics", ASYMPTOTICS_COLUMNS, rows, fmt, {"diagnostics": diagnostics})
    if diagnostics:
        (out_dir / "asymptotics_diagnostics.txt").write_text("\n".join(diagnostics) + "\n")
        return EXIT_NUMERICAL
    return EXIT_OK


def _oracle_kw(cfg: RunConfig) -> dict:
    return {} if cfg.eps_disk is None or cfg.oracle_mode == "real" else {"eps_disk": cfg.eps_disk}


def cmd_oracle(cfg: RunConfig, out_dir: Path, fmt: str) -> int:
    sd = scattering_data(cfg)
    tasks = _ray_tasks(cfg)
    dfuns = {}
    for xi in sorted({xi for xi, _ in tasks}):
        dfuns[xi] = deltafun.DeltaFunction(sd, geometry(cfg.alpha, cfg.beta, xi), cfg.tolerances["quad"])
        check = dfuns[xi].winding()
        if not check:
            raise SectorError(f"xi = {xi:g}: {check.message}")
        dfuns[xi].data()

    def run(task):
        xi, t = task
        x = xi * t
        d = dfuns[xi]
        T = asymptotics.asymptotic_terms(x, t, sd, t_min=0.0, dfun=d)
        if cfg.oracle_mode == "real":
            system = rhoracle.real_line_system(sd, x, t)
        elif cfg.oracle_mode == "full_lens":
            system = rhoracle.build_deformed_jumps(sd, d.geo, x, t, dfun=d, **_oracle_kw(cfg))
        else:
            system = rhoracle.build_partial_lens(sd, d.geo, x, t, **_oracle_kw(cfg))
        system = rhoracle.solve_rh(system, residual_tol=cfg.tolerances["linear"])
        q = rhoracle.reconstruct_q(system)
        diff = abs(q - T.q_leading)
        return (xi, t, x, q.real, q.imag, T.q_leading.real, T.q_leading.imag, diff, T.error_exponent,
                diff * t ** T.error_exponent, system.size, system.residual)

    rows = _pmap(run, tasks, cfg.threads)
    write_table(out_dir / "oracle", ORACLE_COLUMNS, rows, fmt)
    return EXIT_OK


def _x_grid(cfg: RunConfig) -> np.ndarray:
    xd = cfg.x_domain
    return np.linspace(xd["min"], xd["max"], xd["n"])


def cmd_sweep(cfg: RunConfig, out_dir: Path, fmt: str) -> int:
    """Real-line oracle over the x grid at each of ``sweep_times``."""
    sd = scattering_data(cfg)
    prof = sd.profile
    tasks = [(t, float(x)) for t in cfg.sweep_times for x in _x_grid(cfg)]

    def run(task):
        t, x = task
        system = rhoracle.solve_rh(rhoracle.real_line_system(sd, x, t), residual_tol=cfg.tolerances["linear"])
        q = rhoracle.reconstruct_q(system)
        if t == 0.0 and prof is not None:
            q0 = complex(prof.q0(x))
            return (t, x, q.real, q.imag, q0.real, q0.imag, abs(q - q0))
        return (t, x, q.real, q.imag, math.nan, math.nan, math.nan)

    rows = _pmap(run, tasks, cfg.threads)
    write_table(out_dir / "sweep", SWEEP_COLUMNS, rows, fmt)
    return EXIT_OK


def verification_checks(cfg: RunConfig, rng: np.random.Generator) -> list:
    """List of (name, passed, value, threshold, detail)."""
    out = []

    def add(name, value, threshold, detail=""):
        value = float(value)
        out.append((name, bool(math.isfinite(value) and value <= threshold), value, threshold, detail))

    sd = scattering_data(cfg)
    if sd.det_defect is not None:
        add("scattering_det", np.max(sd.det_defect), cfg.tolerances["ode"])
        add("scattering_symmetry", np.max(sd.symmetry_defect), cfg.tolerances["ode"])
    for i, ray in enumerate(cfg.rays):
        xi = ray["xi"]
        geo = geometry(cfg.alpha, cfg.beta, xi)
        dfun = deltafun.DeltaFunction(sd, geo, cfg.tolerances["quad"])
        check = dfun.winding()
        out.append((f"rays[{i}].winding", bool(check), max(abs(check.accumulated_arg0), abs(check.accumulated_arg1)),
                    math.pi, check.message))
        if not check:
            continue
        s = geo.lambda0 + (geo.lambda1 - geo.lambda0) * rng.uniform(0.02, 0.98, size=8)
        jr = max(abs(dfun.delta(v, side="+") / dfun.delta(v, side="-") - complex(sd.one_minus_r1r2(v))) for v in s)
        add(f"rays[{i}].delta_jump", jr, 1e-6)
        dd = dfun.data()
        for which, lam, vt in ((0, geo.lambda0, dd.vartheta0), (1, geo.lambda1, dd.vartheta1)):
            r1, r2 = complex(sd.r1_at(lam)), complex(sd.r2_at(lam))
            if r1 == 0 and r2 == 0:
                continue
            prob = modelrh.model_problem(r1, r2, which, vt)
            z = complex(rng.uniform(-2, 2), rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 2))
            tag = f"rays[{i}].model{which}"
            add(f"{tag}.ode_residual", modelrh.ode_residual(prob, z), 1e-8, f"at {z:.6g}")
            add(f"{tag}.jump_product", modelrh.jump_product_check(prob), 1e-9)
            add(f"{tag}.constant_jump", modelrh.constant_jump_residual(prob), 1e-7)
    if sd.profile is not None:
        err = 0.0
        for x in _x_grid(cfg):
            system = rhoracle.solve_rh(rhoracle.real_line_system(sd, float(x), 0.0),
                                       residual_tol=cfg.tolerances["linear"])
            err = max(err, abs(rhoracle.reconstruct_q(system) - complex(sd.profile.q0(float(x)))))
        add("round_trip", err, cfg.tolerances["roundtrip"])
    return out


def cmd_verify(cfg: RunConfig, out_dir: Path, fmt: str, seed: int = 0) -> int:
    rows = verification_checks(cfg, np.random.default_rng(seed))
    write_table(out_dir / "verify", VERIFY_COLUMNS, rows, fmt)
    failed = [r[0] for r in rows if not r[1]]
    for r in rows:
        log.info("%-32s %s  %.3g (<= %.3g) %s", r[0], "pass" if r[1] else "FAIL", r[2], r[3], r[4])
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {
    "scatter": cmd_scatter,
    "asymptotics": cmd_asymptotics,
    "oracle": cmd_oracle,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nlhirota", description="Scattering, long-time asymptotics and RH oracle.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="JSON run configuration (defaults when omitted)")
    p.add_argument("--out-dir", help="output directory (overrides output.dir)")
    p.add_argument("--format", choices=("csv", "json"), help="output format (overrides output.format)")
    p.add_argument("--threads", type=int, help="worker threads (overrides threads)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized sample points")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config) if args.config else RunConfig.from_dict({"schema_version": SCHEMA_VERSION})
        if args.threads is not None:
            if args.threads < 1:
                raise ConfigError("--threads: must be >= 1")
            cfg.threads = args.threads
        out_dir = Path(args.out_dir or cfg.output["dir"])
        fmt = args.format or cfg.output["format"]
        if args.command == "verify":
            code = cmd_verify(cfg, out_dir, fmt, args.seed)
        else:
            code = COMMANDS[args.command](cfg, out_dir, fmt)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except NlHirotaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if code == EXIT_NUMERICAL and args.command == "asymptotics":
        print("some rays were rejected; see asymptotics_diagnostics.txt", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
