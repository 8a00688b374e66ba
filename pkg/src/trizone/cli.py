"""Command-line front end: classify, map, cycles, sweep, portrait, verify.

Configuration is a plain key = value text file naming either the six
normal-form scalars (a11, a1, b2, d2, c11, f2) or a family point
(a1, c11, a11, d2, epsilon, b2 with f2 derived).  Command-line parameter
flags override config keys.  CSV output is deterministic: '#' metadata
lines, a header row, floats at 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .cycles import detect_annulus, find_cycles
from .errors import (ConfigError, InconclusiveSign, TrizoneError)
from .halfmaps import compute_landmarks, pi_bar_o, pi_minus, pi_o, pi_plus, rho_o
from .model import (CanonicalParams, ContactData, check_hypotheses,
                    classify_equilibria, zone_spectrum, ZoneId)
from .oracle import cycle_closure_defect, integrate, oracle_half_map
from .perturb import FamilySpec, classify_sign
from .svg import phase_portrait_svg

PARAM_KEYS = ("a11", "a1", "b2", "d2", "c11", "f2")
FAMILY_KEYS = ("a1", "c11", "a11", "d2", "epsilon", "b2")
ALL_KEYS = tuple(sorted(set(PARAM_KEYS) | set(FAMILY_KEYS)))
MIN_TOL = 2.220446049250313e-16 * 100   # machine epsilon x 100

HALF_MAPS = {"pi_minus": pi_minus, "pi_o": pi_o, "pi_plus": pi_plus,
             "pi_bar_o": pi_bar_o, "rho_o": rho_o}


def f17(x: float) -> str:
    return "%.17g" % x


def parse_config_file(path: str) -> dict[str, float]:
    cfg: dict[str, float] = {}
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in ALL_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            cfg[key] = float(val.strip())
        except ValueError as exc:
            raise ConfigError(
                f"{path}:{lineno}: key {key!r} has non-numeric value "
                f"{val.strip()!r}") from exc
    return cfg


def resolve_params(args) -> tuple[CanonicalParams, dict[str, float]]:
    """Merge config file and flag overrides into CanonicalParams."""
    cfg: dict[str, float] = {}
    if args.config:
        cfg.update(parse_config_file(args.config))
    for key in ALL_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if "epsilon" in cfg:
        if "f2" in cfg:
            raise ConfigError("key 'f2' conflicts with 'epsilon' "
                              "(family mode derives f2)")
        missing = [k for k in FAMILY_KEYS if k not in cfg]
        if missing:
            raise ConfigError(f"family config missing key {missing[0]!r}")
        spec = FamilySpec(a1=cfg["a1"], c11=cfg["c11"], a11=cfg["a11"],
                          d2=cfg["d2"], epsilon=cfg["epsilon"], b2=cfg["b2"])
        params = spec.to_params()
        echo = {k: cfg[k] for k in FAMILY_KEYS}
        echo["f2"] = params.f2
        return params, echo
    missing = [k for k in PARAM_KEYS if k not in cfg]
    if missing:
        raise ConfigError(f"config missing key {missing[0]!r}")
    params = CanonicalParams(**{k: cfg[k] for k in PARAM_KEYS})
    return params, {k: cfg[k] for k in PARAM_KEYS}


def metadata_lines(echo: dict[str, float], extra: dict | None = None) -> list[str]:
    items = " ".join(f"{k}={f17(v)}" for k, v in sorted(echo.items()))
    lines = [f"# trizone {__version__}", f"# config: {items}"]
    if extra:
        for k, v in sorted(extra.items()):
            lines.append(f"# {k}: {v}")
    return lines


def _open_out(args, name: str):
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        return open(os.path.join(args.out, name), "w", encoding="utf-8")
    return None


# ---------------------------------------------------------------- classify

def cmd_classify(args) -> int:
    params, echo = resolve_params(args)
    spectra, report = classify_equilibria(params)
    contact = ContactData.from_params(params)
    print(f"normal-form case: {report.table1_case.value}")
    for s in spectra:
        eq = f"({f17(s.equilibrium[0])}, {f17(s.equilibrium[1])})"
        print(f"  zone {s.zone.value:8s} t={s.t:+.6g} d={s.d:.6g} "
              f"alpha={s.alpha:+.6g} beta={s.beta:.6g} gamma={s.gamma:+.6g} "
              f"equilibrium={eq} [{s.locality.value}]")
    print(f"contact points: p-={contact.p_minus} pdot-={contact.pdot_minus}  "
          f"p+={contact.p_plus} pdot+={contact.pdot_plus}")
    print(f"(H1) central focus: {report.h1}")
    print(f"(H2) outer center + opposite focus: {report.h2}"
          + (f" (center in zone {report.center_zone.value})"
             if report.center_zone else ""))
    doc = {
        "table1_case": report.table1_case.name,
        "h1": report.h1,
        "h2": report.h2,
        "center_zone": report.center_zone.value if report.center_zone else None,
        "spectra": [{
            "zone": s.zone.value, "t": s.t, "d": s.d, "alpha": s.alpha,
            "beta": s.beta, "gamma": s.gamma,
            "equilibrium": list(s.equilibrium), "locality": s.locality.value,
        } for s in spectra],
        "params": {k: v for k, v in sorted(echo.items())},
    }
    print(json.dumps(doc, sort_keys=True))
    out = _open_out(args, "classify.json")
    if out:
        with out:
            json.dump(doc, out, sort_keys=True, indent=2)
    return 0


# ---------------------------------------------------------------- map

def _parse_range(spec: str) -> np.ndarray:
    try:
        lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise ConfigError(f"--range must be lo:hi:n, got {spec!r}") from exc
    if n <= 0:
        raise ConfigError("--range count must be positive")
    return np.linspace(lo, hi, n)


def cmd_map(args) -> int:
    params, echo = resolve_params(args)
    fn = HALF_MAPS.get(args.map)
    if fn is None:
        raise ConfigError(f"unknown map {args.map!r}; "
                          f"choose from {sorted(HALF_MAPS)}")
    if (args.value is None) == (args.range is None):
        raise ConfigError("give exactly one of --value or --range")
    values = [args.value] if args.value is not None else _parse_range(args.range)
    lines = metadata_lines(echo, {"map": args.map})
    lines.append("input,output,tau,derivative")
    for v in values:
        try:
            ev = fn(params, float(v))
            lines.append(",".join([f17(v), f17(ev.value), f17(ev.angle),
                                   f17(ev.derivative)]))
        except TrizoneError:
            lines.append(",".join([f17(v), "nan", "nan", "nan"]))
    text = "\n".join(lines) + "\n"
    out = _open_out(args, f"map_{args.map}.csv")
    if out:
        with out:
            out.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- cycles

def _cycle_rows(result) -> list[str]:
    rows = ["kind,fixed_point,period,multiplier,stability,green_residual"]
    for c in result.cycles:
        rows.append(",".join([
            c.kind.value, f17(c.fixed_point.value), f17(c.period),
            f17(c.multiplier), c.stability.value, f17(c.green_residual)]))
    return rows


def cmd_cycles(args) -> int:
    params, echo = resolve_params(args)
    result = find_cycles(params)
    print(f"regime: {result.regime}")
    if result.unproven_regime:
        print("note: open-case regime; existence statements are not "
              "asserted, roots below are scan results only")
    if result.annulus is not None:
        a = result.annulus
        print(f"period annulus: center_config={a.is_center_config} "
              f"outer_ordinate={f17(a.outer_ordinate)} "
              f"displacement_sup={f17(a.displacement_sup)}")
    if not result.cycles:
        print("no isolated cycles found")
    rows = _cycle_rows(result)
    for r in rows:
        print(r)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        if args.format in ("csv", "both"):
            with open(os.path.join(args.out, "cycles.csv"), "w",
                      encoding="utf-8") as fh:
                fh.write("\n".join(metadata_lines(echo) + rows) + "\n")
            for k, c in enumerate(result.cycles, 1):
                with open(os.path.join(args.out, f"cycle_{k}.csv"), "w",
                          encoding="utf-8") as fh:
                    fh.write("\n".join(metadata_lines(echo,
                                                      {"kind": c.kind.value}))
                             + "\nt,x,y,zone\n")
                    for t, (x, y), z in zip(c.times, c.polyline, c.zone_codes):
                        fh.write(f"{f17(t)},{f17(x)},{f17(y)},{int(z)}\n")
        if args.format in ("svg", "both"):
            orbits = ([result.annulus.outer_polyline]
                      if result.annulus is not None else [])
            svg = phase_portrait_svg(orbits,
                                     [c.polyline for c in result.cycles])
            with open(os.path.join(args.out, "portrait.svg"), "w",
                      encoding="utf-8") as fh:
                fh.write(svg)
    return 0


# ---------------------------------------------------------------- sweep

def parse_grid(spec: str) -> tuple[np.ndarray, np.ndarray]:
    axes = {}
    try:
        for part in spec.split(","):
            key, _, rng = part.partition("=")
            key = key.strip()
            if key not in ("b2", "eps"):
                raise ConfigError(f"grid axis must be b2 or eps, got {key!r}")
            axes[key] = _parse_range(rng)
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"malformed --grid {spec!r}") from exc
    if "b2" not in axes or "eps" not in axes:
        raise ConfigError("--grid needs both b2=lo:hi:n and eps=lo:hi:n")
    return axes["b2"], axes["eps"]


def _sweep_point(job):
    base, b2, eps = job
    row = {"b2": b2, "eps": eps, "admissible": 1, "n_cycles": 0,
           "n_two_zone": 0, "n_three_zone": 0, "two_zone_stability": "",
           "landmark_gap": math.nan, "classifier": "", "unproven": 0,
           "error": ""}
    try:
        spec = FamilySpec(a1=base["a1"], c11=base["c11"], a11=base["a11"],
                          d2=base["d2"], epsilon=eps, b2=b2)
        params = spec.to_params()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            try:
                row["classifier"] = classify_sign(params).name
            except (InconclusiveSign, TrizoneError):
                row["classifier"] = "inconclusive"
        if b2 < -1.0:
            lm = compute_landmarks(params)
            row["landmark_gap"] = lm.a_o_star - lm.a_o_plus
        result = find_cycles(params)
        row["n_cycles"] = len(result.cycles)
        row["n_two_zone"] = sum(c.kind.value == "two_zone" for c in result.cycles)
        row["n_three_zone"] = sum(c.kind.value == "three_zone"
                                  for c in result.cycles)
        two = [c for c in result.cycles if c.kind.value == "two_zone"]
        if two:
            row["two_zone_stability"] = two[0].stability.value
        row["unproven"] = int(result.unproven_regime)
    except TrizoneError as exc:
        row["admissible"] = 0
        row["error"] = type(exc).__name__
    return row


def cmd_sweep(args) -> int:
    params, echo = resolve_params(args)   # validates the family base
    if "epsilon" not in echo:
        raise ConfigError("sweep needs a family config (epsilon key present)")
    b2s, epss = parse_grid(args.grid)
    base = {k: echo[k] for k in ("a1", "c11", "a11", "d2")}
    jobs = [(base, float(b2), float(eps)) for b2 in b2s for eps in epss]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_point, jobs, chunksize=4))
    else:
        rows = [_sweep_point(j) for j in jobs]
    header = ("b2,eps,admissible,n_cycles,n_two_zone,n_three_zone,"
              "two_zone_stability,landmark_gap,classifier,unproven,error")
    lines = metadata_lines(echo, {"grid": args.grid}) + [header]
    for r in rows:
        lines.append(",".join([
            f17(r["b2"]), f17(r["eps"]), str(r["admissible"]),
            str(r["n_cycles"]), str(r["n_two_zone"]), str(r["n_three_zone"]),
            r["two_zone_stability"], f17(r["landmark_gap"]), r["classifier"],
            str(r["unproven"]), r["error"]]))
    text = "\n".join(lines) + "\n"
    out = _open_out(args, "sweep.csv")
    if out:
        with out:
            out.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- portrait

def _parse_orbit(spec: str) -> tuple[float, float, float]:
    try:
        x, y, t = (float(v) for v in spec.split(","))
        return x, y, t
    except ValueError as exc:
        raise ConfigError(f"--orbit must be x,y,T, got {spec!r}") from exc


def _default_orbits(params: CanonicalParams):
    """Seed points bracketing the interesting region when none are given."""
    seeds = []
    if params.b2 == -1.0:
        rep = detect_annulus(params, n_samples=2)
        for frac in (0.25, 0.5, 0.75, 1.0):
            seeds.append((1.0, rep.outer_ordinate * frac, 25.0))
        return seeds
    result = find_cycles(params)
    for c in result.cycles:
        x, y = c.crossings[0]
        seeds.append((x, 1.3 * y if y != 0 else y + 0.3, 3.0 * c.period))
        seeds.append((x, 0.7 * y if y != 0 else y - 0.3, 3.0 * c.period))
    if not seeds:
        seeds = [(-1.0, 1.0, 30.0), (1.0, -1.0, 30.0)]
    return seeds


def cmd_portrait(args) -> int:
    params, echo = resolve_params(args)
    orbit_specs = ([_parse_orbit(s) for s in args.orbit]
                   if args.orbit else _default_orbits(params))
    polylines = []
    chunks = []
    for k, (x, y, t_span) in enumerate(orbit_specs):
        traj = integrate(params, (x, y), t_span)
        polylines.append(traj.samples[:, 1:3])
        rows = [f"# orbit {k}: seed=({f17(x)},{f17(y)}) T={f17(t_span)}",
                "t,x,y,zone"]
        for t, xx, yy, z in traj.samples:
            rows.append(f"{f17(t)},{f17(xx)},{f17(yy)},{int(z)}")
        chunks.append("\n".join(rows))
    text = "\n".join(metadata_lines(echo) + chunks) + "\n"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        if args.format in ("csv", "both"):
            with open(os.path.join(args.out, "orbits.csv"), "w",
                      encoding="utf-8") as fh:
                fh.write(text)
        if args.format in ("svg", "both"):
            with open(os.path.join(args.out, "portrait.svg"), "w",
                      encoding="utf-8") as fh:
                fh.write(phase_portrait_svg(polylines, []))
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- verify

def cmd_verify(args) -> int:
    params, echo = resolve_params(args)
    rng = np.random.default_rng(args.seed)
    tol_map = args.tol if args.tol else 1e-7
    n = args.n
    checks = []

    def draw_inputs(name):
        t_minus = zone_spectrum(params, ZoneId.MINUS).t
        lm = compute_landmarks(params)
        if name == "pi_minus":
            return rng.uniform(0.0, 20.0, n)
        if name == "pi_o":
            return rng.uniform(0.0, 20.0, n)
        if name == "pi_plus":
            lo = lm.a_plus_star if zone_spectrum(params, ZoneId.PLUS).t < 0 else 0.0
            return lo + 1e-3 + rng.uniform(0.0, 20.0, n)
        if name == "pi_bar_o":
            return lm.b_o_star * (1.0 + 1e-3) + rng.uniform(0.0, 20.0, n)
        return lm.b_o_star * rng.uniform(0.01, 0.99, n)

    for name, fn in HALF_MAPS.items():
        worst = 0.0
        for v in draw_inputs(name):
            analytic = fn(params, float(v)).value
            num, _ = oracle_half_map(params, name, float(v),
                                     rtol=1e-12, atol=1e-14)
            worst = max(worst, abs(analytic - num))
        checks.append((name, n, worst, tol_map))

    result = find_cycles(params)
    worst = 0.0
    for c in result.cycles:
        worst = max(worst, cycle_closure_defect(params, c.crossings[0],
                                                c.period))
    checks.append(("cycle_closure", len(result.cycles), worst, 1e-6))

    failed = 0
    print(f"{'check':<16}{'n':>6}{'max_error':>14}{'tol':>10}  status")
    for name, count, err, tol in checks:
        ok = err <= tol
        failed += (not ok)
        print(f"{name:<16}{count:>6}{err:>14.3e}{tol:>10.1e}  "
              f"{'PASS' if ok else 'FAIL'}")
    return 1 if failed else 0


# ---------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trizone",
        description="Limit-cycle analysis of continuous piecewise-linear "
                    "planar systems with three zones")
    parser.add_argument("--version", action="version",
                        version=f"trizone {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value parameter file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", choices=("csv", "svg", "both"),
                        default="csv")
    common.add_argument("--tol", type=float, default=None,
                        help="tolerance override (>= 100 * machine epsilon)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized draws")
    for key in ALL_KEYS:
        common.add_argument(f"--{key}", type=float, default=None,
                            help=f"override parameter {key}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("classify", parents=[common],
                   help="Table-1 case, spectra and hypothesis report")
    p_map = sub.add_parser("map", parents=[common],
                           help="evaluate one half-map on a value or range")
    p_map.add_argument("--map", required=True)
    p_map.add_argument("--value", type=float)
    p_map.add_argument("--range", help="lo:hi:n")
    sub.add_parser("cycles", parents=[common],
                   help="locate limit cycles, emit table/CSV/SVG")
    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="grid over (b2, eps) for a family")
    p_sweep.add_argument("--grid", required=True,
                         help="b2=lo:hi:n,eps=lo:hi:n")
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_portrait = sub.add_parser("portrait", parents=[common],
                                help="emit orbit polylines and SVG portrait")
    p_portrait.add_argument("--orbit", action="append",
                            help="seed orbit as x,y,T (repeatable)")
    p_verify = sub.add_parser("verify", parents=[common],
                              help="oracle-vs-analytic validation table")
    p_verify.add_argument("--n", type=int, default=20,
                          help="random inputs per half-map")
    return parser


COMMANDS = {"classify": cmd_classify, "map": cmd_map, "cycles": cmd_cycles,
            "sweep": cmd_sweep, "portrait": cmd_portrait, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is not None and args.tol < MIN_TOL:
        print(f"error ConfigError: --tol below 100x machine epsilon "
              f"({MIN_TOL:.3e})", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args)
    except TrizoneError as exc:
        msg = " ".join(str(exc).split())
        print(f"error {type(exc).__name__}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
