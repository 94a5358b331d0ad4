"""Command-line front end for batch evaluation and verification.

Subcommands: kernel (series / Mellin-Barnes kernel values on points or
y-grids), verify (cross-validation suites with per-check residuals),
kloosterman (one exponential sum), whittaker (one completed-Whittaker
value), geometric (a truncated moduli sum with per-term records).

Output is JSON lines, one record per result, or CSV under --csv.  Every
record carries value [re, im], an error estimate, a representation tag,
and the library version.  Node counts and reduction orders are fixed, so
two identical invocations produce byte-identical numeric output; pass
--stable to also zero the wall-time field when full byte equality
matters (CI diffing).

Exit codes: 0 success, 1 numeric failure (verification residual over
tolerance, NaN in a result, convergence failure), 2 usage error.

Spectral parameters are given on the unitary line as --mu t1,t2 meaning
(i t1, i t2, -i(t1 + t2)).  A key=value config file (--config) supplies
defaults for tolerances and quadrature knobs; explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import numpy as np

from . import __version__, config
from .errors import Sl3KuznetsovError
from .gammafns import barnes_first_check, barnes_second_check
from .kloosterman import s_big, s_big_naive, s_tilde, s_tilde_naive, s_weyl
from .mbkernels import (
    k_w4_mb,
    k_w4_voronoi,
    k_wl_mb,
    stade_check,
    whittaker_wstar,
)
from .odecheck import recurrence_check, residual_w4, residual_wl
from .series import SeriesPolicy, j_w4, j_wl, k_w4_sym, k_wl_signed, k_wl_sym
from .spectral import WEYL_GROUP, as_mu, cos_mu, weyl_act_mu
from .transforms import (
    TestFunction,
    geometric_sum_w4,
    geometric_sum_w5,
    geometric_sum_wl,
)

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_USAGE = 2

_W3_LABELS = ("I", "w4", "w5")


class UsageError(Exception):
    """Bad flags or config; maps to exit code 2."""


# ----------------------------------------------------------------------
# parsing helpers


def _parse_floats(text: str, n: int, what: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"{what} needs {n} comma-separated values, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"{what}: {exc}") from None


def _parse_ints(text: str, n: int, what: str) -> tuple[int, ...]:
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"{what} needs {n} comma-separated integers, got {text!r}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"{what}: {exc}") from None


def _parse_mu(text: str) -> tuple[complex, complex, complex]:
    t1, t2 = _parse_floats(text, 2, "--mu")
    return (1j * t1, 1j * t2, -1j * (t1 + t2))


def _parse_range(text: str, what: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"{what} must be lo:hi:count, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"{what}: {exc}") from None
    if n < 1:
        raise UsageError(f"{what}: count must be >= 1")
    return [float(v) for v in np.linspace(lo, hi, n)]


_CONFIG_KEYS = {
    "nodes_per_unit": int,
    "err_refine": int,
    "rel_tol": float,
    "threads": int,
    "tol_recurrence": float,
    "tol_ode": float,
    "tol_mb_vs_series": float,
    "tol_whittaker": float,
    "tol_barnes": float,
    "tol_kloosterman": float,
    "tol_stade": float,
}


def _load_config(path: str | None) -> dict:
    """key=value file; '#' comments; unknown keys are usage errors."""
    out: dict = {}
    if path is None:
        return out
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"--config: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"--config line {lineno}: expected key=value")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise UsageError(f"--config line {lineno}: unknown key {key!r}")
        try:
            out[key] = _CONFIG_KEYS[key](val.strip())
        except ValueError as exc:
            raise UsageError(f"--config line {lineno}: {exc}") from None
    return out


def _setting(args, cfg: dict, key: str, default):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in cfg:
        return cfg[key]
    return default


# ----------------------------------------------------------------------
# records and emission


def _record(command: str, inputs: dict, value: complex, err: float,
            representation: str, t0: float, stable: bool) -> dict:
    ms = 0.0 if stable else round(1000.0 * (time.perf_counter() - t0), 3)
    return {
        "command": command,
        "inputs": inputs,
        "value": [float(value.real), float(value.imag)],
        "err_estimate": float(err),
        "representation": representation,
        "wall_time_ms": ms,
        "library_version": __version__,
    }


def _flatten(rec: dict) -> dict:
    out = dict(rec["inputs"])
    out["re"] = rec["value"][0]
    out["im"] = rec["value"][1]
    out["err_estimate"] = rec["err_estimate"]
    out["representation"] = rec["representation"]
    return out


def _emit(records: list[dict], use_csv: bool, stream) -> bool:
    """Write records; return False if any value is non-finite."""
    ok = True
    for rec in records:
        vals = rec.get("value", [])
        if any(not np.isfinite(v) for v in vals) or not np.isfinite(
                rec.get("err_estimate", 0.0)):
            ok = False
    if use_csv:
        rows = [_flatten(r) for r in records]
        headers: list[str] = []
        for row in rows:
            for key in row:
                if key not in headers:
                    headers.append(key)
        writer = csv.DictWriter(stream, fieldnames=headers, restval="",
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    else:
        for rec in records:
            stream.write(json.dumps(rec, separators=(", ", ": ")) + "\n")
    return ok


def _run_points(worker, points: list, threads: int) -> list:
    """Map worker over points, deterministic order regardless of pool."""
    if threads > 1 and len(points) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, points))
    return [worker(p) for p in points]


# ----------------------------------------------------------------------
# kernel subcommand

_ONE_VAR_KINDS = ("jw4", "kw4")
_TWO_VAR_KINDS = ("jwl", "kwl", "kwl-signed")


def _kernel_one(kind: str, route: str, y: tuple, mu, policy, dens, refine):
    """Dispatch one kernel evaluation; returns a KernelResult."""
    if kind == "jwl":
        if route == "mb":
            raise UsageError("jwl is series-only; drop --route mb")
        return j_wl(y, mu, policy)
    if kind == "jw4":
        if route == "mb":
            raise UsageError("jw4 is series-only; drop --route mb")
        return j_w4(y[0], mu, policy)
    if kind == "kwl":
        if route == "series":
            return k_wl_sym(y, mu, policy)
        return k_wl_mb(y, mu, nodes_per_unit=dens, err_refine=refine)
    if kind == "kwl-signed":
        sign = ("+" if y[0] > 0 else "-") + ("+" if y[1] > 0 else "-")
        if sign == "++":
            raise UsageError("kwl-signed needs a mixed or negative sign pair; "
                             "use kwl for y1, y2 > 0")
        if route == "mb":
            return k_wl_mb(y, mu, nodes_per_unit=dens, err_refine=refine)
        return k_wl_signed(y, mu, sign, policy)
    if kind == "kw4":
        if route == "series" or (
                route == "auto"
                and 8.0 * np.pi ** 3 * abs(y[0]) <= config.W4_SERIES_DOMAIN_BOUND):
            return k_w4_sym(y[0], mu, policy)
        return k_w4_mb(y[0], mu, nodes_per_unit=dens, err_refine=refine)
    raise UsageError(f"unknown kernel kind {kind!r}")


def cmd_kernel(args, cfg: dict) -> int:
    mu = _parse_mu(args.mu)
    t1, t2 = _parse_floats(args.mu, 2, "--mu")
    dens = _setting(args, cfg, "nodes_per_unit", None)
    refine = _setting(args, cfg, "err_refine", 8)
    rel_tol = _setting(args, cfg, "rel_tol", None)
    policy = SeriesPolicy(rel_tol=rel_tol) if rel_tol is not None else None
    kind, route = args.kind, args.route

    if kind in _ONE_VAR_KINDS:
        if args.y is not None or args.y2_range is not None:
            raise UsageError(f"{kind} takes --y1 or --y1-range, not --y/--y2-range")
        if args.y1_range is not None:
            if args.y1 is not None:
                raise UsageError("--y1 and --y1-range are mutually exclusive")
            points = [(v,) for v in _parse_range(args.y1_range, "--y1-range")]
        elif args.y1 is not None:
            points = [(float(args.y1),)]
        else:
            raise UsageError(f"{kind} needs --y1 or --y1-range")
    else:
        if args.y1 is not None and kind in _TWO_VAR_KINDS and args.y1_range is None:
            raise UsageError(f"{kind} takes --y y1,y2 or the range flags")
        if args.y1_range is not None or args.y2_range is not None:
            if args.y is not None:
                raise UsageError("--y and range flags are mutually exclusive")
            if args.y1_range is None or args.y2_range is None:
                raise UsageError("grid mode needs both --y1-range and --y2-range")
            y1s = _parse_range(args.y1_range, "--y1-range")
            y2s = _parse_range(args.y2_range, "--y2-range")
            points = [(a, b) for a in y1s for b in y2s]
        elif args.y is not None:
            points = [_parse_floats(args.y, 2, "--y")]
        else:
            raise UsageError(f"{kind} needs --y y1,y2 or both range flags")

    def worker(pt):
        t0 = time.perf_counter()
        res = _kernel_one(kind, route, pt, mu, policy, dens, refine)
        inputs = {"kind": kind, "route": route, "mu_t1": t1, "mu_t2": t2,
                  "y1": pt[0]}
        if len(pt) == 2:
            inputs["y2"] = pt[1]
        return _record("kernel", inputs, res.value, res.err_estimate,
                       res.representation, t0, args.stable)

    threads = _setting(args, cfg, "threads", config.thread_budget())
    records = _run_points(worker, points, threads)
    ok = _emit(records, args.csv, sys.stdout)
    if not ok:
        print("kernel: non-finite value in output", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


# ----------------------------------------------------------------------
# verify subcommand

_SUITES = ("recurrence", "ode", "mb-vs-series", "whittaker", "barnes",
           "kloosterman", "stade", "all")

_DEFAULT_TOLS = {
    "recurrence": 1e-12,
    "ode": 1e-6,
    "mb-vs-series": 1e-6,
    "whittaker": 1e-8,
    "barnes": 1e-8,
    "kloosterman": 1e-12,
    "stade": 1e-4,
}


def _check(suite: str, name: str, tol: float, residual) -> dict:
    r = float(residual)
    return {"suite": suite, "check": name, "tolerance": float(tol),
            "residual": r, "passed": bool(r < tol)}


def _mu_draws(count: int, scale: float, seed: int) -> list:
    """Fixed-seed, well-separated spectral parameters on the line."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        t1, t2 = rng.uniform(-scale, scale, size=2)
        m = (1j * t1, 1j * t2, -1j * (t1 + t2))
        gaps = (abs(t1 - t2), abs(2 * t1 + t2), abs(t1 + 2 * t2))
        if min(gaps) > 0.15:
            out.append(m)
    return out


def _suite_recurrence(tol: float) -> list[dict]:
    checks = []
    for i, mu in enumerate(_mu_draws(10, 2.5, seed=1101)):
        r = recurrence_check(mu, 40)
        checks.append(_check("recurrence", f"coeffs mu#{i}", tol, r))
    return checks


def _suite_ode(tol: float) -> list[dict]:
    checks = []
    pts = [((0.11, 0.07), (0.9j, 0.35j)), ((-0.09, 0.05), (1.4j, -0.3j)),
           ((0.06, -0.13), (0.55j, 0.8j)), ((-0.08, -0.06), (1.1j, 0.2j)),
           ((0.12, 0.12), (0.7j, -0.9j))]
    for i, (y, (m1, m2)) in enumerate(pts):
        mu = (m1, m2, -m1 - m2)
        for w in WEYL_GROUP:
            muw = weyl_act_mu(mu, w).as_tuple()

            def func(a, b, _m=muw):
                return j_wl((a, b), _m).value

            r1, r2 = residual_wl(func, y, mu)
            checks.append(_check("ode", f"wl pt#{i} w={w.label}", tol,
                                 max(r1, r2)))
        for label in _W3_LABELS:
            muw = weyl_act_mu(mu, next(
                w for w in WEYL_GROUP if w.label == label)).as_tuple()

            def func1(a, _m=muw):
                return j_w4(a, _m).value

            r = residual_w4(func1, y[0], 1.0, mu)
            checks.append(_check("ode", f"w4 pt#{i} w={label}", tol, r))
    return checks


def _suite_mb_vs_series(tol: float) -> list[dict]:
    checks = []
    mus = _mu_draws(2, 1.5, seed=2203)
    for s1, s2 in ((1, -1), (-1, 1), (-1, -1)):
        for mag1, mag2 in ((0.04, 0.07), (0.22, 0.3)):
            y = (s1 * mag1, s2 * mag2)
            sign = ("+" if s1 > 0 else "-") + ("+" if s2 > 0 else "-")
            for j, mu in enumerate(mus):
                a = k_wl_mb(y, mu).value
                b = k_wl_signed(y, mu, sign).value
                r = abs(a - b) / max(abs(b), 1e-300)
                checks.append(_check(
                    "mb-vs-series",
                    f"kwl {sign} y=({y[0]:g},{y[1]:g}) mu#{j}", tol, r))
    for y1 in (0.05, -0.3):
        for j, mu in enumerate(mus):
            ref = k_w4_sym(y1, mu).value
            for name, fn in (("mb", k_w4_mb), ("voronoi", k_w4_voronoi)):
                r = abs(fn(y1, mu).value - ref) / max(abs(ref), 1e-300)
                checks.append(_check(
                    "mb-vs-series", f"kw4 {name} y1={y1:g} mu#{j}", tol, r))
    return checks


def _suite_whittaker(tol: float) -> list[dict]:
    checks = []
    # positive-quadrant draws stay small: the symmetrized series loses
    # digits like the Weyl-term amplitude over the (tiny) kernel value,
    # ~1.6e5 at y ~ 0.1, so beyond y ~ 0.15 it cannot certify 1e-8
    rng = np.random.default_rng(3307)
    mus = _mu_draws(10, 1.2, seed=3308)
    for i, mu in enumerate(mus):
        y1, y2 = rng.uniform(0.02, 0.14, size=2)
        lhs = k_wl_sym((y1, y2), mu).value
        m = as_mu(mu)
        mu2 = tuple(2.0 * c for c in m.as_tuple())
        w = whittaker_wstar((2.0 * np.sqrt(y1), 2.0 * np.sqrt(y2)), mu2).value
        rhs = np.pi ** 4 * cos_mu(mu) * np.sqrt(y1 * y2) * w
        r = abs(lhs - rhs) / max(abs(rhs), 1e-300)
        checks.append(_check(
            "whittaker", f"identity y=({y1:.3f},{y2:.3f}) mu#{i}", tol, r))
    return checks


def _suite_barnes(tol: float) -> list[dict]:
    # draws keep the two pole families at least ~0.6 apart so the
    # mid-window contour stays well clear of both
    checks = []
    rng = np.random.default_rng(4409)
    for i in range(26):
        a, b, c, d = (complex(rng.uniform(0.35, 0.9), rng.uniform(-0.5, 0.5))
                      for _ in range(4))
        lhs, rhs, _ = barnes_first_check(a, b, c, d)
        checks.append(_check("barnes", f"first #{i}", tol,
                             abs(lhs - rhs) / max(abs(rhs), 1e-300)))
    for i in range(26):
        a, b, c = (complex(rng.uniform(0.5, 0.9), rng.uniform(-0.4, 0.4))
                   for _ in range(3))
        d = complex(rng.uniform(0.1, 0.4), rng.uniform(-0.4, 0.4))
        lhs, rhs, _ = barnes_second_check(a, b, c, d)
        checks.append(_check("barnes", f"second #{i}", tol,
                             abs(lhs - rhs) / max(abs(rhs), 1e-300)))
    return checks


def _suite_kloosterman(tol: float) -> list[dict]:
    checks = []
    checks.append(_check("kloosterman", "s_tilde(1,1,1;1,1)=1", tol,
                         abs(s_tilde(1, 1, 1, 1, 1) - 1.0)))
    checks.append(_check("kloosterman", "s_big(...;1,1)=1", tol,
                         abs(s_big(1, 1, 1, 1, 1, 1) - 1.0)))
    # s_tilde is defined for d1 | d2 only
    for (m1, n1, n2, d1, d2) in ((1, 1, 1, 2, 4), (2, 1, 3, 3, 6),
                                 (1, 2, 1, 4, 8), (3, 2, 2, 5, 5)):
        a = s_tilde(m1, n1, n2, d1, d2)
        b = s_tilde_naive(m1, n1, n2, d1, d2)
        r = abs(a - b) / max(1.0, abs(b))
        checks.append(_check(
            "kloosterman",
            f"s_tilde vs naive ({m1},{n1},{n2};{d1},{d2})", tol, r))
    for (m, n, d) in (((1, 1), (1, 1), (2, 3)), ((2, 1), (1, 3), (4, 6)),
                      ((1, 2), (2, 1), (5, 5)), ((1, 1), (2, 2), (9, 8))):
        a = s_big(m[0], m[1], n[0], n[1], d[0], d[1])
        b = s_big_naive(m[0], m[1], n[0], n[1], d[0], d[1])
        r = abs(a - b) / max(1.0, abs(b))
        checks.append(_check(
            "kloosterman", f"s_big vs naive ({m},{n};{d})", tol, r))
    return checks


def _suite_stade(tol: float) -> list[dict]:
    checks = []
    for i, mu in enumerate(_mu_draws(1, 0.8, seed=5511)):
        lhs, rhs, _ = stade_check(mu)
        checks.append(_check("stade", f"pairing mu#{i}", tol,
                             abs(lhs - rhs) / max(abs(rhs), 1e-300)))
    return checks


_SUITE_FNS = {
    "recurrence": _suite_recurrence,
    "ode": _suite_ode,
    "mb-vs-series": _suite_mb_vs_series,
    "whittaker": _suite_whittaker,
    "barnes": _suite_barnes,
    "kloosterman": _suite_kloosterman,
    "stade": _suite_stade,
}


def cmd_verify(args, cfg: dict) -> int:
    names = list(_SUITE_FNS) if args.suite == "all" else [args.suite]
    overrides = {}
    for item in args.tol or []:
        key, _, val = item.partition("=")
        if key not in _DEFAULT_TOLS or not val:
            raise UsageError(f"--tol expects suite=value with suite in "
                             f"{sorted(_DEFAULT_TOLS)}, got {item!r}")
        try:
            overrides[key] = float(val)
        except ValueError as exc:
            raise UsageError(f"--tol {item!r}: {exc}") from None

    all_checks: list[dict] = []
    for name in names:
        tol = overrides.get(
            name, cfg.get("tol_" + name.replace("-", "_"),
                          _DEFAULT_TOLS[name]))
        all_checks.extend(_SUITE_FNS[name](tol))

    stream = sys.stdout
    if args.csv:
        writer = csv.DictWriter(
            stream,
            fieldnames=["suite", "check", "tolerance", "residual", "passed"],
            lineterminator="\n")
        writer.writeheader()
        writer.writerows(all_checks)
    else:
        for chk in all_checks:
            stream.write(json.dumps(chk, separators=(", ", ": ")) + "\n")
    n_fail = sum(1 for c in all_checks if not c["passed"])
    nan_seen = any(not np.isfinite(c["residual"]) for c in all_checks)
    summary = {"command": "verify", "suites": names,
               "checks": len(all_checks), "failed": n_fail,
               "library_version": __version__}
    if not args.csv:
        stream.write(json.dumps(summary, separators=(", ", ": ")) + "\n")
    if n_fail or nan_seen:
        print(f"verify: {n_fail} of {len(all_checks)} checks failed",
              file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


# ----------------------------------------------------------------------
# kloosterman / whittaker / geometric subcommands


def cmd_kloosterman(args, cfg: dict) -> int:
    m = _parse_ints(args.m, 2, "--m")
    n = _parse_ints(args.n, 2, "--n")
    c = _parse_ints(args.c, 2, "--c")
    t0 = time.perf_counter()
    val = s_weyl(args.w, m, n, c)
    # rounding model: random-walk accumulation over at most c1*c2 summands
    err = 2.3e-16 * max(1.0, float(np.sqrt(c[0] * c[1])))
    rec = _record("kloosterman",
                  {"w": args.w, "m1": m[0], "m2": m[1], "n1": n[0],
                   "n2": n[1], "c1": c[0], "c2": c[1]},
                  complex(val), err, "exact_sum", t0, args.stable)
    ok = _emit([rec], args.csv, sys.stdout)
    if not ok:
        print("kloosterman: non-finite value", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_whittaker(args, cfg: dict) -> int:
    y = _parse_floats(args.y, 2, "--y")
    t1, t2 = _parse_floats(args.mu, 2, "--mu")
    mu = _parse_mu(args.mu)
    dens = _setting(args, cfg, "nodes_per_unit", None)
    refine = _setting(args, cfg, "err_refine", 8)
    t0 = time.perf_counter()
    res = whittaker_wstar(y, mu, nodes_per_unit=dens, err_refine=refine)
    rec = _record("whittaker",
                  {"y1": y[0], "y2": y[1], "mu_t1": t1, "mu_t2": t2},
                  res.value, res.err_estimate, res.representation,
                  t0, args.stable)
    ok = _emit([rec], args.csv, sys.stdout)
    if not ok:
        print("whittaker: non-finite value", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


_GEOM_FNS = {"wl": geometric_sum_wl, "w4": geometric_sum_w4,
             "w5": geometric_sum_w5}


def _term_err(term) -> float:
    """Relative route floor scaled by the term, from measured route accuracy.

    The one-variable series (w4/w5 terms) holds ~1e-9 across its whole
    reach.  The two-variable routes hold ~1e-6 up to |4 pi^2 y| ~ 40 and
    degrade toward the series bound; the positive-quadrant Whittaker
    route holds ~1e-6.
    """
    if term.weight is None:
        return 0.0
    if term.weyl in ("w4", "w5"):
        return 1e-9 * abs(term.contribution)
    zmax = 4.0 * np.pi ** 2 * max(abs(term.y[0]), abs(term.y[1]))
    if zmax <= 40.0:
        rel = 1e-6
    elif zmax <= 90.0:
        rel = 2e-5
    else:
        rel = 5e-4
    return rel * abs(term.contribution)


def cmd_geometric(args, cfg: dict) -> int:
    m = _parse_ints(args.m, 2, "--m")
    n = _parse_ints(args.n, 2, "--n")
    a1, a2 = _parse_floats(args.center, 2, "--center")
    f = TestFunction(((1j * a1, 1j * a2, -1j * (a1 + a2)),), args.width)
    t0 = time.perf_counter()
    gs = _GEOM_FNS[args.w](f, m, n, args.cmax)
    elapsed = time.perf_counter()

    base = {"w": args.w, "m1": m[0], "m2": m[1], "n1": n[0], "n2": n[1],
            "cmax": args.cmax, "center_t1": a1, "center_t2": a2,
            "width": args.width}
    records = []
    for term in gs.terms:
        inputs = dict(base)
        inputs["c1"] = term.c1
        inputs["c2"] = term.c2
        inputs["eps"] = ",".join(str(e) for e in term.eps)
        rep = "skipped_zero_sum" if term.weight is None else "transform"
        records.append(_record("geometric-term", inputs, term.contribution,
                               _term_err(term), rep, t0, True))
    total_err = sum(_term_err(t) for t in gs.terms)
    rec = _record("geometric", base, complex(gs), total_err, "partial_sum",
                  t0, args.stable)
    if not args.stable:
        rec["wall_time_ms"] = round(1000.0 * (elapsed - t0), 3)
    records.append(rec)
    ok = _emit(records, args.csv, sys.stdout)
    if not ok:
        print("geometric: non-finite value in output", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sl3kuz",
        description="SL(3) Kuznetsov-formula kernels, sums, and checks")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--csv", action="store_true",
                        help="CSV output instead of JSON lines")
        sp.add_argument("--stable", action="store_true",
                        help="zero wall_time_ms for byte-identical reruns")
        sp.add_argument("--config", default=None,
                        help="key=value defaults file; flags override")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker bound (default KUZNETSOV_THREADS)")

    sp = sub.add_parser("kernel", help="kernel values on points or y-grids")
    sp.add_argument("--kind", required=True,
                    choices=("jwl", "jw4", "kwl", "kwl-signed", "kw4"))
    sp.add_argument("--route", default="auto",
                    choices=("series", "mb", "auto"))
    sp.add_argument("--mu", required=True, help="t1,t2 on the unitary line")
    sp.add_argument("--y", default=None, help="y1,y2 for two-variable kinds")
    sp.add_argument("--y1", type=float, default=None,
                    help="y1 for one-variable kinds")
    sp.add_argument("--y1-range", dest="y1_range", default=None,
                    help="lo:hi:count grid in y1")
    sp.add_argument("--y2-range", dest="y2_range", default=None,
                    help="lo:hi:count grid in y2")
    sp.add_argument("--nodes-per-unit", dest="nodes_per_unit", type=int,
                    default=None)
    sp.add_argument("--err-refine", dest="err_refine", type=int, default=None)
    sp.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    common(sp)
    sp.set_defaults(fn=cmd_kernel)

    sp = sub.add_parser("verify", help="cross-validation suites")
    sp.add_argument("--suite", default="all", choices=_SUITES)
    sp.add_argument("--tol", action="append", default=None,
                    metavar="SUITE=VALUE",
                    help="override a suite tolerance (repeatable)")
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("kloosterman", help="one exponential sum")
    sp.add_argument("--w", required=True, choices=("wl", "w4", "w5"))
    sp.add_argument("--m", required=True, help="m1,m2")
    sp.add_argument("--n", required=True, help="n1,n2")
    sp.add_argument("--c", required=True, help="c1,c2 moduli")
    common(sp)
    sp.set_defaults(fn=cmd_kloosterman)

    sp = sub.add_parser("whittaker", help="completed Whittaker value")
    sp.add_argument("--y", required=True, help="y1,y2 > 0")
    sp.add_argument("--mu", required=True, help="t1,t2 on the unitary line")
    sp.add_argument("--nodes-per-unit", dest="nodes_per_unit", type=int,
                    default=None)
    sp.add_argument("--err-refine", dest="err_refine", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=cmd_whittaker)

    sp = sub.add_parser("geometric", help="truncated moduli sum with terms")
    sp.add_argument("--w", required=True, choices=("wl", "w4", "w5"))
    sp.add_argument("--m", required=True, help="m1,m2")
    sp.add_argument("--n", required=True, help="n1,n2")
    sp.add_argument("--cmax", required=True, type=int)
    sp.add_argument("--center", default="2,0",
                    help="test-function center t1,t2 (default 2,0)")
    sp.add_argument("--width", type=float, default=1.0)
    common(sp)
    sp.set_defaults(fn=cmd_geometric)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
        return args.fn(args, cfg)
    except UsageError as exc:
        print(f"sl3kuz {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Sl3KuznetsovError as exc:
        print(f"sl3kuz {args.command}: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
