"""Command-line reports.

Every command resolves a flat configuration (flags > config file > defaults),
runs one experiment, and writes three artifacts into the output directory:

  report.csv     the per-item table, floats printed with 12 significant digits
  summary.json   headline statistics, sorted keys
  manifest.json  config echo, software version, table provenance hashes,
                 wall time per phase, output inventory

Re-running the same mathematical configuration reproduces report.csv and
summary.json byte for byte regardless of thread count or cache state; only
manifest timing/execution fields vary.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, is_dataclass

import numpy as np

from . import __version__
from .bounds import (
    dickman_rho,
    munshi_beta,
    munshi_verify,
    shiu_ratio,
    smooth_vs_rho,
    tau_shift_bound_demo,
)
from .characters import RealCharacter, is_fundamental_discriminant
from .characters import chi_table as _chi_table
from .convolution import (
    build_lambda,
    build_lambda_prime,
    build_nu,
    dirichlet_convolve,
    mean_value_rows,
    product_rule_deviation,
    square_part_bound_margin,
    verify_vonmangoldt_identity,
)
from .errors import CapacityError, ConfigError, NonConvergenceError
from .lvalues import curly_l, exceptionality_score, l_one, l_one_class_number
from .progressions import (
    build_lab_tables,
    prime_power_correction,
    theorem1_scan,
    theorem2_aggregate,
)
from .rough import SiegelParams, default_R
from .sieve import (
    DEFAULT_SEGMENT_SIZE,
    sieve_gpf,
    sieve_mu,
    sieve_spf,
    sieve_square_part,
    sieve_tau_k,
    sieve_totient,
    sieve_vonmangoldt,
)
from .tables import SpfTable, TableCache, ensure_capacity, provenance_hash

COMMANDS = (
    ("sieve", "build the core arithmetic tables and report their checksums"),
    ("identities", "verify the exact convolution identity suite for one character"),
    ("lvalue", "L(1, chi) by series and by class number, with the truncation floor"),
    ("theorem1", "per-residue progression scan against the character main term"),
    ("theorem2", "aggregate |psi(x,q,a) - psi(x)/phi(q)| over a dyadic modulus window"),
    ("bounds", "divisor, shifted-divisor, smooth-number and Shiu measurements"),
    ("scan-discriminants", "rank fundamental discriminants by exceptionality score"),
)

_CONFIG_TYPES = {
    "x": int,
    "disc": int,
    "R": int,
    "A": float,
    "alpha": float,
    "h": float,
    "Q": int,
    "q": int,
    "a": int,
    "r": float,
    "limit": int,
}

_DEFAULTS = {
    "x": 100_000,
    "disc": -4,
    "a": 1,
    "A": 2.0,
    "alpha": 1e-3,
    "h": 0.5,
    "r": 3.0,
    "limit": 200,
    "threads": 1,
    "segment_size": DEFAULT_SEGMENT_SIZE,
}


@dataclass
class RunConfig:
    command: str
    x: int
    disc: int
    a: int
    A: float
    alpha: float
    h: float
    r: float
    limit: int
    threads: int
    segment_size: int
    out_dir: str
    cache_dir: str | None
    figures: bool
    q: int | None = None
    Q: int | None = None
    R: int | None = None


@dataclass
class CommandResult:
    header: list
    rows: list
    summary: dict
    tables: dict
    render: object = None


def parse_config_file(path: str) -> dict:
    """Flat key=value file; '#' starts a comment, keys mirror the parameter names."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        if "=" not in s:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line.strip()!r}")
        key, val = (part.strip() for part in s.split("=", 1))
        if key not in _CONFIG_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        raw[key] = val
    return raw


def _cast(key: str, raw: str):
    caster = _CONFIG_TYPES[key]
    try:
        return caster(raw)
    except ValueError as exc:
        raise ConfigError(f"config key {key}={raw!r} is not a valid {caster.__name__}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="siegellab",
        description="number-theory experiment reports: tables, identities, L-values, progressions",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, help_text in COMMANDS:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--x", type=int, default=None, help="main range limit")
        sp.add_argument("--disc", type=int, default=None, help="fundamental discriminant")
        sp.add_argument("--q", type=int, default=None, help="progression modulus")
        sp.add_argument("--a", type=int, default=None, help="progression residue")
        sp.add_argument("--R", type=int, default=None, help="roughness cutoff (default: derived from x and |disc|)")
        sp.add_argument("--A", type=float, default=None, help="truncation-floor exponent")
        sp.add_argument("--alpha", type=float, default=None, help="window-shape parameter, 0 < alpha < 1/500")
        sp.add_argument("--h", type=float, default=None, help="deficiency fraction in (0, 1)")
        sp.add_argument("--Q", type=int, default=None, help="dyadic window base: moduli in (Q, 2Q]")
        sp.add_argument("--r", type=float, default=None, help="divisor-bound shape parameter in (2, 4]")
        sp.add_argument("--limit", type=int, default=None, help="discriminant scan bound")
        sp.add_argument("--threads", type=int, default=None, help="worker threads for table builds")
        sp.add_argument("--segment-size", type=int, default=None, help="sieve segment length")
        sp.add_argument("--out", default=None, help="output directory (default ./siegellab_out)")
        sp.add_argument("--cache", default=None, help="table cache directory (default: no disk cache)")
        sp.add_argument("--config", default=None, help="key=value parameter file; flags override it")
        sp.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    file_vals = parse_config_file(args.config) if args.config else {}

    def pick(key):
        flag = getattr(args, key, None)
        if flag is not None:
            return flag
        if key in file_vals:
            return _cast(key, file_vals[key])
        return _DEFAULTS.get(key)

    cfg = RunConfig(
        command=args.command,
        x=pick("x"),
        disc=pick("disc"),
        q=pick("q"),
        a=pick("a"),
        R=pick("R"),
        A=pick("A"),
        alpha=pick("alpha"),
        h=pick("h"),
        Q=pick("Q"),
        r=pick("r"),
        limit=pick("limit"),
        threads=pick("threads"),
        segment_size=pick("segment_size"),
        out_dir=args.out if args.out is not None else "siegellab_out",
        cache_dir=args.cache,
        figures=not args.no_figures,
    )
    if cfg.threads < 1:
        raise ConfigError("threads must be >= 1")
    if cfg.segment_size < 1024:
        raise ConfigError("segment size must be >= 1024")
    if cfg.x < 2:
        raise ConfigError("x must be >= 2")
    ensure_capacity(cfg.x)
    if not is_fundamental_discriminant(cfg.disc):
        raise ConfigError(f"disc={cfg.disc} is not a fundamental discriminant")
    return cfg


def _fmt_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "%.12g" % float(v)
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def write_report(out_dir: str, header: list, rows: list) -> str:
    path = os.path.join(out_dir, "report.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt_cell(c) for c in row])
    return path


def _jsonable(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def write_json(path: str, payload) -> str:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(_jsonable(payload), sort_keys=True, indent=2))
        fh.write("\n")
    return path


def _prov_map(tables, extra=()) -> dict:
    provs = [t.provenance for t in tables] + list(extra)
    return {p: provenance_hash(p) for p in sorted(provs)}


def _geometric_xs(x: int, points: int = 12) -> list[int]:
    lo = max(10, x // 10**4)
    xs = np.unique(np.geomspace(lo, x, points).astype(np.int64))
    return [int(v) for v in xs]


def _cmd_sieve(cfg: RunConfig, cache: TableCache) -> CommandResult:
    x, seg, th = cfg.x, cfg.segment_size, cfg.threads
    spf_tab = cache.get(
        f"spf(limit={x})",
        lambda: sieve_spf(x, segment_size=seg, threads=th).as_table(),
    )
    spf = SpfTable.from_table(spf_tab)
    mu = cache.get(f"mu(limit={x})", lambda: sieve_mu(x, segment_size=seg, threads=th))
    vm = cache.get(
        f"vonmangoldt(limit={x})",
        lambda: sieve_vonmangoldt(x, segment_size=seg, threads=th, spf=spf),
    )
    phi = cache.get(f"totient(limit={x})", lambda: sieve_totient(x, segment_size=seg, threads=th))
    tabs = [spf_tab, mu, vm, phi]
    header = ["table", "limit", "kind", "total", "sha256"]
    rows = []
    for t in tabs:
        total = t.values.sum()
        rows.append(
            [t.name, t.limit, t.value_kind, int(total) if t.value_kind == "integer" else float(total), t.content_hash()]
        )
    n = np.arange(x + 1, dtype=np.int64)
    summary = {
        "x": x,
        "psi_x": float(vm.values.sum()),
        "psi_minus_x": float(vm.values.sum()) - x,
        "mertens_x": int(mu.values.sum()),
        "prime_count": int(np.count_nonzero(spf.spf[2:] == n[2:])),
        "totient_total": int(phi.values.sum()),
        "squarefree_count": int(np.count_nonzero(mu.values[1:])),
    }
    from .figures import render_sieve

    return CommandResult(header, rows, summary, _prov_map(tabs), lambda out: render_sieve(out, vm, mu))


def _cmd_identities(cfg: RunConfig, cache: TableCache) -> CommandResult:
    x, d = cfg.x, cfg.disc
    chi = RealCharacter(d)
    ct = cache.get(f"chi(disc={d},limit={x})", lambda: _chi_table(chi, x))
    lam = cache.get(f"lambda(disc={d},limit={x})", lambda: build_lambda(chi, x, chi_tab=ct))
    lamp = cache.get(
        f"lambda_prime(disc={d},limit={x})", lambda: build_lambda_prime(chi, x, chi_tab=ct)
    )
    mu = cache.get(f"mu(limit={x})", lambda: sieve_mu(x, segment_size=cfg.segment_size, threads=cfg.threads))
    nu = cache.get(f"nu(disc={d},limit={x})", lambda: build_nu(chi, x, mu=mu, chi_tab=ct))
    vm = cache.get(
        f"vonmangoldt(limit={x})",
        lambda: sieve_vonmangoldt(x, segment_size=cfg.segment_size, threads=cfg.threads),
    )
    sq = cache.get(f"square_part(limit={x})", lambda: sieve_square_part(x))

    tol = 1e-8 * math.log(x)
    dev_a = verify_vonmangoldt_identity(chi, x, lam_prime=lamp, nu=nu, vonmangoldt=vm)
    conv = dirichlet_convolve(lam, vm, x)
    dev_b = float(np.abs(conv.values[1:] - lamp.values[1 : x + 1]).max())
    dev_c = product_rule_deviation(lam, lamp, min(x, 10**5))
    margin_sq = square_part_bound_margin(lam, sq, x)
    margin_nu = int((lam.values[1:] - np.abs(nu.values[1:])).min())
    lval = l_one(chi, 1e-9).value
    mrows = mean_value_rows(lam, chi, lval, _geometric_xs(x))

    header = ["check", "statistic", "tolerance", "status"]
    rows = [
        ["vonmangoldt_eq_lambda_prime_conv_nu", dev_a, tol, "pass" if dev_a < tol else "fail"],
        ["lambda_prime_eq_lambda_conv_vonmangoldt", dev_b, tol, "pass" if dev_b < tol else "fail"],
        ["coprime_product_rule_max_dev", dev_c, tol, "pass" if dev_c < tol else "fail"],
        ["square_split_min_margin", margin_sq, 0.0, "pass" if margin_sq >= 0 else "fail"],
        ["nu_dominated_by_lambda_min_margin", float(margin_nu), 0.0, "pass" if margin_nu >= 0 else "fail"],
    ]
    summary = {
        "x": x,
        "disc": d,
        "max_dev_vonmangoldt_identity": dev_a,
        "max_dev_lambda_prime_identity": dev_b,
        "max_dev_product_rule": dev_c,
        "min_margin_square_split": margin_sq,
        "min_margin_nu_domination": margin_nu,
        "tolerance": tol,
        "all_pass": all(r[3] == "pass" for r in rows),
        "l_value": lval,
        "mean_value": mrows,
    }
    from .figures import render_identities

    return CommandResult(
        header,
        rows,
        summary,
        _prov_map([ct, lam, lamp, mu, nu, vm, sq]),
        lambda out: render_identities(out, mrows),
    )


def _cmd_lvalue(cfg: RunConfig, cache: TableCache) -> CommandResult:
    chi = RealCharacter(cfg.disc)
    direct = l_one(chi, 1e-9)
    closed = l_one_class_number(chi)
    floor_val = curly_l(chi, cfg.x, cfg.A)
    score = exceptionality_score(chi, cfg.x)
    header = ["method", "value", "tail_bound", "terms_used"]
    rows = [
        ["direct_abel", direct.value, direct.tail_bound, direct.terms_used],
        ["class_number", closed.value, closed.tail_bound, closed.terms_used],
    ]
    summary = {
        "disc": cfg.disc,
        "l_direct": direct.value,
        "l_class_number": closed.value,
        "difference": abs(direct.value - closed.value),
        "truncation_floor": math.log(cfg.x) ** (-cfg.A),
        "curly_l": floor_val,
        "exceptionality_score": score,
        "x": cfg.x,
        "A": cfg.A,
    }
    from .figures import render_lvalue

    return CommandResult(header, rows, summary, {}, lambda out: render_lvalue(out, chi))


def _cmd_theorem1(cfg: RunConfig, cache: TableCache) -> CommandResult:
    if cfg.q is None:
        raise ConfigError("theorem1 requires --q")
    x, d = cfg.x, cfg.disc
    chi = RealCharacter(d)
    if cfg.R is None:
        cfg.R = default_R(x, abs(d))
    try:
        params = SiegelParams(x=x, disc=d, R=cfg.R, A=cfg.A, alpha=cfg.alpha, h=cfg.h)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    tables = build_lab_tables(
        chi, x, params.R, cache=cache, segment_size=cfg.segment_size, threads=cfg.threads
    )
    stats, reports, scales = theorem1_scan(params, cfg.q, tables)
    correction = prime_power_correction(tables.vonmangoldt, tables.spf, x, params.R, cfg.q)
    header = [
        "q", "a", "chi_a", "psi", "s_prime", "s_plain", "s_w_prime", "predicted", "discrepancy",
    ]
    rows = [
        [r.q, r.a, r.chi_a, r.psi, r.s_prime, r.s_plain, r.s_w_prime, r.predicted, r.discrepancy]
        for r in reports
    ]
    summary = {
        "x": x,
        "disc": d,
        "q": cfg.q,
        "R": params.R,
        "h": params.h,
        "stats": asdict(stats),
        "scales": scales,
        "prime_power_correction": correction,
        "normalization": reports[0].normalization if reports else "",
    }
    prov = _prov_map(
        [tables.mu, tables.vonmangoldt, tables.chi_tab, tables.lam, tables.lam_prime,
         tables.lam_r_prime, tables.lam_w_prime],
        extra=[tables.spf.provenance],
    )
    from .figures import render_theorem1

    return CommandResult(
        header, rows, summary, prov, lambda out: render_theorem1(out, reports, stats.threshold)
    )


def _cmd_theorem2(cfg: RunConfig, cache: TableCache) -> CommandResult:
    if cfg.Q is None:
        raise ConfigError("theorem2 requires --Q")
    x, d = cfg.x, cfg.disc
    if cfg.R is None:
        cfg.R = default_R(max(x, 16), max(abs(d), 3))
    try:
        params = SiegelParams(x=x, disc=d, R=cfg.R, A=cfg.A, alpha=cfg.alpha, h=cfg.h, Q=cfg.Q)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    vm = cache.get(
        f"vonmangoldt(limit={x})",
        lambda: sieve_vonmangoldt(x, segment_size=cfg.segment_size, threads=cfg.threads),
    )
    phi = cache.get(f"totient(limit={2 * cfg.Q})", lambda: sieve_totient(2 * cfg.Q))
    result = theorem2_aggregate(params, cfg.a, vm, totient=phi, threads=cfg.threads)
    header = ["q", "phi_q", "psi_xqa", "expected", "abs_dev"]
    rows = [list(r) for r in result.rows]
    logx = math.log(x)
    summary = {
        "x": x,
        "disc": d,
        "Q": cfg.Q,
        "a": cfg.a,
        "aggregate": result.aggregate,
        "bound_scale": result.bound_scale,
        "l_value": result.l_value,
        "moduli_counted": len(result.rows),
        "normalized_by_x_l_log5": result.aggregate / (x * result.l_value * logx**5),
    }
    from .figures import render_theorem2

    return CommandResult(
        header, rows, summary, _prov_map([vm, phi]), lambda out: render_theorem2(out, result.rows)
    )


def _cmd_bounds(cfg: RunConfig, cache: TableCache) -> CommandResult:
    x = cfg.x
    tau = cache.get(f"tau_k(k=2,limit={x})", lambda: sieve_tau_k(x, 2))
    tau4 = cache.get(f"tau_k(k=4,limit={x})", lambda: sieve_tau_k(x, 4))
    gpf = cache.get(f"gpf(limit={x})", lambda: sieve_gpf(x))
    report = munshi_verify(x, cfg.r, tau=tau)

    chi = RealCharacter(cfg.disc)
    demo_R = max(10, int(round(x**0.25)))
    spf = SpfTable.from_table(
        cache.get(f"spf(limit={x})", lambda: sieve_spf(x, segment_size=cfg.segment_size, threads=cfg.threads).as_table())
    )
    mu = cache.get(f"mu(limit={x})", lambda: sieve_mu(x, segment_size=cfg.segment_size, threads=cfg.threads))
    ct = cache.get(f"chi(disc={cfg.disc},limit={x})", lambda: _chi_table(chi, x))
    lamp = cache.get(
        f"lambda_prime(disc={cfg.disc},limit={x})", lambda: build_lambda_prime(chi, x, chi_tab=ct)
    )
    from .rough import rough_restrict, squarefree_restrict

    lam_w = squarefree_restrict(rough_restrict(lamp, spf, demo_R), mu)
    q_base = max(2, int(round(x**0.25)))
    shift_ratio = tau_shift_bound_demo(lam_w, x, cfg.a, q_base, tau=tau)

    smooth_rows = [smooth_vs_rho(x, u, gpf=gpf) for u in (1.5, 2.0, 2.5, 3.0)]
    shiu2 = shiu_ratio(x, 1, 1, 2, tau_k=tau)
    q4 = cfg.q if cfg.q is not None else 7
    shiu4 = shiu_ratio(x, q4, cfg.a if math.gcd(cfg.a, q4) == 1 else 1, 4, tau_k=tau4)

    header = ["inequality_id", "parameter", "exponent", "worst_ratio", "worst_n", "sample_limit"]
    rows = [
        [report.inequality_id, report.parameter, report.exponent, report.worst_ratio, report.worst_n, report.sample_limit],
        ["tau_shift_rhs_over_lhs", float(q_base), 1.0, shift_ratio, 0, x],
        ["shiu_tau2_over_x_logx", 1.0, 2.0, shiu2, 0, x],
        ["shiu_tau4_normalized", float(q4), 4.0, shiu4, 0, x],
    ]
    for sr in smooth_rows:
        rows.append(["smooth_density_over_rho", sr["u"], 0.0, sr["density_over_rho"], sr["y"], x])
    summary = {
        "x": x,
        "r": cfg.r,
        "beta": report.exponent,
        "munshi_worst_ratio": report.worst_ratio,
        "munshi_worst_n": report.worst_n,
        "tau_shift_ratio": shift_ratio,
        "tau_shift_disc": cfg.disc,
        "tau_shift_R": demo_R,
        "shiu_tau2": shiu2,
        "shiu_tau4": shiu4,
        "smooth": smooth_rows,
        "rho_2": dickman_rho(2.0),
        "rho_3": dickman_rho(3.0),
    }
    from .figures import render_bounds

    return CommandResult(
        header,
        rows,
        summary,
        _prov_map([tau, tau4, gpf, mu, ct, lamp], extra=[spf.provenance]),
        lambda out: render_bounds(out, smooth_rows),
    )


def scan_discriminants(limit: int, x: int = 10**6) -> list[dict]:
    """All fundamental discriminants with |d| <= limit, ranked most-exceptional
    (smallest L-derived score) first."""
    if limit < 3:
        raise ValueError("limit must be >= 3")
    if x < 2:
        raise ValueError("x must be >= 2")
    entries = []
    logx5 = math.log(x) ** 5
    for d in range(-limit, limit + 1):
        if not is_fundamental_discriminant(d):
            continue
        chi = RealCharacter(d)
        lval = l_one(chi, 1e-9).value
        entries.append(
            {
                "disc": d,
                "conductor": chi.conductor,
                "l_value": lval,
                "score": lval * logx5,
                "log_conductor_pow5": math.log(chi.conductor) ** 5 if chi.conductor > 1 else 0.0,
            }
        )
    entries.sort(key=lambda e: (e["score"], e["disc"]))
    for rank, e in enumerate(entries, 1):
        e["rank"] = rank
    return entries


def _cmd_scan(cfg: RunConfig, cache: TableCache) -> CommandResult:
    entries = scan_discriminants(cfg.limit, cfg.x)
    header = ["rank", "disc", "conductor", "l_value", "score"]
    rows = [[e["rank"], e["disc"], e["conductor"], e["l_value"], e["score"]] for e in entries]
    summary = {
        "limit": cfg.limit,
        "x": cfg.x,
        "count": len(entries),
        "most_exceptional_disc": entries[0]["disc"] if entries else None,
        "smallest_l_value": entries[0]["l_value"] if entries else None,
    }
    from .figures import render_scan

    return CommandResult(header, rows, summary, {}, lambda out: render_scan(out, entries))


_HANDLERS = {
    "sieve": _cmd_sieve,
    "identities": _cmd_identities,
    "lvalue": _cmd_lvalue,
    "theorem1": _cmd_theorem1,
    "theorem2": _cmd_theorem2,
    "bounds": _cmd_bounds,
    "scan-discriminants": _cmd_scan,
}

_MATH_KEYS = ("x", "disc", "q", "a", "R", "A", "alpha", "h", "Q", "r", "limit")


def run(cfg: RunConfig) -> dict:
    t_start = time.perf_counter()
    os.makedirs(cfg.out_dir, exist_ok=True)
    cache = TableCache(cfg.cache_dir) if cfg.cache_dir else TableCache(None)
    t0 = time.perf_counter()
    result = _HANDLERS[cfg.command](cfg, cache)
    t_compute = time.perf_counter() - t0

    t0 = time.perf_counter()
    write_report(cfg.out_dir, result.header, result.rows)
    write_json(os.path.join(cfg.out_dir, "summary.json"), result.summary)
    outputs = ["report.csv", "summary.json", "manifest.json"]
    if cfg.figures and result.render is not None:
        outputs.extend(os.path.basename(f) for f in result.render(cfg.out_dir))
    t_write = time.perf_counter() - t0

    scalars = {
        k: v
        for k, v in result.summary.items()
        if isinstance(v, (int, float, str, bool)) and not isinstance(v, np.ndarray)
    }
    manifest = {
        "version": __version__,
        "command": cfg.command,
        "config": {k: getattr(cfg, k) for k in _MATH_KEYS},
        "execution": {
            "threads": cfg.threads,
            "segment_size": cfg.segment_size,
            "out_dir": cfg.out_dir,
            "cache_dir": cfg.cache_dir,
            "figures": cfg.figures,
        },
        "tables": result.tables,
        "outputs": sorted(outputs),
        "summary_stats": scalars,
        "timings": {
            "compute_s": t_compute,
            "write_s": t_write,
            "total_s": time.perf_counter() - t_start,
        },
    }
    write_json(os.path.join(cfg.out_dir, "manifest.json"), manifest)
    print(
        f"siegellab {cfg.command}: {len(result.rows)} rows, "
        f"{len(outputs)} artifacts in {cfg.out_dir}"
    )
    return manifest


_EXIT_CODES = (
    (ConfigError, 2),
    (CapacityError, 3),
    (NonConvergenceError, 5),
    (ValueError, 4),
    (OSError, 6),
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        run(cfg)
        return 0
    except Exception as exc:  # noqa: BLE001 - single error funnel for exit codes
        code = 1
        for etype, ecode in _EXIT_CODES:
            if isinstance(exc, etype):
                code = ecode
                break
        record = {
            "error": type(exc).__name__,
            "message": str(exc),
            "command": getattr(args, "command", None),
            "exit_code": code,
        }
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
