"""Batch command-line interface.

Every command writes one table (CSV by default, JSON with ``--format json``)
to ``--out`` or stdout.  CSV output starts with ``#`` comment lines carrying
the build identifier and the full run configuration.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .asymptotics import (additivity_curve, closed_form_counting, exact_counting,
                          page_baseline)
from .charges import MODELS, charge, q_charge, verify_criteria
from .entanglement import combined_stderr, page_curve
from .sampler import derive_seed
from .sectors import (SectorBasis, SectorEmptyError, amc_commuting_analog, amc_noncommuting,
                      list_sectors, microcanonical, outcome_distribution,
                      partial_constraint_check, single_charge_sector, wigner_d_distribution)

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_BAD_CONFIG = 0, 1, 2

# (N, s=m) pairs whose commuting analogs match the noncommuting outcome distributions
AMC_PAIRS = ((4, 1), (8, 1), (2, 1), (4, 2), (6, 3), (8, 4))

COMMANDS = ("sectors", "page-curve", "amc", "verify", "additivity", "asymptotics")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: list[int] = field(default_factory=list)
    na: list[int] | None = None
    samples: int | None = None
    seed: int = 0
    model: str = "both"
    sector: str = "microcanonical"
    s: float | None = None
    m: float | None = None
    alpha: int = 3
    baseline: str = "eq4"
    format: str = "csv"
    out: str | None = None
    no_cache: bool = False
    cache_dir: str | None = None
    workers: int = 1

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError("--format must be csv or json")
        if self.baseline not in ("eq4", "exact-page"):
            raise ConfigError("--baseline must be eq4 or exact-page")
        if self.model not in MODELS + ("both",):
            raise ConfigError("--model must be noncommuting, commuting or both")
        if self.sector not in ("microcanonical", "amc", "single-charge"):
            raise ConfigError("--sector must be microcanonical, amc or single-charge")
        if self.samples is not None and self.samples < 2:
            raise ConfigError("--samples must be at least 2")
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise ConfigError("--seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ConfigError("--workers must be positive")
        if self.alpha not in (1, 2, 3):
            raise ConfigError("--alpha must be 1, 2 or 3")
        limit = 128 * 8 if self.command == "asymptotics" else 10
        for n in self.n:
            if n < 1 or n > limit:
                raise ConfigError(f"--n {n} out of range 1..{limit}")
        if self.command in ("page-curve", "additivity") and self.n and max(self.n) > 8:
            raise ConfigError("Monte-Carlo commands support N <= 8")
        if self.command == "page-curve" and self.sector == "amc" and self.s is None:
            raise ConfigError("--sector amc needs --s (and optionally --m, default m = s)")
        if self.command in ("page-curve", "additivity", "sectors") and len(self.n) > 1 \
                and self.command != "additivity":
            raise ConfigError(f"{self.command} takes a single --n")
        if self.na is not None:
            for n in self.n:
                if any(k < 0 or k > n for k in self.na) and self.command != "asymptotics":
                    raise ConfigError(f"--na values must lie in 0..{n}")

    def samples_for(self, n_sites: int) -> int:
        if self.samples is not None:
            return self.samples
        return 10_000 if n_sites <= 6 else 1_000


def build_id() -> str:
    """Version plus a short hash of the package sources."""
    digest = hashlib.sha1()
    for path in sorted(Path(__file__).parent.glob("*.py")):
        digest.update(path.name.encode())
        digest.update(path.read_bytes())
    return f"{__version__}+{digest.hexdigest()[:12]}"


# -- sector cache -----------------------------------------------------------

def _cache_root(cfg: RunConfig) -> Path | None:
    if cfg.no_cache:
        return None
    root = cfg.cache_dir or os.environ.get("CHARGEPAGE_CACHE")
    if root is None:
        root = Path.home() / ".cache" / "chargepage"
    return Path(root)


def cached_sector(cfg: RunConfig, key: tuple, builder: Callable[[], SectorBasis]) -> SectorBasis:
    """Build a sector or load it from the on-disk cache keyed by (model, kind, N, s, m...)."""
    root = _cache_root(cfg)
    if root is None:
        return builder()
    name = hashlib.sha1(repr(key).encode()).hexdigest()[:16] + ".npz"
    path = root / name
    if path.exists():
        try:
            return SectorBasis.load(path)
        except (OSError, ValueError, KeyError):
            pass
    basis = builder()
    root.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp.npz")
    basis.save(tmp)
    tmp.replace(path)
    return basis


def _micro(cfg: RunConfig, model: str, n: int) -> SectorBasis:
    return cached_sector(cfg, (model, "microcanonical", n), lambda: microcanonical(model, n))


def _amc(cfg: RunConfig, model: str, n: int, s: float, m: float) -> SectorBasis:
    if model == "noncommuting":
        return cached_sector(cfg, (model, "amc", n, s, m), lambda: amc_noncommuting(n, s, m))
    return cached_sector(cfg, (model, "amc", n, s, m), lambda: amc_commuting_analog(n, s, m)[0])


def _single(cfg: RunConfig, model: str, alpha: int, n: int) -> SectorBasis:
    return cached_sector(cfg, (model, "single-charge", n, alpha),
                         lambda: single_charge_sector(model, alpha, n))


# -- commands ---------------------------------------------------------------

def _na_list(cfg: RunConfig, n: int) -> list[int]:
    return list(cfg.na) if cfg.na is not None else list(range(n + 1))


def _curve(cfg: RunConfig, sector: SectorBasis, n_a_list, seed_tag: str = ""):
    n = sector.n_sites
    seed = derive_seed(cfg.seed, sector.label.slug + seed_tag)
    return page_curve(sector, n_a_list, cfg.samples_for(n), seed, cfg.workers)


def cmd_sectors(cfg: RunConfig) -> tuple[list[dict], int]:
    n = cfg.n[0]
    rows = []
    for label, dim in list_sectors(n):
        rows.append({"N": n, "sector_label": label.slug, "model": label.model,
                     "kind": label.kind, "s": label.s, "m": label.m, "dim": dim})
    return rows, EXIT_OK


def cmd_page_curve(cfg: RunConfig) -> tuple[list[dict], int]:
    n = cfg.n[0]
    models = MODELS if cfg.model == "both" else (cfg.model,)
    rows = []
    for model in models:
        if cfg.sector == "microcanonical":
            sector = _micro(cfg, model, n)
        elif cfg.sector == "amc":
            m = cfg.s if cfg.m is None else cfg.m
            sector = _amc(cfg, model, n, cfg.s, m)
        else:
            sector = _single(cfg, model, cfg.alpha, n)
        if sector.dim == 0:
            raise SectorEmptyError(f"sector {sector.label.slug} is empty")
        est = _curve(cfg, sector, _na_list(cfg, n))
        for row in est.rows():
            base = page_baseline(row["N_A"], n, cfg.baseline)
            row["baseline_nats"] = base
            row["relative_nats"] = row["mean_nats"] - base
            row["stream_seed"], row["seed"] = row["seed"], cfg.seed
            rows.append(row)
    return rows, EXIT_OK


def percent_difference(nc: float, c: float) -> float:
    """|NC - C| relative to the mean magnitude of the two values, in percent."""
    return abs(nc - c) / ((abs(nc) + abs(c)) / 2) * 100


def cmd_amc(cfg: RunConfig) -> tuple[list[dict], int]:
    if cfg.n:
        s = cfg.s if cfg.s is not None else cfg.n[0] / 2
        pairs = [(n, s) for n in cfg.n]
    else:
        pairs = list(AMC_PAIRS)
    rows = []
    for n, s in pairs:
        m = s if cfg.m is None else cfg.m
        nc = _amc(cfg, "noncommuting", n, s, m)
        union = _amc(cfg, "commuting", n, s, m)
        matched = _matched(nc, union)
        n_a_list = cfg.na if cfg.na is not None else [n // 2]
        est_nc = _curve(cfg, nc, n_a_list)
        est_c = _curve(cfg, union, n_a_list) if union.dim else None
        for n_a in n_a_list:
            base = page_baseline(n_a, n, cfg.baseline)
            row = {"N": n, "s": s, "m": m, "N_A": n_a, "matched": matched,
                   "nc_dim": nc.dim, "c_dim": union.dim,
                   "nc_mean": est_nc.mean(n_a), "nc_stderr": est_nc.stderr(n_a)}
            if est_c is not None:
                row.update(c_mean=est_c.mean(n_a), c_stderr=est_c.stderr(n_a))
                nc_rel, c_rel = est_nc.mean(n_a) - base, est_c.mean(n_a) - base
                row.update(baseline_nats=base, nc_relative=nc_rel, c_relative=c_rel,
                           diff=nc_rel - c_rel,
                           diff_stderr=combined_stderr(est_nc.stderr(n_a), est_c.stderr(n_a)),
                           pct_diff=percent_difference(nc_rel, c_rel))
            row.update(samples=cfg.samples_for(n), seed=cfg.seed)
            rows.append(row)
    return rows, EXIT_OK


def _matched(nc: SectorBasis, c: SectorBasis, atol: float = 1e-9) -> bool:
    if c.dim == 0 or nc.dim == 0:
        return False
    return all(outcome_distribution(c, charge("commuting", a, c.n_sites)).allclose(
        outcome_distribution(nc, charge("noncommuting", a, nc.n_sites)), atol)
        for a in (1, 2, 3))


def cmd_verify(cfg: RunConfig) -> tuple[list[dict], int]:
    n = cfg.n[0] if cfg.n else 4
    checks: list[tuple[str, bool, str]] = []
    if n <= 4:
        checks += [("criteria: " + a, p, d) for a, p, d in verify_criteria(n).entries]
    # outcome distributions: projector route against the Wigner-d route, s <= 4
    for s in range(1, 5):
        for m in range(0, s + 1):
            proj = outcome_distribution(amc_noncommuting(2 * s, s, m), q_charge(1, 2 * s))
            ref = wigner_d_distribution(s, m)
            err = proj.max_abs_diff(ref)
            checks.append((f"p1 (s,m)=({s},{m}) projector vs wigner-d", err <= 1e-9,
                           f"max diff {err:.1e}"))
            single = ref.is_single_peaked()
            checks.append((f"p1 (s,m)=({s},{m}) single-peaked iff s == m", single == (s == m),
                           f"peaks={ref.peak_count()}"))
    for n_b in (4, 8) if n >= 8 else (4,):
        checks += [(f"partial constraint N={n_b}: " + a, p, d)
                   for a, p, d in partial_constraint_check(n_b).entries]
    # orthonormality and eigenvector residuals of the sectors at this N
    sectors = []
    if n % 2 == 0:
        sectors.append(_micro(cfg, "noncommuting", n))
    if n % 4 == 0:
        sectors.append(_micro(cfg, "commuting", n))
    s2 = n % 2 or 2
    sectors.append(_amc(cfg, "noncommuting", n, s2 / 2, s2 / 2))
    sectors.append(_amc(cfg, "commuting", n, s2 / 2, s2 / 2))
    for sec in sectors:
        if sec.dim == 0 or sec.dim > 4000:
            continue
        err = sec.gram_error()
        checks.append((f"orthonormal {sec.label.slug}", err <= 1e-10, f"|G-1|max {err:.1e}"))
    rows = [{"check": name, "passed": passed, "detail": detail} for name, passed, detail in checks]
    status = EXIT_OK if all(p for _, p, _ in checks) else EXIT_VERIFY_FAILED
    return rows, status


def cmd_additivity(cfg: RunConfig) -> tuple[list[dict], int]:
    rows = []
    for n in cfg.n or [4, 8]:
        n_a_list = _na_list(cfg, n)
        single = _curve(cfg, _single(cfg, "noncommuting", cfg.alpha, n), n_a_list)
        nc = _curve(cfg, _micro(cfg, "noncommuting", n), n_a_list)
        c = _curve(cfg, _micro(cfg, "commuting", n), n_a_list)
        for n_a in n_a_list:
            base = page_baseline(n_a, n, cfg.baseline)
            rows.append({
                "N": n, "N_A": n_a, "baseline_nats": base,
                "single_charge_mean": single.mean(n_a),
                "single_charge_stderr": single.stderr(n_a),
                "ansatz_nats": additivity_curve(n, n_a, single, base),
                "ansatz_stderr": 3 * single.stderr(n_a),
                "nc_mean": nc.mean(n_a), "nc_stderr": nc.stderr(n_a),
                "c_mean": c.mean(n_a), "c_stderr": c.stderr(n_a),
                "samples": cfg.samples_for(n), "seed": cfg.seed,
            })
    return rows, EXIT_OK


def cmd_asymptotics(cfg: RunConfig) -> tuple[list[dict], int]:
    rows = []
    for n in cfg.n or [8, 16, 32, 64, 128]:
        n_a_list = [k for k in cfg.na if 0 < k < n] if cfg.na is not None else [n // 4]
        for model in MODELS:
            if model == "commuting" and n % 4:
                continue
            if n % 2:
                continue
            for n_a in n_a_list:
                exact = exact_counting(model, n, n_a).value
                closed = closed_form_counting(model, n, n_a).value
                rows.append({"model": model, "N": n, "N_A": n_a, "exact_nats": exact,
                             "closed_form_nats": closed, "difference": closed - exact})
    return rows, EXIT_OK


HANDLERS = {
    "sectors": cmd_sectors,
    "page-curve": cmd_page_curve,
    "amc": cmd_amc,
    "verify": cmd_verify,
    "additivity": cmd_additivity,
    "asymptotics": cmd_asymptotics,
}


# -- output -----------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def render(cfg: RunConfig, rows: list[dict]) -> str:
    rows = [{k: _jsonable(v) for k, v in row.items()} for row in rows]
    config = asdict(cfg)
    if cfg.format == "json":
        return json.dumps({"build": build_id(), "config": config, "rows": rows},
                          indent=2, allow_nan=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# chargepage {build_id()}\n")
    buf.write(f"# config: {json.dumps(config, sort_keys=True)}\n")
    fields: list[str] = []
    for row in rows:
        for k in row:
            if k not in fields:
                fields.append(k)
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


# -- argument parsing -------------------------------------------------------

def parse_int_list(text: str) -> list[int]:
    """'1,2,5-7' -> [1, 2, 5, 6, 7]."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chargepage",
        description="Page curves of commuting and noncommuting charge-constrained lattices")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--n", type=str, default=None,
                        help="system size(s), comma list or range (e.g. 4 or 32,64,128)")
    parser.add_argument("--na", type=str, default=None,
                        help="subsystem sizes, comma list or range; default all")
    parser.add_argument("--samples", type=int, default=None,
                        help="Haar samples per curve (default 10^4 for N <= 6, else 10^3)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--model", default="both",
                        choices=("noncommuting", "commuting", "both"))
    parser.add_argument("--sector", default="microcanonical",
                        choices=("microcanonical", "amc", "single-charge"))
    parser.add_argument("--s", type=float, default=None)
    parser.add_argument("--m", type=float, default=None)
    parser.add_argument("--alpha", type=int, default=3, help="charge index for single-charge sectors")
    parser.add_argument("--baseline", default="eq4", choices=("eq4", "exact-page"))
    parser.add_argument("--format", default="csv", choices=("csv", "json"))
    parser.add_argument("--out", default=None, help="output file (default stdout)")
    parser.add_argument("--no-cache", action="store_true")
    parser.add_argument("--cache-dir", default=None)
    parser.add_argument("--workers", type=int, default=1)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    try:
        n = parse_int_list(args.n) if args.n else []
        na = parse_int_list(args.na) if args.na and args.na != "all" else None
    except ValueError as exc:
        raise ConfigError(f"cannot parse integer list: {exc}") from exc
    if not n and args.command in ("sectors", "page-curve"):
        raise ConfigError(f"{args.command} requires --n")
    return RunConfig(command=args.command, n=n, na=na, samples=args.samples, seed=args.seed,
                     model=args.model, sector=args.sector, s=args.s, m=args.m,
                     alpha=args.alpha, baseline=args.baseline, format=args.format,
                     out=args.out, no_cache=args.no_cache, cache_dir=args.cache_dir,
                     workers=args.workers)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config_from_args(args)
        cfg.validate()
        rows, status = HANDLERS[cfg.command](cfg)
    except (ConfigError, SectorEmptyError) as exc:
        print(f"chargepage: error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    text = render(cfg, rows)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    if cfg.command == "verify":
        for row in rows:
            if not row["passed"]:
                print(f"FAILED: {row['check']} {row['detail']}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
