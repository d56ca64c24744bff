"""Command-line front end.

Every command writes a version comment line, a CSV header and data rows,
or with --json a single JSON document holding the same fields. Exit codes:
0 success, 2 bad arguments, 3 capacity exceeded, 4 domain or pole error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, geometry, lattice, repcount, zeta
from .errors import CapacityError, DomainError

CSV_VERSION = "distenergy-csv v1"
CACHE_ENV = "DISTENERGY_CACHE"

HEADERS = {
    "energy": ["N", "k", "E_k", "d", "holder_bound"],
    "sums": ["x", "k", "S_k"],
    "fit": ["k", "degree", "residual", "lower_degree_residual", "improvement", "coefficients"],
    "zeta": ["form", "s", "k", "method", "value", "error_estimate"],
    "lattice-compare": ["rank", "D", "k", "N", "cutoff", "energy", "energy_over_NlogN", "below_reference"],
    "probe55": ["form", "k", "s", "value", "hexagonal", "difference", "sign", "asserted"],
    "probe44": ["label", "N", "E_2", "ratio"],
}


@dataclass
class RunConfig:
    command: str
    k: list[int] = field(default_factory=list)
    m: Optional[int] = None
    N: Optional[int] = None
    x_max: Optional[int] = None
    D: list[int] = field(default_factory=list)
    s: list[float] = field(default_factory=list)
    fmt: str = "csv"
    output: Optional[str] = None
    workers: int = 1
    cache_dir: Optional[str] = None
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if any(k < 0 for k in self.k):
            raise ArgError("k must be nonnegative")
        if self.workers < 1:
            raise ArgError("--workers must be >= 1")
        if self.x_max is not None and self.x_max < 1:
            raise ArgError("--xmax must be positive")
        if self.N is not None and self.N < 1:
            raise ArgError("--N must be positive")
        for D in self.D:
            if D >= 0 or not lattice.is_squarefree(D):
                raise ArgError(f"D={D} must be negative and squarefree")


class ArgError(Exception):
    pass


# --- formatting ----------------------------------------------------------------


def fmt_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.15g}"
    if v is None:
        return ""
    return str(v)


def emit(cfg: RunConfig, table: str, rows: list[dict], meta: Optional[dict] = None) -> None:
    header = HEADERS[table]
    out = open(cfg.output, "w", newline="") if cfg.output else sys.stdout
    try:
        if cfg.fmt == "json":
            doc = {
                "version": CSV_VERSION,
                "command": cfg.command,
                "columns": header,
                "rows": [{h: _json_value(r.get(h)) for h in header} for r in rows],
            }
            if meta:
                doc["meta"] = meta
            json.dump(doc, out, indent=2)
            out.write("\n")
        else:
            out.write(f"# {CSV_VERSION} {table}\n")
            w = csv.writer(out, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([fmt_value(r.get(h)) for h in header])
            if meta:
                for key, val in meta.items():
                    out.write(f"# {key}: {fmt_value(val)}\n")
    finally:
        if cfg.output:
            out.close()


def _json_value(v):
    if isinstance(v, float):
        if math.isinf(v) or math.isnan(v):
            return str(v)
        return float(f"{v:.15g}")
    return v


# --- sieve cache ---------------------------------------------------------------


def cache_dir(cfg: RunConfig) -> Optional[Path]:
    path = cfg.cache_dir or os.environ.get(CACHE_ENV)
    return Path(path) if path else None


def cached_table(cfg: RunConfig, desc: repcount.FormDescriptor, x_max: int) -> repcount.RepTable:
    """Sieve through the on-disk cache when one is configured.

    Files are named by descriptor and x_max; a sidecar holds the sha256 of the
    counts and a mismatch forces a re-sieve. Writes go through a temporary
    file and an atomic rename.
    """
    root = cache_dir(cfg)
    if root is None:
        return repcount.sieve(desc, x_max, workers=cfg.workers)
    root.mkdir(parents=True, exist_ok=True)
    base = root / f"{desc.label()}_x{x_max}.rpt"
    digest = base.with_suffix(".sha256")
    if base.exists() and digest.exists():
        try:
            table = repcount.load_table(base)
            if table.checksum() == digest.read_text().strip() and table.descriptor == desc:
                return table
        except ValueError:
            pass
    table = repcount.sieve(desc, x_max, workers=cfg.workers)
    for target, writer in ((base, lambda p: repcount.dump_table(table, p)), (digest, lambda p: Path(p).write_text(table.checksum()))):
        fd, tmp = tempfile.mkstemp(dir=root, prefix=".tmp-")
        os.close(fd)
        writer(tmp)
        os.replace(tmp, target)
    return table


def parse_form(text: str) -> repcount.FormDescriptor:
    """'-3' -> norm form Q_-3, 'a,b,c' -> binary form, 'sq3' -> sum of 3 squares."""
    text = text.strip()
    if text.startswith("sq"):
        return repcount.FormDescriptor.squares(int(text[2:]))
    if "," in text:
        a, b, c = (int(t) for t in text.split(","))
        return repcount.FormDescriptor.binary(a, b, c)
    return repcount.FormDescriptor.binary(*lattice.norm_form(int(text)).abc)


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


# --- commands ------------------------------------------------------------------


def cmd_energy(cfg: RunConfig) -> int:
    if cfg.extra.get("points"):
        P = geometry.read_point_file(cfg.extra["points"])
        H = geometry.distance_histogram(P)
    else:
        m, side = cfg.extra["grid"]
        if cfg.extra.get("brute"):
            H = geometry.distance_histogram(geometry.make_square_grid(m, side))
        else:
            H = geometry.grid_difference_histogram(m, side)
    rows = []
    for k in cfg.k:
        rep = geometry.energy_report(H, k)
        rows.append({"N": rep.N, "k": k, "E_k": rep.energy, "d": rep.distinct, "holder_bound": float(rep.holder_bound)})
    emit(cfg, "energy", rows)
    return 0


def cmd_sums(cfg: RunConfig) -> int:
    desc = cfg.extra["form"]
    table = cached_table(cfg, desc, cfg.x_max)
    xs = cfg.extra.get("at") or _default_points(cfg.x_max)
    rows = []
    for k in cfg.k:
        S = repcount.power_partial_sums(table, k)
        rows.extend({"x": x, "k": k, "S_k": S[x]} for x in xs)
    emit(cfg, "sums", rows, {"form": desc.label()})
    return 0


def _default_points(x_max: int) -> list[int]:
    pts = []
    p = 10
    while p < x_max:
        pts.append(p)
        p *= 10
    pts.append(x_max)
    return pts


def cmd_fit(cfg: RunConfig) -> int:
    desc = cfg.extra["form"]
    table = cached_table(cfg, desc, cfg.x_max)
    rows = []
    for k in cfg.k:
        det = analysis.degree_detection(
            table, k, cfg.extra["xmin"], cfg.x_max, cfg.extra["samples"], cfg.extra["smoothing"]
        )
        rows.append(
            {
                "k": k,
                "degree": det.degree,
                "residual": det.fit.residual,
                "lower_degree_residual": det.lower.residual,
                "improvement": det.improvement,
                "coefficients": " ".join(fmt_value(c) for c in det.fit.coefficients),
            }
        )
    emit(cfg, "fit", rows, {"smoothing": cfg.extra["smoothing"]})
    return 0


def cmd_zeta(cfg: RunConfig) -> int:
    desc = cfg.extra["form"]
    if desc.kind != "binary":
        raise DomainError("zeta needs a binary form")
    F = lattice.BinaryForm(*desc.abc)
    method = cfg.extra["method"]
    cutoff = cfg.extra["cutoff"]
    rows = []
    table = None
    for k in cfg.k or [1]:
        for s in cfg.s:
            evs = []
            if k == 1:
                if method in ("cs", "both"):
                    evs.append(zeta.epstein_chowla_selberg(F, s))
                if method in ("direct", "both"):
                    table = table or cached_table(cfg, desc, cutoff)
                    evs.append(zeta.epstein_direct(F, s, cutoff, table=table))
            else:
                table = table or cached_table(cfg, desc, cutoff)
                evs.append(zeta.higher_moment_truncated(F, k, s, table))
            for ev in evs:
                rows.append(
                    {"form": desc.label(), "s": s, "k": k, "method": ev.method, "value": ev.value, "error_estimate": ev.error_estimate}
                )
    emit(cfg, "zeta", rows)
    return 0


def cmd_lattice_compare(cfg: RunConfig) -> int:
    def source(form, x_max):
        return cached_table(cfg, repcount.FormDescriptor.binary(*form.abc), x_max)

    k = cfg.k[0] if cfg.k else 2
    ranking = lattice.compare_lattices(cfg.D, k, cfg.N, source=source)
    by_D = {r.D: r.energy for r in ranking.reports}
    rows = []
    for rank, rep in enumerate(ranking.reports, 1):
        ref = -3 if rep.D % 4 == 1 else -1
        below = None if rep.D == ref or ref not in by_D else rep.energy < by_D[ref]
        rows.append(
            {
                "rank": rank,
                "D": rep.D,
                "k": k,
                "N": cfg.N,
                "cutoff": rep.cutoff,
                "energy": rep.energy,
                "energy_over_NlogN": rep.energy / (cfg.N * math.log(cfg.N)) if cfg.N > 1 else float("nan"),
                "below_reference": below,
            }
        )
    meta = {name: ok for name, ok in ranking.flags.items()}
    meta["asserted"] = ranking.asserted
    emit(cfg, "lattice-compare", rows, meta)
    return 0


DEFAULT_PROBE_FORMS = ["1,0,1", "1,0,2", "1,1,2", "1,1,3", "2,1,3", "1,0,3", "2,2,3", "2,1,2"]


def cmd_probe(cfg: RunConfig) -> int:
    if cfg.extra["conjecture"] == "44":
        m = cfg.m or 3
        sets = []
        for side in cfg.extra["sides"]:
            sets.append((f"grid{side}", geometry.make_square_grid(m, side)))
        n_random = cfg.extra["random"]
        if n_random:
            sets.append(
                (f"random{n_random}", geometry.random_point_set(n_random, m, 1, cfg.extra["box"], seed=cfg.seed))
            )
        rows = [
            {"label": r.label, "N": r.N, "E_2": r.energy, "ratio": r.ratio}
            for r in analysis.conjecture44_report(sets, m)
        ]
        emit(cfg, "probe44", rows, {"m": m, "seed": cfg.seed})
        return 0
    forms = []
    for text in cfg.extra["forms"]:
        desc = parse_form(text)
        forms.append(lattice.BinaryForm(*desc.abc))
    rows = []
    for k in cfg.k or [1]:
        for r in zeta.conjecture_probe(forms, k, cfg.s, x_max=cfg.x_max or 10**6):
            sign = (r.difference > 0) - (r.difference < 0)
            rows.append(
                {
                    "form": "{},{},{}".format(*r.form.abc),
                    "k": r.k,
                    "s": r.s,
                    "value": r.value,
                    "hexagonal": r.hexagonal,
                    "difference": r.difference,
                    "sign": sign,
                    "asserted": r.asserted,
                }
            )
    emit(cfg, "probe55", rows, {"normalization": "covolume 1"})
    return 0


COMMANDS = {
    "energy": cmd_energy,
    "sums": cmd_sums,
    "fit": cmd_fit,
    "zeta": cmd_zeta,
    "lattice-compare": cmd_lattice_compare,
    "probe": cmd_probe,
}


# --- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document instead of CSV")
    common.add_argument("--output", "-o", help="write to this path instead of stdout")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--cache-dir", help=f"sieve cache directory (default ${CACHE_ENV})")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="distenergy", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("energy", parents=[common], help="distance energies of a grid or point file")
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--grid", help="MxSIDE, e.g. 2x40")
    src.add_argument("--points", help="point file, one point per line")
    e.add_argument("--k", default="2", help="comma-separated energy orders")
    e.add_argument("--brute", action="store_true", help="use pair enumeration for grids")

    s = sub.add_parser("sums", parents=[common], help="power partial sums S_k(x)")
    s.add_argument("--form", default="-1", help="D, a,b,c or sqM (default -1: two squares)")
    s.add_argument("--k", default="2")
    s.add_argument("--xmax", type=int, required=True)
    s.add_argument("--at", help="comma-separated x values (default: powers of ten and xmax)")

    f = sub.add_parser("fit", parents=[common], help="log-polynomial degree detection")
    f.add_argument("--form", default="-1")
    f.add_argument("--k", default="2,3")
    f.add_argument("--xmin", type=int, default=10**5)
    f.add_argument("--xmax", type=int, default=10**7)
    f.add_argument("--samples", type=int, default=40)
    f.add_argument("--smoothing", type=int, default=2)

    z = sub.add_parser("zeta", parents=[common], help="Epstein zeta values")
    z.add_argument("--form", default="-1")
    z.add_argument("--s", required=True, help="comma-separated real s values")
    z.add_argument("--k", default="1", help="moment order(s); k >= 2 uses the truncated sum")
    z.add_argument("--method", choices=["direct", "cs", "both"], default="both")
    z.add_argument("--cutoff", type=int, default=10**6)

    lc = sub.add_parser("lattice-compare", parents=[common], help="pointwise energies E_{D,k}(N)")
    lc.add_argument("--D", required=True, help="comma-separated negative squarefree D")
    lc.add_argument("--k", default="2")
    lc.add_argument("--N", type=int, required=True)

    pr = sub.add_parser("probe", parents=[common], help="conjecture probes")
    pr.add_argument("--conjecture", choices=["44", "55"], default="55")
    pr.add_argument("--forms", default=";".join(DEFAULT_PROBE_FORMS), help="';'-separated forms for 55")
    pr.add_argument("--k", default="1")
    pr.add_argument("--s", default="0.8,1.5,2,3")
    pr.add_argument("--xmax", type=int, default=10**6, help="sieve length for k >= 2")
    pr.add_argument("--m", type=int, default=3)
    pr.add_argument("--sides", default="8,16", help="grid sides for 44")
    pr.add_argument("--random", type=int, default=500, help="random points for 44 (0 to skip)")
    pr.add_argument("--box", type=int, default=100, help="random points lie in [1, box]^m")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        fmt="json" if args.json else "csv",
        output=args.output,
        workers=args.workers,
        cache_dir=args.cache_dir,
        seed=args.seed,
    )
    try:
        if hasattr(args, "k"):
            cfg.k = _int_list(args.k)
        if args.command == "energy":
            if args.grid:
                m, side = (int(t) for t in args.grid.lower().split("x"))
                cfg.extra["grid"] = (m, side)
            cfg.extra["points"] = args.points
            cfg.extra["brute"] = args.brute
        elif args.command in ("sums", "fit"):
            cfg.x_max = args.xmax
            cfg.extra["form"] = parse_form(args.form)
            if args.command == "sums":
                cfg.extra["at"] = _int_list(args.at) if args.at else None
                if cfg.extra["at"] and max(cfg.extra["at"]) > args.xmax:
                    raise ArgError("--at values must not exceed --xmax")
            else:
                cfg.extra.update(xmin=args.xmin, samples=args.samples, smoothing=args.smoothing)
        elif args.command == "zeta":
            cfg.s = _float_list(args.s)
            cfg.extra.update(form=parse_form(args.form), method=args.method, cutoff=args.cutoff)
        elif args.command == "lattice-compare":
            cfg.D = _int_list(args.D)
            cfg.N = args.N
        elif args.command == "probe":
            cfg.s = _float_list(args.s)
            cfg.m = args.m
            cfg.x_max = args.xmax
            cfg.extra.update(
                conjecture=args.conjecture,
                forms=[t for t in args.forms.split(";") if t.strip()],
                sides=_int_list(args.sides),
                random=args.random,
                box=args.box,
            )
    except (ValueError, DomainError) as exc:
        raise ArgError(str(exc)) from None
    cfg.validate()
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ArgError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: kind=argument reason={exc}", file=sys.stderr)
        return 2
    try:
        return COMMANDS[cfg.command](cfg)
    except CapacityError as exc:
        print(f"error: kind=capacity reason={exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        kind = "pole" if exc.__class__.__name__ == "PoleError" else "domain"
        print(f"error: kind={kind} reason={exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
