"""Command line front end: modinv report|zoo|validate|degree|rank|jordan|
certify|kernel|selfdual.

Modules come from --zoo NAME:PARAMS specs or --in FILE module files.  Reports
go to CSV or JSON; two runs with the same configuration produce byte-identical
output.  Exit codes: 0 success, 1 invalid input, 2 at least one field came
out undetermined (the report is still written).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
from dataclasses import dataclass, field

from .groebner import DEFAULT_PAIR_BUDGET
from .invariants import (Constancy, constant_jrank_certify, generic_jordan_type,
                         generic_jrank, generic_kernel, invariant_report,
                         jdegree, self_dual_test, UnsupportedInputError)
from .modrep import (CatalogError, InvalidFrameError, ModuleFileError,
                     ModuleRep, load_module, validate_frame, zoo,
                     zoo_standard_instances)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_UNDETERMINED = 2


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)   # ("zoo", spec) | ("file", path)
    j: int | None = None
    ext: int = 3
    budget: int = DEFAULT_PAIR_BUDGET
    fmt: str = "csv"
    out: str | None = None
    primes: list = field(default_factory=list)
    workers: int = 1

    def validate(self):
        if self.ext not in (1, 2, 3):
            raise ValueError("--ext must be 1, 2 or 3")
        if self.budget <= 0:
            raise ValueError("--budget must be positive")
        if self.fmt not in ("csv", "json"):
            raise ValueError("--format must be csv or json")


def parse_zoo_spec(spec: str):
    """NAME:key=val,key=val into (name, params)."""
    name, _, rest = spec.partition(":")
    params = {}
    if rest:
        for bit in rest.split(","):
            key, _, val = bit.partition("=")
            if not key or not val:
                raise CatalogError(f"malformed zoo parameter {bit!r}")
            try:
                params[key] = int(val)
            except ValueError:
                raise CatalogError(f"zoo parameter {key!r} must be an integer")
    return name, params


def build_input(kind: str, spec: str) -> ModuleRep:
    if kind == "zoo":
        name, params = parse_zoo_spec(spec)
        m = zoo(name, params)
        m.name = spec
        return m
    return load_module(spec)


def _tri(flag) -> str:
    if flag is None:
        return "undet"
    return "yes" if flag else "no"


def _deg_str(deg) -> str:
    return "undet" if deg.value is None else str(deg.value)


def _constancy_str(c: Constancy) -> str:
    return {"constant": "yes", "nonconstant": "no", "undetermined": "undet"}[c.status]


def report_row(report) -> dict:
    row = {
        "name": report.name,
        "p": report.p,
        "r": report.r,
        "dim": report.dim,
        "ranks": {str(j): report.ranks[j] for j in sorted(report.ranks)},
        "constant": {str(j): _constancy_str(report.constancy[j])
                     for j in sorted(report.constancy)},
        "degrees": {str(j): _deg_str(report.degrees[j])
                    for j in sorted(report.degrees)},
        "degree_generic_chart": {str(j): report.degrees[j].generic_chart
                                 for j in sorted(report.degrees)},
        "jordan_type": str(report.jordan),
        "constant_jordan_type": _tri(report.constant_jordan_type),
        "eip": _tri(report.eip_overall),
        "ekp": _tri(report.ekp_overall),
        "self_dual": report.self_dual if report.self_dual != "undetermined"
        else "undet",
        "generic_kernel_dim": report.kernel_dim,
        "generic_kernel_tag": report.kernel_tag,
    }
    return row


def rows_to_csv(rows: list[dict]) -> str:
    max_j = max((max(int(j) for j in r["ranks"]) for r in rows), default=0)
    header = ["name", "p", "r", "dim"]
    for j in range(1, max_j + 1):
        header += [f"rk_{j}", f"constant_{j}", f"deg_{j}"]
    header += ["jordan_type", "eip", "ekp", "self_dual", "generic_kernel_dim"]
    lines = [",".join(header)]
    for r in rows:
        # zoo specs carry commas; the CSV name column swaps them for ';'
        bits = [str(r["name"]).replace(",", ";"),
                str(r["p"]), str(r["r"]), str(r["dim"])]
        for j in range(1, max_j + 1):
            key = str(j)
            if key in r["ranks"]:
                bits += [str(r["ranks"][key]), r["constant"][key],
                         r["degrees"][key]]
            else:
                bits += ["", "", ""]
        kd = r["generic_kernel_dim"]
        bits += [r["jordan_type"], r["eip"], r["ekp"], r["self_dual"],
                 "" if kd is None else str(kd)]
        lines.append(",".join(bits))
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)


def _compute_row(task):
    kind, spec, ext, budget = task
    m = build_input(kind, spec)
    report = invariant_report(m, budget=budget, ext_bound=ext)
    return report_row(report), report.has_undetermined()


def run_report(cfg: RunConfig) -> int:
    tasks = [(kind, spec, cfg.ext, cfg.budget) for kind, spec in cfg.inputs]
    if cfg.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_compute_row, tasks))
    else:
        results = [_compute_row(t) for t in tasks]
    rows = [row for row, _ in results]
    undet = any(u for _, u in results)
    if cfg.fmt == "csv":
        _emit(rows_to_csv(rows), cfg.out)
    else:
        _emit(json.dumps({"reports": rows}, sort_keys=True, indent=2) + "\n",
              cfg.out)
    return EXIT_UNDETERMINED if undet else EXIT_OK


def run_zoo_table(cfg: RunConfig) -> int:
    tasks = []
    for p in sorted(cfg.primes):
        for m in zoo_standard_instances(p):
            tasks.append(m)
    results = []
    undet = False
    for m in tasks:
        report = invariant_report(m, budget=cfg.budget, ext_bound=cfg.ext)
        results.append(report_row(report))
        undet = undet or report.has_undetermined()
    if cfg.fmt == "csv":
        _emit(rows_to_csv(results), cfg.out)
    else:
        _emit(json.dumps({"reports": results}, sort_keys=True, indent=2) + "\n",
              cfg.out)
    return EXIT_UNDETERMINED if undet else EXIT_OK


def _j_values(cfg: RunConfig, m: ModuleRep):
    return [cfg.j] if cfg.j is not None else list(range(1, m.p))


def run_simple(cfg: RunConfig) -> int:
    """Single-quantity commands: validate/degree/rank/jordan/certify/
    kernel/selfdual."""
    lines = []
    records = []
    undet = False
    for kind, spec in cfg.inputs:
        m = build_input(kind, spec)
        if cfg.command == "validate":
            cert = validate_frame(m)
            lines.append(f"{m.name} valid route={cert.route}")
            records.append({"name": m.name, "valid": True, "route": cert.route})
        elif cfg.command == "rank":
            for j in _j_values(cfg, m):
                rk = generic_jrank(m, j)
                lines.append(f"{m.name} j={j} rank={rk}")
                records.append({"name": m.name, "j": j, "rank": rk})
        elif cfg.command == "degree":
            for j in _j_values(cfg, m):
                deg = jdegree(m, j, cfg.budget, cfg.ext)
                undet = undet or deg.value is None
                lines.append(f"{m.name} j={j} degree={_deg_str(deg)} "
                             f"route={deg.route}")
                records.append({"name": m.name, "j": j,
                                "degree": _deg_str(deg), "route": deg.route})
        elif cfg.command == "jordan":
            jt = generic_jordan_type(m)
            lines.append(f"{m.name} jordan={jt} ({jt.pretty()})")
            records.append({"name": m.name, "jordan_type": str(jt)})
        elif cfg.command == "certify":
            for j in _j_values(cfg, m):
                c = constant_jrank_certify(m, j, cfg.budget, cfg.ext)
                undet = undet or c.status == "undetermined"
                wit = "" if c.witness is None else f" witness={c.witness}"
                lines.append(f"{m.name} j={j} constant={_constancy_str(c)} "
                             f"route={c.route}{wit}")
                records.append({"name": m.name, "j": j,
                                "constant": _constancy_str(c), "route": c.route,
                                "witness": None if c.witness is None
                                else list(map(str, c.witness))})
        elif cfg.command == "kernel":
            try:
                K, tag = generic_kernel(m, cfg.budget, cfg.ext)
                undet = undet or tag != "verified"
                lines.append(f"{m.name} kernel_dim={K.dim} tag={tag}")
                records.append({"name": m.name, "kernel_dim": K.dim, "tag": tag})
            except UnsupportedInputError as exc:
                raise SystemExit(f"error: {exc}")
        elif cfg.command == "selfdual":
            sd = self_dual_test(m)
            undet = undet or sd == "undetermined"
            lines.append(f"{m.name} self_dual={sd}")
            records.append({"name": m.name, "self_dual": sd})
        else:
            raise ValueError(f"unknown command {cfg.command}")
    if cfg.fmt == "json":
        _emit(json.dumps({"results": records}, sort_keys=True, indent=2) + "\n",
              cfg.out)
    else:
        _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_UNDETERMINED if undet else EXIT_OK


def _add_common(sub):
    sub.add_argument("--zoo", action="append", default=[],
                     help="zoo module NAME:key=val,key=val (repeatable)")
    sub.add_argument("--in", dest="infiles", action="append", default=[],
                     metavar="FILE", help="module file (repeatable)")
    sub.add_argument("-j", type=int, default=None, help="restrict to one j")
    sub.add_argument("--ext", type=int, default=3,
                     help="field extension bound for point searches (1-3)")
    sub.add_argument("--budget", type=int, default=DEFAULT_PAIR_BUDGET,
                     help="Groebner S-pair budget")
    sub.add_argument("--format", dest="fmt", choices=("csv", "json"),
                     default="csv")
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument("--workers", type=int, default=1,
                     help="parallel workers for batch reports")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="modinv",
        description="rank, degree and Jordan-type invariants of modules "
                    "over truncated polynomial algebras")
    subs = parser.add_subparsers(dest="command", required=True)
    for name in ("report", "validate", "degree", "rank", "jordan",
                 "certify", "kernel", "selfdual"):
        sub = subs.add_parser(name)
        _add_common(sub)
    zoo_sub = subs.add_parser("zoo", help="tabulate the example catalog")
    zoo_sub.add_argument("-p", dest="primes", action="append", type=int,
                         required=True, help="prime (repeatable)")
    zoo_sub.add_argument("--ext", type=int, default=3)
    zoo_sub.add_argument("--budget", type=int, default=DEFAULT_PAIR_BUDGET)
    zoo_sub.add_argument("--format", dest="fmt", choices=("csv", "json"),
                         default="csv")
    zoo_sub.add_argument("--out", default=None)
    args = parser.parse_args(argv)

    cfg = RunConfig(command=args.command,
                    ext=args.ext, budget=args.budget,
                    fmt=args.fmt, out=args.out)
    if args.command == "zoo":
        cfg.primes = args.primes
    else:
        cfg.j = args.j
        cfg.workers = args.workers
        cfg.inputs = ([("zoo", s) for s in args.zoo]
                      + [("file", f) for f in args.infiles])
        if not cfg.inputs:
            parser.error("no inputs: use --zoo or --in")
    try:
        cfg.validate()
    except ValueError as exc:
        parser.error(str(exc))

    try:
        if args.command == "report":
            return run_report(cfg)
        if args.command == "zoo":
            return run_zoo_table(cfg)
        return run_simple(cfg)
    except (ModuleFileError, InvalidFrameError, CatalogError, OSError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        sys.stderr.write(f"error: {msg}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
