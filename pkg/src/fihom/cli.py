"""Command line interface: ``fihom homology|invariants|check|fuzz``.

Exit status is 0 when everything passes, 1 when some check FAILs and 2 for
usage, parse and window errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .exactla import BACKENDS, FieldError, FieldSpec, set_backend
from .fimodule import WindowError, from_presentation
from .fuzz import FuzzParams, random_presentation, run_case
from .invariants import (
    BoundCheckResult,
    PresentationBounds,
    Study,
    Verdict,
    invariant_report,
    resolve_selector,
    theorem_suite,
)
from .io import SchemaError, parse_module_file
from .koszul import homology_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    amax: int = 4
    nmax: int | None = None
    field: FieldSpec | None = None
    backend: str | None = None
    theorem: str = "all"
    seed: int = 0
    count: int = 50
    fmt: str = "tsv"
    out: Path | None = None
    budget: int = 1500
    jobs: int = 1

    def __post_init__(self):
        if self.amax < 0 or (self.nmax is not None and self.nmax < 0):
            raise UsageError("--amax and --nmax must be >= 0")


# ---------------------------------------------------------------------------
# shared pieces


def load_module(path: str, field: FieldSpec | None):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    pres, file_field, N = parse_module_file(text)
    field = field or file_field
    V, k, d = from_presentation(pres, field, N)
    return pres, V, PresentationBounds(k, d)


def _emit(text: str, out: Path | None, name: str):
    sys.stdout.write(text)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)


def _results_tsv(results: list[BoundCheckResult]) -> str:
    lines = ["theorem\tverdict\tdetail"]
    lines += [f"{r.theorem}\t{r.verdict.value}\t{r.detail}" for r in results]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_homology(cfg: RunConfig, path: str) -> int:
    _, V, _ = load_module(path, cfg.field)
    n_max = V.N if cfg.nmax is None else cfg.nmax
    table = homology_table(V, cfg.amax, n_max)
    tsv = table.to_tsv(nonzero_only=True)
    js = json.dumps(table.to_json(nonzero_only=True), indent=2) + "\n"
    sys.stdout.write(tsv if cfg.fmt == "tsv" else js)
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / "homology.tsv").write_text(tsv)
        (cfg.out / "homology.json").write_text(js)
    return EXIT_OK


def cmd_invariants(cfg: RunConfig, path: str) -> int:
    pres, V, bounds = load_module(path, cfg.field)
    report = invariant_report(Study(V, bounds, cfg.amax, pres, {"input": path}))
    js = report.to_json()
    if cfg.fmt == "json":
        _emit(json.dumps(js, indent=2) + "\n", cfg.out, "invariants.json")
    else:
        lines = ["name\tvalue\tcertified"]
        for key in ("deg", "low", "td", "hd0", "reg", "N_of_V", "hd1_D", "td_D", "hd1_S"):
            if js[key] is not None:
                lines.append(f"{key}\t{js[key]['value']}\t{js[key]['certified']}")
        for a, e in enumerate(js["hd"], start=1):
            lines.append(f"hd{a}\t{e['value']}\t{e['certified']}")
        _emit("\n".join(lines) + "\n", cfg.out, "invariants.tsv")
    return EXIT_FAIL if report.violations() else EXIT_OK


def cmd_check(cfg: RunConfig, path: str) -> int:
    try:
        resolve_selector(cfg.theorem)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    pres, V, bounds = load_module(path, cfg.field)
    results = theorem_suite(Study(V, bounds, cfg.amax, pres, {"input": path}), cfg.theorem)
    if cfg.fmt == "json":
        _emit(json.dumps([r.to_json() for r in results], indent=2) + "\n", cfg.out, "checks.json")
    else:
        _emit(_results_tsv(results), cfg.out, "checks.tsv")
    return EXIT_FAIL if any(r.verdict is Verdict.FAIL for r in results) else EXIT_OK


def _fuzz_one(args):
    seed, index, params, field, cfg = args
    pres = random_presentation(random.Random(f"{seed}:{index}"), params)
    if cfg.backend:
        set_backend(cfg.backend)
    n_start = cfg.nmax if cfg.nmax is not None else 6
    _, results = run_case(pres, field, cfg.theorem, cfg.amax, n_start, n_start + 2,
                          {"seed": seed, "index": index}, cfg.budget)
    return index, [r.to_json() for r in results]


def cmd_fuzz(cfg: RunConfig) -> int:
    try:
        resolve_selector(cfg.theorem)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    field = cfg.field or FieldSpec(32003)
    params = FuzzParams()
    jobs = [(cfg.seed, i, params, field, cfg) for i in range(cfg.count)]
    if cfg.jobs > 1 and cfg.count > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            outcomes = list(pool.map(_fuzz_one, jobs))
    else:
        outcomes = [_fuzz_one(j) for j in jobs]
    per_theorem: dict[str, Counter] = {}
    failures = []
    for index, results in outcomes:
        for r in results:
            per_theorem.setdefault(r["theorem"], Counter())[r["verdict"]] += 1
            if r["verdict"] == Verdict.FAIL.value:
                failures.append(r)
                if cfg.out is not None:
                    cfg.out.mkdir(parents=True, exist_ok=True)
                    name = f"fail_seed{cfg.seed}_case{index}_{r['theorem']}.json"
                    (cfg.out / name).write_text(json.dumps(r, indent=2) + "\n")
    summary = {
        "seed": cfg.seed,
        "count": cfg.count,
        "field": field.to_json(),
        "selector": cfg.theorem,
        "per_theorem": {t: dict(sorted(c.items())) for t, c in per_theorem.items()},
        "failures": len(failures),
    }
    if cfg.fmt == "json":
        _emit(json.dumps(summary, indent=2, sort_keys=True) + "\n", cfg.out, "summary.json")
    else:
        lines = ["theorem\tPASS\tFAIL\tUNCERTIFIED"]
        for t, c in summary["per_theorem"].items():
            lines.append(f"{t}\t{c.get('PASS', 0)}\t{c.get('FAIL', 0)}\t{c.get('UNCERTIFIED', 0)}")
        _emit("\n".join(lines) + "\n", cfg.out, "summary.tsv")
    return EXIT_FAIL if failures else EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--amax", type=int, default=4, help="top homological degree (default 4)")
    common.add_argument("--nmax", type=int, help="top evaluation degree (default: the file's truncation)")
    common.add_argument("--field", help="override the field: Q or a prime such as F32003")
    common.add_argument("--backend", choices=BACKENDS, help="rank backend (default $FIHOM_BACKEND or gauss)")
    common.add_argument("--format", dest="fmt", choices=("tsv", "json"), default="tsv")
    common.add_argument("--out", type=Path, help="also write artifacts into this directory")

    parser = argparse.ArgumentParser(prog="fihom", description="FI-homology of finitely presented FI-modules")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("homology", "print the table of dim H_a(V)_n"),
        ("invariants", "print deg, low, td, hd_a, reg, N(V) and the tower statistics"),
        ("check", "run theorem checks on a module"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--input", required=True, help="module file (JSON)")
        if name == "check":
            p.add_argument("--theorem", default="all", help="all, suite, cone, les, a group or a theorem id")
    p = sub.add_parser("fuzz", parents=[common], help="run the checks on seeded random presentations")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--theorem", default="all")
    p.add_argument("--budget", type=int, default=1500, help="largest Koszul layer allowed when choosing N")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        field = FieldSpec.parse(args.field) if args.field else None
        cfg = RunConfig(
            amax=args.amax,
            nmax=args.nmax,
            field=field,
            backend=args.backend,
            theorem=getattr(args, "theorem", "all"),
            seed=getattr(args, "seed", 0),
            count=getattr(args, "count", 0),
            fmt=args.fmt,
            out=args.out,
            budget=getattr(args, "budget", 1500),
            jobs=getattr(args, "jobs", 1),
        )
        if cfg.backend:
            set_backend(cfg.backend)
        if args.command == "fuzz":
            return cmd_fuzz(cfg)
        command = {"homology": cmd_homology, "invariants": cmd_invariants, "check": cmd_check}[args.command]
        return command(cfg, args.input)
    except WindowError as exc:
        print(f"fihom: {exc} (minimal sufficient N = {exc.required_N})", file=sys.stderr)
    except (SchemaError, FieldError, UsageError) as exc:
        print(f"fihom: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
