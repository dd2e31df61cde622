"""Command-line front end.

Every subcommand writes one table to stdout, as CSV (header row first) or
as a single JSON document.  Exit codes: 0 success, 1 a verified property
failed, 2 bad arguments.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, Iterable, List, Optional, Sequence

from . import bench
from .allocation import (
    Designation,
    designation_windows,
    iter_assignments,
    kappa,
    vbfr_allocate,
)
from .dcvc import dcvc_allocate, index_of_coalition
from .increment_array import gen_inc_array, period
from .necklace import fkm
from .verify import (
    ALGORITHMS,
    POWERSET_LIMIT,
    allocation_count_table,
    check_allocation_properties,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

VARIANTS = [v.value for v in Designation]


class UsageError(Exception):
    pass


def _join(values: Iterable[int]) -> str:
    return ";".join(str(v) for v in values)


def _bits(beads: Sequence[int]) -> str:
    return "".join(str(b) for b in beads)


def _cell(value: Any) -> Any:
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, (list, tuple)):
        return _join(value)
    if value is None:
        return ""
    return value


def emit(command: str, columns: List[str], rows: List[Dict[str, Any]], fmt: str,
         out=None, **extra: Any) -> None:
    out = out or sys.stdout
    if fmt == "json":
        doc = {"command": command, "columns": columns, "rows": rows, **extra}
        json.dump(doc, out, indent=2)
        out.write("\n")
        return
    writer = csv.writer(out)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in columns])


def _members(c: Sequence[int], sort: bool) -> List[int]:
    return sorted(c) if sort else list(c)


def _require_agent(agent: int, n: int) -> None:
    if n < 1:
        raise UsageError(f"--n must be >= 1, got {n}")
    if not 1 <= agent <= n:
        raise UsageError(f"--agent must be in 1..{n}, got {agent}")


# -- subcommands ----------------------------------------------------------

def cmd_allocate(args: argparse.Namespace) -> int:
    _require_agent(args.agent, args.n)
    rows = [
        {
            "size": len(a.ia),
            "members": _members(a.coalition, args.sorted),
            "source_ia": list(a.ia),
            "periodic": a.periodic,
        }
        for a in iter_assignments(args.agent, args.n, args.variant)
    ]
    rows.sort(key=lambda r: r["size"])  # stable: FKM order within a size
    emit("allocate", ["size", "members", "source_ia", "periodic"], rows, args.format,
         n=args.n, agent=args.agent, variant=args.variant, total=len(rows))
    return EXIT_OK


def cmd_dcvc_allocate(args: argparse.Namespace) -> int:
    _require_agent(args.agent, args.n)
    alloc = dcvc_allocate(args.agent, args.n)
    rows = [
        {
            "size": len(c),
            "members": _members(c, args.sorted),
            "list_index": index_of_coalition(args.n, c),
            "self_interested": args.agent in c,
        }
        for c in alloc.coalitions()
    ]
    emit("dcvc-allocate", ["size", "members", "list_index", "self_interested"], rows,
         args.format, n=args.n, agent=args.agent, total=len(rows))
    return EXIT_OK


def cmd_vbfr_allocate(args: argparse.Namespace) -> int:
    _require_agent(args.agent, args.n)
    sizes = [args.size] if args.size else range(1, args.n + 1)
    rows = []
    for s in sizes:
        if not 1 <= s <= args.n:
            raise UsageError(f"--size must be in 1..{args.n}, got {s}")
        rows.extend({"size": s, "members": list(c)} for c in vbfr_allocate(args.agent, args.n, s))
    emit("vbfr-allocate", ["size", "members"], rows, args.format,
         n=args.n, agent=args.agent, total=len(rows))
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    n = args.n
    if not 1 <= n <= 16:
        raise UsageError(f"compare materialises every allocation; --n must be in 1..16, got {n}")
    size = args.size or max(1, n // 2)
    if not 1 <= size <= n:
        raise UsageError(f"--size must be in 1..{n}, got {size}")
    methods = {
        f"ndca-{args.variant}": lambda x: list(
            a.coalition for a in iter_assignments(x, n, args.variant)
        ),
        "dcvc": lambda x: list(dcvc_allocate(x, n).coalitions()),
        "vbfr": lambda x: [c for s in range(1, n + 1) for c in vbfr_allocate(x, n, s)],
    }
    rows = []
    for method, allocate in methods.items():
        for x in range(1, n + 1):
            coalitions = allocate(x)
            sample = [c for c in coalitions if len(c) == size]
            rows.append({
                "method": method,
                "agent": x,
                "size": size,
                "sample": " ".join(_join(sorted(c)) for c in sample),
                "size_count": len(sample),
                "total": len(coalitions),
                "self_interested": all(x in c for c in coalitions),
            })
    emit("compare", ["method", "agent", "size", "sample", "size_count", "total",
                     "self_interested"], rows, args.format, n=n)
    return EXIT_OK


VERIFY_COLUMNS = [
    "n", "variant", "exhaustive", "complete", "redundant_pairs",
    "self_interest_violations", "per_size_imbalance_max", "aggregate_imbalance",
    "kappa", "kappa_match", "per_agent_totals", "passed", "failures",
]


def cmd_verify(args: argparse.Namespace) -> int:
    if not 1 <= args.n_min <= args.n_max <= POWERSET_LIMIT:
        raise UsageError(f"need 1 <= --n-min <= --n-max <= {POWERSET_LIMIT}")
    variants = [v.strip() for v in args.variants.split(",") if v.strip()]
    for v in variants:
        if v not in ALGORITHMS:
            raise UsageError(f"unknown variant {v!r}; choose from {', '.join(ALGORITHMS)}")
    jobs = [(n, v) for n in range(args.n_min, args.n_max + 1) for v in variants]
    exhaustive = False if args.counts_only else None

    def run(job):
        return check_allocation_properties(job[0], job[1], exhaustive)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(run, jobs))
    else:
        reports = [run(j) for j in jobs]

    rows = []
    for r in reports:
        d = r.to_dict()
        d["failures"] = "; ".join(r.failures)
        rows.append({c: d[c] for c in VERIFY_COLUMNS})
    passed = all(r.passed for r in reports)
    if args.format == "json":
        emit("verify", VERIFY_COLUMNS, [r.to_dict() for r in reports], "json", passed=passed)
    else:
        emit("verify", VERIFY_COLUMNS, rows, "csv")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_necklaces(args: argparse.Namespace) -> int:
    if not 1 <= args.n <= 30:
        raise UsageError(f"--n must be in 1..30, got {args.n}")
    columns = ["order", "necklace", "whites"]
    if args.with_ia:
        columns += ["ia", "period", "stride"]
    rows = []
    for order, beads in enumerate(fkm(args.n, 2), start=1):
        row: Dict[str, Any] = {"order": order, "necklace": _bits(beads),
                               "whites": beads.count(0)}
        if args.with_ia:
            t = gen_inc_array(beads)
            info = period(t, args.n) if t else None
            row.update(ia=list(t), period=info.period if info else None,
                       stride=info.stride if info else None)
        rows.append(row)
    emit("necklaces", columns, rows, args.format, n=args.n)
    return EXIT_OK


def _table_fkm6() -> tuple:
    rows = []
    for order, beads in enumerate(fkm(6, 2), start=1):
        rows.append({"order": order, "necklace": _bits(beads),
                     "ia": list(gen_inc_array(beads))})
    return ["order", "necklace", "ia"], rows


def _table_designation6() -> tuple:
    rows = [
        {"size": w.size, "ia": list(w.ia), "repetitions": 6 // w.stride,
         "stride": w.stride, "offset": w.offset, "window": list(w.agents)}
        for w in designation_windows(6, Designation.GLOBAL_BY_SIZE)
    ]
    return ["size", "ia", "repetitions", "stride", "offset", "window"], rows


def _table_example6() -> tuple:
    rows = []
    for x in range(1, 7):
        for a in sorted(iter_assignments(x, 6, Designation.GLOBAL_BY_SIZE),
                        key=lambda a: len(a.ia)):
            rows.append({"agent": x, "size": len(a.ia), "members": list(a.coalition),
                         "source_ia": list(a.ia), "periodic": a.periodic})
    return ["agent", "size", "members", "source_ia", "periodic"], rows


def _imbalance(counts: List[List[int]]) -> tuple:
    n = len(counts)
    per_size = max(max(r[s] for r in counts) - min(r[s] for r in counts)
                   for s in range(1, n + 1))
    totals = [sum(r) for r in counts]
    return per_size, max(totals) - min(totals)


def _table_imbalance() -> tuple:
    rows = []
    for n in range(2, POWERSET_LIMIT + 1):
        ps_size, ps_agg = _imbalance(allocation_count_table(n, Designation.PER_SIZE.value))
        g_size, g_agg = _imbalance(allocation_count_table(n, Designation.GLOBAL.value))
        rows.append({"n": n, "kappa": kappa(n),
                     "per_size_offset_size_max": ps_size, "per_size_offset_aggregate": ps_agg,
                     "global_offset_size_max": g_size, "global_offset_aggregate": g_agg})
    return list(rows[0]), rows


TABLES = {
    "fkm6": _table_fkm6,
    "designation6": _table_designation6,
    "example6": _table_example6,
    "imbalance": _table_imbalance,
}


def cmd_tables(args: argparse.Namespace) -> int:
    columns, rows = TABLES[args.which]()
    emit("tables", columns, rows, args.format, table=args.which)
    return EXIT_OK


def _no_parallel_timing(args: argparse.Namespace) -> None:
    if args.jobs != 1:
        raise UsageError("timing runs are strictly sequential; --jobs must be 1")


BENCH_COLUMNS = ["n", "algorithm", "R", "mean_ns", "sd_ns", "ci95_ns", "checksum"]


def cmd_bench(args: argparse.Namespace) -> int:
    _no_parallel_timing(args)
    rows = []
    for n in args.n:
        _require_agent(args.agent, n)
        for algorithm in args.algorithms.split(","):
            if algorithm == "ndca":
                task = bench.ndca_task(args.agent, n, args.variant)
            elif algorithm == "dcvc":
                task = bench.dcvc_task(args.agent, n)
            else:
                raise UsageError(f"unknown algorithm {algorithm!r}; use ndca or dcvc")
            st = bench.run_timed(task, args.runs)
            rows.append({"n": n, "algorithm": algorithm, "R": st.runs,
                         "mean_ns": round(st.mean * 1e9), "sd_ns": round(st.stddev * 1e9),
                         "ci95_ns": round(st.ci95_half_width * 1e9),
                         "checksum": st.checksum})
    emit("bench", BENCH_COLUMNS, rows, args.format, agent=args.agent)
    return EXIT_OK


def cmd_profile(args: argparse.Namespace) -> int:
    _no_parallel_timing(args)
    _require_agent(args.agent, args.n)
    if args.ops:
        tally = bench.operation_tally(args.n, args.agent)
        rows = [{
            "n": tally.n, "ndca_coalitions": tally.coalitions,
            "bead_inspections": tally.bead_inspections,
            "period_comparisons": tally.period_comparisons,
            "ndca_ops_per_coalition": round(tally.ndca_ops_per_coalition, 4),
            "dcvc_coalitions": tally.dcvc_coalitions,
            "predecessor_scan_steps": tally.predecessor_scan_steps,
            "dcvc_ops_per_coalition": round(tally.dcvc_ops_per_coalition, 4),
        }]
        emit("profile", list(rows[0]), rows, args.format, agent=args.agent)
        return EXIT_OK
    prof = bench.profile_components(args.n, args.agent, args.runs)
    comp = prof.component_times
    shares = prof.shares
    rows = [
        {"level": i, "component": name,
         "level_mean_ns": round(prof.level_times[i] * 1e9),
         "level_sd_ns": round(prof.level_stddevs[i] * 1e9),
         "level_min_ns": round(prof.level_mins[i] * 1e9),
         "component_ns": round(comp[name] * 1e9), "share": round(shares[name], 4)}
        for i, name in enumerate(bench.COMPONENTS)
    ]
    emit("profile", ["level", "component", "level_mean_ns", "level_sd_ns",
                     "level_min_ns", "component_ns", "share"], rows, args.format,
         n=args.n, agent=args.agent, runs=args.runs, largest=prof.largest_component())
    return EXIT_OK


def cmd_amortise(args: argparse.Namespace) -> int:
    _no_parallel_timing(args)
    t_ndca, t_dcvc, m = args.t_ndca, args.t_dcvc, args.m
    if t_ndca is None or t_dcvc is None or m is None:
        if args.n is None:
            raise UsageError("give --t-ndca, --t-dcvc and --m, or --n to measure them")
        _require_agent(args.agent, args.n)
        st_n = bench.run_timed(bench.ndca_task(args.agent, args.n), args.runs)
        st_d = bench.run_timed(bench.dcvc_task(args.agent, args.n), args.runs)
        t_ndca = st_n.mean if t_ndca is None else t_ndca
        t_dcvc = st_d.mean if t_dcvc is None else t_dcvc
        if m is None:
            m = dcvc_allocate(args.agent, args.n).total
    rows = []
    try:
        for c in args.c:
            eta = bench.amortised_ratio(bench.AmortisedInputs(t_ndca, t_dcvc, m, c))
            rows.append({"c_s": c, "t_ndca_s": t_ndca, "t_dcvc_s": t_dcvc, "m": m,
                         "eta": eta})
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    emit("amortise", ["c_s", "t_ndca_s", "t_dcvc_s", "m", "eta"], rows, args.format)
    return EXIT_OK


def cmd_memory(args: argparse.Namespace) -> int:
    rows = []
    for n in args.n:
        if n < 1:
            raise UsageError(f"--n values must be >= 1, got {n}")
        nd, dc = bench.memory_model(n)
        rows.append({"n": n, "ndca_bytes": nd, "dcvc_bytes": dc, "ratio": round(dc / nd, 4)})
    emit("memory", ["n", "ndca_bytes", "dcvc_bytes", "ratio"], rows, args.format)
    return EXIT_OK


# -- parser ---------------------------------------------------------------

def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from exc


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    # Global flags are accepted both before and after the subcommand.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="ndca", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=["csv", "json"], default="csv",
                        help="output format (default csv)")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker threads for verify (default 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("allocate", cmd_allocate, "one agent's N-DCA allocation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--agent", type=int, required=True)
    p.add_argument("--variant", choices=VARIANTS, default=Designation.PER_SIZE.value)
    p.add_argument("--sorted", action="store_true", help="sort members ascending")

    p = add("dcvc-allocate", cmd_dcvc_allocate, "one agent's DCVC allocation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--agent", type=int, required=True)
    p.add_argument("--sorted", action="store_true")

    p = add("vbfr-allocate", cmd_vbfr_allocate, "subsets whose minimum is the agent")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--agent", type=int, required=True)
    p.add_argument("--size", type=int, default=None)

    p = add("compare", cmd_compare, "side-by-side allocations of N-DCA, DCVC and VBFR")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--size", type=int, default=None, help="size to sample (default n//2)")
    p.add_argument("--variant", choices=VARIANTS, default=Designation.PER_SIZE.value)

    p = add("verify", cmd_verify, "property reports for a range of n")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--variants", default="per-size,global",
                   help=f"comma-separated subset of {','.join(ALGORITHMS)}")
    p.add_argument("--counts-only", action="store_true",
                   help="skip set materialisation; check counts and balance only")

    p = add("necklaces", cmd_necklaces, "FKM enumeration of binary necklaces")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--with-ia", action="store_true")

    p = add("tables", cmd_tables, "regenerate a reference table")
    p.add_argument("which", choices=sorted(TABLES))

    p = add("bench", cmd_bench, "repeated timed runs with checksum")
    p.add_argument("--n", type=_int_list, default=[5, 8, 10, 12, 14, 15, 17, 20])
    p.add_argument("--algorithms", default="ndca,dcvc")
    p.add_argument("--agent", type=int, default=1)
    p.add_argument("--variant", choices=VARIANTS, default=Designation.PER_SIZE.value)
    p.add_argument("--runs", type=int, default=10)

    p = add("profile", cmd_profile, "subtraction-method component profile")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--agent", type=int, default=1)
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--ops", action="store_true",
                   help="report loop-iteration tallies instead of times")

    p = add("amortise", cmd_amortise, "total-time ratio with per-coalition cost c")
    p.add_argument("--c", type=_float_list, default=[0.0, 1e-6, 1e-5, 1e-4, 1e-3],
                   help="per-coalition costs in seconds, comma-separated")
    p.add_argument("--t-ndca", type=float, default=None, help="seconds")
    p.add_argument("--t-dcvc", type=float, default=None, help="seconds")
    p.add_argument("--m", type=int, default=None, help="coalitions per agent")
    p.add_argument("--n", type=int, default=None, help="measure missing inputs at this n")
    p.add_argument("--agent", type=int, default=1)
    p.add_argument("--runs", type=int, default=5)

    p = add("memory", cmd_memory, "analytical per-agent working memory")
    p.add_argument("--n", type=_int_list, default=[5, 10, 15, 20, 25])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
