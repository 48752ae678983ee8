"""Command line front end.

Four subcommands:

* ``sweep``: Monte Carlo cost per edge over a p grid, next to the closed
  forms, with an optional per-run CSV.
* ``table``: the analytic reference table alone.
* ``assemble``: grow chain sections and fuse them into a connected patch.
* ``verify``: amplitude-level certification of the fusion rule.

Options resolve with precedence command line > ``GRAPHFORGE_*`` environment
variables > ``--config`` file (``key=value`` lines) > built-in defaults.
Environment names are the option names upper-cased under the prefix, e.g.
``GRAPHFORGE_TARGET_EDGES``; list-valued ``p`` is comma separated.

Output is byte deterministic for a fixed resolved spec: CSV uses ``\\n``
line ends and ``repr`` floats with empty cells for undefined values, JSON
uses sorted keys and fixed separators.  Exit codes: 0 on success, 1 when
``verify`` finds a violation, 2 on a malformed invocation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .analytic import analytic_costs, s1_cost, s2_cost
from .assembly import NonGrowingError, assemble, connectivity_report, grow_sections
from .eo import EoModel
from .oracle import sweep_verify
from .strategies import CostSummary, run_s1, run_s2

#: Base seed used when none is given anywhere.  Every run stream derives
#: from it via (seed, lane, run_index), so one number pins a whole sweep.
DEFAULT_SEED = 1729

_ENV_PREFIX = "GRAPHFORGE_"

_DEFAULTS = {
    "strategy": "both",
    "p": (0.5, 0.4),
    "trials": 200,
    "target_edges": 500,
    "seed": DEFAULT_SEED,
    # practical CLI cap; the library-level give-up bound is far larger
    "max_attempts": 5_000_000,
    "format": "csv",
    "out": None,
    "runs_out": None,
    "rows": 4,
    "backbone_len": 12,
    "pairing": "chain",
    "second_gen": False,
    "samples": 500,
    "max_qubits": 10,
    "dump_graph": None,
}

_INT_KEYS = {"trials", "target_edges", "seed", "max_attempts", "rows",
             "backbone_len", "samples", "max_qubits"}
_STR_KEYS = {"strategy", "format", "pairing", "out", "runs_out", "dump_graph"}

_RUNNERS = {"s1": run_s1, "s2": run_s2}
#: stream lane per strategy, so s1 and s2 never share draws under one seed
_LANES = {"s1": 0, "s2": 1}


class UsageError(Exception):
    """Malformed invocation; reported on stderr with exit code 2."""


@dataclass(frozen=True)
class RunSpec:
    """Fully resolved options for one invocation.

    One dataclass covers all subcommands; fields a command does not use
    simply keep their defaults.  ``p_explicit`` records whether the p grid
    was user-supplied, which ``table`` (append semantics) and ``assemble``
    (single-value semantics) need to know.
    """

    command: str
    strategy: str = _DEFAULTS["strategy"]
    p_values: tuple[float, ...] = _DEFAULTS["p"]
    p_explicit: bool = False
    trials: int = _DEFAULTS["trials"]
    target_edges: int = _DEFAULTS["target_edges"]
    seed: int = _DEFAULTS["seed"]
    max_attempts: int = _DEFAULTS["max_attempts"]
    out_format: str = _DEFAULTS["format"]
    out: str | None = None
    runs_out: str | None = None
    rows: int = _DEFAULTS["rows"]
    backbone_len: int = _DEFAULTS["backbone_len"]
    pairing: str = _DEFAULTS["pairing"]
    second_gen: bool = _DEFAULTS["second_gen"]
    samples: int = _DEFAULTS["samples"]
    max_qubits: int = _DEFAULTS["max_qubits"]
    dump_graph: str | None = None


# ---------------------------------------------------------------------------
# option resolution


def _parse_bool(raw: str, key: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"{key} must be a boolean, got {raw!r}")


def _parse_p_list(raw: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(tok) for tok in raw.split(",") if tok.strip())
    except ValueError as exc:
        raise UsageError(f"p must be a comma separated float list, got {raw!r}") from exc
    if not vals:
        raise UsageError("p list is empty")
    return vals


def _coerce(key: str, raw: str):
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError as exc:
            raise UsageError(f"{key} must be an integer, got {raw!r}") from exc
    if key == "p":
        return _parse_p_list(raw)
    if key == "second_gen":
        return _parse_bool(raw, key)
    if key in _STR_KEYS:
        return raw
    raise UsageError(f"unknown option {key!r}")


def _read_config(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        out[key] = value.strip()
    return out


def resolve(args: argparse.Namespace) -> RunSpec:
    """Fold CLI, environment, config file, and defaults into a RunSpec."""
    config_path = getattr(args, "config", None) or os.environ.get(_ENV_PREFIX + "CONFIG")
    config = _read_config(config_path) if config_path else {}

    def pick(key: str):
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            return cli_val, True
        env_raw = os.environ.get(_ENV_PREFIX + key.upper())
        if env_raw is not None:
            return _coerce(key, env_raw), True
        if key in config:
            return _coerce(key, config[key]), True
        return _DEFAULTS[key], False

    values = {}
    p_explicit = False
    for key in _DEFAULTS:
        values[key], given = pick(key)
        if key == "p":
            p_explicit = given

    spec = RunSpec(
        command=args.command,
        strategy=values["strategy"],
        p_values=tuple(values["p"]),
        p_explicit=p_explicit,
        trials=values["trials"],
        target_edges=values["target_edges"],
        seed=values["seed"],
        max_attempts=values["max_attempts"],
        out_format=values["format"],
        out=values["out"],
        runs_out=values["runs_out"],
        rows=values["rows"],
        backbone_len=values["backbone_len"],
        pairing=values["pairing"],
        second_gen=values["second_gen"],
        samples=values["samples"],
        max_qubits=values["max_qubits"],
        dump_graph=values["dump_graph"],
    )
    _validate(spec)
    return spec


def _validate(spec: RunSpec) -> None:
    if spec.strategy not in ("s1", "s2", "both"):
        raise UsageError(f"strategy must be s1, s2, or both, got {spec.strategy!r}")
    if spec.out_format not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {spec.out_format!r}")
    if spec.pairing not in ("chain", "ring", "all-pairs"):
        raise UsageError(f"pairing must be chain, ring, or all-pairs, got {spec.pairing!r}")
    for p in spec.p_values:
        if not 0.0 < p <= 1.0:
            raise UsageError(f"p must be in (0, 1], got {p}")
    positive = {"trials": spec.trials, "target_edges": spec.target_edges,
                "max_attempts": spec.max_attempts, "samples": spec.samples}
    for name, val in positive.items():
        if val < 1:
            raise UsageError(f"{name} must be >= 1, got {val}")
    if spec.rows < 2:
        raise UsageError(f"rows must be >= 2, got {spec.rows}")
    if spec.backbone_len < 2:
        raise UsageError(f"backbone-len must be >= 2, got {spec.backbone_len}")
    if spec.max_qubits < 2:
        raise UsageError(f"max-qubits must be >= 2, got {spec.max_qubits}")


# ---------------------------------------------------------------------------
# deterministic emission


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_sweep(spec: RunSpec) -> int:
    strategies = ("s1", "s2") if spec.strategy == "both" else (spec.strategy,)
    per_run: list[tuple] = []
    aggregates: list[dict] = []
    for strat in strategies:
        runner = _RUNNERS[strat]
        analytic = {"s1": s1_cost, "s2": s2_cost}[strat]
        for p in spec.p_values:
            total = CostSummary()
            for i in range(spec.trials):
                model = EoModel.for_run(p, spec.seed, i, lane=_LANES[strat])
                one = runner(model, spec.target_edges, max_attempts=spec.max_attempts)
                per_run.append((strat, p, spec.seed, i, one.attempts,
                                one.net_edges, one.cost_per_edge))
                total.merge(one)
            aggregates.append({
                "strategy": strat,
                "p": p,
                "analytic_cost": analytic(p),
                "mc_cost": total.cost_per_edge,
                "std_error": total.std_error,
                "runs": total.runs,
                "runs_reached": total.runs_reached,
                "non_growing": total.non_growing,
            })
    aggregates.sort(key=lambda r: (r["strategy"], r["p"]))
    per_run.sort(key=lambda r: (r[0], r[1], r[2], r[3]))

    if spec.runs_out is not None:
        header = ["strategy", "p", "seed", "attempts", "net_edges", "cost_per_edge"]
        rows = [[s, p, f"{base}/{idx}", att, edges, cost]
                for s, p, base, idx, att, edges, cost in per_run]
        _emit(_csv_text(header, rows), spec.runs_out)

    if spec.out_format == "json":
        text = _json_text({
            "command": "sweep",
            "seed": spec.seed,
            "target_edges": spec.target_edges,
            "trials": spec.trials,
            "max_attempts": spec.max_attempts,
            "rows": aggregates,
        })
    else:
        header = ["strategy", "p", "analytic_cost", "mc_cost", "std_error",
                  "runs", "runs_reached", "non_growing"]
        text = _csv_text(header, [[r[k] for k in header] for r in aggregates])
    _emit(text, spec.out)
    return 0


def _cmd_table(spec: RunSpec) -> int:
    ps = list(_DEFAULTS["p"])
    if spec.p_explicit:
        ps.extend(spec.p_values)
    rows = []
    for p in ps:
        costs = analytic_costs(p)
        rows.append({
            "p": p,
            "c_s2": costs.c_s2,
            "c_s1": costs.c_s1,
            "c3_bk": costs.c3_bk,
            "c3_bk_recycled": costs.c3_bk_recycled_ref,
        })
    if spec.out_format == "json":
        text = _json_text({"command": "table", "rows": rows})
    else:
        header = ["p", "c_s2", "c_s1", "c3_bk", "c3_bk_recycled"]
        text = _csv_text(header, [[r[k] for k in header] for r in rows])
    _emit(text, spec.out)
    return 0


def _cmd_verify(spec: RunSpec) -> int:
    summary = sweep_verify(max_qubits=spec.max_qubits, samples=spec.samples,
                           seed=spec.seed, enum_max=min(5, spec.max_qubits))
    report = {
        "command": "verify",
        "max_qubits": spec.max_qubits,
        "samples": spec.samples,
        "seed": spec.seed,
        "cases_run": summary.cases_run,
        "cases_passed": summary.cases_passed,
        "skipped_adjacent": summary.skipped_adjacent,
        "worst_fidelity": summary.worst_fidelity,
        "max_probability_error": summary.max_probability_error,
        "passed": summary.passed,
        "failures": summary.failures,
    }
    _emit(_json_text(report), spec.out)
    return 0 if summary.passed else 1


_ASSEMBLE_HEADER = [
    "strategy", "p", "rows", "backbone_len", "pairing", "second_gen",
    "junctions_attempted", "junctions_formed", "second_gen_leaves",
    "phase2_attempts", "total_attempts", "largest_component_vertices",
    "largest_component_edges", "isolated_fragments", "total_cost_per_edge",
    "non_growing", "failed_section",
]


def _cmd_assemble(spec: RunSpec) -> int:
    if spec.p_explicit and len(spec.p_values) != 1:
        raise UsageError("assemble takes exactly one p")
    # star growth leaves the spare leaves junction fusions feed on
    strategy = "s2" if spec.strategy == "both" else spec.strategy
    p = spec.p_values[0] if spec.p_explicit else 0.4
    model = EoModel(p, spec.seed)
    row: dict[str, object] = {
        "strategy": strategy, "p": p, "rows": spec.rows,
        "backbone_len": spec.backbone_len, "pairing": spec.pairing,
        "second_gen": spec.second_gen,
    }
    try:
        g, sections, ledger = grow_sections(
            model, strategy, spec.rows, spec.backbone_len,
            max_attempts_per_section=spec.max_attempts,
        )
    except NonGrowingError as exc:
        row.update({
            "junctions_attempted": None, "junctions_formed": None,
            "second_gen_leaves": None, "phase2_attempts": None,
            "total_attempts": exc.attempts_spent,
            "largest_component_vertices": None, "largest_component_edges": None,
            "isolated_fragments": None, "total_cost_per_edge": None,
            "non_growing": True, "failed_section": exc.section_index,
        })
        return _emit_assemble(spec, row)

    stats = assemble(model, g, sections, ledger,
                     second_generation=spec.second_gen, pairing=spec.pairing)
    conn = connectivity_report(g, sections, pairing=spec.pairing)
    row.update({
        "junctions_attempted": stats.junctions_attempted,
        "junctions_formed": stats.junctions_formed,
        "second_gen_leaves": stats.second_gen_leaves,
        "phase2_attempts": stats.phase2_attempts,
        "total_attempts": ledger.attempts,
        "largest_component_vertices": conn.largest_component_vertices,
        "largest_component_edges": conn.largest_component_edges,
        "isolated_fragments": conn.isolated_fragments,
        "total_cost_per_edge": stats.total_cost_per_edge,
        "non_growing": False, "failed_section": None,
    })
    if spec.dump_graph is not None:
        Path(spec.dump_graph).write_text(g.to_edge_list())
    return _emit_assemble(spec, row, cross_links=list(conn.cross_links))


def _emit_assemble(spec: RunSpec, row: dict, cross_links: list | None = None) -> int:
    if spec.out_format == "json":
        obj = dict(row)
        obj["command"] = "assemble"
        obj["cross_links"] = cross_links
        text = _json_text(obj)
    else:
        text = _csv_text(_ASSEMBLE_HEADER, [[row[k] for k in _ASSEMBLE_HEADER]])
    _emit(text, spec.out)
    return 0


# ---------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="base seed (default %d)" % DEFAULT_SEED)
    common.add_argument("--config", help="key=value option file")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=["csv", "json"],
                        help="output format (default csv; verify is always json)")

    ap = argparse.ArgumentParser(
        prog="graphforge",
        description="Grow entangled graph states with probabilistic fusions.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", parents=[common],
                           help="Monte Carlo cost per edge over a p grid")
    sweep.add_argument("--strategy", choices=["s1", "s2", "both"])
    sweep.add_argument("--p", action="append", type=float,
                       help="grid point, repeatable (default 0.5 0.4)")
    sweep.add_argument("--trials", type=int, help="runs per grid cell")
    sweep.add_argument("--target-edges", type=int, dest="target_edges")
    sweep.add_argument("--max-attempts", type=int, dest="max_attempts",
                       help="give-up bound per run")
    sweep.add_argument("--runs-out", dest="runs_out",
                       help="also write a per-run CSV here")

    table = sub.add_parser("table", parents=[common],
                           help="closed-form reference costs")
    table.add_argument("--p", action="append", type=float,
                       help="append a row beyond the two reference rows")

    verify = sub.add_parser("verify", parents=[common],
                            help="amplitude-level fusion rule check")
    verify.add_argument("--samples", type=int, help="random graphs beyond enumeration")
    verify.add_argument("--max-qubits", type=int, dest="max_qubits")

    asm = sub.add_parser("assemble", parents=[common],
                         help="grow sections and fuse them into a patch")
    asm.add_argument("--strategy", choices=["s1", "s2"])
    asm.add_argument("--p", action="append", type=float, help="single value (default 0.4)")
    asm.add_argument("--rows", type=int, help="number of sections")
    asm.add_argument("--backbone-len", type=int, dest="backbone_len",
                     help="backbone vertices per section")
    asm.add_argument("--pairing", choices=["chain", "ring", "all-pairs"])
    asm.add_argument("--second-gen", action=argparse.BooleanOptionalAction,
                     dest="second_gen", help="one bonus pass over formed junctions")
    asm.add_argument("--max-attempts", type=int, dest="max_attempts",
                     help="give-up bound per section")
    asm.add_argument("--dump-graph", dest="dump_graph",
                     help="write the final graph as an edge list here")
    return ap


_COMMANDS = {
    "sweep": _cmd_sweep,
    "table": _cmd_table,
    "verify": _cmd_verify,
    "assemble": _cmd_assemble,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = resolve(args)
        return _COMMANDS[spec.command](spec)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
