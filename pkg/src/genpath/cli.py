"""``genpath`` command line: build | spectrum | check | verify | simulate | sweep.

Exit codes: 0 success, 1 check failure, 2 usage error, 3 numeric infeasibility.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import control, formats
from .experiments import (
    SWEEP_COLUMNS,
    Fig2Config,
    SweepCell,
    fig2_comparison,
    sweep_row,
    verify_cell,
)
from .graph_core import (
    BlockLayout,
    ControlSetup,
    Graph,
    build_antiregular,
    build_generalized_path,
    build_path,
    diameter,
    max_degree,
    laplacian,
)
from .spectral import check_anchoring, check_distinct, check_grone_merris, eigh

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str = ""
    family: str = "generalized"
    k: int | None = None
    n: int | None = None
    v: int | None = None
    extra: bool = False
    input_vertex: int | None = None
    graph: str | None = None
    matrix: str | None = None
    t1: float = 2.0
    steps: int = 2000
    tol: float = control.PBH_TOL
    max_condition: float = control.MAX_CONDITION
    x0: str = "-20"
    xf: str = "20"
    k_range: str = ""
    n_range: str = ""
    compare: str | None = None
    autonomous: bool = False
    workers: int = 1
    out: str = "out"
    seed: int = 0
    sabotage: str | None = None

    def validate(self) -> None:
        for name in ("tol", "max_condition", "t1"):
            if not getattr(self, name) > 0:
                raise UsageError(f"--{name.replace('_', '-')} must be > 0")
        if self.steps < 1:
            raise UsageError("--steps must be >= 1")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        if self.sabotage not in (None, "drop-cross-edge"):
            raise UsageError(f"unknown sabotage mode {self.sabotage!r}")


def parse_range(text: str) -> list[int]:
    """``"2:6"`` (inclusive), ``"2,4,7"``, or empty."""
    text = text.strip()
    if not text:
        return []
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}") from exc


def parse_state(text: str, size: int) -> np.ndarray:
    vals = [float(x) for x in str(text).split(",")]
    if len(vals) == 1:
        return np.full(size, vals[0])
    if len(vals) != size:
        raise UsageError(f"state has {len(vals)} entries, graph has {size} vertices")
    return np.array(vals)


def load_config_file(path: str) -> dict:
    known = {f.name: f for f in fields(RunConfig)}
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in known:
            raise UsageError(f"unknown config key {key!r}")
        value = value.strip()
        default = getattr(RunConfig(), key)
        if isinstance(default, bool):
            out[key] = value.lower() in ("1", "true", "yes", "on")
        elif key in ("k", "n", "v", "input_vertex", "steps", "workers", "seed"):
            out[key] = int(value)
        elif key in ("t1", "tol", "max_condition"):
            out[key] = float(value)
        else:
            out[key] = value
    return out


# ---------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="key=value file; flags override")
    p.add_argument("--family", choices=["generalized", "antiregular", "path"], default=S)
    p.add_argument("--k", type=int, default=S, help="vertices per antiregular block")
    p.add_argument("--n", type=int, default=S, help="number of blocks")
    p.add_argument("--v", type=int, default=S, help="path length for --family path")
    p.add_argument("--extra", action="store_true", default=S, help="append one vertex carrying the input")
    p.add_argument("--input-vertex", type=int, default=S)
    p.add_argument("--graph", default=S, help="graph file (.json or edge list)")
    p.add_argument("--t1", type=float, default=S)
    p.add_argument("--steps", type=int, default=S)
    p.add_argument("--tol", type=float, default=S)
    p.add_argument("--max-condition", type=float, default=S)
    p.add_argument("--out", default=S, help="output directory")
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--workers", type=int, default=S)
    p.add_argument("--sabotage", default=S, help=S)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genpath", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    S = argparse.SUPPRESS
    for name in ("build", "spectrum", "check", "verify", "simulate", "sweep"):
        p = sub.add_parser(name)
        _common(p)
        if name == "spectrum":
            p.add_argument("--matrix", default=S, help="symmetric matrix CSV with 'order=N' header")
        if name in ("verify", "sweep"):
            p.add_argument("--k-range", default=S, help="e.g. 2:6 or 3,4,5")
            p.add_argument("--n-range", default=S)
        if name in ("simulate", "sweep"):
            p.add_argument("--x0", default=S, help="scalar or comma list")
            p.add_argument("--xf", default=S)
        if name == "simulate":
            p.add_argument("--compare", choices=["fig2"], default=S)
            p.add_argument("--autonomous", action="store_true", default=S)
    return parser


def make_config(argv: list[str] | None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    values = {}
    if "config" in ns:
        values.update(load_config_file(ns.pop("config")))
    values.update(ns)
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# commands


def _setup_from_config(cfg: RunConfig) -> ControlSetup:
    if cfg.graph:
        g = formats.read_graph(cfg.graph)
        if cfg.input_vertex is None:
            raise UsageError("--graph requires --input-vertex")
        return ControlSetup(g, cfg.input_vertex)
    if cfg.family == "path":
        if cfg.v is None:
            raise UsageError("--family path requires --v")
        setup = ControlSetup(build_path(cfg.v), 1)
    elif cfg.family == "antiregular":
        if cfg.k is None:
            raise UsageError("--family antiregular requires --k")
        g = build_antiregular(cfg.k)
        setup = ControlSetup(g, BlockLayout(cfg.k, 1).kappa_bar)
    else:
        if cfg.k is None or cfg.n is None:
            raise UsageError("--k and --n are required")
        setup = build_generalized_path(BlockLayout(cfg.k, cfg.n, cfg.extra))
    if cfg.input_vertex is not None:
        setup = ControlSetup(setup.graph, cfg.input_vertex)
    return setup


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_build(cfg: RunConfig) -> int:
    setup = _setup_from_config(cfg)
    g = setup.graph
    out = _out_dir(cfg)
    formats.write_graph(g, out / "graph.json")
    formats.write_graph(g, out / "graph.txt")
    summary = {
        "family": cfg.family,
        "k": cfg.k,
        "n": cfg.n,
        "extra": cfg.extra,
        "num_vertices": g.num_vertices,
        "num_edges": len(g.edges),
        "diameter": diameter(g),
        "max_degree": max_degree(g),
        "input_vertex": setup.input_vertex,
    }
    text = formats.dumps(summary)
    (out / "summary.json").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> int:
    graph: Graph | None = None
    if cfg.matrix:
        m = formats.matrix_from_csv(Path(cfg.matrix).read_text())
    else:
        graph = formats.read_graph(cfg.graph) if cfg.graph else _setup_from_config(cfg).graph
        m = laplacian(graph)
    spec = eigh(m)
    reports = [check_distinct(spec, cfg.tol)]
    if graph is not None:
        reports.append(check_grone_merris(graph, cfg.tol))
    if not cfg.matrix and not cfg.graph and cfg.family == "generalized" and not cfg.extra:
        reports.append(check_anchoring(BlockLayout(cfg.k, cfg.n), spec, cfg.tol))
    out = _out_dir(cfg)
    (out / "matrix.csv").write_text(formats.matrix_to_csv(m))
    payload = {"eigenvalues": spec.eigenvalues, "reports": [r.to_dict() for r in reports]}
    (out / "spectrum.json").write_text(formats.dumps(payload))
    sys.stdout.write(formats.dumps({"eigenvalues": spec.eigenvalues}))
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    setup = _setup_from_config(cfg)
    out = _out_dir(cfg)
    try:
        verdict = control.pbh_controllable(setup, cfg.tol)
    except ValueError as exc:
        print(f"genpath check: {exc}", file=sys.stderr)
        return EXIT_FAIL
    payload = {"input_vertex": setup.input_vertex, **verdict.to_dict()}
    text = formats.dumps(payload)
    (out / "verdict.json").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK if verdict.controllable else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    ks, ns = parse_range(cfg.k_range or str(cfg.k or "")), parse_range(cfg.n_range or str(cfg.n or ""))
    cells = [(k, n) for k in ks for n in ns]
    args = [(k, n, cfg.tol, cfg.seed, cfg.sabotage) for k, n in cells]
    results = _pool_map(_verify_job, args, cfg.workers)
    ok = all(r.passed for r in results)
    for r in results:
        for rep in r.reports:
            if not rep.passed:
                worst = rep.worst
                print(f"FAIL k={r.k} n={r.n} {rep.name}: {worst.what} = {worst.value:.3e}", file=sys.stderr)
    payload = {"passed": ok, "cells": [r.to_dict() for r in results]}
    out = _out_dir(cfg)
    (out / "verify.json").write_text(formats.dumps(payload))
    print(f"verified {len(results)} cells: {'all pass' if ok else 'FAILURES'}")
    return EXIT_OK if ok else EXIT_FAIL


def _verify_job(args):
    return verify_cell(*args)


def _sweep_job(cell: SweepCell) -> dict:
    return sweep_row(cell)


def _pool_map(fn, items, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _sidecar(setup: ControlSetup, run: control.TrajectoryResult | None, cfg: RunConfig, condition=None) -> dict:
    verdict = control.pbh_controllable(setup, cfg.tol)
    data = {
        "t1": cfg.t1,
        "steps": cfg.steps,
        "input_vertex": setup.input_vertex,
        "controllable": verdict.controllable,
        "min_abs_projection": verdict.min_abs_projection,
        "feasible": run is not None,
    }
    if run is not None:
        data.update(
            energy=run.energy,
            energy_quadrature=run.energy_quadrature,
            terminal_error=run.terminal_error,
            condition=run.condition,
        )
    else:
        data["condition"] = condition
    return data


def cmd_simulate(cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    if cfg.compare == "fig2":
        fig = Fig2Config(cfg.t1, cfg.steps, float(cfg.x0), float(cfg.xf), cfg.max_condition)
        result = fig2_comparison(fig)
        for name, run in result.runs.items():
            (out / f"{name}.csv").write_text(formats.trajectory_to_csv(run.times, run.states, run.inputs))
        text = formats.dumps(result.summary())
        (out / "fig2_summary.json").write_text(text)
        sys.stdout.write(text)
        if result.infeasible:
            return EXIT_INFEASIBLE
        return EXIT_OK if result.ordering_holds else EXIT_FAIL

    setup = _setup_from_config(cfg)
    size = setup.graph.num_vertices
    x0 = parse_state(cfg.x0, size)
    if cfg.autonomous:
        run = control.simulate_autonomous(setup.graph, x0, cfg.t1, cfg.steps)
        (out / "trajectory.csv").write_text(formats.trajectory_to_csv(run.times, run.states, run.inputs))
        summary = formats.dumps({"t1": cfg.t1, "distance_to_consensus": run.terminal_error})
        (out / "summary.json").write_text(summary)
        sys.stdout.write(summary)
        return EXIT_OK
    xf = parse_state(cfg.xf, size)
    try:
        run = control.min_energy_control(setup, x0, xf, cfg.t1, cfg.steps, cfg.max_condition)
    except control.UncontrollableError as exc:
        print(f"genpath simulate: {exc}", file=sys.stderr)
        (out / "summary.json").write_text(formats.dumps(_sidecar(setup, None, cfg)))
        return EXIT_FAIL
    except control.InfeasibleHorizonError as exc:
        print(f"genpath simulate: {exc}", file=sys.stderr)
        (out / "summary.json").write_text(formats.dumps(_sidecar(setup, None, cfg, exc.condition)))
        return EXIT_INFEASIBLE
    (out / "trajectory.csv").write_text(formats.trajectory_to_csv(run.times, run.states, run.inputs))
    text = formats.dumps(_sidecar(setup, run, cfg))
    (out / "summary.json").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    ks, ns = parse_range(cfg.k_range), parse_range(cfg.n_range)
    cells = [
        SweepCell(k, n, cfg.extra, cfg.t1, cfg.steps, float(cfg.x0), float(cfg.xf), cfg.tol, cfg.max_condition)
        for k in ks
        for n in ns
    ]
    rows = _pool_map(_sweep_job, cells, cfg.workers)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: repr(val) if isinstance(val, float) else val for key, val in row.items()})
    out = _out_dir(cfg)
    (out / "sweep.csv").write_text(buf.getvalue())
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "spectrum": cmd_spectrum,
    "check": cmd_check,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = make_config(argv)
        return COMMANDS[cfg.command](cfg)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except (UsageError, ValueError, OSError) as exc:
        print(f"genpath: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
