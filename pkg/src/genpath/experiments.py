"""Experiment drivers shared by the CLI and ``scripts/``: the three-graph energy
comparison, the per-cell theorem suite, and design-grid sweep rows."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import control
from .graph_core import (
    BlockLayout,
    ControlSetup,
    build_antiregular,
    build_generalized_path,
    build_path,
    diameter,
    interconnect_antiregular,
    laplacian,
    max_degree,
)
from .spectral import (
    Margin,
    TheoremReport,
    block_laplacian,
    check_anchoring,
    check_distinct,
    check_grone_merris,
    check_interlacing,
    check_structured_eigenvectors,
    check_weyl,
    connector_vectors,
    eigh,
    interconnection_laplacian,
)


@dataclass
class Fig2Config:
    t1: float = 2.0
    steps: int = 2000
    x0: float = -20.0
    xf: float = 20.0
    max_condition: float = control.MAX_CONDITION


def fig2_setups() -> dict[str, ControlSetup]:
    """Eight-vertex path, two chained 4-vertex antiregular blocks, 8-vertex antiregular graph."""
    return {
        "path8": ControlSetup(build_path(8), 1),
        "interconnect_4_2": build_generalized_path(BlockLayout(4, 2)),
        "antiregular8": ControlSetup(build_antiregular(8), 4),
    }


@dataclass
class Fig2Result:
    config: Fig2Config
    runs: dict[str, control.TrajectoryResult] = field(default_factory=dict)
    infeasible: dict[str, float] = field(default_factory=dict)  # name -> Gramian condition

    @property
    def ordering_holds(self) -> bool | None:
        """``E(path) > E(interconnect) > E(antiregular)``; ``None`` when a run was infeasible."""
        if self.infeasible:
            return None
        e = {name: run.energy for name, run in self.runs.items()}
        return e["path8"] > e["interconnect_4_2"] > e["antiregular8"]

    def summary(self) -> dict:
        systems = {}
        for name, run in self.runs.items():
            systems[name] = {
                "feasible": True,
                "energy": run.energy,
                "energy_quadrature": run.energy_quadrature,
                "terminal_error": run.terminal_error,
                "condition": run.condition,
            }
        for name, cond in self.infeasible.items():
            systems[name] = {"feasible": False, "condition": cond}
        return {
            "t1": self.config.t1,
            "steps": self.config.steps,
            "x0": self.config.x0,
            "xf": self.config.xf,
            "systems": {name: systems[name] for name in fig2_setups() if name in systems},
            "ordering_holds": self.ordering_holds,
        }


def fig2_comparison(config: Fig2Config | None = None) -> Fig2Result:
    config = config or Fig2Config()
    result = Fig2Result(config)
    for name, setup in fig2_setups().items():
        try:
            result.runs[name] = control.min_energy_control(
                setup, config.x0, config.xf, config.t1, config.steps, config.max_condition
            )
        except control.InfeasibleHorizonError as exc:
            result.infeasible[name] = exc.condition
    return result


# ---------------------------------------------------------------------------
# theorem suite per (k, n)


@dataclass
class CellResult:
    k: int
    n: int
    reports: list[TheoremReport]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "passed": self.passed,
            "reports": [r.to_dict() for r in self.reports],
        }


def _failure(name: str, message: str) -> TheoremReport:
    return TheoremReport(name, [Margin(message, -1.0)], 0.0, {"error": message})


def verify_cell(k: int, n: int, tol: float = 1e-8, seed: int = 0, sabotage: str | None = None) -> CellResult:
    """Run every chain-level check for one ``(k, n)``.

    ``sabotage="drop-cross-edge"`` builds the chain without its connecting
    edges, which must make the suite fail.
    """
    layout = BlockLayout(k, n)
    graph = interconnect_antiregular(layout, drop_cross_edges=sabotage == "drop-cross-edge")
    chain = laplacian(graph)
    formula = interconnection_laplacian(layout)
    reports = [
        TheoremReport(
            "laplacian_matches_formula",
            [Margin("max |L(graph) - (I kron L_A + Z Z^T)|", -float(np.max(np.abs(chain - formula))))],
            tol,
        )
    ]
    spec = eigh(chain)
    reports.append(check_distinct(spec, tol))
    reports.append(check_anchoring(layout, spec, tol))

    base = block_laplacian(layout)
    z = connector_vectors(layout)
    reports.append(check_weyl(eigh(base), eigh(z @ z.T), spec, tol))
    current = base
    for i in range(n - 1):
        updated = current + np.outer(z[:, i], z[:, i])
        rep = check_interlacing(eigh(current), eigh(updated), tol)
        rep.name = f"interlacing_connector_{i + 1}"
        reports.append(rep)
        current = updated
    rng = np.random.default_rng([seed, k, n])
    zr = rng.standard_normal(chain.shape[0])
    rep = check_interlacing(spec, eigh(chain + np.outer(zr, zr)), tol)
    rep.name = "interlacing_random_rank_one"
    reports.append(rep)

    if k >= 3 and n >= 2:
        reports.append(check_structured_eigenvectors(layout, tol))
    reports.append(check_grone_merris(build_antiregular(k), tol))

    setup = ControlSetup(graph, layout.kappa_bar)
    try:
        verdict = control.pbh_controllable(setup, tol)
        reports.append(
            TheoremReport(
                "controllable_at_repeating_vertex",
                [Margin("min |v_i^T b|", verdict.min_abs_projection, strict=True),
                 Margin("min eigenvalue gap", verdict.min_gap, strict=True)],
                tol,
                {"controllable": verdict.controllable, "witness": verdict.witness},
            )
        )
        if verdict.controllable:
            reports.append(control.verify_append_vertex(setup, tol))
    except ValueError as exc:
        reports.append(_failure("controllable_at_repeating_vertex", str(exc)))
    return CellResult(k, n, reports)


# ---------------------------------------------------------------------------
# design sweep


SWEEP_COLUMNS = ["k", "n", "vertices", "diameter", "max_degree", "controllable", "min_gap", "energy"]


@dataclass(frozen=True)
class SweepCell:
    k: int
    n: int
    extra: bool = False
    t1: float = 2.0
    steps: int = 1000
    x0: float = -20.0
    xf: float = 20.0
    tol: float = 1e-8
    max_condition: float = control.MAX_CONDITION


def sweep_row(cell: SweepCell) -> dict:
    """One design-table row; energy is NaN when the Gramian is too ill-conditioned."""
    setup = build_generalized_path(BlockLayout(cell.k, cell.n, cell.extra))
    verdict = control.pbh_controllable(setup, cell.tol)
    energy = float("nan")
    if verdict.controllable:
        try:
            run = control.min_energy_control(setup, cell.x0, cell.xf, cell.t1, cell.steps, cell.max_condition)
            energy = run.energy
        except control.InfeasibleHorizonError:
            pass
    return {
        "k": cell.k,
        "n": cell.n,
        "vertices": setup.graph.num_vertices,
        "diameter": diameter(setup.graph),
        "max_degree": max_degree(setup.graph),
        "controllable": verdict.controllable,
        "min_gap": verdict.min_gap,
        "energy": energy,
    }
