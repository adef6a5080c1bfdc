"""Single-input Laplacian controllability and minimum-energy steering of ``x' = -L x + b u``.

Everything is done in the Laplacian eigenbasis, where ``exp(-L t)`` is exact.
The minimum-energy problems that matter here have Gramians with condition
numbers around 1e13, so the Gramian solve is equilibrated and refined with
extended-precision residuals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import cho_factor, cho_solve

from .graph_core import ControlSetup, Graph, append_vertex, laplacian
from .spectral import Margin, SpectralDecomposition, TheoremReport, eigh

PBH_TOL = 1e-8
KALMAN_TOL = 1e-7
KALMAN_MAX_VERTICES = 12
MAX_CONDITION = 1e15
ZERO_RATE = 1e-12

_LD = np.longdouble


class UncontrollableError(ValueError):
    pass


class InfeasibleHorizonError(RuntimeError):
    """The Gramian at this horizon is too ill-conditioned to invert meaningfully."""

    def __init__(self, message: str, condition: float):
        super().__init__(message)
        self.condition = condition


@dataclass(frozen=True)
class ControllabilityVerdict:
    controllable: bool
    distinct_eigenvalues: bool
    min_abs_projection: float
    min_gap: float
    witness: int | None  # 1-based eigenvector index proving uncontrollability
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "controllable": self.controllable,
            "distinct_eigenvalues": self.distinct_eigenvalues,
            "min_abs_projection": self.min_abs_projection,
            "min_gap": self.min_gap,
            "witness": self.witness,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class GramianResult:
    horizon: float
    gramian: np.ndarray
    condition: float
    eigenvalues: np.ndarray  # Laplacian eigenvalues
    eigenvectors: np.ndarray
    modal_gramian: np.ndarray  # V^T W V


@dataclass(frozen=True)
class TrajectoryResult:
    times: np.ndarray
    states: np.ndarray  # (len(times), N)
    inputs: np.ndarray
    energy: float  # eta^T W^-1 eta (zero for autonomous runs)
    energy_quadrature: float  # trapezoidal integral of u^2 on the grid
    terminal_error: float
    condition: float = float("nan")


def _require_connected(g: Graph) -> None:
    if not g.is_connected():
        raise ValueError("controllability analysis expects a connected graph")


def pbh_controllable(setup: ControlSetup, tol: float = PBH_TOL) -> ControllabilityVerdict:
    """Eigenvector test: controllable iff no Laplacian eigenvector is orthogonal to ``b``.

    A repeated eigenvalue settles the question immediately, since a
    two-dimensional eigenspace always holds a vector orthogonal to a single ``b``.
    """
    _require_connected(setup.graph)
    dec = eigh(laplacian(setup.graph))
    vals = dec.eigenvalues
    scale = max(1.0, float(vals[-1]))
    gaps = np.diff(vals)
    min_gap = float(gaps.min()) if gaps.size else float("inf")
    proj = np.abs(dec.eigenvectors[setup.input_vertex - 1, :])
    min_proj = float(proj.min())
    if gaps.size and min_gap <= tol * scale:
        witness = int(np.argmin(gaps)) + 1
        return ControllabilityVerdict(False, False, min_proj, min_gap, witness, tol)
    if min_proj <= tol:
        return ControllabilityVerdict(False, True, min_proj, min_gap, int(np.argmin(proj)) + 1, tol)
    return ControllabilityVerdict(True, True, min_proj, min_gap, None, tol)


def kalman_rank_oracle(setup: ControlSetup, tol: float = KALMAN_TOL) -> bool:
    """Rank of ``[b, Lb, ..., L^(N-1) b]`` by successive orthogonalization (Arnoldi).

    The Krylov space grows one dimension per step until the new direction
    falls below ``tol * ||L||``; no eigendecomposition is involved.
    """
    n = setup.graph.num_vertices
    if n > KALMAN_MAX_VERTICES:
        raise ValueError(f"Kalman oracle is limited to {KALMAN_MAX_VERTICES} vertices, got {n}")
    lap = laplacian(setup.graph)
    scale = max(1.0, float(np.linalg.norm(lap, 2)))
    basis = [setup.b]
    for _ in range(n - 1):
        w = lap @ basis[-1]
        for _ in range(2):
            for q in basis:
                w = w - (q @ w) * q
        h = np.linalg.norm(w)
        if h <= tol * scale:
            break
        basis.append(w / h)
    return len(basis) == n


def verify_append_vertex(setup: ControlSetup, tol: float = PBH_TOL) -> TheoremReport:
    """Hang a new vertex off the input vertex and move the input onto it.

    Margins are the new vertex's entry in every eigenvector of the grown
    Laplacian plus the consecutive eigenvalue gaps.
    """
    if not pbh_controllable(setup, tol).controllable:
        raise UncontrollableError("append-vertex check needs a controllable starting setup")
    grown = append_vertex(setup.graph, setup.input_vertex)
    new_setup = ControlSetup(grown, grown.num_vertices)
    dec = eigh(laplacian(grown))
    margins = [
        Margin(f"|v{i + 1}[n_a]|", float(abs(dec.eigenvectors[-1, i])), strict=True)
        for i in range(dec.order)
    ]
    scale = max(1.0, float(dec.eigenvalues[-1]))
    margins += [
        Margin(f"l[{i + 2}] - l[{i + 1}]", float(g) / scale, strict=True)
        for i, g in enumerate(np.diff(dec.eigenvalues))
    ]
    verdict = pbh_controllable(new_setup, tol)
    return TheoremReport(
        "append_vertex",
        margins,
        tol,
        {"controllable": verdict.controllable, "appended_vertex": grown.num_vertices},
    )


# ---------------------------------------------------------------------------
# Gramian and steering


def _phi(rates: np.ndarray, t: float) -> np.ndarray:
    """``(1 - exp(-s t)) / s``, continuous at ``s = 0`` where it equals ``t``."""
    rates = np.asarray(rates)
    safe = np.where(rates > ZERO_RATE, rates, 1)
    return np.where(rates > ZERO_RATE, -np.expm1(-rates * t) / safe, t)


def _modal_gramian(vals: np.ndarray, c: np.ndarray, t1: float) -> np.ndarray:
    rates = vals[:, None] + vals[None, :]
    return np.outer(c, c) * _phi(rates, t1)


def _condition(m: np.ndarray) -> float:
    ev = np.linalg.eigvalsh(np.asarray(m, dtype=float))
    if ev[0] <= 0.0:
        return float("inf")
    return float(ev[-1] / ev[0])


def gramian(setup: ControlSetup, t1: float, dec: SpectralDecomposition | None = None) -> GramianResult:
    """Controllability Gramian ``W(t1) = int_0^t1 exp(-L s) b b^T exp(-L s) ds`` in closed form."""
    if t1 <= 0:
        raise ValueError(f"horizon must be positive, got {t1}")
    if dec is None:
        dec = eigh(laplacian(setup.graph))
    vals = np.clip(dec.eigenvalues, 0.0, None)
    c = dec.eigenvectors[setup.input_vertex - 1, :]
    modal = _modal_gramian(vals, c, t1)
    w = dec.eigenvectors @ modal @ dec.eigenvectors.T
    w = 0.5 * (w + w.T)
    return GramianResult(float(t1), w, _condition(modal), vals, dec.eigenvectors, modal)


def _refined_solve(modal: np.ndarray, modal_ld: np.ndarray, rhs_ld: np.ndarray, sweeps: int = 4) -> np.ndarray:
    scale = 1.0 / np.sqrt(np.diag(modal))
    factor = cho_factor(scale[:, None] * modal * scale[None, :])
    sol = np.zeros_like(rhs_ld)
    for _ in range(sweeps):
        resid = rhs_ld - modal_ld @ sol
        step = scale * cho_solve(factor, scale * resid.astype(float))
        sol = sol + step.astype(_LD)
    return sol


def min_energy_control(
    setup: ControlSetup,
    x0,
    xf,
    t1: float,
    steps: int = 2000,
    max_condition: float = MAX_CONDITION,
) -> TrajectoryResult:
    """Steer ``x0`` to ``xf`` at time ``t1`` with the input minimizing ``int u^2``.

    ``u(t) = b^T exp(-L (t1 - t)) W(t1)^-1 eta`` with ``eta = xf - exp(-L t1) x0``.
    The state is propagated in closed form on a uniform grid of ``steps``
    intervals.
    """
    if steps < 100:
        raise ValueError(f"steps must be >= 100, got {steps}")
    n = setup.graph.num_vertices
    x0 = np.broadcast_to(np.asarray(x0, dtype=float), (n,)).copy()
    xf = np.broadcast_to(np.asarray(xf, dtype=float), (n,)).copy()
    verdict = pbh_controllable(setup)
    if not verdict.controllable:
        raise UncontrollableError(f"setup is not controllable (witness eigenvector {verdict.witness})")
    gram = gramian(setup, t1)
    if not gram.condition <= max_condition:
        raise InfeasibleHorizonError(
            f"Gramian condition {gram.condition:.3e} exceeds {max_condition:.1e} at horizon {t1}",
            gram.condition,
        )
    v = gram.eigenvectors
    vals = gram.eigenvalues.astype(_LD)
    c = v[setup.input_vertex - 1, :].astype(_LD)
    t1_ld = _LD(t1)
    modal_ld = _modal_gramian(vals, c, t1_ld)
    x0_hat = (v.T @ x0).astype(_LD)
    xf_hat = (v.T @ xf).astype(_LD)
    eta = xf_hat - np.exp(-vals * t1_ld) * x0_hat
    weights = _refined_solve(gram.modal_gramian, modal_ld, eta)
    energy = float(eta @ weights)

    times = np.linspace(0.0, t1, steps + 1)
    cw = c * weights
    rates = vals[:, None] + vals[None, :]
    states_hat = np.empty((steps + 1, n), dtype=_LD)
    inputs = np.empty(steps + 1)
    for m, t in enumerate(times.astype(_LD)):
        decay = np.exp(-vals * (t1_ld - t))
        inputs[m] = float(cw @ decay)
        forced = c * ((_phi(rates, t) * decay[None, :]) @ cw)
        states_hat[m] = np.exp(-vals * t) * x0_hat + forced
    states = states_hat.astype(float) @ v.T
    energy_quad = float(trapezoid(inputs**2, times))
    terminal = float(np.max(np.abs(states[-1] - xf)))
    return TrajectoryResult(times, states, inputs, energy, energy_quad, terminal, gram.condition)


def simulate_autonomous(g: Graph, x0, t1: float, steps: int = 1000) -> TrajectoryResult:
    """Consensus run ``x(t) = V exp(-Lambda t) V^T x0`` with no input."""
    if t1 <= 0:
        raise ValueError(f"horizon must be positive, got {t1}")
    dec = eigh(laplacian(g))
    x0 = np.broadcast_to(np.asarray(x0, dtype=float), (g.num_vertices,))
    times = np.linspace(0.0, t1, steps + 1)
    vals = np.clip(dec.eigenvalues, 0.0, None)
    modal = np.exp(-np.outer(times, vals)) * (dec.eigenvectors.T @ x0)[None, :]
    states = modal @ dec.eigenvectors.T
    mean = float(np.mean(x0))
    return TrajectoryResult(
        times, states, np.zeros_like(times), 0.0, 0.0, float(np.max(np.abs(states[-1] - mean)))
    )
