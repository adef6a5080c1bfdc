"""Symmetric eigendecomposition and the closed-form spectral facts for antiregular chains.

The checkers return :class:`TheoremReport` objects carrying raw slacks so a
marginal pass or fail can be audited after the fact.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .graph_core import BlockLayout, Graph, build_antiregular, degree_sequence, conjugate, laplacian

SYMMETRY_TOL = 1e-12
SIGN_TOL = 1e-9


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # column i pairs with eigenvalues[i]

    @property
    def order(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class Margin:
    """Raw slack of one inequality; ``b - a`` for ``a <= b``, ``-|a - b|`` for ``a == b``."""

    what: str
    value: float
    strict: bool = False

    def satisfied(self, tolerance: float) -> bool:
        return self.value > tolerance if self.strict else self.value >= -tolerance


@dataclass
class TheoremReport:
    name: str
    margins: list[Margin]
    tolerance: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(m.satisfied(self.tolerance) for m in self.margins)

    @property
    def worst(self) -> Margin | None:
        failing = [m for m in self.margins if not m.satisfied(self.tolerance)]
        pool = failing or self.margins
        return min(pool, key=lambda m: m.value) if pool else None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "margins": [asdict(m) for m in self.margins],
            "details": self.details,
        }


# ---------------------------------------------------------------------------
# eigensolver


def _check_symmetric(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    asym = np.max(np.abs(m - m.T)) if m.size else 0.0
    if asym > SYMMETRY_TOL:
        raise ValueError(f"matrix is not symmetric (max |M - M^T| = {asym:.3e})")


def canonical_signs(vectors: np.ndarray, tol: float = SIGN_TOL) -> np.ndarray:
    """Flip columns so the first entry with magnitude above ``tol`` is positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        big = np.flatnonzero(np.abs(out[:, j]) > tol)
        if big.size and out[big[0], j] < 0:
            out[:, j] = -out[:, j]
    return out


def jacobi_eigh(m: np.ndarray, *, rel_tol: float = 1e-14, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi rotations; returns unsorted ``(diag, V)`` with ``m = V diag(d) V^T``.

    Stops once the off-diagonal Frobenius mass drops below ``rel_tol * ||m||_F``.
    """
    a = np.array(m, dtype=float, copy=True)
    size = a.shape[0]
    v = np.eye(size)
    fro = np.linalg.norm(a)
    if size < 2 or fro == 0.0:
        return np.diag(a).copy(), v
    target = rel_tol * fro
    for sweep in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < target:
            return np.diag(a).copy(), v
        for p in range(size - 1):
            for q in range(p + 1, size):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app, aqq = a[p, p], a[q, q]
                g = 100.0 * abs(apq)
                if sweep > 3 and abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    a[p, q] = a[q, p] = 0.0
                    continue
                h = aqq - app
                if abs(h) + g == abs(h):
                    t = apq / h
                else:
                    theta = 0.5 * h / apq
                    t = 1.0 / (abs(theta) + np.sqrt(1.0 + theta * theta))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, :] = a[:, p]
                a[q, :] = a[:, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise RuntimeError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def eigh(m: np.ndarray) -> SpectralDecomposition:
    """Ascending eigenpairs of a symmetric matrix with canonical eigenvector signs."""
    m = np.asarray(m, dtype=float)
    _check_symmetric(m)
    m = 0.5 * (m + m.T)
    vals, vecs = jacobi_eigh(m)
    order = np.argsort(vals, kind="stable")
    return SpectralDecomposition(vals[order], canonical_signs(vecs[:, order]))


# ---------------------------------------------------------------------------
# antiregular blocks


def antiregular_spectrum(k: int) -> list[int]:
    """``{0, 1, ..., k}`` without ``ceil(k/2)``, ascending."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    kb = -(-k // 2)
    return [x for x in range(k + 1) if x != kb]


def antiregular_eigenvectors(k: int) -> np.ndarray:
    """Integer eigenvector matrix of the antiregular Laplacian, built by column surgery.

    Column ``j`` belongs to the ``j``-th largest eigenvalue; the all-ones
    column (eigenvalue 0) comes last. Columns are orthogonal but not normalized.
    """
    t1 = laplacian(build_antiregular(k)).astype(np.int64)
    t2 = t1.copy()
    upper = np.triu(np.ones((k, k), dtype=bool), 1)
    t2[upper] = -1 - t1[upper]
    t3 = t2.copy()
    col_sums = t2.sum(axis=0) - np.diag(t2)
    t3[np.diag_indices(k)] = -col_sums
    zero_cols = [j for j in range(k) if not np.any(t3[:, j])]
    if len(zero_cols) != 1:
        raise RuntimeError(f"expected exactly one zero column, found {zero_cols}")
    keep = [j for j in range(k) if j != zero_cols[0]]
    return np.column_stack([t3[:, keep], np.ones(k, dtype=np.int64)])


def antiregular_basis(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors from the closed form."""
    t4 = antiregular_eigenvectors(k)[:, ::-1].astype(float)
    vecs = canonical_signs(t4 / np.linalg.norm(t4, axis=0))
    return np.array(antiregular_spectrum(k), dtype=float), vecs


# ---------------------------------------------------------------------------
# interconnected blocks


def connector_vectors(layout: BlockLayout) -> np.ndarray:
    """Columns ``z_i = e_{ik} - e_{ik + kappa_bar}``, ``i = 1..n-1``."""
    size = layout.k * layout.n
    z = np.zeros((size, layout.n - 1))
    for i in range(1, layout.n):
        z[i * layout.k - 1, i - 1] = 1.0
        z[i * layout.k + layout.kappa_bar - 1, i - 1] = -1.0
    return z


def block_laplacian(layout: BlockLayout) -> np.ndarray:
    """``I_n kron L_A`` (the disconnected blocks)."""
    return np.kron(np.eye(layout.n), laplacian(build_antiregular(layout.k)))


def interconnection_laplacian(layout: BlockLayout) -> np.ndarray:
    if layout.extra_vertex:
        raise ValueError("interconnection_laplacian expects extra_vertex=False")
    z = connector_vectors(layout)
    return block_laplacian(layout) + z @ z.T


def block_modal_matrix(layout: BlockLayout) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues ``lambda_{ceil(i/n)}`` and modal matrix ``[I_n kron v_1, ..., I_n kron v_k]``."""
    vals, vecs = antiregular_basis(layout.k)
    eye = np.eye(layout.n)
    modal = np.hstack([np.kron(eye, vecs[:, [j]]) for j in range(layout.k)])
    return np.repeat(vals, layout.n), modal


@dataclass(frozen=True)
class StructuredEigenpair:
    index: int  # 1-based position in the ascending spectrum of the chain
    eigenvalue: float
    vector: np.ndarray  # unit length
    residual: float  # ||L v - lambda v||_inf
    case: str


def structured_index_set(layout: BlockLayout) -> list[int]:
    return [j * layout.n + 1 for j in range(layout.k)]


def structured_eigenvectors(layout: BlockLayout) -> list[StructuredEigenpair]:
    """Eigenpairs of the chain assembled from block eigenvectors.

    Index ``1`` and ``(k-1)n+1`` repeat the block vector in every block,
    index ``n+1`` scales block ``p`` by ``t**(p-1)`` with ``t = -(k-2)``, and
    every other index keeps the first block only. Residuals are measured,
    never assumed.
    """
    k, n = layout.k, layout.n
    vals, vecs = antiregular_basis(k)
    chain = interconnection_laplacian(BlockLayout(k, n))
    t = -(k - 2)
    out = []
    for i in structured_index_set(layout):
        j = (i - 1) // n  # 0-based block eigen index, ceil(i/n) - 1
        v = vecs[:, j]
        if n == 1:
            blocks, case = [v], "single block"
        elif i == 1 or i == (k - 1) * n + 1:
            blocks, case = [v] * n, "repeated"
        elif i == n + 1:
            blocks, case = [float(t) ** p * v for p in range(n)], f"geometric t={t}"
        else:
            blocks, case = [v] + [np.zeros(k)] * (n - 1), "first block only"
        vec = np.concatenate(blocks)
        vec = vec / np.linalg.norm(vec)
        lam = vals[j]
        residual = float(np.max(np.abs(chain @ vec - lam * vec)))
        out.append(StructuredEigenpair(i, float(lam), vec, residual, case))
    return out


# ---------------------------------------------------------------------------
# checkers


def _values(spec: SpectralDecomposition | Sequence[float]) -> np.ndarray:
    if isinstance(spec, SpectralDecomposition):
        return spec.eigenvalues
    return np.asarray(spec, dtype=float)


def check_weyl(spec_a, spec_b, spec_sum, tolerance: float = 1e-8) -> TheoremReport:
    """Weyl inequalities for eigenvalues of ``M1``, ``M2`` and ``M1 + M2`` (1-based below)."""
    l1, l2, l3 = _values(spec_a), _values(spec_b), _values(spec_sum)
    size = len(l3)
    if not len(l1) == len(l2) == size:
        raise ValueError("Weyl check needs three spectra of equal order")
    scale = max(1.0, float(np.max(np.abs(np.concatenate([l1, l2, l3])))) if size else 1.0)
    margins = []
    for i in range(1, size + 1):
        for j in range(0, size - i + 1):
            rhs = l1[i + j - 1] + l2[size - j - 1]
            margins.append(Margin(f"l3[{i}] <= l1[{i + j}] + l2[{size - j}]", float(rhs - l3[i - 1])))
        for j in range(1, i + 1):
            lhs = l1[i - j] + l2[j - 1]
            margins.append(Margin(f"l1[{i - j + 1}] + l2[{j}] <= l3[{i}]", float(l3[i - 1] - lhs)))
    return TheoremReport("weyl", margins, tolerance * scale)


def check_interlacing(spec_base, spec_updated, tolerance: float = 1e-8) -> TheoremReport:
    """Interlacing after a rank-one PSD update: ``l1[1] <= l3[1] <= l1[2] <= ... <= l3[k]``."""
    l1, l3 = _values(spec_base), _values(spec_updated)
    if len(l1) != len(l3):
        raise ValueError("interlacing check needs spectra of equal order")
    margins = []
    for i in range(len(l1)):
        margins.append(Margin(f"l1[{i + 1}] <= l3[{i + 1}]", float(l3[i] - l1[i])))
        if i + 1 < len(l1):
            margins.append(Margin(f"l3[{i + 1}] <= l1[{i + 2}]", float(l1[i + 1] - l3[i])))
    return TheoremReport("interlacing", margins, tolerance)


def check_anchoring(layout: BlockLayout, spec: SpectralDecomposition, tolerance: float = 1e-8) -> TheoremReport:
    """Block eigenvalues reappear at positions ``nj+1`` of the chain, isolated from both neighbours.

    For ``n = 1`` only the equalities are reported.
    """
    k, n = layout.k, layout.n
    lt = _values(spec)
    if len(lt) != k * n:
        raise ValueError(f"spectrum of order {len(lt)} does not match k*n = {k * n}")
    lam = antiregular_spectrum(k)
    margins = []
    for j in range(k):
        pos = n * j + 1
        margins.append(Margin(f"chain[{pos}] == block[{j + 1}]={lam[j]}", -abs(float(lt[pos - 1] - lam[j]))))
        if n >= 2:
            if pos + 1 <= k * n:
                margins.append(Margin(f"block[{j + 1}] < chain[{pos + 1}]", float(lt[pos] - lam[j]), strict=True))
            if j >= 1:
                margins.append(Margin(f"chain[{pos - 1}] < block[{j + 1}]", float(lam[j] - lt[pos - 2]), strict=True))
    return TheoremReport("anchoring", margins, tolerance, {"anchored_positions": [n * j + 1 for j in range(k)]})


def check_distinct(spec, rel_tol: float = 1e-8) -> TheoremReport:
    lt = _values(spec)
    gaps = np.diff(lt)
    scale = max(1.0, float(lt[-1])) if len(lt) else 1.0
    margins = [Margin(f"l[{i + 2}] - l[{i + 1}] > 0", float(g), strict=True) for i, g in enumerate(gaps)]
    details = {}
    if len(gaps):
        loc = int(np.argmin(gaps))
        details = {"min_gap": float(gaps[loc]), "min_gap_index": loc + 1}
    return TheoremReport("distinct", margins, rel_tol * scale, details)


def check_grone_merris(g: Graph, tolerance: float = 1e-8) -> TheoremReport:
    """Partial sums of the largest Laplacian eigenvalues against the conjugate degree sequence."""
    vals = eigh(laplacian(g)).eigenvalues[::-1]
    dstar = np.array(conjugate(degree_sequence(g)).values, dtype=float)
    slack = np.cumsum(dstar) - np.cumsum(vals)
    margins = [Margin(f"sum top-{t + 1} eigenvalues <= sum d*[1..{t + 1}]", float(s)) for t, s in enumerate(slack)]
    equality = bool(np.all(np.abs(slack) <= tolerance))
    return TheoremReport("grone_merris", margins, tolerance, {"equality": equality})


def check_repeating_entries(layout: BlockLayout, spec: SpectralDecomposition, tolerance: float = 1e-8) -> TheoremReport:
    """Entries ``kappa_bar`` and ``kappa_bar + 1`` of every chain eigenvector are nonzero."""
    kb = layout.kappa_bar
    margins = []
    for i in range(spec.order):
        for row in (kb, kb + 1):
            margins.append(Margin(f"|v{i + 1}[{row}]|", float(abs(spec.eigenvectors[row - 1, i])), strict=True))
    return TheoremReport("repeating_entries", margins, tolerance)


def check_structured_eigenvectors(layout: BlockLayout, tolerance: float = 1e-8) -> TheoremReport:
    pairs = structured_eigenvectors(layout)
    margins = [Margin(f"residual at index {p.index} ({p.case})", -p.residual) for p in pairs]
    return TheoremReport("structured_eigenvectors", margins, tolerance)
