"""Finite-difference ground truth for the linear graphs and the full tree.

Each edge carries N cells of width h = 1/N.  The scheme is the lumped-mass
piecewise-linear discretization, i.e. three-point differences inside an edge
with half-cell vertex rows, which keeps both the interior and the vertex
conditions second-order accurate.  A vertex with Robin coefficient alpha adds
alpha u(v)^2 to the quadratic form; on the weighted linear graph edge k is
weighted by b^k and vertex i by b^i, so the matrices stay symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh, eigh_tridiagonal
from scipy.sparse.linalg import ArpackError, eigsh, splu

from .determinants import GraphParams
from .errors import NumericalError
from .potential import PIECEWISE_CONSTANT, SAMPLED, Potential

DENSE_LIMIT = 2000
TREE_UNKNOWN_CAP = 200_000
TREE_MAX_N = 3
TREE_MAX_B = 3


@dataclass(frozen=True)
class DiscretizedOperator:
    """Stiffness (sparse, symmetric) and lumped mass (diagonal) of a graph.

    ``geometry`` is ``"linear"`` or ``"tree"``; ``nodes`` lists (edge, x) for
    every unknown, with edge 0 used for vertices.
    """

    stiffness: sp.csr_matrix = field(repr=False)
    mass: np.ndarray = field(repr=False)
    h: float
    cells: int
    geometry: str
    n: int
    b: float

    @property
    def size(self) -> int:
        return len(self.mass)

    def symmetric_form(self) -> sp.csr_matrix:
        """M^{-1/2} K M^{-1/2}, whose eigenvalues are those of the pencil (K, M)."""
        d = sp.diags(1.0 / np.sqrt(self.mass))
        return (d @ self.stiffness @ d).tocsr()

    def dump(self, path) -> None:
        """Write K and M as ``i j value`` triplets (0-based) after a short header."""
        k = self.stiffness.tocoo()
        with open(path, "w") as fh:
            fh.write(f"# geometry {self.geometry} n {self.n} b {self.b} h {self.h!r} size {self.size}\n")
            fh.write(f"# stiffness nnz {k.nnz}\n")
            for i, j, v in zip(k.row, k.col, k.data):
                fh.write(f"{i} {j} {float(v)!r}\n")
            fh.write(f"# mass nnz {self.size}\n")
            for i, v in enumerate(self.mass):
                fh.write(f"{i} {i} {float(v)!r}\n")


def _cells(q: Potential, h: float) -> int:
    """Cells per edge near 1/h with every breakpoint of q on a node."""
    if not 0 < h <= 1.0 / 16.0:
        raise ValueError("mesh size must satisfy 0 < h <= 1/16")
    n0 = int(round(1.0 / h))
    if q.kind != PIECEWISE_CONSTANT or not len(q.breakpoints):
        return n0
    bps = np.asarray(q.breakpoints, dtype=float)
    for cells in range(n0, 2 * n0 + 1):
        x = bps * cells
        if np.all(np.abs(x - np.round(x)) < 1e-9):
            return cells
    return n0


def _cell_potential(q: Potential, cells: int) -> np.ndarray:
    """Potential value used on each cell (cell-midpoint sample)."""
    mid = (np.arange(cells) + 0.5) / cells
    if q.kind == PIECEWISE_CONSTANT:
        idx = np.searchsorted(np.asarray(q.breakpoints, dtype=float), mid, side="right")
        return np.asarray(q.values, dtype=float)[idx]
    if q.kind == SAMPLED:
        return np.interp(mid, np.asarray(q.grid), np.asarray(q.values))
    return np.zeros(cells)


def _edge_blocks(qc: np.ndarray, h: float):
    """Per-cell stiffness (1/h) and lumped mass / potential contributions (h/2)."""
    return 1.0 / h, 0.5 * h, 0.5 * h * qc


class _Assembler:
    def __init__(self, size: int):
        self.rows, self.cols, self.vals = [], [], []
        self.mass = np.zeros(size)

    def add(self, i, j, v):
        self.rows.append(i)
        self.cols.append(j)
        self.vals.append(v)

    def edge(self, nodes: np.ndarray, weight: float, qc: np.ndarray, h: float):
        """Add one edge whose consecutive unknowns are ``nodes`` (-1 = eliminated)."""
        kinv, half, qhalf = _edge_blocks(qc, h)
        for c in range(len(qc)):
            a, b = nodes[c], nodes[c + 1]
            for i, j, v in ((a, a, kinv + qhalf[c]), (b, b, kinv + qhalf[c]), (a, b, -kinv), (b, a, -kinv)):
                if i >= 0 and j >= 0:
                    self.add(i, j, weight * v)
            for i in (a, b):
                if i >= 0:
                    self.mass[i] += weight * half

    def matrix(self) -> sp.csr_matrix:
        n = len(self.mass)
        return sp.csr_matrix((self.vals, (self.rows, self.cols)), shape=(n, n))


def assemble_linear(params: GraphParams, q: Potential, h: float) -> DiscretizedOperator:
    """Weighted linear graph: edge k (vertices k-1 to k) weighted by b^k."""
    n, b, alpha = int(params.n), float(params.b), float(params.alpha)
    cells = _cells(q, h)
    hh = 1.0 / cells
    qc = _cell_potential(q, cells)
    total = n * cells + 1
    # global node index along the line; the root node is dropped for a Dirichlet root
    shift = 1 if params.dirichlet_root else 0
    asm = _Assembler(total - shift)
    for k in range(1, n + 1):
        nodes = np.arange((k - 1) * cells, k * cells + 1) - shift
        asm.edge(nodes, b ** k, qc, hh)
    for i in range(n + 1):
        idx = i * cells - shift
        if idx >= 0 and alpha != 0.0:
            asm.add(idx, idx, alpha * b ** i)
    return DiscretizedOperator(asm.matrix(), asm.mass, hh, cells, "linear", n, b)


def tree_size(n: int, b: int, cells: int) -> int:
    edges = sum(b ** k for k in range(1, n + 1))
    return edges * (cells - 1) + edges + 1


def assemble_tree(n: int, b: int, alpha: float, q: Potential, h: float) -> DiscretizedOperator:
    """The full tree: b edges leave the root and every non-leaf vertex, n generations."""
    if not (1 <= n <= TREE_MAX_N and 2 <= b <= TREE_MAX_B and int(b) == b):
        raise ValueError(f"full-tree oracle needs 1 <= n <= {TREE_MAX_N} and integer 2 <= b <= {TREE_MAX_B}")
    b = int(b)
    cells = _cells(q, h)
    size = tree_size(n, b, cells)
    if size > TREE_UNKNOWN_CAP:
        raise ValueError(f"tree discretization needs {size} unknowns, above the cap {TREE_UNKNOWN_CAP}")
    hh = 1.0 / cells
    qc = _cell_potential(q, cells)
    asm = _Assembler(size)
    counter = [1]          # node 0 is the root vertex
    vertices = [0]

    def grow(parent: int, depth: int):
        for _ in range(b):
            inner = np.arange(counter[0], counter[0] + cells - 1)
            child = counter[0] + cells - 1
            counter[0] += cells
            vertices.append(child)
            asm.edge(np.concatenate([[parent], inner, [child]]), 1.0, qc, hh)
            if depth < n:
                grow(child, depth + 1)

    grow(0, 1)
    if alpha != 0.0:
        for v in vertices:
            asm.add(v, v, alpha)
    return DiscretizedOperator(asm.matrix(), asm.mass, hh, cells, "tree", n, b)


def lowest_eigenvalues(op: DiscretizedOperator, m: int, below: float | None = None) -> np.ndarray:
    """The ``m`` lowest eigenvalues of the pencil (K, M).

    Large tree problems use shift-invert subspace iteration with the shift
    just under ``below``, an estimate of the lowest eigenvalue such as the
    coarse-mesh value; without it a one-vector Lanczos run supplies it.
    """
    if m < 1:
        raise ValueError("need at least one eigenvalue")
    if m > op.size // 4:
        raise ValueError(f"m = {m} exceeds a quarter of the matrix size {op.size}")
    a = op.symmetric_form()
    if op.size <= DENSE_LIMIT:
        return eigh(a.toarray(), eigvals_only=True, subset_by_index=[0, m - 1])
    if op.geometry == "linear":
        # nodes are ordered along the line, so the matrix is tridiagonal
        return eigh_tridiagonal(a.diagonal(), a.diagonal(1), eigvals_only=True,
                                select="i", select_range=(0, m - 1))
    if below is None:
        absrow = np.asarray(abs(a).sum(axis=1)).ravel()
        gersh = float(np.min(2.0 * a.diagonal() - absrow)) - 1.0
        try:
            below = float(eigsh(a, k=1, sigma=gersh, which="LM", return_eigenvectors=False)[0])
        except ArpackError as exc:
            raise NumericalError(f"lowest-eigenvalue estimate failed (size {op.size}): {exc}") from exc
    return _subspace_lowest(a, m, below - max(1.0, 0.05 * abs(below)))


def _subspace_lowest(a: sp.csr_matrix, m: int, sigma: float, tol: float = 1e-13,
                     maxiter: int = 500) -> np.ndarray:
    """Block shift-invert subspace iteration with Rayleigh-Ritz.

    Tree spectra carry eigenvalues of multiplicity b^{n-1} and more; a block
    wider than the wanted set resolves every copy, where single-vector Lanczos
    can miss some.
    """
    size = a.shape[0]
    width = min(size - 1, 2 * m + 10)
    try:
        lu = splu((a - sigma * sp.identity(size, format="csr")).tocsc())
    except RuntimeError as exc:
        raise NumericalError(f"shifted factorization failed (size {size}, shift {sigma:.6g}): {exc}") from exc
    rng = np.random.default_rng(0)
    x, _ = np.linalg.qr(rng.standard_normal((size, width)))
    prev = None
    for _ in range(maxiter):
        y, _ = np.linalg.qr(lu.solve(x))
        small = y.T @ (a @ y)
        vals, vecs = np.linalg.eigh(0.5 * (small + small.T))
        x = y @ vecs
        if prev is not None and np.all(np.abs(vals[:m] - prev[:m]) <= tol * np.maximum(1.0, np.abs(vals[:m]))):
            return vals[:m]
        change = None if prev is None else float(np.max(np.abs(vals[:m] - prev[:m])))
        prev = vals
    raise NumericalError(f"subspace iteration did not converge in {maxiter} steps "
                         f"(size {size}, shift {sigma:.6g}, last change {change:.3g})")


def richardson(coarse: np.ndarray, fine: np.ndarray) -> np.ndarray:
    """(4 fine - coarse) / 3, cancelling the h^2 error term."""
    return (4.0 * np.asarray(fine) - np.asarray(coarse)) / 3.0


@dataclass(frozen=True)
class FDResult:
    raw: np.ndarray
    fine: np.ndarray
    extrapolated: np.ndarray
    h: float
    size: int

    @property
    def values(self) -> np.ndarray:
        return self.extrapolated

    def to_dict(self) -> dict:
        return {"h": self.h, "size": self.size, "raw": self.raw.tolist(), "fine": self.fine.tolist(),
                "extrapolated": self.extrapolated.tolist()}


def fd_linear(params: GraphParams, q: Potential, h: float, m: int) -> FDResult:
    """Lowest ``m`` eigenvalues of the weighted linear graph at h and h/2, with Richardson."""
    op = assemble_linear(params, q, h)
    raw = lowest_eigenvalues(op, m)
    op2 = assemble_linear(params, q, op.h / 2.0)
    fine = lowest_eigenvalues(op2, m)
    return FDResult(raw, fine, richardson(raw, fine), op.h, op.size)


def fd_tree(n: int, b: int, alpha: float, q: Potential, h: float, m: int) -> FDResult:
    """Lowest ``m`` eigenvalues of the full tree at h and h/2, with Richardson."""
    op = assemble_tree(n, b, alpha, q, h)
    raw = lowest_eigenvalues(op, m)
    op2 = assemble_tree(n, b, alpha, q, op.h / 2.0)
    fine = lowest_eigenvalues(op2, m, below=float(raw[0]))
    return FDResult(raw, fine, richardson(raw, fine), op.h, op.size)


def convergence_order(err_coarse: float, err_fine: float) -> float:
    return math.log2(abs(err_coarse) / abs(err_fine))


def group_values(values, tol: float) -> list[tuple[float, int]]:
    """Cluster sorted values closer than ``tol * max(1, |x|)``; returns (mean, count)."""
    vals = np.sort(np.asarray(values, dtype=float))
    groups = []
    cur = [vals[0]] if len(vals) else []
    for x in vals[1:]:
        if abs(x - cur[-1]) <= tol * max(1.0, abs(x)):
            cur.append(x)
        else:
            groups.append((float(np.mean(cur)), len(cur)))
            cur = [x]
    if cur:
        groups.append((float(np.mean(cur)), len(cur)))
    return groups


@dataclass(frozen=True)
class DecompositionReport:
    fd: np.ndarray
    predicted: np.ndarray
    max_deviation: float
    multiplicity_mismatches: list
    predicted_multiplicities: list
    fd_multiplicities: list

    @property
    def ok(self) -> bool:
        return not self.multiplicity_mismatches

    def to_dict(self) -> dict:
        return {"fd": self.fd.tolist(), "predicted": self.predicted.tolist(),
                "max_deviation": self.max_deviation,
                "multiplicity_mismatches": self.multiplicity_mismatches,
                "predicted_multiplicities": self.predicted_multiplicities,
                "fd_multiplicities": self.fd_multiplicities}


def decomposition_check(n: int, b: int, alpha: float, q: Potential, m: int,
                        h: float = 1.0 / 96.0, group_tol: float = 1e-4) -> DecompositionReport:
    """Compare the full-tree FD spectrum with the union of linear-graph spectra.

    Both multisets are sorted and paired in order (the greedy alignment by
    value); multiplicities are compared group by group, skipping the last
    group, which the cut at ``m`` may split.
    """
    from .spectra import tree_spectrum

    fd = fd_tree(n, b, alpha, q, h, m).extrapolated
    params = GraphParams(n, b, alpha)
    top = max(10.0, float(fd[-1]) + 1.0)
    while True:
        ts = tree_spectrum(params, q, None, top)
        pred = np.array(ts.expanded())
        if len(pred) >= m + 1 and pred[m] > fd[-1]:
            break
        top = 2.0 * top + 10.0
    pred = pred[:m]
    dev = float(np.max(np.abs(fd - pred)))
    gp = group_values(pred, group_tol)
    gf = group_values(fd, group_tol)
    mism = []
    for (xp, cp), (xf, cf) in zip(gp[:-1], gf[:-1]):
        if cp != cf or abs(xp - xf) > 100 * group_tol * max(1.0, abs(xp)):
            mism.append({"predicted": xp, "predicted_count": cp, "fd": xf, "fd_count": cf})
    if len(gp) != len(gf):
        mism.append({"group_counts": [len(gp), len(gf)]})
    return DecompositionReport(fd, pred, dev, mism, [c for _, c in gp], [c for _, c in gf])


__all__ = ["DiscretizedOperator", "assemble_linear", "assemble_tree", "lowest_eigenvalues",
           "richardson", "FDResult", "fd_linear", "fd_tree", "decomposition_check",
           "DecompositionReport", "group_values", "convergence_order", "tree_size"]
