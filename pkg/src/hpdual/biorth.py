"""Gram matrices between shape-function families and biorthogonality checks."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from hpdual.family import Family, ShapeIndex
from hpdual.refelem import element_quadrature
from hpdual.textio import dumps, num

DEFAULT_TOL = 1e-10
DEFAULT_MARGIN = 4


class RecombinationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GramMatrix:
    rows: tuple
    cols: tuple
    values: np.ndarray
    quadrature_degree: int
    element: str = ""
    space: str = ""
    p: int = 0

    def __post_init__(self):
        if self.values.shape != (len(self.rows), len(self.cols)):
            raise ValueError("Gram values do not match the index maps")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Gram matrix has non-finite entries")

    @property
    def row_map(self) -> dict:
        return {idx: k for k, idx in enumerate(self.rows)}

    @property
    def col_map(self) -> dict:
        return {idx: k for k, idx in enumerate(self.cols)}

    def entry(self, row: ShapeIndex, col: ShapeIndex) -> float:
        return float(self.values[self.row_map[row], self.col_map[col]])

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(",".join(["primal\\dual"] + [f'"{c}"' for c in self.cols]) + "\n")
        for r, row in zip(self.rows, self.values):
            out.write(",".join([f'"{r}"'] + [num(v) for v in row]) + "\n")
        return out.getvalue()

    def to_json(self) -> str:
        return dumps({"element": self.element, "space": self.space, "p": self.p,
                      "quadrature_degree": self.quadrature_degree,
                      "rows": [str(r) for r in self.rows],
                      "cols": [str(c) for c in self.cols],
                      "values": [list(r) for r in self.values]}) + "\n"


def assemble_gram(primal: Family, dual: Family, p: int | None = None,
                  quad_margin: int = DEFAULT_MARGIN) -> GramMatrix:
    """Assemble ``G[r, c] = integral of primal_r . dual_c`` over the element.

    The rule has degree ``2p + quad_margin``. Each entry is reduced over the
    quadrature points in a fixed order, so the result does not depend on the
    ordering of either family.
    """
    if primal.element.kind != dual.element.kind:
        raise ValueError(
            f"families live on different elements: {primal.element.kind} vs "
            f"{dual.element.kind}")
    if primal.ncomp != dual.ncomp:
        raise ValueError(
            f"value dimensions differ: {primal.ncomp} vs {dual.ncomp}")
    if p is None:
        p = max(primal.degree, dual.degree)
    degree = 2 * p + quad_margin
    quad = element_quadrature(primal.element, degree)
    fvals = primal.evaluate(quad.collapsed) * quad.weights[None, :, None]
    gvals = np.ascontiguousarray(dual.evaluate(quad.collapsed))
    ncols = len(dual)
    values = np.empty((len(primal), ncols))
    flat_g = gvals.reshape(ncols, -1)
    for r in range(len(primal)):
        prod = flat_g * fvals[r].reshape(1, -1)
        values[r] = np.add.reduce(prod, axis=1)
    return GramMatrix(primal.indices, dual.indices, values, degree,
                      primal.element.short_name, primal.space, p)


@dataclass(frozen=True, eq=False)
class RecombinationSpec:
    A: np.ndarray
    D: np.ndarray
    B: np.ndarray

    @property
    def residual(self) -> float:
        k = self.A.shape[0]
        return float(np.max(np.abs(self.A @ np.diag(self.D) @ self.B.T - np.eye(k))))


def solve_recombination(A, D, label: str = "") -> RecombinationSpec:
    """Solve ``A diag(D) B^T = I`` for the dual mixing matrix ``B``.

    If ``<phi^t, psi^r> = D_t delta_tr`` and the primal functions are mixed by
    the rows of ``A``, mixing the duals by the rows of ``B`` restores an
    identity pairing.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    D = np.asarray(D, dtype=float).ravel()
    k = A.shape[0]
    what = f" for {label}" if label else ""
    if A.shape != (k, k) or D.shape != (k,):
        raise RecombinationError(f"shape mismatch{what}: A {A.shape}, D {D.shape}")
    zero = np.flatnonzero(D == 0)
    if zero.size:
        raise RecombinationError(f"zero diagonal entry at type {int(zero[0]) + 1}{what}")
    if abs(np.linalg.det(A)) < 1e-14 * max(1.0, np.max(np.abs(A))) ** k:
        raise RecombinationError(f"singular mixing matrix{what}")
    B = np.linalg.solve(A * D[None, :], np.eye(k)).T
    return RecombinationSpec(A, D, B)


@dataclass(frozen=True, eq=False)
class BiorthReport:
    max_offdiag_rel: float
    diag_values: tuple
    pattern: np.ndarray
    passed: bool
    tol: float
    max_identity_error: float = float("nan")
    mode: str = "diagonal"
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = dict(self.meta)
        out.update({
            "mode": self.mode,
            "tol": self.tol,
            "diag": [float(d) for d in self.diag_values],
            "max_offdiag_rel": float(self.max_offdiag_rel),
            "max_identity_error": float(self.max_identity_error),
            "pass": bool(self.passed),
        })
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict()) + "\n"


def offdiagonal_relative(values: np.ndarray) -> float:
    """Largest ``|G_rc| / sqrt(|G_rr G_cc|)`` over ``r != c``."""
    diag = np.abs(np.diag(values))
    if np.any(diag == 0):
        return float("inf")
    scale = np.sqrt(np.outer(diag, diag))
    rel = np.abs(values) / scale
    np.fill_diagonal(rel, 0.0)
    return float(rel.max()) if rel.size else 0.0


def verify_biorthogonality(gram: GramMatrix, tol: float = DEFAULT_TOL,
                           mode: str = "diagonal") -> BiorthReport:
    """Check a square Gram matrix for a diagonal (or identity) structure.

    ``mode="diagonal"`` passes when no diagonal entry vanishes and every
    off-diagonal entry is below ``tol`` relative to its two diagonal entries.
    ``mode="identity"`` additionally requires ``max |G - I| <= tol``.
    """
    values = gram.values
    if values.shape[0] != values.shape[1]:
        raise ValueError("biorthogonality needs a square Gram matrix")
    diag = np.diag(values)
    rel = offdiagonal_relative(values)
    ident = float(np.max(np.abs(values - np.eye(len(diag))))) if len(diag) else 0.0
    ok = bool(np.all(diag != 0) and rel <= tol)
    if mode == "identity":
        ok = ok and ident <= tol
    elif mode != "diagonal":
        raise ValueError(f"unknown mode {mode!r}")
    meta = {"element": gram.element, "space": gram.space, "p": gram.p,
            "size": len(diag)}
    return BiorthReport(rel, tuple(float(d) for d in diag),
                        sparsity_pattern(gram, tol), ok, tol, ident, mode, meta)


def sparsity_pattern(gram: GramMatrix, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Boolean mask of entries with ``|G_rc| > tol * max |G|``."""
    vals = np.abs(gram.values)
    top = vals.max() if vals.size else 0.0
    return vals > tol * top


def pattern_to_csv(pattern: np.ndarray) -> str:
    return "".join(",".join("1" if v else "0" for v in row) + "\n" for row in pattern)


def pattern_to_pbm(pattern: np.ndarray) -> str:
    """Plain (P1) portable bitmap; black pixels mark nonzero entries."""
    h, w = pattern.shape
    lines = ["P1", f"{w} {h}"]
    lines += [" ".join("1" if v else "0" for v in row) for row in pattern]
    return "\n".join(lines) + "\n"
