"""Interpolation of interior functions through dual coefficients.

The coefficients are ``g_i = integral of u . psi_i`` with the normalized duals
``psi_i``; the interpolant is ``sum_i g_i phi_i``. Quadrature has degree
``2p + quad_margin``, so the coefficients are exact for polynomial ``u`` of
degree up to ``p + quad_margin``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hpdual.biorth import BiorthReport, assemble_gram, verify_biorthogonality
from hpdual.catalog import FamilySpec, dual_family, primal_family
from hpdual.family import Family
from hpdual.refelem import cartesian_to_duffy, element_quadrature
from hpdual.textio import dumps

DEFAULT_MARGIN = 6


def _as_spec(family) -> FamilySpec:
    if isinstance(family, FamilySpec):
        return family
    return FamilySpec(*family)


def _values(u, points, ncomp):
    vals = np.asarray(u(points), dtype=float)
    return vals.reshape(points.shape[0], ncomp)


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    spec: FamilySpec
    primal: Family
    coefficients: dict
    l2_error: float
    linf_error_sampled: float

    @property
    def coefficient_vector(self) -> np.ndarray:
        return np.array([self.coefficients[i] for i in self.primal.indices])

    def __call__(self, points):
        return reconstruct(self.primal, self.coefficient_vector)(points)

    def to_dict(self) -> dict:
        return {
            "family": str(self.spec),
            "coefficients": [{"index": str(i), "value": float(v)}
                             for i, v in self.coefficients.items()],
            "l2_error": float(self.l2_error),
            "linf_error_sampled": float(self.linf_error_sampled),
        }

    def to_json(self) -> str:
        return dumps(self.to_dict()) + "\n"


def reconstruct(primal: Family, coefficients):
    """Evaluator ``points -> sum_i c_i phi_i(points)`` at Cartesian points."""
    coefficients = np.asarray(coefficients, dtype=float)
    if coefficients.shape != (len(primal),):
        raise ValueError("one coefficient per primal function is required")

    def evaluate(points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        c = cartesian_to_duffy(primal.element, pts)
        vals = np.einsum("f,fqc->qc", coefficients, primal.evaluate(c))
        return vals[:, 0] if primal.ncomp == 1 else vals

    return evaluate


def project(u, family, quad_margin: int = DEFAULT_MARGIN) -> ProjectionResult:
    """Dual-coefficient interpolant of ``u`` onto the interior span of ``family``.

    ``u`` maps Cartesian points of shape ``(n, dim)`` to ``(n,)`` values (H1)
    or ``(n, dim)`` vectors (H(curl)). ``family`` is a :class:`FamilySpec` or an
    ``(element, space, p)`` tuple.
    """
    spec = _as_spec(family)
    primal = primal_family(spec)
    dual = dual_family(spec)
    quad = element_quadrature(primal.element, 2 * spec.p + quad_margin)
    uq = _values(u, quad.points, primal.ncomp)
    psi = dual.evaluate(quad.collapsed)
    g = np.einsum("fqc,qc,q->f", psi, uq, quad.weights)
    phi = primal.evaluate(quad.collapsed)
    err = uq - np.einsum("f,fqc->qc", g, phi)
    sq = np.sum(err * err, axis=1)
    l2 = math.sqrt(max(float(np.sum(sq * quad.weights)), 0.0))
    linf = float(np.sqrt(sq.max())) if sq.size else 0.0
    return ProjectionResult(spec, primal, dict(zip(primal.indices, g.tolist())),
                            l2, linf)


def projection_matrix_diagnostic(family, quad_margin: int = DEFAULT_MARGIN,
                                 normalized: bool = True,
                                 tol: float = 1e-10) -> BiorthReport:
    """Check that pairing the basis with its duals gives the identity matrix."""
    spec = _as_spec(family)
    primal = primal_family(spec)
    dual = dual_family(spec, "oracle" if normalized else "paper")
    gram = assemble_gram(primal, dual, spec.p, quad_margin)
    return verify_biorthogonality(gram, tol, mode="identity")


def _sin_product(points):
    return np.prod(np.sin(np.pi * points), axis=1)


def _poly(points):
    x = points
    return (1 + x[:, 0]) ** 2 * x[:, -1] ** 3 - 0.5 * x[:, 0] * x[:, -1] + 0.25


SCALAR_FUNCTIONS = {
    "sin": _sin_product,
    "poly": _poly,
    "one": lambda points: np.ones(points.shape[0]),
}


def builtin_function(name: str, space: str):
    """Named test functions for the command line; vector versions for H(curl)."""
    try:
        f = SCALAR_FUNCTIONS[name]
    except KeyError:
        raise ValueError(f"unknown test function {name!r}; choose from "
                         f"{sorted(SCALAR_FUNCTIONS)}") from None
    if space == "h1":
        return f

    def vector(points):
        base = f(points)
        dim = points.shape[1]
        # rotate the argument per component so components differ
        return np.stack([f(np.roll(points, k, axis=1)) if k else base
                         for k in range(dim)], axis=-1)

    return vector
