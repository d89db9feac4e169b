"""Reference elements, collapsed (Duffy) coordinates and element quadrature.

Collapsed coordinates are stored as arrays of shape ``(npts, dim)``:

* triangle: ``(eta, y)`` with ``eta = 2x / (1 - y)``
* tetrahedron: ``(eta, chi, z)`` with ``eta = 4x / (1 - 2y - z)``, ``chi = 2y / (1 - z)``
* quad / hex: the Cartesian coordinates themselves

Points on a collapse line (``y = 1`` on the triangle, ``z = 1`` or
``2y + z = 1`` on the tetrahedron) get ``eta = 0`` (and ``chi = 0``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from hpdual.orthopoly import gauss_rule

KINDS = ("quad", "hex", "triangle", "tetrahedron")
ALIASES = {"tri": "triangle", "tet": "tetrahedron", "triangle": "triangle",
           "tetrahedron": "tetrahedron", "quad": "quad", "hex": "hex"}


@dataclass(frozen=True)
class ReferenceElement:
    kind: str
    vertices: tuple

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    @property
    def measure(self) -> float:
        return MEASURES[self.kind]

    @property
    def is_simplex(self) -> bool:
        return self.kind in ("triangle", "tetrahedron")

    @property
    def short_name(self) -> str:
        return {"triangle": "tri", "tetrahedron": "tet"}.get(self.kind, self.kind)


ELEMENTS = {
    "quad": ReferenceElement("quad", ((-1, -1), (1, -1), (1, 1), (-1, 1))),
    "hex": ReferenceElement("hex", tuple(
        (x, y, z) for z in (-1, 1) for y in (-1, 1) for x in (-1, 1))),
    "triangle": ReferenceElement("triangle", ((-1, -1), (1, -1), (0, 1))),
    "tetrahedron": ReferenceElement(
        "tetrahedron", ((-1, -1, -1), (1, -1, -1), (0, 1, -1), (0, 0, 1))),
}
MEASURES = {"quad": 4.0, "hex": 8.0, "triangle": 2.0, "tetrahedron": 4.0 / 3.0}


def reference_element(element) -> ReferenceElement:
    if isinstance(element, ReferenceElement):
        return element
    try:
        return ELEMENTS[ALIASES[element]]
    except KeyError:
        raise ValueError(f"unknown element {element!r}") from None


def _points(p, dim):
    arr = np.asarray(p, dtype=float)
    if arr.shape[-1] != dim:
        raise ValueError(f"expected {dim}-dimensional points, got shape {arr.shape}")
    return arr


def duffy_to_cartesian(element, collapsed):
    """Map collapsed coordinates to Cartesian coordinates on the element."""
    el = reference_element(element)
    c = _points(collapsed, el.dim)
    if not el.is_simplex:
        return c.copy()
    if el.kind == "triangle":
        eta, y = c[..., 0], c[..., 1]
        return np.stack([0.5 * eta * (1.0 - y), y], axis=-1)
    eta, chi, z = c[..., 0], c[..., 1], c[..., 2]
    s2 = 0.5 * (1.0 - z)
    return np.stack([0.5 * eta * (1.0 - chi) * s2, chi * s2, z], axis=-1)


def _safe_ratio(num, den):
    ok = np.abs(den) > 1e-300
    return np.where(ok, num / np.where(ok, den, 1.0), 0.0)


def cartesian_to_duffy(element, cartesian):
    """Inverse of :func:`duffy_to_cartesian`, with ``eta = chi = 0`` on collapse lines."""
    el = reference_element(element)
    x = _points(cartesian, el.dim)
    if not el.is_simplex:
        return x.copy()
    if el.kind == "triangle":
        return np.stack([_safe_ratio(2.0 * x[..., 0], 1.0 - x[..., 1]), x[..., 1]],
                        axis=-1)
    px, py, pz = x[..., 0], x[..., 1], x[..., 2]
    eta = _safe_ratio(4.0 * px, 1.0 - 2.0 * py - pz)
    chi = _safe_ratio(2.0 * py, 1.0 - pz)
    return np.stack([eta, chi, pz], axis=-1)


def duffy_volume_factor(element, collapsed):
    """Jacobian determinant of the collapsed-to-Cartesian map."""
    el = reference_element(element)
    c = _points(collapsed, el.dim)
    if el.kind == "triangle":
        return 0.5 * (1.0 - c[..., 1])
    if el.kind == "tetrahedron":
        return 0.5 * (1.0 - c[..., 1]) * (0.5 * (1.0 - c[..., 2])) ** 2
    return np.ones(c.shape[:-1])


@dataclass(frozen=True, eq=False)
class ElementQuadrature:
    element: ReferenceElement
    points: np.ndarray
    collapsed: np.ndarray
    weights: np.ndarray
    exactness_degree: int

    def integrate(self, values) -> float:
        return float(np.sum(np.asarray(values) * self.weights))


# polynomial degree of the volume factor in each collapsed direction
_FACTOR_DEGREE = {"quad": 0, "hex": 0, "triangle": 1, "tetrahedron": 2}


@lru_cache(maxsize=64)
def _element_quadrature(kind: str, degree: int) -> ElementQuadrature:
    el = ELEMENTS[kind]
    npts = math.ceil((degree + _FACTOR_DEGREE[kind]) / 2) + 1
    rule = gauss_rule(npts)
    grids = np.meshgrid(*([rule.points] * el.dim), indexing="ij")
    collapsed = np.stack([g.ravel() for g in grids], axis=-1)
    wgrids = np.meshgrid(*([rule.weights] * el.dim), indexing="ij")
    weights = np.prod(np.stack([w.ravel() for w in wgrids], axis=-1), axis=-1)
    weights = weights * duffy_volume_factor(kind, collapsed)
    points = duffy_to_cartesian(kind, collapsed)
    for arr in (collapsed, weights, points):
        arr.setflags(write=False)
    return ElementQuadrature(el, points, collapsed, weights, degree)


def element_quadrature(element, target_degree: int) -> ElementQuadrature:
    """Tensor Gauss rule in collapsed coordinates with the Duffy factor in the weights.

    Exact for polynomials of total degree ``target_degree`` on simplices and of
    degree ``target_degree`` per direction on quad/hex.
    """
    if target_degree < 0:
        raise ValueError("target degree must be nonnegative")
    return _element_quadrature(reference_element(element).kind, int(target_degree))
