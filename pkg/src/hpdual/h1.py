"""Interior H1 bubbles and their dual functions.

Bubbles on the simplices are written in collapsed coordinates:

    triangle     u_ij  = L^_i(eta) s^i P^_j^{2i}(y),                 s  = (1-y)/2
    tetrahedron  u_ijk = L^_i(eta) (s1 s2)^i P^_j^{2i}(chi) s2^j P^_k^{2i+2j}(z),
                                                     s1 = (1-chi)/2, s2 = (1-z)/2

The duals replace every integrated polynomial by the Jacobi polynomial that is
orthogonal under the weight left over after the Duffy factor is included.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from hpdual.family import Family, ShapeIndex, paired_integral
from hpdual.orthopoly import integrated_jacobi_eval as ijac
from hpdual.orthopoly import integrated_legendre_eval as ileg
from hpdual.orthopoly import jacobi_eval as jac
from hpdual.refelem import cartesian_to_duffy, reference_element


def h1_indices(element, p: int) -> list[ShapeIndex]:
    """Interior index set in lexicographic order."""
    el = reference_element(element)
    name = el.short_name
    r = range(2, p + 1)
    if el.kind == "quad":
        return [ShapeIndex(name, "u", (i, j)) for i in r for j in r]
    if el.kind == "hex":
        return [ShapeIndex(name, "u", (i, j, k)) for i in r for j in r for k in r]
    if el.kind == "triangle":
        return [ShapeIndex(name, "u", (i, j)) for i in r for j in range(1, p - i + 1)]
    return [ShapeIndex(name, "u", (i, j, k)) for i in r
            for j in range(1, p - i + 1) for k in range(1, p - i - j + 1)]


def check_index(idx: ShapeIndex) -> None:
    ind = idx.indices
    if idx.element in ("quad", "hex"):
        ok = len(ind) == (2 if idx.element == "quad" else 3) and min(ind) >= 2
    elif idx.element == "tri":
        ok = len(ind) == 2 and ind[0] >= 2 and ind[1] >= 1
    elif idx.element == "tet":
        ok = len(ind) == 3 and ind[0] >= 2 and min(ind[1:]) >= 1
    else:
        ok = False
    if not ok:
        raise ValueError(f"invalid H1 interior index {idx}")


def _primal(idx: ShapeIndex, c: np.ndarray) -> np.ndarray:
    ind = idx.indices
    if idx.element in ("quad", "hex"):
        out = np.ones(c.shape[0])
        for d, n in enumerate(ind):
            out = out * ileg(n, c[:, d])
        return out
    if idx.element == "tri":
        i, j = ind
        eta, y = c[:, 0], c[:, 1]
        return ileg(i, eta) * (0.5 * (1 - y)) ** i * ijac(j, 2 * i, y)
    i, j, k = ind
    eta, chi, z = c[:, 0], c[:, 1], c[:, 2]
    s1, s2 = 0.5 * (1 - chi), 0.5 * (1 - z)
    return (ileg(i, eta) * (s1 * s2) ** i * ijac(j, 2 * i, chi) * s2 ** j
            * ijac(k, 2 * i + 2 * j, z))


def _dual(idx: ShapeIndex, c: np.ndarray) -> np.ndarray:
    ind = idx.indices
    if idx.element in ("quad", "hex"):
        out = np.ones(c.shape[0])
        for d, n in enumerate(ind):
            out = out * jac(n - 2, 1, 1, c[:, d])
        return out
    if idx.element == "tri":
        k, l = ind
        eta, y = c[:, 0], c[:, 1]
        return jac(k - 2, 1, 1, eta) * (0.5 * (1 - y)) ** (k - 2) * jac(l - 1, 2 * k - 1, 1, y)
    l, m, n = ind
    eta, chi, z = c[:, 0], c[:, 1], c[:, 2]
    s1, s2 = 0.5 * (1 - chi), 0.5 * (1 - z)
    return (jac(l - 2, 1, 1, eta) * s1 ** (l - 2) * jac(m - 1, 2 * l - 1, 1, chi)
            * s2 ** (l + m - 3) * jac(n - 1, 2 * l + 2 * m - 1, 1, z))


def primal_evaluator(idx: ShapeIndex, collapsed: np.ndarray) -> np.ndarray:
    return _primal(idx, collapsed)


def dual_evaluator(idx: ShapeIndex, collapsed: np.ndarray) -> np.ndarray:
    return _dual(_as_primal(idx), collapsed)


def _as_primal(idx: ShapeIndex) -> ShapeIndex:
    return ShapeIndex(idx.element, "u", idx.indices)


@lru_cache(maxsize=None)
def measured_diagonal(idx: ShapeIndex) -> float:
    """``<u_idx, b_idx>`` for the unnormalized dual, by exact quadrature."""
    idx = _as_primal(idx)
    check_index(idx)
    degree = 2 * max(idx.indices) * len(idx.indices) + 4
    return paired_integral(idx.element, _primal, _dual, idx, idx, degree)


def closed_form_diagonal(idx: ShapeIndex) -> float:
    """``<u_idx, b_idx>`` from the one-dimensional Jacobi norms."""
    ind = idx.indices
    # <L^_n, P_{n-2}^{(1,1)}> = -4 / ((2n-1) n)
    if idx.element in ("quad", "hex"):
        return float(np.prod([-4.0 / ((2 * n - 1) * n) for n in ind]))
    if idx.element == "tri":
        i, j = ind
        return -16.0 / ((2 * i - 1) * i * (2 * j + 2 * i - 1) * (j + 2 * i - 1))
    i, j, k = ind
    return -64.0 / ((2 * i - 1) * i * (2 * j + 2 * i - 1) * (j + 2 * i - 1)
                    * (2 * k + 2 * i + 2 * j - 1) * (k + 2 * i + 2 * j - 1))


def _normalized_dual(idx: ShapeIndex, collapsed: np.ndarray) -> np.ndarray:
    return _dual(_as_primal(idx), collapsed) / measured_diagonal(idx)


def primal_family(element, p: int) -> Family:
    el = reference_element(element)
    return Family(el, "h1", "primal", tuple(h1_indices(el, p)), primal_evaluator, 1, p)


def dual_family(element, p: int, normalized: bool = True) -> Family:
    """Dual functions; ``normalized`` scales each so its Gram diagonal is 1."""
    el = reference_element(element)
    idxs = tuple(ShapeIndex(i.element, "b", i.indices) for i in h1_indices(el, p))
    ev = _normalized_dual if normalized else dual_evaluator
    return Family(el, "h1", "dual" if normalized else "dual-unnormalized", idxs, ev, 1, p)


def _cartesian_call(evaluator, idx: ShapeIndex, point):
    check_index(_as_primal(idx))
    pts = np.asarray(point, dtype=float)
    single = pts.ndim == 1
    c = cartesian_to_duffy(idx.element, np.atleast_2d(pts))
    out = evaluator(idx, c)
    return float(out[0]) if single else out


def h1_primal_eval(idx: ShapeIndex, point):
    """Bubble ``idx`` at Cartesian point(s)."""
    return _cartesian_call(primal_evaluator, idx, point)


def h1_dual_eval(idx: ShapeIndex, point, normalized: bool = False):
    """Dual function ``idx`` at Cartesian point(s)."""
    ev = _normalized_dual if normalized else dual_evaluator
    return _cartesian_call(ev, idx, point)
