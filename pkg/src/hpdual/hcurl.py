"""Interior H(curl) shape functions, their split fields and dual functions.

Type I fields are gradients of the H1 bubbles. Each bubble is a product of
factors (``f g`` on the triangle, ``f g h`` on the tetrahedron, two integrated
Legendre factors on the quad); the split fields put the gradient on one factor
only, and types II/III flip the sign of one split field. The auxiliary duals
``B``, ``C``, ``D`` pair with exactly one split field each; the duals of the
actual basis are recombined from them with :func:`hpdual.biorth.solve_recombination`.

Quad type III fields carry the indices ``(1, i)`` (x-directed, the split field
with ``i = 1``) and ``(i, 1)`` (y-directed, sign flipped).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from hpdual.biorth import solve_recombination
from hpdual.family import Family, ShapeIndex, combine, paired_integral
from hpdual.orthopoly import integrated_jacobi_eval as ijac
from hpdual.orthopoly import integrated_legendre_eval as ileg
from hpdual.orthopoly import jacobi_eval as jac
from hpdual.orthopoly import legendre_eval as leg
from hpdual.refelem import cartesian_to_duffy, reference_element

PRIMAL_TAGS = {"quad": ("I", "II", "III"), "tri": ("I", "II", "III"),
               "tet": ("I", "II", "III", "IV")}
AUX_TAGS = {"quad": ("auxI", "auxII"), "tri": ("auxI", "auxII"),
            "tet": ("auxI", "auxII", "auxIII")}
DUAL_AUX_TAGS = {"quad": ("B", "C"), "tri": ("B", "C"), "tet": ("B", "C", "D")}
MIXING = {
    "quad": np.array([[1.0, 1.0], [1.0, -1.0]]),
    "tri": np.array([[1.0, 1.0], [1.0, -1.0]]),
    "tet": np.array([[1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [1.0, 1.0, -1.0]]),
}
# the primal type whose dual is a rescaled B with first index 1
EDGE_TYPE = {"quad": "III", "tri": "III", "tet": "IV"}
MODES = ("oracle", "paper")


def _short(element) -> str:
    return reference_element(element).short_name


def _check_element(name: str) -> None:
    if name not in PRIMAL_TAGS:
        raise ValueError(f"H(curl) functions are not defined on {name!r}")


# ---------------------------------------------------------------- index sets

def primal_indices(element, p: int) -> list[ShapeIndex]:
    name = _short(element)
    _check_element(name)
    out = []
    for tag in PRIMAL_TAGS[name][:-1]:
        out += [ShapeIndex(name, tag, ind) for ind in _interior(name, p)]
    out += [ShapeIndex(name, EDGE_TYPE[name], ind) for ind in _edge(name, p)]
    return out


def aux_indices(element, p: int) -> list[ShapeIndex]:
    """Split fields, followed by the edge-type fields for a square system."""
    name = _short(element)
    _check_element(name)
    if name == "quad":
        r = range(2, p + 1)
        return ([ShapeIndex(name, "auxI", (i, j)) for i in range(1, p + 1) for j in r]
                + [ShapeIndex(name, "auxII", (i, j)) for i in r for j in range(1, p + 1)])
    out = []
    for tag in AUX_TAGS[name]:
        out += [ShapeIndex(name, tag, ind) for ind in _interior(name, p)]
    out += [ShapeIndex(name, EDGE_TYPE[name], ind) for ind in _edge(name, p)]
    return out


def dual_aux_indices(element, p: int) -> list[ShapeIndex]:
    """Auxiliary duals aligned with :func:`aux_indices`."""
    name = _short(element)
    return [_aux_partner(idx) for idx in aux_indices(name, p)]


def dual_indices(element, p: int) -> list[ShapeIndex]:
    return [ShapeIndex(i.element, "b" + i.tag, i.indices)
            for i in primal_indices(element, p)]


def _interior(name: str, p: int):
    r = range(2, p + 1)
    if name == "quad":
        return [(i, j) for i in r for j in r]
    if name == "tri":
        return [(i, j) for i in r for j in range(1, p - i + 1)]
    return [(i, j, k) for i in r for j in range(1, p - i + 1)
            for k in range(1, p - i - j + 1)]


def _edge(name: str, p: int):
    if name == "quad":
        return [(1, i) for i in range(2, p + 1)] + [(i, 1) for i in range(2, p + 1)]
    if name == "tri":
        return [(1, j) for j in range(1, p)]
    return [(1, j, k) for j in range(1, p) for k in range(1, p - j)]


def _aux_partner(idx: ShapeIndex) -> ShapeIndex:
    """Auxiliary dual paired with a split or edge-type field."""
    name, tag = idx.element, idx.tag
    if tag in AUX_TAGS[name]:
        return ShapeIndex(name, DUAL_AUX_TAGS[name][AUX_TAGS[name].index(tag)],
                          idx.indices)
    if name == "quad" and tag == "III":
        return ShapeIndex(name, "B" if idx.indices[0] == 1 else "C", idx.indices)
    if tag == EDGE_TYPE[name]:
        return ShapeIndex(name, "B", idx.indices)
    raise ValueError(f"{idx} has no auxiliary partner")


def check_index(idx: ShapeIndex) -> None:
    name, ind = idx.element, idx.indices
    tag = idx.tag[1:] if idx.tag.startswith("b") else idx.tag
    _check_element(name)
    dim = 3 if name == "tet" else 2
    ok = len(ind) == dim and min(ind) >= 1
    if ok and name == "quad":
        i, j = ind
        ok = {
            "I": i >= 2 and j >= 2, "II": i >= 2 and j >= 2,
            "III": (i == 1 and j >= 2) or (j == 1 and i >= 2),
            "auxI": j >= 2, "B": j >= 2, "auxII": i >= 2, "C": i >= 2,
        }.get(tag, False)
    elif ok:
        first = ind[0]
        ok = {
            "I": first >= 2, "II": first >= 2, "III": first >= 2 if name == "tet" else first == 1,
            "IV": name == "tet" and first == 1,
            "auxI": first >= 2, "auxII": first >= 2, "auxIII": name == "tet" and first >= 2,
            "B": True, "C": first >= 2, "D": name == "tet" and first >= 2,
        }.get(tag, False)
    if not ok:
        raise ValueError(f"invalid H(curl) index {idx}")


# ------------------------------------------------------- factor polynomials

def q_polynomial(kind: str, l: int, m: int, chi):
    """The two chi-polynomials of the third tetrahedral dual.

    ``Qm1 = P_{m-1}^{(2l-1,1)} + m/(2l+m-1) P_{m-1}^{(2l,0)}`` (degree m-1) and
    ``Qm2 = -chi/2 P_{m-1}^{(2l-1,1)} + m/(2l+m-1) (1-chi)/2 P_{m-1}^{(2l,0)}`` (degree m).
    """
    if l < 1 or m < 1:
        raise ValueError("Q-polynomials need l >= 1 and m >= 1")
    chi = np.asarray(chi, dtype=float)
    c = m / (2 * l + m - 1)
    if kind == "Qm1":
        out = jac(m - 1, 2 * l - 1, 1, chi) + c * jac(m - 1, 2 * l, 0, chi)
    elif kind == "Qm2":
        out = (-0.5 * chi * jac(m - 1, 2 * l - 1, 1, chi)
               + c * 0.5 * (1 - chi) * jac(m - 1, 2 * l, 0, chi))
    else:
        raise ValueError(f"unknown Q-polynomial {kind!r}")
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


def _grad_f_tri(i, eta, s):
    if i == 1:
        # lowest-order Nedelec field of the edge y = -1
        return np.stack([0.5 * s, 0.25 * s * eta], axis=-1)
    w = s ** (i - 1)
    return np.stack([leg(i - 1, eta) * w, 0.5 * leg(i - 2, eta) * w], axis=-1)


def _grad_f_tet(i, eta, s1, s2):
    if i == 1:
        # twice the lowest-order Nedelec field of the edge from vertex 1 to 2
        w = s1 * s2
        return np.stack([w, 0.5 * eta * w, 0.25 * eta * w], axis=-1)
    w = (s1 * s2) ** (i - 1)
    low = leg(i - 2, eta) * w
    return np.stack([leg(i - 1, eta) * w, 0.5 * low, 0.25 * low], axis=-1)


def _grad_g_tet(i, j, chi, s2):
    pj = jac(j - 1, 2 * i, 0, chi)
    w = s2 ** (j - 1)
    third = 0.5 * chi * pj - 0.5 * j * ijac(j, 2 * i, chi)
    return np.stack([np.zeros_like(chi), pj * w, third * w], axis=-1)


def _zeros(n):
    return np.zeros(n)


# ----------------------------------------------------------------- primal

def _split_quad(tag, i, j, x, y):
    if tag == "auxI":
        return np.stack([leg(i - 1, x) * ileg(j, y), _zeros(x.size)], axis=-1)
    return np.stack([_zeros(x.size), ileg(i, x) * leg(j - 1, y)], axis=-1)


def _split_tri(tag, i, j, eta, y):
    s = 0.5 * (1 - y)
    if tag == "auxI":
        return _grad_f_tri(i, eta, s) * ijac(j, 2 * i, y)[:, None]
    f = ileg(i, eta) * s ** i
    return np.stack([_zeros(y.size), f * jac(j - 1, 2 * i, 0, y)], axis=-1)


def _split_tet(tag, i, j, k, eta, chi, z):
    s1, s2 = 0.5 * (1 - chi), 0.5 * (1 - z)
    if tag == "auxI":
        g = ijac(j, 2 * i, chi) * s2 ** j
        return _grad_f_tet(i, eta, s1, s2) * (g * ijac(k, 2 * i + 2 * j, z))[:, None]
    f = ileg(i, eta) * (s1 * s2) ** i
    if tag == "auxII":
        return _grad_g_tet(i, j, chi, s2) * (f * ijac(k, 2 * i + 2 * j, z))[:, None]
    g = ijac(j, 2 * i, chi) * s2 ** j
    dh = jac(k - 1, 2 * i + 2 * j, 0, z)
    return np.stack([_zeros(z.size), _zeros(z.size), f * g * dh], axis=-1)


def _split(name, tag, ind, c):
    if name == "quad":
        return _split_quad(tag, *ind, c[:, 0], c[:, 1])
    if name == "tri":
        return _split_tri(tag, *ind, c[:, 0], c[:, 1])
    return _split_tet(tag, *ind, c[:, 0], c[:, 1], c[:, 2])


def aux_evaluator(idx: ShapeIndex, c: np.ndarray) -> np.ndarray:
    if idx.tag in AUX_TAGS[idx.element]:
        return _split(idx.element, idx.tag, idx.indices, c)
    return primal_evaluator(idx, c)


def primal_evaluator(idx: ShapeIndex, c: np.ndarray) -> np.ndarray:
    name, tag, ind = idx.element, idx.tag, idx.indices
    if tag in ("I", "II", "III") and not (tag == "III" and name != "tet"):
        signs = MIXING[name][PRIMAL_TAGS[name].index(tag)]
        out = None
        for sign, aux in zip(signs, AUX_TAGS[name]):
            term = sign * _split(name, aux, ind, c)
            out = term if out is None else out + term
        return out
    if name == "quad":
        if ind[0] == 1:
            return _split(name, "auxI", ind, c)
        return -_split(name, "auxII", ind, c)
    if name == "tri":
        eta, y = c[:, 0], c[:, 1]
        return _grad_f_tri(1, eta, 0.5 * (1 - y)) * ijac(ind[1], 3, y)[:, None]
    _, j, k = ind
    eta, chi, z = c[:, 0], c[:, 1], c[:, 2]
    s1, s2 = 0.5 * (1 - chi), 0.5 * (1 - z)
    scal = ijac(j, 3, chi) * s2 ** j * ijac(k, 2 * j + 3, z)
    return _grad_f_tet(1, eta, s1, s2) * scal[:, None]


# ------------------------------------------------------- auxiliary duals

def _dual_aux_quad(tag, k, l, x, y):
    if tag == "B":
        return np.stack([leg(k - 1, x) * jac(l - 2, 1, 1, y), _zeros(x.size)], axis=-1)
    return np.stack([_zeros(x.size), jac(k - 2, 1, 1, x) * leg(l - 1, y)], axis=-1)


def _dual_aux_tri(tag, k, l, eta, y):
    s = 0.5 * (1 - y)
    if tag == "B":
        if k == 1:
            first = jac(l - 1, 2, 1, y)
        else:
            first = leg(k - 1, eta) * s ** (k - 1) * jac(l - 1, 2 * k - 1, 1, y)
        return np.stack([first, _zeros(y.size)], axis=-1)
    common = s ** (k - 1) * jac(l - 1, 2 * k, 0, y)
    return np.stack([(k + 1) * jac(k - 1, 1, 1, eta) * common,
                     -2 * k * jac(k - 2, 1, 1, eta) * common], axis=-1)


def _dual_aux_tet(tag, l, m, n, eta, chi, z):
    s1, s2 = 0.5 * (1 - chi), 0.5 * (1 - z)
    zero = _zeros(z.size)
    if tag == "B":
        if l == 1:
            first = jac(m - 1, 2, 1, chi) * s2 ** (m - 1) * jac(n - 1, 2 * m + 2, 1, z)
        else:
            first = (leg(l - 1, eta) * s1 ** (l - 1) * jac(m - 1, 2 * l - 1, 1, chi)
                     * s2 ** (l + m - 2) * jac(n - 1, 2 * l + 2 * m - 1, 1, z))
        return np.stack([first, zero, zero], axis=-1)
    if tag == "C":
        common = (s1 ** (l - 1) * jac(m - 1, 2 * l, 0, chi) * s2 ** (l + m - 2)
                  * jac(n - 1, 2 * l + 2 * m - 1, 1, z))
        return np.stack([(l + 1) * jac(l - 1, 1, 1, eta) * common,
                         -2 * l * jac(l - 2, 1, 1, eta) * common, zero], axis=-1)
    zpart = s2 ** (l + m - 2) * jac(n - 1, 2 * l + 2 * m, 0, z)
    p_hi = jac(l - 1, 1, 1, eta)
    p_lo = jac(l - 2, 1, 1, eta) * s1 ** (l - 2)
    return np.stack([
        -(l + 1) / (2 * l) * p_hi * s1 ** (l - 1) * q_polynomial("Qm1", l, m, chi) * zpart,
        p_lo * q_polynomial("Qm2", l, m, chi) * zpart,
        p_lo * jac(m - 1, 2 * l - 1, 1, chi) * zpart,
    ], axis=-1)


def dual_aux_evaluator(idx: ShapeIndex, c: np.ndarray) -> np.ndarray:
    name, tag, ind = idx.element, idx.tag, idx.indices
    if name == "quad":
        return _dual_aux_quad(tag, *ind, c[:, 0], c[:, 1])
    if name == "tri":
        return _dual_aux_tri(tag, *ind, c[:, 0], c[:, 1])
    return _dual_aux_tet(tag, *ind, c[:, 0], c[:, 1], c[:, 2])


# ------------------------------------------------- diagonals and recombination

@lru_cache(maxsize=None)
def measured_aux_diagonal(idx: ShapeIndex) -> float:
    """``<field_idx, partner_idx>`` for a split or edge-type field, by quadrature."""
    check_index(idx)
    partner = _aux_partner(idx)
    degree = 2 * (idx.degree + 2) + 4
    if idx.element == "quad":
        degree = 2 * (max(idx.indices) + 1) + 4
    return paired_integral(idx.element, aux_evaluator, dual_aux_evaluator,
                           idx, partner, degree)


def paper_alphas(name: str, ind: tuple) -> dict:
    """Recombination coefficients exactly as printed for the index ``ind``."""
    if name == "quad":
        i, j = ind
        return {"alpha_ij": i * (2 * i - 1) * (2 * j - 1) / 8,
                "alpha_ji": j * (2 * j - 1) * (2 * i - 1) / 8}
    if name == "tri":
        i, j = ind
        return {"alpha1": (2 * i - 1) * (2 * j + 2 * i - 1) * (j + 2 * i - 1) / 8,
                "alpha1_proof": (2 * i - 1) * (2 * j - 2 * i - 1) * (j + 2 * i - 1) / 8,
                "alpha2": (2 * i - 1) * (2 * j + 2 * i - 1) / 16,
                "alpha3": (2 * j + 2) * (j + 2) / 16}
    l, m, n = ind
    return {
        "alpha1": (2 * l - 1) * (2 * m + 2 * l - 1) * (m + 2 * l - 1)
        * (2 * n + 2 * l + 2 * m - 1) * (n + 2 * l + 2 * m - 1) / 2 ** 7,
        "alpha2": (2 * l - 1) * (2 * m + 2 * l - 1) * (2 * n + 2 * l + 2 * m - 1)
        * (n + 2 * l + 2 * m - 1) / 2 ** 6,
        "alpha3": -l * (2 * l - 1) * (2 * m + 2 * l - 1) * (m + 2 * l - 1)
        * (2 * n + 2 * l + 2 * m - 1) / 2 ** 5,
        "alpha4": (2 * m + 2) * (m + 2) * (n + 2 * m + 2) * (2 * n + 2 * m + 2) / 2 ** 5,
    }


def recombination(name: str, ind: tuple):
    """Measured aux diagonals and the solved mixing for one interior index."""
    aux = [ShapeIndex(name, t, ind) for t in AUX_TAGS[name]]
    D = [measured_aux_diagonal(a) for a in aux]
    return solve_recombination(MIXING[name], D, label=f"{name} {ind}")


def dual_terms(idx: ShapeIndex, mode: str = "oracle") -> list:
    """``[(coefficient, auxiliary dual index), ...]`` defining dual ``idx``."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    name, ind = idx.element, idx.indices
    tag = idx.tag.removeprefix("b")
    prim = ShapeIndex(name, tag, ind)
    check_index(prim)
    if tag == EDGE_TYPE[name]:
        partner = _aux_partner(prim)
        if mode == "oracle":
            return [(1.0 / measured_aux_diagonal(prim), partner)]
        if name == "quad":
            return [(1.0, partner)]
        key = "alpha3" if name == "tri" else "alpha4"
        return [(paper_alphas(name, ind)[key], partner)]
    partners = [ShapeIndex(name, t, ind) for t in DUAL_AUX_TAGS[name]]
    row = PRIMAL_TAGS[name].index(tag)
    if mode == "oracle":
        coefs = recombination(name, ind).B[row].copy()
        # entries that vanish exactly in the inverse come out as roundoff
        coefs[np.abs(coefs) <= 1e-13 * np.abs(coefs).max()] = 0.0
    else:
        coefs = _paper_row(name, ind, row)
    return [(float(c), s) for c, s in zip(coefs, partners) if c != 0]


def _paper_row(name, ind, row):
    a = paper_alphas(name, ind)
    if name == "quad":
        return [(a["alpha_ij"], -a["alpha_ji"]), (a["alpha_ij"], a["alpha_ji"])][row]
    if name == "tri":
        return [(-a["alpha1"] / 2, -a["alpha2"] / 2), (a["alpha1"] / 2, -a["alpha2"] / 2)][row]
    return [(0.0, a["alpha2"] / 2, a["alpha3"] / 2),
            (a["alpha1"] / 2, -a["alpha2"] / 2, 0.0),
            (a["alpha1"] / 2, 0.0, -a["alpha3"] / 2)][row]


@lru_cache(maxsize=None)
def _cached_terms(idx: ShapeIndex, mode: str) -> tuple:
    return tuple(dual_terms(idx, mode))


def _dual_evaluator(mode: str):
    def evaluate(idx: ShapeIndex, c: np.ndarray) -> np.ndarray:
        total = None
        for coef, sub in _cached_terms(idx, mode):
            val = coef * dual_aux_evaluator(sub, c)
            total = val if total is None else total + val
        return total
    return evaluate


# ------------------------------------------------------------- families

def _family(element, name, indices, evaluator, p):
    el = reference_element(element)
    return Family(el, "hcurl", name, tuple(indices), evaluator, el.dim, p)


def primal_family(element, p: int) -> Family:
    return _family(element, "primal", primal_indices(element, p), primal_evaluator, p)


def aux_family(element, p: int) -> Family:
    return _family(element, "aux", aux_indices(element, p), aux_evaluator, p)


def dual_aux_family(element, p: int) -> Family:
    return _family(element, "dual-aux", dual_aux_indices(element, p),
                   dual_aux_evaluator, p)


def dual_family(element, p: int, mode: str = "oracle") -> Family:
    """Recombined duals; ``mode="oracle"`` normalizes from measured diagonals."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    return _family(element, f"dual-{mode}", dual_indices(element, p),
                   _dual_evaluator(mode), p)


def combination_family(element, p: int, terms: dict, name: str) -> Family:
    """Family of explicit linear combinations of auxiliary duals."""
    return _family(element, name, tuple(terms), combine(terms, dual_aux_evaluator), p)


# ------------------------------------------------- Cartesian entry points

def _cartesian_call(evaluator, idx, point):
    pts = np.asarray(point, dtype=float)
    single = pts.ndim == 1
    c = cartesian_to_duffy(idx.element, np.atleast_2d(pts))
    out = evaluator(idx, c)
    return out[0] if single else out


def hcurl_primal_eval(idx: ShapeIndex, point):
    check_index(idx)
    if idx.tag not in PRIMAL_TAGS[idx.element]:
        raise ValueError(f"{idx} is not a primal H(curl) index")
    return _cartesian_call(primal_evaluator, idx, point)


def hcurl_aux_eval(idx: ShapeIndex, point):
    """Split field, or an edge-type field (these complete the auxiliary system)."""
    check_index(idx)
    if idx.tag not in AUX_TAGS[idx.element] and idx.tag != EDGE_TYPE[idx.element]:
        raise ValueError(f"{idx} is not a split-field index")
    return _cartesian_call(aux_evaluator, idx, point)


def hcurl_dual_aux_eval(idx: ShapeIndex, point):
    check_index(idx)
    if idx.tag not in DUAL_AUX_TAGS[idx.element]:
        raise ValueError(f"{idx} is not an auxiliary dual index")
    return _cartesian_call(dual_aux_evaluator, idx, point)


def hcurl_dual_eval(idx: ShapeIndex, point, mode: str = "oracle"):
    """Recombined dual of primal type ``idx.tag`` (``I``.. or ``bI``..)."""
    tag = idx.tag if idx.tag.startswith("b") else "b" + idx.tag
    didx = ShapeIndex(idx.element, tag, idx.indices)
    return _cartesian_call(_dual_evaluator(mode), didx, point)
