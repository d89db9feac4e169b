"""Diagonal constants and recombination coefficients: measured vs closed forms.

Three numbers are compared for each diagonal pairing:

* ``measured``: the pairing integrated by quadrature,
* ``printed``: the closed form as published with the construction (``None``
  where nothing is published),
* ``derived``: a closed form re-derived from the one-dimensional Jacobi norms.

Recombination coefficients are compared the same way: the published values
against the ones obtained from measured diagonals.
"""

from __future__ import annotations

from dataclasses import dataclass

from hpdual import h1, hcurl
from hpdual.family import ShapeIndex

REL_TOL = 1e-11


def classify(ratio: float | None, tol: float = REL_TOL) -> str:
    """``match``, ``sign`` (equal up to sign), ``factor <r>`` or ``not published``."""
    if ratio is None:
        return "not published"
    if abs(ratio - 1.0) <= tol:
        return "match"
    if abs(ratio + 1.0) <= tol:
        return "sign"
    return f"factor {ratio:.17g}"


def printed_diagonal(idx: ShapeIndex) -> float | None:
    """Published value of ``<split field, auxiliary dual>`` (``None`` if absent)."""
    name, tag, ind = idx.element, idx.tag, idx.indices
    if name == "quad":
        i, j = ind
        if tag == "auxI" and i >= 2:
            return 1.0 / hcurl.paper_alphas(name, ind)["alpha_ji"]
        if tag == "auxII" and j >= 2:
            return 1.0 / hcurl.paper_alphas(name, ind)["alpha_ij"]
        return None
    if name == "tri":
        i, j = ind
        if tag == "auxI":
            return 8.0 / ((2 * i - 1) * (2 * j + 2 * i - 1) * (j + 2 * i - 1))
        if tag == "auxII":
            return 16.0 / ((2 * i - 1) * (2 * j + 2 * i - 1))
        return 1.0 / hcurl.paper_alphas(name, ind)["alpha3"]
    i, j, k = ind
    a, b, c = 2 * i + 2 * j - 1, j + 2 * i - 1, 2 * k + 2 * i + 2 * j - 1
    d = k + 2 * i + 2 * j - 1
    if tag == "auxI":
        return 2.0 ** 7 / ((2 * i - 1) * a * b * c * d)
    if tag == "auxII":
        return 2.0 ** 6 / ((2 * i - 1) * a * c * d)
    if tag == "auxIII":
        return 2.0 ** 6 / ((2 * i - 1) * i * a * b * c)
    return 1.0 / hcurl.paper_alphas(name, ind)["alpha4"]


def derived_diagonal(idx: ShapeIndex) -> float:
    """Re-derived closed form of the same pairing."""
    name, tag, ind = idx.element, idx.tag, idx.indices
    if tag == "u":
        return h1.closed_form_diagonal(idx)
    if name == "quad":
        i, j = ind
        if tag == "auxI" or (tag == "III" and i == 1):
            return -8.0 / ((2 * i - 1) * (2 * j - 1) * j)
        # the y-directed edge-type field is the negated split field
        sign = 1.0 if tag == "III" else -1.0
        return sign * 8.0 / ((2 * i - 1) * i * (2 * j - 1))
    if name == "tri":
        i, j = ind
        if tag == "auxI":
            return 8.0 / ((2 * i - 1) * (2 * j + 2 * i - 1) * (j + 2 * i - 1))
        if tag == "auxII":
            return 16.0 / ((2 * i - 1) * (2 * j + 2 * i - 1))
        return 2.0 / ((j + 1) * (j + 2))
    i, j, k = ind
    if tag == "IV":
        return 32.0 / ((2 * j + 2) * (j + 2) * (k + 2 * j + 2) * (2 * k + 2 * j + 2))
    a, b, c = 2 * i + 2 * j - 1, j + 2 * i - 1, 2 * k + 2 * i + 2 * j - 1
    d = k + 2 * i + 2 * j - 1
    if tag == "auxI":
        return 32.0 / ((2 * i - 1) * a * b * c * d)
    if tag == "auxII":
        return 64.0 / ((2 * i - 1) * a * c * d)
    return -32.0 / ((2 * i - 1) * i * a * b * c)


def measured_diagonal(idx: ShapeIndex) -> float:
    if idx.tag == "u":
        return h1.measured_diagonal(idx)
    return hcurl.measured_aux_diagonal(idx)


@dataclass(frozen=True)
class DiagonalRow:
    index: ShapeIndex
    measured: float
    printed: float | None
    derived: float

    @property
    def ratio(self) -> float | None:
        return None if self.printed is None else self.measured / self.printed

    @property
    def status(self) -> str:
        return classify(self.ratio)


def diagonal_table(element: str, space: str, p: int) -> list[DiagonalRow]:
    """One row per diagonal pairing of the (auxiliary) Gram matrix."""
    if space == "h1":
        idxs = h1.h1_indices(element, p)
        return [DiagonalRow(i, measured_diagonal(i), None, derived_diagonal(i))
                for i in idxs]
    return [DiagonalRow(i, measured_diagonal(i), printed_diagonal(i), derived_diagonal(i))
            for i in hcurl.aux_indices(element, p)]


@dataclass(frozen=True)
class CoefficientRow:
    index: ShapeIndex
    quantity: str
    paper: float | None
    oracle: float

    @property
    def ratio(self) -> float | None:
        if self.paper is None:
            return None
        if self.oracle == 0.0:
            return 1.0 if self.paper == 0.0 else float("inf")
        return self.paper / self.oracle

    @property
    def status(self) -> str:
        return classify(self.ratio)

    def value(self, mode: str) -> float | None:
        return self.paper if mode == "paper" else self.oracle


# published alpha name -> the split field whose diagonal it inverts
_ALPHA_SOURCE = {
    "quad": {"alpha_ij": "auxII", "alpha_ji": "auxI"},
    "tri": {"alpha1": "auxI", "alpha1_proof": "auxI", "alpha2": "auxII"},
    "tet": {"alpha1": "auxI", "alpha2": "auxII", "alpha3": "auxIII"},
}
_EDGE_ALPHA = {"tri": "alpha3", "tet": "alpha4"}


def coefficient_table(element: str, space: str, p: int) -> list[CoefficientRow]:
    """Published recombination coefficients next to the measured ones.

    ``alpha`` rows compare each published alpha with the inverse measured
    diagonal it stands for. ``mix`` rows compare every coefficient of the
    published dual combinations with the solved mixing matrix.
    """
    if space == "h1":
        # no scaling is published for the H1 duals; report the oracle one
        return [CoefficientRow(i, "scale", None, 1.0 / h1.measured_diagonal(i))
                for i in h1.h1_indices(element, p)]
    name = element
    rows = []
    for ind in hcurl._interior(name, p):
        alphas = hcurl.paper_alphas(name, ind)
        for key, tag in _ALPHA_SOURCE[name].items():
            d = hcurl.measured_aux_diagonal(ShapeIndex(name, tag, ind))
            rows.append(CoefficientRow(ShapeIndex(name, tag, ind), key, alphas[key], 1.0 / d))
        for tag in hcurl.PRIMAL_TAGS[name][:-1]:
            idx = ShapeIndex(name, "b" + tag, ind)
            paper = dict((s.tag, c) for c, s in hcurl.dual_terms(idx, "paper"))
            oracle = dict((s.tag, c) for c, s in hcurl.dual_terms(idx, "oracle"))
            for aux in hcurl.DUAL_AUX_TAGS[name]:
                rows.append(CoefficientRow(idx, f"mix {aux}", paper.get(aux, 0.0),
                                           oracle.get(aux, 0.0)))
    for ind in hcurl._edge(name, p):
        idx = ShapeIndex(name, hcurl.EDGE_TYPE[name], ind)
        d = hcurl.measured_aux_diagonal(idx)
        paper = (hcurl.paper_alphas(name, ind)[_EDGE_ALPHA[name]]
                 if name in _EDGE_ALPHA else None)
        rows.append(CoefficientRow(idx, _EDGE_ALPHA.get(name, "scale"), paper, 1.0 / d))
    return rows
