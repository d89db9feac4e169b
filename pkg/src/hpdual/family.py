"""Shape-function labels and evaluable families of shape functions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from hpdual.refelem import ReferenceElement, element_quadrature, reference_element


@dataclass(frozen=True, order=True)
class ShapeIndex:
    """One shape function: element, type tag and multi-index.

    Tags: ``u``/``b`` for H1 primal/dual; ``I``..``IV`` for H(curl) primal
    types; ``auxI``..``auxIII`` for the split fields; ``B``/``C``/``D`` for
    the auxiliary duals; ``bI``..``bIV`` for the recombined duals.
    """

    element: str
    tag: str
    indices: tuple

    def __str__(self) -> str:
        return f"{self.element}/{self.tag}/{','.join(map(str, self.indices))}"

    @property
    def degree(self) -> int:
        return int(sum(self.indices))


Evaluator = Callable[[ShapeIndex, np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class Family:
    """An ordered set of shape functions sharing one evaluator.

    ``evaluator(index, collapsed)`` returns ``(npts,)`` for scalar families and
    ``(npts, dim)`` for vector families, evaluated at collapsed coordinates.
    """

    element: ReferenceElement
    space: str
    name: str
    indices: tuple
    evaluator: Evaluator
    ncomp: int
    degree: int

    def __len__(self) -> int:
        return len(self.indices)

    def position(self, index: ShapeIndex) -> int:
        return self._positions[index]

    @property
    def _positions(self) -> dict:
        cached = self.__dict__.get("_pos")
        if cached is None:
            cached = {idx: k for k, idx in enumerate(self.indices)}
            object.__setattr__(self, "_pos", cached)
        return cached

    def evaluate(self, collapsed) -> np.ndarray:
        """Values at collapsed points, shape ``(nfun, npts, ncomp)``."""
        collapsed = np.asarray(collapsed, dtype=float)
        out = np.empty((len(self.indices), collapsed.shape[0], self.ncomp))
        for k, idx in enumerate(self.indices):
            out[k] = np.asarray(self.evaluator(idx, collapsed)).reshape(
                collapsed.shape[0], self.ncomp)
        return out

    def subset(self, indices, name: str | None = None) -> "Family":
        return Family(self.element, self.space, name or self.name, tuple(indices),
                      self.evaluator, self.ncomp, self.degree)


def combine(terms: dict, base: Evaluator) -> Evaluator:
    """Evaluator for linear combinations ``index -> [(coef, base_index), ...]``."""

    def evaluate(idx: ShapeIndex, collapsed: np.ndarray) -> np.ndarray:
        total = None
        for coef, sub in terms[idx]:
            val = coef * np.asarray(base(sub, collapsed))
            total = val if total is None else total + val
        return total

    return evaluate


def paired_integral(element, f: Evaluator, g: Evaluator, fi: ShapeIndex,
                    gi: ShapeIndex, degree: int) -> float:
    """L2 pairing of two single shape functions by element quadrature."""
    quad = element_quadrature(reference_element(element), degree)
    a = np.asarray(f(fi, quad.collapsed))
    b = np.asarray(g(gi, quad.collapsed))
    prod = a * b if a.ndim == 1 else np.sum(a * b, axis=-1)
    return float(np.sum(prod * quad.weights))
