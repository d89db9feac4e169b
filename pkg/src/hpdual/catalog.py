"""Lookup of primal and dual families by (element, space, p)."""

from __future__ import annotations

from dataclasses import dataclass

from hpdual import h1, hcurl
from hpdual.family import Family
from hpdual.refelem import reference_element

SUPPORTED = {
    ("quad", "h1"), ("hex", "h1"), ("tri", "h1"), ("tet", "h1"),
    ("quad", "hcurl"), ("tri", "hcurl"), ("tet", "hcurl"),
}
WHICH = ("dual", "aux", "basis")


@dataclass(frozen=True)
class FamilySpec:
    element: str
    space: str
    p: int

    def __post_init__(self):
        name = reference_element(self.element).short_name
        object.__setattr__(self, "element", name)
        if (name, self.space) not in SUPPORTED:
            raise ValueError(f"unsupported family: {self.space} on {name}")
        if self.p < 2:
            raise ValueError(f"polynomial degree must be at least 2, got {self.p}")

    def __str__(self) -> str:
        return f"{self.element}/{self.space}/p={self.p}"


def primal_family(spec: FamilySpec) -> Family:
    if spec.space == "h1":
        return h1.primal_family(spec.element, spec.p)
    return hcurl.primal_family(spec.element, spec.p)


def dual_family(spec: FamilySpec, mode: str = "oracle") -> Family:
    """Recombined duals; paper mode uses the printed constants unchanged."""
    if spec.space == "h1":
        return h1.dual_family(spec.element, spec.p, normalized=(mode == "oracle"))
    return hcurl.dual_family(spec.element, spec.p, mode)


def gram_families(spec: FamilySpec, which: str = "dual", mode: str = "oracle"):
    """Row and column families for one of the Gram matrices of interest.

    ``dual``: basis against recombined duals. ``aux``: split fields against
    auxiliary duals. ``basis``: basis against auxiliary duals. For H1 the last
    two both pair the bubbles with the unnormalized duals.
    """
    if which not in WHICH:
        raise ValueError(f"unknown Gram selection {which!r}")
    if which == "dual":
        return primal_family(spec), dual_family(spec, mode)
    if spec.space == "h1":
        return primal_family(spec), h1.dual_family(spec.element, spec.p, normalized=False)
    cols = hcurl.dual_aux_family(spec.element, spec.p)
    if which == "aux":
        return hcurl.aux_family(spec.element, spec.p), cols
    return primal_family(spec), cols
