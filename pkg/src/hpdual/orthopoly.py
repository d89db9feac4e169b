"""Jacobi, Legendre and integrated Jacobi polynomials on [-1, 1].

All evaluators accept scalars or numpy arrays and broadcast over ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

FAMILIES = ("jacobi", "integrated_jacobi", "legendre", "integrated_legendre")


def _check_weights(alpha: float, beta: float) -> None:
    if alpha <= -1 or beta <= -1:
        raise ValueError(
            f"weight exponents must exceed -1, got alpha={alpha}, beta={beta}")


def _as_float(x):
    arr = np.asarray(x, dtype=float)
    return arr


def jacobi_eval(n: int, alpha: float, beta: float, x):
    """Evaluate :math:`P_n^{(\\alpha,\\beta)}(x)` by the three-term recurrence.

    Normalized so that :math:`P_n^{(\\alpha,\\beta)}(1) = \\binom{n+\\alpha}{n}`.
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    _check_weights(alpha, beta)
    x = _as_float(x)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    ab = alpha + beta
    p = 0.5 * (alpha - beta + (ab + 2.0) * x)
    for k in range(2, n + 1):
        c = 2 * k + ab
        a1 = 2.0 * k * (k + ab) * (c - 2.0)
        a2 = (c - 1.0) * (alpha * alpha - beta * beta)
        a3 = (c - 2.0) * (c - 1.0) * c
        a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c
        p_prev, p = p, ((a2 + a3 * x) * p - a4 * p_prev) / a1
    return p if p.ndim else float(p)


def legendre_eval(n: int, x):
    return jacobi_eval(n, 0.0, 0.0, x)


def _gauss_antiderivative(n: int, alpha: float, x):
    # P_{n-1}^{(alpha,0)} has degree n-1; a ceil(n/2)-point rule on [-1, x] is exact
    rule = gauss_rule(max(1, (n + 1) // 2))
    x = _as_float(x)
    half = 0.5 * (x + 1.0)
    t = -1.0 + half[..., None] * (rule.points + 1.0)
    vals = jacobi_eval(n - 1, alpha, 0.0, t)
    return half * np.sum(vals * rule.weights, axis=-1)


def integrated_jacobi_eval(n: int, alpha: float, x):
    """Evaluate :math:`\\hat P_n^{\\alpha}(x) = \\int_{-1}^x P_{n-1}^{(\\alpha,0)}(t)\\,dt`.

    Uses the closed forms
    ``L^_n(x) = (x^2 - 1) / (2(n-1)) * P_{n-2}^{(1,1)}(x)`` for ``alpha = 0`` and
    ``P^_n^a(x) = (1 + x) / n * P_{n-1}^{(a-1,1)}(x)`` for ``alpha > 0``.
    Note ``P^_1^a(x) = 1 + x``; the value vanishes at ``x = -1`` for every n.
    """
    if n < 1:
        raise ValueError(f"integrated Jacobi polynomials need n >= 1, got {n}")
    _check_weights(alpha, 0.0)
    x = _as_float(x)
    if n == 1:
        out = 1.0 + x
    elif alpha == 0:
        out = (x * x - 1.0) / (2.0 * (n - 1)) * jacobi_eval(n - 2, 1.0, 1.0, x)
    elif alpha > 0:
        out = (1.0 + x) / n * jacobi_eval(n - 1, alpha - 1.0, 1.0, x)
    else:
        out = _gauss_antiderivative(n, alpha, x)
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


def integrated_legendre_eval(n: int, x):
    return integrated_jacobi_eval(n, 0.0, x)


def jacobi_norm(n: int, alpha: float, beta: int = 0) -> float:
    """Exact value of :math:`\\int_{-1}^1 (1-x)^\\alpha (1+x)^\\beta (P_n^{(\\alpha,\\beta)})^2`.

    Only ``beta`` in {0, 1} is supported.
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    _check_weights(alpha, beta)
    if beta == 0:
        return 2.0 ** (alpha + 1) / (2 * n + alpha + 1)
    if beta == 1:
        return 2.0 ** (alpha + 2) / (2 * n + alpha + 2) * (n + 1) / (n + alpha + 1)
    raise ValueError(f"closed-form norm only for beta in {{0, 1}}, got {beta}")


def mixed_legendre_jacobi_integral(i: int, k: int) -> float:
    """:math:`\\int_{-1}^1 L_i(x) P_k^{(1,1)}(x)\\,dx` in closed form."""
    if i < 0 or k < 0:
        raise ValueError("degrees must be nonnegative")
    if k >= i and (k - i) % 2 == 0:
        return 4.0 / (2 + k)
    return 0.0


@dataclass(frozen=True)
class PolynomialSpec:
    """One univariate polynomial from the families used by the shape functions."""

    family: str
    degree: int
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown polynomial family {self.family!r}")
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        _check_weights(self.alpha, self.beta)
        if self.family.startswith("integrated"):
            if self.beta != 0:
                raise ValueError("integrated polynomials have beta = 0")
            if self.degree < 1:
                raise ValueError("integrated polynomials need degree >= 1")
        if self.family.endswith("legendre") and self.alpha != 0:
            raise ValueError("Legendre families have alpha = beta = 0")

    def __call__(self, x):
        if self.family == "jacobi":
            return jacobi_eval(self.degree, self.alpha, self.beta, x)
        if self.family == "legendre":
            return legendre_eval(self.degree, x)
        if self.family == "integrated_jacobi":
            return integrated_jacobi_eval(self.degree, self.alpha, x)
        return integrated_legendre_eval(self.degree, x)


@dataclass(frozen=True, eq=False)
class QuadratureRule1D:
    points: np.ndarray
    weights: np.ndarray
    exactness_degree: int

    def integrate(self, f) -> float:
        return float(np.sum(f(self.points) * self.weights))


def _legendre_and_derivative(n: int, x: np.ndarray):
    p0, p1 = np.ones_like(x), x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    # derivative from the standard identity (1 - x^2) P_n' = n (P_{n-1} - x P_n)
    dp = n * (p0 - x * p1) / (1.0 - x * x)
    return p1, dp


@lru_cache(maxsize=None)
def _gauss_nodes(npts: int):
    if npts == 1:
        return np.array([0.0]), np.array([2.0])
    k = np.arange(1, npts + 1)
    x = np.cos(np.pi * (k - 0.25) / (npts + 0.5))
    for _ in range(100):
        p, dp = _legendre_and_derivative(npts, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    _, dp = _legendre_and_derivative(npts, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # ascending order, exact mirror symmetry
    x = x[::-1]
    w = w[::-1]
    half = npts // 2
    x[npts - half:] = -x[:half][::-1]
    w[npts - half:] = w[:half][::-1]
    if npts % 2:
        x[half] = 0.0
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_rule(npts: int) -> QuadratureRule1D:
    """Gauss-Legendre rule with ``npts`` nodes, exact to degree ``2*npts - 1``."""
    if npts < 1:
        raise ValueError(f"need at least one quadrature point, got {npts}")
    x, w = _gauss_nodes(int(npts))
    return QuadratureRule1D(points=x, weights=w, exactness_degree=2 * npts - 1)


def gauss_rule_for_degree(degree: int) -> QuadratureRule1D:
    return gauss_rule(max(1, math.ceil((degree + 1) / 2)))
