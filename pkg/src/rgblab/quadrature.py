"""Quadrature rules: uniform trigonometric rules on circles/tori, product
Gauss-Legendre rules, and log-substituted rules for collar integrals."""

from __future__ import annotations

import numpy as np

__all__ = [
    "gauss_legendre",
    "uniform_circle",
    "log_segment_nodes",
    "inverse_tail_nodes",
]


def gauss_legendre(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def uniform_circle(n: int, period: float = 2.0 * np.pi) -> tuple[np.ndarray, np.ndarray]:
    """Uniform rule on [0, period); exact for trig polynomials of degree < n."""
    nodes = period * (np.arange(n) + 0.5) / n
    weights = np.full(n, period / n)
    return nodes, weights


def log_segment_nodes(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for int_a^b f(x) dx via t = log x (0 < a < b).

    Weights already include the dx = x dt Jacobian.
    """
    if not 0.0 < a < b:
        raise ValueError("log substitution needs 0 < a < b")
    t, wt = gauss_legendre(n, np.log(a), np.log(b))
    x = np.exp(t)
    return x, wt * x


def inverse_tail_nodes(a: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for int_a^inf f(x) dx via u = 1/x.

    Valid for integrands decaying at least like x^-2 at infinity; weights
    include the du Jacobian 1/u^2.
    """
    if a <= 0:
        raise ValueError("tail start must be positive")
    u, wu = gauss_legendre(n, 0.0, 1.0 / a)
    x = 1.0 / u
    return x, wu * x * x
