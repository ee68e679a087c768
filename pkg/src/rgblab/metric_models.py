"""Metric families with collar boundary structure and the model catalog.

A collar metric is dx^2/(alpha^2 x^(2 eta)) + h_x / x^(2 beta) on
(0, x_max] x boundary, with eta >= 1, 0 <= beta <= eta.  Charts carry exact
derivative evaluators generated from sympy expressions, so curvature can be
assembled to machine precision; finite differencing remains available as the
cross-validation path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
import sympy as sp

from .quadrature import uniform_circle, gauss_legendre

__all__ = [
    "BoundaryDescriptor",
    "ChartMetric",
    "CollarMetric",
    "CatalogEntry",
    "EvennessReport",
    "circle_boundary",
    "torus3_boundary",
    "sphere3_boundary",
    "chart_from_sympy",
    "collar_to_chart",
    "evenness_check",
    "special_bdf_check",
    "catalog",
    "catalog_names",
]


# ---------------------------------------------------------------------------
# boundary descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryDescriptor:
    """Cross-section of the collar with a product quadrature rule.

    ``nodes`` has shape (N, dim); ``weights`` integrate against the
    coordinate measure (metric volume factors enter separately through the
    induced-volume weights of each level set).
    """

    kind: str
    dim: int
    coord_names: tuple[str, ...]
    nodes: np.ndarray
    weights: np.ndarray
    coord_volume: float
    orders: tuple[int, ...]

    def __post_init__(self):
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")
        total = float(np.sum(self.weights))
        if not np.isclose(total, self.coord_volume, rtol=1e-12, atol=1e-12):
            raise ValueError(f"weights sum to {total}, expected coordinate volume {self.coord_volume}")

    def refined(self, factor: int = 2) -> "BoundaryDescriptor":
        """Same descriptor with all quadrature orders multiplied by factor."""
        builder = _BOUNDARY_BUILDERS[self.kind]
        return builder(*[o * factor for o in self.orders])


def circle_boundary(n: int = 24) -> BoundaryDescriptor:
    nodes, w = uniform_circle(n)
    return BoundaryDescriptor("circle", 1, ("theta",), nodes[:, None], w,
                              2.0 * np.pi, (n,))


def torus3_boundary(n: int = 6) -> BoundaryDescriptor:
    """Flat 3-torus with 2*pi periods, uniform product rule."""
    t, w = uniform_circle(n)
    pts = np.array(list(itertools.product(t, t, t)))
    ws = np.array([w1 * w2 * w3 for w1, w2, w3 in
                   itertools.product(w, w, w)])
    return BoundaryDescriptor("torus3", 3, ("y1", "y2", "y3"), pts, ws,
                              (2.0 * np.pi) ** 3, (n,))


def sphere3_boundary(n_xi: int = 8, n_phi: int = 8) -> BoundaryDescriptor:
    """Round 3-sphere in Hopf-like coordinates (xi, phi1, phi2).

    Metric d xi^2 + cos^2 xi d phi1^2 + sin^2 xi d phi2^2; Gauss-Legendre in
    xi on [0, pi/2], uniform in the two angles.
    """
    xi, wxi = gauss_legendre(n_xi, 0.0, np.pi / 2.0)
    ph, wph = uniform_circle(n_phi)
    pts = np.array([(a, b, c) for a in xi for b in ph for c in ph])
    ws = np.array([wa * wb * wc for wa in wxi for wb in wph for wc in wph])
    return BoundaryDescriptor("sphere3", 3, ("xi", "phi1", "phi2"), pts, ws,
                              (np.pi / 2.0) * (2.0 * np.pi) ** 2, (n_xi, n_phi))


_BOUNDARY_BUILDERS: dict[str, Callable[..., BoundaryDescriptor]] = {
    "circle": circle_boundary,
    "torus3": torus3_boundary,
    "sphere3": sphere3_boundary,
}


# ---------------------------------------------------------------------------
# chart metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChartMetric:
    """Metric in collar coordinates (x, y_1..y_{m-1}) with x at index 0.

    ``g`` maps an (N, m) point array to (N, m, m) component matrices.  When
    present, ``dg`` and ``d2g`` return exact coordinate derivatives indexed
    as dg[n, k, i, j] = d_k g_ij and d2g[n, k, l, i, j] = d_k d_l g_ij.
    """

    dim: int
    g: Callable[[np.ndarray], np.ndarray]
    dg: Callable[[np.ndarray], np.ndarray] | None = None
    d2g: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = ""
    x_min: float = 0.0
    x_max: float = np.inf

    def components(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.dim:
            raise ValueError(f"points have dimension {points.shape[1]}, chart is {self.dim}-dimensional")
        if np.any(points[:, 0] <= self.x_min):
            raise ValueError(f"chart '{self.name}' is only defined for x > {self.x_min}")
        return self.g(points)


def _lambdify_stack(coords: Sequence[sp.Symbol], exprs: list[sp.Expr]) -> Callable:
    """Vectorized evaluator for a flat list of expressions.

    Returns a callable mapping an (N, m) point array to an (N, len(exprs))
    array; constant expressions are broadcast.
    """
    fn = sp.lambdify(list(coords), exprs, modules="numpy", cse=True)

    def evaluate(points: np.ndarray) -> np.ndarray:
        cols = fn(*(points[:, i] for i in range(points.shape[1])))
        n = points.shape[0]
        out = np.empty((n, len(exprs)))
        for j, c in enumerate(cols):
            out[:, j] = c
        return out

    return evaluate


def chart_from_sympy(coords: Sequence[sp.Symbol], g_matrix: sp.Matrix,
                     name: str = "", x_min: float = 0.0,
                     x_max: float = np.inf) -> ChartMetric:
    """Build a ChartMetric with exact first and second derivative evaluators."""
    m = len(coords)
    if g_matrix.shape != (m, m):
        raise ValueError("metric matrix shape does not match coordinates")
    g_exprs = [sp.simplify(g_matrix[i, j]) for i in range(m) for j in range(m)]
    d1_exprs = [sp.diff(g_matrix[i, j], coords[k])
                for k in range(m) for i in range(m) for j in range(m)]
    d2_exprs = [sp.diff(g_matrix[i, j], coords[k], coords[l])
                for k in range(m) for l in range(m)
                for i in range(m) for j in range(m)]
    f_g = _lambdify_stack(coords, g_exprs)
    f_d1 = _lambdify_stack(coords, d1_exprs)
    f_d2 = _lambdify_stack(coords, d2_exprs)

    def g_eval(points: np.ndarray) -> np.ndarray:
        return f_g(points).reshape(-1, m, m)

    def dg_eval(points: np.ndarray) -> np.ndarray:
        return f_d1(points).reshape(-1, m, m, m)

    def d2g_eval(points: np.ndarray) -> np.ndarray:
        return f_d2(points).reshape(-1, m, m, m, m)

    return ChartMetric(dim=m, g=g_eval, dg=dg_eval, d2g=d2g_eval, name=name,
                       x_min=x_min, x_max=x_max)


# ---------------------------------------------------------------------------
# collar metrics
# ---------------------------------------------------------------------------

_X = sp.Symbol("x", positive=True)


@dataclass(frozen=True)
class CollarMetric:
    """The boundary-structured family dx^2/(alpha^2 x^(2 eta)) + h_x/x^(2 beta).

    ``h_expr`` is a sympy matrix in (x, boundary coords); ``alpha_expr`` may
    depend on boundary coordinates only (an x-dependent alpha means the
    boundary defining function is not adapted; ``special_bdf_check`` detects
    this on the chart).
    """

    eta: float
    beta: float
    alpha_expr: sp.Expr
    h_expr: sp.Matrix
    boundary: BoundaryDescriptor
    x_max: float = 1.0
    name: str = ""
    degenerate_h0: bool = False

    def __post_init__(self):
        if self.eta < 1.0:
            raise ValueError("eta must be >= 1")
        if not 0.0 <= self.beta <= self.eta:
            raise ValueError("beta must satisfy 0 <= beta <= eta")
        b = self.boundary.dim
        if self.h_expr.shape != (b, b):
            raise ValueError("h matrix shape does not match boundary dimension")

    @property
    def dim(self) -> int:
        return self.boundary.dim + 1

    def _coords(self) -> list[sp.Symbol]:
        return [_X] + [sp.Symbol(nm) for nm in self.boundary.coord_names]

    def h_eval(self, x: float, ynodes: np.ndarray | None = None) -> np.ndarray:
        """h_x as (N, b, b) matrices on the boundary nodes."""
        if ynodes is None:
            ynodes = self.boundary.nodes
        b = self.boundary.dim
        pts = np.column_stack([np.full(len(ynodes), x), ynodes])
        evaluator = _collar_h_evaluator(self)
        return evaluator(pts).reshape(-1, b, b)

    def alpha_eval(self, ynodes: np.ndarray | None = None) -> np.ndarray:
        if ynodes is None:
            ynodes = self.boundary.nodes
        fn = _collar_alpha_evaluator(self)
        return fn(ynodes)

    def h_series_terms(self, order: int) -> list[np.ndarray]:
        """Taylor coefficients h_k of h_x at x = 0, k = 0..order, on the nodes.

        Exact sympy expansion of the declared evaluator; shape (order+1, N, b, b).
        """
        b = self.boundary.dim
        terms = _collar_series_evaluators(self, order)
        out = []
        for fn in terms:
            out.append(fn(self.boundary.nodes).reshape(-1, b, b))
        return out

    def to_chart(self) -> ChartMetric:
        return collar_to_chart(self)


@lru_cache(maxsize=None)
def _collar_cache_key(cm_id: int):  # pragma: no cover - placeholder for keying
    return cm_id


_EVALUATOR_CACHE: dict = {}


def _collar_h_evaluator(cm: CollarMetric):
    key = ("h", id(cm))
    if key not in _EVALUATOR_CACHE:
        coords = cm._coords()
        b = cm.boundary.dim
        exprs = [cm.h_expr[i, j] for i in range(b) for j in range(b)]
        _EVALUATOR_CACHE[key] = _lambdify_stack(coords, exprs)
    return _EVALUATOR_CACHE[key]


def _collar_alpha_evaluator(cm: CollarMetric):
    key = ("alpha", id(cm))
    if key not in _EVALUATOR_CACHE:
        ysyms = [sp.Symbol(nm) for nm in cm.boundary.coord_names]
        fn = _lambdify_stack(ysyms, [sp.sympify(cm.alpha_expr)])
        _EVALUATOR_CACHE[key] = lambda ynodes: fn(np.atleast_2d(ynodes))[:, 0]
    return _EVALUATOR_CACHE[key]


def _collar_series_evaluators(cm: CollarMetric, order: int):
    key = ("series", id(cm), order)
    if key not in _EVALUATOR_CACHE:
        b = cm.boundary.dim
        ysyms = [sp.Symbol(nm) for nm in cm.boundary.coord_names]
        fns = []
        for k in range(order + 1):
            exprs = []
            for i in range(b):
                for j in range(b):
                    coef = sp.expand(cm.h_expr[i, j]).coeff(_X, k) if k else \
                        sp.expand(cm.h_expr[i, j]).subs(_X, 0)
                    exprs.append(sp.simplify(coef))
            fns.append(_lambdify_stack(ysyms, exprs))
        _EVALUATOR_CACHE[key] = fns
    return _EVALUATOR_CACHE[key]


def collar_to_chart(cm: CollarMetric) -> ChartMetric:
    """Chart components g_xx = 1/(alpha^2 x^(2 eta)), g_yy = h_x / x^(2 beta)."""
    key = ("chart", id(cm))
    if key not in _EVALUATOR_CACHE:
        coords = cm._coords()
        b = cm.boundary.dim
        alpha = sp.sympify(cm.alpha_expr)
        g = sp.zeros(b + 1, b + 1)
        g[0, 0] = 1 / (alpha ** 2 * _X ** sp.nsimplify(2 * cm.eta))
        for i in range(b):
            for j in range(b):
                g[i + 1, j + 1] = cm.h_expr[i, j] / _X ** sp.nsimplify(2 * cm.beta)
        _EVALUATOR_CACHE[key] = chart_from_sympy(coords, g, name=cm.name or "collar",
                                                 x_min=0.0, x_max=cm.x_max)
    return _EVALUATOR_CACHE[key]


# ---------------------------------------------------------------------------
# structural checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EvennessReport:
    status: str                     # "even" | "not-even" | "undetermined"
    offending_k: int | None = None
    max_coeff: float = 0.0


def evenness_check(cm: CollarMetric, ell: int, series_order: int | None = None,
                   tol: float = 1e-12) -> EvennessReport:
    """Even iff every odd-k Taylor term of h_x with k < 2*ell vanishes.

    Only defined for conformally compact collars (eta = beta = 1).
    """
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    if not (cm.eta == 1.0 and cm.beta == 1.0):
        raise ValueError("evenness is defined only for conformally compact metrics (eta = beta = 1)")
    order = series_order if series_order is not None else 2 * ell - 1
    if order < 2 * ell - 1:
        return EvennessReport("undetermined")
    terms = cm.h_series_terms(order)
    for k in range(1, min(2 * ell, order + 1), 2):
        mx = float(np.max(np.abs(terms[k])))
        if mx > tol:
            return EvennessReport("not-even", offending_k=k, max_coeff=mx)
    return EvennessReport("even")


def special_bdf_check(metric: CollarMetric | ChartMetric, eta: float = 1.0,
                      x_samples: Sequence[float] = (1e-3, 1e-2, 1e-1),
                      rtol: float = 1e-8) -> tuple[bool, float]:
    """True iff alpha extracted from g_xx = 1/(alpha^2 x^(2 eta)) is x-independent.

    Returns (is_special, max relative deviation across the x samples).
    """
    if isinstance(metric, CollarMetric):
        if not (metric.eta == 1.0 and metric.beta == 1.0):
            raise ValueError("special bdf check applies to conformally compact metrics only")
        chart = metric.to_chart()
        ynodes = metric.boundary.nodes
    else:
        chart = metric
        ynodes = np.zeros((1, chart.dim - 1)) + 0.5
    alphas = []
    for x in x_samples:
        pts = np.column_stack([np.full(len(ynodes), float(x)), ynodes])
        gxx = chart.components(pts)[:, 0, 0]
        alphas.append(1.0 / (np.sqrt(gxx) * float(x) ** eta))
    alphas = np.array(alphas)
    ref = alphas[0]
    dev = float(np.max(np.abs(alphas - ref[None, :]) / np.abs(ref[None, :])))
    return dev <= rtol, dev


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    """A model geometry with declared topology and expected values.

    chi is declared, never computed.  ``closure`` describes the inner end of
    the coordinate range: "pole" (the chart closes smoothly at x_top, e.g. the
    center of a disc), "geodesic-edge" (an honest totally geodesic boundary
    circle/torus whose transgression vanishes identically), or "closed"
    (no boundary at all; x sweeps pole to pole).
    """

    name: str
    dim: int
    chi: int
    chart: ChartMetric
    boundary: BoundaryDescriptor
    collar: CollarMetric | None
    x_top: float
    closure: str
    bulk_exponents: tuple[float, ...]
    boundary_exponents: tuple[float, ...]
    log_powers: int = 0
    tolerance: float = 1e-4
    expected: dict = field(default_factory=dict)
    exploratory: bool = False
    chi_leg: bool = True
    notes: str = ""
    bulk_boundary_override: BoundaryDescriptor | None = None

    @property
    def is_closed(self) -> bool:
        return self.closure == "closed"

    @property
    def bulk_boundary(self) -> BoundaryDescriptor:
        """Cross-section rule for bulk sweeps (leaner product rules in m = 4)."""
        return self.bulk_boundary_override or self.boundary


def _collar_entry(name, eta, beta, h_expr, boundary, x_top, closure, chi,
                  bulk_exponents, boundary_exponents, **kw) -> CatalogEntry:
    cm = CollarMetric(eta=eta, beta=beta, alpha_expr=sp.Integer(1),
                      h_expr=h_expr, boundary=boundary,
                      x_max=min(1.0, x_top), name=name,
                      degenerate_h0=kw.pop("degenerate_h0", False))
    chart = cm.to_chart()
    chart = replace(chart, x_max=x_top)
    return CatalogEntry(name=name, dim=boundary.dim + 1, chi=chi, chart=chart,
                        boundary=boundary, collar=cm, x_top=x_top,
                        closure=closure, bulk_exponents=bulk_exponents,
                        boundary_exponents=boundary_exponents, **kw)


def _sphere3_h(scale: sp.Expr) -> sp.Matrix:
    xi = sp.Symbol("xi")
    return sp.Matrix([[scale, 0, 0],
                      [0, scale * sp.cos(xi) ** 2, 0],
                      [0, 0, scale * sp.sin(xi) ** 2]])


@lru_cache(maxsize=None)
def _build_catalog() -> dict[str, CatalogEntry]:
    th = sp.Symbol("theta")
    psi, xi = sp.Symbol("x", positive=True), sp.Symbol("xi")
    entries: list[CatalogEntry] = []

    # closed calibration spheres; the sweep coordinate is the polar angle
    s2 = chart_from_sympy([psi, th],
                          sp.Matrix([[1, 0], [0, sp.sin(psi) ** 2]]),
                          name="round-sphere-2", x_max=np.pi)
    entries.append(CatalogEntry(
        name="round-sphere-2", dim=2, chi=2, chart=s2,
        boundary=circle_boundary(24), collar=None, x_top=np.pi,
        closure="closed", bulk_exponents=(0.0,), boundary_exponents=(0.0,),
        tolerance=1e-6, expected={"constant_curvature": 1.0, "volume": 4 * np.pi},
        notes="unit round 2-sphere in polar coordinates; calibration entry"))

    ph1, ph2 = sp.Symbol("phi1"), sp.Symbol("phi2")
    s4 = chart_from_sympy(
        [psi, xi, ph1, ph2],
        sp.diag(1, sp.sin(psi) ** 2,
                sp.sin(psi) ** 2 * sp.cos(xi) ** 2,
                sp.sin(psi) ** 2 * sp.sin(xi) ** 2),
        name="round-sphere-4", x_max=np.pi)
    entries.append(CatalogEntry(
        name="round-sphere-4", dim=4, chi=2, chart=s4,
        boundary=sphere3_boundary(8, 6), collar=None, x_top=np.pi,
        closure="closed", bulk_exponents=(0.0,), boundary_exponents=(0.0,),
        tolerance=1e-5,
        expected={"constant_curvature": 1.0, "volume": 8 * np.pi ** 2 / 3},
        notes="unit round 4-sphere; calibration entry"))

    # conformally compact surfaces written with a special bdf (x = 2 e^{-t})
    disc_h = sp.Matrix([[(1 - _X ** 2 / 4) ** 2]])
    entries.append(_collar_entry(
        "hyperbolic-disc", 1.0, 1.0, disc_h, circle_boundary(24), 2.0, "pole", 1,
        bulk_exponents=(-1.0, 0.0, 1.0, 2.0),
        boundary_exponents=(-1.0, 0.0, 1.0, 2.0),
        tolerance=1e-4,
        expected={"constant_curvature": -1.0, "renormalized_volume": -2 * np.pi,
                  "fp_transgression": 0.0},
        notes="Poincare disc; curvature -1, renormalized area -2*pi"))

    funnel_h = sp.Matrix([[(1 + _X ** 2 / 4) ** 2]])
    entries.append(_collar_entry(
        "hyperbolic-funnel", 1.0, 1.0, funnel_h, circle_boundary(24), 2.0,
        "geodesic-edge", 0,
        bulk_exponents=(-1.0, 0.0, 1.0, 2.0),
        boundary_exponents=(-1.0, 0.0, 1.0, 2.0),
        tolerance=1e-4,
        expected={"constant_curvature": -1.0, "renormalized_volume": 0.0,
                  "fp_transgression": 0.0},
        notes="half funnel over a geodesic waist circle; renormalized area 0"))

    pert = (1 + _X ** 2 / 4 + _X ** 3 * (2 - _X) ** 2 / 100) ** 2
    entries.append(_collar_entry(
        "perturbed-funnel", 1.0, 1.0, sp.Matrix([[pert]]), circle_boundary(24),
        2.0, "geodesic-edge", 0,
        bulk_exponents=(-1.0, 0.0, 1.0, 2.0, 3.0, 4.0),
        boundary_exponents=(-1.0, 0.0, 1.0, 2.0, 3.0, 4.0),
        tolerance=1e-4, exploratory=True,
        expected={},
        notes="odd x^3 term breaks evenness; boundary finite part reported, "
              "no closed prediction"))

    entries.append(_collar_entry(
        "b-cylinder", 1.0, 0.0, sp.Matrix([[sp.Integer(1)]]),
        circle_boundary(24), 1.0, "geodesic-edge", 0,
        bulk_exponents=(0.0, 1.0), boundary_exponents=(0.0, 1.0),
        log_powers=1, tolerance=1e-6,
        expected={"constant_curvature": 0.0, "fp_transgression": 0.0},
        notes="flat product cylinder; volume sweep carries the log(1/eps) term"))

    cusp_h = sp.Matrix([[_X ** 2 / (1 + _X ** 2 / 4) ** 2]])
    entries.append(_collar_entry(
        "cusp", 1.0, 0.0, cusp_h, circle_boundary(24), 2.0, "geodesic-edge", 0,
        bulk_exponents=(0.0, 1.0, 2.0, 3.0, 4.0, 5.0),
        boundary_exponents=(0.0, 1.0, 2.0, 3.0, 4.0, 5.0),
        tolerance=1e-6, degenerate_h0=True,
        expected={"fp_transgression": 0.0},
        notes="fiber metric x^2 dtheta^2 (times an even profile closing the "
              "surface over a geodesic waist); h(0) degenerate, model path skipped"))

    entries.append(_collar_entry(
        "scattering-plane", 2.0, 1.0, sp.Matrix([[sp.Integer(1)]]),
        circle_boundary(24), np.inf, "pole", 1,
        bulk_exponents=(-2.0, -1.0, 0.0, 1.0),
        boundary_exponents=(-1.0, 0.0, 1.0),
        tolerance=1e-6,
        expected={"constant_curvature": 0.0, "fp_transgression": 1.0},
        notes="radially compactified flat plane (x = 1/r)"))

    entries.append(_collar_entry(
        "scattering-r4", 2.0, 1.0, _sphere3_h(sp.Integer(1)),
        sphere3_boundary(8, 8), np.inf, "pole", 1,
        bulk_exponents=(-4.0, -3.0, -2.0, -1.0, 0.0, 1.0),
        boundary_exponents=(-1.0, 0.0, 1.0),
        tolerance=1e-3,
        expected={"constant_curvature": 0.0, "fp_transgression": 1.0},
        notes="radially compactified flat R^4 with round S^3 cross-section",
        bulk_boundary_override=sphere3_boundary(6, 4)))

    ball4_h = _sphere3_h((1 - _X ** 2 / 4) ** 2)
    entries.append(_collar_entry(
        "hyperbolic-ball-4", 1.0, 1.0, ball4_h, sphere3_boundary(8, 6), 2.0,
        "pole", 1,
        bulk_exponents=(-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0),
        boundary_exponents=(-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0),
        tolerance=1e-3,
        expected={"constant_curvature": -1.0,
                  "renormalized_volume": 4 * np.pi ** 2 / 3,
                  "fp_transgression": 0.0},
        notes="hyperbolic 4-ball; renormalized volume 4*pi^2/3",
        bulk_boundary_override=sphere3_boundary(6, 4)))

    # truncated cone over the flat 3-torus: the two-leg scattering comparison
    # runs on it, the Euler-characteristic leg does not (the cone is cut off
    # at x = 1 rather than closed).  fp_transgression frozen from the
    # brute-force oracle: -vol(T^3)/(4 pi^2) = -2 pi for 2*pi periods.
    entries.append(_collar_entry(
        "scattering-t3", 2.0, 1.0, sp.eye(3), torus3_boundary(4), 1.0,
        "geodesic-edge", 0,
        bulk_exponents=(-4.0, -2.0, 0.0, 1.0),
        boundary_exponents=(-1.0, 0.0, 1.0),
        tolerance=1e-6, exploratory=True, chi_leg=False,
        expected={"fp_transgression": -2.0 * np.pi},
        notes="cone over the flat torus, truncated at x = 1; expected finite "
              "part frozen from the permutation-sum oracle"))

    return {e.name: e for e in entries}


def catalog_names() -> list[str]:
    return list(_build_catalog().keys())


def catalog(name: str) -> CatalogEntry:
    entries = _build_catalog()
    if name not in entries:
        known = ", ".join(entries)
        raise KeyError(f"unknown catalog entry '{name}'; available: {known}")
    return entries[name]
