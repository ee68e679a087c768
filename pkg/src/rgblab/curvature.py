"""Curvature and second fundamental forms of chart and collar metrics.

Two routes are implemented and cross-validated everywhere:

* the chart route differentiates the metric components (exact evaluators when
  the chart carries them, order-4 central differences otherwise) and
  assembles Christoffel symbols, the Riemann tensor, and level-set second
  fundamental forms in an orthonormal frame;
* the model route evaluates the closed collar comparison formulas
  S = x^(eta-1) (x*Sbar + alpha*beta*gbar) and
  R_tan = x^(2 beta) Rbar - x^(2 eta) Sbar^2/2
          - x^(2 eta - 1) alpha beta Sbar*gbar
          - x^(2 eta - 2) alpha^2 beta^2 gbar^2/2
  on the barred reference frame of gbar = dx^2/alpha^2 + h_x.

Sign conventions (pinned by the sphere calibration): the curvature double
form satisfies R((e1,e2),(e1,e2)) = +1 on the unit round sphere, and level-set
normals point in the +x direction, into the truncated region {x >= eps}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

import sympy as sp

from .double_forms import DoubleForm, from_dense
from .metric_models import BoundaryDescriptor, ChartMetric, CollarMetric

__all__ = [
    "GeometrySample",
    "metric_jets",
    "christoffel",
    "christoffel_batch",
    "riemann",
    "riemann_frame_batch",
    "orthonormal_frames",
    "sff_level_set",
    "sff_level_set_batch",
    "sff_model",
    "sff_model_batch",
    "curvature_model",
    "curvature_model_batch",
    "induced_boundary_data",
    "pair_product_11",
    "boundary_curvature_frame",
    "riemann_invariance_errors",
]


# ---------------------------------------------------------------------------
# metric jets: values + first/second derivatives at point batches
# ---------------------------------------------------------------------------

def _fd_first(chart: ChartMetric, points: np.ndarray, steps: np.ndarray) -> np.ndarray:
    m = chart.dim
    n = len(points)
    out = np.empty((n, m, m, m))
    for k in range(m):
        h = steps[:, k]
        shifts = []
        for c in (-2.0, -1.0, 1.0, 2.0):
            p = points.copy()
            p[:, k] += c * h
            shifts.append(chart.components(p))
        fm2, fm1, fp1, fp2 = shifts
        out[:, k] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)[:, None, None]
    return out


def _fd_second(chart: ChartMetric, points: np.ndarray, steps: np.ndarray) -> np.ndarray:
    # second derivatives as first differences of the first-difference field;
    # order-4 stencils survive the composition at desk scale
    m = chart.dim
    n = len(points)
    out = np.empty((n, m, m, m, m))
    for k in range(m):
        h = steps[:, k]
        shifts = []
        for c in (-2.0, -1.0, 1.0, 2.0):
            p = points.copy()
            p[:, k] += c * h
            shifts.append(_fd_first(chart, p, steps))
        fm2, fm1, fp1, fp2 = shifts
        out[:, k] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)[:, None, None, None]
    return out


def _fd_steps(points: np.ndarray, boundary_rel: float = 1e-3,
              interior_abs: float = 1e-4) -> np.ndarray:
    """Steps scaled to the collapsing coordinate: h_x = x * rel, h_y = abs."""
    n, m = points.shape
    steps = np.full((n, m), interior_abs)
    steps[:, 0] = np.abs(points[:, 0]) * boundary_rel
    return steps


def metric_jets(chart: ChartMetric, points: np.ndarray,
                force_fd: bool = False) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(g, dg, d2g) with dg[n,k,i,j] = d_k g_ij, d2g[n,k,l,i,j] = d_k d_l g_ij."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    g = chart.components(points)
    if chart.dg is not None and chart.d2g is not None and not force_fd:
        return g, chart.dg(points), chart.d2g(points)
    steps = _fd_steps(points)
    return g, _fd_first(chart, points, steps), _fd_second(chart, points, steps)


# ---------------------------------------------------------------------------
# Christoffel symbols and Riemann curvature
# ---------------------------------------------------------------------------

def christoffel_batch(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """Gamma[n,k,i,j] = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)."""
    dets = np.linalg.det(g)
    if np.any(~np.isfinite(dets)) or np.any(dets <= 0.0):
        conds = np.linalg.cond(g)
        worst = float(np.max(conds[np.isfinite(conds)], initial=np.inf))
        raise ValueError(f"singular metric matrix in Christoffel assembly (condition number {worst:.3e})")
    ginv = np.linalg.inv(g)
    # bracket[n,i,j,l] = d_i g_jl + d_j g_il - d_l g_ij, from dg[n,k,i,j] = d_k g_ij
    bracket = (dg
               + np.einsum("njil->nijl", dg)
               - np.einsum("nlij->nijl", dg))
    return 0.5 * np.einsum("nkl,nijl->nkij", ginv, bracket)


def christoffel(chart: ChartMetric, point, step: float | None = None) -> np.ndarray:
    """Christoffel symbols Gamma^k_ij at a single point (array [k, i, j]).

    Uses exact derivative evaluators when the chart has them; otherwise
    order-4 central differences with the given step (x-scaled by default).
    """
    pts = np.atleast_2d(np.asarray(point, dtype=float))
    if step is not None:
        g = chart.components(pts)
        steps = np.full_like(pts, step)
        dg = _fd_first(chart, pts, steps)
    else:
        g, dg, _ = metric_jets(chart, pts)
    return christoffel_batch(g, dg)[0]


def _riemann_lowered(g: np.ndarray, dg: np.ndarray, d2g: np.ndarray) -> np.ndarray:
    """R[n,i,j,c,d] = <R(d_i, d_j) d_d, d_c> in coordinates."""
    ginv = np.linalg.inv(g)
    gamma = christoffel_batch(g, dg)
    # dG[n,h,k,i,j] = d_h Gamma^k_ij; derivative of ginv is -ginv dg ginv
    dginv = -np.einsum("nka,nhab,nbl->nhkl", ginv, dg, ginv, optimize=True)
    bracket = (dg
               + np.einsum("njil->nijl", dg)
               - np.einsum("nlij->nijl", dg))
    # dbracket[n,h,i,j,l] = d_h(bracket[i,j,l]); d2g[n,a,b,c,d] = d_a d_b g_cd
    dbracket = (d2g
                + np.einsum("nhjil->nhijl", d2g)
                - np.einsum("nhlij->nhijl", d2g))
    dG = 0.5 * (np.einsum("nhkl,nijl->nhkij", dginv, bracket, optimize=True)
                + np.einsum("nkl,nhijl->nhkij", ginv, dbracket, optimize=True))
    gamma_sq = np.einsum("nlis,nsjk->nlijk", gamma, gamma, optimize=True)
    # R^l_{ijk} = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_is Gamma^s_jk - Gamma^l_js Gamma^s_ik
    R_l_ijk = (np.einsum("niljk->nlijk", dG)
               - np.einsum("njlik->nlijk", dG)
               + gamma_sq
               - gamma_sq.transpose(0, 1, 3, 2, 4))
    # lower: R[n,i,j,c,d] = g_{cs} R^s_{ijd}
    return np.einsum("ncs,nsijd->nijcd", g, R_l_ijk, optimize=True)


def orthonormal_frames(g: np.ndarray, order: list[int]) -> np.ndarray:
    """Gram-Schmidt frames F[n, a, i] from coordinate vectors in the given order.

    The first len(order)-1 vectors span the directions of order[:-1]; the last
    one is orthogonal to them with a positive component along order[-1].
    """
    n, m, _ = g.shape
    frames = np.zeros((n, m, m))
    for a, idx in enumerate(order):
        v = np.zeros((n, m))
        v[:, idx] = 1.0
        for b in range(a):
            u = frames[:, b]
            proj = np.einsum("ni,nij,nj->n", v, g, u)
            v = v - proj[:, None] * u
        norm2 = np.einsum("ni,nij,nj->n", v, g, v)
        if np.any(norm2 <= 0):
            raise ValueError("degenerate metric in frame construction")
        frames[:, a] = v / np.sqrt(norm2)[:, None]
    return frames


_LEVEL_ORDER_CACHE: dict[int, list[int]] = {}


def _level_order(m: int) -> list[int]:
    # tangent coordinate directions first, the collar coordinate last
    if m not in _LEVEL_ORDER_CACHE:
        _LEVEL_ORDER_CACHE[m] = list(range(1, m)) + [0]
    return _LEVEL_ORDER_CACHE[m]


def riemann_frame_batch(chart: ChartMetric, points: np.ndarray,
                        force_fd: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Curvature double-form values on the orthonormal frame.

    Returns (R, frames) with R[n,a,b,c,d] = R((X_a, X_b), (X_c, X_d)); the
    frame lists tangent directions first and the x-aligned vector last.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    g, dg, d2g = metric_jets(chart, points, force_fd=force_fd)
    R_low = _riemann_lowered(g, dg, d2g)
    frames = orthonormal_frames(g, _level_order(chart.dim))
    R = _frame_values_22(R_low, frames)
    return R, frames


def _frame_values_22(R_low: np.ndarray, frames: np.ndarray) -> np.ndarray:
    # chained contractions keep this O(m^5) per point
    t = np.einsum("nai,nijkl->najkl", frames, R_low, optimize=True)
    t = np.einsum("nbj,najkl->nabkl", frames, t, optimize=True)
    t = np.einsum("nck,nabkl->nabcl", frames, t, optimize=True)
    return np.einsum("ndl,nabcl->nabcd", frames, t, optimize=True)


def riemann(chart: ChartMetric, point, force_fd: bool = False) -> DoubleForm:
    """Curvature at a single point as a (2, 2) double form on the frame."""
    R, _ = riemann_frame_batch(chart, np.atleast_2d(point), force_fd=force_fd)
    return from_dense(R[0], 2, 2)


def riemann_invariance_errors(R: np.ndarray) -> dict[str, float]:
    """Max violations of antisymmetry, pair exchange, and the first Bianchi identity."""
    scale = float(np.max(np.abs(R))) or 1.0
    anti1 = np.max(np.abs(R + R.transpose(0, 2, 1, 3, 4)))
    anti2 = np.max(np.abs(R + R.transpose(0, 1, 2, 4, 3)))
    pair = np.max(np.abs(R - R.transpose(0, 3, 4, 1, 2)))
    # <R(Xa,Xb)Xd, Xc> + <R(Xb,Xd)Xa, Xc> + <R(Xd,Xa)Xb, Xc> = 0
    bianchi = np.max(np.abs(R + R.transpose(0, 2, 4, 3, 1) + R.transpose(0, 4, 1, 3, 2)))
    return {"antisym_first": float(anti1) / scale,
            "antisym_second": float(anti2) / scale,
            "pair_exchange": float(pair) / scale,
            "bianchi": float(bianchi) / scale,
            "scale": scale}


# ---------------------------------------------------------------------------
# level sets: second fundamental form and induced volume
# ---------------------------------------------------------------------------

def _level_points(eps: float, ynodes: np.ndarray) -> np.ndarray:
    ynodes = np.atleast_2d(ynodes)
    return np.column_stack([np.full(len(ynodes), float(eps)), ynodes])


def sff_level_set_batch(chart: ChartMetric, eps: float, ynodes: np.ndarray,
                        force_fd: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Second fundamental form of {x = eps} on the tangent orthonormal frame.

    S[a, b] = g(nabla_{T_a} T_b, nu) with nu the unit normal along +x,
    pointing into {x >= eps}.  Returns (S, frames).
    """
    if eps <= chart.x_min:
        raise ValueError("level must lie inside the chart")
    points = _level_points(eps, ynodes)
    g, dg, _ = metric_jets(chart, points, force_fd=force_fd)
    gamma = christoffel_batch(g, dg)
    frames = orthonormal_frames(g, _level_order(chart.dim))
    tangents = frames[:, :-1, :]          # tangent rows have no x-component
    nu = frames[:, -1, :]
    # S_ab = T_a^i T_b^j Gamma^k_ij g_kl nu^l
    nu_low = np.einsum("nkl,nl->nk", g, nu)
    S = np.einsum("nai,nbj,nkij,nk->nab", tangents, tangents, gamma, nu_low)
    induced = np.einsum("nai,nij,nbj->nab", tangents, g, tangents)
    if np.any(np.abs(induced - np.eye(chart.dim - 1)) > 1e-8):
        raise ValueError("tangent frame failed orthonormality check")
    return S, frames


def sff_level_set(chart: ChartMetric, eps: float, y, force_fd: bool = False) -> DoubleForm:
    S, _ = sff_level_set_batch(chart, eps, np.atleast_2d(y), force_fd=force_fd)
    return from_dense(S[0], 1, 1)


def induced_boundary_data(chart: ChartMetric, eps: float,
                          boundary: BoundaryDescriptor) -> tuple[np.ndarray, np.ndarray]:
    """Per-node induced volume density sqrt(det g_yy) and tangent frames."""
    points = _level_points(eps, boundary.nodes)
    g = chart.components(points)
    gyy = g[:, 1:, 1:]
    det = np.linalg.det(gyy)
    if np.any(det <= 0):
        raise ValueError("degenerate induced metric on the level set")
    frames = orthonormal_frames(g, _level_order(chart.dim))
    return np.sqrt(det), frames


# ---------------------------------------------------------------------------
# model route: barred reference data and the comparison formulas
# ---------------------------------------------------------------------------

def _barred_data(cm: CollarMetric, eps: float, ynodes: np.ndarray):
    """(Sbar, alpha) on the h_x-orthonormal frame at the level x = eps.

    Sbar_ab = -(alpha/2) * (E^T h' E)_ab where E columns are h-orthonormal;
    the normal of the reference metric gbar = dx^2/alpha^2 + h_x is alpha*d_x.
    """
    b = cm.boundary.dim
    h = cm.h_eval(eps, ynodes)
    # dh/dx by exact chart derivatives of the collar chart: g_yy = h / x^(2 beta)
    chart = cm.to_chart()
    pts = _level_points(eps, ynodes)
    dgyy = chart.dg(pts)[:, 0, 1:, 1:]     # d_x (h x^(-2 beta))
    x = float(eps)
    dh = (dgyy + 2.0 * cm.beta * x ** (-2.0 * cm.beta - 1.0) * h) * x ** (2.0 * cm.beta)
    # h-orthonormal basis E via Cholesky of h = L L^T: E = (L^T)^{-1}
    L = np.linalg.cholesky(h)
    E = np.linalg.inv(np.transpose(L, (0, 2, 1)))
    alpha = cm.alpha_eval(ynodes)
    Sbar = -0.5 * alpha[:, None, None] * np.einsum("nia,nij,njb->nab", E, dh, E)
    return Sbar, alpha, E


def pair_product_11(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Shuffle product of two (1,1) forms as (2,2) frame values.

    (a*b)[(i,j),(k,l)] = a_ik b_jl - a_il b_jk - a_jk b_il + a_jl b_ik.
    """
    t = np.einsum("nik,njl->nijkl", a, b)
    return (t - t.transpose(0, 1, 2, 4, 3) - t.transpose(0, 2, 1, 3, 4)
            + t.transpose(0, 2, 1, 4, 3))


def sff_model_batch(cm: CollarMetric, eps: float, ynodes: np.ndarray | None = None) -> np.ndarray:
    """Phi = x^(eta-1) (x*Sbar + alpha*beta*gbar) on the barred frame."""
    if cm.degenerate_h0 and eps <= 0:
        raise ValueError("model route undefined at the degenerate boundary")
    if ynodes is None:
        ynodes = cm.boundary.nodes
    Sbar, alpha, _ = _barred_data(cm, eps, ynodes)
    x = float(eps)
    b = cm.boundary.dim
    eye = np.broadcast_to(np.eye(b), Sbar.shape)
    return x ** (cm.eta - 1.0) * (x * Sbar + cm.beta * alpha[:, None, None] * eye)


def sff_model(cm: CollarMetric, eps: float, y) -> DoubleForm:
    S = sff_model_batch(cm, eps, np.atleast_2d(y))
    return from_dense(S[0], 1, 1)


def boundary_curvature_frame(cm: CollarMetric, eps: float,
                             ynodes: np.ndarray | None = None) -> np.ndarray:
    """Intrinsic curvature of (boundary, h_eps) on the h-orthonormal frame."""
    if ynodes is None:
        ynodes = cm.boundary.nodes
    chart_b = _boundary_chart(cm)
    pts = np.column_stack([np.full(len(np.atleast_2d(ynodes)), float(eps)),
                           np.atleast_2d(ynodes)])
    b = cm.boundary.dim
    if b == 1:
        return np.zeros((len(pts), 1, 1, 1, 1))
    g = chart_b.g(pts)
    dg = chart_b.dg(pts)
    d2g = chart_b.d2g(pts)
    R_low = _riemann_lowered(g, dg, d2g)
    frames = orthonormal_frames(g, list(range(b)))
    return _frame_values_22(R_low, frames)


_BOUNDARY_CHART_CACHE: dict[int, object] = {}


def _boundary_chart(cm: CollarMetric):
    """Evaluators for h_x as a boundary-coordinate metric with x as parameter.

    Presented as callables taking points (x, y...) so the same jet code
    applies; derivatives are taken in the boundary coordinates only.
    """
    if id(cm) in _BOUNDARY_CHART_CACHE:
        return _BOUNDARY_CHART_CACHE[id(cm)]
    x = sp.Symbol("x", positive=True)
    ys = [sp.Symbol(nm) for nm in cm.boundary.coord_names]
    coords = [x] + ys
    b = cm.boundary.dim
    from .metric_models import _lambdify_stack  # shared helper

    g_exprs = [cm.h_expr[i, j] for i in range(b) for j in range(b)]
    d1 = [sp.diff(cm.h_expr[i, j], ys[k])
          for k in range(b) for i in range(b) for j in range(b)]
    d2 = [sp.diff(cm.h_expr[i, j], ys[k], ys[l])
          for k in range(b) for l in range(b) for i in range(b) for j in range(b)]
    f_g = _lambdify_stack(coords, g_exprs)
    f_d1 = _lambdify_stack(coords, d1)
    f_d2 = _lambdify_stack(coords, d2)

    class _BChart:
        def g(self, pts):
            return f_g(pts).reshape(-1, b, b)

        def dg(self, pts):
            return f_d1(pts).reshape(-1, b, b, b)

        def d2g(self, pts):
            return f_d2(pts).reshape(-1, b, b, b, b)

    _BOUNDARY_CHART_CACHE[id(cm)] = _BChart()
    return _BOUNDARY_CHART_CACHE[id(cm)]


def curvature_model_batch(cm: CollarMetric, eps: float,
                          ynodes: np.ndarray | None = None) -> np.ndarray:
    """Tangential curvature from the collar comparison formula, barred frame."""
    if ynodes is None:
        ynodes = cm.boundary.nodes
    Sbar, alpha, _ = _barred_data(cm, eps, ynodes)
    Rbar = boundary_curvature_frame(cm, eps, ynodes)
    x = float(eps)
    b = cm.boundary.dim
    eye = np.broadcast_to(np.eye(b), Sbar.shape).copy()
    ab = cm.beta * alpha[:, None, None]
    gg = pair_product_11(eye, eye)
    sg = 0.5 * (pair_product_11(Sbar, eye) + pair_product_11(eye, Sbar))
    ss = pair_product_11(Sbar, Sbar)
    return (x ** (2.0 * cm.beta) * Rbar
            - x ** (2.0 * cm.eta) * 0.5 * ss
            - x ** (2.0 * cm.eta - 1.0) * ab[..., None, None] * sg
            - x ** (2.0 * cm.eta - 2.0) * (ab ** 2)[..., None, None] * 0.5 * gg)


def curvature_model(cm: CollarMetric, eps: float, y) -> DoubleForm:
    R = curvature_model_batch(cm, eps, np.atleast_2d(y))
    return from_dense(R[0], 2, 2)


# ---------------------------------------------------------------------------
# assembled per-point sample
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeometrySample:
    """Curvature data of one level-set point in the adapted orthonormal frame."""

    point: tuple
    frame: np.ndarray
    R: DoubleForm
    R_boundary: DoubleForm
    S: DoubleForm
    dvol_boundary: float


def geometry_sample(chart: ChartMetric, eps: float, y,
                    force_fd: bool = False) -> GeometrySample:
    """Assemble curvature, induced-boundary curvature (via the Gauss equation),
    the second fundamental form, and the induced volume weight at (eps, y)."""
    y = np.atleast_2d(y)
    pts = _level_points(eps, y)
    R, frames = riemann_frame_batch(chart, pts, force_fd=force_fd)
    S, _ = sff_level_set_batch(chart, eps, y, force_fd=force_fd)
    m = chart.dim
    Rt = R[:, :m - 1, :m - 1, :m - 1, :m - 1]
    Rb = Rt + 0.5 * pair_product_11(S, S)
    g = chart.components(pts)
    det = float(np.linalg.det(g[0, 1:, 1:]))
    return GeometrySample(point=(float(eps),) + tuple(np.ravel(y)),
                          frame=frames[0],
                          R=from_dense(R[0], 2, 2),
                          R_boundary=from_dense(Rb[0], 2, 2),
                          S=from_dense(S[0], 1, 1),
                          dvol_boundary=np.sqrt(det))
