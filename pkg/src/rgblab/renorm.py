"""Finite-part extraction of divergent integrals over collar geometries.

Two renormalization schemes are implemented independently and compared:

* the epsilon scheme fits the truncated integral V(eps) = int_{x >= eps} mu
  to a power/log basis and reads off the coefficient of eps^0;
* the zeta scheme fits the level function f(x) = d/dx of the same integral on
  the collar, integrates each basis term against x^z in closed form, takes
  the z^0 Laurent coefficient at z = 0, and adds the plain integral over the
  interior piece {x >= delta}.

A term x^(-1) log^p x produces a pole at z = 0 in the zeta scheme and an
eps^0 log eps term in the epsilon scheme; both paths flag it, since the two
finite parts are then normalization-sensitive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .metric_models import BoundaryDescriptor, CatalogEntry, ChartMetric
from .quadrature import gauss_legendre, inverse_tail_nodes, log_segment_nodes

__all__ = [
    "IndexSet",
    "PhgSeries",
    "RenormResult",
    "SweepResult",
    "fit_phg",
    "finite_part_eps",
    "finite_part_zeta",
    "zeta_term_finite_part",
    "sweep_boundary",
    "sweep_bulk",
    "bulk_integral",
    "boundary_integral",
    "renormalized_integral",
    "renormalized_boundary_integral",
    "DEFAULT_GRID",
]

DEFAULT_GRID = (1e-4, 1e-1, 24)
COND_LIMIT = 1e10
LOG_FLAG_TOL = 1e-7


# ---------------------------------------------------------------------------
# index sets and fitted series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndexSet:
    """Exponent/log-power pairs allowed in an expansion sum a x^s log^p x.

    Closure under (s, p) -> (s+1, p) and (s, p) -> (s, p-1) is enforced up to
    the truncation exponent, mirroring the axioms of a discrete index family.
    """

    terms: tuple[tuple[float, int], ...]

    @staticmethod
    def build(exponents: Sequence[float], max_log: int = 0,
              log_exponents: Sequence[float] | None = None) -> "IndexSet":
        """Integer-style builder: powers from `exponents`, with log powers up
        to max_log attached to the exponents in log_exponents (default: all)."""
        log_on = set(log_exponents) if log_exponents is not None else set(exponents)
        terms = set()
        for s in exponents:
            terms.add((float(s), 0))
            if s in log_on:
                for p in range(1, max_log + 1):
                    terms.add((float(s), p))
        return IndexSet(tuple(sorted(terms)))

    def __post_init__(self):
        terms = sorted(set(self.terms))
        object.__setattr__(self, "terms", tuple(terms))
        smax = max((s for s, _ in terms), default=0.0)
        have = set(terms)
        for s, p in terms:
            if p > 0 and (s, p - 1) not in have:
                raise ValueError(f"index set not closed under log-power drop at ({s},{p})")
            if (s + 1.0, p) not in have and s + 1.0 <= smax:
                raise ValueError(f"index set not closed under exponent shift at ({s},{p})")

    def basis_size(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class PhgSeries:
    """Fitted truncated expansion sum_k a_k x^(s_k) log^(p_k) x."""

    terms: tuple[tuple[float, int, float], ...]   # (s, p, coefficient)
    residual: float
    condition: float
    scale: float
    flags: tuple[str, ...] = ()

    def coefficient(self, s: float, p: int = 0) -> float:
        for ss, pp, a in self.terms:
            if abs(ss - s) < 1e-12 and pp == p:
                return a
        return 0.0

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for s, p, a in self.terms:
            out = out + a * x ** s * np.log(x) ** p
        return out


@dataclass(frozen=True)
class RenormResult:
    """Finite part of a divergent integral plus its divergence bookkeeping."""

    finite_part: float
    divergent: tuple[tuple[float, int, float], ...]
    scheme: str
    residual: float
    condition: float
    flags: tuple[str, ...] = ()
    diagnostics: dict = field(default_factory=dict)


def fit_phg(eps: np.ndarray, values: np.ndarray, index_set: IndexSet,
            relative_weights: bool = True) -> PhgSeries:
    """Least-squares fit of samples to the declared power/log basis.

    Columns are normalized before solving; sample rows are weighted by
    1/(1+|value|) by default, appropriate when quadrature noise is relative.
    A design condition number above 1e10 flags the result instead of failing.
    """
    eps = np.asarray(eps, dtype=float)
    values = np.asarray(values, dtype=float)
    terms = index_set.terms
    if len(eps) < 2 * len(terms):
        raise ValueError(f"need at least {2 * len(terms)} samples to fit {len(terms)} basis terms")
    A = np.column_stack([eps ** s * np.log(eps) ** p for s, p in terms])
    w = 1.0 / (1.0 + np.abs(values)) if relative_weights else np.ones_like(values)
    Aw = A * w[:, None]
    bw = values * w
    col_norms = np.linalg.norm(Aw, axis=0)
    col_norms[col_norms == 0] = 1.0
    An = Aw / col_norms[None, :]
    cond = float(np.linalg.cond(An))
    flags: list[str] = []
    if cond > COND_LIMIT:
        flags.append("ill-conditioned")
    sol, *_ = np.linalg.lstsq(An, bw, rcond=None)
    coeffs = sol / col_norms
    fitted = A @ coeffs
    residual = float(np.sqrt(np.mean((fitted - values) ** 2)))
    scale = float(np.max(np.abs(values))) or 1.0
    return PhgSeries(terms=tuple((s, p, float(a)) for (s, p), a in zip(terms, coeffs)),
                     residual=residual, condition=cond, scale=scale,
                     flags=tuple(flags))


def _divergent_terms(series: PhgSeries) -> list[tuple[float, int, float]]:
    out = []
    for s, p, a in series.terms:
        if s < -1e-12 or (abs(s) <= 1e-12 and p >= 1):
            out.append((s, p, a))
    return out


def finite_part_eps(series: PhgSeries) -> RenormResult:
    """Coefficient of eps^0 log^0 eps; a surviving eps^0 log term is flagged."""
    fp = series.coefficient(0.0, 0)
    divergent = _divergent_terms(series)
    flags = list(series.flags)
    log_at_zero = [(s, p, a) for s, p, a in divergent
                   if abs(s) <= 1e-12 and p >= 1 and abs(a) > LOG_FLAG_TOL * series.scale]
    if log_at_zero:
        flags.append("log-at-zero")
    return RenormResult(finite_part=fp, divergent=tuple(divergent),
                        scheme="epsilon", residual=series.residual,
                        condition=series.condition, flags=tuple(flags))


def zeta_term_finite_part(a: float, s: float, p: int, delta: float) -> tuple[float, bool]:
    """Finite part at z = 0 of a * int_0^delta x^(z+s) log^p x dx.

    For s != -1 the integral is regular at z = 0:
        delta^(s+1) sum_k (-1)^(p-k) (p!/k!) log^k delta / (s+1)^(p-k+1).
    For s = -1 the z^0 Laurent coefficient is a log^(p+1) delta combination.
    Returns (value, had_pole).
    """
    L = math.log(delta)
    if abs(s + 1.0) > 1e-12:
        acc = 0.0
        for k in range(p + 1):
            acc += ((-1.0) ** (p - k) * math.factorial(p) / math.factorial(k)
                    * L ** k / (s + 1.0) ** (p - k + 1))
        return a * delta ** (s + 1.0) * acc, False
    acc = 0.0
    for k in range(p + 1):
        acc += ((-1.0) ** (p - k) * math.factorial(p) / math.factorial(k)
                * L ** k * L ** (p - k + 1) / math.factorial(p - k + 1))
    return a * acc, True


def finite_part_zeta(collar_series: PhgSeries, interior_integral: float,
                     delta: float) -> RenormResult:
    """Assemble the zeta-scheme finite part from a fitted collar level function.

    ``collar_series`` expands the density-per-dx on (0, delta];
    ``interior_integral`` is the plain integral over {x >= delta}.
    """
    total = interior_integral
    pole = False
    for s, p, a in collar_series.terms:
        v, had_pole = zeta_term_finite_part(a, s, p, delta)
        total += v
        if had_pole and abs(a) > LOG_FLAG_TOL * collar_series.scale:
            pole = True
    flags = list(collar_series.flags)
    if pole:
        flags.append("log-at-zero")
    divergent = tuple((s, p, a) for s, p, a in collar_series.terms if s < -1.0 + 1e-12)
    return RenormResult(finite_part=total, divergent=divergent, scheme="zeta",
                        residual=collar_series.residual,
                        condition=collar_series.condition, flags=tuple(flags),
                        diagnostics={"delta": delta,
                                     "interior_integral": interior_integral})


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepResult:
    eps: np.ndarray
    values: np.ndarray
    err_est: np.ndarray
    label: str = ""

    def rows(self):
        return zip(self.eps, self.values, self.err_est)


def log_grid(lo: float, hi: float, n: int) -> np.ndarray:
    if not (0 < lo < hi) or n < 2:
        raise ValueError("grid must satisfy 0 < lo < hi with at least two points")
    return np.geomspace(lo, hi, n)


def boundary_integral(chart: ChartMetric, boundary: BoundaryDescriptor,
                      density: Callable[[ChartMetric, np.ndarray], np.ndarray],
                      eps: float) -> float:
    """int_{x=eps} density dvol via the boundary rule and induced volume.

    Densities map (chart, points (N, m)) to per-point values.
    """
    pts = np.column_stack([np.full(len(boundary.nodes), eps), boundary.nodes])
    vals = density(chart, pts)
    g = chart.components(pts)
    det = np.linalg.det(g[:, 1:, 1:])
    if np.any(det <= 0):
        raise ValueError("degenerate induced metric in boundary quadrature")
    return float(np.sum(boundary.weights * vals * np.sqrt(det)))


def sweep_boundary(chart: ChartMetric, boundary: BoundaryDescriptor,
                   density, eps_grid: np.ndarray, label: str = "",
                   with_error: bool = True) -> SweepResult:
    """Level-set integrals I(eps) per grid point, with a refinement error estimate."""
    eps_grid = np.asarray(eps_grid, dtype=float)
    if len(eps_grid) < 2:
        raise ValueError("sweep grid needs at least two points")
    vals = np.array([boundary_integral(chart, boundary, density, e) for e in eps_grid])
    if with_error:
        fine = boundary.refined(2)
        vals_f = np.array([boundary_integral(chart, fine, density, e) for e in eps_grid])
        err = np.abs(vals_f - vals)
        vals = vals_f
    else:
        err = np.zeros_like(vals)
    return SweepResult(eps=eps_grid, values=vals, err_est=err, label=label)


def _bulk_segment(chart: ChartMetric, boundary: BoundaryDescriptor, density,
                  a: float, b: float, n_gl: int, rule: str = "log") -> float:
    """int over {a <= x <= b} of density dvol, vectorized over the x-y product."""
    if b == np.inf:
        xs, wx = inverse_tail_nodes(a, n_gl)
    elif rule == "linear":
        xs, wx = gauss_legendre(n_gl, a, b)
    else:
        xs, wx = log_segment_nodes(a, b, n_gl)
    ny = len(boundary.nodes)
    pts = np.empty((len(xs) * ny, boundary.dim + 1))
    pts[:, 0] = np.repeat(xs, ny)
    pts[:, 1:] = np.tile(boundary.nodes, (len(xs), 1))
    vals = density(chart, pts)
    det = np.linalg.det(chart.components(pts))
    w = np.repeat(wx, ny) * np.tile(boundary.weights, len(xs))
    return float(np.sum(w * vals * np.sqrt(det)))


def bulk_integral(chart: ChartMetric, boundary: BoundaryDescriptor, density,
                  a: float, b: float, n_gl: int = 32, segments: int = 1,
                  rule: str = "log") -> float:
    if b <= a:
        return 0.0
    total = 0.0
    if b == np.inf:
        total += _bulk_segment(chart, boundary, density, max(a, 1.0), np.inf, n_gl)
        b = max(a, 1.0)
        if b <= a:
            return total
    cuts = np.geomspace(a, b, segments + 1) if rule == "log" else np.linspace(a, b, segments + 1)
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        total += _bulk_segment(chart, boundary, density, lo, hi, n_gl, rule=rule)
    return total


def sweep_bulk(chart: ChartMetric, boundary: BoundaryDescriptor, density,
               eps_grid: np.ndarray, x_top: float, label: str = "",
               n_gl: int = 16, with_error: bool = True) -> SweepResult:
    """Truncated bulk integrals V(eps) = int_{x >= eps}, accumulated from the top.

    The shared piece [eps_max, x_top] is integrated once; the grid segments
    between consecutive eps values are then added cumulatively, so the whole
    sweep costs one pass over the collar.
    """
    eps_grid = np.sort(np.asarray(eps_grid, dtype=float))
    if eps_grid[-1] >= x_top:
        raise ValueError("grid extends beyond the top of the coordinate range")

    def accumulate(bd: BoundaryDescriptor, order: int) -> np.ndarray:
        top = bulk_integral(chart, bd, density, eps_grid[-1], x_top,
                            n_gl=max(order * 3, 24), segments=4)
        out = np.empty(len(eps_grid))
        out[-1] = top
        for i in range(len(eps_grid) - 2, -1, -1):
            seg = _bulk_segment(chart, bd, density, eps_grid[i], eps_grid[i + 1], order)
            out[i] = out[i + 1] + seg
        return out

    vals = accumulate(boundary, n_gl)
    if with_error:
        # the x rule dominates the quadrature error here; cross-section rule
        # adequacy is checked by the boundary sweeps and their refinements
        vals_f = accumulate(boundary, n_gl + 8)
        err = np.abs(vals_f - vals)
        vals = vals_f
    else:
        err = np.zeros_like(vals)
    return SweepResult(eps=np.asarray(eps_grid), values=vals, err_est=err, label=label)


# ---------------------------------------------------------------------------
# assembled renormalized integrals
# ---------------------------------------------------------------------------

def _entry_index_set(entry: CatalogEntry, boundary_side: bool) -> IndexSet:
    exps = entry.boundary_exponents if boundary_side else entry.bulk_exponents
    return IndexSet.build(exps, max_log=entry.log_powers)


def renormalized_integral(entry: CatalogEntry, density, scheme: str = "both",
                          grid: tuple[float, float, int] = DEFAULT_GRID,
                          index_set: IndexSet | None = None,
                          delta: float = 0.05,
                          n_gl: int = 16) -> dict[str, RenormResult]:
    """Renormalized bulk integral of a density over a catalog entry.

    Returns per-scheme results; closed entries get the plain integral under
    the key "plain".
    """
    if entry.is_closed:
        val = bulk_integral(entry.chart, entry.boundary, density,
                            entry.chart.x_min, entry.x_top,
                            n_gl=32, segments=1, rule="linear")
        res = RenormResult(finite_part=val, divergent=(), scheme="plain",
                           residual=0.0, condition=1.0)
        return {"plain": res}
    iset = index_set or _entry_index_set(entry, boundary_side=False)
    out: dict[str, RenormResult] = {}
    eps_grid = log_grid(*grid)
    if scheme in ("epsilon", "both"):
        sweep = sweep_bulk(entry.chart, entry.bulk_boundary, density, eps_grid,
                           entry.x_top, n_gl=n_gl)
        series = fit_phg(sweep.eps, sweep.values, iset)
        res = finite_part_eps(series)
        res.diagnostics["max_quadrature_err"] = float(np.max(sweep.err_est))
        out["epsilon"] = res
    if scheme in ("zeta", "both"):
        out["zeta"] = _zeta_route(entry, density, iset, delta, grid, n_gl)
    return out


def _level_function(entry: CatalogEntry, density):
    """f(x) = int over the level of density * sqrt(det g): dV = -f(eps) d eps."""
    chart, boundary = entry.chart, entry.bulk_boundary

    def f(x: float) -> float:
        pts = np.column_stack([np.full(len(boundary.nodes), float(x)), boundary.nodes])
        vals = density(chart, pts)
        det = np.linalg.det(chart.components(pts))
        return float(np.sum(boundary.weights * vals * np.sqrt(det)))

    return f


def _zeta_route(entry: CatalogEntry, density, iset: IndexSet, delta: float,
                grid: tuple[float, float, int], n_gl: int) -> RenormResult:
    # the level function expands with exponents shifted down by one
    shifted = IndexSet(tuple(sorted(set((s - 1.0, p) for s, p in iset.terms))))
    f = _level_function(entry, density)
    xs = log_grid(grid[0], min(delta, grid[1]), max(grid[2], 2 * len(shifted.terms)))
    samples = np.array([f(x) for x in xs])
    series = fit_phg(xs, samples, shifted)
    interior = bulk_integral(entry.chart, entry.bulk_boundary, density, delta,
                             entry.x_top, n_gl=48, segments=4)
    return finite_part_zeta(series, interior, delta)


def renormalized_boundary_integral(entry: CatalogEntry, density,
                                   grid: tuple[float, float, int] = DEFAULT_GRID,
                                   index_set: IndexSet | None = None,
                                   with_error: bool = True) -> tuple[RenormResult, SweepResult]:
    """FP at eps = 0 of the level-set integrals (epsilon scheme)."""
    iset = index_set or _entry_index_set(entry, boundary_side=True)
    eps_grid = log_grid(*grid)
    sweep = sweep_boundary(entry.chart, entry.boundary, density, eps_grid,
                           with_error=with_error)
    series = fit_phg(sweep.eps, sweep.values, iset)
    res = finite_part_eps(series)
    res.diagnostics["max_quadrature_err"] = float(np.max(sweep.err_est))
    return res, sweep
