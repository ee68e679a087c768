"""Pointwise algebra of double forms.

A (p, q) double form on a d-dimensional frame is a multilinear map taking p
vectors in the first slot and q in the second, antisymmetric within each slot.
Curvature is a (2, 2) double form, a second fundamental form is (1, 1), and
the frame metric is the identity (1, 1) form.  Coefficients are stored on
pairs of strictly increasing multi-indices; evaluation on arbitrary tuples is
the signed extension.

Products use the shuffle convention.  All quantities that feed the
Gauss-Bonnet densities are routed through ``permutation_contraction`` (the
literal double permutation sum), so the normalization of the product never
contaminates results: the two paths differ by the fixed combinatorial factor
``prod(p_i!) * prod(q_i!)`` of the degree partition, which is pinned by tests.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "DoubleForm",
    "df_product",
    "df_power",
    "df_eval",
    "permutation_contraction",
    "contraction_product_ratio",
    "unit_form",
    "metric_form",
    "from_dense",
]


def _sort_with_sign(idx: Sequence[int]) -> tuple[tuple[int, ...], int] | None:
    """Sort an index tuple, returning (sorted, parity sign); None if repeated."""
    idx = tuple(idx)
    if len(set(idx)) != len(idx):
        return None
    order = sorted(range(len(idx)), key=idx.__getitem__)
    sign = 1
    seen = list(idx)
    # parity by counting inversions (tuples are short: length <= 6)
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if seen[i] > seen[j]:
                sign = -sign
    return tuple(sorted(idx)), sign


@lru_cache(maxsize=None)
def _perms_with_signs(d: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    out = []
    for perm in itertools.permutations(range(d)):
        sign = 1
        for i in range(d):
            for j in range(i + 1, d):
                if perm[i] > perm[j]:
                    sign = -sign
        out.append((perm, sign))
    return tuple(out)


@lru_cache(maxsize=None)
def _merge_table(p: int, r: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]:
    """(p, r)-shuffles of positions 0..p+r-1 with their signs.

    Each item is (positions_first, positions_second, sign) where the position
    tuples are increasing and partition range(p + r).
    """
    total = p + r
    out = []
    for first in itertools.combinations(range(total), p):
        second = tuple(i for i in range(total) if i not in first)
        # sign of the permutation (first..., second...) relative to identity
        seq = first + second
        sign = 1
        for i in range(total):
            for j in range(i + 1, total):
                if seq[i] > seq[j]:
                    sign = -sign
        out.append((first, second, sign))
    return tuple(out)


class DoubleForm:
    """Immutable (p, q) double form on a d-dimensional orthonormal frame.

    Coefficients are a mapping {(I, J): value} with I, J strictly increasing
    tuples drawn from 0..d-1.  Indices are 0-based throughout.
    """

    __slots__ = ("p", "q", "dim", "_c")

    def __init__(self, p: int, q: int, dim: int,
                 coeffs: Mapping[tuple[tuple[int, ...], tuple[int, ...]], float] | None = None):
        if p < 0 or q < 0 or dim < 0:
            raise ValueError("degrees and dimension must be non-negative")
        self.p = p
        self.q = q
        self.dim = dim
        clean: dict = {}
        if coeffs and p <= dim and q <= dim:
            for (I, J), v in coeffs.items():
                I, J = tuple(I), tuple(J)
                if len(I) != p or len(J) != q:
                    raise ValueError(f"index tuple lengths {len(I)},{len(J)} do not match degree ({p},{q})")
                if any(not 0 <= i < dim for i in I + J):
                    raise ValueError("index out of range")
                if list(I) != sorted(set(I)) or list(J) != sorted(set(J)):
                    raise ValueError("coefficient keys must be strictly increasing multi-indices")
                if v != 0.0:
                    clean[(I, J)] = float(v)
        self._c = clean

    # -- basic accessors ---------------------------------------------------

    def coeffs(self) -> dict:
        return dict(self._c)

    def __call__(self, I: Sequence[int], J: Sequence[int]) -> float:
        return df_eval(self, I, J)

    def norm_inf(self) -> float:
        return max((abs(v) for v in self._c.values()), default=0.0)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(v) <= tol for v in self._c.values())

    # -- linear structure ----------------------------------------------------

    def scaled(self, c: float) -> "DoubleForm":
        return DoubleForm(self.p, self.q, self.dim,
                          {k: c * v for k, v in self._c.items()})

    def __add__(self, other: "DoubleForm") -> "DoubleForm":
        if (self.p, self.q, self.dim) != (other.p, other.q, other.dim):
            raise ValueError("can only add double forms of identical degree and dimension")
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0.0) + v
        return DoubleForm(self.p, self.q, self.dim, out)

    def __sub__(self, other: "DoubleForm") -> "DoubleForm":
        return self + other.scaled(-1.0)

    def __mul__(self, other):
        if isinstance(other, DoubleForm):
            return df_product(self, other)
        return self.scaled(float(other))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"DoubleForm(p={self.p}, q={self.q}, dim={self.dim}, terms={len(self._c)})"

    def to_dense(self) -> np.ndarray:
        """Dense array of shape (d,)*p + (d,)*q with full antisymmetry."""
        d = self.dim
        arr = np.zeros((d,) * (self.p + self.q))
        for Iidx in itertools.product(range(d), repeat=self.p):
            for Jidx in itertools.product(range(d), repeat=self.q):
                arr[Iidx + Jidx] = df_eval(self, Iidx, Jidx)
        return arr


def unit_form(dim: int) -> DoubleForm:
    """The (0, 0) scalar unit."""
    return DoubleForm(0, 0, dim, {((), ()): 1.0})


def metric_form(dim: int) -> DoubleForm:
    """The (1, 1) identity form of an orthonormal frame."""
    return DoubleForm(1, 1, dim, {((i,), (i,)): 1.0 for i in range(dim)})


def from_dense(arr: np.ndarray, p: int, q: int) -> DoubleForm:
    """Build a DoubleForm from a dense (d,)*(p+q) array (assumed antisymmetric)."""
    d = arr.shape[0] if p + q else 0
    coeffs = {}
    for I in itertools.combinations(range(d), p):
        for J in itertools.combinations(range(d), q):
            v = float(arr[I + J]) if p + q else float(arr)
            if v != 0.0:
                coeffs[(I, J)] = v
    if p + q == 0:
        coeffs = {((), ()): float(arr)}
        d = 1
    return DoubleForm(p, q, max(d, p, q), coeffs)


def df_eval(a: DoubleForm, I: Sequence[int], J: Sequence[int]) -> float:
    """Signed/zero extension of the stored coefficients."""
    if len(I) != a.p or len(J) != a.q:
        raise ValueError(f"index tuple lengths ({len(I)},{len(J)}) do not match degree ({a.p},{a.q})")
    si = _sort_with_sign(I)
    if si is None:
        return 0.0
    sj = _sort_with_sign(J)
    if sj is None:
        return 0.0
    (Is, sgn_i), (Js, sgn_j) = si, sj
    return sgn_i * sgn_j * a._c.get((Is, Js), 0.0)


def df_product(a: DoubleForm, b: DoubleForm) -> DoubleForm:
    """Shuffle-convention product: degree (p+r, q+s).

    Graded commutative with sign (-1)^(pr+qs).
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} != {b.dim}")
    p, q, r, s = a.p, a.q, b.p, b.q
    d = a.dim
    out: dict = {}
    if p + r > d or q + s > d:
        return DoubleForm(p + r, q + s, d)
    tab_i = _merge_table(p, r)
    tab_j = _merge_table(q, s)
    for I in itertools.combinations(range(d), p + r):
        for J in itertools.combinations(range(d), q + s):
            acc = 0.0
            for pos1, pos2, sg1 in tab_i:
                I1 = tuple(I[k] for k in pos1)
                I2 = tuple(I[k] for k in pos2)
                for pos3, pos4, sg2 in tab_j:
                    J1 = tuple(J[k] for k in pos3)
                    J2 = tuple(J[k] for k in pos4)
                    va = a._c.get((I1, J1))
                    if va is None:
                        continue
                    vb = b._c.get((I2, J2))
                    if vb is None:
                        continue
                    acc += sg1 * sg2 * va * vb
            if acc != 0.0:
                out[(I, J)] = acc
    return DoubleForm(p + r, q + s, d, out)


def df_power(a: DoubleForm, k: int) -> DoubleForm:
    """k-fold shuffle product; k = 0 gives the scalar unit."""
    if k < 0:
        raise ValueError("power must be non-negative")
    if k == 0:
        return unit_form(a.dim)
    out = a
    for _ in range(k - 1):
        out = df_product(out, a)
    return out


def permutation_contraction(factors: Iterable[DoubleForm]) -> float:
    """Literal double permutation sum over S_d x S_d of signed factor products.

    The factor degrees must fill (d, d) in each slot.  Agrees with
    ``df_eval(df_product(*factors), full, full)`` up to the combinatorial
    constant returned by :func:`contraction_product_ratio`.
    """
    factors = list(factors)
    if not factors:
        raise ValueError("need at least one factor")
    d = factors[0].dim
    if any(f.dim != d for f in factors):
        raise ValueError("all factors must share the frame dimension")
    psum = sum(f.p for f in factors)
    qsum = sum(f.q for f in factors)
    if psum != d or qsum != d:
        raise ValueError(f"factor degrees sum to ({psum},{qsum}), expected ({d},{d})")
    if d > 6:
        raise ValueError("permutation contraction limited to d <= 6")
    perms = _perms_with_signs(d)
    total = 0.0
    for sigma, sgn_s in perms:
        for tau, sgn_t in perms:
            prod = sgn_s * sgn_t
            off_p = 0
            off_q = 0
            for f in factors:
                I = sigma[off_p:off_p + f.p]
                J = tau[off_q:off_q + f.q]
                off_p += f.p
                off_q += f.q
                prod *= df_eval(f, I, J)
                if prod == 0.0:
                    break
            total += prod
    return total


def contraction_product_ratio(degrees: Iterable[tuple[int, int]]) -> float:
    """The constant permutation_contraction / df_eval(product, full, full).

    Depends only on the degree multiset: prod(p_i!) * prod(q_i!).
    """
    ratio = 1.0
    for p, q in degrees:
        ratio *= math.factorial(p) * math.factorial(q)
    return ratio
