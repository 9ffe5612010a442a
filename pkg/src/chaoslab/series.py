"""Truncated l1 power-series algebra in k commuting variables.

Elements are finitely supported coefficient maps over multi-indices of total
degree at most a cap D, multiplied by convolution with silent truncation.
A substitution tuple maps the k generators to polynomials with zero constant
term (first component the identity) and provides Taylor coefficients of the
composed one-variable series together with a certified contraction radius.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .poly import Poly, max_modulus_on_circle

MultiIndex = tuple[int, ...]


class SeriesError(ValueError):
    pass


def _check_compatible(a: "TruncatedSeries", b: "TruncatedSeries"):
    if a.k != b.k or a.cap != b.cap:
        raise SeriesError("incompatible operands: k/D mismatch")


@dataclass
class TruncatedSeries:
    """Sparse element of the degree-<=cap section of l1(Z_+^k)."""

    k: int
    cap: int
    terms: dict[MultiIndex, complex] = field(default_factory=dict)
    truncation_active: bool = False

    def __post_init__(self):
        clean = {}
        for idx, c in self.terms.items():
            idx = tuple(int(t) for t in idx)
            if len(idx) != self.k or any(t < 0 for t in idx):
                raise SeriesError(f"bad multi-index {idx} for k={self.k}")
            if sum(idx) > self.cap:
                raise SeriesError(f"index {idx} exceeds truncation degree {self.cap}")
            if c != 0:
                clean[idx] = complex(c)
        self.terms = clean

    @staticmethod
    def zero(k: int, cap: int) -> "TruncatedSeries":
        return TruncatedSeries(k, cap, {})

    @staticmethod
    def monomial(k: int, cap: int, idx: MultiIndex, c: complex = 1.0) -> "TruncatedSeries":
        return TruncatedSeries(k, cap, {tuple(idx): c})

    @staticmethod
    def generator(k: int, cap: int, j: int) -> "TruncatedSeries":
        """The j-th generator u_{j+1} (0-based j)."""
        idx = tuple(1 if i == j else 0 for i in range(k))
        return TruncatedSeries(k, cap, {idx: 1.0})

    def l1(self) -> float:
        return float(sum(abs(c) for c in self.terms.values()))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        _check_compatible(self, other)
        out = dict(self.terms)
        for idx, c in other.terms.items():
            out[idx] = out.get(idx, 0j) + c
        return TruncatedSeries(self.k, self.cap, out,
                               self.truncation_active or other.truncation_active)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "TruncatedSeries":
        return TruncatedSeries(self.k, self.cap,
                               {i: scalar * c for i, c in self.terms.items()},
                               self.truncation_active)

    def scale(self, scalar: complex) -> "TruncatedSeries":
        return scalar * self


def l1_norm(a: TruncatedSeries) -> float:
    return a.l1()


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Convolution product; indices of total degree > cap are discarded."""
    _check_compatible(a, b)
    out: dict[MultiIndex, complex] = {}
    truncated = a.truncation_active or b.truncation_active
    for ia, ca in a.terms.items():
        da = sum(ia)
        for ib, cb in b.terms.items():
            if da + sum(ib) > a.cap:
                truncated = True
                continue
            idx = tuple(x + y for x, y in zip(ia, ib))
            out[idx] = out.get(idx, 0j) + ca * cb
    return TruncatedSeries(a.k, a.cap, out, truncated)


def series_pow(a: TruncatedSeries, n: int) -> TruncatedSeries:
    out = TruncatedSeries.monomial(a.k, a.cap, (0,) * a.k)
    base = a
    while n:
        if n & 1:
            out = mul(out, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return out


def embed_poly(p: Poly, k: int, cap: int) -> TruncatedSeries:
    """The series p(u_1); composing with any tuple whose first slot is z
    reproduces p."""
    if p.degree > cap:
        raise SeriesError(f"degree {p.degree} exceeds truncation degree {cap}")
    terms = {}
    for j, c in enumerate(p.coeffs):
        if c != 0:
            terms[tuple([j] + [0] * (k - 1))] = complex(c)
    return TruncatedSeries(k, cap, terms)


def iter_multi_indices(k: int, max_total: int):
    """Graded lexicographic enumeration of Z_+^k indices with |idx| <= max_total."""
    for total in range(max_total + 1):
        for head in itertools.combinations_with_replacement(range(k), total):
            idx = [0] * k
            for j in head:
                idx[j] += 1
            yield tuple(idx)


def count_multi_indices(k: int, max_total: int) -> int:
    from math import comb

    return comb(max_total + k, k)


@dataclass
class SubstTuple:
    """A tuple xi of zero-constant-term polynomials with xi[0] = z, plus a
    certified lower bound for its contraction radius gamma.

    Powers of the components reduced mod z^(M+1) are memoized; concurrent
    readers are fine, insertion is idempotent.
    """

    polys: tuple[Poly, ...]
    gamma: float
    gamma_tol: float
    _pow_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def k(self) -> int:
        return len(self.polys)

    def pow_mod(self, j: int, t: int, m_top: int) -> np.ndarray:
        """Coefficients 0..m_top of xi_j^t (length m_top+1)."""
        key = (j, t, m_top)
        cached = self._pow_cache.get(key)
        if cached is not None:
            return cached
        if t == 0:
            out = np.zeros(m_top + 1, dtype=np.complex128)
            out[0] = 1.0
        elif t == 1:
            out = np.zeros(m_top + 1, dtype=np.complex128)
            c = self.polys[j].coeffs[: m_top + 1]
            out[: c.size] = c
        else:
            half = self.pow_mod(j, t // 2, m_top)
            out = np.convolve(half, half)[: m_top + 1]
            if t & 1:
                out = np.convolve(out, self.pow_mod(j, 1, m_top))[: m_top + 1]
        self._pow_cache[key] = out
        return out

    def monomial_alpha(self, idx: MultiIndex, m_top: int) -> np.ndarray:
        """Taylor coefficients 0..m_top of prod_j xi_j^{idx_j}."""
        out = np.zeros(m_top + 1, dtype=np.complex128)
        out[0] = 1.0
        for j, t in enumerate(idx):
            if t:
                out = np.convolve(out, self.pow_mod(j, t, m_top))[: m_top + 1]
        return out

    def component_values(self, z: complex) -> np.ndarray:
        return np.array([p(z) for p in self.polys], dtype=np.complex128)


def gamma(polys, tol: float = 1e-9, iters: int = 60) -> float:
    """Certified lower bound for the largest c with every component mapping
    the closed disk of radius c into the closed unit disk.

    Bisection on the monotone predicate max_j maxmod(xi_j, c) <= 1; the
    returned value is the conservative lower endpoint.
    """
    if tol <= 0:
        raise SeriesError("tol must be positive")
    polys = tuple(polys)
    if not polys:
        raise SeriesError("empty tuple")

    def ok(c: float) -> bool:
        return all(max_modulus_on_circle(p, c) <= 1.0 for p in polys)

    lo, hi = 0.0, 1.0
    if ok(1.0):
        # xi_1 = z pins gamma at exactly 1
        return 1.0
    for _ in range(iters):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def make_subst_tuple(polys, gamma_tol: float = 1e-9) -> SubstTuple:
    ps = tuple(polys if isinstance(polys, (list, tuple)) else [polys])
    ps = tuple(p if isinstance(p, Poly) else Poly.from_coeffs(p) for p in ps)
    if not ps:
        raise SeriesError("empty substitution tuple")
    if ps[0] != Poly.x():
        raise SeriesError("first component must be exactly z")
    for p in ps:
        if not p.is_zero and p.constant_term != 0:
            raise SeriesError("components must have zero constant term")
    g = gamma(ps, gamma_tol)
    return SubstTuple(ps, g, gamma_tol)


def substitute(a: TruncatedSeries, xi: SubstTuple, m_top: int) -> np.ndarray:
    """Taylor coefficients alpha_0..alpha_{m_top} of a(xi_1(z),...,xi_k(z)).

    alpha_0 is stored as well; it vanishes automatically when the input has
    zero constant term, because every component does.
    """
    if a.k != xi.k:
        raise SeriesError("variable count mismatch")
    out = np.zeros(m_top + 1, dtype=np.complex128)
    for idx, c in a.terms.items():
        # valuation of the composed monomial is at least its total degree
        if sum(idx) > m_top:
            continue
        out += c * xi.monomial_alpha(idx, m_top)
    return out
