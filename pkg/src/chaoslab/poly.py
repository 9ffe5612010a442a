"""Dense complex polynomial arithmetic, evaluation, divisibility and root localization.

Coefficients are stored constant-term first.  Everything downstream (the
truncated power-series algebra, the quotient-seminorm solves, the contour
machinery) goes through this module, so operations are kept exact where
doubles allow and conservative (one-sided slack) where they do not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEGREE_CAP = 4096

# merge radius for root clusters; see RootSet
CLUSTER_TOL = 1e-7


class PolyError(ValueError):
    pass


class DegreeCapError(PolyError):
    pass


def _trim(coeffs: np.ndarray) -> np.ndarray:
    """Strip exactly-zero trailing coefficients."""
    nz = np.nonzero(coeffs)[0]
    if nz.size == 0:
        return coeffs[:0]
    return coeffs[: nz[-1] + 1]


@dataclass(frozen=True)
class Poly:
    """A univariate polynomial over C, coeffs[j] multiplying z^j.

    The zero polynomial has empty ``coeffs`` and ``is_zero`` set; a nonzero
    polynomial always has a nonzero trailing coefficient.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = _trim(np.asarray(self.coeffs, dtype=np.complex128))
        if len(c) - 1 > DEGREE_CAP:
            raise DegreeCapError(f"degree {len(c) - 1} exceeds cap {DEGREE_CAP}")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return self.coeffs.size - 1

    @property
    def constant_term(self) -> complex:
        return complex(self.coeffs[0]) if self.coeffs.size else 0j

    @staticmethod
    def zero() -> "Poly":
        return Poly(np.zeros(0))

    @staticmethod
    def one() -> "Poly":
        return Poly(np.array([1.0]))

    @staticmethod
    def x() -> "Poly":
        return Poly(np.array([0.0, 1.0]))

    @staticmethod
    def monomial(n: int, c: complex = 1.0) -> "Poly":
        coeffs = np.zeros(n + 1, dtype=np.complex128)
        coeffs[n] = c
        return Poly(coeffs)

    @staticmethod
    def from_coeffs(seq) -> "Poly":
        return Poly(np.asarray(list(seq), dtype=np.complex128))

    @staticmethod
    def from_roots(roots, leading: complex = 1.0) -> "Poly":
        c = np.array([leading], dtype=np.complex128)
        for r in roots:
            c = np.convolve(c, np.array([-r, 1.0]))
        return Poly(c)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        n = max(a.size, b.size)
        out = np.zeros(n, dtype=np.complex128)
        out[: a.size] += a
        out[: b.size] += b
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-1.0) * other

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return Poly.zero()
        if self.degree + other.degree > DEGREE_CAP:
            raise DegreeCapError("product degree exceeds cap")
        return Poly(np.convolve(self.coeffs, other.coeffs))

    def __rmul__(self, scalar: complex) -> "Poly":
        return Poly(self.coeffs * scalar)

    def __neg__(self) -> "Poly":
        return Poly(-self.coeffs)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise PolyError("negative power")
        out = Poly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs.shape == other.coeffs.shape \
            and bool(np.all(self.coeffs == other.coeffs))

    def __call__(self, z):
        return eval_poly(self, z)

    def l1(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def deriv(self, order: int = 1) -> "Poly":
        c = self.coeffs
        for _ in range(order):
            if c.size <= 1:
                return Poly.zero()
            c = c[1:] * np.arange(1, c.size)
        return Poly(c)

    def shift_down(self, m: int = 1) -> "Poly":
        """Exact division by z^m; requires the low-order coefficients to vanish."""
        if self.is_zero:
            return self
        if np.any(self.coeffs[:m] != 0):
            raise PolyError("polynomial is not divisible by z^%d" % m)
        return Poly(self.coeffs[m:])

    def truncate(self, degree: int) -> "Poly":
        """Drop all terms of degree > ``degree``."""
        return Poly(self.coeffs[: degree + 1])


def eval_poly(p: Poly, z):
    """Horner evaluation; broadcasts over array-valued z."""
    zv = np.asarray(z, dtype=np.complex128)
    acc = np.zeros_like(zv)
    for c in p.coeffs[::-1]:
        acc = acc * zv + c
    if np.isscalar(z) or zv.ndim == 0:
        return complex(acc)
    return acc


def one_plus_z_pow(n: int) -> Poly:
    """(1+z)^n with correctly rounded binomial coefficients (exact integers -> float)."""
    if n > DEGREE_CAP:
        raise DegreeCapError("binomial degree exceeds cap")
    return Poly(np.array([float(math.comb(n, j)) for j in range(n + 1)]))


def divmod_poly(f: Poly, q: Poly) -> tuple[Poly, Poly]:
    """Synthetic division f = quo*q + rem with deg rem < deg q."""
    if q.is_zero:
        raise PolyError("invalid divisor: zero polynomial")
    if f.degree < q.degree:
        return Poly.zero(), f
    rem = np.array(f.coeffs, dtype=np.complex128)
    qc = q.coeffs
    lead = qc[-1]
    dq = q.degree
    quo = np.zeros(f.degree - dq + 1, dtype=np.complex128)
    for i in range(f.degree - dq, -1, -1):
        t = rem[i + dq] / lead
        quo[i] = t
        if t != 0:
            rem[i : i + dq + 1] -= t * qc
    return Poly(quo), Poly(rem[:dq])


def divides(q: Poly, f: Poly, tol: float = 1e-9) -> bool:
    """True iff the remainder of f by q has l1 norm <= tol * (1 + l1(f))."""
    if q.is_zero:
        raise PolyError("invalid divisor: zero polynomial")
    _, rem = divmod_poly(f, q)
    return rem.l1() <= tol * (1.0 + f.l1())


def taylor_shift(p: Poly, z0: complex, order: int | None = None) -> np.ndarray:
    """Coefficients of p(z0 + h) in h, up to h^order inclusive.

    The i-th entry is p^(i)(z0) / i!, computed by the in-place Horner shift
    (repeated synthetic division by (z - z0)).
    """
    deg = max(p.degree, 0)
    if order is None:
        order = deg
    c = np.zeros(deg + 1, dtype=np.complex128)
    if not p.is_zero:
        c[: p.coeffs.size] = p.coeffs
    for i in range(min(order + 1, deg)):
        for j in range(deg - 1, i - 1, -1):
            c[j] += z0 * c[j + 1]
    out = np.zeros(order + 1, dtype=np.complex128)
    out[: min(order, deg) + 1] = c[: min(order, deg) + 1]
    return out


@dataclass(frozen=True)
class RootSet:
    """Roots with multiplicities plus a residual bound over the returned roots."""

    entries: tuple  # of (root: complex, multiplicity: int)
    residual_bound: float

    def flattened(self) -> list[complex]:
        out = []
        for r, m in self.entries:
            out.extend([r] * m)
        return out

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.entries)


def _newton_polish(p: Poly, z: complex, steps: int = 20) -> complex:
    dp = p.deriv()
    best, best_val = z, abs(eval_poly(p, z))
    cur = z
    for _ in range(steps):
        f = eval_poly(p, cur)
        df = eval_poly(dp, cur)
        if df == 0:
            break
        nxt = cur - f / df
        val = abs(eval_poly(p, nxt))
        if val < best_val:
            best, best_val = nxt, val
        if abs(nxt - cur) < 1e-16 * (1 + abs(nxt)):
            break
        cur = nxt
    return best


def roots(p: Poly, cluster_tol: float = CLUSTER_TOL) -> RootSet:
    """All complex roots with multiplicity, via companion-matrix eigenvalues
    plus Newton polishing; clusters within ``cluster_tol`` are merged."""
    if p.is_zero or p.degree < 1:
        raise PolyError("no roots defined for a constant polynomial")
    raw = np.roots(p.coeffs[::-1])
    polished = [_newton_polish(p, complex(r)) for r in raw]
    polished.sort(key=lambda z: (z.real, z.imag))
    clusters: list[list[complex]] = []
    for z in polished:
        placed = False
        for cl in clusters:
            if abs(z - cl[0]) <= cluster_tol:
                cl.append(z)
                placed = True
                break
        if not placed:
            clusters.append([z])
    entries = []
    for cl in clusters:
        center = complex(np.mean(cl))
        if len(cl) > 1 and abs(center) <= cluster_tol:
            center = 0j  # snap tiny multiple clusters onto the origin
        entries.append((center, len(cl)))
    entries.sort(key=lambda e: (abs(e[0]), np.angle(e[0]) if e[0] != 0 else 0.0))
    residual = max(abs(eval_poly(p, r)) for r, _ in entries)
    residual *= 1.0 + 1e-12 * (p.degree + 1)
    return RootSet(tuple(entries), residual)


def max_modulus_on_circle(p: Poly, r: float, samples: int | None = None) -> float:
    """Upper estimate of max_{|z|=r} |p(z)| by dense sampling plus a certified
    additive slack from derivative bounds along the circle."""
    if r < 0:
        raise PolyError("radius must be nonnegative")
    if p.is_zero:
        return 0.0
    if r == 0 or p.degree == 0:
        return abs(complex(p.coeffs[0]))
    if p.degree == 1:
        # exact: triangle equality is attained at the aligned phase
        return abs(complex(p.coeffs[0])) + abs(complex(p.coeffs[1])) * r
    min_samples = 8 * (p.degree + 1)
    if samples is None:
        samples = max(256, min_samples)
    elif samples < min_samples:
        raise PolyError(f"samples={samples} below required {min_samples}")
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    z = r * np.exp(1j * theta)
    m0 = float(np.max(np.abs(eval_poly(p, z))))
    # coefficient bounds max_{|z|=r}|p^(j)| <= sum_i i..(i-j+1) |c_i| r^(i-j)
    idx = np.arange(p.coeffs.size, dtype=float)
    ac = np.abs(p.coeffs)
    rpow = r ** np.clip(idx - 1, 0, None)
    m1 = float(np.sum(idx * ac * rpow))
    rpow2 = r ** np.clip(idx - 2, 0, None)
    m2 = float(np.sum(idx * np.clip(idx - 1, 0, None) * ac * rpow2))
    h = np.pi / samples  # half of the angular step
    # the max of |p| along the circle is within h of a sample and the angular
    # derivative vanishes there, so a second-order Taylor slack suffices:
    # |d2/dtheta2 p(r e^{i theta})| <= r*m1 + r^2*m2
    slack = 0.5 * h * h * (r * m1 + r * r * m2)
    return m0 + slack
