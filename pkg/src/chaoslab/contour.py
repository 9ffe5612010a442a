"""Winding numbers along piecewise paths, argument-principle zero counting,
the scaled Rouche disk check, and the lens-shaped region machinery.

Winding numbers use the variation-of-argument convention divided by 2 pi.
Sampling is adaptive: a step is accepted only when the argument increment is
below pi/2, and a near-zero of the integrand on the path aborts the
computation (margins are sampled, not interval-certified).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .poly import Poly, divides, eval_poly, max_modulus_on_circle, one_plus_z_pow, taylor_shift


class ContourError(ValueError):
    pass


class ZeroOnPathError(ContourError):
    pass


class NonIntegerWindingError(ContourError):
    pass


@dataclass(frozen=True)
class LineSeg:
    start: complex
    end: complex

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return self.start + (self.end - self.start) * t

    @property
    def source(self):
        return self.start

    @property
    def target(self):
        return self.end


@dataclass(frozen=True)
class ArcSeg:
    center: complex
    radius: float
    t_start: float
    t_end: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ContourError("arc radius must be positive")

    def point(self, t):
        t = np.asarray(t, dtype=float)
        ang = self.t_start + (self.t_end - self.t_start) * t
        return self.center + self.radius * np.exp(1j * ang)

    @property
    def source(self):
        return complex(self.point(0.0))

    @property
    def target(self):
        return complex(self.point(1.0))


ENDPOINT_TOL = 1e-10


@dataclass(frozen=True)
class OrientedPath:
    segments: tuple
    closed: bool = False

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ContourError("empty path")
        for a, b in zip(segs, segs[1:]):
            if abs(a.target - b.source) > ENDPOINT_TOL:
                raise ContourError("non-contiguous path segments")
        if self.closed and abs(segs[-1].target - segs[0].source) > ENDPOINT_TOL:
            raise ContourError("path marked closed but endpoints differ")
        object.__setattr__(self, "segments", segs)


def _as_evaluator(f):
    if isinstance(f, Poly):
        return lambda z: eval_poly(f, z)
    return f


MAX_SAMPLES_PER_SEGMENT = 1 << 20


def winding_segment(f, seg, tol: float = 1e-9, init_samples: int = 256):
    """Argument variation of f along one segment divided by 2 pi."""
    fe = _as_evaluator(f)
    ts = np.linspace(0.0, 1.0, init_samples + 1)
    vals = np.asarray(fe(seg.point(ts)), dtype=np.complex128)
    while True:
        mags = np.abs(vals)
        scale = float(np.max(mags))
        if scale == 0.0 or float(np.min(mags)) < tol * scale:
            raise ZeroOnPathError("integrand vanishes (or nearly) on the path")
        incs = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(incs) >= 0.5 * np.pi
        if not bad.any():
            return float(np.sum(incs) / (2 * np.pi))
        if ts.size - 1 >= MAX_SAMPLES_PER_SEGMENT:
            raise ContourError("refinement cap exceeded while tracking the argument")
        mid = 0.5 * (ts[np.where(bad)[0]] + ts[np.where(bad)[0] + 1])
        ts = np.sort(np.concatenate([ts, mid]))
        vals = np.asarray(fe(seg.point(ts)), dtype=np.complex128)


def winding(f, path: OrientedPath, tol: float = 1e-9) -> float:
    """Winding number (argument variation / 2 pi) of f along the path."""
    return float(sum(winding_segment(f, seg, tol) for seg in path.segments))


def count_zeros(f, boundary: OrientedPath, tol: float = 1e-9) -> int:
    """Zeros of f enclosed by a closed counterclockwise boundary, counted
    with multiplicity, from the winding number."""
    if not boundary.closed:
        raise ContourError("zero counting needs a closed boundary")
    w = winding(f, boundary, tol)
    r = round(w)
    if abs(w - r) > 0.1:
        raise NonIntegerWindingError(f"closed-path winding {w} is not near an integer")
    return int(r)


def circle_path(center: complex = 0.0, radius: float = 1.0) -> OrientedPath:
    return OrientedPath((ArcSeg(center, radius, 0.0, 2 * np.pi),), closed=True)


# ---------------------------------------------------------------------------
# Rouche disk for q_c = k (c z^n - q)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RoucheResult:
    delta: float
    verified: bool
    margin: float
    zero_count: int | None
    image_max: float | None
    alpha_q: float
    checks: dict


def scaled_rouche_poly(q: Poly, n: int, k: float, delta: float) -> Poly:
    """q_c in the coordinate z = delta*w: w^n / 2 - k q(delta w).  Exact for
    any magnitude of c because k c delta^n = 1/2 by construction."""
    coeffs = np.zeros(n + 1, dtype=np.complex128)
    coeffs[n] = 0.5
    for j, cj in enumerate(q.coeffs):
        coeffs[j] -= k * cj * delta**j
    return Poly(coeffs)


def rouche_disk(q: Poly, n: int, k: float, c: float | None = None, *,
                log_c: float | None = None) -> RoucheResult:
    """Certified check that k (c z^n - q) maps its root disk of radius
    (2kc)^(-1/n) into the unit disk with all n zeros inside."""
    if q.is_zero or q.constant_term != 0:
        raise ContourError("q must be a nonzero polynomial vanishing at 0")
    if q.degree >= n:
        raise ContourError("need deg q < n")
    if log_c is None:
        if c is None or c <= 0:
            raise ContourError("need c > 0")
        log_c = math.log(c)
    delta = math.exp(-(math.log(2 * k) + log_c) / n)
    alpha_q = max_modulus_on_circle(q.shift_down(1), 1.0)
    threshold = min(1.0, 1.0 / (2 * k * alpha_q)) if alpha_q > 0 else 1.0
    cond = delta < threshold
    # |k q| on the delta circle, conservative upper estimate
    kq_max = k * max_modulus_on_circle(q, delta)
    margin = 0.5 - kq_max
    checks = {"delta_below_threshold": cond, "perturbation_margin": margin}
    if not cond or margin <= 0:
        return RoucheResult(delta, False, margin, None, None, alpha_q, checks)
    v = scaled_rouche_poly(q, n, k, delta)
    try:
        count = count_zeros(v, circle_path())
    except ContourError:
        count = -1
    image_max = max_modulus_on_circle(v, 1.0)
    checks["zero_count_is_n"] = count == n
    checks["image_inside_disk"] = image_max < 1.0
    verified = cond and margin > 0 and count == n and image_max < 1.0
    return RoucheResult(delta, verified, margin, count, image_max, alpha_q, checks)


# ---------------------------------------------------------------------------
# the lens region and its boundary
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegionWn:
    alpha: float
    n: int
    c: float
    epsilon_n: float
    gamma1: ArcSeg
    gamma2: LineSeg
    gamma3: ArcSeg
    gamma4: LineSeg

    def boundary(self) -> OrientedPath:
        return OrientedPath((self.gamma1, self.gamma2, self.gamma3, self.gamma4),
                            closed=True)

    @property
    def outer_radius(self) -> float:
        return abs(-1 + self.epsilon_n * np.exp(1j * self.alpha))

    def contains(self, z) -> np.ndarray:
        """Strict interior test through the defining polar inequalities
        around -1, with the near branch of the small circle cut out."""
        z = np.asarray(z, dtype=np.complex128)
        w = z + 1.0
        r = np.abs(w)
        beta = np.angle(w)
        ca, sa = math.cos(self.alpha), math.sin(self.alpha)
        inside_sector = np.abs(beta) < self.alpha
        below_arc = r < self.epsilon_n
        disc = np.maximum(np.cos(beta) ** 2 - ca * ca, 0.0)
        near_branch = np.cos(beta) - np.sqrt(disc)
        return inside_sector & below_arc & (r > near_branch)

    def sample_grid(self, n_beta: int = 48, n_r: int = 48) -> np.ndarray:
        betas = np.linspace(-self.alpha, self.alpha, n_beta + 2)[1:-1]
        pts = []
        ca = math.cos(self.alpha)
        for b in betas:
            lo = math.cos(b) - math.sqrt(max(math.cos(b) ** 2 - ca * ca, 0.0))
            rs = np.linspace(lo, self.epsilon_n, n_r + 2)[1:-1]
            pts.append(-1.0 + rs * np.exp(1j * b))
        return np.concatenate(pts)


def build_region(alpha: float, n: int, c: float) -> RegionWn:
    """The four-piece counterclockwise boundary of the lens region."""
    if not (0 < alpha < 1):
        raise ContourError("need 0 < alpha < 1")
    if c <= 1:
        raise ContourError("need c > 1")
    eps = (2 * c) ** (1.0 / n)
    ca, sa = math.cos(alpha), math.sin(alpha)
    A = -1 + eps * np.exp(-1j * alpha)
    B = -1 + eps * np.exp(1j * alpha)
    C = -1 + ca * np.exp(1j * alpha)
    Dp = -1 + ca * np.exp(-1j * alpha)
    g1 = ArcSeg(-1.0, eps, -alpha, alpha)                      # A -> B
    g2 = LineSeg(B, C)                                         # inward on the upper ray
    g3 = ArcSeg(0.0, sa, np.pi / 2 + alpha, 3 * np.pi / 2 - alpha)  # C -> D
    g4 = LineSeg(Dp, A)                                        # outward on the lower ray
    return RegionWn(alpha, n, c, eps, g1, g2, g3, g4)


def strpo_bound_check(f: Poly, g_eval, segment: LineSeg, m: int,
                      tol: float = 1e-9):
    """Winding of f+g along a straight segment, checked against the strict
    (m+1)/2 bound that holds when g stays on a line through 0."""
    fe = _as_evaluator(f)
    total = winding_segment(lambda z: fe(z) + g_eval(z), segment, tol)
    return abs(total) < (m + 1) / 2.0, total


# ---------------------------------------------------------------------------
# region search for q_n = k z ((1+z)^n - p)
# ---------------------------------------------------------------------------

@dataclass
class RegionRecord:
    n: int
    alpha: float
    region: RegionWn
    nu: int | None
    winding_total: float
    winding_parts: tuple
    darg_gamma1: float
    w_p_gamma3: float
    bound_value: float
    bound_value_paper_display: float
    qn_image_max: float
    qn_image_ok: bool
    contained_roots: int | None
    outer_radius: float
    verified: bool
    reasons: tuple


def _base_fn(n: int, p: Poly):
    def f(z):
        z = np.asarray(z, dtype=np.complex128)
        return np.exp(n * np.log(1.0 + z)) - eval_poly(p, z)
    return f


def _qn_fn(n: int, p: Poly, k: float):
    base = _base_fn(n, p)
    def f(z):
        z = np.asarray(z, dtype=np.complex128)
        return k * z * base(z)
    return f


def base_roots(n: int, p: Poly) -> np.ndarray:
    """Roots of (1+z)^n - p via the shifted polynomial in w = 1 + z."""
    shifted = taylor_shift(p, -1.0, max(p.degree, 0))
    deg = max(n, p.degree)
    coeffs = np.zeros(deg + 1, dtype=np.complex128)
    coeffs[: shifted.size] -= shifted
    coeffs[n] += 1.0
    w = np.roots(coeffs[::-1])
    return w - 1.0


def region_check(n: int, alpha: float, p: Poly, k: float, c_bar: float,
                 delta: float, m: int, tol: float = 1e-9,
                 count_roots: bool = True) -> RegionRecord:
    region = build_region(alpha, n, c_bar)
    base = _base_fn(n, p)
    reasons = []
    parts = []
    for seg in (region.gamma1, region.gamma2, region.gamma3, region.gamma4):
        parts.append(winding_segment(base, seg, tol))
    total = float(sum(parts))
    nu = round(total)
    if abs(total - nu) > 0.1:
        reasons.append("winding not near an integer")
        nu_ok = False
    else:
        nu_ok = True
    w_p_g3 = 0.0
    if p.degree >= 1:
        w_p_g3 = winding_segment(p, region.gamma3, tol)
    bound = n * alpha / math.pi - 2 - abs(w_p_g3) - max(p.degree, 0)
    bound_paper = 2 * n * alpha - 2 - abs(w_p_g3) - max(p.degree, 0)
    qn = _qn_fn(n, p, k)
    image_vals = np.abs(qn(region.sample_grid()))
    image_max = float(np.max(image_vals))
    image_ok = image_max < 1.0
    if not image_ok:
        reasons.append("image leaves the unit disk")
    outer = region.outer_radius
    if outer >= delta:
        reasons.append("region not inside the delta disk")
    contained = None
    if count_roots and nu_ok:
        rts = base_roots(n, p)
        contained = int(np.sum(region.contains(rts)))
        if contained != nu:
            reasons.append("winding count disagrees with root containment")
    if nu_ok and nu < m:
        reasons.append("fewer than m zeros")
    if nu_ok and not (nu > bound):
        reasons.append("below the winding lower bound")
    verified = not reasons and nu_ok
    return RegionRecord(
        n=n, alpha=alpha, region=region, nu=nu if nu_ok else None,
        winding_total=total, winding_parts=tuple(parts),
        darg_gamma1=2 * math.pi * parts[0], w_p_gamma3=w_p_g3,
        bound_value=bound, bound_value_paper_display=bound_paper,
        qn_image_max=image_max, qn_image_ok=image_ok,
        contained_roots=contained, outer_radius=outer,
        verified=verified, reasons=tuple(reasons))


def find_chaotic_region(k: float, delta: float, p: Poly, m: int, n_range,
                        seed: int = 0, alpha: float | None = None,
                        tol: float = 1e-9, count_roots: bool = True) -> list:
    """Per-n verification records for q_n = k z ((1+z)^n - p): region built,
    winding-counted, image-checked, and cross-checked against direct root
    containment.  Failures are recorded, not raised."""
    if p.is_zero:
        raise ContourError("p must be nonzero")
    if k <= 0 or delta <= 0 or m < 1:
        raise ContourError("need k, delta > 0 and m >= 1")
    c_bar = max(1.0 + 1e-12, max_modulus_on_circle(p, 1.0))
    rng = np.random.default_rng(seed)
    alpha0 = alpha if alpha is not None else 0.9 * min(delta, 1.0 / (3 * k * c_bar), 1.0)

    def alpha_admissible(a: float) -> bool:
        if p.degree < 1:
            return True
        th = np.linspace(0, 2 * np.pi, 512, endpoint=False)
        vals = np.abs(eval_poly(p, math.sin(a) * np.exp(1j * th)))
        return float(np.min(vals)) > 1e-9 * (1.0 + float(np.max(vals)))

    a_glob = alpha0
    for _ in range(32):
        if alpha_admissible(a_glob):
            break
        a_glob = float(rng.uniform(alpha0 / 2, alpha0))

    records = []
    for n in n_range:
        a_try = a_glob
        rec = None
        for attempt in range(32):
            try:
                rec = region_check(n, a_try, p, k, c_bar, delta, m, tol, count_roots)
                break
            except ZeroOnPathError:
                a_try = float(rng.uniform(alpha0 / 2, alpha0))
                if not alpha_admissible(a_try):
                    continue
        if rec is None:
            rec = RegionRecord(n, a_try, build_region(a_try, n, c_bar), None,
                               float("nan"), (), float("nan"), 0.0,
                               float("nan"), float("nan"), float("nan"), False,
                               None, float("nan"), False,
                               ("zero on path for all attempted angles",))
        records.append(rec)
    return records


def first_verified(records) -> int | None:
    for rec in records:
        if rec.verified:
            return rec.n
    return None


# ---------------------------------------------------------------------------
# divisor extraction
# ---------------------------------------------------------------------------

def _select_region_roots(all_roots, region: RegionWn, m: int):
    inside = [z for z in all_roots if bool(region.contains(z))]
    if len(inside) < m:
        raise ContourError(
            f"only {len(inside)} certified interior roots, need {m}")
    inside.sort(key=lambda z: (abs(z), math.atan2(z.imag, z.real) % (2 * math.pi)))
    return inside[:m]


def qn_poly(k: float, n: int, p: Poly) -> Poly:
    """k z ((1+z)^n - p) as an explicit polynomial."""
    return k * (Poly.x() * (one_plus_z_pow(n) - p))


def extract_divisor(qn: Poly, region: RegionWn, m: int,
                    structured: tuple | None = None) -> Poly:
    """Monic degree-m polynomial over m roots of qn inside the region,
    closest to 0 first; the output divides qn.

    ``structured`` may carry (k, n, p) to locate the roots through the
    shifted-basis polynomial instead of the raw coefficient form.
    """
    if structured is not None:
        k, n, p = structured
        rts = [0j]
        for z in base_roots(n, p):
            rts.append(0j if abs(z) < 1e-12 else complex(z))
    else:
        from .poly import roots as poly_roots

        rts = poly_roots(qn).flattened()
    chosen = _select_region_roots(rts, region, m)
    r = Poly.from_roots(chosen)
    if not divides(r, qn, 1e-7):
        raise ContourError("extracted divisor fails the divisibility replay")
    return r
