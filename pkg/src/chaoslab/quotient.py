"""Quotient seminorms on the polynomial algebra through the truncated series
algebra, as constrained complex-l1 minimization with certificates.

The power-ideal problem constrains the leading Taylor coefficients of the
substituted series; only monomials of total degree below the order carry
nonzero constraints (every tuple component vanishes at 0), so that problem is
finite and its value is exact up to solver gap.  The divisor-ideal problem
constrains jets at the divisor's roots; its witness gives an upper bound and
a node-functional dual gives a lower bound that is valid without truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize
import scipy.sparse

from .poly import Poly, divides, roots as poly_roots, taylor_shift
from .series import (
    SubstTuple,
    TruncatedSeries,
    count_multi_indices,
    embed_poly,
    iter_multi_indices,
    l1_norm,
)
from .vandermonde import Lambda, p_row


class QuotientError(ValueError):
    pass


class InfeasibleError(QuotientError):
    """No representative exists at this truncation."""


class DivisorDomainError(QuotientError):
    """A divisor root lies outside the tuple's certified contraction disk."""


class ProblemTooLargeError(QuotientError):
    pass


# ---------------------------------------------------------------------------
# complex basis pursuit: minimize sum |x_t| subject to A x = b
# ---------------------------------------------------------------------------

@dataclass
class L1Solution:
    x: np.ndarray
    value: float
    residuals: np.ndarray          # per-row |Ax-b| after row equilibration
    solver_gap: float              # value minus the finite-problem dual bound
    finite_dual: float
    dual_y: np.ndarray             # original-row multipliers, dual feasible
    dual_scale: float
    iterations: int
    rank_deficient: bool


def _shrink(v: np.ndarray, kappa: float) -> np.ndarray:
    mag = np.abs(v)
    with np.errstate(invalid="ignore", divide="ignore"):
        factor = np.where(mag > kappa, 1.0 - kappa / np.where(mag > 0, mag, 1.0), 0.0)
    return v * factor


def _admm(A, b, AAH_factor, x0, tol, max_iter):
    m, n = A.shape
    rho = 1.0
    z = x0.copy()
    u = np.zeros(n, dtype=np.complex128)

    def project(v):
        return v - A.conj().T @ scipy.linalg.cho_solve(AAH_factor, A @ v - b)

    x = project(z - u)
    it = 0
    for it in range(1, max_iter + 1):
        z_old = z
        z = _shrink(x + u, 1.0 / rho)
        u = u + x - z
        x = project(z - u)
        if it % 10 == 0 or it == max_iter:
            r_norm = float(np.linalg.norm(x - z))
            s_norm = float(rho * np.linalg.norm(z - z_old))
            eps = tol * math.sqrt(n) + tol * max(np.linalg.norm(x), np.linalg.norm(z))
            if r_norm < eps and s_norm < eps:
                break
            if it % 50 == 0:
                if r_norm > 10 * s_norm:
                    rho *= 2.0
                    u *= 0.5
                elif s_norm > 10 * r_norm:
                    rho *= 0.5
                    u *= 2.0
    return project(z), z, it


def _lp_warm_start(A, b, directions: int = 16):
    """Polygonal norm relaxation: an LP over nonnegative weights on evenly
    spaced unit directions; overestimates the complex-l1 value by at most
    1/cos(pi/directions)."""
    m, n = A.shape
    u = np.exp(2j * np.pi * np.arange(directions) / directions)
    blocks = (A[:, :, None] * u[None, None, :]).reshape(m, n * directions)
    A_eq = scipy.sparse.csr_matrix(np.vstack([blocks.real, blocks.imag]))
    b_eq = np.concatenate([b.real, b.imag])
    res = scipy.optimize.linprog(
        c=np.ones(n * directions), A_eq=A_eq, b_eq=b_eq,
        bounds=(0, None), method="highs")
    if not res.success:
        return None
    w = res.x.reshape(n, directions)
    return w @ u


def solve_l1(A, b, dim: int | None = None, *, tol: float = 1e-8,
             max_iter: int = 50000, warm: np.ndarray | None = None,
             lp_warm_start: bool = False, polish: bool = True) -> L1Solution:
    """Minimize the sum of complex moduli subject to A x = b.

    Operator-splitting (ADMM) on the cone program, with an optional 16-gon LP
    warm start, a support polish pass, and a duality-based gap bound computed
    against the full column set.
    """
    A = np.asarray(A, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128).ravel()
    if A.ndim != 2 or A.shape[0] != b.size:
        raise QuotientError("constraint matrix / rhs shape mismatch")
    if dim is not None and A.shape[1] != dim:
        raise QuotientError("dim does not match the constraint matrix")
    m, n = A.shape
    if n == 0:
        raise QuotientError("no variables")

    # row equilibration keeps the projection solve well scaled
    d = np.maximum(np.max(np.abs(A), axis=1), 1e-300)
    As = A / d[:, None]
    bs = b / d

    # rank handling: compress onto the row space, detect inconsistency
    U, s, Vh = np.linalg.svd(As, full_matrices=False)
    rank = int(np.sum(s > max(s[0], 1e-300) * 1e-12)) if s.size else 0
    rank_deficient = rank < m
    if rank == 0:
        if np.linalg.norm(bs) > 1e-12:
            raise InfeasibleError("no representative at this truncation")
        x = np.zeros(n, dtype=np.complex128)
        return L1Solution(x, 0.0, np.zeros(m), 0.0, 0.0,
                          np.zeros(m, dtype=np.complex128), 1.0, 0, rank_deficient)
    W = U[:, :rank].conj().T
    A2, b2 = W @ As, W @ bs

    # least-norm feasibility probe
    x_ln = A2.conj().T @ np.linalg.solve(A2 @ A2.conj().T, b2)
    feas_res = np.linalg.norm(As @ x_ln - bs)
    if feas_res > 1e-7 * (1.0 + np.linalg.norm(bs)):
        raise InfeasibleError("no representative at this truncation")

    G = A2 @ A2.conj().T
    G = G + np.eye(rank) * (1e-14 * np.trace(G).real / max(rank, 1))
    factor = scipy.linalg.cho_factor(G)

    x0 = warm
    if x0 is None and lp_warm_start:
        x0 = _lp_warm_start(A2, b2)
    if x0 is None:
        x0 = x_ln
    x, z_sparse, iters = _admm(A2, b2, factor,
                               np.asarray(x0, dtype=np.complex128), tol, max_iter)

    if polish and n > rank:
        support = np.abs(z_sparse) > 0
        if 0 < support.sum() < n:
            idx = np.where(support)[0]
            As_small = A2[:, idx]
            ss = np.linalg.svd(As_small, compute_uv=False)
            rk = int(np.sum(ss > max(ss[0], 1e-300) * 1e-12))
            if rk == rank:
                Gs = As_small @ As_small.conj().T
                Gs = Gs + np.eye(rank) * (1e-14 * np.trace(Gs).real / max(rank, 1))
                xs, zs, _ = _admm(As_small, b2, scipy.linalg.cho_factor(Gs),
                                  x[idx], tol * 0.1, max_iter)
                x_try = np.zeros_like(x)
                x_try[idx] = xs
                if np.sum(np.abs(x_try)) < np.sum(np.abs(x)) and \
                        np.linalg.norm(A2 @ x_try - b2) <= 1e-8 * (1 + np.linalg.norm(b2)):
                    x = x_try
                    z_full = np.zeros_like(x)
                    z_full[idx] = zs
                    z_sparse = z_full

    value = float(np.sum(np.abs(x)))

    # dual-feasible certificate: match the subgradient on the support columns
    # of the shrunk iterate (exactly sparse at the solution)
    big = np.abs(z_sparse) > 1e-10 * max(np.max(np.abs(z_sparse)), 1e-300)
    if np.any(big):
        g_s = z_sparse[big] / np.abs(z_sparse[big])
        y2, *_ = np.linalg.lstsq(A2[:, big].conj().T, g_s, rcond=None)
    else:
        y2 = np.zeros(rank, dtype=np.complex128)
    aty = A2.conj().T @ y2
    scale = float(np.max(np.abs(aty))) if aty.size else 0.0
    if scale <= 0:
        finite_dual = 0.0
        y2 = np.zeros(rank, dtype=np.complex128)
        scale = 1.0
    else:
        y2 = y2 / scale
        finite_dual = float(abs(np.vdot(y2, b2)))
    gap = max(0.0, value - finite_dual)

    # map multipliers back to the original rows: psi = sum_r y_orig[r] * row_r
    y_orig = (W.conj().T @ y2) / d
    residuals = np.abs(As @ x - bs)
    return L1Solution(x, value, residuals, gap, finite_dual, y_orig,
                      1.0, iters, rank_deficient)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass
class NormCertificate:
    """A quotient-seminorm value with a feasible witness, per-constraint
    residuals, a solver gap, and a certified lower bound."""

    value: float
    witness: TruncatedSeries | None
    residuals: np.ndarray
    solver_gap: float
    lower_bound: float
    bound_kind: str   # 'exact-within-gap' or 'upper-bound'
    lower_kind: str   # 'untruncated' or 'finite-problem'
    meta: dict = field(default_factory=dict)

    def check(self, feas_tol: float = 1e-7):
        if self.witness is not None:
            assert abs(l1_norm(self.witness) - self.value) <= 1e-9 * (1 + self.value)
        assert self.solver_gap >= 0
        assert np.all(self.residuals <= feas_tol)
        return True


def _witness_from(x, monos, k, cap) -> TruncatedSeries:
    terms = {}
    for c, idx in zip(x, monos):
        if c != 0:
            terms[idx] = complex(c)
    return TruncatedSeries(k, cap, terms)


def powers_matrix(xi: SubstTuple, n: int, D: int, col_budget: int = 60000):
    """Constraint matrix of the order-n power-ideal problem over the monomials
    of total degree <= min(n-1, D); all other monomials have zero rows here."""
    deg_cap = min(n - 1, D)
    ncols = count_multi_indices(xi.k, deg_cap)
    if ncols > col_budget:
        raise ProblemTooLargeError(
            f"{ncols} monomial columns exceed budget {col_budget}")
    key = ("powmat", n, deg_cap)
    hit = xi._pow_cache.get(key)
    if hit is not None:
        return hit
    monos = list(iter_multi_indices(xi.k, deg_cap))
    A = np.empty((n, len(monos)), dtype=np.complex128)
    for col, idx in enumerate(monos):
        A[:, col] = xi.monomial_alpha(idx, n - 1)
    xi._pow_cache[key] = (A, monos)
    return A, monos


def quotient_norm_powers(p: Poly, xi: SubstTuple, n: int, D: int,
                         col_budget: int = 60000, tol: float = 1e-8) -> NormCertificate:
    """Seminorm of p modulo the order-n power ideal at truncation D."""
    if n < 1:
        raise QuotientError("order must be >= 1")
    b = np.zeros(n, dtype=np.complex128)
    take = min(n, p.coeffs.size)
    b[:take] = p.coeffs[:take]
    exact = D >= n - 1
    if not np.any(b):
        zero = TruncatedSeries.zero(xi.k, D)
        return NormCertificate(0.0, zero, np.zeros(n), 0.0, 0.0,
                               "exact-within-gap" if exact else "upper-bound",
                               "untruncated" if exact else "finite-problem",
                               {"n": n, "dual_y": np.zeros(n, dtype=np.complex128)})
    A, monos = powers_matrix(xi, n, D, col_budget)
    warm = None
    if p.degree < A.shape[1] and xi.k >= 1:
        # embedding the truncated target through the first variable is feasible
        warm = np.zeros(A.shape[1], dtype=np.complex128)
        for j in range(take):
            idx = tuple([j] + [0] * (xi.k - 1))
            try:
                warm[monos.index(idx)] = b[j]
            except ValueError:
                warm = None
                break
    sol = solve_l1(A, b, warm=warm, tol=tol)
    witness = _witness_from(sol.x, monos, xi.k, D)
    value = l1_norm(witness)
    return NormCertificate(
        value, witness, sol.residuals, max(0.0, value - sol.finite_dual),
        sol.finite_dual,
        "exact-within-gap" if exact else "upper-bound",
        "untruncated" if exact else "finite-problem",
        {"n": n, "dual_y": sol.dual_y, "iterations": sol.iterations,
         "columns": len(monos)})


def _clusters_from_poly(q: Poly, xi: SubstTuple):
    rs = poly_roots(q)
    return list(rs.entries)


def _check_roots_inside(clusters, xi: SubstTuple):
    worst = max(abs(lam) for lam, _ in clusters)
    if worst >= xi.gamma:
        raise DivisorDomainError(
            f"divisor root at |z|={worst:.6g} outside the certified disk "
            f"radius {xi.gamma:.6g}")
    return worst


def divisor_matrix(xi: SubstTuple, clusters, sup_deg: int, col_budget: int = 60000):
    """Jet-constraint matrix at the divisor's root clusters over monomials of
    total degree <= sup_deg.  Row block for a cluster (lam, r) holds the jet
    coefficients 0..r-1 of each monomial at lam."""
    ncols = count_multi_indices(xi.k, sup_deg)
    if ncols > col_budget:
        raise ProblemTooLargeError(
            f"{ncols} monomial columns exceed budget {col_budget}")
    monos = list(iter_multi_indices(xi.k, sup_deg))
    E = np.array(monos, dtype=np.int64)
    rows = []
    for lam, r in clusters:
        if r == 1:
            w = np.array([poly_eval_cached(pj, lam) for pj in xi.polys])
            row = np.ones(len(monos), dtype=np.complex128)
            for j in range(xi.k):
                row = row * (w[j] ** E[:, j])
            rows.append(row[None, :])
        else:
            base = [taylor_shift(pj, lam, r - 1) for pj in xi.polys]
            block = np.empty((r, len(monos)), dtype=np.complex128)
            jet_cache: dict = {}
            for col, idx in enumerate(monos):
                jet = np.zeros(r, dtype=np.complex128)
                jet[0] = 1.0
                for j, t in enumerate(idx):
                    if t:
                        jet = np.convolve(jet, _jet_pow(base[j], t, r, jet_cache, j))[:r]
                block[:, col] = jet
            rows.append(block)
    return np.vstack(rows), monos


def _jet_pow(base: np.ndarray, t: int, r: int, cache: dict, j: int) -> np.ndarray:
    key = (j, t)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if t == 1:
        out = base[:r]
    else:
        half = _jet_pow(base, t // 2, r, cache, j)
        out = np.convolve(half, half)[:r]
        if t & 1:
            out = np.convolve(out, base[:r])[:r]
    cache[key] = out
    return out


def poly_eval_cached(p: Poly, z: complex) -> complex:
    return p(z)


def _divisor_dual_lower(p: Poly, xi: SubstTuple, clusters, D: int,
                        tol: float = 1e-8):
    """Certified lower bound for the divisor-ideal seminorm, valid for the
    untruncated algebra: a node functional built from a small power-ideal
    dual, with tail weights from the determinant-ratio recurrences."""
    nq = sum(r for _, r in clusters)
    m0 = min(nq, 12, D + 1)
    head = quotient_norm_powers(p, xi, m0, D, tol=tol)
    y = head.meta.get("dual_y")
    if y is None or head.lower_bound <= 0:
        return 0.0, "finite-problem", {}
    lam_flat = []
    for lam, r in clusters:
        lam_flat.extend([lam] * r)
    lbd = Lambda(tuple(lam_flat), xi.gamma)
    ghat = xi.gamma
    maxabs = max(abs(z) for z in lam_flat)
    ratio0 = maxabs / ghat

    # psi(p): exact pairing of the functional with the target
    p_pad = np.zeros(max(p.coeffs.size, m0), dtype=np.complex128)
    p_pad[: p.coeffs.size] = p.coeffs
    psi_p = 0j
    rows_cache = {}
    for j in range(1, m0 + 1):
        if p.degree >= nq:
            rows_cache[j] = p_row(lbd, j, max(p.degree, nq))
            psi_p += y[j - 1] * np.dot(rows_cache[j][: p_pad.size], p_pad)
        else:
            psi_p += y[j - 1] * p_pad[j - 1]
    if psi_p == 0:
        return 0.0, "untruncated", {}

    # tail weights w_i = sum_j y_j P(nq, j, i) for i >= nq (exactly 0 below)
    i_max = nq + 64
    tail_sum = 0.0
    rates = []
    meta = {}
    while True:
        w = np.zeros(i_max + 1, dtype=np.complex128)
        for j in range(1, m0 + 1):
            w += y[j - 1] * p_row(lbd, j, i_max)
        r_i = np.abs(w[nq:]) / ghat ** np.arange(nq, i_max + 1, dtype=float)
        tail_sum = float(np.sum(r_i))
        nz = r_i[-24:]
        rates = [nz[t + 1] / nz[t] for t in range(len(nz) - 1) if nz[t] > 0]
        last = float(r_i[-1])
        if last <= 1e-17 * max(abs(psi_p), 1e-300):
            remainder = last
            break
        rho = max(rates) if rates else 1.0
        if rho < 0.98:
            remainder = 4.0 * last * rho / (1.0 - rho)
            break
        if i_max >= nq + 4096:
            return 0.0, "finite-problem", {"tail_divergent": True,
                                           "ratio": ratio0}
        i_max = 2 * i_max
    T = tail_sum + remainder
    lower = abs(psi_p) / (1.0 + T)
    meta.update({"tail": T, "head_order": m0, "ratio": ratio0,
                 "tail_terms": int(i_max - nq + 1)})
    return float(lower), "untruncated", meta


def _eval_dual_lower(p: Poly, xi: SubstTuple, clusters, sol: L1Solution,
                     col_budget: int = 20000):
    """Lower bound from the evaluation functional sum_s y_s a(xi(lambda_s)),
    using the finite solve's multipliers; only for simple-root divisors and
    cheap enumeration ranges."""
    if any(r != 1 for _, r in clusters):
        return 0.0
    lams = [lam for lam, _ in clusters]
    y = sol.dual_y
    W = np.array([[pj(lam) for pj in xi.polys] for lam in lams])  # (s, j)
    rho = np.max(np.abs(W), axis=1)
    if np.any(rho >= 1.0):
        return 0.0
    obj = abs(sum(y[s] * p(lams[s]) for s in range(len(lams))))
    if obj == 0:
        return 0.0
    ysum = float(np.sum(np.abs(y)))
    rho_max = float(np.max(rho))
    # enumerate |t| <= T exactly; beyond, |psi(u^t)| <= ysum * rho_max^|t|
    T = 1
    while ysum * rho_max ** (T + 1) > 1e-12 and count_multi_indices(xi.k, T + 1) <= col_budget:
        T += 1
    head = 0.0
    for idx in iter_multi_indices(xi.k, T):
        v = 0j
        for s in range(len(lams)):
            term = y[s]
            for j, t in enumerate(idx):
                if t:
                    term = term * W[s, j] ** t
            v += term
        head = max(head, abs(v))
    scale = max(head, ysum * rho_max ** (T + 1))
    if scale <= 0:
        return 0.0
    return float(obj / scale)


def quotient_norm_divisor(p: Poly, xi: SubstTuple, q: Poly | None, D: int,
                          roots_override=None, col_budget: int = 60000,
                          tol: float = 1e-8) -> NormCertificate:
    """Seminorm of p modulo the ideal of series whose substituted image is
    divisible by q; constraints are jets at q's roots, which must lie strictly
    inside the tuple's certified disk."""
    if roots_override is not None:
        clusters = [(complex(lam), int(r)) for lam, r in roots_override]
    else:
        if q is None or q.is_zero:
            raise QuotientError("invalid divisor")
        clusters = _clusters_from_poly(q, xi)
    _check_roots_inside(clusters, xi)
    nq = sum(r for _, r in clusters)

    sup_deg = min(D, max(p.degree, nq - 1, 8))
    while count_multi_indices(xi.k, sup_deg) > col_budget and sup_deg > max(p.degree, 1):
        sup_deg -= 1
    A, monos = divisor_matrix(xi, clusters, sup_deg, col_budget)
    rows_b = []
    for lam, r in clusters:
        rows_b.append(taylor_shift(p, lam, r - 1)[:r])
    b = np.concatenate(rows_b)
    if not np.any(b) and q is not None and not q.is_zero and divides(q, p, 1e-12):
        zero = TruncatedSeries.zero(xi.k, D)
        return NormCertificate(0.0, zero, np.zeros(b.size), 0.0, 0.0,
                               "upper-bound", "untruncated", {"nq": nq})
    sol = solve_l1(A, b, tol=tol)
    witness = _witness_from(sol.x, monos, xi.k, D)
    value = l1_norm(witness)
    lower, lower_kind, lmeta = _divisor_dual_lower(p, xi, clusters, D, tol=tol)
    ev = _eval_dual_lower(p, xi, clusters, sol)
    if ev > lower:
        lower, lower_kind = ev, "untruncated"
        lmeta = {**lmeta, "eval_dual": ev}
    return NormCertificate(
        value, witness, sol.residuals, max(0.0, value - lower),
        float(lower), "upper-bound", lower_kind,
        {"nq": nq, "sup_deg": sup_deg, "finite_dual": sol.finite_dual,
         "columns": len(monos), **lmeta})


@dataclass
class PiEstimate:
    """Monotone lower estimates through power-ideal orders plus a
    support-restricted exact-match upper estimate."""

    power_certs: list
    upper_cert: NormCertificate

    @property
    def values(self) -> list[float]:
        return [c.value for c in self.power_certs]

    @property
    def lower(self) -> float:
        return max(c.lower_bound for c in self.power_certs)

    @property
    def upper(self) -> float:
        return self.upper_cert.value


def full_match_upper(p: Poly, xi: SubstTuple, D: int, sup_deg: int | None = None,
                     col_budget: int = 20000, tol: float = 1e-8) -> NormCertificate:
    """Upper estimate of the full quotient norm: restrict support and demand
    the substituted image to equal p exactly as a polynomial."""
    if sup_deg is None:
        sup_deg = min(D, 8)
    sup_deg = max(sup_deg, p.degree)
    while count_multi_indices(xi.k, sup_deg) > col_budget and sup_deg > p.degree:
        sup_deg -= 1
    if count_multi_indices(xi.k, sup_deg) > col_budget:
        raise ProblemTooLargeError("support budget too small for the target degree")
    monos = list(iter_multi_indices(xi.k, sup_deg))
    maxdeg = 0
    degs = [pj.degree for pj in xi.polys]
    for idx in monos:
        maxdeg = max(maxdeg, sum(t * d for t, d in zip(idx, degs)))
    rows = maxdeg + 1
    A = np.empty((rows, len(monos)), dtype=np.complex128)
    for col, idx in enumerate(monos):
        A[:, col] = xi.monomial_alpha(idx, maxdeg)
    b = np.zeros(rows, dtype=np.complex128)
    b[: p.coeffs.size] = p.coeffs
    sol = solve_l1(A, b, tol=tol)
    witness = _witness_from(sol.x, monos, xi.k, max(D, sup_deg))
    value = l1_norm(witness)
    return NormCertificate(value, witness, sol.residuals,
                           max(0.0, value - sol.finite_dual), sol.finite_dual,
                           "upper-bound", "finite-problem",
                           {"sup_deg": sup_deg, "rows": rows})


def pi_xi_estimate(p: Poly, xi: SubstTuple, D: int, n_max: int,
                   col_budget: int = 60000, tol: float = 1e-8) -> PiEstimate:
    """Power-ideal values for orders 1..n_max (nondecreasing within solver
    gaps; the last is the reported lower estimate of the full norm) plus the
    exact-match upper estimate."""
    if n_max < p.degree + 1:
        raise QuotientError("n_max must exceed the target degree")
    certs = [quotient_norm_powers(p, xi, n, D, col_budget, tol)
             for n in range(1, n_max + 1)]
    upper = full_match_upper(p, xi, D, col_budget=min(col_budget, 20000), tol=tol)
    return PiEstimate(certs, upper)


def limi2_probe(p: Poly, xi: SubstTuple, q_seq, q_inf: Poly, D: int,
                tol: float = 1e-8):
    """Divisor-ideal values along a convergent divisor sequence, with the
    distances to the limit divisor's value."""
    deg = q_inf.degree
    for q in q_seq:
        if q.degree != deg:
            raise QuotientError("divisor sequence must share the limit's degree")
    cert_inf = quotient_norm_divisor(p, xi, q_inf, D, tol=tol)
    certs = [quotient_norm_divisor(p, xi, q, D, tol=tol) for q in q_seq]
    diffs = [abs(c.value - cert_inf.value) for c in certs]
    return certs, cert_inf, diffs


def d_sweep(p: Poly, xi: SubstTuple, q: Poly, d_list, tol: float = 1e-8):
    """Value-vs-truncation curve for the divisor norm; flags non-stabilization."""
    vals = [quotient_norm_divisor(p, xi, q, d, tol=tol).value for d in d_list]
    stabilized = len(vals) >= 2 and abs(vals[-1] - vals[-2]) <= 1e-6 * (1 + abs(vals[-1]))
    return vals, stabilized
