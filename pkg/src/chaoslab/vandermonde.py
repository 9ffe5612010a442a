"""Column-replaced Vandermonde determinant ratios and the node functionals
they induce on the truncated series algebra.

P(n, j, m) is the determinant of the n-node Vandermonde matrix with column j
replaced by the m-th power column, divided by the Vandermonde determinant.
Two independent evaluation routes are provided: the generic determinant
ratio (distinct nodes only) and a dynamic program over the displayed
recurrences, which is a polynomial identity and therefore also valid for
repeated nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .series import SubstTuple, TruncatedSeries, l1_norm, substitute


class VandermondeError(ValueError):
    pass


class NodeRadiusError(VandermondeError):
    pass


@dataclass
class Lambda:
    """Node tuple with a certified enclosing radius; recurrence tables are
    memoized per instance and confined to one worker."""

    nodes: tuple
    radius_bound: float
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.nodes = tuple(complex(z) for z in self.nodes)
        for z in self.nodes:
            if abs(z) >= self.radius_bound:
                raise VandermondeError(
                    f"node {z} not strictly inside radius {self.radius_bound}")

    @property
    def n(self) -> int:
        return len(self.nodes)

    def min_pairwise_distance(self) -> float:
        n = self.n
        if n < 2:
            return float("inf")
        arr = np.array(self.nodes)
        d = np.abs(arr[:, None] - arr[None, :])
        np.fill_diagonal(d, np.inf)
        return float(d.min())


def vdm_det(lbd: Lambda) -> complex:
    """Vandermonde determinant via the pairwise-difference product formula."""
    out = 1.0 + 0j
    nodes = lbd.nodes
    for r in range(1, len(nodes)):
        for j in range(r):
            out *= nodes[r] - nodes[j]
    return out


MIN_NODE_SEPARATION = 1e-6


def p_det_ratio(n: int, j: int, m: int, lbd: Lambda) -> complex:
    """Determinant-ratio evaluation; degenerates for close nodes, in which
    case the recurrence path must be used instead."""
    if n != lbd.n:
        raise VandermondeError("n must equal the node count")
    if not (1 <= j <= n) or m < 0:
        raise VandermondeError("need 1 <= j <= n and m >= 0")
    if lbd.min_pairwise_distance() < MIN_NODE_SEPARATION:
        raise VandermondeError("nodes nearly coincide: use recurrence path")
    nodes = np.array(lbd.nodes)
    M = nodes[:, None] ** np.arange(n)[None, :]
    Mjm = M.copy()
    Mjm[:, j - 1] = nodes**m
    return complex(np.linalg.det(Mjm) / vdm_det(lbd))


def _tables(lbd: Lambda, m_max: int, j_cap: int) -> list:
    """Bottom-up tables: level l covers the last l nodes; tables[l][j] is the
    array of P(l, j, m) for m = 0..m_max, for j <= min(j_cap, l) and j = l."""
    key = (m_max, j_cap)
    hit = lbd._memo.get(key)
    if hit is not None:
        return hit
    n = lbd.n
    nodes = lbd.nodes
    tables: list = [None] * (n + 1)
    first = nodes[n - 1]
    lvl1 = {1: first ** np.arange(m_max + 1, dtype=np.complex128)}
    tables[1] = lvl1
    for lvl in range(2, n + 1):
        mu = nodes[n - lvl]
        prev = tables[lvl - 1]
        cur: dict[int, np.ndarray] = {}
        # diagonal column j = lvl
        diag = np.zeros(m_max + 1, dtype=np.complex128)
        if lvl - 1 <= m_max:
            diag[lvl - 1] = 1.0
        prev_diag = prev[lvl - 1]
        s = 0j
        for m in range(lvl, m_max + 1):
            s = mu * s + prev_diag[m - 1]
            diag[m] = mu ** (m - lvl + 1) + s
        cur[lvl] = diag
        # first column from the same level's diagonal: bringing the replaced
        # column into last position costs (lvl-1) transpositions, so
        # P(lvl, 1, m) = (-1)^(lvl-1) * prod(nodes) * P(lvl, lvl, m-1)
        prod = np.prod(np.array(nodes[n - lvl:], dtype=np.complex128))
        sign = -1.0 if lvl % 2 == 0 else 1.0
        col1 = np.zeros(m_max + 1, dtype=np.complex128)
        col1[0] = 1.0
        col1[1:] = sign * prod * diag[:-1]
        cur[1] = col1
        # interior columns
        for j in range(2, min(j_cap, lvl - 1) + 1):
            col = np.zeros(m_max + 1, dtype=np.complex128)
            if j - 1 <= m_max:
                col[j - 1] = 1.0
            ta, tb = prev[j - 1], prev[j]
            sa = sb = 0j
            for m in range(lvl, m_max + 1):
                sa = mu * sa + ta[m - 1]
                sb = mu * sb + tb[m - 1]
                col[m] = sa - mu * sb
            cur[j] = col
        tables[lvl] = cur
    lbd._memo[key] = tables
    return tables


def p_recurrence(n: int, j: int, m: int, lbd: Lambda) -> complex:
    """P(n, j, m) by dynamic programming over the recurrences; handles
    repeated nodes."""
    if n != lbd.n:
        raise VandermondeError("n must equal the node count")
    if not (1 <= j <= n) or m < 0:
        raise VandermondeError("need 1 <= j <= n and m >= 0")
    if m <= n - 1:
        return 1.0 + 0j if m == j - 1 else 0j
    tables = _tables(lbd, m, min(max(j, 1), n))
    return complex(tables[n][j][m])


def p_row(lbd: Lambda, j: int, m_max: int) -> np.ndarray:
    """P(n, j, m) for m = 0..m_max as an array."""
    n = lbd.n
    tables = _tables(lbd, m_max, min(j, n))
    if j in tables[n]:
        return tables[n][j].copy()
    raise VandermondeError("column not materialized")


def growth_bound_probe(n: int, alpha: float, beta: float, trials: int,
                       m_max: int = 200, seed: int = 0) -> float:
    """Empirical constant c_hat = max |P(n,j,m)| / beta^m over random node
    tuples in the closed alpha-disk, all j, m <= m_max."""
    if not (0 < alpha < beta):
        raise VandermondeError("need 0 < alpha < beta")
    rng = np.random.default_rng(seed)
    c_hat = 0.0
    scale = beta ** (-np.arange(m_max + 1, dtype=float))
    for _ in range(trials):
        r = alpha * np.sqrt(rng.uniform(size=n))
        th = rng.uniform(0, 2 * np.pi, size=n)
        lbd = Lambda(tuple(r * np.exp(1j * th)), alpha + 1e-9)
        for j in range(1, n + 1):
            row = p_row(lbd, j, m_max)
            c_hat = max(c_hat, float(np.max(np.abs(row) * scale)))
    return c_hat


@dataclass(frozen=True)
class FunctionalApprox:
    """Truncated weight sequence of a node functional plus its tail bound."""

    lbd: Lambda
    j: int
    weights: np.ndarray
    tail_bound: float


@dataclass(frozen=True)
class PhiValue:
    value: complex
    errbar: float
    m_used: int


_PROBE_CACHE: dict = {}


def _probe_cached(n: int, alpha: float, beta: float) -> float:
    key = (n, round(alpha, 12), round(beta, 12))
    if key not in _PROBE_CACHE:
        _PROBE_CACHE[key] = growth_bound_probe(n, alpha, beta, trials=20,
                                               m_max=min(200, 4 * n + 80))
    return _PROBE_CACHE[key]


def phi_apply(lbd: Lambda, j: int, a: TruncatedSeries, xi: SubstTuple,
              m_top: int | None = None, tol: float = 1e-8) -> PhiValue:
    """Apply the j-th node functional to a series element through a
    substitution tuple: sum of P(n,j,m) * alpha_m plus a certified
    geometric tail bound."""
    ghat = xi.gamma
    if lbd.radius_bound >= ghat:
        raise NodeRadiusError("node radius must be strictly below the tuple's gamma")
    beta = 0.5 * (lbd.radius_bound + ghat)
    q = beta / ghat
    if q >= 1.0:
        raise NodeRadiusError("non-convergent tail: beta >= gamma")
    norm_a = l1_norm(a)
    c_hat = _probe_cached(lbd.n, lbd.radius_bound, beta)
    if m_top is None:
        m_top = lbd.n
        while c_hat * norm_a * q ** (m_top + 1) / (1 - q) >= tol and m_top < 20000:
            m_top = 2 * m_top + 8
    alpha = substitute(a, xi, m_top)
    weights = p_row(lbd, j, m_top)
    tail = c_hat * norm_a * q ** (m_top + 1) / (1 - q)
    return PhiValue(complex(np.dot(weights, alpha)), float(tail), m_top)
