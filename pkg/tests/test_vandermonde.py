import numpy as np
import pytest

from chaoslab.poly import Poly
from chaoslab.series import TruncatedSeries, embed_poly, make_subst_tuple, mul
from chaoslab.vandermonde import (
    Lambda,
    NodeRadiusError,
    VandermondeError,
    growth_bound_probe,
    p_det_ratio,
    p_recurrence,
    p_row,
    phi_apply,
    vdm_det,
)


def rand_distinct_nodes(rng, n, radius=0.8):
    while True:
        nodes = radius * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)) / np.sqrt(2)
        lbd = Lambda(tuple(nodes), radius + 1e-9)
        if lbd.min_pairwise_distance() >= 1e-4:
            return lbd


def test_vdm_det_examples():
    assert vdm_det(Lambda((0, 1), 2.0)) == 1
    assert vdm_det(Lambda((0, 1, 2), 3.0)) == 2
    assert vdm_det(Lambda((0.5, 0.5), 1.0)) == 0


def test_det_ratio_examples():
    a, b = 0.31 + 0.12j, -0.44 - 0.2j
    lbd = Lambda((a, b), 0.8)
    assert p_det_ratio(2, 1, 2, lbd) == pytest.approx(-a * b)
    assert p_det_ratio(2, 2, 2, lbd) == pytest.approx(a + b)
    rng = np.random.default_rng(0)
    for n in range(2, 6):
        lbd = rand_distinct_nodes(rng, n)
        for j in range(1, n + 1):
            assert p_det_ratio(n, j, j - 1, lbd) == pytest.approx(1.0, abs=1e-9)


def test_det_ratio_rejects_near_coincident():
    lbd = Lambda((0.1, 0.1 + 1e-9), 0.5)
    with pytest.raises(VandermondeError):
        p_det_ratio(2, 1, 2, lbd)


def test_recurrence_examples():
    lbd = Lambda((0.2, -0.1j, 0.05), 0.5)
    assert p_recurrence(3, 2, 1, lbd) == 1.0
    a, b = 0.3 + 0.1j, -0.2 + 0.4j
    l2 = Lambda((a, b), 0.8)
    assert p_recurrence(2, 2, 3, l2) == pytest.approx(a * a + a * b + b * b)
    zeros = Lambda((0, 0, 0, 0), 0.5)
    assert p_recurrence(4, 1, 4, zeros) == 0


def test_oracle_equivalence():
    rng = np.random.default_rng(1)
    for _ in range(50):
        n = int(rng.integers(2, 7))
        lbd = rand_distinct_nodes(rng, n)
        for j in range(1, n + 1):
            for m in range(0, 41, 7):
                a = p_det_ratio(n, j, m, lbd)
                b = p_recurrence(n, j, m, lbd)
                assert abs(a - b) <= 1e-9 * (1 + abs(a))


def test_prod_identity():
    rng = np.random.default_rng(2)
    for _ in range(10):
        n = int(rng.integers(2, 6))
        lbd = rand_distinct_nodes(rng, n, radius=0.7)
        for m in range(31):
            for i, lam in enumerate(lbd.nodes):
                s = sum(lam ** (j - 1) * p_recurrence(n, j, m, lbd) for j in range(1, n + 1))
                assert abs(s - lam**m) <= 1e-9


def test_symmetry_under_permutation():
    rng = np.random.default_rng(3)
    for _ in range(5):
        n = 4
        lbd = rand_distinct_nodes(rng, n)
        perm = rng.permutation(n)
        lbd2 = Lambda(tuple(np.array(lbd.nodes)[perm]), lbd.radius_bound)
        for j in range(1, n + 1):
            for m in range(0, 20, 3):
                assert abs(p_recurrence(n, j, m, lbd) - p_recurrence(n, j, m, lbd2)) <= 1e-10


def test_homogeneity():
    rng = np.random.default_rng(4)
    t = 0.7 - 0.2j
    for _ in range(5):
        n = int(rng.integers(2, 5))
        lbd = rand_distinct_nodes(rng, n, radius=0.5)
        scaled = Lambda(tuple(t * z for z in lbd.nodes), 0.5 + 1e-9)
        for j in range(1, n + 1):
            for m in range(0, 15):
                lhs = p_recurrence(n, j, m, scaled)
                rhs = t ** (m - j + 1) * p_recurrence(n, j, m, lbd)
                assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))


def test_growth_probe():
    # n = 1: P(1,1,m) = lambda^m, so c_hat <= 1 whenever beta >= alpha
    assert growth_bound_probe(1, 0.4, 0.6, trials=10) <= 1.0 + 1e-12
    c3 = growth_bound_probe(3, 0.4, 0.6, trials=20, m_max=200)
    assert np.isfinite(c3)
    # small-m block is bounded by 1 via the delta basis
    lbd = Lambda((0.2, 0.3j, -0.1), 0.4)
    for j in range(1, 4):
        for m in range(0, 3):
            assert abs(p_recurrence(3, j, m, lbd)) <= 1.0


def test_phi_delta_on_generator_powers():
    xi = make_subst_tuple([Poly.x(), Poly.from_coeffs([0, 0.4, 0.1])])
    lbd = rand_distinct_nodes(np.random.default_rng(5), 3, radius=0.3)
    for r in range(1, 4):
        a = embed_poly(Poly.monomial(r - 1), 2, 10)
        for j in range(1, 4):
            out = phi_apply(lbd, j, a, xi)
            want = 1.0 if j == r else 0.0
            assert abs(out.value - want) <= out.errbar + 1e-9


def test_phi_vanishes_on_divisible_images():
    rng = np.random.default_rng(6)
    xi = make_subst_tuple([Poly.x(), Poly.from_coeffs([0, 0.5])])
    lbd = rand_distinct_nodes(rng, 2, radius=0.3)
    q = Poly.from_roots(lbd.nodes)
    for _ in range(5):
        h = Poly(rng.normal(size=3) + 1j * rng.normal(size=3))
        a = embed_poly(q * h, 2, 12)
        for j in range(1, 3):
            out = phi_apply(lbd, j, a, xi, tol=1e-10)
            assert abs(out.value) <= out.errbar + 1e-8


def test_phi_matches_interpolation_weights():
    rng = np.random.default_rng(7)
    n = 3
    lbd = rand_distinct_nodes(rng, n, radius=0.4)
    nodes = np.array(lbd.nodes)
    M = nodes[:, None] ** np.arange(n)[None, :]
    for j in range(1, n + 1):
        e = np.zeros(n)
        e[j - 1] = 1.0
        c = np.linalg.solve(M.T, e)
        g = Poly(rng.normal(size=6) + 1j * rng.normal(size=6))
        via_weights = sum(p_recurrence(n, j, m, lbd) * g.coeffs[m] for m in range(g.coeffs.size))
        via_interp = sum(c[s] * g(nodes[s]) for s in range(n))
        assert abs(via_weights - via_interp) <= 1e-9


def test_phi_node_radius_guard():
    xi = make_subst_tuple([Poly.x(), Poly.from_coeffs([0, 2.0])])  # gamma ~ 0.5
    lbd = Lambda((0.45,), 0.6)
    a = TruncatedSeries.generator(2, 4, 0)
    with pytest.raises(NodeRadiusError):
        phi_apply(lbd, 1, a, xi)


def test_phi_continuity_in_nodes():
    # discrete surrogate of norm continuity: values converge along lambda_s -> lambda
    xi = make_subst_tuple([Poly.x(), Poly.from_coeffs([0, 0.3, 0.1])])
    base = (0.1 + 0.05j, -0.12, 0.08j)
    lbd = Lambda(base, 0.3)
    rng = np.random.default_rng(8)
    test_set = []
    for _ in range(6):
        terms = {(int(rng.integers(0, 3)), int(rng.integers(0, 3))): complex(rng.normal(), rng.normal())
                 for _ in range(3)}
        a = TruncatedSeries(2, 8, terms)
        n = a.l1()
        if n:
            test_set.append((1 / n) * a)
    prev_gap = None
    for eps in [3e-2, 1e-2, 3e-3, 1e-3]:
        moved = Lambda(tuple(z + eps for z in base), 0.3 + 2 * eps)
        gap = max(
            abs(phi_apply(moved, j, a, xi).value - phi_apply(lbd, j, a, xi).value)
            for a in test_set
            for j in range(1, 4)
        )
        if prev_gap is not None:
            assert gap <= prev_gap + 1e-9
        prev_gap = gap
    assert prev_gap < 1e-2


def test_p_row_matches_scalar():
    lbd = Lambda((0.3, -0.2 + 0.1j), 0.5)
    row = p_row(lbd, 2, 12)
    for m in range(13):
        assert row[m] == pytest.approx(p_recurrence(2, 2, m, lbd))
