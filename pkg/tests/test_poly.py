import numpy as np
import pytest

from chaoslab.poly import (
    DEGREE_CAP,
    DegreeCapError,
    Poly,
    PolyError,
    divides,
    divmod_poly,
    eval_poly,
    max_modulus_on_circle,
    one_plus_z_pow,
    roots,
    taylor_shift,
)


def test_eval_basic():
    p = Poly.from_coeffs([-1, 0, 1])  # z^2 - 1
    assert eval_poly(p, 2.0) == pytest.approx(3.0)
    assert eval_poly(Poly.zero(), 1.7 + 0.3j) == 0
    # roots of (1+z)^12 - 1 are e^{2 pi i j / 12} - 1
    f = one_plus_z_pow(12) - Poly.one()
    z = np.exp(1j * np.pi / 6) - 1
    assert abs(eval_poly(f, z)) < 1e-12


def test_arith():
    z = Poly.x()
    assert z * z == Poly.from_coeffs([0, 0, 1])
    one = Poly.one()
    assert (one + z) * (one - z) == Poly.from_coeffs([1, 0, -1])
    # k*(c*z^n - p) for k=2, c=3, n=2, p=z
    q = 2.0 * (3.0 * Poly.monomial(2) - z)
    assert q == Poly.from_coeffs([0, -2, 6])


def test_normalization_invariants():
    p = Poly.from_coeffs([1, 2, 0, 0])
    assert p.degree == 1
    assert p.coeffs[-1] != 0
    assert Poly.from_coeffs([0, 0]).is_zero


def test_degree_cap():
    with pytest.raises(DegreeCapError):
        Poly.monomial(DEGREE_CAP + 1)
    with pytest.raises(DegreeCapError):
        one_plus_z_pow(DEGREE_CAP + 1)


def test_roots_simple_factor():
    # q_c/3 for k=1, c=3, n=2, q=z: z^2 - z/3 factors as z(z - 1/3)
    p = Poly.from_coeffs([0, -1 / 3, 1])
    rs = roots(p)
    got = sorted(rs.flattened(), key=abs)
    assert abs(got[0]) < 1e-12
    assert abs(got[1] - 1 / 3) < 1e-12
    assert rs.total_multiplicity == 2


def test_roots_binomial():
    f = one_plus_z_pow(4) - Poly.one()
    rs = roots(f)
    expected = sorted([np.exp(2j * np.pi * j / 4) - 1 for j in range(4)], key=lambda z: (z.real, z.imag))
    got = sorted(rs.flattened(), key=lambda z: (z.real, z.imag))
    assert np.allclose(got, expected, atol=1e-9)


def test_roots_multiplicity():
    rs = roots(Poly.monomial(3))
    assert rs.entries == ((0j, 3),)


def test_roots_rejects_constants():
    with pytest.raises(PolyError):
        roots(Poly.one())


def test_roots_residual_consistency():
    rng = np.random.default_rng(7)
    for _ in range(20):
        deg = rng.integers(1, 9)
        c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        p = Poly(c)
        rs = roots(p)
        for r, _ in rs.entries:
            assert abs(eval_poly(p, r)) <= rs.residual_bound + 1e-300


def test_divides():
    z = Poly.x()
    assert divides(z * z, Poly.from_coeffs([0, 0, 1, 1]))
    assert not divides(z - Poly.one(), Poly.from_coeffs([1, 0, 1]))
    rng = np.random.default_rng(3)
    for _ in range(30):
        dq = int(rng.integers(1, 7))
        dh = int(rng.integers(0, 7))
        q = Poly(rng.uniform(-1, 1, dq + 1) + 1j * rng.uniform(-1, 1, dq + 1))
        h = Poly(rng.uniform(-1, 1, dh + 1) + 1j * rng.uniform(-1, 1, dh + 1))
        if q.is_zero or h.is_zero:
            continue
        assert divides(q, q * h, 1e-9)


def test_divmod_roundtrip():
    rng = np.random.default_rng(11)
    for _ in range(30):
        f = Poly(rng.normal(size=rng.integers(1, 12)) + 1j * rng.normal(size=1))
        q = Poly(rng.normal(size=rng.integers(2, 6)))
        quo, rem = divmod_poly(f, q)
        back = quo * q + rem
        assert np.allclose(back.coeffs, f.coeffs, atol=1e-12)
        assert rem.degree < q.degree


def test_eval_mul_consistency():
    rng = np.random.default_rng(42)
    for _ in range(100):
        dp, dq = rng.integers(0, 9, size=2)
        p = Poly(rng.normal(size=dp + 1) + 1j * rng.normal(size=dp + 1))
        q = Poly(rng.normal(size=dq + 1) + 1j * rng.normal(size=dq + 1))
        z = 2 * (rng.normal() + 1j * rng.normal())
        lhs = eval_poly(p * q, z)
        rhs = eval_poly(p, z) * eval_poly(q, z)
        assert abs(lhs - rhs) <= 1e-10 * (1 + abs(rhs))


def test_max_modulus_examples():
    assert max_modulus_on_circle(Poly.x(), 1.0) == pytest.approx(1.0, rel=1e-3)
    assert max_modulus_on_circle(Poly.monomial(2), 0.5) == pytest.approx(0.25, rel=1e-3)
    # positive coefficients: the max of 2z + z^2 on |z|=1/2 sits at z=1/2
    p = Poly.from_coeffs([0, 2, 1])
    m = max_modulus_on_circle(p, 0.5)
    assert m >= 1.25
    assert m == pytest.approx(1.25, rel=1e-3)


def test_max_modulus_is_upper_bound_and_monotone():
    rng = np.random.default_rng(5)
    for _ in range(10):
        deg = int(rng.integers(1, 7))
        c = np.abs(rng.normal(size=deg + 1))
        c[0] = 0.0
        p = Poly(c)
        radii = [0.1, 0.3, 0.5, 0.9]
        vals = [max_modulus_on_circle(p, r) for r in radii]
        assert all(vals[i] <= vals[i + 1] + 1e-12 for i in range(len(vals) - 1))
        # exact max for nonnegative coefficients is at z = r
        for r, v in zip(radii, vals):
            assert v >= eval_poly(p, r).real - 1e-12


def test_max_modulus_rejects_undersampling():
    with pytest.raises(PolyError):
        max_modulus_on_circle(Poly.monomial(100), 1.0, samples=16)


def test_taylor_shift():
    p = Poly.from_coeffs([1, -2, 0, 4])
    z0 = 0.3 - 0.7j
    jet = taylor_shift(p, z0, order=3)
    assert abs(jet[0] - eval_poly(p, z0)) < 1e-12
    assert abs(jet[1] - eval_poly(p.deriv(), z0)) < 1e-12
    assert abs(2 * jet[2] - eval_poly(p.deriv(2), z0)) < 1e-12
    assert abs(6 * jet[3] - eval_poly(p.deriv(3), z0)) < 1e-12
    short = taylor_shift(p, z0, order=1)
    assert np.allclose(short, jet[:2])


def test_binomial_pow_matches_repeated_mul():
    f = one_plus_z_pow(17)
    g = (Poly.one() + Poly.x()) ** 17
    assert np.allclose(f.coeffs, g.coeffs, rtol=1e-12)


def test_shift_down():
    p = Poly.from_coeffs([0, 0, 3, 1])
    assert p.shift_down(2) == Poly.from_coeffs([3, 1])
    with pytest.raises(PolyError):
        Poly.from_coeffs([1, 1]).shift_down(1)
