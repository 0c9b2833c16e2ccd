import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

import inequality_checks as ac
from wavycrypt import distributions as D
from wavycrypt.errors import DimensionTooLarge, DomainError, RankError
from wavycrypt.experiments import plant_unique_lattice
from wavycrypt.lattice import (
    Basis,
    banaszczyk_ratio,
    basis_text,
    dual_basis,
    gram_schmidt,
    is_lll_reduced,
    lattice_points,
    lll_reduce,
    load_basis,
    parse_basis,
    poisson_residual,
    reduce_mod_pp,
    rho_truncated,
    sample_dual_gaussian_coords,
    save_basis,
    shortest_vector_enum,
    t_dual_density,
)

THETA_Z = 1.0864348112133080146  # sum_k exp(-pi k^2), mpmath oracle


def random_basis(rng, n, lo=-20, hi=21):
    while True:
        cols = [[int(v) for v in rng.integers(lo, hi, n)] for _ in range(n)]
        try:
            return Basis.from_columns(cols)
        except RankError:
            continue


def test_gram_schmidt_examples():
    gs = gram_schmidt(Basis.identity(3))
    assert all(m == 0 for row in gs.mu for m in row)
    gs = gram_schmidt(Basis.from_columns([[1, 0], [1, 1]]))
    assert gs.ortho == ((1, 0), (0, 1))
    assert gs.mu[1][0] == 1


def test_gram_schmidt_volume_identity():
    rng = np.random.default_rng(0)
    for _ in range(20):
        b = random_basis(rng, 4)
        gs = gram_schmidt(b)
        prod = math.prod(gs.norms2)
        assert prod == b.det**2  # exact: product of squared GS norms = det^2


def test_rank_error():
    with pytest.raises(RankError):
        Basis.from_columns([[1, 2], [2, 4]])


def test_lll_examples():
    assert lll_reduce(Basis.identity(3)).same_lattice(Basis.identity(3))
    red = lll_reduce(Basis.from_columns([[12, 0], [13, 1]]))
    lam = shortest_vector_enum(red, with_ratio=False).length
    assert math.sqrt(min(float(sum(x * x for x in c)) for c in red.columns)) <= 4 * lam


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_lll_properties_random(n):
    rng = np.random.default_rng(n)
    for _ in range(100):
        b = random_basis(rng, n)
        red, U = lll_reduce(b, with_transform=True)
        assert is_lll_reduced(red)
        assert red.same_lattice(b)
        assert b.transform(U).columns == red.columns
        lam2 = shortest_vector_enum(b, with_ratio=False).length2
        first2 = sum(x * x for x in red.columns[0])
        assert first2 <= 4**n * lam2
        # dual norms bounded by sqrt(n)/lambda * 2^(2n)
        for c in dual_basis(red).columns:
            assert math.sqrt(float(sum(x * x for x in c))) <= math.sqrt(n) / math.sqrt(lam2) * 4**n


def test_dual_examples():
    assert dual_basis(Basis.identity(2)).columns == Basis.identity(2).columns
    assert dual_basis(Basis.diagonal([2, Fraction(1, 2)])).columns == Basis.diagonal([Fraction(1, 2), 2]).columns
    rng = np.random.default_rng(1)
    for _ in range(20):
        b = random_basis(rng, 3)
        assert dual_basis(b).volume * b.volume == 1
        assert dual_basis(dual_basis(b)).same_lattice(b)


def test_reduce_mod_pp_examples():
    b = Basis.from_columns([[2, 1], [0, 3]])
    inside = b.combine([Fraction(1, 3), Fraction(1, 2)])
    assert reduce_mod_pp(inside, b) == inside
    assert reduce_mod_pp(b.columns[0], b) == (0, 0)
    x = b.combine([Fraction(7, 4), Fraction(-1, 4)])
    assert reduce_mod_pp(x, b) == b.combine([Fraction(3, 4), Fraction(3, 4)])


@given(st.lists(st.fractions(-10, 10), min_size=2, max_size=2))
def test_reduce_mod_pp_congruent(x):
    b = Basis.from_columns([[2, 1], [Fraction(1, 3), 3]])
    r = reduce_mod_pp(x, b)
    assert all(0 <= c < 1 for c in b.coords(r))
    assert b.contains([a - c for a, c in zip(x, r)])


def test_shortest_vector_examples():
    res = shortest_vector_enum(Basis.diagonal([3, 5]))
    assert res.vector == (3, 0) and res.length2 == 9 and res.ratio == pytest.approx(5 / 3)
    assert shortest_vector_enum(Basis.identity(2)).length2 == 1


def test_shortest_vector_planted():
    rng = np.random.default_rng(2)
    for n in (2, 3, 4):
        p = plant_unique_lattice(n, 1, 6, rng)
        res = shortest_vector_enum(p.basis)
        assert tuple(res.vector) in (p.tau, tuple(-x for x in p.tau))
        assert p.basis.combine(p.coeffs) == p.tau


def test_enumeration_refuses_large_dimension():
    with pytest.raises(DimensionTooLarge):
        shortest_vector_enum(Basis.identity(13))


def test_lattice_points_count():
    # Z^2 points within radius 1.5: origin, 4 axis, 4 diagonal
    assert len(lattice_points(Basis.identity(2), 1.5)) == 9


def test_rho_values():
    assert rho_truncated(Basis.identity(1)).value == pytest.approx(THETA_Z, abs=1e-12)
    assert rho_truncated(Basis.identity(2)).value == pytest.approx(THETA_Z**2, abs=1e-10)
    b = Basis.from_columns([[1, 1], [0, 2]])
    assert rho_truncated(b, radius=3).value >= 1


@pytest.mark.parametrize("y", [0, 0.5, 0.3])
def test_poisson_z(y):
    assert poisson_residual(Basis.identity(1), [Fraction(y)]) < 1e-9


def test_poisson_random_2d():
    rng = np.random.default_rng(3)
    for _ in range(10):
        cols = [[Fraction(int(v), 4) for v in rng.integers(-8, 9, 2)] for _ in range(2)]
        try:
            b = Basis.from_columns(cols)
        except RankError:
            continue
        y = [Fraction(float(v)) for v in rng.random(2)]
        assert poisson_residual(b, y) < 1e-6


def test_banaszczyk_ratio():
    assert banaszczyk_ratio(Basis.diagonal([3, 3, 3]), math.sqrt(3)) < 1e-10
    assert banaszczyk_ratio(Basis.identity(1), 1) == pytest.approx(2 * math.exp(-math.pi) / THETA_Z, abs=1e-3)
    assert banaszczyk_ratio(Basis.identity(1), 0) == pytest.approx((THETA_Z - 1) / THETA_Z, abs=1e-9)


def test_dual_gaussian_uniform_case():
    s = sample_dual_gaussian_coords(Basis.diagonal([3, 3, 3]), np.random.default_rng(4), 100_000)
    c = s.coords()
    assert np.all((c >= 0) & (c < 1))
    for j in range(3):
        counts = np.histogram(c[:, j], bins=20, range=(0, 1))[0]
        assert chisquare(counts).pvalue > 0.01


def test_dual_gaussian_wavy_marginal():
    b = Basis.diagonal([Fraction(1, 8), 3, 3])
    s = sample_dual_gaussian_coords(b, np.random.default_rng(5), 100_000)
    phase = np.array([int(r[0]) / s.den for r in s.num])  # <u, x> for u = first column
    assert D.distance_to_density(phase, D.Q(1 / 64), 64) < 0.02


def test_dual_gaussian_deterministic():
    b = Basis.from_columns([[1, 2], [0, 3]])
    a = sample_dual_gaussian_coords(b, np.random.default_rng(9), 50)
    c = sample_dual_gaussian_coords(b, np.random.default_rng(9), 50)
    assert (a.num == c.num).all()


def test_t_dual_density():
    ok, detail = ac.check_t_density_normalization()
    assert ok, detail
    b = Basis.identity(2)
    v = (1, 0)
    peak = t_dual_density(b, v, [0.0, 0.3])
    assert peak >= t_dual_density(b, v, [0.2, 0.3])
    with pytest.raises(DomainError):
        t_dual_density(b, (Fraction(1, 2), 0), [0.0, 0.0])


def test_t_dual_density_one_dim():
    eps = Fraction(1, 4)
    b = Basis.diagonal([eps])  # L* = 4Z, P(L*) = [0, 4)
    xs = np.linspace(0, 3.99, 50)
    got = t_dual_density(b, (eps,), xs[:, None])
    # phase <v, x> = eps x; density on P(L*) is Q_{eps^2}(phase) / |P(L*)|
    want = D.Q(float(eps**2)).pdf(np.mod(xs * float(eps), 1.0)) * float(eps)
    assert np.allclose(got, want, rtol=1e-12)


@pytest.mark.parametrize("check", [ac.check_matrix_inverse, ac.check_integral_periodic])
def test_lattice_identities(check):
    ok, detail = check()
    assert ok, detail


def test_basis_file_roundtrip(tmp_path):
    b = Basis.from_columns([[Fraction(1, 3), 2], [5, Fraction(-7, 2)]])
    save_basis(b, tmp_path / "b.txt")
    assert load_basis(tmp_path / "b.txt") == b
    assert parse_basis(basis_text(b)) == b


@pytest.mark.parametrize("text", ["", "x", "2\n1 0\n", "2\n1 0\n0 1 2\n", "2\n1/0 1\n0 1\n"])
def test_basis_file_malformed(text):
    with pytest.raises(DomainError):
        parse_basis(text)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=4, max_size=4))
def test_lll_preserves_lattice_property(entries):
    try:
        b = Basis.from_columns([entries[:2], entries[2:]])
    except RankError:
        return
    red = lll_reduce(b)
    assert red.same_lattice(b) and is_lll_reduced(red)
