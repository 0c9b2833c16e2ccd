"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""

import math
import time
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from scipy.stats import chisquare

import inequality_checks as ac
from pipeline_helpers import planted_with_first_coeff, projected_phases
from wavycrypt import distributions as D
from wavycrypt.experiments import (
    AlwaysFailFinder,
    AlwaysRejectPKEAdversary,
    ClairvoyantPKEAdversary,
    ClairvoyantZkSolver,
    PKEGameConfig,
    StagedCollisionFinder,
    UnknownDistributionOracle,
    dihedral_reduction_game,
    hash_distinguisher_game,
    lattice_distribution_suite,
    pke_security_game,
    plant_unique_lattice,
)
from wavycrypt.hashing import bruteforce_collision, hash_eval, hash_keygen, subset_sum_distribution, verify_collision
from wavycrypt.lattice import Basis, poisson_residual
from wavycrypt.pke import error_rate_experiment, get_profile
from wavycrypt.reductions import EnumerationOracle, solve_usvp

SAMPLES = 100_000


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
        assert ok, detail

    return emit


def test_01_pke_roundtrip(report):
    t0 = time.perf_counter()
    rep = error_rate_experiment(get_profile("desk"), 10, 1000, np.random.default_rng(1))
    elapsed = time.perf_counter() - t0
    rate = rep.total.rate
    ok = rep.total.trials == 20_000 and rate < 0.005 and elapsed < 120
    report(1, ok, f"desk PKE error {rate:.4%} over {rep.total.trials} decryptions in {elapsed:.1f}s ({rep.summary()})")


def test_02_distribution_algebra(report):
    rng = np.random.default_rng(2)
    cases = {
        "lattice-sum construction vs T(16,0.01)": (D.lattice_sum_sampler(16, 0.01), D.T(16, 0.01)),
        "T(8,0.02)+Q(0.0005) vs T(8,0.052)": (D.convolve_mod1(D.T(8, 0.02), D.Q(0.0005)), D.T(8, 0.052)),
        "C_3(T(4,0.05)) vs T(12,0.05)": (D.compress(D.T(4, 0.05), 3), D.T(12, 0.05)),
    }
    dists = {name: D.distance_to_density(src.draw(rng, SAMPLES), target, 64) for name, (src, target) in cases.items()}
    ok = all(d < 0.02 for d in dists.values())
    report(2, ok, "; ".join(f"{k}: {v:.4f}" for k, v in dists.items()))


def test_03_inequality_suite(report):
    checks = [
        ac.check_tail_bound,
        ac.check_sum_exp,
        ac.check_normal_bound,
        ac.check_joint_distance,
        ac.check_matrix_inverse,
        ac.check_integral_periodic,
        ac.check_t_density_normalization,
    ]
    results = [(c.__name__, *c()) for c in checks]
    ok = all(r[1] for r in results)
    ratio = ac.normal_bound_ratio()
    report(3, ok, "; ".join(f"{n}={'ok' if good else 'FAIL'} ({d})" for n, good, d in results) + f"; normal-bound factor {ratio:.4f}")


def test_04_poisson(report):
    worst_z = max(poisson_residual(Basis.identity(1), [Fraction(y)], radius=8) for y in ("0", "1/2", "3/10"))
    rng = np.random.default_rng(4)
    worst_2d, count = 0.0, 0
    while count < 10:
        cols = [[Fraction(int(v), 4) for v in rng.integers(-8, 9, 2)] for _ in range(2)]
        if cols[0][0] * cols[1][1] - cols[0][1] * cols[1][0] == 0:
            continue
        y = [Fraction(float(v)) for v in rng.random(2)]
        worst_2d = max(worst_2d, poisson_residual(Basis.from_columns(cols), y, radius=8))
        count += 1
    ok = worst_z < 1e-9 and worst_2d < 1e-6
    report(4, ok, f"max residual on Z {worst_z:.2e}, on 10 random 2-D lattices {worst_2d:.2e}")


def test_05_gaussian_lattice(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    uni = lattice_distribution_suite(Basis.diagonal([3, 3, 3]), SAMPLES, rng, mode="uniform")
    wavy = lattice_distribution_suite(Basis.diagonal([Fraction(1, 8), 3, 3]), SAMPLES, rng, mode="wavy")
    elapsed = time.perf_counter() - t0
    ok = uni.distance < 0.02 and wavy.distance < 0.02 and elapsed < 60
    report(5, ok, f"3Z^3 uniform distance {uni.distance:.4f} (chi2 p={uni.p_value:.3f}); diag(1/8,3,3) wavy distance {wavy.distance:.4f}; {elapsed:.1f}s")


def test_06_search_to_decision(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    recovered, violations, total = 0, 0, 0
    for n in (2, 3, 4):
        for _ in range(100):
            planted = plant_unique_lattice(n, Fraction(1, 2), 4, rng)
            tau, original = planted.tau, planted.basis
            total += 1

            def check(old, new, tau=tau, original=original):
                nonlocal violations
                if not (new.is_sublattice_of(old) and new.is_sublattice_of(original) and new.contains(tau)):
                    violations += 1

            v = solve_usvp(original, 3, EnumerationOracle(), on_basis=check)
            recovered += tuple(v) in (tau, tuple(-x for x in tau))
    elapsed = time.perf_counter() - t0
    ok = recovered == total and violations == 0 and elapsed < 120
    report(6, ok, f"recovered {recovered}/{total} planted vectors (n=2,3,4), {violations} invariant violations, {elapsed:.1f}s")


def test_07_projection_fidelity(report):
    rng = np.random.default_rng(7)
    g, p, K = 8, 11, 512
    basis, _ = planted_with_first_coeff(3, p, rng)
    ph, lam2, _, _ = projected_phases(basis, g, p, K, SAMPLES, rng)
    dist = D.distance_to_density(ph, D.Q(float(lam2)), 64)
    basis, _ = planted_with_first_coeff(3, 1, rng)
    _, _, _, (nums, den) = projected_phases(basis, g, p, K, SAMPLES, rng)
    r = np.array([x / den for x in nums])
    pval = float(chisquare(np.histogram(r, bins=64, range=(0, 1))[0]).pvalue)
    ok = dist < 0.05 and pval > 0.01
    report(7, ok, f"p|a1 phase distance to Q(lambda(M)^2={float(lam2):.4f}) {dist:.4f}; p∤a1 uniformity chi2 p={pval:.3f}")


def test_08_hash_collisions(report):
    rng = np.random.default_rng(8)
    found = sum(verify_collision(key, bruteforce_collision(key)) for key in (hash_keygen(2**16, 20, rng) for _ in range(100)))
    key = hash_keygen(2**10, 12, rng)
    mismatches = 0
    for b in product((-1, 0, 1), repeat=12):
        x = [1 if v == 1 else 0 for v in b]
        y = [1 if v == -1 else 0 for v in b]
        equal = x != y and hash_eval(key, x) == hash_eval(key, y)
        mismatches += verify_collision(key, b) != equal
    ok = found == 100 and mismatches == 0
    report(8, ok, f"MITM verified {found}/100 at m=20, N=2^16; exhaustive m=12, N=2^10 cross-check over 3^12 vectors: {mismatches} mismatches")


def test_09_subset_sum_dp(report):
    rng = np.random.default_rng(9)
    good = 0
    for _ in range(100):
        d = subset_sum_distribution([int(v) for v in rng.integers(0, 256, 64)], 8)
        good += d.distance_to_uniform < Fraction(1, 256)
    report(9, good >= 95, f"{good}/100 trials below 2^-8")


def test_10_dihedral(report):
    N, games = 1024, 10_000
    rng = np.random.default_rng(10)
    rates = {}
    for spec in (D.Uniform(), D.TD(37)):
        acc = 0
        for _ in range(games):
            acc += dihedral_reduction_game(ClairvoyantZkSolver(), UnknownDistributionOracle(spec), N, rng).decision
        rates[spec.text()] = acc / games
    u, w = rates["U"], rates[D.TD(37).text()]
    ok = abs(u - 0.5) <= 0.02 and abs(w - (0.5 + 1 / math.pi)) <= 0.02
    report(10, ok, f"accept on U {u:.4f} (target 0.5), on TD(37) {w:.4f} (target {0.5 + 1 / math.pi:.4f})")


def _rate(results):
    return sum(r.decision for r in results) / len(results)


def test_11_security_games(report):
    games = 100
    params = get_profile("desk")
    wavy_pke = D.T(3000000001, 2 / params.gamma**2)
    cfg = PKEGameConfig(force_event=True)

    def pke(adv, spec, seed):
        return pke_security_game(adv, UnknownDistributionOracle(spec), params, np.random.default_rng(seed), cfg)

    pke_w = _rate([pke(ClairvoyantPKEAdversary(), wavy_pke, s) for s in range(games)])
    pke_u = _rate([pke(ClairvoyantPKEAdversary(), D.Uniform(), s) for s in range(games)])
    pke_fail = _rate([pke(AlwaysRejectPKEAdversary(), wavy_pke, s) for s in range(games)])

    def hashg(finder, spec, seed):
        return hash_distinguisher_game(finder, UnknownDistributionOracle(spec), np.random.default_rng(seed))

    hash_w = _rate([hashg(StagedCollisionFinder(), D.T(20, 0.001), s) for s in range(games)])
    hash_u = _rate([hashg(StagedCollisionFinder(), D.Uniform(), s) for s in range(games)])
    hash_fail = _rate([hashg(AlwaysFailFinder(), D.Uniform(), s) for s in range(games)])
    ok = pke_w - pke_u >= 0.2 and hash_w - hash_u >= 0.2 and pke_fail == 0 and hash_fail == 1
    report(
        11,
        ok,
        f"pke accept wavy {pke_w:.2f} vs U {pke_u:.2f}; hash accept wavy {hash_w:.2f} vs U {hash_u:.2f}; "
        f"always-fail: pke rejects {1 - pke_fail:.2f}, hash accepts {hash_fail:.2f}",
    )
