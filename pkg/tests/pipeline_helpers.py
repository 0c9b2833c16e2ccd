"""Shared setup for the reduction-chain tests and the acceptance suite."""

from fractions import Fraction

import numpy as np

from wavycrypt.experiments import plant_unique_lattice
from wavycrypt.lattice import Basis, sample_dual_gaussian_coords, shortest_vector_enum
from wavycrypt.reductions import build_M, project_samples, tau_dot_w, phases


def planted_with_first_coeff(n: int, a1: int, rng, ratio=10) -> tuple[Basis, tuple]:
    """Planted unique lattice whose shortest vector has coordinates (a1, 1, 0, ...)."""
    base = plant_unique_lattice(n, 1, ratio, rng, mix=False)
    # A has first column (a1, 1, 0, ...) and det -1; the new basis is B A^-1
    inv = [[0] * n for _ in range(n)]  # columns of A^-1
    inv[0][1] = 1
    inv[1][0] = 1
    inv[1][1] = -a1
    for k in range(2, n):
        inv[k][k] = 1
    basis = base.basis.transform(inv)
    assert basis.integer_coords(base.tau)[:2] == [a1, 1]
    return basis, base.tau


def projected_phases(basis: Basis, g, p: int, K: int, count: int, rng, alpha_scale=Fraction(3, 2)):
    """(phases frc(r <tau(M), w>), lambda(M)^2, M) for samples pushed through project_f."""
    lam2 = shortest_vector_enum(basis, with_ratio=False).length2
    M = build_M(basis, lam2 * alpha_scale**2, g, p, 0)
    res = shortest_vector_enum(M, with_ratio=False)
    h = abs(tau_dot_w(res.coeffs, K))
    nums, den = project_samples(sample_dual_gaussian_coords(M, rng, count), K)
    return phases(nums, den, h), res.length2, M, (nums, den)
