"""Lattice-based cryptography from wavy distributions on [0, 1).

Modules: numerics (exact dyadic arithmetic), distributions (wavy densities,
samplers, statistical distance), lattice (LLL, enumeration, dual Gaussians),
reductions (unique-SVP search to decision and the dual-projection pipeline),
pke (bit encryption), hashing (subset-sum hash), experiments (games and
harnesses) and cli.
"""

__version__ = "0.1.0"
