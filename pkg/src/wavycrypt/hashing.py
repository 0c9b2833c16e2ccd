"""The modular subset-sum hash f(b) = sum b_i a_i mod N and its collision tools."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CollisionNotFound, DimensionTooLarge, DomainError
from .numerics import int_from_hex, int_to_hex, random_below

MITM_MAX_M = 26


@dataclass(frozen=True)
class HashKey:
    N: int
    a: tuple

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("modulus must be positive")
        if not all(0 <= x < self.N for x in self.a):
            raise DomainError("key values must lie in [0, N)")

    @property
    def m(self) -> int:
        return len(self.a)

    @property
    def compresses(self) -> bool:
        """Output space {0..N-1} smaller than the 2^m inputs."""
        return self.N < 2**self.m

    def to_text(self) -> str:
        lines = ["hash-key v1", f"N={int_to_hex(self.N)}", f"m={self.m}"]
        lines += [f"a={int_to_hex(x)}" for x in self.a]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> HashKey:
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines or lines[0] != "hash-key v1":
            raise DomainError("not a hash-key v1 file")
        try:
            N = int_from_hex(lines[1].split("=", 1)[1])
            m = int(lines[2].split("=", 1)[1])
            a = [int_from_hex(ln.split("=", 1)[1]) for ln in lines[3:]]
        except (IndexError, ValueError) as exc:
            raise DomainError(f"malformed hash key: {exc}") from exc
        if len(a) != m:
            raise DomainError(f"expected {m} key values, found {len(a)}")
        return cls(N, tuple(a))


def hash_keygen(N: int, m: int, rng: np.random.Generator) -> HashKey:
    return HashKey(N, tuple(random_below(rng, N) for _ in range(m)))


def hash_eval(key: HashKey, bits) -> int:
    bits = list(bits)
    if len(bits) != key.m:
        raise DomainError(f"expected {key.m} input bits, got {len(bits)}")
    if any(b not in (0, 1) for b in bits):
        raise DomainError("hash input must be bits")
    return sum(a for a, b in zip(key.a, bits) if b) % key.N


def verify_collision(key: HashKey, b) -> bool:
    """b != 0, |b|^2 <= m and sum b_i a_i = 0 mod N, all checked exactly."""
    b = [int(x) for x in b]
    if len(b) != key.m or not any(b):
        return False
    if sum(x * x for x in b) > key.m:
        return False
    return sum(x * a for x, a in zip(b, key.a)) % key.N == 0


def _ternary_table(values, N: int) -> np.ndarray:
    """Sums of c . values mod N for all c in {-1,0,1}^k; index digit i (base 3) is c_i + 1."""
    sums = np.zeros(1, dtype=np.int64)
    for v in values:
        v = int(v) % N
        sums = np.concatenate([(sums - v) % N, sums, (sums + v) % N])
    return sums


def _decode(idx: int, k: int) -> list[int]:
    return [(idx // 3**i) % 3 - 1 for i in range(k)]


def bruteforce_collision(key: HashKey, prefix: int | None = None) -> list[int]:
    """Exhaustive meet-in-the-middle over {-1,0,1}^m; returns a witness or raises.

    Every collision x != x' of f gives the ternary witness x - x', so this
    finds a witness whenever f has a collision, and in particular whenever
    m > log2 N. With ``prefix`` only the first ``prefix`` coordinates may be
    nonzero, which is much cheaper once 3^prefix comfortably exceeds N.
    """
    N = key.N
    m = key.m if prefix is None else min(prefix, key.m)
    if m > MITM_MAX_M:
        raise DimensionTooLarge(f"meet-in-the-middle limited to m <= {MITM_MAX_M}")
    if N >= 2**62:
        raise DimensionTooLarge("modulus too large for int64 tables")
    k = m // 2
    left, right = key.a[:k], key.a[k:m]
    A = _ternary_table(left, N)
    B = _ternary_table(right, N)
    zero_a = (3**k - 1) // 2
    zero_b = (3 ** (m - k) - 1) // 2
    order = np.argsort(A, kind="stable")
    As = A[order]
    targets = (-B) % N
    lo = np.searchsorted(As, targets, side="left")
    hi = np.searchsorted(As, targets, side="right")
    counts = hi - lo
    for ib in np.nonzero(counts)[0]:
        for pos in range(lo[ib], hi[ib]):
            ia = int(order[pos])
            if ia == zero_a and ib == zero_b:
                continue
            b = _decode(ia, k) + _decode(int(ib), m - k) + [0] * (key.m - m)
            if next(v for v in b if v) < 0:
                b = [-v for v in b]
            if verify_collision(key, b):
                return b
    raise CollisionNotFound("no ternary vector hashes to zero")


def staged_collision(key: HashKey) -> list[int]:
    """Try a short prefix first (3^k >= 64 N), then the full search."""
    k = 1
    while 3**k < 64 * key.N:
        k += 1
    if k < key.m:
        try:
            return bruteforce_collision(key, prefix=k)
        except CollisionNotFound:
            pass
    return bruteforce_collision(key)


def bits_from_witness(b) -> tuple[list[int], list[int]]:
    """Split a ternary witness into two bit vectors x, x' with x - x' = b."""
    x = [1 if v == 1 else 0 for v in b]
    y = [1 if v == -1 else 0 for v in b]
    return x, y


@dataclass(frozen=True)
class SubsetSumDistribution:
    counts: tuple  # number of subsets with each sum mod 2^l
    subsets: int  # 2^len(a)
    l: int

    def probabilities(self) -> list[Fraction]:
        return [Fraction(c, self.subsets) for c in self.counts]

    @property
    def distance_to_uniform(self) -> Fraction:
        size = 1 << self.l
        return Fraction(sum(abs(c * size - self.subsets) for c in self.counts), 2 * self.subsets * size)


def subset_sum_distribution(a, l: int) -> SubsetSumDistribution:
    """Exact distribution of sum_{i in S} a_i mod 2^l over uniform random subsets S."""
    if not 0 <= l <= 20:
        raise DomainError("need 0 <= l <= 20")
    size = 1 << l
    counts = np.zeros(size, dtype=object)
    counts[0] = 1
    for v in a:
        counts = counts + np.roll(counts, int(v) % size)
    return SubsetSumDistribution(tuple(int(c) for c in counts), 2 ** len(a), l)
