"""Search-to-decision for unique SVP, and the chain down to a 1-D distinguisher.

The decision problem dSVP_p asks, for a basis of a unique lattice and an index
i, whether p divides the i-th coefficient of the shortest vector. Routine C and
procedure B turn a dSVP_p oracle into a shortest-vector finder; build_M,
Gaussian sampling on the dual and project_f turn a distinguisher on [0, 1)
into a dSVP_p oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Protocol

import numpy as np

from .errors import (
    DomainError,
    OracleExhausted,
    PromiseViolation,
    ProtocolError,
    StepBudgetExceeded,
    USVPFailure,
)
from .lattice import (
    Basis,
    DualSamples,
    gram_schmidt,
    lll_reduce,
    norm2,
    sample_dual_gaussian_coords,
    shortest_vector_enum,
)
from .numerics import sqrt_fraction

# --------------------------------------------------------------------------
# Instances and oracles


@dataclass(frozen=True)
class DSVPInstance:
    """Basis, prime p, coordinate index i (0-based) and alpha^2 with lambda < alpha <= 2 lambda."""

    basis: Basis
    p: int
    i: int
    alpha_sq: Fraction

    @property
    def alpha(self) -> float:
        return math.sqrt(self.alpha_sq)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_in_window(g) -> int:
    """Smallest prime in (g, 2g]."""
    g = Fraction(g)
    p = math.floor(g) + 1
    while p <= 2 * g:
        if is_prime(p):
            return p
        p += 1
    raise DomainError(f"no prime in ({g}, {2 * g}]")


class EnumerationOracle:
    """Reference dSVP_p oracle: find the shortest vector by enumeration, test p | a_i.

    Shortest vectors already found are reused for sublattices that still
    contain them: if L' is a sublattice of L and tau(L) lies in L', then
    tau(L') = tau(L). The answer never depends on alpha, so answers are also
    memoised per (basis, i, p).
    """

    def __init__(self, shortcut: bool = True):
        self.shortcut = shortcut
        self.known: list[tuple[Basis, tuple]] = []
        self.memo: dict = {}
        self.calls = 0
        self.enumerations = 0

    def shortest(self, basis: Basis) -> tuple:
        if self.shortcut:
            for anc, tau in reversed(self.known):
                if basis.contains(tau) and basis.is_sublattice_of(anc):
                    return tau
        res = shortest_vector_enum(basis, with_ratio=False)
        self.enumerations += 1
        if res.ties > 1:
            raise PromiseViolation("shortest vector is not unique")
        self.known.append((basis, res.vector))
        return res.vector

    def coefficients(self, basis: Basis) -> list[int]:
        return basis.integer_coords(self.shortest(basis))

    def __call__(self, inst: DSVPInstance) -> bool:
        self.calls += 1
        key = (inst.basis.columns, inst.i, inst.p)
        if key not in self.memo:
            self.memo[key] = self.coefficients(inst.basis)[inst.i] % inst.p == 0
        return self.memo[key]


# --------------------------------------------------------------------------
# Routine C and procedure B


@dataclass
class ReductionLog:
    """Bookkeeping shared by routine C / procedure B."""

    oracle_calls: int = 0
    c_calls: int = 0
    max_c_calls: int | None = None
    trace: Callable[[str], None] | None = None
    on_basis: Callable[[Basis, Basis], None] | None = None

    def ask(self, oracle, basis: Basis, p: int, idx: int, alpha_sq, pair) -> bool:
        ans = bool(oracle(DSVPInstance(basis, p, idx, alpha_sq)))
        self.oracle_calls += 1
        if self.trace is not None:
            self.trace(f"{basis.digest()}\t{pair[0]}\t{pair[1]}\t{'YES' if ans else 'NO'}")
        return ans

    def changed(self, old: Basis, new: Basis):
        if self.on_basis is not None:
            self.on_basis(old, new)


def routine_C(basis: Basis, i: int, j: int, p: int, oracle, alpha_sq=Fraction(0), log: ReductionLog | None = None):
    """Shrink a_j relative to a_i; returns (basis, bit).

    bit 0: the new a_i is zero. bit 1: a_i is nonzero and |a_j| <= |a_i| / 2.
    Only columns i and j change, and every step passes to a sublattice that
    keeps the shortest vector.
    """
    if i == j:
        raise DomainError("routine C needs i != j")
    log = log or ReductionLog()
    log.c_calls += 1
    if log.max_c_calls is not None and log.c_calls > log.max_c_calls:
        raise StepBudgetExceeded(f"more than {log.max_c_calls} routine C calls")
    n = basis.n
    # step 1: multiply v_i by p while p | a_i, at most 2n times
    for _ in range(2 * n):
        if not log.ask(oracle, basis, p, i, alpha_sq, (i, j)):
            break
        new = basis.with_column(i, [p * x for x in basis.columns[i]])
        log.changed(basis, new)
        basis = new
    else:
        return basis, 0
    # step 2: 2n rounds of picking v_i + c v_j with p | a_j, then v_j <- p v_j
    half = (p - 1) // 2
    for _ in range(2 * n):
        vi, vj = basis.columns[i], basis.columns[j]
        for c in range(-half, half + 1):
            cand = basis.with_column(i, [a + c * b for a, b in zip(vi, vj)])
            if log.ask(oracle, cand, p, j, alpha_sq, (j, i)):
                break
        else:
            raise ProtocolError("no shift made p divide a_j")
        log.changed(basis, cand)
        new = cand.with_column(j, [p * x for x in cand.columns[j]])
        log.changed(cand, new)
        basis = new
    return basis, 1


def procedure_B(basis: Basis, alpha_sq, p: int, oracle, log: ReductionLog | None = None) -> tuple:
    """Zero out all but one coefficient of the shortest vector; return that basis vector."""
    log = log or ReductionLog()
    n = basis.n
    if log.max_c_calls is None:
        log.max_c_calls = 8 * n * n
    # each pair of bit-one calls shrinks |a_i| by 4 and |a_i| <= 2^(2n) at entry,
    # so a correct oracle zeroes a coefficient within 2n + 2 calls per pair
    per_pair = 2 * n + 2
    Z = list(range(n))
    while len(Z) >= 2:
        i, j = Z[0], Z[1]
        start = log.c_calls
        while True:
            if log.c_calls - start >= per_pair:
                raise StepBudgetExceeded(f"no coefficient vanished within {per_pair} routine C calls")
            basis, bit = routine_C(basis, i, j, p, oracle, alpha_sq, log)
            if bit == 0:
                Z.remove(i)
                break
            basis, bit = routine_C(basis, j, i, p, oracle, alpha_sq, log)
            if bit == 0:
                Z.remove(j)
                break
    return basis.columns[Z[0]]


@dataclass
class USVPReport:
    vector: tuple
    candidates: list = field(default_factory=list)  # (alpha_sq, vector or error text)
    oracle_calls: int = 0


def alpha_candidates(reduced: Basis) -> list[Fraction]:
    """alpha_j^2 for alpha_j = 2^(j-n) |v_1|, j = 1..n+1."""
    n = reduced.n
    v1 = norm2(reduced.columns[0])
    return [v1 * Fraction(4) ** (j - n) for j in range(1, n + 2)]


def solve_usvp(basis: Basis, p: int, oracle, trace=None, on_basis=None, report: bool = False):
    """Find the shortest vector of a unique lattice from a dSVP_p oracle.

    Runs procedure B for each alpha candidate, keeps the nonzero lattice
    vectors it returns, and picks the shortest.
    """
    if not (p > 2 and is_prime(p)):
        raise DomainError("p must be an odd prime")
    reduced = lll_reduce(basis)
    if on_basis is not None:
        on_basis(basis, reduced)
    rep = USVPReport(None)
    best = None
    for a2 in alpha_candidates(reduced):
        log = ReductionLog(trace=trace, on_basis=on_basis)
        try:
            v = procedure_B(reduced, a2, p, oracle, log)
        except (ProtocolError, StepBudgetExceeded, PromiseViolation) as exc:
            rep.candidates.append((a2, f"{type(exc).__name__}: {exc}"))
            rep.oracle_calls += log.oracle_calls
            continue
        rep.oracle_calls += log.oracle_calls
        rep.candidates.append((a2, v))
        if any(v) and basis.contains(v) and (best is None or norm2(v) < norm2(best)):
            best = v
    if best is None:
        raise USVPFailure("no alpha candidate produced a lattice vector")
    rep.vector = best
    return rep if report else best


# --------------------------------------------------------------------------
# Gap version


def reference_gap_oracle(basis: Basis, d) -> bool:
    """YES iff lambda(L) <= d (a valid answer to every gap promise)."""
    return shortest_vector_enum(basis, with_ratio=False).length2 <= Fraction(d) ** 2


def _approximate_lambda(basis: Basis, gap_oracle, p: int, rel: float = 2**-20):
    """Interval (lo, sqrt(p) * hi] containing lambda, by geometric bisection."""
    gs = gram_schmidt(basis)
    lo = math.sqrt(min(gs.norms2)) * (1 - 1e-9)
    hi = math.sqrt(min(norm2(c) for c in basis.columns))
    if not gap_oracle(basis, Fraction(hi)):
        raise PromiseViolation("gap oracle denies lambda <= |v_1|")
    while hi / lo > 1 + rel:
        mid = math.sqrt(lo * hi)
        if gap_oracle(basis, Fraction(mid)):
            hi = mid
        else:
            lo = mid
    return lo, math.sqrt(p) * hi


def gap_reduction(inst: DSVPInstance, gap_oracle=reference_gap_oracle) -> bool:
    """Answer dSVP_p by comparing lambda(L) with lambda of span(p v_i, others)."""
    b, p, i = inst.basis, inst.p, inst.i
    scaled = b.with_column(i, [p * x for x in b.columns[i]])
    lo1, hi1 = _approximate_lambda(b, gap_oracle, p)
    lo2, hi2 = _approximate_lambda(scaled, gap_oracle, p)
    return max(lo1, lo2) < min(hi1, hi2)


# --------------------------------------------------------------------------
# From dSVP to distinguishing on the dual


def _reorder(basis: Basis, i: int) -> Basis:
    cols = list(basis.columns)
    cols[0], cols[i] = cols[i], cols[0]
    return Basis(tuple(cols))


def build_M(basis: Basis, alpha_sq, g, p: int, i: int = 0, frac_bits: int = 64) -> Basis:
    """LLL basis of span(p v_i', other v_j') with v' = v * 2 sqrt(n) / (alpha g).

    p = 1 gives the pure scaling (diagnostic).
    """
    n = basis.n
    g = Fraction(g)
    if g * g < 16 * n:
        raise DomainError("need g >= 4 sqrt(n)")
    if p != 1 and not p > g:
        raise DomainError("need p > g")
    alpha_sq = Fraction(alpha_sq)
    if alpha_sq <= 0:
        raise DomainError("alpha must be positive")
    scale = sqrt_fraction(Fraction(4 * n) / (alpha_sq * g * g), frac_bits)
    b = _reorder(basis, i)
    cols = [tuple(x * scale for x in c) for c in b.columns]
    cols[0] = tuple(p * x for x in cols[0])
    return lll_reduce(Basis(tuple(cols)))


def default_K(n: int) -> int:
    return 2 ** (3 * n)


def project_f(coords, K: int) -> Fraction:
    """floor(K a_1)/K + ... + floor(K a_{n-1})/K^{n-1} + a_n/K^n for dual coords a in [0,1)^n."""
    a = [Fraction(c) for c in coords]
    if any(not 0 <= c < 1 for c in a):
        raise DomainError("dual coordinates must lie in [0, 1)")
    n = len(a)
    r = Fraction(0)
    for idx in range(n - 1):
        r += Fraction(math.floor(K * a[idx]), K ** (idx + 1))
    return r + a[-1] / K**n


def project_samples(samples: DualSamples, K: int) -> tuple[list[int], int]:
    """project_f applied to a sample batch, exact: returns (numerators, common denominator)."""
    den = samples.den
    n = samples.num.shape[1]
    Kn = K**n
    out = []
    for row in samples.num:
        acc = 0
        for idx in range(n - 1):
            acc += (K * row[idx] // den) * K ** (n - 1 - idx) * den
        out.append(acc + row[n - 1])
    return out, Kn * den


def line_vector(dual: Basis, K: int) -> tuple:
    """w = v*_1 + K v*_2 + ... + K^(n-1) v*_n."""
    return dual.combine([K**i for i in range(dual.n)])


def tau_dot_w(coeffs, K: int) -> int:
    """<tau, w> for tau = sum a_i v_i: equals sum a_i K^(i-1) since <v_i, v*_j> = delta_ij."""
    return sum(int(a) * K**i for i, a in enumerate(coeffs))


def phases(nums: list[int], den: int, h: int) -> np.ndarray:
    """(r * h) mod 1 for r = num/den, exact before the final float conversion."""
    return np.array([(x * h % den) / den for x in nums])


# --------------------------------------------------------------------------
# Distinguishers on [0, 1)


class SampleStream:
    """A budgeted stream of samples in [0, 1)."""

    def __init__(self, draw: Callable[[int], np.ndarray], budget: int):
        self._draw = draw
        self.remaining = budget

    def take(self, k: int) -> np.ndarray:
        if k > self.remaining:
            raise OracleExhausted(f"asked for {k} samples with {self.remaining} left")
        self.remaining -= k
        return self._draw(k)


class Distinguisher(Protocol):
    budget: int

    def __call__(self, stream: SampleStream, hint=None) -> bool: ...


@dataclass
class PipelineHint:
    """Side information handed only to clairvoyant test distinguishers."""

    M: Basis
    K: int
    g: Fraction


class WindowDistinguisher:
    """Clairvoyant: enumerates M and accepts iff lambda(M) < sqrt(n) (wavy case)."""

    budget = 1

    def __call__(self, stream: SampleStream, hint: PipelineHint | None = None) -> bool:
        stream.take(1)
        res = shortest_vector_enum(hint.M, with_ratio=False)
        return res.length2 < hint.M.n


class PhaseDistinguisher:
    """Clairvoyant about the frequency only: h = |<tau(M), w>| from the hint.

    Accepts iff the mean of frc(r h) over the samples falls below ``threshold``;
    uniform samples give about 1/4, wavy ones with lambda(M)^2 <= 1/4 much less.
    """

    def __init__(self, budget: int = 64, threshold: float = 0.19):
        self.budget = budget
        self.threshold = threshold

    def __call__(self, stream: SampleStream, hint: PipelineHint | None = None) -> bool:
        res = shortest_vector_enum(hint.M, with_ratio=False)
        h = abs(tau_dot_w(res.coeffs, hint.K))
        r = stream.take(self.budget)
        ph = np.asarray(r * h) if h < 2**40 else None
        if ph is None:
            raise DomainError("frequency too large for float phases")
        t = np.abs(ph - np.round(ph))
        return float(t.mean()) < self.threshold


class CoinFlipDistinguisher:
    """Ignores the samples and answers at random."""

    budget = 1

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def __call__(self, stream: SampleStream, hint=None) -> bool:
        stream.take(1)
        return bool(self.rng.random() < 0.5)


class PipelineOracle:
    """dSVP_p oracle built from a 1-D distinguisher with majority voting."""

    def __init__(self, g, distinguisher, rng: np.random.Generator, majority_rounds: int | None = None, K: int | None = None):
        self.g = Fraction(g)
        self.dist = distinguisher
        self.rng = rng
        self.rounds = majority_rounds
        self.K = K
        self.calls = 0

    def samples(self, M: Basis, count: int, K: int) -> tuple[list[int], int]:
        return project_samples(sample_dual_gaussian_coords(M, self.rng, count), K)

    def __call__(self, inst: DSVPInstance) -> bool:
        self.calls += 1
        n = inst.basis.n
        K = self.K or default_K(n)
        rounds = self.rounds or 2 * n + 1
        M = build_M(inst.basis, inst.alpha_sq, self.g, inst.p, inst.i)
        hint = PipelineHint(M, K, self.g)
        votes = 0
        for _ in range(rounds):
            def draw(k, M=M):
                nums, den = self.samples(M, k, K)
                return np.array([x / den for x in nums])

            stream = SampleStream(draw, self.dist.budget)
            votes += bool(self.dist(stream, hint))
        return 2 * votes > rounds


def usvp_pipeline(basis: Basis, g, distinguisher, rng: np.random.Generator, p: int | None = None, majority_rounds: int | None = None, K: int | None = None, report: bool = False):
    """Shortest vector via build_M -> dual Gaussian -> project_f -> distinguisher."""
    p = p or prime_in_window(g)
    oracle = PipelineOracle(g, distinguisher, rng, majority_rounds, K)
    return solve_usvp(basis, p, oracle, report=report)
