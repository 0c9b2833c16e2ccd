"""Exact lattice algebra and Gaussian measures on lattices.

Bases are stored as columns of exact rationals (``Fraction``). LLL runs on the
integer-scaled basis with exact integer Gram-Schmidt data. Enumeration uses
float Gram-Schmidt data on an LLL-reduced basis to walk candidate points, then
confirms lengths exactly where it matters.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce

import numpy as np

from .errors import DimensionTooLarge, DomainError, RankError
from .numerics import round_nearest

MAX_ENUM_DIM = 12
NODE_CAP = 10**8

Vector = tuple  # tuple[Fraction, ...]


def _vec(values) -> Vector:
    return tuple(Fraction(v) for v in values)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def norm2(a):
    return dot(a, a)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


# --------------------------------------------------------------------------
# Exact matrix helpers (row-major lists of Fractions)

def _solve(mat, rhs):
    """Solve mat * x = rhs exactly; mat is a square row-major matrix."""
    n = len(mat)
    aug = [list(map(Fraction, row)) + [Fraction(r)] for row, r in zip(mat, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise RankError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col] * inv
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] / aug[i][i] for i in range(n)]


def _inverse(mat):
    """Gauss-Jordan on [mat | I], exact."""
    n = len(mat)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise RankError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [a * inv for a in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _det(mat) -> Fraction:
    m = [list(map(Fraction, row)) for row in mat]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return det


# --------------------------------------------------------------------------
# Basis

@dataclass(frozen=True)
class Basis:
    """Columns v_1..v_n of a full-rank lattice in R^n."""

    columns: tuple

    def __post_init__(self):
        cols = tuple(_vec(c) for c in self.columns)
        if not cols or any(len(c) != len(cols) for c in cols):
            raise DomainError("basis must be n columns of length n")
        object.__setattr__(self, "columns", cols)
        if self.det == 0:
            raise RankError("basis columns are linearly dependent")

    @classmethod
    def from_columns(cls, cols) -> Basis:
        return cls(tuple(tuple(c) for c in cols))

    @classmethod
    def identity(cls, n: int) -> Basis:
        return cls(tuple(tuple(int(i == j) for i in range(n)) for j in range(n)))

    @classmethod
    def diagonal(cls, entries) -> Basis:
        n = len(entries)
        return cls(tuple(tuple(entries[j] if i == j else 0 for i in range(n)) for j in range(n)))

    @property
    def n(self) -> int:
        return len(self.columns)

    @cached_property
    def rows(self):
        """Row-major matrix whose columns are the basis vectors."""
        return [[c[i] for c in self.columns] for i in range(self.n)]

    @cached_property
    def det(self) -> Fraction:
        return _det(self.rows)

    @property
    def volume(self) -> Fraction:
        return abs(self.det)

    @cached_property
    def denominator(self) -> int:
        return reduce(_lcm, (x.denominator for c in self.columns for x in c), 1)

    @cached_property
    def integer_columns(self):
        d = self.denominator
        return [[int(x * d) for x in c] for c in self.columns]

    @cached_property
    def float_rows(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.rows])

    def combine(self, coeffs) -> Vector:
        """sum_i coeffs[i] * v_i."""
        return tuple(sum(Fraction(a) * c[k] for a, c in zip(coeffs, self.columns)) for k in range(self.n))

    @cached_property
    def _scaled_inverse(self) -> tuple[list[list[int]], int]:
        """(A, L) with B^-1 = A / L and A integral; coordinates then need only integer arithmetic."""
        d = self.denominator
        n = self.n
        ints = self.integer_columns  # B = M / d with M integral (column-major)
        # fraction-free Gauss-Jordan on [M | I]: row r ends as (diag_r e_r | row r of diag_r M^-1)
        aug = [[ints[j][i] for j in range(n)] + [int(i == j) for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if piv is None:
                raise RankError("singular matrix")
            aug[col], aug[piv] = aug[piv], aug[col]
            pr = aug[col]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f, p = aug[r][col], pr[col]
                    row = [p * a - f * b for a, b in zip(aug[r], pr)]
                    g = reduce(math.gcd, row)
                    aug[r] = [a // g for a in row]
        L = reduce(_lcm, (abs(aug[r][r]) for r in range(n)), 1)
        # B^-1 = d M^-1
        A = [[d * x * (L // aug[r][r]) for x in aug[r][n:]] for r in range(n)]
        return A, L

    def _coord_numerators(self, x) -> tuple[list[int], int]:
        v = _vec(x)
        q = reduce(_lcm, (c.denominator for c in v), 1)
        vi = [int(c * q) for c in v]
        A, L = self._scaled_inverse
        return [sum(a * c for a, c in zip(row, vi)) for row in A], L * q

    def coords(self, x) -> list[Fraction]:
        """Coordinates of x with respect to this basis."""
        nums, den = self._coord_numerators(x)
        return [Fraction(u, den) for u in nums]

    def contains(self, x) -> bool:
        nums, den = self._coord_numerators(x)
        return all(u % den == 0 for u in nums)

    def integer_coords(self, x) -> list[int]:
        c = self.coords(x)
        if any(v.denominator != 1 for v in c):
            raise DomainError("vector is not in the lattice")
        return [int(v) for v in c]

    def transform(self, unimodular_cols) -> Basis:
        """New basis whose j-th column is sum_i U[i][j] v_i (U given column-wise)."""
        return Basis(tuple(self.combine(col) for col in unimodular_cols))

    def scaled(self, factor) -> Basis:
        f = Fraction(factor)
        return Basis(tuple(tuple(x * f for x in c) for c in self.columns))

    def with_column(self, j: int, vec) -> Basis:
        cols = list(self.columns)
        cols[j] = _vec(vec)
        return Basis(tuple(cols))

    def is_sublattice_of(self, other: Basis) -> bool:
        return all(other.contains(c) for c in self.columns)

    def same_lattice(self, other: Basis) -> bool:
        return self.is_sublattice_of(other) and other.is_sublattice_of(self)

    def digest(self) -> str:
        return hashlib.sha256(basis_text(self).encode()).hexdigest()[:16]


# --------------------------------------------------------------------------
# Gram-Schmidt

@dataclass(frozen=True)
class GramSchmidtData:
    ortho: tuple  # v_i^dagger
    mu: tuple  # mu[j][i] = <v_j, v_i^dagger> / |v_i^dagger|^2 for i < j
    norms2: tuple


def gram_schmidt(b: Basis) -> GramSchmidtData:
    ortho, norms2 = [], []
    mu = [[Fraction(0)] * b.n for _ in range(b.n)]
    for j, v in enumerate(b.columns):
        w = list(v)
        for i in range(j):
            m = dot(v, ortho[i]) / norms2[i]
            mu[j][i] = m
            w = [a - m * c for a, c in zip(w, ortho[i])]
        nn = norm2(w)
        if nn == 0:
            raise RankError("dependent columns")
        ortho.append(tuple(w))
        norms2.append(nn)
    return GramSchmidtData(tuple(ortho), tuple(tuple(r) for r in mu), tuple(norms2))


# --------------------------------------------------------------------------
# LLL (exact integral version, Lovasz constant 3/4)

def _lll_integral(cols: list[list[int]]):
    """Reduce integer columns in place; return the unimodular transform columns."""
    n = len(cols)
    b = [list(c) for c in cols]
    H = [[int(i == j) for i in range(n)] for j in range(n)]
    d = [0] * (n + 1)
    lam = [[0] * n for _ in range(n)]
    d[0] = 1

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = round_nearest(Fraction(lam[k][l], d[l + 1]))
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            H[k] = [x - q * y for x, y in zip(H[k], H[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        H[k], H[k - 1] = H[k - 1], H[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    d[1] = dot(b[0], b[0])
    if d[1] == 0:
        raise RankError("zero basis vector")
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise RankError("dependent columns")
                    d[k + 1] = u
        red(k, k - 1)
        if 4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lam[k][k - 1] ** 2:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return b, H


def lll_reduce(b: Basis, with_transform: bool = False):
    """LLL-reduced basis of the same lattice (size-reduced, Lovasz constant 3/4).

    With ``with_transform`` also returns U (as columns) with reduced_j = sum_i U[i][j] b_i.
    """
    den = b.denominator
    red_cols, H = _lll_integral(b.integer_columns)
    out = Basis(tuple(tuple(Fraction(x, den) for x in c) for c in red_cols))
    return (out, H) if with_transform else out


def is_lll_reduced(b: Basis) -> bool:
    """Size reduction |mu| <= 1/2 and |v_i^dagger|^2 <= 2 |v_{i+1}^dagger|^2."""
    gs = gram_schmidt(b)
    for j in range(b.n):
        for i in range(j):
            if abs(gs.mu[j][i]) > Fraction(1, 2):
                return False
    return all(gs.norms2[i] <= 2 * gs.norms2[i + 1] for i in range(b.n - 1))


def dual_basis(b: Basis) -> Basis:
    """Columns of (B^T)^{-1}: <v_i, v*_j> = delta_ij."""
    inv = _inverse([list(c) for c in b.columns])  # (B^T)^{-1}, rows of B^T are columns of B
    n = b.n
    return Basis(tuple(tuple(inv[r][j] for r in range(n)) for j in range(n)))


def reduce_mod_pp(x, b: Basis) -> Vector:
    """The point of the half-open parallelepiped of ``b`` congruent to x mod the lattice."""
    c = b.coords(x)
    return b.combine([v - math.floor(v) for v in c])


# --------------------------------------------------------------------------
# Enumeration

class _EnumFrame:
    """Float Gram-Schmidt data of an LLL-reduced basis, for point enumeration."""

    def __init__(self, b: Basis):
        if b.n > MAX_ENUM_DIM:
            raise DimensionTooLarge(f"enumeration refused for n={b.n} > {MAX_ENUM_DIM}")
        self.input = b
        self.reduced, self.U = lll_reduce(b, with_transform=True)
        gs = gram_schmidt(self.reduced)
        self.n = b.n
        self.B = [float(x) for x in gs.norms2]
        self.mu = [[float(x) for x in row] for row in gs.mu]
        self.ortho = [np.array([float(x) for x in v]) for v in gs.ortho]
        self.R = self.reduced.float_rows

    def points(self, radius: float, center=None, cap: int = NODE_CAP):
        """Coefficient vectors y (w.r.t. the reduced basis) with |B y - center| <= radius."""
        n = self.n
        if center is None:
            tau = [0.0] * n
        else:
            c = np.asarray([float(x) for x in center])
            tau = [float(c @ self.ortho[i]) / self.B[i] for i in range(n)]
        R2 = radius * radius * (1 + 1e-9) + 1e-300
        y = [0] * n
        out = []
        nodes = 0
        B, mu = self.B, self.mu

        def rec(i, partial):
            nonlocal nodes
            c = -tau[i]
            for j in range(i + 1, n):
                c += mu[j][i] * y[j]
            rem = R2 - partial
            s = math.sqrt(max(rem, 0.0) / B[i])
            lo, hi = math.ceil(-c - s), math.floor(-c + s)
            nodes += max(hi - lo + 1, 0)
            if nodes > cap:
                raise DimensionTooLarge(f"enumeration exceeded {cap} nodes")
            for yi in range(lo, hi + 1):
                t = yi + c
                p = partial + t * t * B[i]
                if p <= R2:
                    y[i] = yi
                    if i == 0:
                        out.append(tuple(y))
                    else:
                        rec(i - 1, p)
            y[i] = 0

        rec(n - 1, 0.0)
        return out

    def to_input_coeffs(self, y) -> tuple[int, ...]:
        n = self.n
        return tuple(sum(self.U[j][i] * y[j] for j in range(n)) for i in range(n))

    def vector(self, y) -> Vector:
        return self.reduced.combine(y)


@dataclass(frozen=True)
class ShortestVectorResult:
    vector: Vector
    length2: Fraction
    coeffs: tuple  # integer coefficients w.r.t. the input basis
    ratio: float  # shortest non-parallel length / lambda
    ratio_is_lower_bound: bool = False
    ties: int = 1  # number of shortest vectors up to sign

    @property
    def length(self) -> float:
        return math.sqrt(self.length2)


def _parallel(u, v) -> bool:
    # exact: u, v parallel iff all 2x2 minors vanish
    n = len(u)
    return all(u[i] * v[j] == u[j] * v[i] for i in range(n) for j in range(i + 1, n))


def shortest_vector_enum(b: Basis, radius_factor: float | None = None, frame: _EnumFrame | None = None, with_ratio: bool = True) -> ShortestVectorResult:
    """Exact shortest vector by exhaustive enumeration.

    The returned coefficients are w.r.t. ``b`` and sign-normalised so the first
    nonzero coefficient is positive. ``radius_factor`` caps the second search
    at ``radius_factor * lambda``; if no non-parallel vector is found inside
    the cap, the reported ratio is that cap and flagged as a lower bound.
    ``with_ratio=False`` skips the second search (ratio reported as nan).
    """
    fr = frame or _EnumFrame(b)
    red = fr.reduced
    first_len = math.sqrt(min(float(norm2(c)) for c in red.columns))
    cands = [y for y in fr.points(first_len) if any(y)]
    exact = [(norm2(fr.vector(y)), y) for y in cands]
    best = min(e[0] for e in exact)
    shortest = [y for l2, y in exact if l2 == best]
    tau_y = shortest[0]
    tau = fr.vector(tau_y)
    ties = len(shortest) // 2 if len(shortest) > 1 else 1
    lam = math.sqrt(best)

    coeffs = fr.to_input_coeffs(tau_y)
    if next(c for c in coeffs if c != 0) < 0:
        coeffs = tuple(-c for c in coeffs)
        tau = tuple(-x for x in tau)

    if b.n == 1:
        return ShortestVectorResult(tau, best, coeffs, math.inf, False, ties)
    if ties > 1:
        return ShortestVectorResult(tau, best, coeffs, 1.0, False, ties)
    if not with_ratio:
        return ShortestVectorResult(tau, best, coeffs, math.nan, False, ties)

    # second minimum among vectors not parallel to tau
    bound2 = min(norm2(c) for c in red.columns if not _parallel(c, tau))
    cap_hit = False
    radius = math.sqrt(bound2)
    if radius_factor is not None and radius > radius_factor * lam:
        radius = radius_factor * lam
        cap_hit = True
    second2 = None
    for y in fr.points(radius):
        if not any(y):
            continue
        v = fr.vector(y)
        if _parallel(v, tau):
            continue
        l2 = norm2(v)
        if second2 is None or l2 < second2:
            second2 = l2
    if second2 is None:
        return ShortestVectorResult(tau, best, coeffs, radius / lam, True, ties)
    if not cap_hit:
        second2 = min(second2, bound2)
    return ShortestVectorResult(tau, best, coeffs, math.sqrt(second2 / best), False, ties)


def lattice_points(b: Basis, radius: float, center=None) -> list[Vector]:
    """All lattice vectors within ``radius`` of ``center`` (exact vectors)."""
    fr = _EnumFrame(b)
    return [fr.vector(y) for y in fr.points(radius, center)]


def _float_points(b: Basis, radius: float, center=None) -> np.ndarray:
    fr = _EnumFrame(b)
    ys = fr.points(radius, center)
    if not ys:
        return np.zeros((0, b.n))
    return np.array(ys, dtype=float) @ fr.R.T


# --------------------------------------------------------------------------
# Gaussian sums

def banaszczyk_tail_factor(n: int, c: float) -> float:
    """2 (c sqrt(2 pi e) exp(-pi c^2))^n: bound on rho outside radius c sqrt(n), relative to rho(L)."""
    if c < 1 / math.sqrt(2 * math.pi):
        return math.inf
    return 2.0 * (c * math.sqrt(2 * math.pi * math.e) * math.exp(-math.pi * c * c)) ** n


@dataclass(frozen=True)
class RhoResult:
    value: float
    tail_bound: float


def rho_truncated(b: Basis, shift=None, radius: float = 8.0) -> RhoResult:
    """sum of exp(-pi |x|^2) over x in L + shift with |x| <= radius."""
    if not radius > 0:
        raise DomainError("radius must be positive")
    n = b.n
    center = None if shift is None else [-Fraction(s) for s in shift]
    pts = _float_points(b, radius, center)
    if shift is not None:
        pts = pts + np.array([float(s) for s in shift])
    value = float(np.exp(-math.pi * (pts * pts).sum(axis=1)).sum())
    factor = banaszczyk_tail_factor(n, radius / math.sqrt(n))
    if factor >= 1:
        tail = math.inf
    else:
        base = value if shift is None else float(np.exp(-math.pi * (_float_points(b, radius) ** 2).sum(axis=1)).sum())
        tail = factor * base / (1 - factor)
    return RhoResult(value, tail)


def poisson_residual(b: Basis, y, radius: float = 8.0) -> float:
    """|rho(L* + y) - d(L) sum_{x in L} cos(2 pi <x,y>) exp(-pi |x|^2)|, both truncated."""
    if b.n > 6:
        raise DimensionTooLarge("Poisson check limited to n <= 6")
    yv = np.array([float(v) for v in y])
    lhs = rho_truncated(dual_basis(b), [Fraction(v) for v in y], radius).value
    pts = _float_points(b, radius)
    rhs = float(b.volume) * float((np.cos(2 * math.pi * pts @ yv) * np.exp(-math.pi * (pts * pts).sum(axis=1))).sum())
    return abs(lhs - rhs)


def _tail_radius(n: int, target: float = 1e-16) -> float:
    c = 1 / math.sqrt(2 * math.pi) + 0.01
    while banaszczyk_tail_factor(n, c) > target:
        c += 0.01
    return c * math.sqrt(n)


def banaszczyk_ratio(b: Basis, radius: float) -> float:
    """rho(nonzero lattice points of norm >= radius) / rho(L)."""
    if b.n > 8:
        raise DimensionTooLarge("ratio limited to n <= 8")
    total_r = max(radius + 3.0, _tail_radius(b.n))
    pts = _float_points(b, total_r)
    n2 = (pts * pts).sum(axis=1)
    w = np.exp(-math.pi * n2)
    total = float(w.sum())
    norms = np.sqrt(n2)
    outside = float(w[(norms >= radius * (1 - 1e-12)) & (n2 > 0)].sum())
    return outside / total


# --------------------------------------------------------------------------
# Gaussian on the dual lattice

SAMPLE_FRAC_BITS = 60


@dataclass
class DualSamples:
    """Points of P(L*) given by exact dual coordinates num / den in [0,1)."""

    num: np.ndarray  # object array of ints, shape (count, n)
    den: int

    @property
    def count(self) -> int:
        return self.num.shape[0]

    def coords(self) -> np.ndarray:
        den = self.den
        return np.array([[v / den for v in row] for row in self.num], dtype=float)

    def vectors(self, b: Basis) -> np.ndarray:
        """The sample points in R^n (float): x = D c with D the dual basis matrix."""
        D = dual_basis(b).float_rows
        return self.coords() @ D.T


def sample_dual_gaussian_coords(b: Basis, rng: np.random.Generator, size: int) -> DualSamples:
    """Draw x with density exp(-pi |x|^2) and reduce modulo P(L*).

    The normal draw is float64, truncated to 60 fractional bits; the reduction
    c = B^T x mod 1 is then done exactly in integers.
    """
    n = b.n
    sd = 1.0 / math.sqrt(2 * math.pi)
    xs = np.floor(rng.normal(0.0, sd, (size, n)) * 2.0**SAMPLE_FRAC_BITS)
    x_int = np.vectorize(int, otypes=[object])(xs)
    Bint = np.array(b.integer_columns, dtype=object).T  # rows x columns, entries int
    den = b.denominator << SAMPLE_FRAC_BITS
    num = (x_int @ Bint) % den
    return DualSamples(num, den)


def sample_dual_gaussian(b: Basis, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Samples of D_{L*} on P(L*), as float vectors (one row per sample)."""
    s = sample_dual_gaussian_coords(b, rng, 1 if size is None else size)
    out = s.vectors(b)
    return out[0] if size is None else out


def t_dual_density(b: Basis, v, x) -> np.ndarray | float:
    """T_{L*,v}(x) = d(L)/|v| * sum_k exp(-pi ((k + <v,x>)/|v|)^2) for x in P(L*)."""
    if not b.contains(v) or not any(Fraction(c) != 0 for c in v):
        raise DomainError("v must be a nonzero lattice vector")
    vf = np.array([float(c) for c in v])
    vlen = float(np.linalg.norm(vf))
    xs = np.atleast_2d(np.asarray(x, dtype=float))
    phase = xs @ vf
    kc = math.ceil(vlen * math.sqrt(64 * math.log(2) / math.pi)) + 2
    base = np.floor(-phase)
    ks = np.arange(-kc, kc + 2)
    t = (base[:, None] + ks[None, :] + phase[:, None]) / vlen
    out = float(b.volume) / vlen * np.exp(-math.pi * t * t).sum(axis=1)
    return float(out[0]) if np.ndim(x) == 1 else out


# --------------------------------------------------------------------------
# Basis file format: first line n, then one column vector per line as "p/q" tokens

def basis_text(b: Basis) -> str:
    lines = [str(b.n)]
    for c in b.columns:
        lines.append(" ".join(f"{x.numerator}/{x.denominator}" for x in c))
    return "\n".join(lines) + "\n"


def parse_basis(text: str) -> Basis:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    try:
        n = int(lines[0])
        cols = [[Fraction(tok) for tok in ln.split()] for ln in lines[1:]]
    except (ValueError, IndexError, ZeroDivisionError) as exc:
        raise DomainError(f"malformed basis file: {exc}") from exc
    if len(cols) != n or any(len(c) != n for c in cols):
        raise DomainError("basis file shape does not match its declared dimension")
    return Basis(tuple(tuple(c) for c in cols))


def save_basis(b: Basis, path):
    with open(path, "w") as fh:
        fh.write(basis_text(b))


def load_basis(path) -> Basis:
    with open(path) as fh:
        return parse_basis(fh.read())
