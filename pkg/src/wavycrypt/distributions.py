"""One-dimensional distributions on [0, 1): densities, samplers, distances.

Every density is a :class:`DensitySpec` subclass with a vectorised ``pdf`` and
a ``draw(rng, size)`` sampler. Samplers built from other samplers (compression,
addition mod 1) are plain :class:`Sampler` objects. Randomness always comes
from a caller-owned ``numpy.random.Generator``.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import DomainError, SamplerStall
from .numerics import DEFAULT_CONTEXT, PrecisionContext, hp_cos_pi

STALL_LIMIT = 10**6
TWO_PI = 2.0 * math.pi


def default_kcut(beta: float) -> int:
    """Truncation radius keeping the dropped theta tail below 2**-64."""
    return math.ceil(math.sqrt(64 * math.log(2) / math.pi * beta)) + 2


def periodized_gaussian(u, beta: float, kcut: int | None = None) -> np.ndarray:
    """Q_beta(u) for u in [0, 1): (1/sqrt(beta)) * sum_k exp(-pi (u-k)^2 / beta)."""
    u = np.asarray(u, dtype=float)
    kcut = default_kcut(beta) if kcut is None else kcut
    ks = np.arange(-kcut, kcut + 2, dtype=float)
    d = u[..., None] - ks
    return np.exp(-math.pi / beta * d * d).sum(axis=-1) / math.sqrt(beta)


def _midpoints(lo: float, hi: float, points: int) -> np.ndarray:
    return lo + (np.arange(points) + 0.5) * ((hi - lo) / points)


def _rejection(propose: Callable[[int], tuple[np.ndarray, np.ndarray]], size: int) -> np.ndarray:
    """Collect ``size`` accepted values from ``propose(n) -> (values, mask)``."""
    out = []
    have = 0
    proposed = 0
    while have < size:
        want = size - have
        batch = max(64, int(want * 2.2))
        vals, ok = propose(batch)
        proposed += batch
        acc = vals[ok]
        if acc.size:
            out.append(acc[:want])
            have += min(acc.size, want)
        elif have == 0 and proposed >= STALL_LIMIT:
            raise SamplerStall(f"no acceptance after {proposed} proposals")
    return np.concatenate(out) if out else np.empty(0)


class Sampler:
    """A source of values in [0, 1) driven by an explicit RNG."""

    def __init__(self, draw: Callable[[np.random.Generator, int], np.ndarray], label: str = "sampler"):
        self._draw = draw
        self.label = label

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self._draw(rng, size)

    def __repr__(self):
        return f"Sampler({self.label})"


class DensitySpec:
    """Base class for the known densities on [0, 1)."""

    tag = "?"

    def pdf(self, r) -> np.ndarray:
        raise NotImplementedError

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    def text(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Uniform(DensitySpec):
    tag = "U"

    def pdf(self, r):
        return np.ones_like(np.asarray(r, dtype=float))

    def draw(self, rng, size):
        return rng.random(size)

    def text(self):
        return "U"


@dataclass(frozen=True)
class Q(DensitySpec):
    """Normal of variance beta/(2 pi), reduced mod 1."""

    beta: float
    kcut: int | None = None
    tag = "Q"

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError("beta must be positive")

    def pdf(self, r):
        return periodized_gaussian(r, self.beta, self.kcut)

    def draw(self, rng, size):
        return np.mod(rng.normal(0.0, math.sqrt(self.beta / TWO_PI), size), 1.0)

    def text(self):
        return f"Q:{self.beta!r}"


@dataclass(frozen=True)
class T(DensitySpec):
    """The wavy density Q_beta(r h mod 1), renormalised for non-integer h."""

    h: float
    beta: float
    kcut: int | None = None
    ctx: PrecisionContext = field(default=DEFAULT_CONTEXT, compare=False)
    tag = "T"

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError("beta must be positive")
        if not self.h >= 1:
            raise DomainError("wavy densities need h >= 1")

    @property
    def integral_h(self) -> bool:
        return float(self.h).is_integer()

    @cached_property
    def normalizer(self) -> float:
        # int_0^1 Q(xh mod 1) dx = (floor(h) + int_0^{frac h} Q) / h
        h = float(self.h)
        whole = math.floor(h)
        rest = h - whole
        if rest == 0.0:
            return 1.0
        xs = _midpoints(0.0, rest, self.ctx.quadrature_points)
        partial = periodized_gaussian(xs, self.beta, self.kcut).sum() * rest / xs.size
        return (whole + partial) / h

    def pdf(self, r):
        r = np.asarray(r, dtype=float)
        return periodized_gaussian(np.mod(r * self.h, 1.0), self.beta, self.kcut) / self.normalizer

    def draw(self, rng, size):
        h = float(self.h)
        top = math.ceil(h)
        sd = math.sqrt(self.beta / TWO_PI)

        def propose(n):
            x = rng.integers(0, top, n)
            y = np.mod(rng.normal(0.0, sd, n), 1.0)
            z = (x + y) / h
            return z, z < 1.0

        return _rejection(propose, size)

    def text(self):
        return f"T:{self.h!r}:{self.beta!r}"


@dataclass(frozen=True)
class S(DensitySpec):
    """T_{h,beta}(a + r/ht) on [0,1), renormalised: one stretched peak-window."""

    ht: float
    h: int
    beta: float
    a: float
    ctx: PrecisionContext = field(default=DEFAULT_CONTEXT, compare=False)
    tag = "S"

    def __post_init__(self):
        if not self.beta > 0 or not self.ht > 0:
            raise DomainError("beta and h-tilde must be positive")
        if int(self.h) != self.h or self.h < 1:
            raise DomainError("h must be a positive integer")

    def _raw(self, r):
        x = self.a + np.asarray(r, dtype=float) / self.ht
        return periodized_gaussian(np.mod(x * self.h, 1.0), self.beta)

    @cached_property
    def normalizer(self) -> float:
        xs = _midpoints(0.0, 1.0, self.ctx.quadrature_points)
        return float(self._raw(xs).mean())

    def pdf(self, r):
        return self._raw(r) / self.normalizer

    def draw(self, rng, size):
        envelope = 1.0 / math.sqrt(self.beta) + 1.0

        def propose(n):
            r = rng.random(n)
            return r, rng.random(n) * envelope < self._raw(r)

        return _rejection(propose, size)

    def text(self):
        return f"S:{self.ht!r}:{self.h}:{self.beta!r}:{self.a!r}"


@dataclass(frozen=True)
class SPrime(DensitySpec):
    """Q_beta(a h + r mod 1)."""

    h: int
    beta: float
    a: float
    tag = "Sp"

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError("beta must be positive")

    def pdf(self, r):
        return periodized_gaussian(np.mod(self.a * self.h + np.asarray(r, dtype=float), 1.0), self.beta)

    def draw(self, rng, size):
        y = Q(self.beta).draw(rng, size)
        return np.mod(y - self.a * self.h, 1.0)

    def text(self):
        return f"Sp:{self.h}:{self.beta!r}:{self.a!r}"


PERIODIC_SHAPES = {
    # name -> (density on [0,1), sup bound)
    "cos2": (lambda r: 2.0 * np.cos(np.pi * r) ** 2, 2.0),
    "const": (lambda r: np.ones_like(r), 1.0),
}


@dataclass(frozen=True)
class TD(DensitySpec):
    """h periods of a smooth periodic density D: D(r h mod 1)."""

    h: int
    shape: str = "cos2"
    tag = "TD"

    def __post_init__(self):
        if int(self.h) != self.h or self.h < 1:
            raise DomainError("h must be a positive integer")
        if self.shape not in PERIODIC_SHAPES:
            raise DomainError(f"unknown periodic shape {self.shape!r}")

    def base_pdf(self, r):
        return PERIODIC_SHAPES[self.shape][0](np.asarray(r, dtype=float))

    def draw_base(self, rng, size):
        fn, bound = PERIODIC_SHAPES[self.shape]

        def propose(n):
            r = rng.random(n)
            return r, rng.random(n) * bound < fn(r)

        return _rejection(propose, size)

    def pdf(self, r):
        return self.base_pdf(np.mod(np.asarray(r, dtype=float) * self.h, 1.0))

    def draw(self, rng, size):
        x = rng.integers(0, int(self.h), size)
        return (x + self.draw_base(rng, size)) / self.h

    def text(self):
        return f"TD:{self.h}:{self.shape}"


@dataclass(frozen=True)
class Zk(DensitySpec):
    """Pr(Z = z) proportional to cos^2(pi k z / N), embedded in [0,1) as z/N."""

    k: int
    N: int
    ctx: PrecisionContext = field(default=DEFAULT_CONTEXT, compare=False)
    tag = "Zk"

    def __post_init__(self):
        if self.N < 1 or not 0 <= self.k < self.N:
            raise DomainError("need 0 <= k < N")

    @cached_property
    def weights(self) -> list[int]:
        """cos^2 weights scaled to integers at the context's fractional bits."""
        fb = self.ctx.frac_bits
        out = []
        for z in range(self.N):
            c = hp_cos_pi(Fraction(self.k * z, self.N), self.ctx)
            out.append((c * c).scaled_int(fb))
        return out

    @cached_property
    def cumulative(self) -> list[int]:
        acc, total = [], 0
        for w in self.weights:
            total += w
            acc.append(total)
        return acc

    def probabilities(self) -> list[Fraction]:
        total = self.cumulative[-1]
        return [Fraction(w, total) for w in self.weights]

    def pdf(self, r):
        total = self.cumulative[-1]
        probs = np.array([w / total for w in self.weights])
        idx = np.minimum((np.asarray(r, dtype=float) * self.N).astype(np.int64), self.N - 1)
        return probs[idx] * self.N

    def draw_index(self, rng, size) -> np.ndarray:
        total = self.cumulative[-1]
        nbits = total.bit_length()
        nbytes = (nbits + 7) // 8
        mask = (1 << nbits) - 1
        out = np.empty(size, dtype=np.int64)
        for i in range(size):
            while True:
                u = int.from_bytes(rng.bytes(nbytes), "little") & mask
                if u < total:
                    break
            out[i] = bisect.bisect_right(self.cumulative, u)
        return out

    def draw(self, rng, size):
        return self.draw_index(rng, size) / self.N

    def text(self):
        return f"Zk:{self.k}:{self.N}"


# --------------------------------------------------------------------------
# Module-level operations

def density_eval(spec: DensitySpec, r) -> np.ndarray | float:
    arr = np.asarray(r, dtype=float)
    if np.any((arr < 0) | (arr >= 1)):
        raise DomainError("density arguments must lie in [0, 1)")
    out = spec.pdf(arr)
    return float(out) if np.ndim(out) == 0 else out


def sample(spec, rng: np.random.Generator, size: int | None = None):
    """One value (size=None) or an array of values from a spec or sampler."""
    if size is None:
        return float(spec.draw(rng, 1)[0])
    return spec.draw(rng, size)


def compress(source, delta: float) -> Sampler:
    """Sampler for the compression C_delta of ``source`` (density X(delta r mod 1))."""
    if not delta >= 1:
        raise DomainError("compression factor must be >= 1")
    top = math.ceil(delta)

    def draw(rng, size):
        def propose(n):
            x = rng.integers(0, top, n)
            z = (x + source.draw(rng, n)) / delta
            return z, z < 1.0

        return _rejection(propose, size)

    return Sampler(draw, f"C[{delta}]({getattr(source, 'label', source)})")


def convolve_mod1(a, b) -> Sampler:
    """Sampler emitting (A + B) mod 1 for independent draws from ``a`` and ``b``."""

    def draw(rng, size):
        return np.mod(a.draw(rng, size) + b.draw(rng, size), 1.0)

    return Sampler(draw, f"({getattr(a, 'label', a)})+({getattr(b, 'label', b)})")


def lattice_sum_sampler(h: int, beta: float) -> Sampler:
    """Uniform point of {0, 1/h, ..., (h-1)/h} plus normal(0, beta/(2 pi h^2)), mod 1."""
    if int(h) != h or h < 1:
        raise DomainError("h must be a positive integer")
    sd = math.sqrt(beta / TWO_PI) / h

    def draw(rng, size):
        return np.mod(rng.integers(0, h, size) / h + rng.normal(0.0, sd, size), 1.0)

    return Sampler(draw, f"grid({h})+N({beta})")


@dataclass(frozen=True)
class DistanceResult:
    value: float
    error: float

    def __float__(self):
        return self.value


def statistical_distance_exact(a: DensitySpec, b: DensitySpec, points: int = 2**16) -> DistanceResult:
    """Half the L1 distance of two densities by composite-midpoint quadrature.

    The error estimate is the change against the same rule at half the points.
    """
    def at(n):
        r = _midpoints(0.0, 1.0, n)
        return 0.5 * float(np.abs(a.pdf(r) - b.pdf(r)).mean())

    fine = at(points)
    coarse = at(max(points // 2, 1))
    return DistanceResult(fine, abs(fine - coarse))


@dataclass
class SampleBatch:
    values: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if np.any((self.values < 0) | (self.values >= 1)):
            raise DomainError("sample values must lie in [0, 1)")

    @property
    def count(self) -> int:
        return int(self.values.size)

    @classmethod
    def draw(cls, source, seed: int, count: int) -> SampleBatch:
        return cls(source.draw(np.random.default_rng(seed), count), seed)

    def save(self, path):
        with open(path, "w") as fh:
            for v in self.values:
                fh.write(f"{float(v)!r}\n")

    @classmethod
    def load(cls, path) -> SampleBatch:
        vals = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    try:
                        vals.append(float(line))
                    except ValueError as exc:
                        raise DomainError(f"bad sample line {line!r}") from exc
        return cls(np.array(vals))


def _values(batch) -> np.ndarray:
    return batch.values if isinstance(batch, SampleBatch) else np.asarray(batch, dtype=float)


def histogram(values, bins: int) -> np.ndarray:
    """Equal-width bin frequencies over [0, 1)."""
    counts, _ = np.histogram(values, bins=bins, range=(0.0, 1.0))
    return counts / max(len(values), 1)


def statistical_distance_estimate(a, b, bins: int) -> float:
    """Histogram estimate of the distance between two sample batches.

    Sampling noise biases the estimate upward by roughly
    ``0.4 * bins**0.5 / count**0.5`` for near-uniform data.
    """
    va, vb = _values(a), _values(b)
    if bins < 2:
        raise DomainError("need at least two bins")
    if va.size == 0 or vb.size == 0:
        raise DomainError("empty sample batch")
    return 0.5 * float(np.abs(histogram(va, bins) - histogram(vb, bins)).sum())


def bin_probabilities(spec: DensitySpec, bins: int, sub: int = 64) -> np.ndarray:
    """Mass of each equal-width bin under ``spec`` (midpoint rule inside bins)."""
    r = _midpoints(0.0, 1.0, bins * sub).reshape(bins, sub)
    mass = spec.pdf(r).mean(axis=1) / bins
    return mass / mass.sum()


def distance_to_density(batch, spec: DensitySpec, bins: int) -> float:
    """Histogram distance between a sample batch and a known density."""
    vals = _values(batch)
    if vals.size == 0:
        raise DomainError("empty sample batch")
    return 0.5 * float(np.abs(histogram(vals, bins) - bin_probabilities(spec, bins)).sum())


def write_density_csv(spec: DensitySpec, path, points: int = 1024):
    r = np.arange(points) / points
    dens = spec.pdf(r)
    with open(path, "w") as fh:
        fh.write("r,density\n")
        for x, y in zip(r, dens):
            fh.write(f"{x:.12f},{y:.12f}\n")


def parse_spec(text: str, ctx: PrecisionContext = DEFAULT_CONTEXT) -> DensitySpec:
    """Parse the compact grammar: U, Q:b, T:h:b, TD:h[:shape], Zk:k:N, S:ht:h:b:a, Sp:h:b:a."""
    parts = text.strip().split(":")
    tag, args = parts[0], parts[1:]
    try:
        if tag == "U" and not args:
            return Uniform()
        if tag == "Q" and len(args) == 1:
            return Q(float(args[0]))
        if tag == "T" and len(args) == 2:
            h = float(args[0])
            return T(int(h) if h.is_integer() else h, float(args[1]), ctx=ctx)
        if tag == "TD" and len(args) in (1, 2):
            return TD(int(args[0]), *(args[1:]))
        if tag == "Zk" and len(args) == 2:
            return Zk(int(args[0]), int(args[1]), ctx=ctx)
        if tag == "S" and len(args) == 4:
            return S(float(args[0]), int(args[1]), float(args[2]), float(args[3]), ctx=ctx)
        if tag == "Sp" and len(args) == 3:
            return SPrime(int(args[0]), float(args[1]), float(args[2]))
    except ValueError as exc:
        raise DomainError(f"bad distribution spec {text!r}: {exc}") from exc
    raise DomainError(f"bad distribution spec {text!r}")
