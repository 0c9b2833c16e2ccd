"""Public-key encryption of single bits from a hidden wavy distribution.

The private key is a real h in [sqrt(N), 2 sqrt(N)) close to an integer. The
public key is m values a_i = floor(N z_i) with z_i drawn from T_{h,beta}, so
every a_i sits near a multiple of d = N/h. A ciphertext is a random subset sum
of the a_i, shifted by floor(a_{i0}/2) for the bit 1. Decryption checks how
close w is to a multiple of d.

All key material is exact: h is dyadic with ``frac_bits`` fractional bits,
the floors are integer divisions, and decryption compares integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import binomtest

from .errors import DomainError, ParameterError
from .numerics import (
    DEFAULT_CONTEXT,
    DyadicReal,
    PrecisionContext,
    int_from_hex,
    int_to_hex,
    random_below,
    random_between,
)

MAX_REGENERATIONS = 64


@dataclass(frozen=True)
class PKEParams:
    N: int
    m: int
    gamma: float
    n: int = 0
    profile: str = "custom"
    strict: bool = True

    def __post_init__(self):
        if self.strict:
            self.validate()

    def validate(self):
        if self.m < 8:
            raise ParameterError("need m >= 8")
        if self.N < 2**16:
            raise ParameterError("need N >= 2^16")
        if self.gamma**2 / self.m < 64:
            raise ParameterError("need gamma^2 / m >= 64")
        if 256 * self.m * self.m >= self.N:
            raise ParameterError("need 16 m < sqrt(N)")

    @property
    def beta_range(self) -> tuple[float, float]:
        g2 = self.gamma**2
        return 4 / g2, 8 / g2


PROFILES = {
    "desk-small": PKEParams(N=2**32, m=24, gamma=64.0, n=4, profile="desk-small"),
    "desk": PKEParams(N=2**64, m=48, gamma=128.0, n=6, profile="desk"),
}


def get_profile(name: str) -> PKEParams:
    try:
        return PROFILES[name]
    except KeyError:
        raise DomainError(f"unknown profile {name!r}; choose from {sorted(PROFILES)}") from None


@dataclass(frozen=True)
class PrivateKey:
    h: DyadicReal
    N: int

    @property
    def d(self) -> Fraction:
        return Fraction(self.N) / self.h.to_fraction()

    def in_H(self, m: int) -> bool:
        """h in [sqrt N, 2 sqrt N) and frc(h) < 1/(16 m), checked exactly."""
        q = self.h.to_fraction()
        near = abs(q - round(q))
        return q * q >= self.N and q * q < 4 * self.N and near * 16 * m < 1

    def to_text(self) -> str:
        return f"pke-private v1\nh={self.h}\nN={int_to_hex(self.N)}\n"

    @classmethod
    def from_text(cls, text: str) -> PrivateKey:
        fields = _parse_fields(text, "pke-private v1")
        return cls(DyadicReal.parse(fields["h"]), int_from_hex(fields["N"]))


@dataclass(frozen=True)
class PublicKey:
    N: int
    a: tuple
    i0: int  # 0-based index into a

    @property
    def m(self) -> int:
        return len(self.a)

    def __post_init__(self):
        if not all(0 <= x < self.N for x in self.a):
            raise DomainError("public values must lie in [0, N)")
        if not 0 <= self.i0 < len(self.a):
            raise DomainError("i0 out of range")

    def to_text(self) -> str:
        lines = ["pke-public v1", f"N={int_to_hex(self.N)}", f"m={self.m}", f"i0={self.i0}"]
        lines += [f"a={int_to_hex(x)}" for x in self.a]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> PublicKey:
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines or lines[0] != "pke-public v1":
            raise DomainError("not a pke-public v1 file")
        head = dict(_split(ln) for ln in lines[1:4])
        m = int(head["m"])
        a = [int_from_hex(_split(ln)[1]) for ln in lines[4:]]
        if len(a) != m:
            raise DomainError(f"expected {m} public values, found {len(a)}")
        return cls(int_from_hex(head["N"]), tuple(a), int(head["i0"]))


def _split(line: str) -> tuple[str, str]:
    if "=" not in line:
        raise DomainError(f"expected key=value, got {line!r}")
    k, v = line.split("=", 1)
    return k.strip(), v.strip()


def _parse_fields(text: str, header: str) -> dict:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0] != header:
        raise DomainError(f"not a {header} file")
    return dict(_split(ln) for ln in lines[1:])


@dataclass
class KeygenTranscript:
    beta: float
    x: list
    y_scaled: list  # y_i * 2^frac_bits, integers
    frac_bits: int
    regenerations: int = 0

    def y(self, i: int) -> Fraction:
        return Fraction(self.y_scaled[i], 1 << self.frac_bits)


@dataclass
class KeyPair:
    sk: PrivateKey
    pk: PublicKey
    transcript: KeygenTranscript | None = None


def sample_h(params: PKEParams, rng: np.random.Generator, frac_bits: int) -> DyadicReal:
    """Uniform-ish h in H: integer part uniform, then an offset below 1/(16m)."""
    N, m = params.N, params.m
    lo = math.isqrt(N - 1) + 1  # ceil(sqrt N)
    hi = math.isqrt(4 * N)  # floor(2 sqrt N)
    one = 1 << frac_bits
    bound = (one - 1) // (16 * m)  # |offset| * 16 m < 1
    for _ in range(10**6):
        h_int = random_between(rng, lo, hi) * one + random_between(rng, -bound, bound + 1)
        if h_int * h_int >= N << (2 * frac_bits) and h_int * h_int < (4 * N) << (2 * frac_bits):
            return DyadicReal(h_int, -frac_bits)
    raise ParameterError("could not sample h")


def keygen(params: PKEParams, rng: np.random.Generator, ctx: PrecisionContext = DEFAULT_CONTEXT, transcript: bool = False) -> KeyPair:
    ctx.require_crypto()
    fb = ctx.frac_bits
    h = sample_h(params, rng, fb)
    h_int = h.scaled_int(fb)
    top = math.ceil(h)
    lo_b, hi_b = params.beta_range
    beta = float(rng.uniform(lo_b, hi_b))
    sd = math.sqrt(beta / (2 * math.pi))
    one = 1 << fb
    for attempt in range(MAX_REGENERATIONS):
        xs, ys = [], []
        while len(xs) < params.m:
            x = random_below(rng, top)
            y = float(np.mod(rng.normal(0.0, sd), 1.0))
            y_int = math.floor(y * 2.0**fb) if fb < 1000 else int(Fraction(y) * one)
            if x * one + y_int < h_int:  # (x + y) / h < 1
                xs.append(x)
                ys.append(y_int)
        # x_i + y_i must round to an odd integer: a y_i just below 1 is a small
        # negative offset, and an odd x_i with it lands next to an even multiple
        odd = [i for i, (x, y) in enumerate(zip(xs, ys)) if (x + (2 * y >= one)) % 2 == 1]
        if odd:
            break
    else:
        raise ParameterError(f"no odd round(x_i + y_i) after {MAX_REGENERATIONS} regenerations")
    # a_i = floor(N (x_i + y_i) / h) over scaled integers
    a = tuple(params.N * (x * one + y) // h_int for x, y in zip(xs, ys))
    pair = KeyPair(PrivateKey(h, params.N), PublicKey(params.N, a, odd[0]))
    if transcript:
        pair.transcript = KeygenTranscript(beta, xs, ys, fb, attempt)
    return pair


def encrypt(pk: PublicKey, bit: int, rng: np.random.Generator, subset=None) -> int:
    """Random subset sum of the public values, plus floor(a_{i0}/2) for bit 1."""
    if bit not in (0, 1):
        raise DomainError("bit must be 0 or 1")
    if subset is None:
        subset = rng.integers(0, 2, pk.m)
    w = sum(a for a, s in zip(pk.a, subset) if s)
    if bit:
        w += pk.a[pk.i0] // 2
    return w % pk.N


def phase_of(sk: PrivateKey, w: int, ctx: PrecisionContext | None = None) -> Fraction:
    """frc(w / d) = frc(w h / N), exact; with ``ctx`` the value w h / N is first floored to its grid."""
    q = sk.h.to_fraction() * w / sk.N
    if ctx is not None:
        q = DyadicReal.from_fraction(q, ctx.frac_bits).to_fraction()
    return abs(q - round(q))


def decrypt(sk: PrivateKey, w: int, ctx: PrecisionContext | None = None) -> int:
    if not 0 <= w < sk.N:
        raise DomainError("ciphertext out of range")
    return 0 if phase_of(sk, w, ctx) < Fraction(1, 4) else 1


def ciphertext_text(w: int) -> str:
    return int_to_hex(w) + "\n"


def parse_ciphertext(text: str) -> int:
    return int_from_hex(text.strip())


@dataclass
class BitStats:
    trials: int = 0
    errors: int = 0

    @property
    def rate(self) -> float:
        return self.errors / self.trials if self.trials else 0.0

    def wilson(self, level: float = 0.95) -> tuple[float, float]:
        if self.trials == 0:
            return (0.0, 1.0)
        ci = binomtest(self.errors, self.trials).proportion_ci(confidence_level=level, method="wilson")
        return (float(ci.low), float(ci.high))


@dataclass
class ErrorReport:
    per_bit: dict = field(default_factory=lambda: {0: BitStats(), 1: BitStats()})
    keys: int = 0

    @property
    def total(self) -> BitStats:
        return BitStats(sum(s.trials for s in self.per_bit.values()), sum(s.errors for s in self.per_bit.values()))

    def summary(self) -> str:
        parts = []
        for bit, s in sorted(self.per_bit.items()):
            lo, hi = s.wilson()
            parts.append(f"bit{bit}: {s.errors}/{s.trials} ({s.rate:.4%}, 95% CI {lo:.4%}-{hi:.4%})")
        t = self.total
        lo, hi = t.wilson()
        parts.append(f"all: {t.errors}/{t.trials} ({t.rate:.4%}, 95% CI {lo:.4%}-{hi:.4%})")
        return "; ".join(parts)


def error_rate_experiment(params: PKEParams, keys: int, encryptions_per_key: int, rng: np.random.Generator, ctx: PrecisionContext = DEFAULT_CONTEXT) -> ErrorReport:
    """Decryption error rates over fresh keys, ``encryptions_per_key`` per bit per key."""
    rep = ErrorReport(keys=keys)
    if encryptions_per_key <= 0:
        return rep
    for _ in range(keys):
        kp = keygen(params, rng, ctx)
        a = np.array(kp.pk.a, dtype=object)
        for bit in (0, 1):
            subsets = rng.integers(0, 2, (encryptions_per_key, kp.pk.m))
            sums = subsets.astype(object) @ a
            shift = kp.pk.a[kp.pk.i0] // 2 if bit else 0
            stats = rep.per_bit[bit]
            for w in sums:
                stats.trials += 1
                stats.errors += decrypt(kp.sk, (int(w) + shift) % params.N) != bit
    return rep
