"""Executable distinguishers, security games and lattice-distribution checks.

Every game takes an explicit ``numpy.random.Generator`` and returns a
``GameResult`` whose ``stats`` dict is the game transcript; equal seeds give
equal transcripts.

Adversaries come in two kinds. Honest ones only see what the game hands them.
Clairvoyant ones (class names start with ``Clairvoyant``) additionally get a
hint from the harness carrying hidden state. They exist only to exercise the
plumbing end to end and never influence an honest run.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import chisquare

from .distributions import TD, DensitySpec, Q, T, Uniform, distance_to_density, parse_spec
from .errors import CollisionNotFound, DomainError, OracleExhausted, ParameterError
from .hashing import HashKey, staged_collision, verify_collision
from .lattice import Basis, sample_dual_gaussian_coords, shortest_vector_enum
from .numerics import random_below
from .pke import PKEParams, PublicKey, get_profile

PLANT_ATTEMPTS = 16


# --------------------------------------------------------------------------
# Planted unique-SVP instances


@dataclass(frozen=True)
class PlantedUniqueLattice:
    basis: Basis
    tau: tuple  # planted shortest vector
    lam: Fraction  # its length (exact when lambdaTarget is rational)
    ratio: float  # enumerated lambda_2 / lambda_1
    coeffs: tuple  # tau in terms of basis columns

    @property
    def n(self) -> int:
        return self.basis.n


def random_unimodular(n: int, rng: np.random.Generator, steps: int | None = None, spread: int = 2) -> list[list[int]]:
    """Columns of a random unimodular matrix: a product of elementary column additions."""
    U = [[int(i == j) for i in range(n)] for j in range(n)]
    if n < 2:
        return U
    for _ in range(steps if steps is not None else 3 * n):
        a, c = (int(v) for v in rng.choice(n, 2, replace=False))
        k = int(rng.integers(-spread, spread + 1))
        U[a] = [x + k * y for x, y in zip(U[a], U[c])]
    return U


def plant_unique_lattice(n: int, lambda_target, ratio_target, rng: np.random.Generator, mix: bool = True) -> PlantedUniqueLattice:
    """Lattice with a planted shortest vector tau = lambda e_1 and lambda_2 >= ratio * lambda.

    The basis is lambda e_1 together with columns whose lower n-1 coordinates
    form a diagonal with entries >= ratio * lambda; any vector with a nonzero
    coefficient on those columns is at least that long. A random unimodular
    mix then hides the structure, and enumeration confirms the planted data.
    """
    if not 1 <= n <= 6:
        raise DomainError("planting supports 1 <= n <= 6")
    lam = Fraction(lambda_target).limit_denominator(10**9) if isinstance(lambda_target, float) else Fraction(lambda_target)
    ratio = Fraction(ratio_target).limit_denominator(10**6) if isinstance(ratio_target, float) else Fraction(ratio_target)
    if lam <= 0 or ratio < 1:
        raise DomainError("need lambda > 0 and ratio >= 1")
    for _ in range(PLANT_ATTEMPTS):
        cols = [[Fraction(0)] * n for _ in range(n)]
        cols[0][0] = lam
        for j in range(1, n):
            cols[j][j] = ratio * lam * (1 + Fraction(int(rng.integers(0, 9)), 32))
            cols[j][0] = lam * Fraction(int(rng.integers(0, 64)), 64)
        base = Basis.from_columns(cols)
        U = random_unimodular(n, rng) if mix else [[int(i == j) for i in range(n)] for j in range(n)]
        basis = base.transform(U)
        tau = tuple([lam] + [Fraction(0)] * (n - 1))
        try:
            res = shortest_vector_enum(basis)
        except Exception:
            continue
        if res.ties > 1 or res.length2 != lam * lam:
            continue
        if n > 1 and not (res.ratio_is_lower_bound or res.ratio >= float(ratio) * (1 - 1e-12)):
            continue
        if tuple(res.vector) not in (tau, tuple(-x for x in tau)):
            continue
        return PlantedUniqueLattice(basis, tau, lam, res.ratio, tuple(basis.integer_coords(tau)))
    raise ParameterError(f"could not plant a unique lattice in {PLANT_ATTEMPTS} attempts")


# --------------------------------------------------------------------------
# Oracles and results


class UnknownDistributionOracle:
    """Sample source on [0,1) whose spec is hidden from honest adversaries."""

    def __init__(self, spec: DensitySpec, budget: int | None = None):
        self._spec = spec
        self.budget = budget
        self.used = 0

    @property
    def hidden(self) -> DensitySpec:
        """For scoring and clairvoyant hints only."""
        return self._spec

    @property
    def tag(self) -> str:
        return self._spec.text()

    def draw(self, rng: np.random.Generator, k: int) -> np.ndarray:
        if self.budget is not None and self.used + k > self.budget:
            raise OracleExhausted(f"oracle budget {self.budget} exhausted")
        self.used += k
        return np.asarray(self._spec.draw(rng, k), dtype=float)


def in_window(spec: DensitySpec, n: int, g: float, h_max: float) -> bool:
    """Uniform, or T(h, beta) with integer h <= h_max and beta in [n/g^2, 4n/g^2)."""
    if isinstance(spec, Uniform):
        return True
    if isinstance(spec, T):
        return float(spec.h).is_integer() and spec.h <= h_max and n / g**2 <= spec.beta < 4 * n / g**2
    return False


@dataclass
class GameResult:
    decision: bool  # True = accept
    stats: dict = field(default_factory=dict)

    def row(self, seed: int, tag: str) -> dict:
        out = {"seed": seed, "hidden": tag, "decision": "accept" if self.decision else "reject"}
        out.update(self.stats)
        return out


# --------------------------------------------------------------------------
# Public-key game


@dataclass
class PKEHint:
    """Clairvoyant side information: the effective private key of the derived instance."""

    h_eff: Fraction | None
    event_X: bool | None


class ClairvoyantPKEAdversary:
    """Decrypts with the effective key delta*h and accepts iff the result is 0.

    Under a uniform oracle there is no hidden key; it then decrypts with the
    guess delta*h_tilde, which carries no information.
    """

    clairvoyant = True

    def __init__(self):
        self.h_eff = None

    def prepare(self, hint: PKEHint, fallback: Fraction):
        self.h_eff = hint.h_eff if hint.h_eff is not None else fallback

    def __call__(self, pk: PublicKey, w: int) -> bool:
        q = self.h_eff * w / pk.N
        return abs(q - round(q)) < Fraction(1, 4)


class AlwaysRejectPKEAdversary:
    def __call__(self, pk: PublicKey, w: int) -> bool:
        return False


@dataclass
class PKEGameConfig:
    threshold: float = 0.25  # the gap 1/(4 n^c) with the adversary constant c supplied
    trials: int = 200  # adversary calls per estimate
    force_event: bool = False  # clairvoyant harness: condition (h_t, delta, s) on event X


def _h_tilde_choices(N: int) -> list[int]:
    top = math.isqrt(N)
    out, v = [], 1
    while v <= top:
        out.append(v)
        v *= 2
    return out


def _event_X(h: int, beta: float, ht: int, delta: Fraction, s: Fraction, params: PKEParams) -> bool:
    N, m = params.N, params.m
    g2 = Fraction(params.gamma) ** 2
    dh = delta * h
    return (
        h <= ht < 2 * h
        and N <= dh * dh < 4 * N
        and abs(dh - round(dh)) * 16 * m < 1
        and Fraction(4) / g2 <= Fraction(beta) + dh * dh * s / N < Fraction(8) / g2
    )


def _plausible_X(h: int, deltas: np.ndarray, m: int) -> np.ndarray:
    """Float pre-filter for the frc(delta h) condition. It only rejects with a wide
    margin, so the exact test in _event_X still decides every borderline case."""
    dh = deltas * h
    return np.abs(dh - np.round(dh)) * 16 * m <= 1 + 1e-3


def _draw_game_params(params: PKEParams, rng, hidden: DensitySpec, force: bool):
    """(h_t, delta, s, X, draws). With ``force`` and a wavy hidden spec the triple is
    drawn from its prior conditioned on X: h_t is redrawn until h <= h_t < 2h (a
    single admissible value), then (delta, s) are redrawn jointly until X holds."""
    N = params.N
    root = math.isqrt(N)
    g2 = params.gamma**2
    choices = _h_tilde_choices(N)
    wavy = isinstance(hidden, T)
    h = int(hidden.h) if wavy else None
    ht = choices[int(rng.integers(0, len(choices)))]
    if force and wavy:
        if not any(h <= c < 2 * h for c in choices):
            raise ParameterError("event X impossible: hidden h outside [1, sqrt N]")
        while not h <= ht < 2 * h:
            ht = choices[int(rng.integers(0, len(choices)))]
    lo, hi = root / ht, 4 * root / ht
    if not (force and wavy):
        delta = Fraction(float(rng.uniform(lo, hi)))
        s = Fraction(float(rng.uniform(0.0, 7 / g2)))
        x = _event_X(h, hidden.beta, ht, delta, s, params) if wavy else None
        return ht, delta, s, x, 1
    # i.i.d. prior draws in batches; the first one satisfying X is returned
    tries = 0
    while tries < 10**7:
        deltas = rng.uniform(lo, hi, 1024)
        ss = rng.uniform(0.0, 7 / g2, 1024)
        keep = _plausible_X(h, deltas, params.m)
        for k in range(1024):
            if not keep[k]:
                continue
            delta, s = Fraction(float(deltas[k])), Fraction(float(ss[k]))
            if _event_X(h, hidden.beta, ht, delta, s, params):
                return ht, delta, s, True, tries + k + 1
        tries += 1024
    raise ParameterError("event X never occurred; is the oracle in the window?")


def _derived_sample(oracle: UnknownDistributionOracle, rng, delta: Fraction, noise_beta: float, N: int) -> int:
    """One a = floor(N r') with r' from C_delta(R + Q_{noise_beta} mod 1), exact after the float draws."""
    top = math.ceil(delta)
    sd = math.sqrt(noise_beta / (2 * math.pi))
    for _ in range(10**6):
        r = float(oracle.draw(rng, 1)[0])
        y = float(np.mod(r + rng.normal(0.0, sd), 1.0)) if sd > 0 else r
        x = int(rng.integers(0, top))
        z = (x + Fraction(y)) / delta
        if z < 1:
            return math.floor(N * z)
    raise OracleExhausted("compression kept rejecting")


def pke_security_game(adversary, oracle: UnknownDistributionOracle, params: PKEParams, rng: np.random.Generator, config: PKEGameConfig | None = None) -> GameResult:
    """Distinguisher between U and wavy oracles built from a PKE adversary.

    It picks h_t in {1, 2, 4, ..., sqrt N}, delta in [sqrt N/h_t, 4 sqrt N/h_t)
    and s in [0, 7/gamma^2), makes a public key from m samples of
    R' = C_delta(R + Q_{delta^2 s/N}), and accepts iff the adversary's
    acceptance on encryptions of 0 and on uniform ciphertexts differ by more
    than the threshold.
    """
    cfg = config or PKEGameConfig()
    N, m = params.N, params.m
    ht, delta, s, x_event, tries = _draw_game_params(params, rng, oracle.hidden, cfg.force_event)
    noise = float(delta * delta * s / N)
    a = tuple(_derived_sample(oracle, rng, delta, noise, N) for _ in range(m))
    i0 = int(rng.integers(0, m))
    pk = PublicKey(N, a, i0)
    if getattr(adversary, "clairvoyant", False):
        hidden = oracle.hidden
        h_eff = delta * int(hidden.h) if isinstance(hidden, T) else None
        adversary.prepare(PKEHint(h_eff, x_event), fallback=delta * ht)
    arr = np.array(a, dtype=object)
    subsets = rng.integers(0, 2, (cfg.trials, m)).astype(object)
    enc0 = [int(w) % N for w in subsets @ arr]
    hits0 = sum(bool(adversary(pk, w)) for w in enc0)
    hitsu = 0
    for _ in range(cfg.trials):
        hitsu += bool(adversary(pk, random_below(rng, N)))
    p0, pu = hits0 / cfg.trials, hitsu / cfg.trials
    gap = abs(p0 - pu)
    return GameResult(
        gap > cfg.threshold,
        {"h_tilde": ht, "delta": float(delta), "s": float(s), "event_X": x_event, "draws": tries, "p0": p0, "pu": pu, "gap": gap},
    )


def event_X_keys(params: PKEParams, h: int, beta: float, count: int, rng: np.random.Generator) -> list[tuple[float, float]]:
    """(delta h, beta + (delta h)^2 s / N) for game parameters conditioned on X."""
    hidden = T(h, beta)
    out = []
    for _ in range(count):
        ht, delta, s, _, _ = _draw_game_params(params, rng, hidden, True)
        dh = delta * h
        out.append((float(dh), float(Fraction(beta) + dh * dh * s / params.N)))
    return out


# --------------------------------------------------------------------------
# Hash game


class StagedCollisionFinder:
    """Honest finder: short-prefix then full meet-in-the-middle search."""

    def __call__(self, key: HashKey):
        try:
            return staged_collision(key)
        except CollisionNotFound:
            return None


class AlwaysFailFinder:
    def __call__(self, key: HashKey):
        return None


@dataclass
class HashGameConfig:
    N: int = 2**16
    m: int = 20
    n: int = 16  # calls to the routine per grid value
    c_a: float = 1.0  # finder success >= n^-c_a, so n^(c_a+1) attempts per call
    grid_ratio: float = 1 + 1 / 64
    grid_max: float | None = None  # defaults to N

    def grid(self) -> list[float]:
        top = self.grid_max or self.N
        count = int(math.floor(math.log(top) / math.log(self.grid_ratio))) + 1
        return [self.grid_ratio**i for i in range(count)]

    @property
    def attempts(self) -> int:
        return max(1, math.ceil(self.n ** (self.c_a + 1)))


def hash_routine_call(finder, oracle: UnknownDistributionOracle, ht: float, cfg: HashGameConfig, rng: np.random.Generator) -> tuple[bool, int]:
    """One call of the routine for a grid value h_t; returns (accept, finder attempts)."""
    for attempt in range(1, cfg.attempts + 1):
        x = oracle.draw(rng, cfg.m)
        y = rng.random(cfg.m) / ht
        z = np.mod(x - y, 1.0)
        a = tuple(int(v) for v in np.minimum(np.floor(cfg.N * z), cfg.N - 1))
        key = HashKey(cfg.N, a)
        b = finder(key)
        if b is None:
            continue
        if not verify_collision(key, b):
            raise DomainError("collision finder returned an invalid witness")
        t = float(np.dot(np.array(b, dtype=float), y) * ht)
        return abs(t - round(t)) < 0.25, attempt
    return True, cfg.attempts


def hash_distinguisher_game(finder, oracle: UnknownDistributionOracle, rng: np.random.Generator, config: HashGameConfig | None = None) -> GameResult:
    """Sweep h_t over the geometric grid; accept iff some h_t has all n calls accept."""
    cfg = config or HashGameConfig()
    calls = 0
    failures = 0
    for idx, ht in enumerate(cfg.grid()):
        for _ in range(cfg.n):
            ok, attempts = hash_routine_call(finder, oracle, ht, cfg, rng)
            calls += 1
            failures += attempts == cfg.attempts and ok
            if not ok:
                break
        else:
            return GameResult(True, {"h_tilde": ht, "grid_index": idx, "calls": calls, "budget_runs": failures})
    return GameResult(False, {"h_tilde": "", "grid_index": "", "calls": calls, "budget_runs": failures})


# --------------------------------------------------------------------------
# Dihedral game


class MaxLikelihoodZkSolver:
    """Honest solver: the k in [1, kmax] maximising sum log cos^2(pi k z / N).

    k = 0 is excluded since it makes every sample equally likely.
    """

    def __init__(self, N: int, samples: int = 64, kmax: int | None = None):
        self.N = N
        self.samples = samples
        self.kmax = kmax if kmax is not None else N // 2

    def __call__(self, z: np.ndarray) -> int:
        ks = np.arange(1, self.kmax + 1)[:, None]
        c = np.cos(np.pi * ks * (np.asarray(z, dtype=float)[None, :] + 0.5) / self.N) ** 2
        ll = np.log(c + 1e-300).sum(axis=1)
        return int(np.argmax(ll)) + 1


class ClairvoyantZkSolver:
    clairvoyant = True

    def __init__(self, samples: int = 1):
        self.samples = samples
        self.k = 0

    def prepare(self, hidden: DensitySpec):
        self.k = int(hidden.h) if isinstance(hidden, (TD, T)) else 1

    def __call__(self, z) -> int:
        return self.k


class ZeroSolver:
    samples = 1

    def __call__(self, z) -> int:
        return 0


def dihedral_reduction_game(solver, oracle: UnknownDistributionOracle, N: int, rng: np.random.Generator) -> GameResult:
    """Feed floor(N r) samples to the solver, then accept iff frc(r k) < 1/4 for a fresh r."""
    if getattr(solver, "clairvoyant", False):
        solver.prepare(oracle.hidden)
    z = np.floor(oracle.draw(rng, solver.samples) * N).astype(np.int64)
    k = int(solver(z))
    r = float(oracle.draw(rng, 1)[0])
    t = r * k
    return GameResult(bool(abs(t - round(t)) < 0.25), {"k": k})


# --------------------------------------------------------------------------
# General periodic distinguisher


class ClairvoyantPeriodicDetector:
    """Knows h; accepts iff the mean of D(h r mod 1) exceeds the midpoint of its U and T^D_h means."""

    clairvoyant = True

    def __init__(self, shape: str = "cos2", length: int = 64):
        self.d = TD(1, shape)
        self.length = length
        self.h = 1
        xs = (np.arange(4096) + 0.5) / 4096
        base = self.d.base_pdf(xs)
        self.cut = 0.5 * (1.0 + float((base * base).mean()))

    def prepare(self, hidden: DensitySpec):
        self.h = int(hidden.h) if isinstance(hidden, (T, TD)) else 1

    def __call__(self, seq: np.ndarray) -> bool:
        return float(self.d.base_pdf(np.mod(self.h * seq, 1.0)).mean()) > self.cut


@dataclass
class PeriodicGameConfig:
    grid_ratio: float = 1 + 1 / 64
    h_max: float = 2**10
    sequences: int = 100  # sequences per acceptance estimate
    threshold: float = 0.25  # 1/(2 n^c_d)


def general_periodic_distinguisher(adversary, oracle: UnknownDistributionOracle, shape: str, rng: np.random.Generator, config: PeriodicGameConfig | None = None) -> GameResult:
    """Turn a U-versus-T^D_h distinguisher into a U-versus-wavy one via R' = R + D/h_t mod 1."""
    cfg = config or PeriodicGameConfig()
    d = TD(1, shape)
    count = int(math.floor(math.log(cfg.h_max) / math.log(cfg.grid_ratio))) + 1
    ht = cfg.grid_ratio ** int(rng.integers(0, count))
    if getattr(adversary, "clairvoyant", False):
        adversary.prepare(oracle.hidden)
    length = adversary.length
    hits = 0
    for _ in range(cfg.sequences):
        seq = np.mod(oracle.draw(rng, length) + d.draw_base(rng, length) / ht, 1.0)
        hits += bool(adversary(seq))
    hits_u = sum(bool(adversary(rng.random(length))) for _ in range(cfg.sequences))
    est, pu = hits / cfg.sequences, hits_u / cfg.sequences
    return GameResult(abs(est - pu) > cfg.threshold, {"h_tilde": ht, "estimate": est, "pu": pu})


# --------------------------------------------------------------------------
# Lattice distributions


@dataclass
class LatticeSuiteReport:
    mode: str  # "uniform" or "wavy"
    distance: float
    p_value: float | None
    samples: int
    u: tuple | None = None


def lattice_distribution_suite(lattice, samples: int, rng: np.random.Generator, mode: str = "auto", bins: int = 64, cells: int = 4) -> LatticeSuiteReport:
    """Sample D_{L*} and compare with U_{L*} or, along the short vector u, with the wavy marginal.

    For x in P(L*) with dual coordinates c and u = B a, <u, x> = a . c, so the
    phase frc-histogram is computed exactly; its reference density is the
    marginal of T_{L*,u}, which is Q_{|u|^2}.
    """
    basis = lattice.basis if isinstance(lattice, PlantedUniqueLattice) else lattice
    if basis.n > 4:
        raise DomainError("the suite supports n <= 4")
    res = shortest_vector_enum(basis, with_ratio=False)
    if mode == "auto":
        mode = "uniform" if res.length2 >= basis.n else "wavy"
    s = sample_dual_gaussian_coords(basis, rng, samples)
    if mode == "uniform":
        idx = np.zeros(samples, dtype=np.int64)
        for j in range(basis.n):
            col = np.array([int(v * cells // s.den) for v in s.num[:, j]], dtype=np.int64)
            idx = idx * cells + col
        total = cells**basis.n
        counts = np.bincount(idx, minlength=total)
        dist = 0.5 * float(np.abs(counts / samples - 1.0 / total).sum())
        pval = float(chisquare(counts).pvalue)
        return LatticeSuiteReport("uniform", dist, pval, samples)
    if mode != "wavy":
        raise DomainError(f"unknown mode {mode!r}")
    a = [int(v) for v in res.coeffs]
    den = s.den
    phase = np.array([(sum(ai * int(ci) for ai, ci in zip(a, row)) % den) / den for row in s.num])
    dist = distance_to_density(phase, Q(float(res.length2)), bins)
    return LatticeSuiteReport("wavy", dist, None, samples, tuple(res.vector))


# --------------------------------------------------------------------------
# Configs and reports


CONFIG_DEFAULTS = {
    "game": "dihedral",
    "profile": "desk-small",
    "seed": 0,
    "games": 100,
    "oracle": "U",
    "adversary": "clairvoyant",
    "threshold": None,
    "trials": 200,
    "force_event": True,
    "N": None,
    "m": None,
    "n": None,
    "c_a": 1.0,
    "grid_ratio": 1 + 1 / 64,
    "grid_max": None,
    "h_max": 2**10,
    "shape": "cos2",
    "sequences": 100,
    "samples": 64,
}


def _convert(key: str, value: str):
    low = value.strip().lower()
    if low in ("none", ""):
        return None
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    if key in ("game", "profile", "oracle", "adversary", "shape"):
        return value.strip()
    try:
        if "^" in value:
            base, exp = value.split("^", 1)
            return int(base) ** int(exp)
        return int(value)
    except ValueError:
        pass
    try:
        return float(Fraction(value.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"bad value for {key}: {value!r}") from exc


def parse_config(text: str) -> dict:
    """key=value lines; '#' starts a comment. Unknown keys are an error."""
    cfg = dict(CONFIG_DEFAULTS)
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"expected key=value, got {line!r}")
        k, v = (p.strip() for p in line.split("=", 1))
        if k not in CONFIG_DEFAULTS:
            raise DomainError(f"unknown config key {k!r}")
        cfg[k] = _convert(k, v)
    return cfg


def _oracle_for(cfg: dict) -> UnknownDistributionOracle:
    return UnknownDistributionOracle(parse_spec(cfg["oracle"]))


def run_game(cfg: dict, seed: int) -> GameResult:
    """One game of the configured kind with a fresh oracle and adversary."""
    rng = np.random.default_rng(seed)
    oracle = _oracle_for(cfg)
    game = cfg["game"]
    honest = cfg["adversary"] != "clairvoyant"
    fail = cfg["adversary"] == "fail"
    if game == "pke":
        params = get_profile(cfg["profile"])
        pcfg = PKEGameConfig(cfg["threshold"] if cfg["threshold"] is not None else 0.25, int(cfg["trials"]), bool(cfg["force_event"]))
        adv = AlwaysRejectPKEAdversary() if fail else ClairvoyantPKEAdversary()
        if honest and not fail:
            raise DomainError("the pke game ships only clairvoyant and fail adversaries")
        return pke_security_game(adv, oracle, params, rng, pcfg)
    if game == "hash":
        hcfg = HashGameConfig()
        for k in ("N", "m", "n", "c_a", "grid_ratio", "grid_max"):
            if cfg[k] is not None:
                setattr(hcfg, k, cfg[k])
        finder = AlwaysFailFinder() if fail else StagedCollisionFinder()
        return hash_distinguisher_game(finder, oracle, rng, hcfg)
    if game == "dihedral":
        N = int(cfg["N"] or 1024)
        if fail:
            solver = ZeroSolver()
        elif honest:
            solver = MaxLikelihoodZkSolver(N, int(cfg["samples"]))
        else:
            solver = ClairvoyantZkSolver()
        return dihedral_reduction_game(solver, oracle, N, rng)
    if game == "periodic":
        pcfg = PeriodicGameConfig(cfg["grid_ratio"], cfg["h_max"], int(cfg["sequences"]), cfg["threshold"] if cfg["threshold"] is not None else 0.25)
        return general_periodic_distinguisher(ClairvoyantPeriodicDetector(cfg["shape"]), oracle, cfg["shape"], rng, pcfg)
    raise DomainError(f"unknown game {game!r}")


def run_experiment(cfg: dict, workers: int = 1) -> list[dict]:
    """Rows (one per game) for seeds seed, seed+1, ..., seed+games-1."""
    seeds = [int(cfg["seed"]) + i for i in range(int(cfg["games"]))]
    tag = parse_spec(cfg["oracle"]).text()
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(run_game, [cfg] * len(seeds), seeds))
    else:
        results = [run_game(cfg, s) for s in seeds]
    return [r.row(s, tag) for r, s in zip(results, seeds)]


def write_report_csv(rows: list[dict], fh):
    if not rows:
        return
    keys = list(rows[0])
    for r in rows[1:]:
        keys += [k for k in r if k not in keys]
    w = csv.DictWriter(fh, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)


def accept_rate(rows: list[dict]) -> float:
    return sum(r["decision"] == "accept" for r in rows) / len(rows) if rows else 0.0
