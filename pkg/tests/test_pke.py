import math
from fractions import Fraction

import numpy as np
import pytest

from wavycrypt.errors import DomainError, ParameterError
from wavycrypt.numerics import DyadicReal, PrecisionContext
from wavycrypt.pke import (
    PKEParams,
    PrivateKey,
    PublicKey,
    ciphertext_text,
    decrypt,
    encrypt,
    error_rate_experiment,
    get_profile,
    keygen,
    parse_ciphertext,
    phase_of,
)

SMALL = get_profile("desk-small")
DESK = get_profile("desk")


def frc(q: Fraction) -> Fraction:
    return abs(q - round(q))


@pytest.fixture(scope="module")
def small_keys():
    rng = np.random.default_rng(100)
    return [keygen(SMALL, rng, transcript=True) for _ in range(20)]


def test_profiles_valid():
    assert DESK.N == 2**64 and DESK.m == 48 and DESK.gamma == 128
    with pytest.raises(DomainError):
        get_profile("huge")


@pytest.mark.parametrize(
    "kw",
    [dict(N=2**32, m=4, gamma=64.0), dict(N=2**12, m=8, gamma=64.0), dict(N=2**32, m=24, gamma=8.0), dict(N=2**16, m=16, gamma=64.0)],
)
def test_params_invalid(kw):
    with pytest.raises(ParameterError):
        PKEParams(**kw)


def test_key_invariants(small_keys):
    for kp in small_keys:
        assert kp.sk.in_H(SMALL.m)
        assert all(0 <= a < SMALL.N for a in kp.pk.a)
        t = kp.transcript
        lo, hi = SMALL.beta_range
        assert lo <= t.beta < hi
        h = kp.sk.h.to_fraction()
        for i, a in enumerate(kp.pk.a):
            assert a == math.floor(SMALL.N * (t.x[i] + t.y(i)) / h)
        i0 = kp.pk.i0
        assert round(t.x[i0] + t.y(i0)) % 2 == 1


def test_public_values_near_multiples_of_d(small_keys):
    good = sum(all(frc(a / kp.sk.d) < Fraction(1, 8) for a in kp.pk.a) for kp in small_keys)
    assert good >= 19
    far = sum(frc((kp.pk.a[kp.pk.i0] // 2) / kp.sk.d) > Fraction(1, 4) for kp in small_keys)
    assert far >= 19


def test_encrypt_trivial_subsets(small_keys):
    pk = small_keys[0].pk
    empty = [0] * pk.m
    assert encrypt(pk, 0, None, subset=empty) == 0
    assert encrypt(pk, 1, None, subset=empty) == pk.a[pk.i0] // 2
    with pytest.raises(DomainError):
        encrypt(pk, 2, np.random.default_rng(0))


def test_encrypt_deterministic(small_keys):
    pk = small_keys[0].pk
    a = [encrypt(pk, 1, np.random.default_rng(5)) for _ in range(2)]
    assert a[0] == a[1]


def test_homomorphic_shift(small_keys):
    pk = small_keys[1].pk
    rng = np.random.default_rng(6)
    for _ in range(50):
        S = rng.integers(0, 2, pk.m)
        assert encrypt(pk, 1, None, S) == (encrypt(pk, 0, None, S) + pk.a[pk.i0] // 2) % pk.N


def test_decrypt_trivial(small_keys):
    sk = small_keys[0].sk
    assert decrypt(sk, 0) == 0
    assert decrypt(sk, round(sk.d / 2)) == 1
    with pytest.raises(DomainError):
        decrypt(sk, sk.N)


def test_roundtrip_small(small_keys):
    rng = np.random.default_rng(7)
    errors = 0
    for kp in small_keys:
        for _ in range(50):
            bit = int(rng.integers(0, 2))
            errors += decrypt(kp.sk, encrypt(kp.pk, bit, rng)) != bit
    assert errors <= 5


def test_precision_stability(small_keys):
    rng = np.random.default_rng(8)
    lo, hi = PrecisionContext(frac_bits=128), PrecisionContext(frac_bits=256)
    for kp in small_keys[:5]:
        for _ in range(40):
            w = encrypt(kp.pk, int(rng.integers(0, 2)), rng)
            assert decrypt(kp.sk, w, lo) == decrypt(kp.sk, w, hi) == decrypt(kp.sk, w)


def test_encryption_of_zero_closeness(small_keys):
    rng = np.random.default_rng(9)
    for kp in small_keys[:5]:
        t = kp.transcript
        for _ in range(30):
            S = rng.integers(0, 2, kp.pk.m)
            w = encrypt(kp.pk, 0, None, S)
            ysum = sum((t.y(i) for i in range(kp.pk.m) if S[i]), Fraction(0))
            assert phase_of(kp.sk, w) < Fraction(1, 8) + frc(ysum) + kp.pk.m / kp.sk.d


def test_key_files_roundtrip(small_keys):
    kp = small_keys[0]
    assert PrivateKey.from_text(kp.sk.to_text()) == kp.sk
    assert PublicKey.from_text(kp.pk.to_text()) == kp.pk
    assert kp.sk.to_text().splitlines()[0] == "pke-private v1"
    assert parse_ciphertext(ciphertext_text(12345)) == 12345


@pytest.mark.parametrize("cut", [0, 1, 3, 5])
def test_truncated_public_key_rejected(small_keys, cut):
    text = "\n".join(small_keys[0].pk.to_text().splitlines()[:cut])
    with pytest.raises((DomainError, KeyError, ValueError)):
        PublicKey.from_text(text)


def test_public_key_range_checked():
    with pytest.raises(DomainError):
        PublicKey(16, (3, 16), 0)
    with pytest.raises(DomainError):
        PublicKey(16, (3, 4), 2)


def test_in_H_exact():
    N, m = 2**32, 24
    assert PrivateKey(DyadicReal.from_int(2**16), N).in_H(m)
    assert not PrivateKey(DyadicReal.from_int(2**16 - 1), N).in_H(m)
    assert not PrivateKey(DyadicReal.from_int(2**17), N).in_H(m)
    half = DyadicReal.from_fraction(Fraction(2**16 * 2 + 1, 2), 64)
    assert not PrivateKey(half, N).in_H(m)


def test_error_rate_report():
    rep = error_rate_experiment(SMALL, 2, 0, np.random.default_rng(0))
    assert rep.total.trials == 0 and rep.total.rate == 0.0
    rep = error_rate_experiment(SMALL, 3, 200, np.random.default_rng(1))
    assert rep.total.trials == 1200
    lo, hi = rep.total.wilson()
    assert lo <= rep.total.rate <= hi
    assert "all:" in rep.summary()


def test_degenerate_profile_errors_more():
    bad = PKEParams(N=2**32, m=24, gamma=float(math.sqrt(4 * 24)), strict=False)
    rep_bad = error_rate_experiment(bad, 5, 200, np.random.default_rng(2))
    rep_ok = error_rate_experiment(SMALL, 5, 200, np.random.default_rng(2))
    assert rep_bad.total.rate > rep_ok.total.rate + 0.05
