"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 bad data (malformed files, domain
errors), 3 internal error. stdout carries data, stderr diagnostics.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import distributions as dist
from .errors import CollisionNotFound, DomainError
from .experiments import parse_config, run_experiment, write_report_csv
from .hashing import HashKey, bruteforce_collision, hash_eval, hash_keygen, staged_collision
from .lattice import load_basis
from .numerics import PrecisionContext
from .pke import PrivateKey, PublicKey, decrypt, encrypt, get_profile, keygen, parse_ciphertext, ciphertext_text
from .reductions import EnumerationOracle, PhaseDistinguisher, WindowDistinguisher, prime_in_window, solve_usvp, usvp_pipeline

SPEC_HELP = "distribution spec: U | Q:beta | T:h:beta | TD:h[:shape] | Zk:k:N | S:ht:h:beta:a | Sp:h:beta:a"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _global_flags(defaults: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    sup = None if defaults else argparse.SUPPRESS
    p.add_argument("--profile", default="desk-small" if defaults else sup, help="parameter profile (desk-small, desk)")
    p.add_argument("--seed", type=int, default=0 if defaults else sup, help="RNG seed")
    p.add_argument("--precision-bits", type=int, default=128 if defaults else sup, help="fractional bits of exact arithmetic")
    p.add_argument("--out", default=None if defaults else sup, help="output path (default stdout)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wavycrypt", description="Wavy-distribution lattice cryptography toolkit.", parents=[_global_flags(True)])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    flags = _global_flags(False)

    p = sub.add_parser("keygen", parents=[flags], help="generate a key pair; --out PREFIX writes PREFIX.sk and PREFIX.pk")

    p = sub.add_parser("encrypt", parents=[flags], help="encrypt one bit")
    p.add_argument("--bit", type=int, required=True, choices=[0, 1])
    p.add_argument("--key", required=True, help="public key file")

    p = sub.add_parser("decrypt", parents=[flags], help="decrypt a ciphertext file")
    p.add_argument("--key", required=True, help="private key file")
    p.add_argument("--ct", "--in", dest="ct", required=True, help="ciphertext file")

    p = sub.add_parser("hash", parents=[flags], help="evaluate the subset-sum hash, or make a key with --new")
    p.add_argument("--key", help="hash key file")
    p.add_argument("--bits", help="input bit string, e.g. 0110...")
    p.add_argument("--new", action="store_true", help="generate a key instead")
    p.add_argument("--N", type=int, default=2**16)
    p.add_argument("--m", type=int, default=20)

    p = sub.add_parser("hash-collide", parents=[flags], help="find a ternary witness sum b_i a_i = 0 mod N")
    p.add_argument("--key", required=True)
    p.add_argument("--exhaustive", action="store_true", help="skip the short-prefix stage")

    p = sub.add_parser("sample", parents=[flags], help="draw samples; " + SPEC_HELP)
    p.add_argument("--spec", required=True, help=SPEC_HELP)
    p.add_argument("--count", type=int, default=10)

    p = sub.add_parser("dist-test", parents=[flags], help="estimate the statistical distance between two specs")
    p.add_argument("--a", required=True, help=SPEC_HELP)
    p.add_argument("--b", required=True, help=SPEC_HELP)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--bins", type=int, default=64)

    p = sub.add_parser("usvp-solve", parents=[flags], help="recover the unique shortest vector of a basis file")
    p.add_argument("--basis", required=True)
    p.add_argument("--oracle", choices=["reference", "window", "phase"], default="reference")
    p.add_argument("--p", type=int, default=None, help="odd prime (default: smallest prime in (g, 2g])")
    p.add_argument("--g", type=int, default=8, help="uniqueness gap used by the pipeline oracles")

    p = sub.add_parser("experiment", parents=[flags], help="run a batch of games from a key=value config; CSV report")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=1)
    return parser


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dispatch(args) -> int:
    rng = np.random.default_rng(args.seed)
    ctx = PrecisionContext(frac_bits=args.precision_bits)
    cmd = args.command
    if cmd == "keygen":
        kp = keygen(get_profile(args.profile), rng, ctx)
        if args.out:
            _emit(kp.sk.to_text(), args.out + ".sk")
            _emit(kp.pk.to_text(), args.out + ".pk")
        else:
            sys.stdout.write(kp.sk.to_text() + kp.pk.to_text())
    elif cmd == "encrypt":
        pk = PublicKey.from_text(_read(args.key))
        _emit(ciphertext_text(encrypt(pk, args.bit, rng)), args.out)
    elif cmd == "decrypt":
        sk = PrivateKey.from_text(_read(args.key))
        _emit(f"{decrypt(sk, parse_ciphertext(_read(args.ct)))}\n", args.out)
    elif cmd == "hash":
        if args.new:
            _emit(hash_keygen(args.N, args.m, rng).to_text(), args.out)
        else:
            if not args.key or args.bits is None:
                raise UsageError("hash needs --key and --bits (or --new)")
            key = HashKey.from_text(_read(args.key))
            if any(c not in "01" for c in args.bits):
                raise DomainError("--bits must be a 0/1 string")
            _emit(f"{hash_eval(key, [int(c) for c in args.bits])}\n", args.out)
    elif cmd == "hash-collide":
        key = HashKey.from_text(_read(args.key))
        b = bruteforce_collision(key) if args.exhaustive else staged_collision(key)
        _emit(" ".join(str(v) for v in b) + "\n", args.out)
    elif cmd == "sample":
        spec = dist.parse_spec(args.spec, ctx)
        values = spec.draw(rng, args.count)
        _emit("".join(f"{v:.17g}\n" for v in values), args.out)
    elif cmd == "dist-test":
        a = dist.parse_spec(args.a, ctx)
        b = dist.parse_spec(args.b, ctx)
        xa = a.draw(rng, args.samples)
        xb = b.draw(rng, args.samples)
        d = dist.statistical_distance_estimate(xa, xb, args.bins)
        _emit(f"{d:.6f}\n", args.out)
    elif cmd == "usvp-solve":
        basis = load_basis(args.basis)
        if args.oracle == "reference":
            p = args.p or 3
            vec = solve_usvp(basis, p, EnumerationOracle())
        else:
            d = WindowDistinguisher() if args.oracle == "window" else PhaseDistinguisher()
            vec = usvp_pipeline(basis, args.g, d, rng, p=args.p or prime_in_window(args.g))
        _emit(" ".join(f"{x.numerator}/{x.denominator}" for x in vec) + "\n", args.out)
    elif cmd == "experiment":
        text = _read(args.config)
        cfg = parse_config(text)
        explicit = {ln.split("=", 1)[0].strip() for ln in text.splitlines() if "=" in ln.split("#", 1)[0]}
        if "seed" not in explicit:
            cfg["seed"] = args.seed
        rows = run_experiment(cfg, args.workers)
        if args.out:
            with open(args.out, "w", newline="") as fh:
                write_report_csv(rows, fh)
        else:
            write_report_csv(rows, sys.stdout)
    return 0


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage())
        return _dispatch(args)
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return 1
    except (DomainError, CollisionNotFound, OSError, ValueError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
