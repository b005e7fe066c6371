"""Command-line front end: keygen, encrypt, decrypt, preview, analyze.

Exit status: 0 success, 2 usage error, 3 crypto error, 4 I/O or format error.
"""

import argparse
import json
import random
import sys
import warnings

from . import analysis, cipher, imagecodec, keys
from .errors import CryptoError, ElGamalImageError, FormatError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CRYPTO = 3
EXIT_IO = 4

SEED_HELP = ("deterministic seed. INSECURE: for tests and reproducible "
             "experiments only")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    parser = _Parser(prog="elgamal-image",
                     description="ElGamal encryption of grayscale and RGB images.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("keygen", help="generate a safe-prime keypair")
    p.add_argument("--bits", type=int, default=64,
                   help="modulus size in bits (default 64; < 128 is NOT secure)")
    p.add_argument("--out-pub", required=True)
    p.add_argument("--out-priv", required=True)
    p.add_argument("--seed", type=int, help=SEED_HELP)

    p = sub.add_parser("encrypt", help="encrypt a PNG/JPEG into an .eic container")
    p.add_argument("--pub", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=["paper", "perpixel"], default="paper")
    p.add_argument("--seed", type=int, help=SEED_HELP)

    p = sub.add_parser("decrypt", help="decrypt an .eic container to an image")
    p.add_argument("--priv", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--allow-lossy", action="store_true",
                   help="permit .jpg output (decrypted pixels will be altered)")

    p = sub.add_parser("preview", help="render the residues mod 256 as an image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--allow-lossy", action="store_true")

    p = sub.add_parser("analyze", help="histogram/entropy/correlation JSON report")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--cipher")
    p.add_argument("--pub", help="also attempt BSGS recovery of the private exponent")
    p.add_argument("--report", required=True)
    return parser


def _rng(seed):
    return random.Random(seed) if seed is not None else None


def _keygen(args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", keys.InsecureKeySizeWarning)
        pair = keys.generate_keypair(args.bits, _rng(args.seed))
    for w in caught:
        print(f"WARNING: {w.message}", file=sys.stderr)
    keys.save_key(args.out_pub, pair.public)
    keys.save_key(args.out_priv, pair.private)
    print(f"p has {pair.public.p.bit_length()} bits; keys written to "
          f"{args.out_pub}, {args.out_priv}", file=sys.stderr)


def _load_typed_key(path, cls):
    key = keys.load_key(path)
    if not isinstance(key, cls):
        raise keys.KeyParseError(f"{path}: expected a {cls.__name__} file", line=1)
    return key


def _encrypt(args):
    pub = _load_typed_key(args.pub, keys.PublicKey)
    img = imagecodec.load_image(args.input)
    c = cipher.encrypt_image(img, pub, args.mode, _rng(args.seed))
    cipher.write_cipher(args.out, c)


def _decrypt(args):
    priv = _load_typed_key(args.priv, keys.PrivateKey)
    c = cipher.read_cipher(args.input)
    img = cipher.decrypt_image(c, priv)
    imagecodec.save_image(img, args.out, allow_lossy=args.allow_lossy)


def _preview(args):
    c = cipher.read_cipher(args.input)
    imagecodec.save_image(cipher.cipher_preview(c), args.out, allow_lossy=args.allow_lossy)


def _analyze(args):
    plain = imagecodec.load_image(args.input)
    doc = {"plain": analysis.analyze(plain).to_dict(), "cipher": None,
           "cipher_statistics_basis": "residues mod 256"}
    if args.cipher:
        c = cipher.read_cipher(args.cipher)
        _, report = analysis.compare_report(plain, cipher.cipher_preview(c))
        if args.pub:
            pub = _load_typed_key(args.pub, keys.PublicKey)
            report.recovered_exponent, report.elapsed_ms = \
                analysis.recover_private_exponent(pub)
        doc["cipher"] = report.to_dict()
    elif args.pub:
        raise UsageError("--pub requires --cipher")
    with open(args.report, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


COMMANDS = {
    "keygen": _keygen,
    "encrypt": _encrypt,
    "decrypt": _decrypt,
    "preview": _preview,
    "analyze": _analyze,
}


def run(argv=None):
    """Run one subcommand and return its exit status."""
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except SystemExit as exc:
        # --help / --version
        return exc.code or EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CryptoError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_CRYPTO
    except (FormatError, ElGamalImageError) as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main():
    sys.exit(run())
