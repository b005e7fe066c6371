"""ElGamal key generation, validation and the text key-file format."""

import re
import warnings
from dataclasses import dataclass
from pathlib import Path

from . import modmath
from .errors import (
    FactorizationIncompleteError,
    InvalidKeyError,
    KeyParseError,
    KeyTooSmallError,
)

MIN_BITS = 10
SECURE_BITS = 128

PUBLIC_HEADER = "ELGAMAL PUBLIC v1"
PRIVATE_HEADER = "ELGAMAL PRIVATE v1"

_DECIMAL = re.compile(r"0|[1-9][0-9]*")


class InsecureKeySizeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PublicKey:
    p: int
    r: int
    s: int

    def __post_init__(self):
        if self.p < 3:
            raise InvalidKeyError(f"modulus p={self.p} is too small")
        if not 2 <= self.r <= self.p - 1:
            raise InvalidKeyError(f"r={self.r} outside [2, p-1]")
        if not 1 <= self.s <= self.p - 1:
            raise InvalidKeyError(f"s={self.s} outside [1, p-1]")


@dataclass(frozen=True)
class PrivateKey:
    p: int
    r: int
    a: int

    def __post_init__(self):
        if self.p < 5:
            raise InvalidKeyError(f"modulus p={self.p} leaves no valid exponent")
        if not 2 <= self.r <= self.p - 1:
            raise InvalidKeyError(f"r={self.r} outside [2, p-1]")
        if not 2 <= self.a <= self.p - 2:
            raise InvalidKeyError(f"private exponent a={self.a} outside [2, p-2]")


@dataclass(frozen=True)
class KeyPair:
    public: PublicKey
    private: PrivateKey


def derive_public(priv):
    """Compute the announced triple ``(r, s, p)`` with ``s = r**a mod p``."""
    return PublicKey(p=priv.p, r=priv.r, s=modmath.mod_exp(priv.r, priv.a, priv.p))


def generate_keypair(bits=64, rng=None):
    """Generate a keypair over a fresh ``bits``-bit safe prime.

    Emits :class:`InsecureKeySizeWarning` below 128 bits.
    """
    if bits < MIN_BITS:
        raise KeyTooSmallError(f"key size {bits} bits is below the minimum {MIN_BITS}")
    if bits < SECURE_BITS:
        warnings.warn(
            f"{bits}-bit modulus is far too small to be secure",
            InsecureKeySizeWarning,
            stacklevel=2,
        )
    rng = rng or modmath.default_rng()
    p = modmath.gen_safe_prime(bits, rng)
    # p = 2q + 1 with q prime
    phi_factors = {2: 1, (p - 1) // 2: 1}
    r = modmath.find_primitive_root(p, phi_factors)
    a = modmath.uniform_int(rng, 2, p - 2)
    priv = PrivateKey(p=p, r=r, a=a)
    return KeyPair(public=derive_public(priv), private=priv)


def validate_group(p, r, effort_bound=modmath.DEFAULT_EFFORT):
    """Check that ``p`` is prime and ``r`` is a primitive root of it.

    Raises InvalidKeyError, including when ``p - 1`` cannot be factored within
    the effort bound.
    """
    if not modmath.is_probable_prime(p):
        raise InvalidKeyError(f"p={p} is not prime")
    try:
        phi_factors = modmath.factorize(p - 1, effort_bound)
    except FactorizationIncompleteError as exc:
        raise InvalidKeyError(f"cannot factor p-1 to verify r: {exc}") from exc
    if not modmath.is_primitive_root(r, p, phi_factors):
        raise InvalidKeyError(f"r={r} is not a primitive root of p={p}")


def format_key(key):
    if isinstance(key, PublicKey):
        lines = [PUBLIC_HEADER, f"p={key.p}", f"r={key.r}", f"s={key.s}"]
    elif isinstance(key, PrivateKey):
        lines = [PRIVATE_HEADER, f"p={key.p}", f"r={key.r}", f"a={key.a}"]
    else:
        raise TypeError(f"not a key: {key!r}")
    return "\n".join(lines) + "\n"


def parse_key(text, validate=True):
    """Parse key-file text into a PublicKey or PrivateKey.

    With ``validate`` the group (p prime, r primitive) is checked too. A
    public key's ``s`` cannot be checked without ``a``.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise KeyParseError("empty key file", line=1)
    header = lines[0]
    if header == PUBLIC_HEADER:
        names, cls = ("p", "r", "s"), PublicKey
    elif header == PRIVATE_HEADER:
        names, cls = ("p", "r", "a"), PrivateKey
    else:
        raise KeyParseError(f"unknown header {header!r}", line=1)
    if len(lines) < 4:
        raise KeyParseError(f"missing '{names[len(lines) - 1]}=' line", line=len(lines) + 1)
    if len(lines) > 4:
        raise KeyParseError(f"unexpected extra line {lines[4]!r}", line=5)
    values = {}
    for lineno, (name, line) in enumerate(zip(names, lines[1:]), start=2):
        key, sep, value = line.partition("=")
        if key != name or not sep:
            raise KeyParseError(f"expected '{name}=<decimal>', got {line!r}", line=lineno)
        if not _DECIMAL.fullmatch(value):
            raise KeyParseError(f"{name} is not a canonical decimal: {value!r}", line=lineno)
        values[name] = int(value)
    key = cls(**values)
    if validate:
        validate_group(key.p, key.r)
    return key


def save_key(path, key):
    Path(path).write_text(format_key(key), encoding="utf-8", newline="\n")


def load_key(path, validate=True):
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    if "\r" in text:
        raise KeyParseError("CR characters not allowed; use LF line endings",
                            line=text[: text.index("\r")].count("\n") + 1)
    return parse_key(text, validate=validate)
