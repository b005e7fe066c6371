"""Per-element ElGamal encryption of pixel matrices and the ``.eic`` container.

Two modes:

``paper``
    One ephemeral ``k`` for the whole image, a single ``X = r**k`` sent with
    the residue matrix ``Y``. Equal pixels give equal residues and 0 maps to 0.
``perpixel``
    A fresh ``k`` per element (drawn in planar row-major order) and a +1
    plaintext offset so that no pixel value is a fixed point.
"""

import enum
import struct
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import modmath
from .errors import (
    ContainerFormatError,
    InvalidEphemeralError,
    KeyMismatchError,
    ModulusTooSmallError,
    NotInvertibleError,
    PlaintextOutOfRangeError,
    WrongKeyOrCorruptError,
)
from .imagecodec import ImageMatrix

MIN_MODULUS = 257
MAGIC = b"EIC1"
_HEADER = struct.Struct(">4sBBIIH")


class Mode(enum.IntEnum):
    PAPER = 0
    PER_PIXEL = 1

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        names = {"paper": cls.PAPER, "perpixel": cls.PER_PIXEL, "per-pixel": cls.PER_PIXEL}
        try:
            return names[str(value).lower()]
        except KeyError:
            raise ValueError(f"unknown mode {value!r}; use 'paper' or 'perpixel'") from None

    @property
    def offset(self):
        return 1 if self is Mode.PER_PIXEL else 0


class ElementCipher(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class CipherImage:
    p: int
    mode: Mode
    width: int
    height: int
    channels: int
    x_values: tuple
    y_values: tuple

    def __post_init__(self):
        n = self.width * self.height * self.channels
        if len(self.y_values) != n:
            raise ValueError(f"{len(self.y_values)} residues for {n} elements")
        expected_x = 1 if self.mode is Mode.PAPER else n
        if len(self.x_values) != expected_x:
            raise ValueError(f"mode {self.mode.name} needs {expected_x} X values")

    def element(self, i):
        x = self.x_values[0] if self.mode is Mode.PAPER else self.x_values[i]
        return ElementCipher(x, self.y_values[i])


def encrypt_value(m, pub, k):
    """Encrypt one residue: ``x = r**k``, ``y = m * s**k`` (mod p)."""
    p = pub.p
    if not 0 <= m <= p - 1:
        raise PlaintextOutOfRangeError(f"plaintext {m} outside [0, {p - 1}]")
    if not 1 <= k <= p - 2:
        raise InvalidEphemeralError(f"ephemeral k={k} outside [1, {p - 2}]")
    x = modmath.mod_exp(pub.r, k, p)
    y = m * modmath.mod_exp(pub.s, k, p) % p
    return ElementCipher(x, y)


def decrypt_value(c, priv):
    """Recover ``m = y * (x**a)**-1 mod p``."""
    p = priv.p
    if c.x % p == 0:
        raise NotInvertibleError("x is 0 modulo p; cannot decrypt")
    return c.y * modmath.mod_inv(modmath.mod_exp(c.x, priv.a, p), p) % p


def _check_modulus(p):
    if p < MIN_MODULUS:
        raise ModulusTooSmallError(
            f"modulus p={p} is below {MIN_MODULUS}; 8-bit pixels would not fit")


def encrypt_image(img, pub, mode=Mode.PAPER, rng=None):
    mode = Mode.parse(mode)
    _check_modulus(pub.p)
    rng = rng or modmath.default_rng()
    p = pub.p
    plain = [int(v) + mode.offset for v in img.values]

    if mode is Mode.PAPER:
        k = modmath.uniform_int(rng, 1, p - 2)
        x = modmath.mod_exp(pub.r, k, p)
        shared = modmath.mod_exp(pub.s, k, p)
        table = [m * shared % p for m in range(256)]
        ys = tuple(table[m] for m in plain)
        xs = (x,)
    else:
        # all k drawn up front so the result never depends on evaluation order
        ks = [modmath.uniform_int(rng, 1, p - 2) for _ in plain]
        pairs = [encrypt_value(m, pub, k) for m, k in zip(plain, ks)]
        xs = tuple(c.x for c in pairs)
        ys = tuple(c.y for c in pairs)
    return CipherImage(p=p, mode=mode, width=img.width, height=img.height,
                       channels=img.channels, x_values=xs, y_values=ys)


def decrypt_image(c, priv):
    if priv.p != c.p:
        raise KeyMismatchError(f"private key modulus {priv.p} != cipher modulus {c.p}")
    p = priv.p
    offset = c.mode.offset
    if c.mode is Mode.PAPER:
        if c.x_values[0] % p == 0:
            raise NotInvertibleError("x is 0 modulo p; cannot decrypt")
        unmask = modmath.mod_inv(modmath.mod_exp(c.x_values[0], priv.a, p), p)
        plain = [y * unmask % p for y in c.y_values]
    else:
        plain = [decrypt_value(ElementCipher(x, y), priv)
                 for x, y in zip(c.x_values, c.y_values)]
    out = np.fromiter((m - offset for m in plain), dtype=object, count=len(plain))
    bad = [i for i, v in enumerate(out) if not 0 <= v <= 255]
    if bad:
        raise WrongKeyOrCorruptError(
            f"{len(bad)} of {len(out)} decrypted values fall outside [0, 255] "
            f"(first at element {bad[0]}); wrong key or corrupt data")
    return ImageMatrix(out.astype(np.uint8).reshape(c.channels, c.height, c.width))


def cipher_preview(c):
    """Residues reduced mod 256, for display only. Not decryptable."""
    vals = np.fromiter((y & 0xFF for y in c.y_values), dtype=np.uint8, count=len(c.y_values))
    return ImageMatrix(vals.reshape(c.channels, c.height, c.width))


# -- container ---------------------------------------------------------------

def _residue_bytes(values, width):
    return b"".join(v.to_bytes(width, "big") for v in values)


def cipher_to_bytes(c):
    lp = (c.p.bit_length() + 7) // 8
    header = _HEADER.pack(MAGIC, int(c.mode), c.channels, c.width, c.height, lp)
    return b"".join([header, c.p.to_bytes(lp, "big"),
                     _residue_bytes(c.x_values, lp), _residue_bytes(c.y_values, lp)])


def _read_residues(data, offset, count, lp, p, what):
    end = offset + count * lp
    if end > len(data):
        raise ContainerFormatError(
            f"truncated {what} block: need {count * lp} bytes, have {len(data) - offset}",
            offset=len(data))
    out = []
    for pos in range(offset, end, lp):
        v = int.from_bytes(data[pos:pos + lp], "big")
        if v >= p:
            raise ContainerFormatError(f"{what} residue {v} is not below p", offset=pos)
        out.append(v)
    return tuple(out), end


def cipher_from_bytes(data):
    if len(data) < _HEADER.size:
        raise ContainerFormatError(f"file shorter than the {_HEADER.size}-byte header",
                                   offset=len(data))
    magic, mode, channels, width, height, lp = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise ContainerFormatError(f"bad magic {magic!r}", offset=0)
    if mode not in (0, 1):
        raise ContainerFormatError(f"unknown mode byte {mode}", offset=4)
    if channels not in (1, 3):
        raise ContainerFormatError(f"channel count {channels} not 1 or 3", offset=5)
    if width == 0 or height == 0:
        raise ContainerFormatError("zero image dimension", offset=6 if width == 0 else 10)
    if lp == 0:
        raise ContainerFormatError("modulus length is zero", offset=14)
    pos = _HEADER.size
    if pos + lp > len(data):
        raise ContainerFormatError("truncated modulus", offset=len(data))
    p = int.from_bytes(data[pos:pos + lp], "big")
    if (p.bit_length() + 7) // 8 != lp:
        raise ContainerFormatError(
            f"declared modulus width {lp} bytes does not match p ({p.bit_length()} bits)",
            offset=14)
    if p < MIN_MODULUS:
        raise ContainerFormatError(f"modulus {p} below {MIN_MODULUS}", offset=pos)
    pos += lp
    mode = Mode(mode)
    n = width * height * channels
    xs, pos = _read_residues(data, pos, 1 if mode is Mode.PAPER else n, lp, p, "X")
    ys, pos = _read_residues(data, pos, n, lp, p, "Y")
    if pos != len(data):
        raise ContainerFormatError(f"{len(data) - pos} trailing bytes", offset=pos)
    return CipherImage(p=p, mode=mode, width=width, height=height, channels=channels,
                       x_values=xs, y_values=ys)


def write_cipher(path, c):
    with open(path, "wb") as fh:
        fh.write(cipher_to_bytes(c))


def read_cipher(path):
    with open(path, "rb") as fh:
        return cipher_from_bytes(fh.read())
