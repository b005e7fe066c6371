"""Statistical checks on plain and encrypted images, plus toy-scale key recovery.

Ciphertext residues are not 8-bit, so statistics on an encryption are taken
over its mod-256 preview (see :func:`elgamal_image.cipher.cipher_preview`).
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import modmath
from .errors import (
    DiscreteLogNotFoundError,
    InsufficientDataError,
    InvalidArgumentError,
    InvalidComparisonError,
    RefuseLargeModulusError,
)

BSGS_LIMIT = 1 << 26

DIRECTIONS = {
    "horizontal": (1, 0),
    "vertical": (0, 1),
    "diagonal": (1, 1),
}
_ALIASES = {"h": "horizontal", "v": "vertical", "d": "diagonal"}


def histogram(m):
    """Per-channel pixel counts, shape ``(channels, 256)``."""
    return np.stack([np.bincount(plane.ravel(), minlength=256) for plane in m.planes])


def shannon_entropy(m):
    """Entropy in bits of each channel's value distribution."""
    out = []
    for counts in histogram(m):
        freqs = counts[counts > 0] / counts.sum()
        out.append(float(-(freqs * np.log2(freqs)).sum()) + 0.0)
    return out


def adjacent_correlation(m, direction="horizontal", channel=0):
    """Pearson correlation between each pixel and its neighbour.

    ``direction`` is ``horizontal`` (dx=1), ``vertical`` (dy=1) or
    ``diagonal`` (dx=dy=1). Returns 0.0 when either side has zero variance.
    """
    direction = _ALIASES.get(direction, direction)
    try:
        dx, dy = DIRECTIONS[direction]
    except KeyError:
        raise InvalidArgumentError(f"unknown direction {direction!r}") from None
    if m.width < 1 + dx or m.height < 1 + dy:
        raise InsufficientDataError(
            f"{m.width}x{m.height} image has no {direction} pixel pairs")
    plane = m.planes[channel].astype(np.float64)
    a = plane[: plane.shape[0] - dy, : plane.shape[1] - dx].ravel()
    b = plane[dy:, dx:].ravel()
    a = a - a.mean()
    b = b - b.mean()
    denom = math.sqrt(float(a @ a) * float(b @ b))
    if denom == 0.0:
        return 0.0
    return max(-1.0, min(1.0, float(a @ b) / denom))


def bsgs_dlog(r, s, p):
    """Baby-step giant-step: find ``a`` in ``[0, p-2]`` with ``r**a = s mod p``.

    Time and memory are O(sqrt(p)), so ``p`` is capped at 2**26.
    """
    if p >= BSGS_LIMIT:
        raise RefuseLargeModulusError(f"p={p} exceeds the 2**26 BSGS bound")
    if not 1 <= s <= p - 1:
        raise InvalidArgumentError(f"s={s} outside [1, {p - 1}]")
    order = p - 1
    step = math.isqrt(order - 1) + 1 if order > 1 else 1
    baby = {}
    e = 1
    for j in range(step):
        baby.setdefault(e, j)
        e = e * r % p
    giant = modmath.mod_inv(modmath.mod_exp(r, step, p), p)
    gamma = s
    for i in range(step):
        j = baby.get(gamma)
        if j is not None:
            return (i * step + j) % order
        gamma = gamma * giant % p
    raise DiscreteLogNotFoundError(f"no discrete log of {s} to base {r} mod {p}")


def recover_private_exponent(pub):
    """Time a BSGS attack on ``pub``. Returns ``(a, elapsed_ms)``."""
    start = time.perf_counter()
    a = bsgs_dlog(pub.r, pub.s, pub.p)
    return a, (time.perf_counter() - start) * 1000.0


@dataclass
class AnalysisReport:
    histogram: list
    entropy_bits: list
    correlation_h: list
    correlation_v: list
    correlation_d: list
    recovered_exponent: int = None
    elapsed_ms: float = None

    def to_dict(self):
        return {
            "histogram": self.histogram,
            "entropy_bits": self.entropy_bits,
            "correlation_h": self.correlation_h,
            "correlation_v": self.correlation_v,
            "correlation_d": self.correlation_d,
            "recovered_exponent": self.recovered_exponent,
            "elapsed_ms": self.elapsed_ms,
        }


def _correlations(m, direction):
    out = []
    for c in range(m.channels):
        try:
            out.append(adjacent_correlation(m, direction, c))
        except InsufficientDataError:
            out.append(None)
    return out


def analyze(m):
    return AnalysisReport(
        histogram=histogram(m).tolist(),
        entropy_bits=shannon_entropy(m),
        correlation_h=_correlations(m, "horizontal"),
        correlation_v=_correlations(m, "vertical"),
        correlation_d=_correlations(m, "diagonal"),
    )


def compare_report(plain, preview):
    """Reports for a plaintext image and a cipher preview of the same shape."""
    if plain.shape != preview.shape:
        raise InvalidComparisonError(
            f"shape mismatch: plain {plain.shape} vs cipher preview {preview.shape}")
    return analyze(plain), analyze(preview)
