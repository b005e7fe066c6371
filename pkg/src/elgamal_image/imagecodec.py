"""Images <-> pixel matrices.

A matrix is stored planar: shape ``(channels, height, width)``, so the flat
value order is the R plane, then G, then B, each row-major.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    ImageDecodeError,
    InvalidArgumentError,
    LossyOutputRefusedError,
    UnsupportedImageError,
)

READ_FORMATS = {"PNG", "JPEG"}
_LOSSY_SUFFIXES = {".jpg", ".jpeg"}
_HIGH_DEPTH_MODES = {"I", "I;16", "I;16B", "I;16L", "I;16N", "F"}


@dataclass(frozen=True, eq=False)
class ImageMatrix:
    planes: np.ndarray

    def __post_init__(self):
        planes = np.asarray(self.planes)
        if planes.ndim != 3 or planes.shape[0] not in (1, 3):
            raise InvalidArgumentError(
                f"expected shape (1|3, height, width), got {planes.shape}")
        if planes.shape[1] < 1 or planes.shape[2] < 1:
            raise InvalidArgumentError("image must have at least one pixel")
        if planes.dtype != np.uint8:
            if planes.size and (planes.min() < 0 or planes.max() > 255):
                raise InvalidArgumentError("pixel values must lie in [0, 255]")
            planes = planes.astype(np.uint8)
        else:
            planes = planes.copy()
        planes.setflags(write=False)
        object.__setattr__(self, "planes", planes)

    @classmethod
    def from_values(cls, width, height, channels, values):
        """Build from a flat planar row-major sequence."""
        arr = np.asarray(values, dtype=np.int64)
        if arr.size != width * height * channels:
            raise InvalidArgumentError(
                f"{arr.size} values for a {width}x{height}x{channels} image")
        return cls(arr.reshape(channels, height, width))

    @property
    def channels(self):
        return self.planes.shape[0]

    @property
    def height(self):
        return self.planes.shape[1]

    @property
    def width(self):
        return self.planes.shape[2]

    @property
    def shape(self):
        return (self.width, self.height, self.channels)

    @property
    def values(self):
        return self.planes.reshape(-1)

    def __eq__(self, other):
        if not isinstance(other, ImageMatrix):
            return NotImplemented
        return np.array_equal(self.planes, other.planes)

    def __repr__(self):
        return f"ImageMatrix(width={self.width}, height={self.height}, channels={self.channels})"


def _png_bit_depth(fp):
    # IHDR is always the first chunk: 8-byte signature, length, type, w, h, depth
    fp.seek(24)
    return fp.read(1)[0]


def _to_matrix(im):
    if im.mode in _HIGH_DEPTH_MODES:
        raise UnsupportedImageError(f"bit depth of mode {im.mode!r} is not 8-bit")
    if "A" in im.mode or "transparency" in im.info:
        raise UnsupportedImageError(f"alpha channel not supported (mode {im.mode!r})")
    if im.mode == "1":
        im = im.convert("L")
    if im.mode == "L":
        arr = np.asarray(im, dtype=np.uint8)[np.newaxis]
    else:
        # palette, CMYK, YCbCr etc. all count as colour input
        arr = np.asarray(im.convert("RGB"), dtype=np.uint8).transpose(2, 0, 1)
    return ImageMatrix(arr)


def load_image(path):
    """Decode a PNG or JPEG file into an :class:`ImageMatrix`."""
    try:
        with Image.open(path) as im:
            if im.format not in READ_FORMATS:
                raise UnsupportedImageError(f"{path}: format {im.format} not supported")
            if im.format == "PNG" and _png_bit_depth(im.fp) > 8:
                raise UnsupportedImageError(f"{path}: 16-bit PNG not supported")
            im.load()
            return _to_matrix(im)
    except UnidentifiedImageError as exc:
        raise ImageDecodeError(f"{path}: not a decodable image") from exc
    except (SyntaxError, ValueError, OSError) as exc:
        if isinstance(exc, FileNotFoundError):
            raise
        raise ImageDecodeError(f"{path}: {exc}") from exc


def _to_pil(m):
    if m.channels == 1:
        return Image.fromarray(np.ascontiguousarray(m.planes[0]))
    return Image.fromarray(np.ascontiguousarray(m.planes.transpose(1, 2, 0)))


def save_image(m, path, allow_lossy=False):
    """Write ``m`` as PNG. JPEG output needs ``allow_lossy=True``."""
    suffix = Path(path).suffix.lower()
    if suffix in _LOSSY_SUFFIXES:
        if not allow_lossy:
            raise LossyOutputRefusedError(
                f"{path}: refusing lossy JPEG output; pixel values would change")
        _to_pil(m).save(path, format="JPEG", quality=95)
    elif suffix == ".png":
        _to_pil(m).save(path, format="PNG")
    else:
        raise UnsupportedImageError(f"{path}: output must be .png (or .jpg with override)")
