"""64-bit DCT perceptual hash for near-duplicate detection.

"pHash" names a family of algorithms, so the variant is pinned exactly:
grayscale, bilinear resize to 32x32, 2-D DCT-II, top-left 8x8 coefficient
block flattened row-major, the DC term excluded from the statistics and its
bit slot filled with 0, remaining 63 coefficients thresholded against their
median, packed MSB-first.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image, UnidentifiedImageError
from scipy.fft import dctn

from .errors import DecodeError

HASH_BITS = 64
_RESIZE = 32
_BLOCK = 8


def decode_image(data: bytes) -> Image.Image:
    """Decode raw bytes into a PIL image, materializing pixel data."""
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
        return img
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise DecodeError(str(exc)) from exc


def phash64(image: Image.Image) -> int:
    """Perceptual hash of a decoded image; deterministic for identical pixels."""
    gray = image.convert("L").resize((_RESIZE, _RESIZE), Image.Resampling.BILINEAR)
    pixels = np.asarray(gray, dtype=np.float64)
    coeffs = dctn(pixels, type=2)[:_BLOCK, :_BLOCK].reshape(-1)
    ac = coeffs[1:]
    median = np.median(ac)
    value = 0
    for i in range(1, HASH_BITS):
        if coeffs[i] > median:
            value |= 1 << (HASH_BITS - 1 - i)
    return value


def phash_bytes(data: bytes) -> int:
    return phash64(decode_image(data))


def hamming(a: int, b: int) -> int:
    return (a ^ b).bit_count()
