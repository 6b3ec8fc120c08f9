"""Binary road masks: loading, overlap scores and hand-drawn sketch cleanup."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image
from scipy import ndimage

from ..errors import DimensionMismatch, ImageEmpty, IoFailure

SKETCH_MAX_SIDE = 512
MASK_THRESHOLD = 128
# grayscale spread below which a sketch page is treated as blank
MIN_CONTRAST = 32


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Row-major raster of road pixels (1) over background (0), shape (height, width)."""

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.data)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"mask must be a non-empty 2D array, got shape {arr.shape}")
        arr = (arr != 0).astype(np.uint8)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def area(self) -> int:
        return int(self.data.sum())

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryMask) and np.array_equal(self.data, other.data)

    __hash__ = None

    @classmethod
    def zeros(cls, height: int, width: int) -> "BinaryMask":
        return cls(np.zeros((height, width), dtype=np.uint8))

    def to_image(self) -> Image.Image:
        return Image.fromarray(self.data * 255)


def load_mask(path, threshold: int = MASK_THRESHOLD) -> BinaryMask:
    """Read any grayscale-convertible raster; pixels >= ``threshold`` are road."""
    try:
        with Image.open(path) as im:
            gray = np.asarray(im.convert("L"))
    except (OSError, ValueError) as exc:
        raise IoFailure(f"cannot read mask image {path}: {exc}") from exc
    return BinaryMask(gray >= threshold)


def load_grayscale(path) -> np.ndarray:
    try:
        with Image.open(path) as im:
            return np.asarray(im.convert("L"))
    except (OSError, ValueError) as exc:
        raise IoFailure(f"cannot read image {path}: {exc}") from exc


def save_mask(mask: BinaryMask, path) -> Path:
    target = Path(path)
    mask.to_image().save(target)
    return target


def _check_same(a: BinaryMask, b: BinaryMask) -> None:
    if a.data.shape != b.data.shape:
        raise DimensionMismatch(f"mask shapes differ: {a.data.shape} vs {b.data.shape}")


def iou(a: BinaryMask, b: BinaryMask) -> float:
    _check_same(a, b)
    inter = int(np.count_nonzero(a.data & b.data))
    union = int(np.count_nonzero(a.data | b.data))
    return 1.0 if union == 0 else inter / union


def dice_loss(a: BinaryMask, b: BinaryMask) -> float:
    _check_same(a, b)
    inter = int(np.count_nonzero(a.data & b.data))
    total = a.area + b.area
    return 0.0 if total == 0 else 1.0 - 2.0 * inter / total


def otsu_threshold(gray: np.ndarray) -> int:
    """Level t maximising between-class variance of {<= t} vs {> t} on uint8 data."""
    hist = np.bincount(gray.ravel(), minlength=256).astype(np.float64)
    levels = np.arange(256, dtype=np.float64)
    w0 = np.cumsum(hist)
    w1 = w0[-1] - w0
    s0 = np.cumsum(hist * levels)
    mu0 = np.divide(s0, w0, out=np.zeros(256), where=w0 > 0)
    mu1 = np.divide(s0[-1] - s0, w1, out=np.zeros(256), where=w1 > 0)
    between = w0 * w1 * (mu0 - mu1) ** 2
    return int(np.argmax(between))


def _resize(gray: np.ndarray, max_side: int) -> np.ndarray:
    h, w = gray.shape
    if max(h, w) == max_side:
        return gray
    f = max_side / max(h, w)
    size = (max(1, round(w * f)), max(1, round(h * f)))
    return np.asarray(Image.fromarray(gray).resize(size, Image.BILINEAR))


def preprocess_sketch(image, max_side: int = SKETCH_MAX_SIDE, min_contrast: int = MIN_CONTRAST) -> BinaryMask:
    """Turn a scanned or photographed drawing into a stroke mask.

    Resize to ``max_side`` on the longer side, 3x3 median denoise, Otsu
    threshold with the minority class taken as strokes, then a 3x3 closing to
    bridge small gaps.
    """
    if isinstance(image, Image.Image):
        gray = np.asarray(image.convert("L"))
    else:
        gray = np.asarray(image)
        if gray.ndim == 3:
            gray = np.asarray(Image.fromarray(gray.astype(np.uint8)).convert("L"))
    if gray.ndim != 2 or gray.size == 0:
        raise ImageEmpty("sketch image is empty")
    gray = np.clip(gray, 0, 255).astype(np.uint8)

    gray = _resize(gray, max_side)
    gray = ndimage.median_filter(gray, size=3, mode="nearest")
    if int(gray.max()) - int(gray.min()) < min_contrast:
        return BinaryMask.zeros(*gray.shape)

    t = otsu_threshold(gray)
    high = gray > t
    strokes = high if np.count_nonzero(high) < high.size / 2 else ~high

    padded = np.pad(strokes, 1)
    closed = ndimage.binary_closing(padded, structure=np.ones((3, 3), bool), iterations=1)
    return BinaryMask(closed[1:-1, 1:-1])
