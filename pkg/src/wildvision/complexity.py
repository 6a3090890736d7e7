"""Image-complexity measures: Shannon entropy, local entropy, PCA variance.

These quantify how much harder a field-collected image set is than a
curated one: histogram entropy per channel, per-pixel entropy of a small
disk neighborhood, and the fraction of dataset variance captured by the
top principal components of the flattened grayscale images.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError
from skimage.filters.rank import entropy as _rank_entropy
from skimage.morphology import disk as _disk

from .core import ValidationError
from .sampler import FRAME_EXTENSIONS, LUMA_WEIGHTS, DecodeError, default_workers

DEFAULT_LOCAL_RADIUS = 10
DEFAULT_SUBSAMPLE = (300, 300)
DEFAULT_PCA_RESIZE = (200, 200)
DEFAULT_PCA_COMPONENTS = 3

CHANNELS = ("red", "green", "blue")


class EmptyImage(ValidationError):
    """An entropy operation received a zero-pixel array."""


class InsufficientImages(ValidationError):
    """PCA needs at least two images."""


class DegenerateVariance(ValidationError):
    """All images are identical: total variance is zero."""


def shannon_entropy(channel_pixels: np.ndarray) -> float:
    """Shannon entropy of an 8-bit channel, in bits.

    Parameters
    ----------
    channel_pixels : ndarray
        Integer array with values in [0, 255]; any shape.

    Returns
    -------
    float
        ``-sum(q_i * log2(q_i))`` over the 256-bin histogram
        frequencies, empty bins skipped. 0 for a constant image and at
        most 8 for an 8-bit channel.
    """
    arr = np.asarray(channel_pixels)
    if arr.size == 0:
        raise EmptyImage("cannot compute entropy of an empty image")
    counts = np.bincount(arr.reshape(-1).astype(np.int64), minlength=256)
    q = counts[counts > 0] / arr.size
    return float(-np.sum(q * np.log2(q))) + 0.0


@dataclass(frozen=True)
class LocalEntropyStats:
    """Summary statistics (bits) of a local-entropy map."""

    mean: float
    std: float
    max: float
    min: float
    radius_px: int = DEFAULT_LOCAL_RADIUS


def local_entropy(
    channel_pixels: np.ndarray, radius_px: int = DEFAULT_LOCAL_RADIUS
) -> tuple[np.ndarray, LocalEntropyStats]:
    """Per-pixel Shannon entropy of a disk neighborhood.

    Each output pixel is the entropy of the 256-bin histogram of the
    disk of radius ``radius_px`` (Euclidean, edge-inclusive mirror
    padding at the borders) centered on it.

    Returns
    -------
    (ndarray, LocalEntropyStats)
        The float64 entropy map (same shape as the input) and its
        mean/std/max/min.
    """
    arr = np.asarray(channel_pixels)
    if arr.size == 0:
        raise EmptyImage("cannot compute local entropy of an empty image")
    if radius_px < 1:
        raise ValidationError(f"radius_px must be >= 1: {radius_px}")
    arr = arr.astype(np.uint8)
    padded = np.pad(arr, radius_px, mode="symmetric")
    emap = _rank_entropy(padded, _disk(radius_px))[
        radius_px:-radius_px, radius_px:-radius_px
    ]
    stats = LocalEntropyStats(
        mean=float(emap.mean()),
        std=float(emap.std()),
        max=float(emap.max()),
        min=float(emap.min()),
        radius_px=radius_px,
    )
    return emap, stats


def bilinear_resize(pixels: np.ndarray, target: tuple[int, int]) -> np.ndarray:
    """Bilinear resize to ``target`` (width, height), channels independent.

    Output pixel centers sample the source at ``(j + 0.5) * W / tw - 0.5``
    (and likewise for rows), clamped at the edges; returns float64. A
    same-size target reproduces the input exactly.
    """
    src = np.asarray(pixels, dtype=np.float64)
    tw, th = target
    if tw < 1 or th < 1:
        raise ValidationError(f"target size must be >= 1x1: {target}")
    h, w = src.shape[:2]
    if src.size == 0:
        raise EmptyImage("cannot resize an empty image")

    def axis_coords(n_src: int, n_dst: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        x = (np.arange(n_dst) + 0.5) * n_src / n_dst - 0.5
        x0 = np.floor(x).astype(np.int64)
        frac = x - x0
        lo = np.clip(x0, 0, n_src - 1)
        hi = np.clip(x0 + 1, 0, n_src - 1)
        return lo, hi, frac

    y0, y1, fy = axis_coords(h, th)
    x0, x1, fx = axis_coords(w, tw)
    fy = fy.reshape(-1, 1) if src.ndim == 2 else fy.reshape(-1, 1, 1)
    fx = fx.reshape(1, -1) if src.ndim == 2 else fx.reshape(1, -1, 1)
    top = src[y0][:, x0] * (1 - fx) + src[y0][:, x1] * fx
    bot = src[y1][:, x0] * (1 - fx) + src[y1][:, x1] * fx
    return top * (1 - fy) + bot * fy


def subsample(image: np.ndarray, target: tuple[int, int] = DEFAULT_SUBSAMPLE) -> np.ndarray:
    """Bilinear resize to ``target`` (width, height), back to uint8.

    Fractional results are rounded half to even.
    """
    out = bilinear_resize(image, target)
    return np.rint(out).astype(np.uint8)


def grayscale(image: np.ndarray) -> np.ndarray:
    """BT.601-weighted grayscale as float64; pass-through for 2-D input."""
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim == 2:
        return arr
    wr, wg, wb = LUMA_WEIGHTS
    return wr * arr[..., 0] + wg * arr[..., 1] + wb * arr[..., 2]


@dataclass(frozen=True)
class PcaVarianceReport:
    """Cumulative explained-variance fraction of the top-k components."""

    k: int
    cumulative_fraction: float
    resize: tuple[int, int] = DEFAULT_PCA_RESIZE
    grayscale: bool = True
    n_images: int = 0


def explained_variance_fractions(vectors: np.ndarray) -> np.ndarray:
    """Cumulative explained-variance fractions for every k.

    Parameters
    ----------
    vectors : (n, d) ndarray
        One flattened image per row.

    Returns
    -------
    ndarray
        ``out[k-1]`` is the fraction of total variance captured by the
        top k principal components of the mean-centered data. Computed
        from the eigenvalues of the n x n Gram matrix, which are exactly
        the nonzero covariance eigenvalues at a fraction of the cost
        when n << d.
    """
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise InsufficientImages("PCA needs at least 2 images")
    x = x - x.mean(axis=0)
    gram = x @ x.T
    eigvals = np.linalg.eigvalsh(gram)[::-1]
    eigvals = np.clip(eigvals, 0.0, None)
    total = float(eigvals.sum())
    if total <= 0.0:
        raise DegenerateVariance("total variance is zero (all images identical)")
    return np.minimum(np.cumsum(eigvals) / total, 1.0)


def _pca_vector(image: np.ndarray, resize: tuple[int, int]) -> np.ndarray:
    return bilinear_resize(grayscale(image), resize).reshape(-1)


def pca_explained_variance(
    images: list[np.ndarray],
    k: int = DEFAULT_PCA_COMPONENTS,
    resize: tuple[int, int] = DEFAULT_PCA_RESIZE,
) -> PcaVarianceReport:
    """Cumulative explained variance of the top-k components of a dataset.

    Every image is converted to BT.601 grayscale, bilinearly resized to
    ``resize``, and flattened; the fraction is computed over the
    mean-centered stack. ``k`` beyond the data rank saturates at 1.
    """
    if len(images) < 2:
        raise InsufficientImages("PCA needs at least 2 images")
    if k < 1:
        raise ValidationError(f"k must be >= 1: {k}")
    vectors = np.stack([_pca_vector(img, resize) for img in images])
    fractions = explained_variance_fractions(vectors)
    fraction = float(fractions[min(k, len(fractions)) - 1])
    return PcaVarianceReport(
        k=k, cumulative_fraction=fraction, resize=resize, n_images=len(images)
    )


# ---------------------------------------------------------------------------
# Dataset reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexityReport:
    """Dataset-level complexity summary.

    ``local_green`` holds statistics across images of the per-image mean
    local entropy of the green channel: each image is reduced to the
    mean of its local-entropy map first, then mean/std/max/min are taken
    over those per-image values.
    """

    dataset_name: str
    n_images: int
    image_size: tuple[int, int] | None
    mean_shannon: dict[str, float]
    local_green: LocalEntropyStats
    pca: PcaVarianceReport | None = None

    def to_json_dict(self) -> dict:
        r = self.local_green.radius_px
        doc: dict = {
            "dataset_name": self.dataset_name,
            "n_images": self.n_images,
            "image_size": list(self.image_size) if self.image_size else None,
        }
        for channel in CHANNELS:
            doc[f"mean_shannon_entropy_{channel}"] = self.mean_shannon[channel]
        doc[f"mean_local_{r}px_entropy_green"] = self.local_green.mean
        doc[f"std_local_{r}px_entropy_green"] = self.local_green.std
        doc[f"max_local_{r}px_entropy_green"] = self.local_green.max
        doc[f"min_local_{r}px_entropy_green"] = self.local_green.min
        if self.pca is not None:
            doc["pca_top_k"] = self.pca.k
            doc["pca_cumulative_explained_variance"] = self.pca.cumulative_fraction
        return doc


def list_images(directory: str | Path) -> list[Path]:
    """Image files under a directory, sorted by name."""
    directory = Path(directory)
    return [
        p
        for p in sorted(directory.iterdir())
        if p.is_file() and p.suffix.lower() in FRAME_EXTENSIONS
    ]


def load_image(path: str | Path) -> np.ndarray:
    """Decode an image file to an H x W x 3 uint8 RGB array."""
    try:
        with Image.open(path) as img:
            return np.asarray(img.convert("RGB"), dtype=np.uint8)
    except (UnidentifiedImageError, OSError) as exc:
        raise DecodeError(f"cannot decode {path}: {exc}") from exc


def analyze_dataset(
    directory: str | Path,
    dataset_name: str | None = None,
    image_size: tuple[int, int] | None = DEFAULT_SUBSAMPLE,
    radius_px: int = DEFAULT_LOCAL_RADIUS,
    pca_k: int | None = DEFAULT_PCA_COMPONENTS,
    pca_resize: tuple[int, int] = DEFAULT_PCA_RESIZE,
    max_workers: int | None = None,
) -> ComplexityReport:
    """Compute the complexity report of one image directory.

    ``image_size`` None analyzes images at native size; otherwise each
    image is bilinearly subsampled to (width, height) first. PCA is
    skipped when ``pca_k`` is None or fewer than two images are present.
    The report is invariant to file ordering: every statistic is either
    symmetric in the images or computed from sorted per-image values.
    """
    directory = Path(directory)
    paths = list_images(directory)
    if not paths:
        raise ValidationError(f"no images found in {directory}")
    name = dataset_name if dataset_name is not None else directory.name

    want_pca = pca_k is not None and len(paths) >= 2

    def per_image(path: Path) -> tuple[tuple[float, float, float], float, np.ndarray | None]:
        img = load_image(path)
        if image_size is not None:
            img = subsample(img, image_size)
        shannon = tuple(shannon_entropy(img[..., c]) for c in range(3))
        _, stats = local_entropy(img[..., 1], radius_px)
        vec = _pca_vector(img, pca_resize) if want_pca else None
        return shannon, stats.mean, vec

    workers = max_workers or default_workers()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(per_image, paths))

    shannons = [row[0] for row in rows]
    local_means = [row[1] for row in rows]
    vectors = [row[2] for row in rows]
    n = len(rows)
    mean_shannon = {
        channel: math.fsum(s[c] for s in shannons) / n
        for c, channel in enumerate(CHANNELS)
    }
    mean_of_means = math.fsum(local_means) / n
    var = math.fsum((m - mean_of_means) ** 2 for m in local_means) / n
    local_green = LocalEntropyStats(
        mean=mean_of_means,
        std=math.sqrt(var),
        max=max(local_means),
        min=min(local_means),
        radius_px=radius_px,
    )
    pca = None
    if want_pca:
        try:
            fractions = explained_variance_fractions(np.stack(vectors))
            fraction = float(fractions[min(pca_k, len(fractions)) - 1])
            pca = PcaVarianceReport(
                k=pca_k, cumulative_fraction=fraction, resize=pca_resize, n_images=n
            )
        except DegenerateVariance:
            pca = None
    return ComplexityReport(
        dataset_name=name,
        n_images=n,
        image_size=image_size,
        mean_shannon=mean_shannon,
        local_green=local_green,
        pca=pca,
    )
