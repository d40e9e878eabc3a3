"""Robustness transforms applied to evaluation imagery: Gaussian blur and
darkening (contrast scale followed by a gamma power).

The blur "radius" is the Gaussian sigma in pixels, with a kernel half-width
of ceil(3 sigma) and replicate-edge boundaries; note this interpretation
when comparing severities against other toolchains. Ground-truth depth is
never touched; flows, when present, are recomputed from the transformed
frames because a deployed system would estimate flow on whatever the camera
actually delivers.
"""

from __future__ import annotations

import shutil
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import (
    MANIFEST_NAME,
    DatasetError,
    compute_flows,
    load_rgb8,
    read_manifest,
    save_rgb8,
)
from .flow import FlowParams


@dataclass(frozen=True)
class PerturbSpec:
    kind: str = "none"  # "none" | "blur" | "darken"
    blur_radius: float = 3.0
    max_contrast: float = 0.4
    gamma: float = 1.5

    def __post_init__(self):
        if self.kind not in ("none", "blur", "darken"):
            raise ValueError(f"unknown perturbation kind {self.kind!r}")
        if self.kind == "blur" and self.blur_radius <= 0:
            raise ValueError("blur_radius must be positive")
        if self.kind == "darken":
            if not 0 < self.max_contrast <= 1:
                raise ValueError("max_contrast must lie in (0, 1]")
            if self.gamma <= 0:
                raise ValueError("gamma must be positive")

    def apply(self, image: np.ndarray) -> np.ndarray:
        if self.kind == "blur":
            return gaussian_blur(image, self.blur_radius)
        if self.kind == "darken":
            return darken(image, self.max_contrast, self.gamma)
        return image


def _gaussian_kernel(sigma: float) -> np.ndarray:
    r = int(np.ceil(3 * sigma))
    x = np.arange(-r, r + 1, dtype=float)
    k = np.exp(-(x ** 2) / (2 * sigma ** 2))
    return k / k.sum()


def _blur_axis(img: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    r = (len(kernel) - 1) // 2
    pads = [(0, 0)] * img.ndim
    pads[axis] = (r, r)
    padded = np.pad(img, pads, mode="edge")
    out = np.zeros_like(img, dtype=float)
    n = img.shape[axis]
    sl = [slice(None)] * img.ndim
    for i, kv in enumerate(kernel):
        sl[axis] = slice(i, i + n)
        out += kv * padded[tuple(sl)]
    return out


def gaussian_blur(image: np.ndarray, radius: float) -> np.ndarray:
    """Separable Gaussian with sigma = radius; preserves mean intensity since
    the kernel is normalized. Works on (H, W) or (H, W, C) arrays."""
    if radius <= 0:
        raise ValueError("blur radius must be positive")
    k = _gaussian_kernel(radius)
    out = _blur_axis(np.asarray(image, dtype=float), k, axis=0)
    return _blur_axis(out, k, axis=1)


def darken(image: np.ndarray, max_contrast: float, gamma: float) -> np.ndarray:
    """(max_contrast * x) ** gamma on intensities in [0, 1], clamped."""
    img = np.asarray(image, dtype=float)
    if img.min() < -1e-9 or img.max() > 1 + 1e-9:
        raise ValueError("darken expects intensities in [0, 1]")
    return np.clip(np.clip(img, 0.0, 1.0) * max_contrast, 0.0, 1.0) ** gamma


def perturb_dataset(src, dst, spec: PerturbSpec,
                    flow_params: FlowParams = FlowParams()) -> int:
    """Write a transformed copy of a dataset.

    Images go through the perturbation (byte-identical copies for kind
    "none"); depth files and the manifest are copied verbatim; a flow/
    directory in the source is recomputed from the transformed frames.
    Returns the number of frames processed.
    """
    src = Path(src)
    dst = Path(dst)
    manifest = read_manifest(src)
    (dst / "images").mkdir(parents=True, exist_ok=True)
    (dst / "depth").mkdir(parents=True, exist_ok=True)
    for rec in manifest.frames:
        src_img = src / rec.image_path
        dst_img = dst / rec.image_path
        try:
            if spec.kind == "none":
                shutil.copyfile(src_img, dst_img)
            else:
                save_rgb8(dst_img, spec.apply(load_rgb8(src_img)))
            shutil.copyfile(src / rec.depth_path, dst / rec.depth_path)
        except OSError as e:
            raise DatasetError(f"failed to perturb frame {rec.index}: {e}") from e
    shutil.copyfile(src / MANIFEST_NAME, dst / MANIFEST_NAME)
    if (src / "flow").is_dir():
        compute_flows(dst, flow_params)
    return len(manifest.frames)
