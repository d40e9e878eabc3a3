"""Dataset directories and their manifest.

Layout:

    <root>/images/NNNNNN.png   8-bit RGB frames
    <root>/depth/NNNNNN.png    16-bit grayscale depth (level 0 = invalid)
    <root>/flow/NNNNNN.flo     optional, flow from frame N-1 to N (frame 0
                               is all-zero flow)
    <root>/manifest.txt        UTF-8 header lines (key value) followed by one
                               "frame" record per line: index, image path,
                               depth path, pose as 6 reals (x y z roll pitch
                               yaw), timestamp

Timestamps advance by exactly 0.1 s. Everything a consumer needs to
normalize inputs and decode depth (seed, scale factor, range ceiling,
channel means, intrinsics, config hash) lives in the header.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .flow import FlowField, FlowParams, estimate_flow, to_grayscale, write_flo
from .scene import (
    DepthMap,
    Intrinsics,
    SceneConfig,
    TrajectoryConfig,
    decode_depth,
    encode_depth,
    generate_scene,
    render,
    sample_trajectory,
)

MANIFEST_NAME = "manifest.txt"
MANIFEST_MAGIC = "depthflow-dataset v1"
FRAME_DT = 0.1


class DatasetError(Exception):
    """Missing or malformed dataset files."""


def save_rgb8(path, rgb: np.ndarray):
    """Store a float (H, W, 3) image in [0, 1] as 8-bit RGB PNG."""
    arr = np.clip(np.round(rgb * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(arr, "RGB").save(path, format="PNG")


def load_rgb8(path) -> np.ndarray:
    try:
        img = Image.open(path)
    except FileNotFoundError as e:
        raise DatasetError(f"missing image file {path}") from e
    return np.asarray(img.convert("RGB"), dtype=float) / 255.0


def save_gray16(path, levels: np.ndarray):
    Image.fromarray(levels.astype(np.uint16)).save(path, format="PNG")


def load_gray16(path) -> np.ndarray:
    try:
        img = Image.open(path)
    except FileNotFoundError as e:
        raise DatasetError(f"missing depth file {path}") from e
    return np.asarray(img, dtype=np.uint16)


@dataclass
class FrameRecord:
    index: int
    image_path: str
    depth_path: str
    pose6: tuple  # x, y, z, roll, pitch, yaw
    timestamp: float


@dataclass
class SequenceManifest:
    frames: list
    seed: int
    scale_factor: float
    max_range: float
    channel_means: tuple
    intrinsics: Intrinsics
    config_hash: str = ""

    def validate(self):
        times = [f.timestamp for f in self.frames]
        for a, b in zip(times, times[1:]):
            if abs((b - a) - FRAME_DT) > 1e-9:
                raise DatasetError(f"timestamps must advance by {FRAME_DT} s")


def write_manifest(root, manifest: SequenceManifest):
    manifest.validate()
    lines = [MANIFEST_MAGIC]
    lines.append(f"seed {manifest.seed}")
    lines.append(f"config_hash {manifest.config_hash or '-'}")
    lines.append(f"scale_factor {manifest.scale_factor!r}")
    lines.append(f"max_range {manifest.max_range!r}")
    lines.append("channel_means " + " ".join(repr(float(m)) for m in manifest.channel_means))
    intr = manifest.intrinsics
    lines.append(f"intrinsics {intr.f!r} {intr.cx!r} {intr.cy!r} {intr.width} {intr.height}")
    for f in manifest.frames:
        pose = " ".join(repr(float(p)) for p in f.pose6)
        lines.append(f"frame {f.index} {f.image_path} {f.depth_path} {pose} {f.timestamp!r}")
    Path(root, MANIFEST_NAME).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_manifest(root) -> SequenceManifest:
    path = Path(root, MANIFEST_NAME)
    if not path.exists():
        raise DatasetError(f"no manifest at {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != MANIFEST_MAGIC:
        raise DatasetError(f"{path} is not a {MANIFEST_MAGIC!r} manifest")
    header = {}
    frames = []
    for line in lines[1:]:
        if not line.strip():
            continue
        fields = line.split()
        if fields[0] == "frame":
            if len(fields) != 11:
                raise DatasetError(f"malformed frame record: {line!r}")
            frames.append(FrameRecord(
                index=int(fields[1]), image_path=fields[2], depth_path=fields[3],
                pose6=tuple(float(x) for x in fields[4:10]),
                timestamp=float(fields[10])))
        else:
            header[fields[0]] = fields[1:]
    try:
        fx, cx, cy, w, h = header["intrinsics"]
        manifest = SequenceManifest(
            frames=frames,
            seed=int(header["seed"][0]),
            scale_factor=float(header["scale_factor"][0]),
            max_range=float(header["max_range"][0]),
            channel_means=tuple(float(x) for x in header["channel_means"]),
            intrinsics=Intrinsics(f=float(fx), cx=float(cx), cy=float(cy),
                                  width=int(w), height=int(h)),
            config_hash=header.get("config_hash", ["-"])[0],
        )
    except (KeyError, ValueError, IndexError) as e:
        raise DatasetError(f"manifest header incomplete: {e}") from e
    manifest.validate()
    return manifest


@dataclass(frozen=True)
class GenerateConfig:
    seed: int
    n_frames: int = 50
    difficulty: str = "sparse"
    max_range: float = 40.0
    width: int = 320
    height: int = 96
    trajectory_mode: str = "roam"
    max_speed: float = 8.0
    straight_drift: float = 0.0
    rotation_scale: float = 1.0
    scene: SceneConfig = field(default_factory=SceneConfig)
    config_hash: str = ""


def generate_dataset(root, config: GenerateConfig) -> SequenceManifest:
    """Render a full image+depth sequence into a dataset directory.

    Deterministic: the same config produces byte-identical files. The scene
    comes from config.seed and the trajectory from config.seed + 1.
    """
    root = Path(root)
    (root / "images").mkdir(parents=True, exist_ok=True)
    (root / "depth").mkdir(parents=True, exist_ok=True)

    scene = generate_scene(config.seed, config.difficulty, config.scene)
    intr = Intrinsics.default(config.width, config.height)
    traj_cfg = TrajectoryConfig(mode=config.trajectory_mode,
                                max_speed=config.max_speed,
                                straight_drift=config.straight_drift,
                                rotation_scale=config.rotation_scale,
                                intrinsics=intr)
    poses = sample_trajectory(scene, config.n_frames, config.seed + 1, traj_cfg)
    scale_factor = config.max_range / 65535.0

    frames = []
    mean_acc = np.zeros(3)
    for i, pose in enumerate(poses):
        prev = poses[i - 1] if i > 0 else None
        rgb, depth = render(scene, pose, max_range=config.max_range, prev_pose=prev)
        img_rel = f"images/{i:06d}.png"
        dep_rel = f"depth/{i:06d}.png"
        save_rgb8(root / img_rel, rgb)
        save_gray16(root / dep_rel, encode_depth(depth, scale_factor))
        # means over the stored (quantized) pixels, what training will read
        stored = np.clip(np.round(rgb * 255.0), 0, 255) / 255.0
        mean_acc += stored.reshape(-1, 3).mean(axis=0)
        frames.append(FrameRecord(index=i, image_path=img_rel, depth_path=dep_rel,
                                  pose6=pose.pose6(), timestamp=round(i * FRAME_DT, 6)))

    manifest = SequenceManifest(
        frames=frames, seed=config.seed, scale_factor=scale_factor,
        max_range=config.max_range,
        channel_means=tuple(mean_acc / len(poses)),
        intrinsics=intr, config_hash=config.config_hash)
    write_manifest(root, manifest)
    return manifest


def flow_path(root, index: int) -> Path:
    return Path(root) / "flow" / f"{index:06d}.flo"


def split_dataset(src, dst_a, dst_b, n_a: int):
    """Split a dataset into the first n_a frames and the rest (train/holdout).

    Frame files keep their original names and indices so precomputed flow
    files stay keyed correctly; each part gets its own manifest with the
    shared header. Returns the two manifests.
    """
    import shutil

    src = Path(src)
    manifest = read_manifest(src)
    if not 0 < n_a < len(manifest.frames):
        raise DatasetError(
            f"cannot split {len(manifest.frames)} frames at {n_a}")
    parts = ((Path(dst_a), manifest.frames[:n_a]),
             (Path(dst_b), manifest.frames[n_a:]))
    out = []
    for dst, frames in parts:
        (dst / "images").mkdir(parents=True, exist_ok=True)
        (dst / "depth").mkdir(parents=True, exist_ok=True)
        has_flow = all(flow_path(src, f.index).exists() for f in frames)
        if has_flow:
            (dst / "flow").mkdir(exist_ok=True)
        for f in frames:
            shutil.copyfile(src / f.image_path, dst / f.image_path)
            shutil.copyfile(src / f.depth_path, dst / f.depth_path)
            if has_flow:
                shutil.copyfile(flow_path(src, f.index), flow_path(dst, f.index))
        part = SequenceManifest(frames=frames, seed=manifest.seed,
                                scale_factor=manifest.scale_factor,
                                max_range=manifest.max_range,
                                channel_means=manifest.channel_means,
                                intrinsics=manifest.intrinsics,
                                config_hash=manifest.config_hash)
        write_manifest(dst, part)
        out.append(part)
    return tuple(out)


def compute_flows(root, params: FlowParams = FlowParams()) -> int:
    """Write one .flo per frame: frame 0 gets zero flow, frame i the flow
    from frame i-1 to frame i. Returns the number of files written."""
    root = Path(root)
    manifest = read_manifest(root)
    if len(manifest.frames) < 2:
        raise DatasetError("flow needs at least 2 frames")
    (root / "flow").mkdir(exist_ok=True)
    prev_gray = None
    for rec in manifest.frames:
        gray = to_grayscale(load_rgb8(root / rec.image_path))
        if prev_gray is None:
            field_ = FlowField.zeros(*gray.shape)
        else:
            field_ = estimate_flow(prev_gray, gray, params)
        write_flo(field_, flow_path(root, rec.index))
        prev_gray = gray
    return len(manifest.frames)


def load_depth(root, rec: FrameRecord, manifest: SequenceManifest) -> DepthMap:
    levels = load_gray16(Path(root) / rec.depth_path)
    return decode_depth(levels, manifest.scale_factor, manifest.max_range)
