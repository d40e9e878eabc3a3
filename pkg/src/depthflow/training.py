"""Training loop and dataset-level prediction/evaluation.

Training is plain SGD over shuffled mini-batches with the step lr decay.
Inputs are normalized with the training manifest's channel means (flow by
image width); those means travel inside the checkpoint descriptor so that
later inference normalizes identically no matter which dataset it sees.
The depth head's bias starts at the training set's mean log depth, which
centers the initial predictions on the data instead of at 1 m.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .checkpoint import load_checkpoint, save_checkpoint
from .dataset import DatasetError, flow_path, load_depth, load_rgb8, read_manifest
from .flow import read_flo
from .metrics import (
    EvalConfig,
    MetricsReport,
    evaluate,
    loss_linear_rmse,
    loss_log_rmse,
)
from .network import (
    DepthNet,
    NetworkSpec,
    assemble_input,
    build_network,
    crop_prediction,
    encode_descriptor,
    pad_to_16,
    parse_descriptor,
)
from .optim import lr_schedule, sgd_step
from .tensor import SgdState

LOSSES = ("log_rmse", "linear_rmse")


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str
    out_dir: str
    seed: int
    input_variant: str = "single_image"
    loss: str = "log_rmse"
    base_lr: float = 1e-3
    decay_factor: float = 0.5
    decay_every: int = 20
    epochs: int = 30
    batch_size: int = 4
    momentum: float = 0.0
    # training-gradient gain: the optimizer follows loss_scale/2 * grad(L^2)
    # while reported losses stay per-pixel RMSE; linear-loss gradients are
    # further divided by max_range^2 so both losses share one gain scale
    loss_scale: float = 160.0
    encoder_channels: tuple = (32, 64, 128, 256, 256)
    decoder_channels: tuple = (128, 64, 1)
    min_depth: float = 0.5
    eval_roi: str = "full"

    def __post_init__(self):
        if self.loss not in LOSSES:
            raise ValueError(f"unknown loss {self.loss!r}")

    def network_spec(self) -> NetworkSpec:
        return NetworkSpec(input_variant=self.input_variant,
                           encoder_channels=self.encoder_channels,
                           decoder_channels=self.decoder_channels)


def config_hash(config) -> str:
    """Short stable digest of a config dataclass, embedded in artifacts.

    Filesystem locations are excluded: the same experiment written elsewhere
    is still the same experiment (dataset identity travels separately via the
    manifest's own seed and hash).
    """
    parts = [f"{f.name}={getattr(config, f.name)!r}" for f in fields(config)
             if f.name not in ("dataset", "out_dir", "config_hash")]
    return hashlib.sha256(";".join(sorted(parts)).encode()).hexdigest()[:12]


@dataclass
class EpochRecord:
    epoch: int
    lr: float
    mean_loss: float
    wall_time: float


@dataclass
class TrainingLog:
    records: list = field(default_factory=list)
    checkpoint_path: str = ""
    seed: int = 0
    config_digest: str = ""

    def append(self, rec: EpochRecord):
        if self.records and rec.epoch <= self.records[-1].epoch:
            raise ValueError("epochs must be strictly increasing")
        if not np.isfinite(rec.mean_loss):
            raise ValueError("loss must be finite")
        self.records.append(rec)

    def write(self, path):
        lines = ["depthflow-training-log v1",
                 f"# seed {self.seed}",
                 f"# config_hash {self.config_digest}"]
        for r in self.records:
            lines.append(f"epoch {r.epoch} lr {r.lr!r} loss {r.mean_loss!r} "
                         f"wall {r.wall_time:.3f}")
        lines.append(f"checkpoint {self.checkpoint_path}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass
class _FrameSample:
    net_input: np.ndarray  # (c, H, W) float32, padded
    gt_values: np.ndarray  # (H, W) padded
    mask: np.ndarray  # (H, W) bool, padded False


def _load_samples(root, manifest, variant, min_depth, channel_means):
    root = Path(root)
    samples = []
    for rec in manifest.frames:
        rgb = load_rgb8(root / rec.image_path)  # (H, W, 3)
        img = rgb.transpose(2, 0, 1)[None, ...]
        flow = None
        if variant == "image_plus_flow":
            fpath = flow_path(root, rec.index)
            if not fpath.exists():
                raise DatasetError(
                    f"{fpath} missing; run the flow command before training "
                    "the image_plus_flow variant")
            flow = read_flo(fpath)
        net_in = assemble_input(img, flow, variant, channel_means)
        depth = load_depth(root, rec, manifest)
        mask = depth.valid & (depth.values >= min_depth) & \
            (depth.values <= manifest.max_range)
        net_in, _ = pad_to_16(net_in)
        gt, _ = pad_to_16(depth.values[None, None])
        mpad, _ = pad_to_16(mask[None, None])  # zero padding = invalid
        samples.append(_FrameSample(net_input=net_in[0].astype(np.float32),
                                    gt_values=gt[0, 0], mask=mpad[0, 0]))
    return samples


_LOSS_FNS = {"log_rmse": loss_log_rmse, "linear_rmse": loss_linear_rmse}


def train(config: ExperimentConfig, n_steps: int | None = None):
    """Run training; returns (checkpoint path, TrainingLog).

    n_steps caps the total number of SGD steps (for fixed-budget runs);
    otherwise config.epochs epochs are run. Raises DivergenceError on a
    non-finite loss.
    """
    manifest = read_manifest(config.dataset)
    samples = _load_samples(config.dataset, manifest, config.input_variant,
                            config.min_depth, manifest.channel_means)
    if not any(s.mask.any() for s in samples):
        raise DatasetError("no valid ground-truth pixels in the dataset")

    valid_logs = np.concatenate(
        [np.log(s.gt_values[s.mask]) for s in samples if s.mask.any()])
    head_bias = float(valid_logs.mean())

    spec = config.network_spec()
    params, net = build_network(spec, config.seed, dtype=np.float32,
                                head_bias=head_bias)
    loss_fn = _LOSS_FNS[config.loss]
    digest = config_hash(config)
    log = TrainingLog(seed=config.seed, config_digest=digest)
    sgd_state = SgdState()

    gain_divisor = manifest.max_range ** 2 if config.loss == "linear_rmse" else 1.0

    rng = np.random.default_rng(config.seed)
    n = len(samples)
    steps_done = 0
    epoch = 0
    start = time.perf_counter()
    while True:
        if n_steps is None and epoch >= config.epochs:
            break
        if n_steps is not None and steps_done >= n_steps:
            break
        lr = lr_schedule(epoch, config.base_lr, config.decay_factor,
                         config.decay_every)
        order = rng.permutation(n)
        losses = []
        for b0 in range(0, n, config.batch_size):
            if n_steps is not None and steps_done >= n_steps:
                break
            idx = order[b0:b0 + config.batch_size]
            batch = [samples[i] for i in idx]
            x = np.stack([s.net_input for s in batch])
            gt = np.stack([s.gt_values for s in batch])[:, None]
            mask = np.stack([s.mask for s in batch])[:, None]
            if not mask.any():
                continue
            with np.errstate(over="ignore", invalid="ignore"):
                pred = net.forward(x)
                loss, dlog = loss_fn(pred.log_depth.astype(np.float64), gt, mask)
            if not np.isfinite(loss):
                raise DivergenceError(
                    f"non-finite loss at epoch {epoch}, step {steps_done}")
            gain = config.loss_scale * loss / gain_divisor
            net.backward((gain * dlog).astype(np.float32))
            sgd_step(params, lr, momentum=config.momentum, state=sgd_state)
            losses.append(loss)
            steps_done += 1
        if losses:
            log.append(EpochRecord(epoch=epoch, lr=lr,
                                   mean_loss=float(np.mean(losses)),
                                   wall_time=time.perf_counter() - start))
        epoch += 1

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ckpt_path = out_dir / "model.ckpt"
    extras = {
        "seed": config.seed,
        "cfg": digest,
        "max_range": repr(float(manifest.max_range)),
        "min_depth": repr(float(config.min_depth)),
        "means": ",".join(repr(float(m)) for m in manifest.channel_means),
    }
    save_checkpoint(ckpt_path, params, encode_descriptor(spec, extras))
    log.checkpoint_path = str(ckpt_path)
    log.write(out_dir / "training_log.txt")
    return ckpt_path, log


@dataclass
class LoadedModel:
    net: DepthNet
    spec: NetworkSpec
    channel_means: tuple
    max_range: float
    min_depth: float
    extras: dict


def load_model(ckpt_path) -> LoadedModel:
    params, descriptor = load_checkpoint(ckpt_path)
    spec, extras = parse_descriptor(descriptor)
    means = tuple(float(x) for x in extras.get("means", "0,0,0").split(","))
    return LoadedModel(net=DepthNet(spec, params), spec=spec,
                       channel_means=means,
                       max_range=float(extras.get("max_range", 40.0)),
                       min_depth=float(extras.get("min_depth", 0.5)),
                       extras=extras)


def predict_dataset(model: LoadedModel, root, batch_size: int = 4):
    """Metric-depth predictions for every frame of a dataset, in order."""
    manifest = read_manifest(root)
    samples = _load_samples(root, manifest, model.spec.input_variant,
                            min_depth=0.0, channel_means=model.channel_means)
    h, w = manifest.intrinsics.height, manifest.intrinsics.width
    _, crop = pad_to_16(np.zeros((1, 1, h, w)))
    preds = []
    for b0 in range(0, len(samples), batch_size):
        x = np.stack([s.net_input for s in samples[b0:b0 + batch_size]])
        log_depth = model.net.forward(x).log_depth.astype(np.float64)
        metric = np.exp(crop_prediction(log_depth, crop))
        preds.extend(metric[i, 0] for i in range(metric.shape[0]))
    return preds


def evaluate_checkpoint(ckpt_path, dataset_root, roi: str = "full",
                        min_depth: float | None = None,
                        max_range: float | None = None,
                        batch_size: int = 4) -> MetricsReport:
    model = load_model(ckpt_path)
    manifest = read_manifest(dataset_root)
    preds = predict_dataset(model, dataset_root, batch_size)
    gts = [load_depth(dataset_root, rec, manifest) for rec in manifest.frames]
    cfg = EvalConfig(
        min_depth=model.min_depth if min_depth is None else min_depth,
        max_range=manifest.max_range if max_range is None else max_range,
        roi=roi)
    return evaluate(preds, gts, cfg)


def identity_report(dataset_root, roi: str = "full",
                    min_depth: float = 0.5) -> MetricsReport:
    """Evaluate the ground truth against itself (debug path)."""
    manifest = read_manifest(dataset_root)
    gts = [load_depth(dataset_root, rec, manifest) for rec in manifest.frames]
    cfg = EvalConfig(min_depth=min_depth, max_range=manifest.max_range, roi=roi)
    return evaluate([g.values for g in gts], gts, cfg)
