"""Command-line surface: generate, flow, train, eval, infer, perturb,
robustness.

Every flag can also come from a `key value` UTF-8 config file passed with
--config (command-line flags win). Exit codes: 0 success, 1 usage error,
2 data error, 3 numerical divergence.
"""

from __future__ import annotations

from pathlib import Path

import click
import numpy as np

from .checkpoint import CheckpointError
from .dataset import (
    DatasetError,
    GenerateConfig,
    compute_flows,
    generate_dataset,
    load_rgb8,
    read_manifest,
    save_gray16,
    save_rgb8,
)
from .flow import FlowFileError, FlowParams, estimate_flow, to_grayscale
from .metrics import REPORT_KEYS, write_report
from .network import crop_prediction, pad_to_16, assemble_input
from .perturb import PerturbSpec, perturb_dataset
from .scene import GRAY16_MAX, SceneConfig
from .training import (
    DivergenceError,
    ExperimentConfig,
    config_hash,
    evaluate_checkpoint,
    identity_report,
    load_model,
    train,
)


def _config_file_callback(ctx, _param, value):
    if value:
        defaults = {}
        for line in Path(value).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition(" ")
            defaults[key.replace("-", "_")] = val.strip()
        ctx.default_map = {**defaults, **(ctx.default_map or {})}
    return value


def config_file_option(fn):
    return click.option("--config", type=click.Path(exists=True, dir_okay=False),
                        is_eager=True, expose_value=False,
                        callback=_config_file_callback,
                        help="key-value defaults file; flags override")(fn)


@click.group()
def cli():
    """Monocular depth estimation pipeline: synthetic data, optical flow,
    training, evaluation, and robustness sweeps."""


@cli.command()
@config_file_option
@click.option("--out", required=True, type=click.Path())
@click.option("--seed", required=True, type=int)
@click.option("--frames", default=50, type=int, show_default=True)
@click.option("--difficulty", default="sparse",
              type=click.Choice(["sparse", "urban-dense"]), show_default=True)
@click.option("--max-range", default="40", type=click.Choice(["40", "200"]),
              show_default=True)
@click.option("--width", default=320, type=int, show_default=True)
@click.option("--height", default=96, type=int, show_default=True)
@click.option("--trajectory", default="roam",
              type=click.Choice(["roam", "straight"]), show_default=True)
@click.option("--max-speed", default=8.0, type=float, show_default=True)
@click.option("--min-primitives", default=5, type=int, show_default=True)
@click.option("--max-primitives", default=20, type=int, show_default=True)
def generate(out, seed, frames, difficulty, max_range, width, height,
             trajectory, max_speed, min_primitives, max_primitives):
    """Render a synthetic image+depth sequence into a dataset directory."""
    cfg = GenerateConfig(seed=seed, n_frames=frames, difficulty=difficulty,
                         max_range=float(max_range), width=width, height=height,
                         trajectory_mode=trajectory, max_speed=max_speed,
                         scene=SceneConfig(sparse_count=(min_primitives,
                                                         max_primitives)))
    cfg = GenerateConfig(**{**cfg.__dict__, "config_hash": config_hash(cfg)})
    manifest = generate_dataset(out, cfg)
    click.echo(f"wrote {len(manifest.frames)} frames to {out} "
               f"(seed {seed}, max_range {max_range} m, cfg {cfg.config_hash})")


@cli.command()
@config_file_option
@click.option("--dataset", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--levels", default=4, type=int, show_default=True)
@click.option("--iterations", default=100, type=int, show_default=True)
@click.option("--alpha", default=15.0, type=float, show_default=True)
def flow(dataset, levels, iterations, alpha):
    """Precompute optical flow files for every consecutive frame pair."""
    n = compute_flows(dataset, FlowParams(levels=levels, iterations=iterations,
                                          alpha=alpha))
    click.echo(f"wrote {n} flow files under {dataset}/flow")


def _parse_channels(text, what):
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError as e:
        raise click.UsageError(f"bad {what} channel list {text!r}") from e


@cli.command(name="train")
@config_file_option
@click.option("--dataset", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", required=True, type=click.Path())
@click.option("--seed", required=True, type=int)
@click.option("--variant", default="single_image",
              type=click.Choice(["single_image", "image_plus_flow"]),
              show_default=True)
@click.option("--loss", default="log_rmse",
              type=click.Choice(["log_rmse", "linear_rmse"]), show_default=True)
@click.option("--lr", default=1e-3, type=float, show_default=True)
@click.option("--decay-factor", default=0.5, type=float, show_default=True)
@click.option("--decay-every", default=20, type=int, show_default=True)
@click.option("--epochs", default=30, type=int, show_default=True)
@click.option("--batch-size", default=4, type=int, show_default=True)
@click.option("--momentum", default=0.0, type=float, show_default=True)
@click.option("--loss-scale", default=160.0, type=float, show_default=True)
@click.option("--enc", default="32,64,128,256,256", show_default=True,
              help="encoder channel list")
@click.option("--dec", default="128,64,1", show_default=True,
              help="decoder channel list")
@click.option("--min-depth", default=0.5, type=float, show_default=True)
@click.option("--steps", default=None, type=int,
              help="cap total SGD steps (overrides epochs)")
def train_cmd(dataset, out, seed, variant, loss, lr, decay_factor, decay_every,
              epochs, batch_size, momentum, loss_scale, enc, dec, min_depth,
              steps):
    """Train the encoder-decoder and write a checkpoint plus training log."""
    cfg = ExperimentConfig(
        dataset=dataset, out_dir=out, seed=seed, input_variant=variant,
        loss=loss, base_lr=lr, decay_factor=decay_factor,
        decay_every=decay_every, epochs=epochs, batch_size=batch_size,
        momentum=momentum, loss_scale=loss_scale,
        encoder_channels=_parse_channels(enc, "encoder"),
        decoder_channels=_parse_channels(dec, "decoder"),
        min_depth=min_depth)
    ckpt, log = train(cfg, n_steps=steps)
    first, last = log.records[0], log.records[-1]
    click.echo(f"checkpoint {ckpt}")
    click.echo(f"loss {first.mean_loss:.4f} -> {last.mean_loss:.4f} over "
               f"{len(log.records)} epochs ({last.wall_time:.1f}s)")


@cli.command(name="eval")
@config_file_option
@click.option("--checkpoint", type=click.Path(exists=True, dir_okay=False))
@click.option("--dataset", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", required=True, type=click.Path())
@click.option("--roi", default="full", type=click.Choice(["full", "bottom_half"]),
              show_default=True)
@click.option("--identity", is_flag=True,
              help="evaluate ground truth against itself (debug)")
def eval_cmd(checkpoint, dataset, out, roi, identity):
    """Evaluate a checkpoint over a dataset and write a metrics report."""
    manifest = read_manifest(dataset)
    header = {"dataset_seed": manifest.seed, "roi": roi}
    if identity:
        report = identity_report(dataset, roi=roi)
        header["checkpoint"] = "identity"
    else:
        if checkpoint is None:
            raise click.UsageError("--checkpoint is required unless --identity")
        report = evaluate_checkpoint(checkpoint, dataset, roi=roi)
        model = load_model(checkpoint)
        header.update({"checkpoint": checkpoint,
                       "model_seed": model.extras.get("seed", "-"),
                       "config_hash": model.extras.get("cfg", "-")})
    write_report(out, report, header)
    click.echo(f"report {out}")
    for key, value in report.as_dict().items():
        click.echo(f"  {key} {value:.3f}" if isinstance(value, float)
                   else f"  {key} {value}")


_COLORMAP = ((0.00, (0.90, 0.20, 0.08)),   # near: warm red
             (0.35, (0.98, 0.80, 0.20)),
             (0.70, (0.25, 0.75, 0.65)),
             (1.00, (0.15, 0.25, 0.80)))   # far: cool blue


def depth_colormap(values, max_range, valid):
    """Fixed warm-near / cool-far lookup; invalid pixels are black."""
    t = np.clip(values / max_range, 0.0, 1.0)
    rgb = np.zeros(values.shape + (3,))
    for (t0, c0), (t1, c1) in zip(_COLORMAP, _COLORMAP[1:]):
        m = (t >= t0) & (t <= t1)
        w = np.zeros_like(t)
        w[m] = (t[m] - t0) / (t1 - t0)
        for ch in range(3):
            rgb[..., ch][m] = c0[ch] * (1 - w[m]) + c1[ch] * w[m]
    rgb[~valid] = 0.0
    return rgb


@cli.command()
@config_file_option
@click.option("--checkpoint", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--image", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--prev", type=click.Path(exists=True, dir_okay=False),
              help="previous frame (required by the image_plus_flow variant)")
@click.option("--out-prefix", required=True, type=click.Path())
def infer(checkpoint, image, prev, out_prefix):
    """Predict depth for one image; writes <prefix>_depth16.png (metric,
    manifest-consistent scale) and <prefix>_preview.png (colormapped)."""
    model = load_model(checkpoint)
    rgb = load_rgb8(image)
    img = rgb.transpose(2, 0, 1)[None, ...]
    flow_field = None
    if model.spec.input_variant == "image_plus_flow":
        if prev is None:
            raise click.UsageError(
                "this checkpoint takes image+flow input; pass --prev")
        flow_field = estimate_flow(to_grayscale(load_rgb8(prev)),
                                   to_grayscale(rgb))
    elif prev is not None:
        raise click.UsageError("this checkpoint is single-image; drop --prev")
    x = assemble_input(img, flow_field, model.spec.input_variant,
                       model.channel_means)
    padded, crop = pad_to_16(x)
    log_depth = model.net.forward(padded.astype(np.float32)).log_depth
    metric = np.exp(crop_prediction(log_depth, crop)[0, 0].astype(np.float64))

    scale = model.max_range / GRAY16_MAX
    levels = np.clip(np.round(metric / scale), 1, GRAY16_MAX).astype(np.uint16)
    save_gray16(f"{out_prefix}_depth16.png", levels)
    preview = depth_colormap(metric, model.max_range,
                             np.ones(metric.shape, dtype=bool))
    save_rgb8(f"{out_prefix}_preview.png", preview)
    click.echo(f"wrote {out_prefix}_depth16.png and {out_prefix}_preview.png "
               f"(scale {scale!r} m/level)")


@cli.command()
@config_file_option
@click.option("--in", "src", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", required=True, type=click.Path())
@click.option("--kind", required=True, type=click.Choice(["none", "blur", "darken"]))
@click.option("--radius", default=3.0, type=float, show_default=True)
@click.option("--max-contrast", default=0.4, type=float, show_default=True)
@click.option("--gamma", default=1.5, type=float, show_default=True)
def perturb(src, out, kind, radius, max_contrast, gamma):
    """Write a perturbed copy of a dataset (GT untouched, flows recomputed)."""
    spec = PerturbSpec(kind=kind, blur_radius=radius,
                       max_contrast=max_contrast, gamma=gamma)
    n = perturb_dataset(src, out, spec)
    click.echo(f"perturbed {n} frames ({kind}) into {out}")


ROBUSTNESS_COLUMNS = (
    ("plain", PerturbSpec(kind="none")),
    ("blur3", PerturbSpec(kind="blur", blur_radius=3.0)),
    ("blur10", PerturbSpec(kind="blur", blur_radius=10.0)),
    ("darkened", PerturbSpec(kind="darken", max_contrast=0.4, gamma=1.5)),
)


@cli.command()
@config_file_option
@click.option("--checkpoint", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--dataset", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", required=True, type=click.Path())
@click.option("--workdir", required=True, type=click.Path(),
              help="where the perturbed dataset copies are written")
@click.option("--roi", default="full", type=click.Choice(["full", "bottom_half"]),
              show_default=True)
def robustness(checkpoint, dataset, out, workdir, roi):
    """Evaluate plain / blur3 / blur10 / darkened copies of a dataset and
    emit the combined 4-column table."""
    workdir = Path(workdir)
    reports = {}
    for name, spec in ROBUSTNESS_COLUMNS:
        column_dir = workdir / name
        perturb_dataset(dataset, column_dir, spec)
        reports[name] = evaluate_checkpoint(checkpoint, column_dir, roi=roi)
        write_report(column_dir / "report.txt", reports[name],
                     header={"column": name, "checkpoint": checkpoint})
        click.echo(f"  {name}: delta_1.25 {reports[name].delta_1:.3f}")

    model = load_model(checkpoint)
    names = [n for n, _ in ROBUSTNESS_COLUMNS]
    lines = [f"# robustness of {checkpoint} on {dataset} (roi {roi})",
             f"# seed {model.extras.get('seed', '-')} "
             f"config_hash {model.extras.get('cfg', '-')}",
             "metric " + " ".join(names)]
    for key in REPORT_KEYS:
        if key == "n_pixels":
            continue
        row = [key] + [f"{reports[n].as_dict()[key]:.3f}" for n in names]
        lines.append(" ".join(row))
    Path(out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    click.echo(f"table {out}")


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        return 1
    except (DatasetError, CheckpointError, FlowFileError) as e:
        click.echo(f"data error: {e}", err=True)
        return 2
    except DivergenceError as e:
        click.echo(f"divergence: {e}", err=True)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
