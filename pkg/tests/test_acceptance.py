"""Acceptance suite: one test per criterion, each printing its measured
values. Run with `pytest tests/test_acceptance.py -v -s` for the per-criterion
pass/fail lines; the directional criteria (6-8) train real models and take
10-20 minutes total.

Criteria:
  1  conv shape law + network resolution restoration        (< 10 s)
  2  gradient suite, ops and end-to-end, both losses        (< 2 min)
  3  conv/deconv adjoint identity, 50 cases                 (< 1e-10)
  4  metric oracles on 100 random pairs                     (< 1e-12)
  5  overfit check: 500 steps at lr 1e-3 -> log RMSE < 0.05 (< 5 min)
  6  image+flow beats single image on eval log RMSE, 2/3 seeds (40 m regime)
  7  log-RMSE training beats linear-RMSE on delta_1, 2/3 seeds (200 m regime,
     the regime the compared result was produced in)
  8  blur radius 10 and darkening each strictly reduce delta_1
  9  format round-trips: .flo, checkpoint, 16-bit depth PNG
  10 flow sanity: zero motion and known translation
  11 renderer oracles and depth-convention identities
"""

import io
import math
import time
from dataclasses import dataclass

import numpy as np
import pytest

from depthflow.checkpoint import load_checkpoint, save_checkpoint
from depthflow.dataset import (
    GenerateConfig,
    compute_flows,
    generate_dataset,
    split_dataset,
)
from depthflow.flow import FlowField, estimate_flow, read_flo, write_flo
from depthflow.metrics import (
    THRESHOLDS,
    EvalPair,
    loss_linear_rmse,
    loss_log_rmse,
    metric_rmse_linear,
    metric_rmse_log,
    metric_scale_inv_log_mse,
    metric_threshold,
)
from depthflow.network import (
    DepthNet,
    NetworkSpec,
    build_network,
    encode_descriptor,
    pad_to_16,
)
from depthflow.ops import (
    conv2d_backward,
    conv2d_forward,
    deconv2d_backward,
    deconv2d_forward,
    relu,
    relu_backward,
)
from depthflow.perturb import PerturbSpec, perturb_dataset
from depthflow.scene import (
    CameraPose,
    DepthMap,
    Intrinsics,
    SceneConfig,
    Sphere,
    decode_depth,
    encode_depth,
    planar_to_spherical,
    render,
    spherical_to_planar,
    toy_calibration_scene,
)
from depthflow.tensor import ConvSpec
from depthflow.training import ExperimentConfig, evaluate_checkpoint, train

FD_STEP = 1e-5
KINK_ZONE = 1e-3


# ---------------------------------------------------------------- criterion 1

def test_criterion_1_shape_law():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 200:
        k_h, k_w = int(rng.integers(1, 8)), int(rng.integers(1, 8))
        s = int(rng.integers(1, 5))
        p_h, p_w = int(rng.integers(0, 4)), int(rng.integers(0, 4))
        h, w = int(rng.integers(1, 24)), int(rng.integers(1, 24))
        if h + 2 * p_h < k_h or w + 2 * p_w < k_w:
            continue
        spec = ConvSpec(k_h=k_h, k_w=k_w, s=s, p_h=p_h, p_w=p_w, c_in=1, c_out=1)
        out = conv2d_forward(rng.normal(size=(1, 1, h, w)),
                             rng.normal(size=(1, 1, k_h, k_w)), np.zeros(1), spec)
        assert out.shape[2] == (h + 2 * p_h - k_h) // s + 1
        assert out.shape[3] == (w + 2 * p_w - k_w) // s + 1
        checked += 1

    spec = NetworkSpec(encoder_channels=(3, 4, 5, 5, 5), decoder_channels=(4, 3, 1))
    _, net = build_network(spec, seed=0, dtype=np.float64)
    for h, w in ((96, 320), (37, 50), (16, 16), (41, 100)):
        x, rec = pad_to_16(rng.normal(size=(1, 3, h, w)))
        ph, pw = x.shape[2], x.shape[3]
        out = x
        for layer in net.layers[:5]:
            out = layer.forward(out)
        assert out.shape[2:] == (ph // 16, pw // 16)
        pred = net.forward(x)
        assert pred.log_depth.shape[2:] == (ph, pw)
    elapsed = time.perf_counter() - start
    print(f"\n[criterion 1] 200 conv specs + resolution restoration ok "
          f"in {elapsed:.2f}s (< 10 s)")
    assert elapsed < 10.0


# ---------------------------------------------------------------- criterion 2

def central_fd(loss_fn, arr, step=FD_STEP):
    g = np.zeros_like(arr, dtype=float)
    flat, gf = arr.reshape(-1), g.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + step
        lp = loss_fn()
        flat[i] = orig - step
        lm = loss_fn()
        flat[i] = orig
        gf[i] = (lp - lm) / (2 * step)
    return g


def max_rel_err(analytic, fd, floor=1e-8):
    denom = np.maximum(np.abs(fd), floor)
    return float(np.max(np.abs(analytic - fd) / denom))


def relu_masks(net, x):
    net.forward(x)
    return [layer._pre > 0 for layer in net.layers if layer.activation]


# Central differences at step 1e-5 carry ~4e-11 absolute noise per unit of
# loss magnitude through this network (measured), so relative error is
# meaningless for coordinates whose gradient sits below that scale. The
# denominator floor (scaled by the loss value) holds such coordinates to
# floor x tolerance *absolute* agreement instead, which is stricter there.
E2E_FLOOR = 1e-4


def end_to_end_fd(loss_name, seed):
    """FD over every network parameter, excluding coordinates whose
    perturbation flips a ReLU activation sign (the kink exclusion)."""
    rng = np.random.default_rng(seed)
    spec = NetworkSpec(input_variant="image_plus_flow",
                       encoder_channels=(2, 3, 4, 3, 4),
                       decoder_channels=(3, 2, 1))
    params, net = build_network(spec, seed=seed, dtype=np.float64)
    x = rng.normal(size=(1, 5, 16, 16))
    gt = rng.uniform(1.0, 30.0, size=(1, 1, 16, 16))
    mask = rng.uniform(size=(1, 1, 16, 16)) > 0.2
    loss_fn = loss_log_rmse if loss_name == "log_rmse" else loss_linear_rmse

    def forward_loss():
        return loss_fn(net.forward(x).log_depth, gt, mask)[0]

    loss, dlog = loss_fn(net.forward(x).log_depth, gt, mask)
    params.zero_grads()
    net.forward(x)
    net.backward(dlog)
    analytic = {name: t.grad.copy() for name, t in params.items()}

    worst = 0.0
    excluded = 0
    total = 0
    for name, t in params.items():
        flat = t.data.reshape(-1)
        gflat = analytic[name].reshape(-1)
        for i in range(flat.size):
            total += 1
            orig = flat[i]
            flat[i] = orig + FD_STEP
            masks_p = relu_masks(net, x)
            lp = forward_loss()
            flat[i] = orig - FD_STEP
            masks_m = relu_masks(net, x)
            lm = forward_loss()
            flat[i] = orig
            if any((mp != mm).any() for mp, mm in zip(masks_p, masks_m)):
                excluded += 1
                continue
            fd = (lp - lm) / (2 * FD_STEP)
            err = abs(gflat[i] - fd) / max(abs(fd), E2E_FLOOR * max(1.0, loss))
            worst = max(worst, err)
    return worst, excluded, total


def test_criterion_2_gradient_suite():
    start = time.perf_counter()
    rng = np.random.default_rng(7)

    spec = ConvSpec(k_h=3, k_w=3, s=2, p_h=1, p_w=1, c_in=2, c_out=3)
    x = rng.normal(size=(1, 2, 6, 6))
    w = rng.normal(size=(3, 2, 3, 3))
    b = rng.normal(size=3)
    proj = rng.normal(size=conv2d_forward(x, w, b, spec).shape)
    dx, dw, db = conv2d_backward(proj, x, w, spec)
    conv_err = max(
        max_rel_err(dx, central_fd(lambda: float(np.sum(conv2d_forward(x, w, b, spec) * proj)), x)),
        max_rel_err(dw, central_fd(lambda: float(np.sum(conv2d_forward(x, w, b, spec) * proj)), w)),
        max_rel_err(db, central_fd(lambda: float(np.sum(conv2d_forward(x, w, b, spec) * proj)), b)))

    dspec = ConvSpec(k_h=4, k_w=4, s=2, p_h=1, p_w=1, c_in=2, c_out=2)
    xd = rng.normal(size=(1, 2, 3, 3))
    wd = rng.normal(size=(2, 2, 4, 4))
    bd = rng.normal(size=2)
    projd = rng.normal(size=(1, 2, 6, 6))
    dxd, dwd, dbd = deconv2d_backward(projd, xd, wd, dspec)
    deconv_err = max(
        max_rel_err(dxd, central_fd(lambda: float(np.sum(deconv2d_forward(xd, wd, bd, dspec) * projd)), xd)),
        max_rel_err(dwd, central_fd(lambda: float(np.sum(deconv2d_forward(xd, wd, bd, dspec) * projd)), wd)),
        max_rel_err(dbd, central_fd(lambda: float(np.sum(deconv2d_forward(xd, wd, bd, dspec) * projd)), bd)))

    xr = rng.normal(size=(5, 5))
    xr[np.abs(xr) < KINK_ZONE] = 0.5
    projr = rng.normal(size=(5, 5))
    relu_err = max_rel_err(relu_backward(projr, xr),
                           central_fd(lambda: float(np.sum(relu(xr) * projr)), xr))

    e2e = {}
    for loss_name in ("log_rmse", "linear_rmse"):
        worst, excluded, total = end_to_end_fd(loss_name, seed=3)
        e2e[loss_name] = worst
        print(f"\n[criterion 2] end-to-end {loss_name}: max rel err "
              f"{worst:.3e} ({excluded}/{total} kink-excluded)")
        assert worst < 1e-6

    elapsed = time.perf_counter() - start
    print(f"[criterion 2] conv {conv_err:.3e}, deconv {deconv_err:.3e}, "
          f"relu {relu_err:.3e}; {elapsed:.1f}s (< 120 s)")
    assert conv_err < 1e-6 and deconv_err < 1e-6 and relu_err < 1e-6
    assert elapsed < 120.0


# ---------------------------------------------------------------- criterion 3

def test_criterion_3_adjoint_identity():
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(50):
        s = int(rng.choice([2, 4]))
        c_a = int(rng.integers(1, 4))
        c_b = int(rng.integers(1, 4))
        h = int(rng.integers(2, 5))
        k, p = 2 * s, s // 2
        dec = ConvSpec(k_h=k, k_w=k, s=s, p_h=p, p_w=p, c_in=c_a, c_out=c_b)
        conv = ConvSpec(k_h=k, k_w=k, s=s, p_h=p, p_w=p, c_in=c_b, c_out=c_a)
        w = rng.normal(size=(c_a, c_b, k, k))
        x = rng.normal(size=(1, c_b, s * h, s * h))
        y = rng.normal(size=(1, c_a, h, h))
        lhs = np.sum(conv2d_forward(x, w, np.zeros(c_a), conv) * y)
        rhs = np.sum(x * deconv2d_forward(y, w, np.zeros(c_b), dec))
        worst = max(worst, abs(lhs - rhs))
    print(f"\n[criterion 3] adjoint identity worst |<conv x, y> - <x, deconv y>| "
          f"= {worst:.3e} (< 1e-10)")
    assert worst < 1e-10


# ---------------------------------------------------------------- criterion 4

def test_criterion_4_metric_oracles():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(5, 60))
        g = rng.uniform(0.6, 35.0, size=n)
        y = g * np.exp(rng.normal(scale=0.35, size=n))
        pair = EvalPair(pred=y, gt=g, mask=np.ones(n, dtype=bool))

        deltas = []
        for thr in THRESHOLDS:
            count = sum(1 for yi, gi in zip(y, g) if max(yi / gi, gi / yi) < thr)
            worst = max(worst, abs(metric_threshold(pair, thr) - count / n))
            deltas.append(metric_threshold(pair, thr))
        assert deltas[0] <= deltas[1] <= deltas[2]

        worst = max(worst, abs(metric_rmse_linear(pair) - math.sqrt(
            sum((yi - gi) ** 2 for yi, gi in zip(y, g)) / n)))
        worst = max(worst, abs(metric_rmse_log(pair) - math.sqrt(
            sum((math.log(yi) - math.log(gi)) ** 2 for yi, gi in zip(y, g)) / n)))
        ds = [math.log(yi) - math.log(gi) for yi, gi in zip(y, g)]
        mean = sum(ds) / n
        worst = max(worst, abs(metric_scale_inv_log_mse(pair)
                               - (sum(d * d for d in ds) / n - mean * mean)))

        scaled = EvalPair(pred=2.7 * y, gt=g, mask=pair.mask)
        worst = max(worst, abs(metric_scale_inv_log_mse(pair)
                               - metric_scale_inv_log_mse(scaled)))
    print(f"\n[criterion 4] metric oracle worst abs deviation = {worst:.3e} (< 1e-12)")
    assert worst < 1e-12


# ---------------------------------------------------------------- criterion 5

OVERFIT_FIXTURE = GenerateConfig(seed=100, n_frames=8, width=64, height=32,
                                 trajectory_mode="straight", max_speed=2.0,
                                 scene=SceneConfig(sparse_count=(5, 8)))
OVERFIT_NET = dict(encoder_channels=(24, 48, 96, 96, 96),
                   decoder_channels=(48, 24, 1))


def test_criterion_5_overfit(tmp_path):
    start = time.perf_counter()
    data = tmp_path / "fixture"
    generate_dataset(data, OVERFIT_FIXTURE)
    compute_flows(data)
    cfg = ExperimentConfig(dataset=str(data), out_dir=str(tmp_path / "run"),
                           seed=1, input_variant="image_plus_flow",
                           loss="log_rmse", base_lr=1e-3, momentum=0.9,
                           loss_scale=160.0, batch_size=8, decay_every=1000,
                           epochs=10 ** 9, **OVERFIT_NET)
    _, log = train(cfg, n_steps=500)
    final = log.records[-1].mean_loss
    elapsed = time.perf_counter() - start
    print(f"\n[criterion 5] overfit: final training log RMSE {final:.4f} "
          f"(< 0.05) in {elapsed:.0f}s (< 300 s)")
    assert final < 0.05
    assert elapsed < 300.0


# ------------------------------------------------------- criteria 6, 7 and 8

# Comparison protocols (calibrated before freezing): one 600-frame textured
# urban-dense sequence per seed with translation-dominant 6-DoF motion and
# varying altitude, split 500 train / 100 held-out eval (the same-world
# train/test split the source experiments use). Identical budget per model:
# 20 epochs, batch 4, lr 1e-3, momentum 0.8, gradient gain 160. The variant
# comparison runs the 40 m regime; the loss comparison re-collects depth up
# to 200 m and re-trains the flow architecture, which is the regime the
# compared result was produced in (at 40 m the depth spread is too narrow
# for the two losses to separate).
COMPARISON_SEEDS = (11, 12, 13)
COMPARISON_NET = dict(encoder_channels=(16, 32, 64, 64, 64),
                      decoder_channels=(32, 16, 1))
COMPARISON_GEN = dict(n_frames=600, width=64, height=32,
                      trajectory_mode="roam", rotation_scale=0.25,
                      difficulty="urban-dense",
                      scene=SceneConfig(haze_probability=0.0,
                                        motion_blur_probability=0.0))
LONG_RANGE_GEN = dict(COMPARISON_GEN,
                      max_range=200.0,
                      scene=SceneConfig(haze_probability=0.0,
                                        motion_blur_probability=0.0,
                                        x_range=(4.0, 180.0),
                                        y_range=(-60.0, 60.0)))
TRAIN_BUDGET = dict(epochs=20, batch_size=4, momentum=0.8, loss_scale=160.0,
                    decay_every=100)


@dataclass
class ComparisonRuns:
    reports: dict  # (seed, variant, loss) -> MetricsReport
    checkpoints: dict  # (seed, variant, loss) -> path
    eval_dirs: dict  # seed -> path


def _build_runs(root, gen_config, model_list):
    reports, checkpoints, eval_dirs = {}, {}, {}
    for seed in COMPARISON_SEEDS:
        full = root / f"full{seed}"
        train_dir = root / f"train{seed}"
        eval_dir = root / f"eval{seed}"
        generate_dataset(full, GenerateConfig(seed=seed, **gen_config))
        compute_flows(full)
        split_dataset(full, train_dir, eval_dir, 500)
        eval_dirs[seed] = eval_dir
        for variant, loss in model_list:
            out = root / f"model_{seed}_{variant}_{loss}"
            cfg = ExperimentConfig(dataset=str(train_dir), out_dir=str(out),
                                   seed=seed, input_variant=variant, loss=loss,
                                   **TRAIN_BUDGET, **COMPARISON_NET)
            ckpt, _ = train(cfg)
            checkpoints[(seed, variant, loss)] = ckpt
            reports[(seed, variant, loss)] = evaluate_checkpoint(ckpt, eval_dir)
    return ComparisonRuns(reports=reports, checkpoints=checkpoints,
                          eval_dirs=eval_dirs)


@pytest.fixture(scope="module")
def comparison_runs(tmp_path_factory):
    return _build_runs(tmp_path_factory.mktemp("comparison"), COMPARISON_GEN,
                       (("image_plus_flow", "log_rmse"),
                        ("single_image", "log_rmse")))


@pytest.fixture(scope="module")
def long_range_runs(tmp_path_factory):
    return _build_runs(tmp_path_factory.mktemp("longrange"), LONG_RANGE_GEN,
                       (("image_plus_flow", "log_rmse"),
                        ("image_plus_flow", "linear_rmse")))


def test_criterion_6_flow_variant_direction(comparison_runs):
    wins = 0
    lines = []
    for seed in COMPARISON_SEEDS:
        flow_rmse = comparison_runs.reports[(seed, "image_plus_flow", "log_rmse")].rmse_log
        single_rmse = comparison_runs.reports[(seed, "single_image", "log_rmse")].rmse_log
        win = flow_rmse <= single_rmse
        wins += win
        lines.append(f"seed {seed}: flow {flow_rmse:.4f} vs single "
                     f"{single_rmse:.4f} -> {'win' if win else 'loss'}")
    print("\n[criterion 6] " + "; ".join(lines) + f"; {wins}/3 (need >= 2)")
    assert wins >= 2


def test_criterion_7_loss_direction(long_range_runs):
    wins = 0
    lines = []
    for seed in COMPARISON_SEEDS:
        log_d1 = long_range_runs.reports[(seed, "image_plus_flow", "log_rmse")].delta_1
        lin_d1 = long_range_runs.reports[(seed, "image_plus_flow", "linear_rmse")].delta_1
        win = log_d1 > lin_d1
        wins += win
        lines.append(f"seed {seed}: log {log_d1:.4f} vs linear {lin_d1:.4f} "
                     f"-> {'win' if win else 'loss'}")
    print("\n[criterion 7] " + "; ".join(lines) + f"; {wins}/3 (need >= 2)")
    assert wins >= 2


def test_criterion_8_robustness_direction(comparison_runs, tmp_path):
    seed = COMPARISON_SEEDS[0]
    ckpt = comparison_runs.checkpoints[(seed, "image_plus_flow", "log_rmse")]
    eval_dir = comparison_runs.eval_dirs[seed]
    deltas = {}
    for name, spec in (("plain", PerturbSpec(kind="none")),
                       ("blur10", PerturbSpec(kind="blur", blur_radius=10.0)),
                       ("darkened", PerturbSpec(kind="darken",
                                                max_contrast=0.4, gamma=1.5))):
        column = tmp_path / name
        perturb_dataset(eval_dir, column, spec)
        deltas[name] = evaluate_checkpoint(ckpt, column).delta_1
    print(f"\n[criterion 8] delta_1 plain {deltas['plain']:.4f}, "
          f"blur10 {deltas['blur10']:.4f}, darkened {deltas['darkened']:.4f}")
    assert deltas["blur10"] < deltas["plain"]
    assert deltas["darkened"] < deltas["plain"]


# ---------------------------------------------------------------- criterion 9

def test_criterion_9_format_round_trips(tmp_path):
    rng = np.random.default_rng(77)

    f = FlowField(rng.normal(size=(9, 7)).astype(np.float32),
                  rng.normal(size=(9, 7)).astype(np.float32))
    buf = io.BytesIO()
    write_flo(f, buf)
    buf2 = io.BytesIO()
    write_flo(read_flo(io.BytesIO(buf.getvalue())), buf2)
    flo_ok = buf.getvalue() == buf2.getvalue()

    spec = NetworkSpec(encoder_channels=(4, 6, 8, 8, 8), decoder_channels=(6, 4, 1))
    params, net = build_network(spec, seed=5)
    x = rng.normal(size=(1, 3, 32, 32)).astype(np.float32)
    want = net.forward(x).log_depth
    save_checkpoint(tmp_path / "m.ckpt", params, encode_descriptor(spec))
    loaded, _ = load_checkpoint(tmp_path / "m.ckpt")
    got = DepthNet(spec, loaded).forward(x).log_depth
    ckpt_ok = got.tobytes() == want.tobytes()

    scale = 40.0 / 65535
    vals = rng.uniform(0.5, 40.0, size=(20, 30))
    valid = rng.uniform(size=vals.shape) > 0.15
    d = DepthMap(values=np.where(valid, vals, 0.0), convention="spherical",
                 max_range=40.0, valid=valid)
    back = decode_depth(encode_depth(d, scale), scale, 40.0)
    png_err = float(np.max(np.abs(back.values[valid] - vals[valid])))

    print(f"\n[criterion 9] .flo bit-exact: {flo_ok}; checkpoint predictions "
          f"bit-identical: {ckpt_ok}; depth png max err {png_err:.3e} "
          f"(<= {scale / 2:.3e})")
    assert flo_ok and ckpt_ok
    assert png_err <= scale / 2 + 1e-12


# --------------------------------------------------------------- criterion 10

def test_criterion_10_flow_sanity():
    rng = np.random.default_rng(3)
    size = 64
    ys, xs = np.mgrid[0:size, 0:size]
    img = np.zeros((size, size))
    for _ in range(12):
        kx, ky = rng.integers(1, 12, size=2)
        img += rng.uniform(0.3, 1.0) * np.sin(
            2 * np.pi * (kx * xs + ky * ys) / size + rng.uniform(0, 2 * np.pi))
    img = (img - img.min()) / (img.max() - img.min())

    still = estimate_flow(img, img)
    zero_mag = float(np.mean(np.hypot(still.u, still.v)))

    moved = estimate_flow(img, np.roll(img, 3, axis=1))
    epe = float(np.mean(np.hypot(moved.u - 3.0, moved.v)))
    print(f"\n[criterion 10] zero-motion mean |flow| {zero_mag:.4f} px (< 0.05); "
          f"3-px translation mean EPE {epe:.3f} px (< 0.5)")
    assert zero_mag < 0.05
    assert epe < 0.5


# --------------------------------------------------------------- criterion 11

def test_criterion_11_renderer_oracles():
    intr = Intrinsics.default(64, 48)
    pose = CameraPose(position=np.array([0.0, 0.0, 2.0]), roll=0.0, pitch=0.0,
                      yaw=0.0, intrinsics=intr)

    scene, wall_pose = toy_calibration_scene(10.0)
    _, wall_depth = render(scene, wall_pose, max_range=40.0)
    w_intr = wall_pose.intrinsics
    _, _, factor = w_intr.ray_factors()
    wall_err = float(np.max(np.abs(
        wall_depth.values[wall_depth.valid] - 10.0 * factor[wall_depth.valid])))

    center = np.array([9.0, 0.0, 2.0])
    sphere_scene, _ = toy_calibration_scene(10.0)
    sphere_scene.primitives = [Sphere(center=center, radius=1.4,
                                      albedo=np.array([0.8, 0.2, 0.2]))]
    _, sd = render(sphere_scene, pose, max_range=40.0)
    a, b, _ = intr.ray_factors()
    fwd, right, down = pose.basis()
    dirs = fwd + a[..., None] * right + b[..., None] * down
    dirs /= np.linalg.norm(dirs, axis=2, keepdims=True)
    pts = pose.position + dirs * sd.values[..., None]
    sphere_err = float(np.max(np.abs(
        np.linalg.norm(pts[sd.valid] - center, axis=1) - 1.4)))

    rng = np.random.default_rng(8)
    vals = rng.uniform(1.0, 35.0, size=(48, 64))
    dm = DepthMap(values=vals, convention="spherical", max_range=40.0,
                  valid=np.ones_like(vals, dtype=bool))
    planar = spherical_to_planar(dm, intr)
    geq = bool(np.all(vals >= planar.values))
    round_err = float(np.max(np.abs(
        planar_to_spherical(planar, intr).values - vals)))

    print(f"\n[criterion 11] wall depth err {wall_err:.2e} (< 1e-9); sphere "
          f"residual {sphere_err:.2e} (< 1e-9); spherical>=planar {geq}; "
          f"round trip {round_err:.2e} (< 1e-12)")
    assert wall_err < 1e-9
    assert sphere_err < 1e-9
    assert geq
    assert round_err < 1e-12
