"""Training losses (log RMSE and linear RMSE, with gradients w.r.t. the
log-depth head) and the evaluation metric suite: threshold accuracies at
1.25 / 1.25^2 / 1.25^3, linear RMSE, log RMSE, and the scale-invariant log
MSE (the variance of per-pixel log-ratio errors).

Evaluation aggregates per-frame sufficient statistics (threshold counts,
sums of d and d^2, squared errors) whose merge is associative, so frames can
be processed in any order or in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

THRESHOLDS = (1.25, 1.25 ** 2, 1.25 ** 3)

REPORT_KEYS = ("delta_1.25", "delta_1.5625", "delta_1.953125",
               "rmse", "log_rmse", "scale_inv_mse", "n_pixels")


@dataclass
class EvalPair:
    """A prediction/ground-truth pair restricted to a joint validity mask."""

    pred: np.ndarray  # metric depth, m
    gt: np.ndarray  # metric depth, m
    mask: np.ndarray  # bool

    def __post_init__(self):
        self.pred = np.asarray(self.pred, dtype=float)
        self.gt = np.asarray(self.gt, dtype=float)
        self.mask = np.asarray(self.mask, dtype=bool)
        if not (self.pred.shape == self.gt.shape == self.mask.shape):
            raise ValueError("pred, gt and mask must share a shape")
        if not self.mask.any():
            raise ValueError("empty validity mask")
        if np.any(self.pred[self.mask] <= 0) or np.any(self.gt[self.mask] <= 0):
            raise ValueError("masked depths must be strictly positive")

    def masked(self):
        return self.pred[self.mask], self.gt[self.mask]


@dataclass
class MetricsReport:
    delta_1: float
    delta_2: float
    delta_3: float
    rmse_linear: float
    rmse_log: float
    scale_inv_log_mse: float
    n_pixels: int

    def __post_init__(self):
        fields = (self.delta_1, self.delta_2, self.delta_3, self.rmse_linear,
                  self.rmse_log, self.scale_inv_log_mse)
        if not all(np.isfinite(v) for v in fields):
            raise ValueError("metrics must be finite")
        if not self.delta_1 <= self.delta_2 + 1e-15 or not self.delta_2 <= self.delta_3 + 1e-15:
            raise ValueError("threshold fractions must be monotone")
        for d in (self.delta_1, self.delta_2, self.delta_3):
            if not -1e-12 <= d <= 1 + 1e-12:
                raise ValueError("threshold fractions must lie in [0, 1]")

    def as_dict(self) -> dict:
        return {
            "delta_1.25": self.delta_1,
            "delta_1.5625": self.delta_2,
            "delta_1.953125": self.delta_3,
            "rmse": self.rmse_linear,
            "log_rmse": self.rmse_log,
            "scale_inv_mse": self.scale_inv_log_mse,
            "n_pixels": self.n_pixels,
        }


def loss_log_rmse(pred_log: np.ndarray, gt: np.ndarray, mask: np.ndarray):
    """sqrt(mean((log y - log y*)^2)) over masked pixels, plus its gradient
    with respect to the log-depth head (the residual is head - log gt)."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise ValueError("empty validity mask")
    gtm = gt[mask]
    if np.any(gtm <= 0):
        raise ValueError("masked ground truth must be strictly positive")
    resid = np.zeros_like(pred_log)
    resid[mask] = pred_log[mask] - np.log(gtm)
    n = int(mask.sum())
    loss = float(np.sqrt(np.sum(resid ** 2) / n))
    grad = np.zeros_like(pred_log)
    if loss > 0:
        grad = resid / (n * loss)
    return loss, grad


def loss_linear_rmse(pred_log: np.ndarray, gt: np.ndarray, mask: np.ndarray):
    """sqrt(mean((y - y*)^2)) in metric depth space, with the chain rule
    through y = exp(pred_log)."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise ValueError("empty validity mask")
    with np.errstate(over="ignore", invalid="ignore"):  # inf surfaces as divergence
        y = np.exp(pred_log)
        resid = np.zeros_like(pred_log)
        resid[mask] = y[mask] - gt[mask]
        n = int(mask.sum())
        loss = float(np.sqrt(np.sum(resid ** 2) / n))
        grad = np.zeros_like(pred_log)
        if loss > 0:
            grad = resid * y / (n * loss)
    return loss, grad


def metric_threshold(pair: EvalPair, thr: float) -> float:
    """Fraction of pixels with max(y/y*, y*/y) < thr."""
    y, g = pair.masked()
    ratio = np.maximum(y / g, g / y)
    return float(np.mean(ratio < thr))


def metric_rmse_linear(pair: EvalPair) -> float:
    y, g = pair.masked()
    return float(np.sqrt(np.mean((y - g) ** 2)))


def metric_rmse_log(pair: EvalPair) -> float:
    y, g = pair.masked()
    return float(np.sqrt(np.mean((np.log(y) - np.log(g)) ** 2)))


def metric_scale_inv_log_mse(pair: EvalPair) -> float:
    """mean(d^2) - mean(d)^2 with d = log y - log y*: the variance of the
    log-ratio error, blind to any global scale on the predictions."""
    y, g = pair.masked()
    d = np.log(y) - np.log(g)
    n = d.size
    return float(np.sum(d ** 2) / n - (np.sum(d) / n) ** 2)


@dataclass
class _SuffStats:
    n: int = 0
    thr_counts: tuple = (0, 0, 0)
    sum_sq_err: float = 0.0
    sum_d: float = 0.0
    sum_d2: float = 0.0

    @classmethod
    def from_pair(cls, pair: EvalPair) -> "_SuffStats":
        y, g = pair.masked()
        ratio = np.maximum(y / g, g / y)
        d = np.log(y) - np.log(g)
        return cls(
            n=y.size,
            thr_counts=tuple(int(np.sum(ratio < t)) for t in THRESHOLDS),
            sum_sq_err=float(np.sum((y - g) ** 2)),
            sum_d=float(np.sum(d)),
            sum_d2=float(np.sum(d ** 2)),
        )

    def merge(self, other: "_SuffStats") -> "_SuffStats":
        return _SuffStats(
            n=self.n + other.n,
            thr_counts=tuple(a + b for a, b in zip(self.thr_counts, other.thr_counts)),
            sum_sq_err=self.sum_sq_err + other.sum_sq_err,
            sum_d=self.sum_d + other.sum_d,
            sum_d2=self.sum_d2 + other.sum_d2,
        )

    def report(self) -> MetricsReport:
        if self.n == 0:
            raise ValueError("no valid pixels to evaluate")
        n = self.n
        return MetricsReport(
            delta_1=self.thr_counts[0] / n,
            delta_2=self.thr_counts[1] / n,
            delta_3=self.thr_counts[2] / n,
            rmse_linear=float(np.sqrt(self.sum_sq_err / n)),
            rmse_log=float(np.sqrt(self.sum_d2 / n)),
            scale_inv_log_mse=self.sum_d2 / n - (self.sum_d / n) ** 2,
            n_pixels=n,
        )


@dataclass(frozen=True)
class EvalConfig:
    min_depth: float = 0.5  # m, clamp before logs
    max_range: float = 40.0
    roi: str = "full"  # "full" | "bottom_half"


def roi_mask(shape, roi: str) -> np.ndarray:
    h = shape[0]
    mask = np.ones(shape, dtype=bool)
    if roi == "bottom_half":
        mask[: h // 2, :] = False
    elif roi != "full":
        raise ValueError(f"unknown ROI {roi!r}")
    return mask


def make_eval_pair(pred_depth: np.ndarray, gt, config: EvalConfig) -> EvalPair | None:
    """Build an EvalPair for one frame, or None if nothing is valid.

    Ground-truth pixels outside [min_depth, max_range] or invalid are
    excluded; predictions are clamped into that interval, the usual benchmark
    convention.
    """
    gt_values = gt.values
    mask = gt.valid & (gt_values >= config.min_depth) & (gt_values <= config.max_range)
    mask &= roi_mask(gt_values.shape, config.roi)
    if not mask.any():
        return None
    pred = np.clip(pred_depth, config.min_depth, config.max_range)
    return EvalPair(pred=pred, gt=np.where(mask, gt_values, 1.0), mask=mask)


def evaluate(pred_depths, gt_maps, config: EvalConfig = EvalConfig()) -> MetricsReport:
    """Aggregate the metric suite over aligned prediction / ground-truth
    sequences. Frames with no valid pixels contribute nothing; if none have
    any, the evaluation is rejected."""
    preds = list(pred_depths)
    gts = list(gt_maps)
    if len(preds) != len(gts):
        raise ValueError(f"{len(preds)} predictions vs {len(gts)} ground truths")
    total = _SuffStats()
    for pred, gt in zip(preds, gts):
        pair = make_eval_pair(pred, gt, config)
        if pair is not None:
            total = total.merge(_SuffStats.from_pair(pair))
    return total.report()


def write_report(path, report: MetricsReport, header: dict | None = None):
    """Stable `key value` lines; provenance rides in '#' comment lines."""
    lines = []
    for k, v in (header or {}).items():
        lines.append(f"# {k} {v}")
    d = report.as_dict()
    for key in REPORT_KEYS:
        v = d[key]
        lines.append(f"{key} {v!r}" if isinstance(v, float) else f"{key} {v}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_report(path) -> MetricsReport:
    values = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        key, val = line.split(" ", 1)
        values[key] = val
    missing = set(REPORT_KEYS) - set(values)
    if missing:
        raise ValueError(f"report missing keys: {sorted(missing)}")
    return MetricsReport(
        delta_1=float(values["delta_1.25"]),
        delta_2=float(values["delta_1.5625"]),
        delta_3=float(values["delta_1.953125"]),
        rmse_linear=float(values["rmse"]),
        rmse_log=float(values["log_rmse"]),
        scale_inv_log_mse=float(values["scale_inv_mse"]),
        n_pixels=int(values["n_pixels"]),
    )
