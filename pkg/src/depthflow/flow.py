"""Dense optical flow between consecutive frames, plus .flo file I/O.

The estimator is a coarse-to-fine Horn-Schunck solver with image warping
between pyramid levels: each level linearizes brightness constancy around the
current warp and relaxes the flow increment under a quadratic smoothness
term. It is a documented stand-in for heavier variational methods; anything
producing a dense per-pixel (u, v) field can feed the network instead.

Conventions: u is horizontal displacement in pixels (positive rightward),
v vertical (positive downward), both mapping the previous frame onto the
current one.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

FLO_MAGIC = 202021.25  # spells "PIEH" when read as bytes

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


class FlowFileError(ValueError):
    """Raised for malformed .flo data."""


@dataclass
class FlowField:
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        self.u = np.asarray(self.u)
        self.v = np.asarray(self.v)
        if self.u.shape != self.v.shape or self.u.ndim != 2:
            raise ValueError(
                f"u and v must be matching 2-d arrays, got {self.u.shape} and {self.v.shape}"
            )
        if not (np.isfinite(self.u).all() and np.isfinite(self.v).all()):
            raise ValueError("flow contains non-finite values")

    @property
    def height(self) -> int:
        return self.u.shape[0]

    @property
    def width(self) -> int:
        return self.u.shape[1]

    @classmethod
    def zeros(cls, height: int, width: int) -> "FlowField":
        return cls(np.zeros((height, width), dtype=np.float32),
                   np.zeros((height, width), dtype=np.float32))


@dataclass(frozen=True)
class FlowParams:
    levels: int = 4
    iterations: int = 100
    alpha: float = 15.0
    scale: float = 0.5


def to_grayscale(rgb: np.ndarray) -> np.ndarray:
    """Luma conversion of an (H, W, 3) image with 0.299/0.587/0.114 weights."""
    if rgb.ndim == 2:
        return np.asarray(rgb, dtype=float)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) image, got {rgb.shape}")
    w = np.asarray(LUMA_WEIGHTS)
    return rgb @ w


def _bilinear_sample(img, xq, yq):
    """Sample img at fractional coordinates with replicate-edge handling."""
    h, w = img.shape
    x = np.clip(xq, 0.0, w - 1.0)
    y = np.clip(yq, 0.0, h - 1.0)
    x0 = np.floor(x).astype(int)
    y0 = np.floor(y).astype(int)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = x - x0
    fy = y - y0
    top = img[y0, x0] * (1 - fx) + img[y0, x1] * fx
    bot = img[y1, x0] * (1 - fx) + img[y1, x1] * fx
    return top * (1 - fy) + bot * fy


def _resize_bilinear(arr, shape):
    h2, w2 = shape
    h1, w1 = arr.shape
    if (h1, w1) == (h2, w2):
        return arr.copy()
    ys = (np.arange(h2) + 0.5) * (h1 / h2) - 0.5
    xs = (np.arange(w2) + 0.5) * (w1 / w2) - 0.5
    xq, yq = np.meshgrid(xs, ys)
    return _bilinear_sample(arr, xq, yq)


def _smooth(img, sigma=1.0):
    r = max(1, int(np.ceil(3 * sigma)))
    x = np.arange(-r, r + 1, dtype=float)
    k = np.exp(-(x ** 2) / (2 * sigma ** 2))
    k /= k.sum()
    pad = np.pad(img, ((0, 0), (r, r)), mode="edge")
    out = np.zeros_like(img, dtype=float)
    for i, kv in enumerate(k):
        out += kv * pad[:, i:i + img.shape[1]]
    pad = np.pad(out, ((r, r), (0, 0)), mode="edge")
    out2 = np.zeros_like(img, dtype=float)
    for i, kv in enumerate(k):
        out2 += kv * pad[i:i + img.shape[0], :]
    return out2


def _central_gradient(img):
    p = np.pad(img, 1, mode="edge")
    h, w = img.shape
    gx = 0.5 * (p[1:1 + h, 2:2 + w] - p[1:1 + h, 0:w])
    gy = 0.5 * (p[2:2 + h, 1:1 + w] - p[0:h, 1:1 + w])
    return gx, gy


def _neighbor_sum_and_degree(f):
    """Sum over existing 4-neighbors plus the per-pixel neighbor count."""
    h, w = f.shape
    s = np.zeros_like(f)
    deg = np.zeros(f.shape)
    s[1:, :] += f[:-1, :]
    deg[1:, :] += 1
    s[:-1, :] += f[1:, :]
    deg[:-1, :] += 1
    s[:, 1:] += f[:, :-1]
    deg[:, 1:] += 1
    s[:, :-1] += f[:, 1:]
    deg[:, :-1] += 1
    return s, deg


def _increment_energy(ix, iy, it, du, dv, alpha):
    """Data residual plus 4-neighbor Dirichlet smoothness, the objective the
    red-black sweeps minimize."""
    resid = ix * du + iy * dv + it
    smooth = 0.0
    for f in (du, dv):
        smooth += np.sum((f[1:, :] - f[:-1, :]) ** 2)
        smooth += np.sum((f[:, 1:] - f[:, :-1]) ** 2)
    return float(np.sum(resid ** 2) + alpha ** 2 * smooth)


def estimate_flow(prev: np.ndarray, curr: np.ndarray,
                  params: FlowParams = FlowParams(),
                  return_energies: bool = False):
    """Dense flow from prev to curr, both grayscale images in [0, 1].

    Returns a FlowField (and, when asked, the per-level energy traces of the
    relaxation, which are non-increasing). The solver stops iterating at a
    level as soon as the objective would rise, so the recorded energies are
    monotone by construction.
    """
    prev = np.asarray(prev, dtype=float)
    curr = np.asarray(curr, dtype=float)
    if prev.shape != curr.shape:
        raise ValueError(f"frame extents differ: {prev.shape} vs {curr.shape}")
    if prev.ndim != 2 or min(prev.shape) < 2:
        raise ValueError(f"degenerate image extents {prev.shape}")
    # alpha is calibrated for the classic 0-255 intensity range
    prev = prev * 255.0
    curr = curr * 255.0

    pyramid = [(prev, curr)]
    for _ in range(params.levels - 1):
        p, c = pyramid[-1]
        nh = max(2, int(round(p.shape[0] * params.scale)))
        nw = max(2, int(round(p.shape[1] * params.scale)))
        if (nh, nw) == p.shape:
            break
        pyramid.append((_resize_bilinear(_smooth(p), (nh, nw)),
                        _resize_bilinear(_smooth(c), (nh, nw))))

    u = np.zeros(pyramid[-1][0].shape)
    v = np.zeros(pyramid[-1][0].shape)
    energies = []
    for lp, lc in reversed(pyramid):
        h, w = lp.shape
        su = w / u.shape[1]
        sv = h / u.shape[0]
        u = _resize_bilinear(u, (h, w)) * su
        v = _resize_bilinear(v, (h, w)) * sv

        xs, ys = np.meshgrid(np.arange(w, dtype=float), np.arange(h, dtype=float))
        warped = _bilinear_sample(lc, xs + u, ys + v)
        gpx, gpy = _central_gradient(lp)
        gwx, gwy = _central_gradient(warped)
        ix = 0.5 * (gpx + gwx)
        iy = 0.5 * (gpy + gwy)
        it = warped - lp

        yy, xx = np.mgrid[0:h, 0:w]
        red = (yy + xx) % 2 == 0
        du = np.zeros((h, w))
        dv = np.zeros((h, w))
        trace = [_increment_energy(ix, iy, it, du, dv, params.alpha)]
        a2 = params.alpha ** 2
        for _ in range(params.iterations):
            # red-black Gauss-Seidel: each half-sweep exactly minimizes the
            # objective over its pixels, so the energy cannot increase
            for mask in (red, ~red):
                su, deg = _neighbor_sum_and_degree(du)
                sv, _ = _neighbor_sum_and_degree(dv)
                ubar = su / deg
                vbar = sv / deg
                t = (ix * ubar + iy * vbar + it) / (ix ** 2 + iy ** 2 + a2 * deg)
                du[mask] = (ubar - ix * t)[mask]
                dv[mask] = (vbar - iy * t)[mask]
            e = _increment_energy(ix, iy, it, du, dv, params.alpha)
            if e > trace[-1]:
                break
            trace.append(e)
        energies.append(trace)
        u = u + du
        v = v + dv

    field = FlowField(u, v)
    if return_energies:
        return field, energies
    return field


def write_flo(flow: FlowField, sink):
    """Write Middlebury .flo bytes: float32 magic, i32 width, i32 height,
    then row-major interleaved (u, v) float32 pairs, all little-endian."""
    header = struct.pack("<fii", FLO_MAGIC, flow.width, flow.height)
    data = np.empty((flow.height, flow.width, 2), dtype="<f4")
    data[..., 0] = flow.u
    data[..., 1] = flow.v
    payload = header + data.tobytes()
    if hasattr(sink, "write"):
        sink.write(payload)
    else:
        Path(sink).write_bytes(payload)


def read_flo(source) -> FlowField:
    if hasattr(source, "read"):
        raw = source.read()
    else:
        raw = Path(source).read_bytes()
    if len(raw) < 12:
        raise FlowFileError("file too short for a .flo header")
    magic, w, h = struct.unpack("<fii", raw[:12])
    if magic != np.float32(FLO_MAGIC):
        raise FlowFileError(f"bad .flo magic {magic!r}")
    if w <= 0 or h <= 0:
        raise FlowFileError(f"bad .flo extents {w}x{h}")
    expected = 12 + 8 * w * h
    if len(raw) < expected:
        raise FlowFileError(
            f"truncated .flo payload: have {len(raw)} bytes, need {expected}"
        )
    data = np.frombuffer(raw[12:expected], dtype="<f4").reshape(h, w, 2)
    return FlowField(data[..., 0].copy(), data[..., 1].copy())


def flow_color_preview(flow: FlowField, max_magnitude: float | None = None) -> np.ndarray:
    """Direction-as-hue, magnitude-as-saturation rendering; zero flow is white.

    Returns an (H, W, 3) uint8 image.
    """
    mag = np.hypot(flow.u, flow.v)
    if max_magnitude is None:
        max_magnitude = float(mag.max())
    if max_magnitude < 1e-12:
        return np.full((flow.height, flow.width, 3), 255, dtype=np.uint8)
    hue = (np.arctan2(flow.v, flow.u) / (2 * np.pi)) % 1.0
    sat = np.clip(mag / max_magnitude, 0.0, 1.0)
    val = np.ones_like(sat)

    i = np.floor(hue * 6).astype(int) % 6
    f = hue * 6 - np.floor(hue * 6)
    p = val * (1 - sat)
    q = val * (1 - f * sat)
    t = val * (1 - (1 - f) * sat)
    r = np.choose(i, [val, q, p, p, t, val])
    g = np.choose(i, [t, val, val, q, p, p])
    b = np.choose(i, [p, p, t, val, val, q])
    rgb = np.stack([r, g, b], axis=-1)
    return np.clip(np.round(rgb * 255), 0, 255).astype(np.uint8)
