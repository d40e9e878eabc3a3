"""The encoder-decoder depth network.

Encoder: five 3x3 convolutions with strides [2, 2, 2, 1, 2] (learned
downsampling, x16 total) and ReLU after each. Decoder: three transposed
convolutions upsampling by [2, 2, 4] back to input resolution. The single
output channel is log depth in log-meters; metric depth is its exponential,
which keeps every prediction strictly positive.

Channel widths are configuration (defaults below are desk-scale); the layer
count, kernel sizes, stride pattern and upsample factors are fixed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ops
from .tensor import ConvSpec, ParamStore, Tensor

ENCODER_STRIDES = (2, 2, 2, 1, 2)
DECODER_UPSAMPLES = (2, 2, 4)
DOWNSAMPLE_FACTOR = 16

DEFAULT_ENCODER_CHANNELS = (32, 64, 128, 256, 256)
DEFAULT_DECODER_CHANNELS = (128, 64, 1)

VARIANTS = ("single_image", "image_plus_flow")
DESCRIPTOR_PREFIX = "dfnet1"


@dataclass(frozen=True)
class NetworkSpec:
    """Declarative description of the network; see module docstring."""

    input_variant: str = "single_image"
    encoder_channels: tuple = DEFAULT_ENCODER_CHANNELS
    decoder_channels: tuple = DEFAULT_DECODER_CHANNELS

    def __post_init__(self):
        if self.input_variant not in VARIANTS:
            raise ValueError(f"unknown input variant {self.input_variant!r}")
        object.__setattr__(self, "encoder_channels", tuple(int(c) for c in self.encoder_channels))
        object.__setattr__(self, "decoder_channels", tuple(int(c) for c in self.decoder_channels))
        if len(self.encoder_channels) != 5:
            raise ValueError("encoder must have exactly 5 layers")
        if len(self.decoder_channels) != 3:
            raise ValueError("decoder must have exactly 3 layers")
        if self.decoder_channels[-1] != 1:
            raise ValueError("final decoder layer must emit 1 channel (log depth)")
        if any(c < 1 for c in self.encoder_channels + self.decoder_channels):
            raise ValueError("channel counts must be >= 1")

    @property
    def input_channels(self) -> int:
        return 5 if self.input_variant == "image_plus_flow" else 3

    def conv_specs(self) -> list[ConvSpec]:
        """Per-layer geometry, encoder then decoder, in forward order."""
        specs = []
        c_prev = self.input_channels
        for c, s in zip(self.encoder_channels, ENCODER_STRIDES):
            specs.append(ConvSpec(k_h=3, k_w=3, s=s, p_h=1, p_w=1,
                                  c_in=c_prev, c_out=c))
            c_prev = c
        for c, s in zip(self.decoder_channels, DECODER_UPSAMPLES):
            k = 2 * s
            specs.append(ConvSpec(k_h=k, k_w=k, s=s, p_h=s // 2, p_w=s // 2,
                                  c_in=c_prev, c_out=c))
            c_prev = c
        return specs

    def parameter_count(self) -> int:
        """Closed-form total number of scalar parameters."""
        total = 0
        for spec in self.conv_specs():
            total += spec.c_out * spec.c_in * spec.k_h * spec.k_w + spec.c_out
        return total


@dataclass
class PredictionBatch:
    """Per-pixel log-depth predictions; metric depth is exp(log_depth)."""

    log_depth: np.ndarray  # (n, 1, H, W)

    @property
    def metric_depth(self) -> np.ndarray:
        return np.exp(self.log_depth)


@dataclass
class CropRecord:
    """Original extents recorded by pad_to_16, for the inverse crop."""

    height: int
    width: int
    pad_bottom: int
    pad_right: int

    @property
    def empty(self) -> bool:
        return self.pad_bottom == 0 and self.pad_right == 0


def pad_to_16(image: np.ndarray) -> tuple[np.ndarray, CropRecord]:
    """Zero-pad the two trailing (spatial) axes up to the next multiple of 16."""
    h, w = image.shape[-2], image.shape[-1]
    pad_b = (-h) % DOWNSAMPLE_FACTOR
    pad_r = (-w) % DOWNSAMPLE_FACTOR
    rec = CropRecord(height=h, width=w, pad_bottom=pad_b, pad_right=pad_r)
    if rec.empty:
        return image, rec
    pads = [(0, 0)] * (image.ndim - 2) + [(0, pad_b), (0, pad_r)]
    return np.pad(image, pads), rec


def crop_prediction(pred: np.ndarray, rec: CropRecord) -> np.ndarray:
    """Exact inverse of pad_to_16 on the trailing spatial axes."""
    return pred[..., :rec.height, :rec.width]


def assemble_input(image: np.ndarray, flow=None, variant: str = "single_image",
                   channel_means=None) -> np.ndarray:
    """Build the network input tensor from an RGB image and optional flow.

    image: (n, 3, H, W) with values in [0, 1]. Channels 0-2 are the image
    minus the per-channel means (zeros when not given). For the flow variant,
    channels 3-4 are the flow's u and v displacements divided by the image
    width, making them dimensionless and bounded.
    """
    if image.ndim != 4 or image.shape[1] != 3:
        raise ValueError(f"image must be (n, 3, H, W), got {image.shape}")
    if variant not in VARIANTS:
        raise ValueError(f"unknown input variant {variant!r}")
    n, _, h, w = image.shape
    means = np.zeros(3) if channel_means is None else np.asarray(channel_means, dtype=float)
    if means.shape != (3,):
        raise ValueError("channel_means must have 3 entries")
    out = image - means[None, :, None, None]
    if variant == "single_image":
        if flow is not None:
            raise ValueError("single_image variant takes no flow input")
        return np.ascontiguousarray(out)
    if flow is None:
        raise ValueError("image_plus_flow variant requires a flow field")
    u, v = flow.u, flow.v
    if u.shape != (h, w):
        raise ValueError(f"flow extents {u.shape} do not match image {h}x{w}")
    fu = np.broadcast_to(u / w, (n, 1, h, w))
    fv = np.broadcast_to(v / w, (n, 1, h, w))
    return np.ascontiguousarray(np.concatenate([out, fu, fv], axis=1))


class _ConvLayer:
    def __init__(self, spec, weights: Tensor, bias: Tensor, transposed: bool,
                 activation: bool):
        self.spec = spec
        self.weights = weights
        self.bias = bias
        self.transposed = transposed
        self.activation = activation
        self._x = None
        self._pre = None

    def forward(self, x):
        self._x = x
        fwd = ops.deconv2d_forward if self.transposed else ops.conv2d_forward
        out = fwd(x, self.weights.data, self.bias.data, self.spec)
        if self.activation:
            self._pre = out
            out = ops.relu(out)
        return out

    def backward(self, g):
        if self.activation:
            g = ops.relu_backward(g, self._pre)
        bwd = ops.deconv2d_backward if self.transposed else ops.conv2d_backward
        dx, dw, db = bwd(g, self._x, self.weights.data, self.spec)
        self.weights.accumulate_grad(dw)
        self.bias.accumulate_grad(db)
        return dx


class DepthNet:
    """Executable forward/backward graph over a ParamStore.

    Inference over shared read-only parameters is safe to fan out across
    workers (forward allocates all intermediates); training mutates the
    parameters and needs exclusive access.
    """

    def __init__(self, spec: NetworkSpec, params: ParamStore):
        self.spec = spec
        self.params = params
        self.layers = []
        conv_specs = spec.conv_specs()
        n_enc = len(ENCODER_STRIDES)
        for i, cs in enumerate(conv_specs):
            transposed = i >= n_enc
            name = f"dec{i - n_enc + 1}" if transposed else f"enc{i + 1}"
            is_head = i == len(conv_specs) - 1
            self.layers.append(_ConvLayer(
                cs, params[f"{name}.weight"], params[f"{name}.bias"],
                transposed=transposed, activation=not is_head))

    def forward(self, x: np.ndarray) -> PredictionBatch:
        """Run the network; x is a (n, c, H, W) assembled input tensor."""
        if x.ndim != 4:
            raise ValueError(f"input must be 4-d, got shape {x.shape}")
        if x.shape[1] != self.spec.input_channels:
            raise ValueError(
                f"input has {x.shape[1]} channels but this "
                f"{self.spec.input_variant} network expects {self.spec.input_channels}"
            )
        h, w = x.shape[2], x.shape[3]
        if h % DOWNSAMPLE_FACTOR or w % DOWNSAMPLE_FACTOR:
            raise ValueError(
                f"spatial extents {h}x{w} must be multiples of "
                f"{DOWNSAMPLE_FACTOR}; pad with pad_to_16 first"
            )
        out = x
        for layer in self.layers:
            out = layer.forward(out)
        return PredictionBatch(log_depth=out)

    def backward(self, dlog: np.ndarray) -> np.ndarray:
        """Propagate the loss gradient w.r.t. log_depth; accumulates parameter
        gradients in the store and returns the gradient w.r.t. the input."""
        g = dlog
        for layer in reversed(self.layers):
            g = layer.backward(g)
        return g


def _layer_names():
    names = [f"enc{i + 1}" for i in range(len(ENCODER_STRIDES))]
    names += [f"dec{i + 1}" for i in range(len(DECODER_UPSAMPLES))]
    return names


def build_network(spec: NetworkSpec, seed: int, dtype=np.float32,
                  head_bias: float = 0.0) -> tuple[ParamStore, DepthNet]:
    """Initialize parameters and assemble the executable graph.

    Weights are fan-in-scaled uniform U(+-sqrt(6/fan_in)), biases zero except
    the depth head's, which starts at head_bias (a log-depth prior; leaving it
    0 predicts 1 m everywhere initially). Identical seed gives bit-identical
    parameters.
    """
    rng = np.random.default_rng(seed)
    params = ParamStore(rng_seed=seed)
    names = _layer_names()
    conv_specs = spec.conv_specs()
    n_enc = len(ENCODER_STRIDES)
    for i, (name, cs) in enumerate(zip(names, conv_specs)):
        fan_in = cs.c_in * cs.k_h * cs.k_w
        bound = np.sqrt(6.0 / fan_in)
        if i < n_enc:
            shape = (cs.c_out, cs.c_in, cs.k_h, cs.k_w)
        else:
            shape = (cs.c_in, cs.c_out, cs.k_h, cs.k_w)
        w = rng.uniform(-bound, bound, size=shape).astype(dtype)
        b = np.zeros(cs.c_out, dtype=dtype)
        if i == len(conv_specs) - 1:
            b[:] = head_bias
        params.add(f"{name}.weight", w)
        params.add(f"{name}.bias", b)
    return params, DepthNet(spec, params)


def encode_descriptor(spec: NetworkSpec, extras: dict | None = None) -> str:
    """Canonical architecture string stored in checkpoints.

    Grammar: "dfnet1;variant=<v>;enc=<c1,..,c5>;dec=<c1,c2,c3>[;key=value...]"
    Extra keys (seed, config hash, max_range) ride along and are returned by
    parse_descriptor without affecting the reconstructed NetworkSpec.
    """
    parts = [
        DESCRIPTOR_PREFIX,
        f"variant={spec.input_variant}",
        "enc=" + ",".join(str(c) for c in spec.encoder_channels),
        "dec=" + ",".join(str(c) for c in spec.decoder_channels),
    ]
    for k, v in (extras or {}).items():
        parts.append(f"{k}={v}")
    return ";".join(parts)


def parse_descriptor(descriptor: str) -> tuple[NetworkSpec, dict]:
    fields = descriptor.split(";")
    if not fields or fields[0] != DESCRIPTOR_PREFIX:
        raise ValueError(f"unrecognized architecture descriptor: {descriptor!r}")
    kv = {}
    for f in fields[1:]:
        if "=" not in f:
            raise ValueError(f"malformed descriptor field {f!r}")
        k, v = f.split("=", 1)
        kv[k] = v
    try:
        spec = NetworkSpec(
            input_variant=kv.pop("variant"),
            encoder_channels=tuple(int(c) for c in kv.pop("enc").split(",")),
            decoder_channels=tuple(int(c) for c in kv.pop("dec").split(",")),
        )
    except KeyError as e:
        raise ValueError(f"descriptor missing required field {e}") from e
    return spec, kv
