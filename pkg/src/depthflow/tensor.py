"""Dense tensors with a gradient slot, convolution specs, and the parameter store.

Everything in the numerical core operates on plain numpy arrays; Tensor is a
thin wrapper that pairs a value array with an optional accumulated-gradient
array of the same shape. Double precision is used for gradient checking,
single precision for training.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class Tensor:
    """An n-d array plus an optional same-shape gradient accumulator."""

    __slots__ = ("data", "grad")

    def __init__(self, data: np.ndarray, grad: np.ndarray | None = None):
        self.data = np.asarray(data)
        if grad is not None and grad.shape != self.data.shape:
            raise ValueError(
                f"grad shape {grad.shape} does not match data shape {self.data.shape}"
            )
        self.grad = grad

    @property
    def shape(self) -> tuple:
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    def accumulate_grad(self, g: np.ndarray):
        """Add g into the gradient slot, allocating it on first use."""
        if g.shape != self.data.shape:
            raise ValueError(
                f"gradient shape {g.shape} does not match parameter shape {self.data.shape}"
            )
        if self.grad is None:
            self.grad = g.astype(self.data.dtype, copy=True)
        else:
            self.grad += g

    def zero_grad(self):
        self.grad = None

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, dtype={self.data.dtype}, grad={'yes' if self.grad is not None else 'no'})"


@dataclass(frozen=True)
class ConvSpec:
    """Geometry of one (de)convolution: kernel, stride, padding, channels."""

    k_h: int
    k_w: int
    s: int
    p_h: int
    p_w: int
    c_in: int
    c_out: int

    def __post_init__(self):
        if self.k_h < 1 or self.k_w < 1:
            raise ValueError(f"kernel extents must be >= 1, got {self.k_h}x{self.k_w}")
        if self.s < 1:
            raise ValueError(f"stride must be >= 1, got {self.s}")
        if self.p_h < 0 or self.p_w < 0:
            raise ValueError(f"padding must be >= 0, got ({self.p_h}, {self.p_w})")
        if self.c_in < 1 or self.c_out < 1:
            raise ValueError(f"channel counts must be >= 1, got {self.c_in}->{self.c_out}")

    def out_extent(self, h: int, w: int) -> tuple[int, int]:
        """Convolution output extents: floor((x + 2p - k)/s) + 1 per axis."""
        if h + 2 * self.p_h < self.k_h or w + 2 * self.p_w < self.k_w:
            raise ValueError(
                f"input {h}x{w} with padding ({self.p_h},{self.p_w}) is smaller "
                f"than the {self.k_h}x{self.k_w} kernel"
            )
        h_out = (h + 2 * self.p_h - self.k_h) // self.s + 1
        w_out = (w + 2 * self.p_w - self.k_w) // self.s + 1
        return h_out, w_out


class ParamStore:
    """Ordered name -> Tensor map for trainable parameters.

    Iteration order follows insertion order, so two stores built by the same
    construction sequence iterate identically. The rng seed used at
    initialization is kept for provenance.
    """

    def __init__(self, rng_seed: int = 0):
        self.rng_seed = int(rng_seed)
        self._params: dict[str, Tensor] = {}

    def add(self, name: str, data: np.ndarray) -> Tensor:
        if name in self._params:
            raise ValueError(f"duplicate parameter name {name!r}")
        t = Tensor(np.ascontiguousarray(data))
        self._params[name] = t
        return t

    def __getitem__(self, name: str) -> Tensor:
        return self._params[name]

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __len__(self) -> int:
        return len(self._params)

    def names(self) -> list[str]:
        return list(self._params.keys())

    def items(self):
        return self._params.items()

    def zero_grads(self):
        for t in self._params.values():
            t.zero_grad()

    def n_values(self) -> int:
        return sum(t.data.size for t in self._params.values())

    def state_vector(self) -> np.ndarray:
        """All parameter values flattened in iteration order (for tests)."""
        if not self._params:
            return np.zeros(0)
        return np.concatenate([t.data.ravel() for t in self._params.values()])


@dataclass
class SgdState:
    """Velocity buffers for optional momentum; unused when momentum is 0."""

    velocity: dict[str, np.ndarray] = field(default_factory=dict)
