"""Differentiable array operations: strided convolution, transposed
convolution, and ReLU, each with an explicit backward pass.

Layout conventions:
  activations            (n, c, h, w)
  convolution weights    (c_out, c_in, k_h, k_w)
  transposed-conv weights (c_in, c_out, k_h, k_w)   -- c_in indexes the
                           operation's own input channels, so a convolution
                           weight array can be passed unchanged to the
                           transposed convolution acting on its outputs.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .tensor import ConvSpec


def _check_4d(x: np.ndarray, what: str):
    if x.ndim != 4:
        raise ValueError(f"{what} must be 4-d (n, c, h, w), got shape {x.shape}")


def _windows(x_padded: np.ndarray, k_h: int, k_w: int, s: int) -> np.ndarray:
    """Strided sliding windows, shape (n, c, h_out, w_out, k_h, k_w)."""
    w = sliding_window_view(x_padded, (k_h, k_w), axis=(2, 3))
    return w[:, :, ::s, ::s, :, :]


def conv2d_forward(x: np.ndarray, weights: np.ndarray, bias: np.ndarray,
                   spec: ConvSpec) -> np.ndarray:
    """Strided 2-d convolution (cross-correlation) with zero padding.

    Output extents are floor((h + 2p - k)/s) + 1 per axis; each output value
    is the windowed dot product of the input with one filter, plus its bias.
    """
    _check_4d(x, "input")
    n, c_in, h, w = x.shape
    if weights.shape != (spec.c_out, spec.c_in, spec.k_h, spec.k_w):
        raise ValueError(
            f"weights shape {weights.shape} does not match spec "
            f"({spec.c_out}, {spec.c_in}, {spec.k_h}, {spec.k_w})"
        )
    if bias.shape != (spec.c_out,):
        raise ValueError(f"bias shape {bias.shape} != ({spec.c_out},)")
    if c_in != spec.c_in:
        raise ValueError(f"input has {c_in} channels, spec expects {spec.c_in}")
    h_out, w_out = spec.out_extent(h, w)

    xp = np.pad(x, ((0, 0), (0, 0), (spec.p_h, spec.p_h), (spec.p_w, spec.p_w)))
    win = _windows(xp, spec.k_h, spec.k_w, spec.s)  # (n, c_in, h_out, w_out, kh, kw)
    # one GEMM: rows are output sites, columns are unrolled filter taps
    cols = win.transpose(0, 2, 3, 1, 4, 5).reshape(
        n * h_out * w_out, spec.c_in * spec.k_h * spec.k_w
    )
    wmat = weights.reshape(spec.c_out, -1)
    out = cols @ wmat.T + bias
    return np.ascontiguousarray(
        out.reshape(n, h_out, w_out, spec.c_out).transpose(0, 3, 1, 2)
    )


def conv2d_backward(output_grad: np.ndarray, saved_input: np.ndarray,
                    weights: np.ndarray, spec: ConvSpec):
    """Gradients of a scalar loss through conv2d_forward.

    Returns (input_grad, weight_grad, bias_grad).
    """
    _check_4d(output_grad, "output_grad")
    n, c_in, h, w = saved_input.shape
    h_out, w_out = spec.out_extent(h, w)
    if output_grad.shape != (n, spec.c_out, h_out, w_out):
        raise ValueError(
            f"output_grad shape {output_grad.shape} does not match forward "
            f"output ({n}, {spec.c_out}, {h_out}, {w_out})"
        )

    bias_grad = output_grad.sum(axis=(0, 2, 3))

    xp = np.pad(saved_input,
                ((0, 0), (0, 0), (spec.p_h, spec.p_h), (spec.p_w, spec.p_w)))
    win = _windows(xp, spec.k_h, spec.k_w, spec.s)
    cols = win.transpose(0, 2, 3, 1, 4, 5).reshape(
        n * h_out * w_out, spec.c_in * spec.k_h * spec.k_w
    )
    gmat = output_grad.transpose(0, 2, 3, 1).reshape(n * h_out * w_out, spec.c_out)
    weight_grad = (gmat.T @ cols).reshape(spec.c_out, spec.c_in, spec.k_h, spec.k_w)

    # scatter each filter tap back onto the padded input grid
    dxp = np.zeros_like(xp)
    per_tap = np.einsum("nohw,ocij->nchwij", output_grad, weights)
    s = spec.s
    for i in range(spec.k_h):
        for j in range(spec.k_w):
            dxp[:, :, i:i + s * h_out:s, j:j + s * w_out:s] += per_tap[..., i, j]
    input_grad = dxp[:, :, spec.p_h:spec.p_h + h, spec.p_w:spec.p_w + w]
    return np.ascontiguousarray(input_grad), weight_grad, bias_grad


def _check_deconv_spec(spec: ConvSpec):
    # exact integer upsampling: output extent s*h requires k = s + 2p
    if spec.k_h != spec.s + 2 * spec.p_h or spec.k_w != spec.s + 2 * spec.p_w:
        raise ValueError(
            f"transposed conv needs k = s + 2p for exact x{spec.s} upsampling, "
            f"got k=({spec.k_h},{spec.k_w}) s={spec.s} p=({spec.p_h},{spec.p_w})"
        )


def deconv2d_forward(x: np.ndarray, weights: np.ndarray, bias: np.ndarray,
                     spec: ConvSpec) -> np.ndarray:
    """Transposed (fractionally-strided) convolution upsampling by exactly s.

    This is the adjoint of conv2d_forward with the same kernel/stride/padding:
    with shared weights and zero bias, <conv(x), y> == <x, deconv(y)>.
    """
    _check_4d(x, "input")
    _check_deconv_spec(spec)
    n, c_in, h, w = x.shape
    if weights.shape != (spec.c_in, spec.c_out, spec.k_h, spec.k_w):
        raise ValueError(
            f"weights shape {weights.shape} does not match spec "
            f"({spec.c_in}, {spec.c_out}, {spec.k_h}, {spec.k_w})"
        )
    if bias.shape != (spec.c_out,):
        raise ValueError(f"bias shape {bias.shape} != ({spec.c_out},)")
    if c_in != spec.c_in:
        raise ValueError(f"input has {c_in} channels, spec expects {spec.c_in}")

    s = spec.s
    hp = (h - 1) * s + spec.k_h
    wp = (w - 1) * s + spec.k_w
    outp = np.zeros((n, spec.c_out, hp, wp), dtype=x.dtype)
    per_tap = np.einsum("nihw,ioxy->nohwxy", x, weights)
    for i in range(spec.k_h):
        for j in range(spec.k_w):
            outp[:, :, i:i + s * h:s, j:j + s * w:s] += per_tap[..., i, j]
    out = outp[:, :, spec.p_h:spec.p_h + s * h, spec.p_w:spec.p_w + s * w]
    out = out + bias[None, :, None, None]
    return np.ascontiguousarray(out)


def deconv2d_backward(output_grad: np.ndarray, saved_input: np.ndarray,
                      weights: np.ndarray, spec: ConvSpec):
    """Gradients of a scalar loss through deconv2d_forward.

    Returns (input_grad, weight_grad, bias_grad).
    """
    _check_4d(output_grad, "output_grad")
    _check_deconv_spec(spec)
    n, c_in, h, w = saved_input.shape
    s = spec.s
    if output_grad.shape != (n, spec.c_out, s * h, s * w):
        raise ValueError(
            f"output_grad shape {output_grad.shape} does not match forward "
            f"output ({n}, {spec.c_out}, {s * h}, {s * w})"
        )

    bias_grad = output_grad.sum(axis=(0, 2, 3))

    gp = np.pad(output_grad,
                ((0, 0), (0, 0), (spec.p_h, spec.p_h), (spec.p_w, spec.p_w)))
    win = _windows(gp, spec.k_h, spec.k_w, s)  # (n, c_out, h, w, kh, kw)
    # input grad is the matching strided convolution of the output grad
    cols = win.transpose(0, 2, 3, 1, 4, 5).reshape(n * h * w, -1)
    wmat = weights.reshape(spec.c_in, -1)  # (c_in, c_out*kh*kw)
    input_grad = (cols @ wmat.T).reshape(n, h, w, spec.c_in).transpose(0, 3, 1, 2)

    gmat = cols  # (n*h*w, c_out*kh*kw)
    xmat = saved_input.transpose(0, 2, 3, 1).reshape(n * h * w, spec.c_in)
    weight_grad = (xmat.T @ gmat).reshape(spec.c_in, spec.c_out, spec.k_h, spec.k_w)
    return np.ascontiguousarray(input_grad), weight_grad, bias_grad


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0)


def relu_backward(output_grad: np.ndarray, saved_input: np.ndarray) -> np.ndarray:
    """Masks the gradient where the input was <= 0 (subgradient 0 at 0)."""
    if output_grad.shape != saved_input.shape:
        raise ValueError(
            f"output_grad shape {output_grad.shape} != input shape {saved_input.shape}"
        )
    return output_grad * (saved_input > 0)
