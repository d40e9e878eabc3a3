"""Plain SGD with an optional momentum flag, and the step learning-rate decay."""

from __future__ import annotations

from .tensor import ParamStore, SgdState


def sgd_step(params: ParamStore, lr: float, momentum: float = 0.0,
             state: SgdState | None = None):
    """Apply p <- p - lr * g to every parameter, then clear the gradients.

    Every parameter must carry a gradient. With momentum > 0 a velocity
    buffer v <- momentum * v + g is used in place of g; pass a persistent
    SgdState to carry velocities across steps.
    """
    missing = [name for name, t in params.items() if t.grad is None]
    if missing:
        raise ValueError(f"parameters without gradients: {missing}")
    if momentum != 0.0 and state is None:
        raise ValueError("momentum requires a persistent SgdState")
    for name, t in params.items():
        g = t.grad
        if momentum != 0.0:
            v = state.velocity.get(name)
            if v is None:
                v = g.copy()
            else:
                v = momentum * v + g
            state.velocity[name] = v
            g = v
        t.data -= lr * g
    params.zero_grads()


def lr_schedule(epoch: int, base_lr: float, decay_factor: float = 0.5,
                decay_every: int = 20) -> float:
    """Step decay: base_lr * decay_factor ** floor(epoch / decay_every)."""
    if decay_every < 1:
        raise ValueError(f"decay_every must be >= 1, got {decay_every}")
    if not 0.0 < decay_factor <= 1.0:
        raise ValueError(f"decay_factor must be in (0, 1], got {decay_factor}")
    return base_lr * decay_factor ** (epoch // decay_every)
