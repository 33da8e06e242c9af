"""Residual updates for the four loss choices.

Each update returns the residual map that exactly minimizes
``||e - q||^2 + <penalty>(e)`` for its loss, where ``q`` is the raw fit
residual (labels minus filter response).  The squared baseline keeps the
residual identically zero, which collapses training to the single
closed-form ridge solution.
"""

from enum import Enum

import numpy as np

from .errors import InvalidInputError


class LossKind(str, Enum):
    """Available training losses for the residual term."""

    L2 = "l2"
    L1 = "l1"
    L1L2 = "l1l2"
    L21 = "l21"

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        try:
            return cls(str(text).lower())
        except ValueError:
            options = ", ".join(k.value for k in cls)
            raise InvalidInputError(
                f"unknown loss {text!r}; expected one of: {options}"
            ) from None


def soft_threshold(epsilon, x):
    """Shrinkage operator sign(x) * max(0, |x| - epsilon), elementwise."""
    if epsilon < 0:
        raise InvalidInputError(f"threshold must be nonnegative, got {epsilon}")
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.maximum(0.0, np.abs(x) - epsilon)


def _check_tau(tau):
    if tau <= 0:
        raise InvalidInputError(f"tau must be positive, got {tau}")
    return float(tau)


def prox_l1(q, tau):
    """Residual minimizing (e - q)^2 + tau*|e| per element."""
    tau = _check_tau(tau)
    return soft_threshold(0.5 * tau, q)


def prox_elastic_net(q, tau):
    """Residual minimizing (e - q)^2 + tau*(|e| + e^2)/2 per element.

    The absolute and squared terms carry equal weight; completing the
    square reduces the problem to a rescaled soft threshold.
    """
    tau = _check_tau(tau)
    q = np.asarray(q, dtype=float)
    return soft_threshold(tau / (4.0 + 2.0 * tau), (2.0 / (2.0 + tau)) * q)


def prox_group_sparse(q, tau):
    """Column-wise group shrinkage with symmetric row zeroing.

    A column is kept (and scaled by 1 - 1/(tau*||q_j||)) only when its
    norm exceeds 1/tau; afterwards every row whose index matches a
    zeroed column is zeroed as well.
    """
    tau = _check_tau(tau)
    q = np.asarray(q, dtype=float)
    if q.ndim != 2:
        raise InvalidInputError(f"expected a 2D residual grid, got shape {q.shape}")
    norms = np.linalg.norm(q, axis=0)
    keep = norms > 1.0 / tau
    scale = np.zeros_like(norms)
    scale[keep] = 1.0 - 1.0 / (tau * norms[keep])
    e = q * scale[None, :]
    zeroed_cols = np.flatnonzero(~keep)
    matching_rows = zeroed_cols[zeroed_cols < e.shape[0]]
    e[matching_rows, :] = 0.0
    return e


def update_residual(kind, q, tau):
    """Dispatch the residual update for the given loss."""
    kind = LossKind.parse(kind)
    if kind is LossKind.L2:
        return np.zeros_like(np.asarray(q, dtype=float))
    if kind is LossKind.L1:
        return prox_l1(q, tau)
    if kind is LossKind.L1L2:
        return prox_elastic_net(q, tau)
    return prox_group_sparse(q, tau)


def penalty(kind, residual, tau):
    """Total penalty the residual contributes to the training objective.

    This is the exact term each prox above minimizes together with the
    squared distance, so the alternation descends on data + penalty.
    """
    kind = LossKind.parse(kind)
    tau = _check_tau(tau)
    e = np.asarray(residual, dtype=float)
    if kind is LossKind.L2:
        return 0.0
    if kind is LossKind.L1:
        return tau * float(np.sum(np.abs(e)))
    if kind is LossKind.L1L2:
        return 0.5 * tau * float(np.sum(np.abs(e) + e * e))
    return (2.0 / tau) * float(np.sum(np.linalg.norm(e, axis=0)))
