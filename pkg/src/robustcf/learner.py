"""Alternating filter/residual training in the frequency domain.

One alternation step is: solve the dual filter in closed form for the
current residual, recompute the raw fit residual, then apply the
loss-specific residual update.  The squared baseline performs exactly
one step (residual pinned at zero), which is the classic closed-form
kernelized correlation filter.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DivergenceError,
    InvalidInputError,
    NumericError,
    SingularityError,
)
from .kernel import gaussian_correlation
from .losses import LossKind, penalty, update_residual
from .spectral import dft2, idft2

# Max imaginary residue of the spectrally-evaluated quadratic
# regularizer, relative to its real part.
REG_IMAG_TOL = 1e-6

DEFAULT_KERNEL_SIGMA = 0.5


@dataclass
class LearnerParams:
    """Weights and stopping rules of the alternating solver."""

    lam: float = 1e-4
    tau: float = 1e-4
    loss: LossKind = LossKind.L1L2
    max_iters: int = 100
    rel_tol: float = 1e-3

    def __post_init__(self):
        self.loss = LossKind.parse(self.loss)
        if self.lam <= 0:
            raise InvalidInputError(f"lam must be positive, got {self.lam}")
        if self.tau <= 0:
            raise InvalidInputError(f"tau must be positive, got {self.tau}")
        if self.max_iters < 1:
            raise InvalidInputError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.rel_tol <= 0:
            raise InvalidInputError(f"rel_tol must be positive, got {self.rel_tol}")


@dataclass
class TrainResult:
    """Learned dual filter plus diagnostics of the alternation."""

    alphaf: np.ndarray
    residual: np.ndarray
    iterations: int
    objective_trace: list = field(default_factory=list)
    converged: bool = True


def solve_filter(labels_hat, residual_hat, kernel_hat, lam):
    """Closed-form dual coefficients (labels - residual) / (kernel + lam),
    elementwise in the frequency domain."""
    labels_hat = np.asarray(labels_hat, dtype=complex)
    residual_hat = np.asarray(residual_hat, dtype=complex)
    kernel_hat = np.asarray(kernel_hat, dtype=complex)
    if not (labels_hat.shape == residual_hat.shape == kernel_hat.shape):
        raise InvalidInputError(
            "spectra shapes differ: "
            f"{labels_hat.shape}, {residual_hat.shape}, {kernel_hat.shape}"
        )
    denom = kernel_hat + lam
    magnitude = np.abs(denom)
    if np.any(magnitude < np.finfo(float).tiny):
        u, v = np.unravel_index(int(np.argmin(magnitude)), magnitude.shape)
        raise SingularityError(
            f"regularized kernel spectrum vanishes at bin ({int(u)}, {int(v)})"
        )
    return (labels_hat - residual_hat) / denom


def _objective_terms(labels, alphaf, residual, kernel_hat, params):
    # Overflow to inf is deliberate here; train() turns it into a
    # DivergenceError with the trace attached.
    with np.errstate(over="ignore", invalid="ignore"):
        response = idft2(alphaf * kernel_hat)
        data = float(np.sum((response + residual - labels) ** 2))
        quad = complex(np.sum(kernel_hat * (alphaf.real**2 + alphaf.imag**2)))
        if abs(quad.imag) > REG_IMAG_TOL * max(abs(quad.real), np.finfo(float).tiny):
            raise NumericError(
                f"quadratic regularizer has imaginary residue {quad.imag:.3e} "
                f"against real part {quad.real:.3e}"
            )
        reg = params.lam / labels.size * quad.real
        return data + reg + penalty(params.loss, residual, params.tau)


def objective(features, labels, alphaf, residual, params, kernel_sigma=DEFAULT_KERNEL_SIGMA):
    """Training objective: squared fit error of the shifted samples,
    quadratic filter regularizer (evaluated spectrally through the dual),
    and the loss penalty on the residual."""
    labels = np.asarray(labels, dtype=float)
    corr = gaussian_correlation(features, features, kernel_sigma)
    return _objective_terms(labels, np.asarray(alphaf, dtype=complex),
                            np.asarray(residual, dtype=float), corr.k_hat, params)


def dump_diagnostics(result, path):
    """Write the per-iteration objective values and the final residual
    grid as raw JSON, for offline inspection of what the loss absorbed."""
    import json

    payload = {
        "iterations": result.iterations,
        "converged": result.converged,
        "objective_trace": [float(v) for v in result.objective_trace],
        "residual": np.asarray(result.residual, dtype=float).tolist(),
    }
    with open(path, "w", encoding="ascii") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return path


def train(features, labels, params=None, kernel_sigma=DEFAULT_KERNEL_SIGMA):
    """Alternate the closed-form filter and the residual update.

    Starts from a zero residual and stops when its relative change
    ||e_t - e_{t-1}|| / max(1, ||e_{t-1}||) drops below rel_tol or after
    max_iters steps; the squared baseline stops after one step.  The
    objective value after every iteration is recorded in the trace.
    """
    params = params or LearnerParams()
    labels = np.asarray(labels, dtype=float)
    if labels.ndim != 2:
        raise InvalidInputError(f"labels must be 2D, got shape {labels.shape}")
    corr = gaussian_correlation(features, features, kernel_sigma)
    if corr.k.shape != labels.shape:
        raise InvalidInputError(
            f"label grid {labels.shape} does not match feature grid {corr.k.shape}"
        )
    labels_hat = dft2(labels)
    residual = np.zeros_like(labels)
    trace = []
    iterations = 0
    alphaf = None
    converged = False
    for _ in range(params.max_iters):
        iterations += 1
        alphaf = solve_filter(labels_hat, dft2(residual), corr.k_hat, params.lam)
        raw = idft2(labels_hat - alphaf * corr.k_hat)
        new_residual = update_residual(params.loss, raw, params.tau)
        value = _objective_terms(labels, alphaf, new_residual, corr.k_hat, params)
        if not np.isfinite(value):
            raise DivergenceError(
                f"objective became non-finite at iteration {iterations}",
                trace=trace + [value],
            )
        trace.append(value)
        change = np.linalg.norm(new_residual - residual)
        change /= max(1.0, np.linalg.norm(residual))
        residual = new_residual
        if params.loss is LossKind.L2 or change < params.rel_tol:
            converged = True
            break
    return TrainResult(
        alphaf=alphaf,
        residual=residual,
        iterations=iterations,
        objective_trace=trace,
        converged=converged,
    )
