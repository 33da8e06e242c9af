"""Release-gate self checks: independent oracles for the core math.

Each check recomputes a result along a second, slower route (dense
linear algebra, explicit cyclic shifts, scalar grid search, known
ground truth) and compares against the fast path.  ``run_selftest``
prints one PASS/FAIL line per property.
"""

import numpy as np

from .harness import cle as box_cle
from .kernel import explicit_kernel_matrix, gaussian_correlation
from .learner import LearnerParams, solve_filter
from .losses import LossKind, prox_elastic_net, prox_group_sparse, prox_l1
from .spectral import dft2, gaussian_labels, idft2
from .synthetic import translating_sequence
from .tracker import TrackerParams, track_sequence

GRID_STEP = 1e-4
OBJECTIVE_SLACK = 1e-8


def check_fft_roundtrip(rng, trials=10):
    """idft2(dft2(g)) returns g to 1e-10 relative."""
    worst = 0.0
    for _ in range(trials):
        g = rng.standard_normal((rng.integers(2, 24), rng.integers(2, 24)))
        err = np.max(np.abs(idft2(dft2(g)) - g)) / max(np.max(np.abs(g)), 1e-300)
        worst = max(worst, err)
    return worst <= 1e-10, f"max relative error {worst:.3e}"


def check_parseval(rng, trials=10):
    """Spatial and spectral energies agree to 1e-9 relative."""
    worst = 0.0
    for _ in range(trials):
        g = rng.standard_normal((rng.integers(2, 24), rng.integers(2, 24)))
        spatial = np.sum(g * g)
        spectral = np.sum(np.abs(dft2(g)) ** 2) / g.size
        worst = max(worst, abs(spatial - spectral) / spatial)
    return worst <= 1e-9, f"max relative error {worst:.3e}"


def check_circulant_eigenvalues(rng, trials=10):
    """Dense kernel-matrix eigenvalues match the DFT of its first row."""
    worst = 0.0
    for _ in range(trials):
        a = rng.uniform(-0.5, 0.5, size=(6, 6))
        dense = explicit_kernel_matrix(a, sigma=0.5)
        eigs = np.sort(np.linalg.eigvalsh(dense))
        corr = gaussian_correlation(a, a, sigma=0.5)
        spectral = np.sort(corr.k_hat.real, axis=None)
        worst = max(worst, float(np.max(np.abs(eigs - spectral))))
    return worst <= 1e-8, f"max eigenvalue deviation {worst:.3e}"


def check_dense_filter_solve(rng, trials=20, fault=0.0):
    """The spectral closed form solves the dense regularized system."""
    lam = 1e-4
    worst = 0.0
    for _ in range(trials):
        a = rng.uniform(-0.5, 0.5, size=(8, 8))
        labels = gaussian_labels(8, 8, sigma=1.0)
        corr = gaussian_correlation(a, a, sigma=0.5)
        alphaf = solve_filter(dft2(labels), np.zeros_like(corr.k_hat),
                              corr.k_hat, lam)
        fast = idft2(alphaf).ravel()
        dense = explicit_kernel_matrix(a, sigma=0.5)
        direct = np.linalg.solve(dense + lam * np.eye(dense.shape[0]), labels.ravel())
        worst = max(worst, float(np.max(np.abs(fast + fault - direct))))
    return worst <= 1e-8, f"max coefficient deviation {worst:.3e}"


def _grid_minimum(objective_fn, radius):
    grid = np.arange(-radius, radius + GRID_STEP, GRID_STEP)
    return float(np.min(objective_fn(grid)))


def check_prox_l1(rng, trials=1000):
    """Soft thresholding beats a dense scalar grid on (e-q)^2 + tau|e|."""
    worst = -np.inf
    for _ in range(trials):
        q = float(rng.uniform(-3, 3))
        tau = float(rng.uniform(1e-6, 3))
        e = float(prox_l1(np.array([[q]]), tau)[0, 0])
        closed = (e - q) ** 2 + tau * abs(e)
        best = _grid_minimum(lambda g: (g - q) ** 2 + tau * np.abs(g),
                             max(3 * abs(q), 1.0))
        worst = max(worst, closed - best)
    return worst <= OBJECTIVE_SLACK, f"max objective excess {worst:.3e}"


def check_prox_elastic_net(rng, trials=1000):
    """Elastic-net update beats the grid on (e-q)^2 + tau(|e|+e^2)/2."""
    worst = -np.inf
    for _ in range(trials):
        q = float(rng.uniform(-3, 3))
        tau = float(rng.uniform(1e-6, 3))
        e = float(prox_elastic_net(np.array([[q]]), tau)[0, 0])
        closed = (e - q) ** 2 + 0.5 * tau * (abs(e) + e * e)
        best = _grid_minimum(
            lambda g: (g - q) ** 2 + 0.5 * tau * (np.abs(g) + g * g),
            max(3 * abs(q), 1.0),
        )
        worst = max(worst, closed - best)
    return worst <= OBJECTIVE_SLACK, f"max objective excess {worst:.3e}"


def check_prox_group(rng, trials=200):
    """Column shrinkage beats radial search on ||e-q||^2 + (2/tau)||e||."""
    worst = -np.inf
    for _ in range(trials):
        q = rng.uniform(-3, 3, size=(6, 1))
        tau = float(rng.uniform(0.05, 3))
        e = prox_group_sparse(q, tau)[:, 0]
        qn = float(np.linalg.norm(q))
        closed = float(np.sum((e - q[:, 0]) ** 2)) + (2.0 / tau) * float(
            np.linalg.norm(e)
        )
        radii = np.arange(0.0, 3 * qn + GRID_STEP, GRID_STEP)
        candidates = (radii - qn) ** 2 + (2.0 / tau) * radii
        worst = max(worst, closed - float(np.min(candidates)))
    return worst <= OBJECTIVE_SLACK, f"max objective excess {worst:.3e}"


def check_synthetic_tracking(n_frames=15):
    """Every loss follows a translating texture within 2 px per frame."""
    frames, boxes = translating_sequence(n_frames=n_frames, seed=0)
    worst = 0.0
    for loss in LossKind:
        params = TrackerParams(
            learner=LearnerParams(loss=loss), feature="grayscale"
        )
        records = track_sequence(frames, boxes[0], params)
        errors = [box_cle(r.box, gt) for r, gt in zip(records, boxes)]
        worst = max(worst, max(errors))
    return worst <= 2.0, f"max per-frame center error {worst:.3f} px"


def run_selftest(seed=0, inject_fault=False, stream=None):
    """Run every property; returns True when all pass."""
    import sys

    stream = stream or sys.stdout
    fault = 1e-6 if inject_fault else 0.0
    checks = [
        ("fft-roundtrip", lambda: check_fft_roundtrip(np.random.default_rng(seed))),
        ("parseval", lambda: check_parseval(np.random.default_rng(seed))),
        ("circulant-eigenvalues",
         lambda: check_circulant_eigenvalues(np.random.default_rng(seed))),
        ("dense-filter-solve",
         lambda: check_dense_filter_solve(np.random.default_rng(seed), fault=fault)),
        ("prox-l1-grid", lambda: check_prox_l1(np.random.default_rng(seed))),
        ("prox-elastic-net-grid",
         lambda: check_prox_elastic_net(np.random.default_rng(seed))),
        ("prox-group-radial", lambda: check_prox_group(np.random.default_rng(seed))),
        ("synthetic-tracking", check_synthetic_tracking),
    ]
    all_ok = True
    for name, fn in checks:
        ok, detail = fn()
        all_ok &= ok
        stream.write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")
    return all_ok
