"""Shared fixtures and independent oracles for the test suite.

The oracles deliberately avoid the library's own code paths: prox outputs
are checked against brute-force objective minimization, clustering error
against explicit permutation search, and the closed-form low-rank solution
against a proximal-gradient iteration run to stationarity.
"""

import itertools

import numpy as np
import pytest

from lrssc import SolverConfig, SyntheticSpec, generate_synthetic


def brute_force_prox_objective(y, penalty, candidates):
    """Smallest value of 0.5*(y - x)^2 + penalty(x) over the candidate set."""
    obj = 0.5 * (y - candidates) ** 2 + penalty(candidates)
    return float(obj.min())


def prox_candidates(y, span, n=10_000):
    """Dense grid covering the prox search range, plus the exact endpoints."""
    grid = np.linspace(-span, span, n)
    return np.concatenate([grid, [0.0, y]])


def l1_penalty(lam):
    return lambda x: lam * np.abs(x)


def l0_penalty(lam):
    """lam per nonzero entry (the objective hard thresholding minimizes)."""
    return lambda x: lam * (x != 0.0)


def firm_penalty(lam, a):
    """Concave ramp penalty whose prox is the firm threshold with knee a."""
    def pen(x):
        ax = np.abs(x)
        inner = lam * (ax - ax**2 / (2.0 * a))
        return np.where(ax <= a, inner, 0.5 * lam * a)
    return pen


def brute_force_ce(pred, truth):
    """Exact minimum misassignment fraction over all label permutations."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    n_labels = int(max(pred.max(), truth.max())) + 1
    best = pred.size
    for perm in itertools.permutations(range(n_labels)):
        relabeled = np.asarray(perm)[pred]
        best = min(best, int(np.count_nonzero(relabeled != truth)))
    return best / pred.size


def ista_low_rank(X, lam, tol=1e-10, max_iters=500_000):
    """Proximal-gradient minimizer of 0.5*||X - XC||_F^2 + (1/lam)*||C||_*.

    Same minimizer as the closed form under test (objectives differ by the
    constant factor lam).  Step 1/||X||_2^2; stops when the iterate moves
    less than tol in Frobenius norm.
    """
    X = np.asarray(X, dtype=float)
    gram = X.T @ X
    step = 1.0 / np.linalg.norm(X, 2) ** 2
    C = np.zeros((X.shape[1], X.shape[1]))
    for _ in range(max_iters):
        U, s, Vt = np.linalg.svd(C - step * (gram @ C - gram), full_matrices=False)
        C_next = (U * np.maximum(s - step / lam, 0.0)) @ Vt
        delta = np.linalg.norm(C_next - C)
        C = C_next
        if delta <= tol:
            return C
    raise AssertionError("proximal-gradient oracle did not reach stationarity")


def block_affinity(block_sizes, off_block=0.0, seed=0):
    """Block-diagonal affinity with positive in-block weights.

    Returns (W, truth).  In-block entries are drawn uniform in [0.5, 1.5]
    and symmetrized; off-block entries are the constant ``off_block``.
    """
    n = int(sum(block_sizes))
    rng = np.random.default_rng(seed)
    W = np.full((n, n), float(off_block))
    truth = np.empty(n, dtype=int)
    start = 0
    for label, size in enumerate(block_sizes):
        stop = start + size
        block = rng.uniform(0.5, 1.5, size=(size, size))
        W[start:stop, start:stop] = block + block.T
        truth[start:stop] = label
        start = stop
    np.fill_diagonal(W, 0.0)
    return W, truth


SMALL_SPEC = SyntheticSpec(ambient_dim=30, subspace_dim=3, num_subspaces=3,
                           points_per_subspace=15, union_rank=6, seed=5)


@pytest.fixture(scope="session")
def small_dataset():
    """30-dim, 3 overlapping 3-dim subspaces, 45 points; noiseless."""
    return generate_synthetic(SMALL_SPEC)


@pytest.fixture(scope="session")
def bench_dataset():
    """The full benchmark construction: 100-dim, 3x5-dim, rank 10, 150 points."""
    return generate_synthetic(SyntheticSpec(seed=2024))


@pytest.fixture()
def fast_config():
    """Solver settings sized for unit tests (small iteration budget)."""
    return SolverConfig(max_iters=40)
