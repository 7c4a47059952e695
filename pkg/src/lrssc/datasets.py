"""Synthetic union-of-subspaces data and plain-text matrix / label files.

The generator draws a pool of orthonormal directions, hands each subspace a
window of the pool (consecutive windows overlap so the union hits a target
rank below d*L), rotates each basis randomly within its span, and fills the
subspaces with Gaussian coefficients.  File formats are deliberately dumb:
comma-separated feature rows with 17 significant digits for matrices, one
base-10 integer per line for labels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_GENERATION_ATTEMPTS = 5
_CONTAINMENT_TOL = 1e-6


@dataclass
class SyntheticSpec:
    """Shape and noise of a synthetic clustering problem."""

    ambient_dim: int = 100
    subspace_dim: int = 5
    num_subspaces: int = 3
    points_per_subspace: int = 50
    noise_variance: float = 0.0
    union_rank: int = 10
    seed: int = 0

    def __post_init__(self):
        if min(self.ambient_dim, self.subspace_dim, self.num_subspaces,
               self.points_per_subspace) < 1:
            raise ValueError("dimensions and counts must be positive")
        if self.noise_variance < 0:
            raise ValueError(f"noise_variance must be nonnegative, got {self.noise_variance}")
        if not self.subspace_dim <= self.union_rank <= self.subspace_dim * self.num_subspaces:
            raise ValueError(
                f"union_rank must lie in [{self.subspace_dim}, "
                f"{self.subspace_dim * self.num_subspaces}], got {self.union_rank}")
        if self.ambient_dim < self.union_rank:
            raise ValueError(
                f"ambient_dim {self.ambient_dim} cannot host union rank {self.union_rank}")


@dataclass
class LabeledDataset:
    """Data matrix (columns are points) with ground-truth integer labels."""

    X: np.ndarray
    truth: np.ndarray


def _window_starts(rank: int, dim: int, count: int) -> list[int]:
    if count == 1:
        return [0]
    step = (rank - dim) / (count - 1)
    return [round(i * step) for i in range(count)]


def _random_orthonormal(rng, rows: int, cols: int) -> np.ndarray:
    q, _ = np.linalg.qr(rng.standard_normal((rows, cols)))
    return q[:, :cols]


def _contained(U, V) -> bool:
    # span(U) inside span(V)?
    resid = U - V @ (V.T @ U)
    return np.linalg.norm(resid) <= _CONTAINMENT_TOL * np.sqrt(U.shape[1])


def generate_synthetic(spec: SyntheticSpec) -> LabeledDataset:
    """Sample a union-of-subspaces dataset; deterministic in ``spec.seed``."""
    rng = np.random.default_rng(spec.seed)
    d, L, r = spec.subspace_dim, spec.num_subspaces, spec.union_rank
    starts = _window_starts(r, d, L)
    bases = None
    for _ in range(_GENERATION_ATTEMPTS):
        pool = _random_orthonormal(rng, spec.ambient_dim, r)
        candidate = []
        for start in starts:
            window = pool[:, start:start + d]
            rotation = _random_orthonormal(rng, d, d)
            candidate.append(window @ rotation)
        overlapped = any(
            _contained(candidate[i], candidate[j])
            for i in range(L) for j in range(L) if i != j)
        if not overlapped:
            bases = candidate
            break
    if bases is None:
        raise ValueError(
            f"could not draw {L} mutually non-contained {d}-dim subspaces "
            f"with union rank {r}")

    blocks = [basis @ rng.standard_normal((d, spec.points_per_subspace))
              for basis in bases]
    X = np.hstack(blocks)
    if spec.noise_variance > 0:
        X = X + rng.normal(0.0, np.sqrt(spec.noise_variance), size=X.shape)
    truth = np.repeat(np.arange(L), spec.points_per_subspace)
    return LabeledDataset(X=X, truth=truth)


def add_gaussian_noise(X, variance: float, seed: int) -> np.ndarray:
    """Entrywise N(0, variance) noise; variance 0 returns an unchanged copy."""
    if variance < 0:
        raise ValueError(f"variance must be nonnegative, got {variance}")
    X = np.array(X, dtype=float)
    if variance == 0:
        return X
    rng = np.random.default_rng(seed)
    return X + rng.normal(0.0, np.sqrt(variance), size=X.shape)


def save_matrix(path, X) -> None:
    """Write a matrix as comma-separated rows, 17 significant digits per entry."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    with open(path, "w") as fh:
        for row in X:
            fh.write(",".join(format(v, ".17g") for v in row))
            fh.write("\n")


def load_matrix(path) -> np.ndarray:
    """Read a matrix written by save_matrix; errors name the offending line/column."""
    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if width is None:
                width = len(parts)
            elif len(parts) != width:
                raise ValueError(
                    f"{path}: line {lineno} has {len(parts)} columns, expected {width}")
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                for col, p in enumerate(parts, start=1):
                    try:
                        float(p)
                    except ValueError:
                        raise ValueError(
                            f"{path}: line {lineno}, column {col}: "
                            f"cannot parse {p.strip()!r} as a number") from None
                raise
    if not rows:
        raise ValueError(f"{path}: empty matrix file")
    return np.asarray(rows, dtype=float)


def save_labels(path, labels) -> None:
    """Write integer labels, one per line."""
    labels = np.asarray(labels)
    with open(path, "w") as fh:
        for v in labels:
            fh.write(f"{int(v)}\n")


def load_labels(path) -> np.ndarray:
    """Read one integer label per line; errors name the offending line."""
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(int(line))
            except ValueError:
                raise ValueError(
                    f"{path}: line {lineno}: cannot parse {line!r} as an integer") from None
    if not out:
        raise ValueError(f"{path}: empty label file")
    return np.asarray(out, dtype=int)
