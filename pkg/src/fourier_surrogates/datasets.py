"""Dataset containers, preprocessing transforms, and synthetic generators.

Every transform is pure: it returns a new Dataset and appends one entry
to the provenance list with the exact parameters it used (fitted
minima/maxima, PCA components, kept row indices, split indices).
``replay`` re-applies a provenance chain to the raw data with the stored
parameters, which reproduces the processed arrays bit for bit.
"""

from __future__ import annotations

import csv
import json
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import simulator, spectrum
from .errors import InputFormatError
from .surrogate import evaluate_terms

__all__ = [
    "Dataset",
    "load_csv",
    "normalize",
    "rescale_targets",
    "pca",
    "dbscan",
    "synth_generate",
    "train_test_split",
    "replay",
    "save_dataset",
    "load_dataset",
]


@dataclass(frozen=True)
class Dataset:
    """Feature matrix X (rows = samples), target vector y, provenance log."""

    X: np.ndarray
    y: np.ndarray
    provenance: tuple = ()

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).ravel()
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"{X.shape[0]} rows but {y.shape[0]} targets")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "provenance", tuple(self.provenance))

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def to_json_dict(self) -> dict:
        return {
            "X": [[float(v) for v in row] for row in self.X],
            "y": [float(v) for v in self.y],
            "provenance": list(self.provenance),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Dataset":
        return cls(
            X=np.asarray(doc["X"], dtype=float),
            y=np.asarray(doc["y"], dtype=float),
            provenance=tuple(doc.get("provenance", ())),
        )


def _append(ds: Dataset, X: np.ndarray, y: np.ndarray, entry: dict) -> Dataset:
    return Dataset(X=X, y=y, provenance=ds.provenance + (entry,))


def load_csv(path, target_column: str) -> Dataset:
    """Parse a headered numeric CSV into features + the named target column.

    Rows containing NaN or infinity are dropped; the count is recorded in
    provenance. Missing columns and non-numeric cells raise
    InputFormatError with the offending location.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputFormatError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if target_column not in header:
            raise InputFormatError(
                f"{path}: target column {target_column!r} not found "
                f"(columns: {', '.join(header)})"
            )
        t_idx = header.index(target_column)
        feature_cols = [h for i, h in enumerate(header) if i != t_idx]
        rows = []
        for r, cells in enumerate(reader, start=2):
            if not cells or all(not c.strip() for c in cells):
                continue
            if len(cells) != len(header):
                raise InputFormatError(
                    f"{path}: row {r} has {len(cells)} cells, expected {len(header)}"
                )
            parsed = []
            for c, cell in enumerate(cells):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise InputFormatError(
                        f"{path}: row {r}, column {header[c]!r}: "
                        f"non-numeric cell {cell.strip()!r}"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise InputFormatError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=float)
    finite = np.all(np.isfinite(data), axis=1)
    dropped = int(np.sum(~finite))
    data = data[finite]
    if data.shape[0] == 0:
        raise InputFormatError(f"{path}: every row contains NaN or infinity")
    y = data[:, t_idx]
    X = np.delete(data, t_idx, axis=1)
    entry = {
        "op": "load_csv",
        "path": str(path),
        "target_column": target_column,
        "feature_columns": feature_cols,
        "dropped_non_finite_rows": dropped,
    }
    return Dataset(X=X, y=y, provenance=(entry,))


def _apply_normalize(X: np.ndarray, mins: np.ndarray, maxs: np.ndarray) -> np.ndarray:
    span = maxs - mins
    out = np.zeros_like(X)
    varying = span > 0
    out[:, varying] = (X[:, varying] - mins[varying]) / span[varying]
    return out


def normalize(ds: Dataset) -> Dataset:
    """Min-max scale each feature column to [0,1]; constant columns map to 0."""
    if ds.n_rows == 0:
        raise ValueError("empty dataset")
    mins = ds.X.min(axis=0)
    maxs = ds.X.max(axis=0)
    X = _apply_normalize(ds.X, mins, maxs)
    entry = {
        "op": "normalize",
        "feature_min": [float(v) for v in mins],
        "feature_max": [float(v) for v in maxs],
    }
    return _append(ds, X, ds.y, entry)


def _apply_rescale(y: np.ndarray, lo: float, hi: float) -> np.ndarray:
    half = (hi - lo) / 2.0
    if half <= 0:
        return np.zeros_like(y)
    center = (hi + lo) / 2.0
    return (y - center) / half


def rescale_targets(ds: Dataset) -> Dataset:
    """Affinely map targets onto [-1, 1] (the observable's range)."""
    if ds.n_rows == 0:
        raise ValueError("empty dataset")
    lo = float(ds.y.min())
    hi = float(ds.y.max())
    y = _apply_rescale(ds.y, lo, hi)
    entry = {"op": "rescale_targets", "target_min": lo, "target_max": hi}
    return _append(ds, ds.X, y, entry)


def _apply_pca(
    X: np.ndarray,
    mean: np.ndarray,
    components: np.ndarray,
    post_min: np.ndarray,
    post_max: np.ndarray,
) -> np.ndarray:
    Z = (X - mean) @ components.T
    return _apply_normalize(Z, post_min, post_max)


def pca(ds: Dataset, k: int) -> Dataset:
    """Project onto the top-k covariance eigenvectors, then rescale to [0,1].

    Eigenvectors are ordered by descending eigenvalue with the
    largest-magnitude loading made positive; explained-variance ratios go
    into provenance together with the mean, the components, and the
    post-projection column ranges (everything replay needs).
    """
    if not (1 <= k <= ds.n_features):
        raise ValueError(f"k={k} out of range 1..{ds.n_features}")
    if ds.n_rows < 2:
        raise ValueError("PCA needs at least 2 rows")
    mean = ds.X.mean(axis=0)
    Xc = ds.X - mean
    cov = (Xc.T @ Xc) / (ds.n_rows - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]
    for j in range(eigvecs.shape[1]):
        lead = np.argmax(np.abs(eigvecs[:, j]))
        if eigvecs[lead, j] < 0:
            eigvecs[:, j] = -eigvecs[:, j]
    total = float(eigvals.sum())
    ratios = eigvals / total if total > 0 else np.zeros_like(eigvals)
    components = eigvecs[:, :k].T
    Z = Xc @ components.T
    post_min = Z.min(axis=0)
    post_max = Z.max(axis=0)
    X = _apply_normalize(Z, post_min, post_max)
    entry = {
        "op": "pca",
        "k": int(k),
        "mean": [float(v) for v in mean],
        "components": [[float(v) for v in row] for row in components],
        "explained_variance_ratio": [float(v) for v in ratios[:k]],
        "post_min": [float(v) for v in post_min],
        "post_max": [float(v) for v in post_max],
    }
    return _append(ds, X, ds.y, entry)


def dbscan(ds: Dataset, eps: float, min_pts: int) -> tuple[np.ndarray, Dataset]:
    """Density clustering; returns labels (noise = -1) and the de-noised dataset.

    A point is core iff at least min_pts points (itself included) lie
    within Euclidean distance eps. Clusters are the connected components
    of core points together with their border points; a border point
    reachable from several clusters goes to the first cluster discovered
    in row order. Noise rows are removed from the returned dataset.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if min_pts < 1:
        raise ValueError("min_pts must be at least 1")
    X = ds.X
    n = ds.n_rows
    sq_dists = np.sum((X[:, None, :] - X[None, :, :]) ** 2, axis=-1)
    within = sq_dists <= eps * eps
    neighbor_lists = [np.flatnonzero(within[i]) for i in range(n)]
    core = np.array([len(nb) >= min_pts for nb in neighbor_lists])
    labels = np.full(n, -1, dtype=int)
    cluster = 0
    for i in range(n):
        if not core[i] or labels[i] != -1:
            continue
        labels[i] = cluster
        queue = deque([i])
        while queue:
            j = queue.popleft()
            for m in neighbor_lists[j]:
                if labels[m] == -1:
                    labels[m] = cluster
                    if core[m]:
                        queue.append(m)
        cluster += 1
    kept = np.flatnonzero(labels >= 0)
    entry = {
        "op": "dbscan",
        "eps": float(eps),
        "min_pts": int(min_pts),
        "kept_rows": [int(i) for i in kept],
        "n_noise": int(n - len(kept)),
        "n_clusters": int(cluster),
    }
    filtered = _append(ds, X[kept], ds.y[kept], entry)
    return labels, filtered


def synth_generate(
    d: int, size: int, kind: str = "trig-poly", seed: int = 0, noise_sd: float = 0.0
) -> Dataset:
    """Synthetic regression data on [0,1]^d, deterministic per seed.

    trig-poly: targets are a random truncated Fourier series with integer
    frequencies bounded by 2 per feature, coefficients drawn normal and
    rescaled so the clean targets span [-1, 1]; the rescaled ground-truth
    coefficients land in provenance, so with noise_sd = 0 the targets are
    exactly recomputable from them. circuit: targets are the expectation
    values of a randomly parameterized 2-layer reuploading circuit on d
    qubits. Gaussian noise with standard deviation noise_sd is added on
    top in both cases.
    """
    if d < 1 or size < 1:
        raise ValueError("d and size must be at least 1")
    if kind not in ("trig-poly", "circuit"):
        raise ValueError(f"unknown kind {kind!r}")
    ss = np.random.SeedSequence(seed)
    x_ss, model_ss, noise_ss = ss.spawn(3)
    X = np.random.default_rng(x_ss).random((size, d))
    entry = {"op": "synth", "kind": kind, "d": int(d), "size": int(size),
             "seed": int(seed), "noise_sd": float(noise_sd)}
    if kind == "trig-poly":
        desc = spectrum.SpectrumDescriptor(omega_max=(2,) * d)
        n_terms = min(spectrum.canonical_count(desc), 2 * d + 3)
        model_seed = int(model_ss.generate_state(1)[0])
        freqs = spectrum.sample_distinct(desc, n_terms, seed=model_seed)
        rng = np.random.default_rng(model_ss)
        intercept = float(rng.normal())
        a = rng.normal(size=n_terms)
        b = rng.normal(size=n_terms)
        raw = evaluate_terms(X, intercept, freqs, a, b)
        half = (float(raw.max()) - float(raw.min())) / 2.0
        center = (float(raw.max()) + float(raw.min())) / 2.0
        if half > 0:
            intercept = (intercept - center) / half
            a = a / half
            b = b / half
        else:
            intercept, a, b = 0.0, np.zeros_like(a), np.zeros_like(b)
        y = evaluate_terms(X, intercept, freqs, a, b)
        entry["ground_truth"] = {
            "intercept": intercept,
            "terms": [
                {"freq": [int(v) for v in f], "a": float(av), "b": float(bv)}
                for f, av, bv in zip(freqs, a, b)
            ],
        }
    else:
        config = simulator.CircuitConfig(n_qubits=d, n_layers=2)
        param_seed = int(model_ss.generate_state(1)[0])
        params = simulator.ParameterSet.random(config, seed=param_seed)
        y = simulator.expectation_batch(config, params, X)
        entry["circuit"] = {
            "config": config.to_json_dict(),
            "param_seed": param_seed,
        }
    if noise_sd > 0:
        y = y + np.random.default_rng(noise_ss).normal(0.0, noise_sd, size)
    return Dataset(X=X, y=y, provenance=(entry,))


def train_test_split(ds: Dataset, fraction: float, seed: int = 0) -> tuple[Dataset, Dataset]:
    """Seed-deterministic shuffle split; fraction is the train share."""
    if not (0.0 < fraction < 1.0):
        raise ValueError("fraction must lie strictly between 0 and 1")
    n = ds.n_rows
    n_train = int(round(fraction * n))
    if n_train < 1 or n_train >= n:
        raise ValueError(f"fraction {fraction} leaves an empty side for {n} rows")
    perm = np.random.default_rng(seed).permutation(n)
    tr = perm[:n_train]
    te = perm[n_train:]
    base = {"fraction": float(fraction), "seed": int(seed)}
    train = _append(
        ds, ds.X[tr], ds.y[tr],
        {"op": "split", "role": "train", "indices": [int(i) for i in tr], **base},
    )
    test = _append(
        ds, ds.X[te], ds.y[te],
        {"op": "split", "role": "test", "indices": [int(i) for i in te], **base},
    )
    return train, test


def replay(raw: Dataset, provenance) -> Dataset:
    """Re-apply a provenance chain to raw arrays using the stored parameters.

    Generator entries (load_csv, synth) describe the raw data itself and
    are skipped. The same internal kernels run with the recorded
    parameters, so the result matches the original processed dataset bit
    for bit.
    """
    X, y = raw.X, raw.y
    applied = []
    for entry in provenance:
        op = entry["op"]
        if op in ("load_csv", "synth"):
            applied.append(entry)
            continue
        if op == "normalize":
            X = _apply_normalize(
                X,
                np.asarray(entry["feature_min"]),
                np.asarray(entry["feature_max"]),
            )
        elif op == "rescale_targets":
            y = _apply_rescale(y, entry["target_min"], entry["target_max"])
        elif op == "pca":
            X = _apply_pca(
                X,
                np.asarray(entry["mean"]),
                np.asarray(entry["components"]),
                np.asarray(entry["post_min"]),
                np.asarray(entry["post_max"]),
            )
        elif op == "dbscan":
            kept = np.asarray(entry["kept_rows"], dtype=int)
            X, y = X[kept], y[kept]
        elif op == "split":
            idx = np.asarray(entry["indices"], dtype=int)
            X, y = X[idx], y[idx]
        else:
            raise ValueError(f"unknown provenance op {op!r}")
        applied.append(entry)
    return Dataset(X=X, y=y, provenance=tuple(applied))


def save_dataset(ds: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(ds.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_dataset(path) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        return Dataset.from_json_dict(json.load(fh))
