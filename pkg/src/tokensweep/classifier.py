"""One-vs-rest linear classifier trained with Pegasos (stochastic subgradient
descent on the L2-regularized hinge loss).

All class problems share the sample order and step size, so they are trained
together: one pass over a shuffled index visits each sample once and updates
every class whose margin is violated. The bias is an extra always-on feature
and is regularized like any other weight.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .vectorizer import SparseVector, to_csr

CLASSES = ("positive", "neutral", "negative", "none")

DEFAULT_EPOCHS = 10
DEFAULT_SEED = 42
_MIN_SCALE = 1e-9


class TrainingError(ValueError):
    pass


@dataclass(frozen=True)
class TrainParams:
    epochs: int = DEFAULT_EPOCHS
    seed: int = DEFAULT_SEED
    lam: float | None = None  # None: 1 / number of training samples


@dataclass(frozen=True)
class LinearModel:
    classes: tuple[str, ...]
    weights: np.ndarray  # (n_classes, dim)
    bias: np.ndarray     # (n_classes,)
    lam: float
    epochs: int
    seed: int

    @property
    def dim(self) -> int:
        return self.weights.shape[1]

    def decision(self, v: SparseVector) -> np.ndarray:
        return self.weights[:, v.indices] @ v.weights + self.bias

    def predict(self, v: SparseVector) -> str:
        # np.argmax returns the first maximum, i.e. ties go to the earlier class
        return self.classes[int(np.argmax(self.decision(v)))]

    def decision_matrix(self, X: sp.csr_matrix) -> np.ndarray:
        return np.asarray(X @ self.weights.T) + self.bias

    def predict_many(self, X: sp.csr_matrix) -> list[str]:
        return [self.classes[i] for i in np.argmax(self.decision_matrix(X), axis=1)]

    def to_json(self) -> str:
        return json.dumps({
            "classes": list(self.classes),
            "bias": self.bias.tolist(),
            "weights": self.weights.tolist(),
            "lambda": self.lam, "epochs": self.epochs, "seed": self.seed,
        })

    @classmethod
    def from_json(cls, text: str) -> "LinearModel":
        d = json.loads(text)
        return cls(tuple(d["classes"]), np.array(d["weights"], dtype=np.float64),
                   np.array(d["bias"], dtype=np.float64), d["lambda"], d["epochs"], d["seed"])


def train(vectors: Sequence[SparseVector] | sp.csr_matrix, labels: Sequence[str], dim: int,
          params: TrainParams = TrainParams(), classes: Sequence[str] = CLASSES) -> LinearModel:
    """Fit one weight vector and bias per class; ``vectors`` may also be a CSR matrix."""
    n = vectors.shape[0] if sp.issparse(vectors) else len(vectors)
    if n != len(labels):
        raise TrainingError(f"{n} vectors but {len(labels)} labels")
    classes = tuple(classes)
    unknown = set(labels).difference(classes)
    if unknown:
        raise TrainingError(f"unknown label(s): {', '.join(sorted(unknown))}")
    if n < 2 or len(set(labels)) < 2:
        raise TrainingError("degenerate training set: need at least 2 samples of 2 distinct classes")
    if sp.issparse(vectors):
        if vectors.shape[1] != dim:
            raise TrainingError(f"matrix has {vectors.shape[1]} columns, expected {dim}")
        X = sp.csr_matrix(vectors)
    else:
        for v in vectors:
            if len(v) and (v.indices[-1] >= dim or v.indices[0] < 0):
                raise TrainingError(f"vector column {int(v.indices[-1])} outside dimension {dim}")
        X = to_csr(vectors, dim)
    if params.epochs < 1:
        raise TrainingError("epochs must be >= 1")

    lam = params.lam if params.lam is not None else 1.0 / n
    k = len(classes)
    class_pos = {c: i for i, c in enumerate(classes)}
    # y[i, c] = +1 when sample i belongs to class c, else -1
    y = -np.ones((n, k))
    y[np.arange(n), [class_pos[l] for l in labels]] = 1.0

    # Row `dim` holds the bias. The weights are kept as scale * V so the
    # per-step shrink costs O(1).
    Xa = sp.hstack([X, np.ones((n, 1))], format="csr")
    Xa.sort_indices()
    bounds = Xa.indptr
    rows = [(Xa.indices[bounds[i]:bounds[i + 1]], Xa.data[bounds[i]:bounds[i + 1]]) for i in range(n)]
    V = np.zeros((dim + 1, k))
    scale = 1.0
    rng = np.random.default_rng(params.seed)
    t = 0
    for _ in range(params.epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            cols, x = rows[i]
            margin = y[i] * (scale * (x @ V[cols]))
            shrink = 1.0 - 1.0 / t  # = 1 - eta * lam
            if shrink == 0.0:
                V[:] = 0.0
                scale = 1.0
            else:
                scale *= shrink
                if scale < _MIN_SCALE:
                    V *= scale
                    scale = 1.0
            violated = margin < 1.0
            if violated.any():
                step = (eta / scale) * (y[i] * violated)
                V[cols] += np.outer(x, step)
    W = V * scale
    return LinearModel(classes, np.ascontiguousarray(W[:dim].T), W[dim].copy(),
                       lam, params.epochs, params.seed)
