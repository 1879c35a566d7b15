"""C-SVM on a precomputed kernel, trained with an SMO-type dual solver.

The binary solver uses second-order working-set selection and the clipped
two-variable update of Fan, Chen and Lin; multiclass problems are handled
one-vs-rest.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .kernels import GramMatrix

logger = logging.getLogger(__name__)

DEFAULT_C_GRID = (0.001, 0.01, 0.1, 1.0, 10.0)
TAU = 1e-12
# floor for the 10*n*classes iteration cap; hard-margin-like C needs more on tiny sets
MIN_ITER = 100_000


@dataclass
class BinarySolution:
    alpha: np.ndarray
    rho: float
    iterations: int
    converged: bool


def smo_binary(K: np.ndarray, y: np.ndarray, C: float, tol: float = 1e-3,
               max_iter: int | None = None) -> BinarySolution:
    """Solve ``min 1/2 a'Qa - e'a`` s.t. ``0 <= a <= C``, ``y'a = 0``, ``Q = yy'K``."""
    n = len(y)
    y = y.astype(float)
    Q = (y[:, None] * y[None, :]) * K
    QD = np.diag(Q).copy()
    alpha = np.zeros(n)
    G = -np.ones(n)
    if max_iter is None:
        max_iter = max(10 * n * 2, MIN_ITER)
    it = 0
    converged = False
    while it < max_iter:
        yG = -y * G
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        if not up.any() or not low.any():
            converged = True
            break
        yG_up = np.where(up, yG, -np.inf)
        i = int(np.argmax(yG_up))
        gmax = yG_up[i]
        gmin = np.min(np.where(low, yG, np.inf))
        if gmax - gmin < tol:
            converged = True
            break
        # second-order choice of j among violators in the low set
        b = gmax - yG
        cand = low & (b > 0)
        quad = QD[i] + QD - 2.0 * y[i] * y * Q[i]
        quad = np.where(quad > 0, quad, TAU)
        score = np.where(cand, -(b * b) / quad, np.inf)
        j = int(np.argmin(score))
        if not np.isfinite(score[j]):
            converged = True
            break

        ai, aj = alpha[i], alpha[j]
        Qi, Qj = Q[i], Q[j]
        if y[i] != y[j]:
            q = QD[i] + QD[j] + 2 * Qi[j]
            q = q if q > 0 else TAU
            delta = (-G[i] - G[j]) / q
            diff = ai - aj
            ai += delta
            aj += delta
            if diff > 0:
                if aj < 0:
                    aj, ai = 0.0, diff
            elif ai < 0:
                ai, aj = 0.0, -diff
            if diff > 0:
                if ai > C:
                    ai, aj = C, C - diff
            elif aj > C:
                aj, ai = C, C + diff
        else:
            q = QD[i] + QD[j] - 2 * Qi[j]
            q = q if q > 0 else TAU
            delta = (G[i] - G[j]) / q
            s = ai + aj
            ai -= delta
            aj += delta
            if s > C:
                if ai > C:
                    ai, aj = C, s - C
            elif aj < 0:
                aj, ai = 0.0, s
            if s > C:
                if aj > C:
                    aj, ai = C, s - C
            elif ai < 0:
                ai, aj = 0.0, s
        di, dj = ai - alpha[i], aj - alpha[j]
        alpha[i], alpha[j] = ai, aj
        G += Qi * di + Qj * dj
        it += 1
    if not converged:
        logger.warning("SMO stopped at the iteration cap (%d) before reaching tolerance", max_iter)

    yG = -y * G
    free = (alpha > 0) & (alpha < C)
    if free.any():
        rho = float(np.mean(-yG[free]))
    else:
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        ub = np.min(-yG[up]) if up.any() else np.inf
        lb = np.max(-yG[low]) if low.any() else -np.inf
        if not np.isfinite(ub):
            ub = lb
        if not np.isfinite(lb):
            lb = ub
        rho = float((ub + lb) / 2) if np.isfinite(ub) else 0.0
    return BinarySolution(alpha, rho, it, converged)


@dataclass
class KernelSVC:
    """One-vs-rest kernel SVM on precomputed train-by-train kernel blocks."""

    C: float = 1.0
    tol: float = 1e-3
    classes_: np.ndarray = field(default=None, repr=False)
    coef_: list = field(default_factory=list, repr=False)
    rho_: list = field(default_factory=list, repr=False)

    def fit(self, K: np.ndarray, labels: Sequence[int]) -> "KernelSVC":
        labels = np.asarray(labels)
        self.classes_ = np.unique(labels)
        self.coef_, self.rho_ = [], []
        n = len(labels)
        if len(self.classes_) == 1:
            logger.warning("single-class training set; predicting class %s everywhere", self.classes_[0])
            return self
        max_iter = max(10 * n * len(self.classes_), MIN_ITER)
        targets = self.classes_ if len(self.classes_) > 2 else self.classes_[1:]
        for c in targets:
            y = np.where(labels == c, 1.0, -1.0)
            sol = smo_binary(K, y, self.C, self.tol, max_iter)
            self.coef_.append(sol.alpha * y)
            self.rho_.append(sol.rho)
        return self

    def decision_function(self, K_test: np.ndarray) -> np.ndarray:
        """Decision values; ``K_test`` is test-by-train."""
        return np.stack([K_test @ w - r for w, r in zip(self.coef_, self.rho_)], axis=1)

    def predict(self, K_test: np.ndarray) -> np.ndarray:
        K_test = np.atleast_2d(K_test)
        if len(self.classes_) == 1:
            return np.full(K_test.shape[0], self.classes_[0])
        dec = self.decision_function(K_test)
        if len(self.classes_) == 2:
            return np.where(dec[:, 0] > 0, self.classes_[1], self.classes_[0])
        return self.classes_[np.argmax(dec, axis=1)]


@dataclass
class TrainedClassifier:
    model: KernelSVC
    train_ids: tuple[int, ...]
    chosen_C: float
    validation_scores: dict[float, float]

    def predict(self, gram: GramMatrix, ids: Sequence[int]) -> np.ndarray:
        return self.model.predict(gram.sub(ids, self.train_ids))


def train_classifier(gram: GramMatrix, train_ids: Sequence[int], labels: Sequence[int],
                     C_grid: Sequence[float] = DEFAULT_C_GRID,
                     validation_ids: Sequence[int] = (), tol: float = 1e-3) -> TrainedClassifier:
    """Pick ``C`` by validation accuracy (first best in grid order), then refit on all train ids."""
    if not C_grid:
        raise ValueError("C_grid must not be empty")
    labels = np.asarray(labels)
    train_ids = tuple(train_ids)
    val = tuple(validation_ids)
    scores: dict[float, float] = {}
    chosen = float(C_grid[0])
    if val and len(C_grid) > 1:
        vset = set(val)
        fit_ids = [i for i in train_ids if i not in vset]
        best = -1.0
        for C in C_grid:
            m = KernelSVC(C=float(C), tol=tol).fit(gram.sub(fit_ids, fit_ids), labels[fit_ids])
            acc = float(np.mean(m.predict(gram.sub(val, fit_ids)) == labels[list(val)]))
            scores[float(C)] = acc
            if acc > best:
                best, chosen = acc, float(C)
    model = KernelSVC(C=chosen, tol=tol).fit(gram.sub(train_ids, train_ids), labels[list(train_ids)])
    return TrainedClassifier(model, train_ids, chosen, scores)
