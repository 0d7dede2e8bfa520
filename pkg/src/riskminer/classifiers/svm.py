"""Polynomial-kernel support vector classifier trained with SMO."""

from __future__ import annotations

import numpy as np

from ..errors import SingleClassError
from .linear import sigmoid


class PolySVCLearner:
    """Soft-margin SVC with kernel (gamma * <x, x'> + coef0) ** degree.

    gamma="scale" resolves to 1 / (n_features * X.var()). Training is
    sequential minimal optimization: sweep the examples, pair each KKT
    violator with the viable partner of largest error gap, and solve the
    two-variable subproblem analytically. A sweep with no updates certifies
    the KKT conditions within `tol`; `max_passes` bounds the sweep count and
    hitting it leaves a non-convergence warning on the model. The procedure
    is deterministic; the seed exists for interface parity.
    """

    def __init__(
        self,
        C: float = 1.0,
        degree: int = 3,
        coef0: float = 0.0,
        gamma="scale",
        tol: float = 1e-3,
        max_passes: int = 10_000,
        seed: int = 42,
    ):
        self.C = C
        self.degree = degree
        self.coef0 = coef0
        self.gamma = gamma
        self.tol = tol
        self.max_passes = max_passes
        self.seed = seed
        self.support_vectors: np.ndarray | None = None
        self.dual_coef: np.ndarray | None = None  # alpha_i * y_i on support vectors
        self.intercept = 0.0
        self.gamma_value = 1.0
        self.converged = False
        self.alphas_: np.ndarray | None = None  # full alpha vector, kept for diagnostics

    def _resolve_gamma(self, X: np.ndarray) -> float:
        if self.gamma == "scale":
            var = float(X.var())
            return 1.0 / (X.shape[1] * var) if var > 0 else 1.0
        return float(self.gamma)

    def _kernel(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return (self.gamma_value * (A @ B.T) + self.coef0) ** self.degree

    def fit(self, X: np.ndarray, y: np.ndarray) -> None:
        if len(set(y.tolist())) < 2:
            raise SingleClassError("support vector classifier")
        self.gamma_value = self._resolve_gamma(X)
        sign = np.where(y == 1, 1.0, -1.0)
        n = X.shape[0]
        C = self.C
        K = self._kernel(X, X)
        diag = np.diag(K).copy()
        alpha = np.zeros(n)
        b = 0.0
        fx = np.zeros(n)  # decision values sum_j alpha_j y_j K[j, i] + b
        min_step = 1e-5

        self.converged = False
        for _ in range(self.max_passes):
            changed = 0
            for i in range(n):
                err_i = fx[i] - sign[i]
                r = sign[i] * err_i
                if not ((r < -self.tol and alpha[i] < C) or (r > self.tol and alpha[i] > 0)):
                    continue
                # Vectorized partner viability: box width, curvature, and a
                # minimum step after clipping; choose the viable partner with
                # the largest error gap.
                errs = fx - sign
                gap = err_i - errs
                same = sign == sign[i]
                low = np.where(same, np.maximum(0.0, alpha[i] + alpha - C), np.maximum(0.0, alpha - alpha[i]))
                high = np.where(same, np.minimum(C, alpha[i] + alpha), np.minimum(C, C + alpha - alpha[i]))
                eta = 2.0 * K[i] - diag[i] - diag
                with np.errstate(divide="ignore", invalid="ignore"):
                    raw = alpha - sign * gap / eta
                clipped = np.clip(raw, low, high)
                viable = (eta < 0) & (high > low) & (np.abs(clipped - alpha) >= min_step)
                viable[i] = False
                if not viable.any():
                    continue
                j = int(np.argmax(np.where(viable, np.abs(gap), -1.0)))
                a_i_old, a_j_old = alpha[i], alpha[j]
                a_j = float(clipped[j])
                a_i = a_i_old + sign[i] * sign[j] * (a_j_old - a_j)
                d_i = (a_i - a_i_old) * sign[i]
                d_j = (a_j - a_j_old) * sign[j]
                err_j = errs[j]
                b1 = b - err_i - d_i * K[i, i] - d_j * K[i, j]
                b2 = b - err_j - d_i * K[i, j] - d_j * K[j, j]
                if 0 < a_i < C:
                    new_b = b1
                elif 0 < a_j < C:
                    new_b = b2
                else:
                    new_b = (b1 + b2) / 2.0
                fx += d_i * K[i] + d_j * K[j] + (new_b - b)
                alpha[i], alpha[j], b = a_i, a_j, new_b
                changed += 1
            if changed == 0:
                self.converged = True
                break

        keep = alpha > 1e-12
        self.support_vectors = X[keep]
        self.dual_coef = alpha[keep] * sign[keep]
        self.intercept = b
        self.alphas_ = alpha

    def decision_values(self, X: np.ndarray) -> np.ndarray:
        if self.support_vectors.shape[0] == 0:
            return np.full(X.shape[0], self.intercept)
        return self._kernel(X, self.support_vectors) @ self.dual_coef + self.intercept

    def score_rows(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(self.decision_values(X))

    def to_params(self) -> dict:
        return {
            "support_vectors": self.support_vectors.tolist(),
            "dual_coef": self.dual_coef.tolist(),
            "intercept": self.intercept,
            "gamma_value": self.gamma_value,
            "converged": self.converged,
        }

    @classmethod
    def from_params(cls, params: dict, hyper: dict) -> "PolySVCLearner":
        learner = cls(
            C=hyper["C"],
            degree=hyper["degree"],
            coef0=hyper["coef0"],
            gamma=hyper["gamma"],
            tol=hyper["tol"],
            max_passes=hyper["max_passes"],
            seed=hyper["seed"],
        )
        learner.support_vectors = np.asarray(params["support_vectors"], dtype=np.float64)
        learner.dual_coef = np.asarray(params["dual_coef"], dtype=np.float64)
        learner.intercept = float(params["intercept"])
        learner.gamma_value = float(params["gamma_value"])
        learner.converged = bool(params["converged"])
        return learner
