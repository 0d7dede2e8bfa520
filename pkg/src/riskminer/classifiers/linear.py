"""L2-regularized logistic regression via batch gradient descent."""

from __future__ import annotations

import numpy as np

from ..errors import SingleClassError


def sigmoid(z):
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class LogisticLearner:
    """Minimizes sum-form negative log-likelihood + ||w||^2 / (2C).

    The bias is unpenalized. Backtracking (Armijo) line search keeps every
    iteration non-increasing; training stops when the gradient norm falls
    below `tol` or after `max_iter` steps, in which case the model carries a
    non-convergence warning instead of failing.
    """

    def __init__(self, C: float = 1.0, max_iter: int = 1000, tol: float = 1e-6, seed: int = 22):
        self.C = C
        self.max_iter = max_iter
        self.tol = tol
        self.seed = seed
        self.weights: np.ndarray | None = None
        self.bias = 0.0
        self.converged = False
        self.objective_path: list[float] = []

    def objective(self, X, y, w, b):
        z = X @ w + b
        nll = float(np.logaddexp(0.0, z).sum() - y @ z)
        return nll + (w @ w) / (2.0 * self.C)

    def gradient(self, X, y, w, b):
        residual = sigmoid(X @ w + b) - y
        return X.T @ residual + w / self.C, float(residual.sum())

    def fit(self, X: np.ndarray, y: np.ndarray) -> None:
        if len(set(y.tolist())) < 2:
            raise SingleClassError("logistic regression")
        y = y.astype(np.float64)
        w = np.zeros(X.shape[1])
        b = 0.0
        obj = self.objective(X, y, w, b)
        self.objective_path = [obj]
        self.converged = False
        for _ in range(self.max_iter):
            gw, gb = self.gradient(X, y, w, b)
            norm_sq = float(gw @ gw) + gb * gb
            if np.sqrt(norm_sq) <= self.tol:
                self.converged = True
                break
            step = 1.0
            while step > 1e-14:
                cand_w = w - step * gw
                cand_b = b - step * gb
                cand_obj = self.objective(X, y, cand_w, cand_b)
                if cand_obj <= obj - 1e-4 * step * norm_sq:
                    break
                step *= 0.5
            else:
                break  # no descent step found within float precision
            w, b, obj = cand_w, cand_b, cand_obj
            self.objective_path.append(obj)
        self.weights, self.bias = w, b

    def score_rows(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(X @ self.weights + self.bias)

    def to_params(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "bias": self.bias,
            "converged": self.converged,
        }

    @classmethod
    def from_params(cls, params: dict, hyper: dict) -> "LogisticLearner":
        learner = cls(C=hyper["C"], max_iter=hyper["max_iter"], tol=hyper["tol"], seed=hyper["seed"])
        learner.weights = np.asarray(params["weights"], dtype=np.float64)
        learner.bias = float(params["bias"])
        learner.converged = bool(params["converged"])
        return learner
