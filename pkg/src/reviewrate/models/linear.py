"""Linear classifiers: SGD-trained hinge-loss SVM and softmax logistic regression."""

import numpy as np
from scipy.special import logsumexp
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .._validation import as_csr, encode_labels

try:
    from numba import njit
except ImportError:  # pragma: no cover - pure Python fallback, same arithmetic
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def linear_predict(coef, intercept, classes, X):
    """Map class scores to labels; ties go to the smaller class index.

    A single weight row is the binary case: a score above zero selects
    ``classes[1]``, anything else ``classes[0]``.
    """
    scores = np.asarray(X @ coef.T) + intercept
    if coef.shape[0] == 1:
        return classes[(scores[:, 0] > 0).astype(np.intp)]
    return classes[np.argmax(scores, axis=1)]


class _LinearClassifier(ClassifierMixin, BaseEstimator):
    def decision_function(self, X):
        check_is_fitted(self, "coef_")
        X = as_csr(X, n_features=self.coef_.shape[1])
        scores = np.asarray(X @ self.coef_.T) + self.intercept_
        return scores[:, 0] if scores.shape[1] == 1 else scores

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = as_csr(X, n_features=self.coef_.shape[1])
        return linear_predict(self.coef_, self.intercept_, self.classes_, X)


@njit(cache=True)
def _hinge_sgd_epoch(indptr, indices, data, y_sign, order, v, state, lam, t0):
    # weights are kept as scale * v so the L2 shrink is O(1) per step;
    # state = [scale, bias, t]
    scale = state[0]
    bias = state[1]
    t = state[2]
    for k in range(order.shape[0]):
        i = order[k]
        lo = indptr[i]
        hi = indptr[i + 1]
        dot = 0.0
        for p in range(lo, hi):
            dot += v[indices[p]] * data[p]
        eta = 1.0 / (lam * (t0 + t))
        margin = y_sign[i] * (scale * dot + bias)
        shrink = 1.0 - eta * lam
        if shrink <= 0.0:
            v[:] = 0.0
            scale = 1.0
        else:
            scale *= shrink
        if margin < 1.0:
            step = eta * y_sign[i]
            for p in range(lo, hi):
                v[indices[p]] += step / scale * data[p]
            bias += step
        t += 1.0
        if scale < 1e-9:
            v *= scale
            scale = 1.0
    state[0] = scale
    state[1] = bias
    state[2] = t


class SGDLinearSVM(_LinearClassifier):
    """Linear SVM trained by plain SGD on the L2-regularised hinge loss.

    Minimises ``(l2/2)*||w||^2 + mean(max(0, 1 - y*(w.x + b)))`` one example at
    a time with step size ``1 / (l2 * (t0 + t))``. The bias is not
    regularised. Rows are visited in a fresh permutation each epoch, drawn from
    a PCG64 generator seeded with ``random_state``. More than two classes are
    handled one-vs-rest, every binary problem seeing the same row order.

    Parameters
    ----------
    l2 : float, default=1e-4
    epochs : int, default=5
    t0 : float or None, default=None
        Offset of the step schedule; ``None`` means ``1 / l2`` so the first step is 1.0.
    random_state : int, default=42
    """

    def __init__(self, l2=1e-4, epochs=5, t0=None, random_state=42):
        self.l2 = l2
        self.epochs = epochs
        self.t0 = t0
        self.random_state = random_state

    def _fit_binary(self, X, y_sign, t0):
        v = np.zeros(X.shape[1])
        state = np.array([1.0, 0.0, 0.0])
        rng = np.random.Generator(np.random.PCG64(self.random_state))
        for _ in range(self.epochs):
            order = rng.permutation(X.shape[0]).astype(np.int64)
            _hinge_sgd_epoch(X.indptr.astype(np.int64), X.indices.astype(np.int64),
                             X.data, y_sign, order, v, state, float(self.l2), t0)
        return state[0] * v, state[1]

    def fit(self, X, y):
        if not self.l2 > 0:
            raise ValueError(f"l2 must be > 0 for the 1/(l2*(t0+t)) schedule, got {self.l2}")
        if int(self.epochs) < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        X = as_csr(X)
        self.classes_, y_index = encode_labels(y, X.shape[0])
        t0 = 1.0 / self.l2 if self.t0 is None else float(self.t0)
        positives = [1] if self.classes_.shape[0] == 2 else range(self.classes_.shape[0])
        coef, intercept = [], []
        for c in positives:
            y_sign = np.where(y_index == c, 1.0, -1.0)
            w, b = self._fit_binary(X, y_sign, t0)
            coef.append(w)
            intercept.append(b)
        self.coef_ = np.vstack(coef)
        self.intercept_ = np.asarray(intercept)
        self.n_features_in_ = X.shape[1]
        return self


def softmax_loss_and_grad(coef, intercept, X, y_index, l2):
    """Summed softmax negative log-likelihood plus ``(l2/2)*||coef||^2``.

    Returns ``(loss, grad_coef, grad_intercept)``; the intercept is not penalised.
    """
    n = X.shape[0]
    scores = np.asarray(X @ coef.T) + intercept
    lse = logsumexp(scores, axis=1)
    loss = np.sum(lse - scores[np.arange(n), y_index]) + 0.5 * l2 * np.sum(coef * coef)
    resid = np.exp(scores - lse[:, None])
    resid[np.arange(n), y_index] -= 1.0
    grad_coef = np.asarray(X.T @ resid).T + l2 * coef
    return loss, grad_coef, resid.sum(axis=0)


class LogisticRegression(_LinearClassifier):
    """Multinomial (softmax) logistic regression fitted by full-batch gradient descent.

    The objective is the summed negative log-likelihood plus
    ``(l2/2)*||W||^2`` with an unpenalised intercept. Each iteration tries a
    Barzilai-Borwein step and halves it until the Armijo condition holds, so
    accepted objective values never increase. Iteration stops once the
    gradient's max-norm drops below ``tol`` or after ``max_iter`` steps;
    hitting the limit is reported through ``converged_`` rather than raised.

    Parameters
    ----------
    l2 : float or None, default=None
        ``None`` uses ``1e-4 * n_samples``.
    tol : float, default=1e-6
    max_iter : int, default=1000

    Attributes
    ----------
    coef_ : ndarray of shape (n_classes, n_features)
    intercept_ : ndarray of shape (n_classes,)
    loss_curve_ : list of float
        Objective after each accepted step, starting from the zero model.
    n_iter_ : int
    converged_ : bool
    """

    armijo_c = 1e-4
    max_backtracks = 60

    def __init__(self, l2=None, tol=1e-6, max_iter=1000):
        self.l2 = l2
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y):
        X = as_csr(X)
        self.classes_, y_index = encode_labels(y, X.shape[0])
        n_samples, n_features = X.shape
        n_classes = self.classes_.shape[0]
        l2 = 1e-4 * n_samples if self.l2 is None else float(self.l2)
        if l2 < 0:
            raise ValueError(f"l2 must be >= 0, got {self.l2}")

        def objective(params):
            W = params[: n_classes * n_features].reshape(n_classes, n_features)
            b = params[n_classes * n_features:]
            loss, gW, gb = softmax_loss_and_grad(W, b, X, y_index, l2)
            return loss, np.concatenate([gW.ravel(), gb])

        params = np.zeros(n_classes * (n_features + 1))
        loss, grad = objective(params)
        self.loss_curve_ = [float(loss)]
        step = 1.0 / max(np.linalg.norm(grad), 1.0)
        converged = False
        n_iter = 0
        while n_iter < self.max_iter:
            if np.max(np.abs(grad)) < self.tol:
                converged = True
                break
            gg = grad @ grad
            for _ in range(self.max_backtracks):
                trial = params - step * grad
                trial_loss, trial_grad = objective(trial)
                if trial_loss <= loss - self.armijo_c * step * gg:
                    break
                step *= 0.5
            else:
                # no descent possible at float resolution
                break
            s, r = trial - params, trial_grad - grad
            params, loss, grad = trial, trial_loss, trial_grad
            self.loss_curve_.append(float(loss))
            n_iter += 1
            sr = s @ r
            step = (s @ s) / sr if sr > 0 else step * 2.0
        else:
            converged = bool(np.max(np.abs(grad)) < self.tol)

        self.coef_ = params[: n_classes * n_features].reshape(n_classes, n_features).copy()
        self.intercept_ = params[n_classes * n_features:].copy()
        self.n_iter_ = n_iter
        self.converged_ = converged
        self.n_features_in_ = n_features
        return self

    def predict_log_proba(self, X):
        scores = self.decision_function(X)
        return scores - logsumexp(scores, axis=1, keepdims=True)

    def predict_proba(self, X):
        return np.exp(self.predict_log_proba(X))
