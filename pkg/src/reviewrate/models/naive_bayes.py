"""Multinomial naive Bayes over (possibly fractional) feature weights."""

import numpy as np
from scipy.special import logsumexp
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .._validation import as_csr, encode_labels


class MultinomialNB(ClassifierMixin, BaseEstimator):
    """Multinomial naive Bayes with additive (Laplace) smoothing.

    Feature values are treated as fractional counts, so tf-idf weights can be
    fed in directly.

    Parameters
    ----------
    alpha : float, default=1.0
        Additive smoothing applied to every class/feature mass.

    Attributes
    ----------
    classes_ : ndarray of shape (n_classes,)
    class_count_ : ndarray of shape (n_classes,)
    feature_count_ : ndarray of shape (n_classes, n_features)
        Summed feature mass per class.
    class_log_prior_ : ndarray of shape (n_classes,)
    feature_log_prob_ : ndarray of shape (n_classes, n_features)
    """

    def __init__(self, alpha=1.0):
        self.alpha = alpha

    def fit(self, X, y):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        X = as_csr(X)
        self.classes_, y_index = encode_labels(y, X.shape[0])
        n_classes, n_features = self.classes_.shape[0], X.shape[1]

        membership = np.zeros((n_classes, X.shape[0]))
        membership[y_index, np.arange(X.shape[0])] = 1.0
        self.class_count_ = membership.sum(axis=1)
        self.feature_count_ = np.asarray((X.T @ membership.T).T)

        self.class_log_prior_ = np.log(self.class_count_) - np.log(X.shape[0])
        smoothed = self.feature_count_ + self.alpha
        totals = self.feature_count_.sum(axis=1, keepdims=True) + self.alpha * n_features
        self.feature_log_prob_ = np.log(smoothed) - np.log(totals)
        self.n_features_in_ = n_features
        return self

    def _joint_log_likelihood(self, X):
        check_is_fitted(self, "feature_log_prob_")
        X = as_csr(X, n_features=self.n_features_in_)
        return np.asarray(X @ self.feature_log_prob_.T) + self.class_log_prior_

    def decision_function(self, X):
        return self._joint_log_likelihood(X)

    def predict(self, X):
        # np.argmax returns the first maximum: ties go to the smaller class index
        return self.classes_[np.argmax(self._joint_log_likelihood(X), axis=1)]

    def predict_log_proba(self, X):
        jll = self._joint_log_likelihood(X)
        return jll - logsumexp(jll, axis=1, keepdims=True)

    def predict_proba(self, X):
        return np.exp(self.predict_log_proba(X))
