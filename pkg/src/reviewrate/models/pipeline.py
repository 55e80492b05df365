"""Text in, label out: counts -> tf-idf -> classifier as one estimator."""

from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.pipeline import Pipeline
from sklearn.utils.validation import check_is_fitted

from ..exceptions import DegenerateInput
from ..features import CountVectorizer, TfidfTransformer
from .linear import LogisticRegression, SGDLinearSVM
from .naive_bayes import MultinomialNB

MODEL_KINDS = ("nb", "svm", "lr")


def make_classifier(model="nb", alpha=1.0, l2=None, epochs=5, t0=None, tol=1e-6,
                    max_iter=1000, random_state=42):
    """Build an unfitted classifier of the given kind from flat hyperparameters.

    ``l2=None`` picks each model's default strength (1e-4 for the SVM,
    1e-4 * n_samples for logistic regression).
    """
    if model == "nb":
        return MultinomialNB(alpha=alpha)
    if model == "svm":
        return SGDLinearSVM(l2=1e-4 if l2 is None else l2, epochs=epochs, t0=t0,
                            random_state=random_state)
    if model == "lr":
        return LogisticRegression(l2=l2, tol=tol, max_iter=max_iter)
    raise ValueError(f"unknown model {model!r}; expected one of {MODEL_KINDS}")


def make_pipeline(model="nb", stop_words="english", **hyper):
    """The three stages as a plain :class:`sklearn.pipeline.Pipeline`."""
    return Pipeline([
        ("vect", CountVectorizer(stop_words=stop_words)),
        ("tfidf", TfidfTransformer()),
        ("clf", make_classifier(model, **hyper)),
    ])


class TextClassifier(ClassifierMixin, BaseEstimator):
    """Review classifier: bag-of-words counts, tf-idf weights, then NB/SVM/LR.

    Every fitted stage is kept (``vectorizer_``, ``tfidf_``, ``classifier_``)
    so the whole thing can be saved and reapplied without refitting.
    Out-of-vocabulary words at prediction time are ignored.

    Parameters
    ----------
    model : {"nb", "svm", "lr"}, default="nb"
    stop_words : "english", None, path or iterable, default="english"
    alpha : float, default=1.0
        Naive Bayes smoothing.
    l2 : float or None, default=None
        Weight penalty for the linear models (None = model default).
    epochs, t0, random_state
        SGD SVM schedule and shuffling seed.
    tol, max_iter
        Logistic regression stopping rule.
    task : str or None
        Recorded in saved models; does not affect fitting.
    """

    def __init__(self, model="nb", stop_words="english", alpha=1.0, l2=None, epochs=5,
                 t0=None, tol=1e-6, max_iter=1000, random_state=42, task=None):
        self.model = model
        self.stop_words = stop_words
        self.alpha = alpha
        self.l2 = l2
        self.epochs = epochs
        self.t0 = t0
        self.tol = tol
        self.max_iter = max_iter
        self.random_state = random_state
        self.task = task

    def _hyper(self):
        return dict(alpha=self.alpha, l2=self.l2, epochs=self.epochs, t0=self.t0,
                    tol=self.tol, max_iter=self.max_iter, random_state=self.random_state)

    def fit(self, texts, y):
        vectorizer = CountVectorizer(stop_words=self.stop_words)
        counts = vectorizer.fit_transform(texts)
        if counts.shape[1] == 0:
            raise DegenerateInput("EmptyVocabulary",
                                  "no tokens survive preprocessing; vocabulary is empty")
        tfidf = TfidfTransformer().fit(counts)
        classifier = make_classifier(self.model, **self._hyper())
        classifier.fit(tfidf.transform(counts), y)
        self.vectorizer_, self.tfidf_, self.classifier_ = vectorizer, tfidf, classifier
        self.classes_ = classifier.classes_
        return self

    def transform(self, texts):
        """The tf-idf matrix the classifier sees."""
        check_is_fitted(self, "classifier_")
        return self.tfidf_.transform(self.vectorizer_.transform(texts))

    def predict(self, texts):
        return self.classifier_.predict(self.transform(texts))

    def decision_function(self, texts):
        return self.classifier_.decision_function(self.transform(texts))

    @property
    def vocabulary_(self):
        return self.vectorizer_.vocabulary_

    @property
    def stop_list_id_(self):
        return self.vectorizer_.stoplist_.list_id

