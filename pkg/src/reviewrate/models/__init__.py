from .linear import LogisticRegression, SGDLinearSVM, linear_predict, softmax_loss_and_grad
from .naive_bayes import MultinomialNB
from .pipeline import MODEL_KINDS, TextClassifier, make_classifier, make_pipeline

__all__ = [
    "LogisticRegression",
    "MODEL_KINDS",
    "MultinomialNB",
    "SGDLinearSVM",
    "TextClassifier",
    "linear_predict",
    "make_classifier",
    "make_pipeline",
    "softmax_loss_and_grad",
]
