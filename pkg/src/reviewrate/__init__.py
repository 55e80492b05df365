"""Review sentiment and star-rating classification with tf-idf features.

Typical use::

    from reviewrate import TextClassifier, load_data

    corpus = load_data("review.json", 1, 70_000, task="posneg")
    clf = TextClassifier(model="lr").fit(corpus.texts, corpus.labels)
    clf.predict(["The best British food in New York"])
"""

from .corpus import LabeledCorpus, ReviewRecord, Task, load_data, map_label, parse_review_line, split_contiguous
from .evaluation import EvalReport, SweepReport, accuracy, confusion_matrix, fraction_sweep, run_experiment
from .features import CountVectorizer, TfidfTransformer, Vocabulary
from .models import LogisticRegression, MultinomialNB, SGDLinearSVM, TextClassifier, make_pipeline
from .persistence import load_model, save_model

__version__ = "0.1.0"

__all__ = [
    "CountVectorizer",
    "EvalReport",
    "LabeledCorpus",
    "LogisticRegression",
    "MultinomialNB",
    "ReviewRecord",
    "SGDLinearSVM",
    "SweepReport",
    "Task",
    "TextClassifier",
    "TfidfTransformer",
    "Vocabulary",
    "accuracy",
    "confusion_matrix",
    "fraction_sweep",
    "load_data",
    "load_model",
    "make_pipeline",
    "map_label",
    "parse_review_line",
    "run_experiment",
    "save_model",
    "split_contiguous",
]
