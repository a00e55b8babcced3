"""Zero-shot NLI classification microservice."""

from .app import create_app
from .classifier import Classifier, LexicalClassifier, NliClassifier, load_classifier
from .config import DEFAULT_MODEL, ServiceConfig

__all__ = [
    "create_app",
    "Classifier",
    "LexicalClassifier",
    "NliClassifier",
    "load_classifier",
    "DEFAULT_MODEL",
    "ServiceConfig",
]
