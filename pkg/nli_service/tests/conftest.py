import pytest
from fastapi.testclient import TestClient

from nli_service.app import create_app
from nli_service.classifier import LexicalClassifier
from nli_service.config import ServiceConfig


@pytest.fixture
def config():
    return ServiceConfig(model_id="lexical-overlap", max_labels=8)


@pytest.fixture
def client(config):
    app = create_app(config, classifier=LexicalClassifier())
    return TestClient(app)


@pytest.fixture
def not_ready_client(config):
    app = create_app(config, classifier=None, eager_load=False)
    return TestClient(app)
