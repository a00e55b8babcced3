"""Service configuration, overridable via environment variables."""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_MODEL = "MoritzLaurer/DeBERTa-v3-large-mnli-fever-anli-ling-wanli"


@dataclass(frozen=True)
class ServiceConfig:
    """Runtime knobs for the classifier service.

    ``swap_premise_hypothesis`` flips which side of the entailment pair the
    incoming text lands on. Default orientation: the request's premise is the
    NLI premise and each label, rendered through ``hypothesis_template``, is
    the hypothesis.
    """

    model_id: str = DEFAULT_MODEL
    device: str = "cpu"
    max_batch_size: int = 32
    max_labels: int = 512
    host: str = "127.0.0.1"
    port: int = 8050
    hypothesis_template: str = "This example is about {}."
    swap_premise_hypothesis: bool = False

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        return cls(
            model_id=os.environ.get("NLI_MODEL_ID", DEFAULT_MODEL),
            device=os.environ.get("NLI_DEVICE", "cpu"),
            max_batch_size=int(os.environ.get("NLI_MAX_BATCH", "32")),
            max_labels=int(os.environ.get("NLI_MAX_LABELS", "512")),
            host=os.environ.get("NLI_HOST", "127.0.0.1"),
            port=int(os.environ.get("NLI_PORT", "8050")),
            hypothesis_template=os.environ.get(
                "NLI_HYPOTHESIS_TEMPLATE", "This example is about {}."
            ),
            swap_premise_hypothesis=os.environ.get("NLI_SWAP_ORIENTATION", "") == "1",
        )
