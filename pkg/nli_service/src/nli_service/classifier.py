"""Zero-shot classifiers behind the service.

``NliClassifier`` runs a pretrained NLI cross-encoder: the incoming text is
paired against each candidate label (rendered through the hypothesis
template) and the entailment/contradiction logits become per-label
probabilities. ``LexicalClassifier`` is a dependency-free deterministic
stand-in used in tests and on machines without the model weights.
"""

from __future__ import annotations

import math
import re
from typing import Protocol, Sequence, runtime_checkable

from .config import ServiceConfig


@runtime_checkable
class Classifier(Protocol):
    model_id: str

    def classify(self, premise: str, labels: Sequence[str],
                 multi_label: bool) -> dict[str, float]: ...


def _softmax(values: Sequence[float]) -> list[float]:
    peak = max(values)
    exps = [math.exp(v - peak) for v in values]
    total = sum(exps)
    return [e / total for e in exps]


class NliClassifier:
    """Entailment scoring with a pretrained NLI model.

    Single-label mode: softmax over the per-label entailment logits, one
    distribution across labels. Multi-label mode: per label, softmax over
    (contradiction, entailment) with neutral discarded, keeping the
    entailment probability. Inference runs in eval mode with gradients off,
    so identical requests give identical responses.
    """

    def __init__(self, config: ServiceConfig):
        import torch
        from transformers import AutoModelForSequenceClassification, AutoTokenizer

        self._torch = torch
        self.config = config
        self.model_id = config.model_id
        self.tokenizer = AutoTokenizer.from_pretrained(config.model_id)
        self.model = AutoModelForSequenceClassification.from_pretrained(config.model_id)
        self.model.to(config.device)
        self.model.eval()

        label2id = {k.lower(): v for k, v in self.model.config.label2id.items()}
        try:
            self._entail_idx = label2id["entailment"]
            self._contra_idx = label2id["contradiction"]
        except KeyError as exc:
            raise RuntimeError(
                f"model {config.model_id} lacks entailment/contradiction labels"
            ) from exc

    def _pairs(self, premise: str, labels: Sequence[str]) -> list[tuple[str, str]]:
        rendered = [self.config.hypothesis_template.format(label) for label in labels]
        if self.config.swap_premise_hypothesis:
            return [(hyp, premise) for hyp in rendered]
        return [(premise, hyp) for hyp in rendered]

    def _logits(self, pairs: list[tuple[str, str]]):
        torch = self._torch
        out = []
        step = self.config.max_batch_size
        with torch.inference_mode():
            for i in range(0, len(pairs), step):
                chunk = pairs[i : i + step]
                enc = self.tokenizer(
                    [p for p, _ in chunk],
                    [h for _, h in chunk],
                    padding=True,
                    truncation=True,
                    return_tensors="pt",
                ).to(self.config.device)
                out.append(self.model(**enc).logits.cpu())
        return torch.cat(out, dim=0)

    def classify(self, premise: str, labels: Sequence[str],
                 multi_label: bool) -> dict[str, float]:
        logits = self._logits(self._pairs(premise, labels))
        if multi_label:
            scores = {}
            for label, row in zip(labels, logits):
                pair = [float(row[self._contra_idx]), float(row[self._entail_idx])]
                scores[label] = _softmax(pair)[1]
            return scores
        entail = [float(row[self._entail_idx]) for row in logits]
        return dict(zip(labels, _softmax(entail)))


_TOKEN_RE = re.compile(r"[a-z0-9]+")


class LexicalClassifier:
    """Deterministic token-overlap scorer; no model weights required.

    The entailment signal is the fraction of a label's tokens appearing in
    the text. Label-order invariant and referentially transparent, which is
    all the service-level contract tests need.
    """

    model_id = "lexical-overlap"

    def __init__(self, sharpness: float = 8.0):
        self.sharpness = sharpness

    @staticmethod
    def _tokens(text: str) -> set[str]:
        return set(_TOKEN_RE.findall(text.casefold()))

    def _raw(self, premise: str, label: str) -> float:
        premise_tokens = self._tokens(premise)
        label_tokens = self._tokens(label)
        if not label_tokens:
            return 0.0
        return len(label_tokens & premise_tokens) / len(label_tokens)

    def classify(self, premise: str, labels: Sequence[str],
                 multi_label: bool) -> dict[str, float]:
        raw = {label: self._raw(premise, label) for label in labels}
        if multi_label:
            return raw
        weights = _softmax([self.sharpness * raw[label] for label in labels])
        return dict(zip(labels, weights))


def load_classifier(config: ServiceConfig) -> Classifier:
    if config.model_id == LexicalClassifier.model_id:
        return LexicalClassifier()
    return NliClassifier(config)
