"""Pipeline configuration: one declarative object holding every tunable.

Configurations come from a JSON file, command-line overrides, or both; the
defaults carry the pipeline's standard operating point (30 topics, the 0.067
link threshold, the 151-word speech floor, the 10,000-word speaker cutoff,
1000 null-model runs).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from typing import Any

from .lda import Hyperparams
from .network import THRESHOLD_SCOPES

WEIGHTINGS = ("words", "uniform")


@dataclass
class PipelineConfig:
    input_path: str = "builtin:mini"
    output_dir: str = "out"
    stopword_files: list[str] = field(default_factory=lambda: ["builtin:english"])
    min_words_speech: int = 151
    num_topics: int = 30
    alpha: float | None = None  # resolved to 50 / num_topics when unset
    beta: float = 0.01
    iterations: int = 1000
    burn_in: int = 500
    seed: int = 42
    excluded_topics: list[int] = field(default_factory=list)
    link_threshold: float = 0.067
    min_words_speaker_term: int = 10_000
    null_runs: int = 1000
    terms: list[int] | None = None  # None: every term present in the data
    threshold_scope: str = "year"
    weighting: str = "words"
    speaker_codes: str | None = None
    cache: bool = True
    figures: bool = True

    def resolved_alpha(self) -> float:
        if self.alpha is None:
            return 50.0 / self.num_topics if self.num_topics else float("nan")
        return float(self.alpha)

    def hyperparams(self) -> Hyperparams:
        return Hyperparams(
            num_topics=self.num_topics,
            alpha=self.resolved_alpha(),
            beta=self.beta,
            iterations=self.iterations,
            burn_in=self.burn_in,
            seed=self.seed,
        )

    def as_dict(self) -> dict[str, Any]:
        """Resolved view of the configuration, JSON-serializable."""
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["alpha"] = self.resolved_alpha()
        # The speech floor keeps speeches of min_words_speech words or more,
        # i.e. it removes speeches of at most this many words:
        out["removes_speeches_of_at_most"] = self.min_words_speech - 1
        return out


def load_config(path: str | None = None, overrides: dict[str, Any] | None = None) -> PipelineConfig:
    """Build a configuration from an optional JSON file plus overrides.

    Unknown keys in the file are rejected so typos fail loudly. Overrides
    with value ``None`` are ignored, letting CLI flags default cleanly.
    """
    config = PipelineConfig()
    known = {f.name for f in fields(PipelineConfig)}
    if path is not None:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"unknown configuration keys: {', '.join(unknown)}")
        config = replace(config, **data)
    if overrides:
        cleaned = {k: v for k, v in overrides.items() if v is not None and k in known}
        config = replace(config, **cleaned)
    return config


def validate_config(config: PipelineConfig) -> list[str]:
    """Every violated invariant, as one human-readable line each.

    Checks the configuration only; never touches the corpus or any file.
    """
    violations: list[str] = []
    if not config.input_path:
        violations.append("input_path must not be empty")
    if not config.output_dir:
        violations.append("output_dir must not be empty")
    if config.min_words_speech < 1:
        violations.append(
            f"min_words_speech must be >= 1, got {config.min_words_speech}"
        )
    if config.num_topics < 1:
        violations.append(f"num_topics must be >= 1, got {config.num_topics}")
    else:
        bad = sorted(
            t for t in config.excluded_topics
            if not 0 <= int(t) < config.num_topics
        )
        if bad:
            violations.append(
                f"excluded_topics entries out of range [0, {config.num_topics}): {bad}"
            )
        if len(set(config.excluded_topics)) >= config.num_topics:
            violations.append("excluded_topics must leave at least one topic")
    if config.alpha is not None and config.alpha <= 0:
        violations.append(f"alpha must be > 0, got {config.alpha}")
    if config.beta <= 0:
        violations.append(f"beta must be > 0, got {config.beta}")
    if config.burn_in < 0:
        violations.append(f"burn_in must be >= 0, got {config.burn_in}")
    if config.iterations < config.burn_in:
        violations.append(
            f"iterations must be >= burn_in, got iterations={config.iterations}, "
            f"burn_in={config.burn_in}"
        )
    if not 0 < config.link_threshold < 1:
        violations.append(
            f"link_threshold must lie in (0, 1), got {config.link_threshold}"
        )
    if config.min_words_speaker_term < 0:
        violations.append(
            f"min_words_speaker_term must be >= 0, got {config.min_words_speaker_term}"
        )
    if config.null_runs < 1:
        violations.append(f"null_runs must be >= 1, got {config.null_runs}")
    if config.terms is not None:
        bad_terms = [t for t in config.terms if int(t) < 1]
        if bad_terms:
            violations.append(f"terms must all be >= 1, got {bad_terms}")
    if config.threshold_scope not in THRESHOLD_SCOPES:
        violations.append(
            f"threshold_scope must be one of {THRESHOLD_SCOPES}, "
            f"got {config.threshold_scope!r}"
        )
    if config.weighting not in WEIGHTINGS:
        violations.append(
            f"weighting must be one of {WEIGHTINGS}, got {config.weighting!r}"
        )
    return violations
