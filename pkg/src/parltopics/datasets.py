"""Bundled data files and input-path resolution.

The package ships a synthetic demonstration corpus and two stopword lists;
``builtin:`` tokens in configuration fields resolve to them. The real
transcript archive is not redistributed: :func:`fetch_hansard` is a
placeholder pointing users at the official source.
"""

from __future__ import annotations

from pathlib import Path

_DATA_DIR = Path(__file__).parent / "data"

_BUILTIN_FILES = {
    "mini": "mini_corpus.jsonl",
    "english": "stopwords_english.txt",
    "parliament": "stopwords_parliament.txt",
}


def data_path(name: str) -> Path:
    path = _DATA_DIR / name
    if not path.exists():
        raise FileNotFoundError(f"no bundled data file named {name!r}")
    return path


def mini_corpus_path() -> Path:
    """Synthetic line-delimited demonstration corpus bundled with the package."""
    return data_path(_BUILTIN_FILES["mini"])


def stopwords_path(name: str) -> Path:
    """Bundled stopword list: ``english`` or ``parliament``."""
    if name not in ("english", "parliament"):
        raise ValueError(f"no bundled stopword list named {name!r}")
    return data_path(_BUILTIN_FILES[name])


def resolve_path(spec: str) -> str:
    """Map ``builtin:<name>`` tokens to bundled file paths; pass others through."""
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name not in _BUILTIN_FILES:
            raise ValueError(
                f"unknown builtin data name {name!r}; "
                f"expected one of {sorted(_BUILTIN_FILES)}"
            )
        return str(data_path(_BUILTIN_FILES[name]))
    return spec


def fetch_hansard(destination: str) -> None:
    """Placeholder: the transcript archive is not redistributed here.

    Obtain the records from the official parliamentary website and convert
    them to the line-delimited format documented in the README, or use the
    bundled synthetic corpus (:func:`mini_corpus_path`) to exercise the
    pipeline.
    """
    raise NotImplementedError(
        "this package does not redistribute the transcript archive; "
        "download it from the official source and convert it to the "
        "line-delimited record format (see README), or run on the bundled "
        f"synthetic corpus at {mini_corpus_path()}"
    )
