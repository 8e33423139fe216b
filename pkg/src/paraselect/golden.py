"""The shipped four-paraphrase example instance and its expected values."""

import json
from importlib import resources

from .candidates import CandidateSet, load_candidates
from .config import RunSettings, load_config


def path(name: str):
    """Path of ``candidates.json``, ``config.json`` or ``expected.json``."""
    return resources.files("paraselect.data").joinpath("golden").joinpath(name)


def load_candidate_set(lexicon=None) -> CandidateSet:
    return load_candidates(path("candidates.json"), lexicon)


def load_settings() -> RunSettings:
    return load_config(path("config.json"))


def expected() -> dict:
    return json.loads(path("expected.json").read_text("utf-8"))
