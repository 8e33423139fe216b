import json
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paraselect.analysis import apply_solution
from paraselect.candidates import (
    CandidateFileError,
    CoefficientConflictWarning,
    NullParaphraseWarning,
    ParaphraseCandidate,
    build_candidate_set,
    candidate_set_from_dict,
    candidate_set_to_dict,
    derive_coefficients,
    load_candidates,
    parse_candidates,
    save_candidates,
    validate_candidate_set,
)
from paraselect.synthetic import random_candidate_data
from paraselect.text_metrics import classify_words, tokenize

from conftest import GOLDEN_TEXT


@pytest.fixture
def golden_doc():
    return classify_words(tokenize(GOLDEN_TEXT))


@pytest.mark.parametrize(
    "i,replacement,expected",
    [
        (1, "The cat sat on the mat by the door.", (-2, -2, 0)),
        (2, "It ate the cream. It had been ladled out by its owner.", (3, 3, 1)),
        (3, "The owner, an eminent engineer, had a convertible. It had been used in a bank robbery.", (3, 3, 1)),
        (3, "The owner had a convertible used in a bank robbery.", (-1, -3, 0)),
    ],
)
def test_table_rows(golden_doc, i, replacement, expected):
    assert derive_coefficients(golden_doc.sentence(i), replacement) == expected


def test_identity_is_null_with_warning(golden_doc):
    with pytest.warns(NullParaphraseWarning):
        assert derive_coefficients(golden_doc.sentence(2), golden_doc.sentence(2).text) == (0, 0, 0)


def test_deletion_coefficients(golden_doc):
    assert derive_coefficients(golden_doc.sentence(2), "") == (-5, -9, -1)


def test_golden_set_validates(golden_cs):
    assert len(golden_cs) == 4
    assert golden_cs.keys == [(1, 1), (2, 1), (3, 1), (3, 2)]
    assert validate_candidate_set(golden_cs).ok


def test_injected_mismatch_reported(golden_cs):
    bad = ParaphraseCandidate(3, 2, golden_cs.by_key[(3, 2)].replacement, -1, -2, 0)
    cs = type(golden_cs)(golden_cs.document, golden_cs.candidates[:3] + (bad,), golden_cs.lexicon)
    report = validate_candidate_set(cs)
    assert report.mismatches == [((3, 2), (-1, -2, 0), (-1, -3, 0))]
    assert not report.ok


def test_out_of_range_and_duplicate(golden_cs):
    extra = ParaphraseCandidate(5, 1, "Whatever.", 0, 1, 0)
    dup = golden_cs.candidates[0]
    cs = type(golden_cs)(golden_cs.document, golden_cs.candidates + (extra, dup), golden_cs.lexicon)
    report = validate_candidate_set(cs)
    assert report.out_of_range == [(5, 1)]
    assert report.duplicates == [(1, 1)]


def test_sentence_count_risk_flagged():
    cs = build_candidate_set("One two three.", [(1, "")], allow_deletion=True)
    report = validate_candidate_set(cs)
    assert report.min_sentence_count == 0
    assert not report.ok


def test_deletion_disabled_by_default():
    with pytest.raises(CandidateFileError, match="deletion"):
        build_candidate_set("One two. Three four.", [(1, "")])


def test_stored_conflict_warns_and_derived_wins():
    data = {"document": "The cat sat.", "candidates": [{"sentence": 1, "replacement": "The cat sat down.", "w": 5}]}
    with pytest.warns(CoefficientConflictWarning):
        cs = candidate_set_from_dict(data)
    assert cs.candidates[0].w == 1


def test_empty_candidates(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"document": "The cat sat.", "candidates": []}))
    cs = load_candidates(p)
    assert len(cs) == 0 and validate_candidate_set(cs).ok


def test_malformed_json_has_position():
    with pytest.raises(CandidateFileError) as exc:
        parse_candidates('{"document": "x.",\n  "candidates": [}', source="f.json")
    assert exc.value.location.startswith("f.json:2:")


@pytest.mark.parametrize(
    "cand,where",
    [
        ({"sentence": 4, "replacement": "x."}, "candidates[0].sentence"),
        ({"replacement": "x."}, "candidates[0]"),
        ({"sentence": 1, "replacement": 3}, "candidates[0].replacement"),
        ({"sentence": 1, "replacement": "x.", "colour": 1}, "candidates[0]"),
        ({"sentence": 1, "replacement": "x.", "discourse_effect": -1}, "candidates[0]"),
        ({"sentence": 1, "replacement": "x.", "meaning_class": "huge"}, "candidates[0].meaning_class"),
    ],
)
def test_schema_errors_have_locations(cand, where):
    data = {"document": GOLDEN_TEXT, "candidates": [cand]}
    with pytest.raises(CandidateFileError) as exc:
        candidate_set_from_dict(data, source="f.json")
    assert exc.value.location == f"f.json:{where}"


def test_questions_annotation():
    data = {"document": "It was the balcony which drew Ryan.",
            "candidates": [{"sentence": 1, "replacement": "The balcony drew Ryan.",
                            "questions": {"original": 1, "replacement": 4}}]}
    assert candidate_set_from_dict(data).candidates[0].discourse_effect == 3


def test_round_trip(tmp_path, golden_cs):
    p = tmp_path / "rt.json"
    save_candidates(golden_cs, p)
    again = load_candidates(p)
    assert again.candidates == golden_cs.candidates
    assert again.document == golden_cs.document
    assert candidate_set_to_dict(again) == candidate_set_to_dict(golden_cs)


def test_j_numbering_follows_file_order():
    cs = build_candidate_set("A b c. D e f.", [(2, "D e."), (1, "A b."), (2, "D f.")])
    assert [c.key for c in cs] == [(1, 1), (2, 1), (2, 2)]
    assert cs.by_key[(2, 2)].replacement == "D f."


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_sets_recompute_and_apply_consistently(seed):
    rng = np.random.default_rng(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NullParaphraseWarning)
        cs = candidate_set_from_dict(random_candidate_data(rng, n_sentences=4))
    assert validate_candidate_set(cs).ok
    for c in cs:
        # applying one candidate shifts the global counts by its deltas
        _, after = apply_solution(cs.document, cs, [c.key])
        assert after == cs.base_metrics.shifted(c.w, c.s, c.f)
