import os
import pathlib

import pytest

import tmkit

CORPUS = pathlib.Path(os.environ.get("TMKIT_CORPUS_DIR", "corpus"))


def read(name):
    return (CORPUS / name).read_text()


def test_validate_clean_corpus():
    for name in ("heart.tm", "car.tm", "airbag.tm"):
        assert tmkit.validate(read(name)) == []


def test_heart_precedence_and_chronologies():
    text = read("heart.tm")
    assert sorted(tmkit.precedence(text)) == [
        ("C1", "C3", "flow"),
        ("C1", "C4", "flow"),
        ("C2", "C4", "flow"),
        ("C3", "C4", "trigger"),
    ]
    sequences, total = tmkit.chronologies(text)
    assert total == 3
    assert sequences == [
        ["C1", "C2", "C3", "C4"],
        ["C1", "C3", "C2", "C4"],
        ["C2", "C1", "C3", "C4"],
    ]


def test_airbag_nominal_activates_without_warnings():
    trace = tmkit.simulate(read("airbag.tm"), "nominal")
    events = {entry["event"] for entry in trace["entries"]}
    assert "E5" in events
    assert trace["warnings"] == []


def test_airbag_slow_sensor_warns():
    trace = tmkit.simulate(read("airbag.tm"), "slow_sensor")
    assert [w["warning_id"] for w in trace["warnings"]] == ["E6"]
    assert trace["warnings"][0]["bound_us"] == 5000
    assert "WARN E6" in trace["text"]


def test_parse_error_raises():
    with pytest.raises(ValueError):
        tmkit.validate("model \"m\"\nflow A.create ->")


def test_exports_and_canonical_round_trip():
    text = read("heart.tm")
    dot = tmkit.to_dot(text)
    assert dot.startswith("digraph")
    assert "style=dashed" in dot
    assert '"tm_schema": 1' in tmkit.to_json(text)
    canonical = tmkit.canonical(text)
    assert tmkit.canonical(canonical) == canonical
