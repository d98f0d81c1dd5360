import json

import pytest

import kopl

DRAFTED = ("Find <arg> LeBron James <func> Relate <arg> drafted by <arg> forward "
          "<func> FilterConcept <arg> team <func> QueryName")


@pytest.fixture(scope="module")
def mini():
    return kopl.KnowledgeBase.nba_mini()


def test_fixture_shape(mini):
    assert (mini.entity_count, mini.concept_count, mini.relation_count) == (5, 6, 3)
    assert len(kopl.functions()) == 27


def test_run_and_trace(mini):
    assert mini.run(DRAFTED) == "Cleveland Cavaliers"
    trace = mini.trace(DRAFTED)
    assert [step["function"] for step in trace] == ["Find", "Relate", "FilterConcept", "QueryName"]


def test_errors_carry_their_class(mini):
    with pytest.raises(kopl.KoplError) as info:
        mini.run("Find <arg> Akron <func> QueryAttr <arg> population")
    assert info.value.code == "NonUniqueAnswer"


def test_program_forms_round_trip():
    calls = kopl.parse_program(DRAFTED)
    assert calls[1] == {"function": "Relate", "inputs": ["drafted by", "forward"], "dependencies": [0]}
    assert kopl.serialize_program(calls) == DRAFTED
    assert kopl.parse_program(json.dumps(calls)) == calls


def test_sparql_channel(mini):
    assert mini.query(kopl.compile(DRAFTED)) == "Cleveland Cavaliers"
    assert mini.query(kopl.compile("FindAll <func> FilterConcept <arg> city <func> QueryName")) is None


def test_generation_is_deterministic(mini):
    a = mini.generate(seed=4, count=5)
    b = mini.generate(seed=4, count=5)
    assert a == b and len(a) == 5
    for item in a:
        assert item["answer"] in item["choices"] and len(item["choices"]) == 10
        assert mini.run(json.dumps(item["program"])) == item["answer"]


def test_kb_dict_round_trip(mini):
    again = kopl.KnowledgeBase.from_dict(mini.to_dict())
    assert again.to_dict() == mini.to_dict()
    with pytest.raises(kopl.KoplError):
        kopl.KnowledgeBase.from_dict({"concepts": [], "entities": [{"id": "x"}]})
