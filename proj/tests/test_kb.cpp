#include "doctest.h"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kopl/errors.hpp"
#include "kopl/fixtures.hpp"
#include "kopl/kb.hpp"
#include "kopl/triples.hpp"

using namespace kopl;
using nlohmann::json;

namespace {

ErrorCode load_error(const json& doc) {
    try {
        KnowledgeBase::from_json(doc);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected the load to fail");
    return ErrorCode::Io;
}

std::vector<std::string> names(const KnowledgeBase& kb, std::vector<EntityIndex> es) {
    std::vector<std::string> out;
    for (auto e : es) out.push_back(kb.entity(e).name);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("nba-mini loads with the expected shape") {
    const auto kb = fixtures::nba_mini();
    CHECK(kb.concepts().size() == 6);
    CHECK(kb.entities().size() == 5);
    CHECK(kb.relations().size() == 3);
    CHECK(kb.attribute_fact_count() == 10);
    CHECK(kb.entities_named("LeBron James").size() == 1);
    CHECK(kb.entities_named("Nobody").empty());
}

TEST_CASE("concept membership is transitive") {
    const auto kb = fixtures::nba_mini();
    CHECK(names(kb, kb.entities_of_concept("person")) == std::vector<std::string>{"LeBron James", "LeBron James Jr."});
    CHECK(names(kb, kb.entities_of_concept("team")) == std::vector<std::string>{"Cleveland Cavaliers"});
    CHECK(kb.entities_of_concept("planet").empty());
    const auto lebron = kb.entities_named("LeBron James")[0];
    CHECK(kb.concept_closure(lebron).size() == 3);
}

TEST_CASE("relations are stored once and indexed both ways") {
    const auto kb = fixtures::nba_mini();
    const auto lebron = kb.entities_named("LeBron James")[0];
    const auto cavs = kb.entities_named("Cleveland Cavaliers")[0];
    CHECK(kb.outgoing(lebron).size() == 2);
    CHECK(kb.incoming(lebron).size() == 1);
    REQUIRE(kb.incoming(cavs).size() == 1);
    const auto& drafted = kb.relation(kb.incoming(cavs)[0]);
    CHECK(drafted.predicate == "drafted by");
    CHECK(drafted.subject == lebron);
    REQUIRE(drafted.qualifiers.size() == 1);
    CHECK(drafted.qualifiers[0].value == Value::year(2003));
}

TEST_CASE("serialization round-trips") {
    const auto kb = fixtures::nba_mini();
    std::stringstream buf;
    kb.serialize(buf);
    const auto again = KnowledgeBase::load(buf);
    CHECK(again == kb);
    std::stringstream buf2;
    again.serialize(buf2);
    std::stringstream buf1;
    kb.serialize(buf1);
    CHECK(buf1.str() == buf2.str());
}

TEST_CASE("both record layouts and both relation directions load identically") {
    json arrays = json::parse(fixtures::nba_mini_json());
    json keyed = {{"concepts", json::object()}, {"entities", json::object()}};
    for (auto c : arrays["concepts"]) {
        const auto id = c["id"].get<std::string>();
        c.erase("id");
        keyed["concepts"][id] = c;
    }
    for (auto e : arrays["entities"]) {
        const auto id = e["id"].get<std::string>();
        e.erase("id");
        keyed["entities"][id] = e;
    }
    // the father relation written from the other end
    auto& jr = keyed["entities"]["e_lebron_jr"];
    jr["relations"] = json::array();
    keyed["entities"]["e_lebron"]["relations"].push_back(
        {{"predicate", "father"}, {"object", "e_lebron_jr"}, {"direction", "backward"}, {"qualifiers", json::object()}});
    CHECK(KnowledgeBase::from_json(keyed) == KnowledgeBase::from_json(arrays));
}

TEST_CASE("concept parents may be listed under instanceOf") {
    json doc = json::parse(fixtures::nba_mini_json());
    for (auto& c : doc["concepts"]) {
        c["instanceOf"] = c["subclassOf"];
        c.erase("subclassOf");
    }
    CHECK(KnowledgeBase::from_json(doc) == fixtures::nba_mini());
}

TEST_CASE("a relation listed on both ends is kept once") {
    json doc = json::parse(fixtures::nba_mini_json());
    for (auto& e : doc["entities"]) {
        if (e["id"] == "e_lebron") {
            e["relations"].push_back({{"predicate", "father"}, {"object", "e_lebron_jr"}, {"direction", "backward"}, {"qualifiers", json::object()}});
        }
    }
    CHECK(KnowledgeBase::from_json(doc).relations().size() == 3);
}

TEST_CASE("malformed documents are rejected with the right class") {
    const json base = json::parse(fixtures::nba_mini_json());
    CHECK(load_error(json::array()) == ErrorCode::MalformedInput);

    auto dangling = base;
    dangling["entities"][0]["instanceOf"] = {"c_missing"};
    CHECK(load_error(dangling) == ErrorCode::DanglingReference);

    auto dangling_rel = base;
    dangling_rel["entities"][0]["relations"][0]["object"] = "e_missing";
    CHECK(load_error(dangling_rel) == ErrorCode::DanglingReference);

    auto cyclic = base;
    cyclic["concepts"][0]["subclassOf"] = {"c_basketball_player"};
    CHECK(load_error(cyclic) == ErrorCode::CyclicConceptGraph);

    auto bad_value = base;
    bad_value["entities"][0]["attributes"][0]["value"] = {{"type", "quantity"}, {"value", "tall"}};
    CHECK(load_error(bad_value) == ErrorCode::MalformedInput);

    auto bad_date = base;
    bad_date["entities"][0]["attributes"][2]["value"] = {{"type", "date"}, {"value", "1984-02-30"}};
    CHECK(load_error(bad_date) == ErrorCode::MalformedInput);

    auto bad_direction = base;
    bad_direction["entities"][0]["relations"][0]["direction"] = "sideways";
    CHECK(load_error(bad_direction) == ErrorCode::MalformedInput);

    auto duplicate = base;
    duplicate["entities"].push_back(duplicate["entities"][0]);
    CHECK(load_error(duplicate) == ErrorCode::MalformedInput);

    std::stringstream junk("{not json");
    CHECK_THROWS_AS(KnowledgeBase::load(junk), Error);
    CHECK_THROWS_AS(KnowledgeBase::load_file("/nonexistent/kb.json"), Error);
}

TEST_CASE("units map onto the KB spelling") {
    const auto kb = fixtures::nba_mini();
    CHECK(kb.canonical_unit("centimetres") == "centimetre");
    CHECK(kb.canonical_unit("centimetre") == "centimetre");
    CHECK(kb.canonical_unit("furlong") == "furlong");
}

TEST_CASE("expansion keeps the fixture and is deterministic") {
    const auto a = fixtures::expand_nba_mini(200, 7);
    const auto b = fixtures::expand_nba_mini(200, 7);
    CHECK(a == b);
    const auto kb = KnowledgeBase::from_json(a);
    CHECK(kb.entities().size() == 200);
    const auto mini = fixtures::nba_mini();
    for (const auto& e : mini.entities()) {
        auto i = kb.find_entity(e.id);
        REQUIRE(i);
        CHECK(kb.entity(*i).name == e.name);
        CHECK(kb.entity(*i).attributes.size() == e.attributes.size());
    }
    CHECK(fixtures::expand_nba_mini(200, 8) != a);
}

TEST_CASE("triple view reifies facts") {
    const auto kb = fixtures::nba_mini();
    const auto triples = triple_view(kb);
    auto count = [&](std::string_view pred) {
        return std::count_if(triples.begin(), triples.end(), [&](const Triple& t) { return t.predicate.text == pred; });
    };
    CHECK(count(vocab::fact_h) == 13);
    CHECK(count(vocab::fact_r) == 13);
    CHECK(count(vocab::fact_t) == 3);
    CHECK(count(vocab::unit) == 5);
    CHECK(count(vocab::subclass_of) == 3);
    CHECK(count("population") == 2);
    CHECK(count("point in time") == 5);
    std::stringstream out;
    dump_triples(kb, out);
    CHECK(out.str().find("<pred:fact_r>") != std::string::npos);
}
