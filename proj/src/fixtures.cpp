#include "kopl/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kopl/rng.hpp"

namespace kopl::fixtures {

using nlohmann::json;

const std::string& nba_mini_json() {
    static const std::string doc = R"json({
  "concepts": [
    {"id": "c_person", "name": "person", "subclassOf": []},
    {"id": "c_athlete", "name": "athlete", "subclassOf": ["c_person"]},
    {"id": "c_basketball_player", "name": "basketball player", "subclassOf": ["c_athlete"]},
    {"id": "c_team", "name": "team", "subclassOf": []},
    {"id": "c_basketball_team", "name": "basketball team", "subclassOf": ["c_team"]},
    {"id": "c_city", "name": "city", "subclassOf": []}
  ],
  "entities": [
    {
      "id": "e_lebron", "name": "LeBron James", "instanceOf": ["c_basketball_player"],
      "attributes": [
        {"key": "height", "value": {"type": "quantity", "value": 206, "unit": "centimetre"}, "qualifiers": {}},
        {"key": "sex or gender", "value": {"type": "string", "value": "male"}, "qualifiers": {}},
        {"key": "date of birth", "value": {"type": "date", "value": "1984-12-30"}, "qualifiers": {}}
      ],
      "relations": [
        {"predicate": "place of birth", "object": "e_akron", "direction": "forward", "qualifiers": {}},
        {"predicate": "drafted by", "object": "e_cavaliers", "direction": "forward",
         "qualifiers": {"point in time": [{"type": "year", "value": 2003}]}}
      ]
    },
    {
      "id": "e_lebron_jr", "name": "LeBron James Jr.", "instanceOf": ["c_basketball_player"],
      "attributes": [
        {"key": "height", "value": {"type": "quantity", "value": 188, "unit": "centimetre"},
         "qualifiers": {"point in time": [{"type": "date", "value": "2023-06-01"}]}},
        {"key": "sex or gender", "value": {"type": "string", "value": "male"}, "qualifiers": {}},
        {"key": "date of birth", "value": {"type": "date", "value": "2004-10-06"}, "qualifiers": {}}
      ],
      "relations": [
        {"predicate": "father", "object": "e_lebron", "direction": "forward", "qualifiers": {}}
      ]
    },
    {
      "id": "e_cavaliers", "name": "Cleveland Cavaliers", "instanceOf": ["c_basketball_team"],
      "attributes": [
        {"key": "social media followers", "value": {"type": "quantity", "value": "3,500,000", "unit": "1"},
         "qualifiers": {"point in time": [{"type": "year", "value": 2021}]}},
        {"key": "inception", "value": {"type": "year", "value": 1970}, "qualifiers": {}}
      ],
      "relations": []
    },
    {
      "id": "e_akron", "name": "Akron", "instanceOf": ["c_city"],
      "attributes": [
        {"key": "population", "value": {"type": "quantity", "value": "199,110", "unit": "1"},
         "qualifiers": {"point in time": [{"type": "year", "value": 2010}],
                        "determination method": [{"type": "string", "value": "census"}]}},
        {"key": "population", "value": {"type": "quantity", "value": "217,000", "unit": "1"},
         "qualifiers": {"point in time": [{"type": "year", "value": 1990}],
                        "determination method": [{"type": "string", "value": "estimate"}]}}
      ],
      "relations": []
    },
    {
      "id": "e_cleveland", "name": "Cleveland", "instanceOf": ["c_city"],
      "attributes": [],
      "relations": []
    }
  ]
}
)json";
    return doc;
}

KnowledgeBase nba_mini() {
    std::istringstream in(nba_mini_json());
    return KnowledgeBase::load(in);
}

namespace {

constexpr std::array<const char*, 40> kFirstNames{
    "James", "Michael", "Kevin", "Stephen", "Anthony", "Chris", "Dwyane", "Paul", "Tim", "Kyrie",
    "Kawhi", "Jayson", "Luka", "Nikola", "Joel", "Devin", "Damian", "Jimmy", "Russell", "Carmelo",
    "Tony", "Tracy", "Vince", "Ray", "Dirk", "Pau", "Jason", "Derrick", "Blake", "Klay",
    "Draymond", "Zion", "Trae", "Ja", "Donovan", "Bam", "Tyrese", "Jaylen", "Darius", "Evan"};

constexpr std::array<const char*, 40> kLastNames{
    "Walker", "Harris", "Thompson", "Green", "Johnson", "Williams", "Brown", "Davis", "Miller", "Wilson",
    "Moore", "Taylor", "Anderson", "Thomas", "Jackson", "White", "Martin", "Clark", "Lewis", "Robinson",
    "Young", "Allen", "King", "Wright", "Scott", "Hill", "Adams", "Baker", "Nelson", "Carter",
    "Mitchell", "Roberts", "Turner", "Phillips", "Campbell", "Parker", "Evans", "Edwards", "Collins", "Stewart"};

constexpr std::array<const char*, 32> kCityNames{
    "Columbus", "Toledo", "Dayton", "Cincinnati", "Canton", "Youngstown", "Lorain", "Parma",
    "Boston", "Chicago", "Denver", "Houston", "Phoenix", "Portland", "Seattle", "Dallas",
    "Atlanta", "Detroit", "Memphis", "Milwaukee", "Orlando", "Sacramento", "Miami", "Charlotte",
    "Indianapolis", "Minneapolis", "Oakland", "Brooklyn", "Toronto", "Utah", "San Antonio", "New Orleans"};

constexpr std::array<const char*, 24> kMascots{
    "Hawks", "Comets", "Lions", "Rockets", "Storm", "Giants", "Pioneers", "Rangers",
    "Bulls", "Suns", "Kings", "Knights", "Raptors", "Wolves", "Bears", "Flyers",
    "Stars", "Thunder", "Falcons", "Titans", "Sharks", "Eagles", "Pilots", "Monarchs"};

json quantity(double v, const std::string& unit) { return {{"type", "quantity"}, {"value", v}, {"unit", unit}}; }
json year(int y) { return {{"type", "year"}, {"value", y}}; }
json text(const std::string& s) { return {{"type", "string"}, {"value", s}}; }
json date(int y, int m, int d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return {{"type", "date"}, {"value", buf}};
}

json attribute(const std::string& key, json value, json qualifiers = json::object()) {
    return {{"key", key}, {"value", std::move(value)}, {"qualifiers", std::move(qualifiers)}};
}

json relation(const std::string& predicate, const std::string& object, json qualifiers = json::object()) {
    return {{"predicate", predicate}, {"object", object}, {"direction", "forward"}, {"qualifiers", std::move(qualifiers)}};
}

std::string make_id(char prefix, std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%c%04zu", prefix, n);
    return buf;
}

} // namespace

json expand_nba_mini(std::size_t entity_count, std::uint64_t seed) {
    json doc = json::parse(nba_mini_json());
    doc["concepts"].push_back({{"id", "c_football_player"}, {"name", "american football player"}, {"subclassOf", {"c_athlete"}}});
    doc["concepts"].push_back({{"id", "c_football_team"}, {"name", "american football team"}, {"subclassOf", {"c_team"}}});
    if (entity_count <= 5) return doc;

    Rng rng(seed);
    const std::size_t extra = entity_count - 5;
    const std::size_t n_cities = std::max<std::size_t>(2, extra / 10);
    const std::size_t n_teams = std::max<std::size_t>(2, extra * 15 / 100);
    const std::size_t n_players = extra > n_cities + n_teams ? extra - n_cities - n_teams : 0;

    std::vector<std::string> city_ids{"e_akron", "e_cleveland"};
    std::vector<std::string> city_names{"Akron", "Cleveland"};
    for (std::size_t i = 0; i < n_cities; ++i) {
        std::string name = kCityNames[i % kCityNames.size()];
        if (i >= kCityNames.size()) name += " " + std::to_string(i / kCityNames.size() + 1);
        const auto id = make_id('c', i + 1);
        json attrs = json::array();
        const int n_pop = static_cast<int>(rng.between(1, 3));
        int census = 2020;
        for (int k = 0; k < n_pop; ++k) {
            const double pop = static_cast<double>(rng.between(20, 900) * 1000 + rng.between(0, 999));
            attrs.push_back(attribute("population", quantity(pop, "1"),
                                      {{"point in time", {year(census)}},
                                       {"determination method", {text(rng.chance(0.7) ? "census" : "estimate")}}}));
            census -= 10;
        }
        attrs.push_back(attribute("area", quantity(static_cast<double>(rng.between(50, 1500)), "square kilometre")));
        attrs.push_back(attribute("inception", year(static_cast<int>(rng.between(1780, 1900)))));
        doc["entities"].push_back({{"id", id}, {"name", name}, {"instanceOf", {"c_city"}}, {"attributes", attrs}, {"relations", json::array()}});
        city_ids.push_back(id);
        city_names.push_back(name);
    }

    std::vector<std::string> team_ids{"e_cavaliers"};
    for (std::size_t i = 0; i < n_teams; ++i) {
        const auto city = rng.below(city_ids.size());
        const bool football = rng.chance(0.3);
        std::string name = city_names[city] + " " + kMascots[rng.below(kMascots.size())];
        const auto id = make_id('t', i + 1);
        json attrs = json::array();
        attrs.push_back(attribute("inception", year(static_cast<int>(rng.between(1946, 2004)))));
        int when = 2021;
        const int n_followers = static_cast<int>(rng.between(1, 2));
        for (int k = 0; k < n_followers; ++k) {
            attrs.push_back(attribute("social media followers", quantity(static_cast<double>(rng.between(50, 9000) * 1000), "1"),
                                      {{"point in time", {year(when)}}}));
            when -= 3;
        }
        json rels = json::array();
        rels.push_back(relation("located in", city_ids[city]));
        doc["entities"].push_back({{"id", id},
                                   {"name", name},
                                   {"instanceOf", {football ? "c_football_team" : "c_basketball_team"}},
                                   {"attributes", attrs},
                                   {"relations", rels}});
        team_ids.push_back(id);
    }

    std::vector<std::string> player_ids{"e_lebron", "e_lebron_jr"};
    std::vector<std::string> player_names{"LeBron James", "LeBron James Jr."};
    std::vector<int> birth_years{1984, 2004};
    for (std::size_t i = 0; i < n_players; ++i) {
        std::string name;
        if (i > 10 && rng.chance(0.03)) {
            name = player_names[rng.below(player_names.size())];
        } else {
            name = std::string(kFirstNames[rng.below(kFirstNames.size())]) + " " + kLastNames[rng.below(kLastNames.size())];
        }
        const auto id = make_id('p', i + 1);
        const bool football = rng.chance(0.3);
        const int born = static_cast<int>(rng.between(1960, 2003));
        json attrs = json::array();
        if (rng.chance(0.95)) {
            const auto cm = rng.between(170, 229);
            if (rng.chance(0.05)) {
                attrs.push_back(attribute("height", quantity(static_cast<double>(cm) / 100.0, "metre")));
            } else {
                attrs.push_back(attribute("height", quantity(static_cast<double>(cm), "centimetre")));
            }
        }
        if (rng.chance(0.8)) attrs.push_back(attribute("mass", quantity(static_cast<double>(rng.between(70, 140)), "kilogram")));
        attrs.push_back(attribute("date of birth", date(born, static_cast<int>(rng.between(1, 12)), static_cast<int>(rng.between(1, 28)))));
        attrs.push_back(attribute("sex or gender", text(rng.chance(0.9) ? "male" : "female")));

        json rels = json::array();
        if (rng.chance(0.9)) rels.push_back(relation("place of birth", city_ids[rng.below(city_ids.size())]));
        if (rng.chance(0.6)) {
            rels.push_back(relation("drafted by", team_ids[rng.below(team_ids.size())],
                                    {{"point in time", {year(born + static_cast<int>(rng.between(19, 22)))}}}));
        }
        const int n_teams_played = static_cast<int>(rng.between(0, 2));
        for (int k = 0; k < n_teams_played; ++k) {
            const int start = born + static_cast<int>(rng.between(19, 30));
            rels.push_back(relation("member of sports team", team_ids[rng.below(team_ids.size())],
                                    {{"start time", {date(start, static_cast<int>(rng.between(1, 12)), 1)}}}));
        }
        if (rng.chance(0.05)) {
            std::vector<std::size_t> older;
            for (std::size_t k = 0; k < player_ids.size(); ++k) {
                if (birth_years[k] + 20 <= born) older.push_back(k);
            }
            if (!older.empty()) rels.push_back(relation("father", player_ids[older[rng.below(older.size())]]));
        }
        doc["entities"].push_back({{"id", id},
                                   {"name", name},
                                   {"instanceOf", {football ? "c_football_player" : "c_basketball_player"}},
                                   {"attributes", attrs},
                                   {"relations", rels}});
        player_ids.push_back(id);
        player_names.push_back(name);
        birth_years.push_back(born);
    }
    return doc;
}

} // namespace kopl::fixtures
