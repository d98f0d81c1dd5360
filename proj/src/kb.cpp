#include "kopl/kb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "kopl/errors.hpp"

namespace kopl {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::MalformedInput, where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) malformed(where, std::string("missing field \"") + key + "\"");
    return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    const auto& v = require(obj, key, where);
    if (!v.is_string()) malformed(where + "/" + key, "expected a string");
    return v.get<std::string>();
}

std::vector<std::string> string_list(const json& obj, const char* key, const std::string& where) {
    std::vector<std::string> out;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return out;
    if (!it->is_array()) malformed(where + "/" + key, "expected an array of ids");
    for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& s = (*it)[i];
        if (!s.is_string()) malformed(where + "/" + key + "/" + std::to_string(i), "expected a string id");
        out.push_back(s.get<std::string>());
    }
    return out;
}

bool qualifier_less(const Qualifier& a, const Qualifier& b) {
    if (a.key != b.key) return a.key < b.key;
    return canonical_less(a.value, b.value);
}

bool qualifiers_less(const std::vector<Qualifier>& a, const std::vector<Qualifier>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), qualifier_less);
}

std::vector<Qualifier> parse_qualifiers(const json& obj, const std::string& where) {
    std::vector<Qualifier> out;
    auto it = obj.find("qualifiers");
    if (it == obj.end() || it->is_null()) return out;
    const std::string base = where + "/qualifiers";
    if (it->is_object()) {
        for (auto q = it->begin(); q != it->end(); ++q) {
            if (q.key().empty()) malformed(base, "empty qualifier key");
            const std::string qwhere = base + "/" + q.key();
            if (q->is_array()) {
                for (std::size_t i = 0; i < q->size(); ++i) {
                    out.push_back({q.key(), value_from_json((*q)[i], qwhere + "/" + std::to_string(i))});
                }
            } else {
                out.push_back({q.key(), value_from_json(*q, qwhere)});
            }
        }
    } else if (it->is_array()) {
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto& q = (*it)[i];
            const std::string qwhere = base + "/" + std::to_string(i);
            if (!q.is_object()) malformed(qwhere, "expected a qualifier object");
            auto key = require_string(q, "key", qwhere);
            if (key.empty()) malformed(qwhere, "empty qualifier key");
            out.push_back({key, value_from_json(require(q, "value", qwhere), qwhere + "/value")});
        }
    } else {
        malformed(base, "expected an object or array");
    }
    std::sort(out.begin(), out.end(), qualifier_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

json qualifiers_to_json(const std::vector<Qualifier>& qs) {
    json out = json::object();
    for (const auto& q : qs) out[q.key].push_back(value_to_json(q.value));
    return out;
}

/// Records are gathered by id from either the array layout or the id-keyed object layout.
std::vector<std::pair<std::string, const json*>> records(const json& doc, const char* key) {
    std::vector<std::pair<std::string, const json*>> out;
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return out;
    const std::string where = std::string("/") + key;
    if (it->is_array()) {
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto& r = (*it)[i];
            const std::string rwhere = where + "/" + std::to_string(i);
            if (!r.is_object()) malformed(rwhere, "expected an object");
            out.emplace_back(require_string(r, "id", rwhere), &r);
        }
    } else if (it->is_object()) {
        for (auto r = it->begin(); r != it->end(); ++r) {
            if (!r->is_object()) malformed(where + "/" + r.key(), "expected an object");
            out.emplace_back(r.key(), &*r);
        }
    } else {
        malformed(where, "expected an array or object");
    }
    return out;
}

} // namespace

json value_to_json(const Value& v) {
    json out;
    out["type"] = std::string(value_kind_name(v.kind()));
    switch (v.kind()) {
        case ValueKind::Text: out["value"] = v.as_text(); break;
        case ValueKind::Quantity: {
            const auto& q = v.as_quantity();
            if (std::nearbyint(q.magnitude) == q.magnitude && std::fabs(q.magnitude) < 1e15) {
                out["value"] = static_cast<long long>(q.magnitude);
            } else {
                out["value"] = q.magnitude;
            }
            out["unit"] = q.unit;
            break;
        }
        case ValueKind::Date: out["value"] = v.render(); break;
        case ValueKind::Year: out["value"] = v.as_year(); break;
    }
    return out;
}

Value value_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) malformed(where, "expected a value object");
    auto type = require_string(j, "type", where);
    auto kind = parse_value_kind(type);
    if (!kind) malformed(where + "/type", "unknown value type \"" + type + "\"");
    const auto& raw = require(j, "value", where);
    const std::string vwhere = where + "/value";
    switch (*kind) {
        case ValueKind::Text:
            if (!raw.is_string()) malformed(vwhere, "expected a string");
            return Value::text(raw.get<std::string>());
        case ValueKind::Quantity: {
            std::optional<double> m;
            if (raw.is_number()) {
                m = raw.get<double>();
            } else if (raw.is_string()) {
                m = parse_magnitude(raw.get<std::string>());
            }
            if (!m) malformed(vwhere, "expected a number");
            std::string unit = "1";
            if (auto u = j.find("unit"); u != j.end() && !u->is_null()) {
                if (!u->is_string()) malformed(where + "/unit", "expected a string");
                unit = u->get<std::string>();
                if (unit.empty()) malformed(where + "/unit", "empty unit (use \"1\" for dimensionless)");
            }
            return Value::quantity(*m, unit);
        }
        case ValueKind::Date: {
            if (!raw.is_string()) malformed(vwhere, "expected an ISO date string");
            auto d = parse_date(raw.get<std::string>());
            if (!d) malformed(vwhere, "not a valid calendar date \"" + raw.get<std::string>() + "\"");
            return Value::date(d->year, d->month, d->day);
        }
        case ValueKind::Year: {
            std::optional<int> y;
            if (raw.is_number_integer()) {
                y = raw.get<int>();
            } else if (raw.is_string()) {
                y = parse_year(raw.get<std::string>());
            }
            if (!y) malformed(vwhere, "expected an integer year");
            return Value::year(*y);
        }
    }
    malformed(where, "unreachable");
}

KnowledgeBase KnowledgeBase::load(std::istream& source, KbFormat) {
    json doc;
    try {
        doc = json::parse(source);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedInput, "byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return from_json(doc);
}

KnowledgeBase KnowledgeBase::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    try {
        return load(in);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + std::string(e.what()).substr(error_code_name(e.code()).size() + 2));
    }
}

KnowledgeBase KnowledgeBase::from_json(const json& doc) {
    if (!doc.is_object()) malformed("/", "expected a JSON object with \"concepts\" and \"entities\"");

    KnowledgeBase kb;
    auto concept_records = records(doc, "concepts");
    auto entity_records = records(doc, "entities");

    std::sort(concept_records.begin(), concept_records.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::sort(entity_records.begin(), entity_records.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < concept_records.size(); ++i) {
        if (concept_records[i].first == concept_records[i - 1].first)
            malformed("/concepts", "duplicate concept id \"" + concept_records[i].first + "\"");
    }
    for (std::size_t i = 1; i < entity_records.size(); ++i) {
        if (entity_records[i].first == entity_records[i - 1].first)
            malformed("/entities", "duplicate entity id \"" + entity_records[i].first + "\"");
    }

    std::map<std::string, ConceptIndex, std::less<>> concept_ids;
    for (std::size_t i = 0; i < concept_records.size(); ++i)
        concept_ids.emplace(concept_records[i].first, static_cast<ConceptIndex>(i));
    std::map<std::string, EntityIndex, std::less<>> entity_ids;
    for (std::size_t i = 0; i < entity_records.size(); ++i) {
        if (concept_ids.count(entity_records[i].first))
            malformed("/entities", "id \"" + entity_records[i].first + "\" is used by a concept and an entity");
        entity_ids.emplace(entity_records[i].first, static_cast<EntityIndex>(i));
    }

    auto concept_ref = [&](const std::string& id, const std::string& where) {
        auto it = concept_ids.find(id);
        if (it == concept_ids.end())
            throw Error(ErrorCode::DanglingReference, where + ": unknown concept \"" + id + "\"");
        return it->second;
    };
    auto entity_ref = [&](const std::string& id, const std::string& where) {
        auto it = entity_ids.find(id);
        if (it == entity_ids.end())
            throw Error(ErrorCode::DanglingReference, where + ": unknown entity \"" + id + "\"");
        return it->second;
    };

    for (const auto& [id, rec] : concept_records) {
        const std::string where = "/concepts/" + id;
        Concept c;
        c.id = id;
        c.name = require_string(*rec, "name", where);
        if (c.name.empty()) malformed(where + "/name", "empty concept name");
        for (const auto& parent : string_list(*rec, "subclassOf", where))
            c.subclass_of.push_back(concept_ref(parent, where + "/subclassOf"));
        // published dumps list concept parents under instanceOf
        for (const auto& parent : string_list(*rec, "instanceOf", where))
            c.subclass_of.push_back(concept_ref(parent, where + "/instanceOf"));
        std::sort(c.subclass_of.begin(), c.subclass_of.end());
        c.subclass_of.erase(std::unique(c.subclass_of.begin(), c.subclass_of.end()), c.subclass_of.end());
        kb.concepts_.push_back(std::move(c));
    }

    for (std::size_t ei = 0; ei < entity_records.size(); ++ei) {
        const auto& [id, rec] = entity_records[ei];
        const std::string where = "/entities/" + id;
        Entity e;
        e.id = id;
        e.name = require_string(*rec, "name", where);
        if (e.name.empty()) malformed(where + "/name", "empty entity name");
        for (const auto& c : string_list(*rec, "instanceOf", where))
            e.instance_of.push_back(concept_ref(c, where + "/instanceOf"));
        std::sort(e.instance_of.begin(), e.instance_of.end());
        e.instance_of.erase(std::unique(e.instance_of.begin(), e.instance_of.end()), e.instance_of.end());

        if (auto attrs = rec->find("attributes"); attrs != rec->end() && !attrs->is_null()) {
            if (!attrs->is_array()) malformed(where + "/attributes", "expected an array");
            for (std::size_t i = 0; i < attrs->size(); ++i) {
                const auto& a = (*attrs)[i];
                const std::string awhere = where + "/attributes/" + std::to_string(i);
                if (!a.is_object()) malformed(awhere, "expected an attribute object");
                AttributeFact fact;
                fact.subject = static_cast<EntityIndex>(ei);
                fact.key = require_string(a, "key", awhere);
                if (fact.key.empty()) malformed(awhere + "/key", "empty attribute key");
                fact.value = value_from_json(require(a, "value", awhere), awhere + "/value");
                fact.qualifiers = parse_qualifiers(a, awhere);
                e.attributes.push_back(std::move(fact));
            }
        }

        if (auto rels = rec->find("relations"); rels != rec->end() && !rels->is_null()) {
            if (!rels->is_array()) malformed(where + "/relations", "expected an array");
            for (std::size_t i = 0; i < rels->size(); ++i) {
                const auto& r = (*rels)[i];
                const std::string rwhere = where + "/relations/" + std::to_string(i);
                if (!r.is_object()) malformed(rwhere, "expected a relation object");
                RelationFact fact;
                fact.predicate = require_string(r, "predicate", rwhere);
                if (fact.predicate.empty()) malformed(rwhere + "/predicate", "empty predicate");
                auto other = entity_ref(require_string(r, "object", rwhere), rwhere + "/object");
                std::string direction = "forward";
                if (auto d = r.find("direction"); d != r.end() && !d->is_null()) {
                    if (!d->is_string()) malformed(rwhere + "/direction", "expected a string");
                    direction = d->get<std::string>();
                }
                if (direction == "forward") {
                    fact.subject = static_cast<EntityIndex>(ei);
                    fact.object = other;
                } else if (direction == "backward") {
                    fact.subject = other;
                    fact.object = static_cast<EntityIndex>(ei);
                } else {
                    malformed(rwhere + "/direction", "expected \"forward\" or \"backward\"");
                }
                fact.qualifiers = parse_qualifiers(r, rwhere);
                kb.relations_.push_back(std::move(fact));
            }
        }
        kb.entities_.push_back(std::move(e));
    }

    // Canonical order makes the loaded KB independent of record order.
    for (auto& e : kb.entities_) {
        std::sort(e.attributes.begin(), e.attributes.end(), [](const AttributeFact& a, const AttributeFact& b) {
            if (a.key != b.key) return a.key < b.key;
            if (!(a.value == b.value)) return canonical_less(a.value, b.value);
            return qualifiers_less(a.qualifiers, b.qualifiers);
        });
        e.attributes.erase(std::unique(e.attributes.begin(), e.attributes.end()), e.attributes.end());
    }
    std::sort(kb.relations_.begin(), kb.relations_.end(), [](const RelationFact& a, const RelationFact& b) {
        if (a.subject != b.subject) return a.subject < b.subject;
        if (a.predicate != b.predicate) return a.predicate < b.predicate;
        if (a.object != b.object) return a.object < b.object;
        return qualifiers_less(a.qualifiers, b.qualifiers);
    });
    kb.relations_.erase(std::unique(kb.relations_.begin(), kb.relations_.end()), kb.relations_.end());

    // subclass_of must be acyclic
    {
        enum class Mark { White, Grey, Black };
        std::vector<Mark> mark(kb.concepts_.size(), Mark::White);
        std::function<void(ConceptIndex)> visit = [&](ConceptIndex c) {
            mark[c] = Mark::Grey;
            for (auto p : kb.concepts_[c].subclass_of) {
                if (mark[p] == Mark::Grey)
                    throw Error(ErrorCode::CyclicConceptGraph,
                                "concept \"" + kb.concepts_[c].id + "\" reaches itself via \"" + kb.concepts_[p].id + "\"");
                if (mark[p] == Mark::White) visit(p);
            }
            mark[c] = Mark::Black;
        };
        for (ConceptIndex c = 0; c < kb.concepts_.size(); ++c) {
            if (mark[c] == Mark::White) visit(c);
        }
    }

    kb.build_indexes();
    return kb;
}

void KnowledgeBase::build_indexes() {
    const auto n_concepts = concepts_.size();
    const auto n_entities = entities_.size();

    // ancestors[c] = c plus every transitive superclass
    std::vector<std::vector<ConceptIndex>> ancestors(n_concepts);
    std::vector<bool> done(n_concepts, false);
    std::function<const std::vector<ConceptIndex>&(ConceptIndex)> ancestors_of =
        [&](ConceptIndex c) -> const std::vector<ConceptIndex>& {
        if (done[c]) return ancestors[c];
        std::vector<ConceptIndex> acc{c};
        for (auto p : concepts_[c].subclass_of) {
            const auto& up = ancestors_of(p);
            acc.insert(acc.end(), up.begin(), up.end());
        }
        std::sort(acc.begin(), acc.end());
        acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
        ancestors[c] = std::move(acc);
        done[c] = true;
        return ancestors[c];
    };

    entity_closure_.assign(n_entities, {});
    concept_members_.assign(n_concepts, {});
    for (EntityIndex e = 0; e < n_entities; ++e) {
        std::vector<ConceptIndex> closure;
        for (auto c : entities_[e].instance_of) {
            const auto& up = ancestors_of(c);
            closure.insert(closure.end(), up.begin(), up.end());
        }
        std::sort(closure.begin(), closure.end());
        closure.erase(std::unique(closure.begin(), closure.end()), closure.end());
        for (auto c : closure) concept_members_[c].push_back(e);
        entity_closure_[e] = std::move(closure);
    }

    name_index_.clear();
    for (EntityIndex e = 0; e < n_entities; ++e) name_index_[entities_[e].name].push_back(e);
    concept_name_index_.clear();
    for (ConceptIndex c = 0; c < n_concepts; ++c) concept_name_index_[concepts_[c].name].push_back(c);

    outgoing_.assign(n_entities, {});
    incoming_.assign(n_entities, {});
    for (RelationIndex r = 0; r < relations_.size(); ++r) {
        outgoing_[relations_[r].subject].push_back(r);
        incoming_[relations_[r].object].push_back(r);
    }

    units_.clear();
    auto note_unit = [&](const Value& v) {
        if (v.is_quantity()) units_.insert(v.as_quantity().unit);
    };
    for (const auto& e : entities_) {
        for (const auto& a : e.attributes) {
            note_unit(a.value);
            for (const auto& q : a.qualifiers) note_unit(q.value);
        }
    }
    for (const auto& r : relations_) {
        for (const auto& q : r.qualifiers) note_unit(q.value);
    }
}

std::optional<EntityIndex> KnowledgeBase::find_entity(std::string_view id) const {
    auto it = std::lower_bound(entities_.begin(), entities_.end(), id,
                               [](const Entity& e, std::string_view key) { return e.id < key; });
    if (it == entities_.end() || it->id != id) return std::nullopt;
    return static_cast<EntityIndex>(it - entities_.begin());
}

std::optional<ConceptIndex> KnowledgeBase::find_concept(std::string_view id) const {
    auto it = std::lower_bound(concepts_.begin(), concepts_.end(), id,
                               [](const Concept& c, std::string_view key) { return c.id < key; });
    if (it == concepts_.end() || it->id != id) return std::nullopt;
    return static_cast<ConceptIndex>(it - concepts_.begin());
}

std::span<const EntityIndex> KnowledgeBase::entities_named(std::string_view name) const {
    auto it = name_index_.find(name);
    if (it == name_index_.end()) return {};
    return it->second;
}

std::vector<EntityIndex> KnowledgeBase::entities_of_concept(std::string_view concept_name) const {
    auto it = concept_name_index_.find(concept_name);
    if (it == concept_name_index_.end()) return {};
    if (it->second.size() == 1) return concept_members_[it->second.front()];
    std::vector<EntityIndex> out;
    for (auto c : it->second) out.insert(out.end(), concept_members_[c].begin(), concept_members_[c].end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string KnowledgeBase::canonical_unit(std::string_view unit) const {
    if (units_.count(std::string(unit))) return std::string(unit);
    for (const auto& u : units_) {
        if (units_match(u, unit)) return u;
    }
    return std::string(unit);
}

std::size_t KnowledgeBase::attribute_fact_count() const {
    std::size_t n = 0;
    for (const auto& e : entities_) n += e.attributes.size();
    return n;
}

json KnowledgeBase::to_json() const {
    json concepts = json::array();
    for (const auto& c : concepts_) {
        json parents = json::array();
        for (auto p : c.subclass_of) parents.push_back(concepts_[p].id);
        concepts.push_back({{"id", c.id}, {"name", c.name}, {"subclassOf", parents}});
    }
    json entities = json::array();
    for (EntityIndex ei = 0; ei < entities_.size(); ++ei) {
        const auto& e = entities_[ei];
        json types = json::array();
        for (auto c : e.instance_of) types.push_back(concepts_[c].id);
        json attrs = json::array();
        for (const auto& a : e.attributes) {
            attrs.push_back({{"key", a.key}, {"value", value_to_json(a.value)}, {"qualifiers", qualifiers_to_json(a.qualifiers)}});
        }
        json rels = json::array();
        for (auto r : outgoing_[ei]) {
            const auto& f = relations_[r];
            rels.push_back({{"predicate", f.predicate},
                            {"object", entities_[f.object].id},
                            {"direction", "forward"},
                            {"qualifiers", qualifiers_to_json(f.qualifiers)}});
        }
        entities.push_back({{"id", e.id}, {"name", e.name}, {"instanceOf", types}, {"attributes", attrs}, {"relations", rels}});
    }
    return json{{"concepts", concepts}, {"entities", entities}};
}

void KnowledgeBase::serialize(std::ostream& out) const { out << to_json().dump(1) << '\n'; }

} // namespace kopl
