#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kopl/value.hpp"

namespace kopl {

using EntityId = std::string;
using ConceptId = std::string;

/// Position of an entity/concept/relation inside a loaded KnowledgeBase. Ids are sorted, so
/// index order equals id order.
using EntityIndex = std::uint32_t;
using ConceptIndex = std::uint32_t;
using RelationIndex = std::uint32_t;

struct Qualifier {
    std::string key;
    Value value;

    bool operator==(const Qualifier&) const = default;
};

struct AttributeFact {
    EntityIndex subject = 0;
    std::string key;
    Value value;
    std::vector<Qualifier> qualifiers;

    bool operator==(const AttributeFact&) const = default;
};

struct RelationFact {
    EntityIndex subject = 0;
    std::string predicate;
    EntityIndex object = 0;
    std::vector<Qualifier> qualifiers;

    bool operator==(const RelationFact&) const = default;
};

struct Concept {
    ConceptId id;
    std::string name;
    std::vector<ConceptIndex> subclass_of;

    bool operator==(const Concept&) const = default;
};

struct Entity {
    EntityId id;
    std::string name;
    std::vector<ConceptIndex> instance_of;
    std::vector<AttributeFact> attributes;

    bool operator==(const Entity&) const = default;
};

enum class KbFormat { Json };

/// Immutable knowledge base: concepts in a subclass DAG, entities with attribute facts, and
/// relation facts stored once (subject -> object) and indexed in both directions.
class KnowledgeBase {
public:
    static KnowledgeBase load(std::istream& source, KbFormat format = KbFormat::Json);
    static KnowledgeBase load_file(const std::filesystem::path& path);
    static KnowledgeBase from_json(const nlohmann::json& doc);

    nlohmann::json to_json() const;
    void serialize(std::ostream& out) const;

    const std::vector<Concept>& concepts() const { return concepts_; }
    const std::vector<Entity>& entities() const { return entities_; }
    const std::vector<RelationFact>& relations() const { return relations_; }

    const Entity& entity(EntityIndex i) const { return entities_[i]; }
    const Concept& concept_at(ConceptIndex i) const { return concepts_[i]; }
    const RelationFact& relation(RelationIndex i) const { return relations_[i]; }

    std::optional<EntityIndex> find_entity(std::string_view id) const;
    std::optional<ConceptIndex> find_concept(std::string_view id) const;

    /// Entities carrying exactly this name, in id order.
    std::span<const EntityIndex> entities_named(std::string_view name) const;

    /// Entities that are instances of a concept with this name or of any of its descendants.
    std::vector<EntityIndex> entities_of_concept(std::string_view concept_name) const;

    /// Direct concepts of the entity plus all their ancestors, sorted.
    const std::vector<ConceptIndex>& concept_closure(EntityIndex e) const { return entity_closure_[e]; }

    std::span<const RelationIndex> outgoing(EntityIndex e) const { return outgoing_[e]; }
    std::span<const RelationIndex> incoming(EntityIndex e) const { return incoming_[e]; }

    /// All units occurring on quantity attribute or qualifier values.
    const std::set<std::string>& units() const { return units_; }
    /// Map a unit written in a question/program onto the KB's spelling (plural-insensitive).
    std::string canonical_unit(std::string_view unit) const;

    std::size_t attribute_fact_count() const;

    bool operator==(const KnowledgeBase& other) const {
        return concepts_ == other.concepts_ && entities_ == other.entities_ && relations_ == other.relations_;
    }

private:
    void build_indexes();

    std::vector<Concept> concepts_;
    std::vector<Entity> entities_;
    std::vector<RelationFact> relations_;

    std::map<std::string, std::vector<EntityIndex>, std::less<>> name_index_;
    std::map<std::string, std::vector<ConceptIndex>, std::less<>> concept_name_index_;
    std::vector<std::vector<EntityIndex>> concept_members_; // transitive
    std::vector<std::vector<ConceptIndex>> entity_closure_;
    std::vector<std::vector<RelationIndex>> outgoing_;
    std::vector<std::vector<RelationIndex>> incoming_;
    std::set<std::string> units_;
};

nlohmann::json value_to_json(const Value& v);
/// Throws Error(MalformedInput) naming `where` when the value object is ill-formed.
Value value_from_json(const nlohmann::json& j, const std::string& where);

} // namespace kopl
