#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kopl/kb.hpp"
#include "kopl/program.hpp"
#include "kopl/value.hpp"

namespace kopl {

/// Evidence fact attached to an entity row: an attribute fact (entity, position) or a relation fact.
struct FactRef {
    enum class Kind { Attribute, Relation };

    Kind kind = Kind::Attribute;
    std::uint32_t owner = 0; // entity index for attributes, relation index for relations
    std::uint32_t position = 0;

    static FactRef attribute(EntityIndex e, std::uint32_t pos) { return {Kind::Attribute, e, pos}; }
    static FactRef relation(RelationIndex r) { return {Kind::Relation, r, 0}; }

    const std::vector<Qualifier>& qualifiers(const KnowledgeBase& kb) const;

    bool operator==(const FactRef&) const = default;
    auto operator<=>(const FactRef&) const = default;
};

/// Terminal payload of a program.
struct Answer {
    DataKind kind = DataKind::String;
    std::string text; // entity name (STRING) or predicate (PREDICATE)
    std::int64_t number = 0;
    bool boolean = false;
    Value value;

    /// Canonical answer string: names and predicates verbatim, counts bare, booleans yes/no,
    /// values via Value::render.
    std::string render() const;

    static Answer name(std::string s) { return {DataKind::String, std::move(s), 0, false, {}}; }
    static Answer count(std::int64_t n) { return {DataKind::Number, {}, n, false, {}}; }
    static Answer truth(bool b) { return {DataKind::Boolean, {}, 0, b, {}}; }
    static Answer of_value(Value v) { return {DataKind::Value, {}, 0, false, std::move(v)}; }
    static Answer predicate(std::string p) { return {DataKind::Predicate, std::move(p), 0, false, {}}; }
};

/// Output of one call: an entity set (with a parallel fact list for ENTITIES_WITH_FACTS) or an answer.
struct ExecutionState {
    DataKind kind = DataKind::Entities;
    std::vector<EntityIndex> entities;
    std::vector<FactRef> facts; // empty unless kind == EntitiesWithFacts
    std::optional<Answer> answer;
    std::vector<std::string> notes; // e.g. entities skipped by SelectAmong

    bool has_facts() const { return kind == DataKind::EntitiesWithFacts; }
    /// Entities without repetition, in first-occurrence order.
    std::vector<EntityIndex> distinct_entities() const;
};

struct ExecutionResult {
    Answer answer;
    std::string rendered;
    std::vector<ExecutionState> trace;
};

/// Executes typechecked programs. Holds only a reference to the KB; safe to share across threads.
class Interpreter {
public:
    explicit Interpreter(const KnowledgeBase& kb) : kb_(kb) {}

    /// Typechecks, then runs every call. Data errors are CallError annotated with the call index.
    ExecutionResult execute(const Program& program) const;
    std::string run(const Program& program) const { return execute(program).rendered; }

    /// Evaluate a single call on already computed operand states.
    ExecutionState apply(const FunctionCall& call, const std::vector<const ExecutionState*>& operands) const;

    const KnowledgeBase& kb() const { return kb_; }

private:
    const KnowledgeBase& kb_;
};

/// Parse a typed textual argument; quantity units are mapped onto the KB's spelling.
std::optional<Value> parse_typed(const KnowledgeBase& kb, ValueKind kind, std::string_view text);

/// Parse an untyped textual argument in the type of `like` (the KB value it will be compared with).
/// A year-shaped text is accepted against a date.
std::optional<Value> coerce_untyped(const KnowledgeBase& kb, std::string_view text, const Value& like);

/// Candidate for SelectAmong/SelectBetween: an entity and its distinct values for the key.
struct SelectCandidate {
    EntityIndex entity = 0;
    std::vector<Value> values;
};

/// Winner of an extreme-value selection. Entities with zero or several values, or with text
/// values, are skipped (reasons appended to `notes`); the rest are grouped by unit (quantities) or
/// as one temporal group (dates and years) and the most populated group is used, ties broken by
/// the smallest group name. Throws Error(NonUniqueAnswer) on a tie at the extreme or no candidate.
EntityIndex select_extreme(const KnowledgeBase& kb, const std::vector<SelectCandidate>& candidates, bool largest,
                           std::vector<std::string>* notes = nullptr);

/// JSON trace: one object per step with function, inputs, kind, size and a preview of at most
/// 20 items.
nlohmann::json trace_to_json(const KnowledgeBase& kb, const Program& program, const std::vector<ExecutionState>& trace);

} // namespace kopl
