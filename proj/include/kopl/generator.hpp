#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kopl/interpreter.hpp"
#include "kopl/kb.hpp"
#include "kopl/program.hpp"
#include "kopl/rng.hpp"
#include "kopl/sparql.hpp"
#include "kopl/templates.hpp"

namespace kopl {

inline constexpr std::array<std::string_view, 7> kLocatingStrategies{
    "EntityName", "ConceptName", "ConceptLiteral", "ConceptRelational", "RecursiveMultiHop", "Intersection", "Union"};

inline constexpr std::array<std::string_view, 9> kAskingStrategies{
    "QueryName",     "Count",  "QueryAttribute",   "Relation",           "SelectAmong",
    "SelectBetween", "Verify", "QualifierLiteral", "QualifierRelational"};

struct GeneratorConfig {
    std::uint64_t seed = 1;
    std::size_t count = 100;
    int max_depth = 2;
    /// Weights for the 7 locating and 9 asking strategy names; missing names weigh 0.
    std::map<std::string, double> strategy_weights = default_weights();
    double qualifier_probability = 0.3;
    int max_attempts_per_instance = 200;
    unsigned threads = 1; // does not affect output

    static std::map<std::string, double> default_weights();

    /// Throws Error(MalformedInput) on unknown strategy names, negative weights, an all-zero
    /// stage, max_depth < 1 or a probability outside [0, 1].
    void validate() const;

    static GeneratorConfig from_json(const nlohmann::json& j);
    static GeneratorConfig load_file(const std::filesystem::path& path);
    nlohmann::json to_json() const;
};

enum class Placeholder { E, C, K, OP, V, QK, QV, P };

/// Surface text bound to one placeholder of a template.
struct TemplateSlot {
    Placeholder placeholder;
    std::string surface;
};

/// Replace "<E>", "<C>", ... in order of appearance by the slots of that placeholder.
/// Throws Error(NoViableSample) if a placeholder is left unbound or a slot is unused.
std::string fill_template(std::string_view templ, const std::vector<TemplateSlot>& slots);

struct InstanceMeta {
    std::string question_type;
    int hop_count = 0;
    bool uses_qualifier = false;
    bool is_comparison = false;
    bool is_logical = false;
    bool is_count = false;
    bool is_verify = false;
    bool padded = false;
    std::vector<std::string> locating; // locating strategies used, outermost first
};

struct Instance {
    std::string question;
    Program program{std::vector<FunctionCall>{{Function::FindAll, {}, {}}, {Function::Count, {}, {0}}}};
    std::string sparql;
    std::vector<std::string> choices;
    std::string answer;
    InstanceMeta meta;
};

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);
/// One JSON object per line, keys in the order question, program, sparql, choices, answer, meta.
std::string instance_to_line(const Instance& inst);

/// Meta fields recomputed from program structure (question_type and padded are left empty).
InstanceMeta program_meta(const Program& program);
/// Relate calls plus attribute and qualifier filter calls.
int hop_count(const Program& program);

/// Rewrites a canonical question. The default hook returns it unchanged.
using ParaphraseHook = std::function<std::string(const std::string& question)>;

/// Discards and failures observed while generating.
struct GenerationStats {
    struct Tally {
        std::size_t attempts = 0;
        std::size_t emitted = 0;
        std::map<std::string, std::size_t> failures; // reason -> count
    };
    std::map<std::string, Tally> per_strategy;
    std::size_t channel_mismatches = 0; // interpreter succeeded but SPARQL disagreed
    std::size_t intended_mismatches = 0; // execution disagreed with the sampled answer

    void merge(const GenerationStats& other);
    nlohmann::json to_json() const;
};

/// Result of checking a composed candidate: the finished instance or the discard reason.
struct Candidate {
    ProgramNode root;
    std::string question;
    std::string question_type;
    std::optional<std::string> intended_answer;
    std::vector<std::string> locating;
};

class Generator {
public:
    Generator(const KnowledgeBase& kb, GeneratorConfig config, TemplateBank templates = TemplateBank::defaults());

    const GeneratorConfig& config() const { return config_; }
    const KnowledgeBase& kb() const { return kb_; }
    void set_paraphrase_hook(ParaphraseHook hook) { paraphrase_ = std::move(hook); }

    /// Instance number `index` of the run. Throws Error(ExhaustedAttempts) with per-strategy tallies.
    Instance generate_one(std::uint64_t index, GenerationStats* stats = nullptr) const;

    /// Instances 0..count-1 in index order, computed on config.threads workers.
    std::vector<Instance> generate(GenerationStats* stats = nullptr) const;
    /// Same, streamed as JSON lines.
    void write_jsonl(std::ostream& out, GenerationStats* stats = nullptr) const;

    /// Uniqueness and channel checks plus choices for a composed candidate. Returns nothing and
    /// sets `reason` when the candidate must be discarded.
    std::optional<Instance> finalize(const Candidate& c, Rng& rng, std::string* reason = nullptr,
                                     GenerationStats* stats = nullptr) const;

    /// Ten choices containing `answer`: yes/no plus 8 "unknown" for Verify programs, otherwise
    /// abridged-query candidates padded with same-kind KB values. Sets `padded`.
    std::vector<std::string> make_choices(const Program& program, const sparql::Query& query, const std::string& answer,
                                          Rng& rng, bool* padded = nullptr) const;

    const sparql::Evaluator& evaluator() const { return evaluator_; }
    const Interpreter& interpreter() const { return interpreter_; }

private:
    friend class Sampler;

    const KnowledgeBase& kb_;
    GeneratorConfig config_;
    TemplateBank templates_;
    Interpreter interpreter_;
    sparql::Evaluator evaluator_;
    ParaphraseHook paraphrase_;
    // pools used by sampling and padding
    std::map<std::string, std::vector<Value>> attribute_values_; // key -> distinct values, sorted
    std::map<std::string, std::vector<Value>> qualifier_values_; // qualifier key -> distinct values
    std::vector<std::string> entity_names_;                       // distinct, sorted
    std::vector<std::string> predicates_;                         // distinct, sorted
    std::vector<std::pair<EntityIndex, std::uint32_t>> attribute_facts_;
    std::vector<std::pair<EntityIndex, std::uint32_t>> qualified_attribute_facts_;
    std::vector<RelationIndex> qualified_relations_;
    std::vector<EntityIndex> typed_entities_; // entities with at least one concept
};

/// Summary of an instance collection: type and hop histograms, average lengths, frequent answers.
struct Statistics {
    std::size_t count = 0;
    std::map<std::string, std::size_t> question_types;
    std::map<int, std::size_t> hop_counts;
    double avg_question_tokens = 0;
    double avg_program_calls = 0;
    double avg_sparql_tokens = 0;
    std::size_t padded = 0;
    std::vector<std::pair<std::string, std::size_t>> top_answers;

    nlohmann::json to_json() const;
    std::string to_text() const;
};

/// Throws Error(MalformedInput) on an empty collection.
Statistics report_statistics(const std::vector<Instance>& instances, std::size_t top_k = 10);

} // namespace kopl
