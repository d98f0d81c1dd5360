#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kopl/value.hpp"

namespace kopl {

enum class Function {
    FindAll,
    Find,
    FilterConcept,
    FilterStr,
    FilterNum,
    FilterYear,
    FilterDate,
    QFilterStr,
    QFilterNum,
    QFilterYear,
    QFilterDate,
    Relate,
    And,
    Or,
    QueryName,
    Count,
    QueryAttr,
    QueryAttrUnderCondition,
    QueryRelation,
    SelectBetween,
    SelectAmong,
    VerifyStr,
    VerifyNum,
    VerifyYear,
    VerifyDate,
    QueryAttrQualifier,
    QueryRelationQualifier,
};

inline constexpr std::size_t kFunctionCount = 27;

enum class DataKind { Entities, EntitiesWithFacts, Value, String, Number, Boolean, Predicate };

std::string_view data_kind_name(DataKind kind);

/// What a textual input denotes; drives the token-domain checks of typecheck.
enum class ArgRole {
    Name,        // entity or concept name
    Key,         // attribute key
    QKey,        // qualifier key
    Pred,        // relation predicate
    Dir,         // forward | backward
    Op,          // = | != | < | >
    BetweenOp,   // greater | less
    AmongOp,     // largest | smallest
    TypedValue,  // parsed as Signature::value_kind
    AnyValue,    // type decided by the KB value it is compared with
};

struct Signature {
    Function function;
    std::string_view name;
    std::vector<DataKind> inputs;
    std::vector<ArgRole> textual;
    DataKind output;
    std::optional<ValueKind> value_kind; // for TypedValue arguments
};

const Signature& signature(Function f);
std::string_view function_name(Function f);
std::optional<Function> parse_function(std::string_view name);
std::span<const Function> all_functions();

bool is_verify(Function f);
bool is_attribute_filter(Function f);
bool is_qualifier_filter(Function f);

/// One step f(a, b) of a program: textual inputs a and indices b of earlier calls.
struct FunctionCall {
    Function function = Function::FindAll;
    std::vector<std::string> textual_inputs;
    std::vector<int> functional_inputs;

    bool operator==(const FunctionCall&) const = default;
};

/// Tree form used while composing programs; flattened to post-order by Program::from_tree.
struct ProgramNode {
    Function function = Function::FindAll;
    std::vector<std::string> textual_inputs;
    std::vector<ProgramNode> children;
};

/// Post-order list of calls forming a binary tree rooted at the last call.
/// Construction validates arities, index ranges, and the post-order/single-consumer shape.
class Program {
public:
    explicit Program(std::vector<FunctionCall> calls);
    static Program from_tree(const ProgramNode& root);

    const std::vector<FunctionCall>& calls() const { return calls_; }
    std::size_t size() const { return calls_.size(); }
    const FunctionCall& operator[](std::size_t i) const { return calls_[i]; }
    const FunctionCall& root() const { return calls_.back(); }

    ProgramNode to_tree() const;

    bool operator==(const Program&) const = default;

private:
    std::vector<FunctionCall> calls_;
};

/// Flat text form: "Find <arg> LeBron James <func> Relate <arg> drafted by <arg> forward <func> ...".
Program parse_text(std::string_view text);
std::string serialize(const Program& program);

/// Structured form: [{"function": ..., "inputs": [...], "dependencies": [...]}, ...].
nlohmann::json program_to_json(const Program& program);
Program program_from_json(const nlohmann::json& j);

/// Accepts either the JSON form (leading '[') or the flat text form.
Program parse_program(std::string_view text);

/// Output kind of every call. Throws CallError(KindMismatch | BadToken).
std::vector<DataKind> typecheck(const Program& program);

} // namespace kopl
